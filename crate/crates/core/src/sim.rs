//! Exact event-driven simulation of the hybrid S(E)IR process.
//!
//! A susceptible vertex with `m` infected neighbors leaves `S` at rate
//! `m * beta(t)`, going to `E` with probability `alpha` and to `I` otherwise.
//! Exposed vertices become infected at rate `lambda(t)` and infected vertices
//! recover at rate `rho(t)`. `alpha = 0` is SIR, `alpha = 1` is SEIR.
//!
//! Each vertex holds at most one pending candidate event, sampled by thinning
//! a homogeneous Poisson proposal whose intensity is the rate's upper bound
//! over a lookahead window. Candidates of susceptible vertices are redrawn
//! whenever the number of infected neighbors changes; the stale heap entry is
//! skipped via a per-vertex version counter.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::graphs::SparseGraph;
use crate::harness::fmt_float;
use crate::rates::RateFunction;

/// Lookahead window for thinning, in time units.
pub const THINNING_WINDOW: f64 = 1.0;
pub const DEFAULT_GRID_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum State {
    S = 0,
    E = 1,
    I = 2,
    R = 3,
}

impl State {
    pub const ALL: [State; 4] = [State::S, State::E, State::I, State::R];

    pub fn as_char(self) -> char {
        match self {
            State::S => 'S',
            State::E => 'E',
            State::I => 'I',
            State::R => 'R',
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Rates and initial law of the hybrid process.
#[derive(Debug, Clone)]
pub struct EpidemicParams {
    alpha: f64,
    beta: RateFunction,
    rho: RateFunction,
    lambda: RateFunction,
    s0: f64,
    e0: f64,
    i0: f64,
}

impl EpidemicParams {
    pub fn new(
        alpha: f64,
        beta: RateFunction,
        rho: RateFunction,
        lambda: RateFunction,
        s0: f64,
        e0: f64,
        i0: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if !(s0 > 0.0 && s0 < 1.0) {
            return Err(Error::invalid(format!("s0 must lie in (0, 1), got {s0}")));
        }
        if !((0.0..=1.0).contains(&e0) && (0.0..=1.0).contains(&i0)) {
            return Err(Error::invalid("e0 and i0 must lie in [0, 1]"));
        }
        if (s0 + e0 + i0 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "initial probabilities sum to {}, expected 1",
                s0 + e0 + i0
            )));
        }
        if alpha == 0.0 && e0 != 0.0 {
            return Err(Error::invalid("SIR dynamics (alpha = 0) require e0 = 0"));
        }
        Ok(Self {
            alpha,
            beta,
            rho,
            lambda,
            s0,
            e0,
            i0,
        })
    }

    /// SIR parameters; `lambda` is unused and set to 1.
    pub fn sir(beta: RateFunction, rho: RateFunction, s0: f64) -> Result<Self> {
        let lambda = RateFunction::constant(1.0)?;
        Self::new(0.0, beta, rho, lambda, s0, 0.0, 1.0 - s0)
    }

    /// SEIR parameters.
    pub fn seir(
        beta: RateFunction,
        rho: RateFunction,
        lambda: RateFunction,
        s0: f64,
        e0: f64,
        i0: f64,
    ) -> Result<Self> {
        Self::new(1.0, beta, rho, lambda, s0, e0, i0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> &RateFunction {
        &self.beta
    }
    pub fn rho(&self) -> &RateFunction {
        &self.rho
    }
    pub fn lambda(&self) -> &RateFunction {
        &self.lambda
    }
    pub fn s0(&self) -> f64 {
        self.s0
    }
    pub fn e0(&self) -> f64 {
        self.e0
    }
    pub fn i0(&self) -> f64 {
        self.i0
    }

    /// Draw an initial state from `p0`.
    pub fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        let u: f64 = rng.random();
        if u < self.s0 {
            State::S
        } else if u < self.s0 + self.e0 {
            State::E
        } else {
            State::I
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub vertex: u32,
    pub from: State,
    pub to: State,
}

/// Event log and gridded state fractions of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    n: usize,
    t_max: f64,
    initial_states: Vec<State>,
    initial_counts: [u32; 4],
    events: Vec<Event>,
    /// Compartment counts right after each event.
    counts_after: Vec<[u32; 4]>,
    grid: Vec<f64>,
    fractions: Vec<[f64; 4]>,
    extinction_time: Option<f64>,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn t_max(&self) -> f64 {
        self.t_max
    }
    pub fn events(&self) -> &[Event] {
        &self.events
    }
    pub fn initial_states(&self) -> &[State] {
        &self.initial_states
    }
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    /// `(s, e, i, r)` at each grid time.
    pub fn grid_fractions(&self) -> &[[f64; 4]] {
        &self.fractions
    }
    /// First time with no exposed and no infected vertex, if reached.
    pub fn extinction_time(&self) -> Option<f64> {
        self.extinction_time
    }

    fn counts_at(&self, t: f64) -> [u32; 4] {
        let idx = self.events.partition_point(|e| e.time <= t);
        if idx == 0 {
            self.initial_counts
        } else {
            self.counts_after[idx - 1]
        }
    }

    fn to_fractions(&self, c: [u32; 4]) -> [f64; 4] {
        let n = self.n as f64;
        c.map(|x| x as f64 / n)
    }

    /// Exact `(s, e, i, r)` at time `t`, from the event log.
    pub fn fractions_at(&self, t: f64) -> Result<[f64; 4]> {
        if !(0.0..=self.t_max).contains(&t) {
            return Err(Error::OutsideHorizon {
                t,
                horizon: self.t_max,
            });
        }
        Ok(self.to_fractions(self.counts_at(t)))
    }

    /// Fraction of vertices that ever left `S`. Requires extinction.
    pub fn final_outbreak(&self) -> Result<f64> {
        match self.extinction_time {
            Some(t) => Ok(1.0 - self.to_fractions(self.counts_at(t))[0]),
            None => Err(Error::NotExtinct { t_max: self.t_max }),
        }
    }

    /// Replays the log against `g` and checks the structural invariants:
    /// monotone per-vertex paths, consistent `from` states, the `alpha`
    /// branch restrictions, and an infected neighbor behind every infection.
    pub fn check_invariants(&self, g: &SparseGraph, alpha: f64) -> Result<()> {
        let fail = |msg: String| Err(Error::invalid(msg));
        let mut state = self.initial_states.clone();
        let mut last_time = 0.0;
        for ev in &self.events {
            let v = ev.vertex as usize;
            if ev.time < last_time {
                return fail(format!("events out of order at t = {}", ev.time));
            }
            last_time = ev.time;
            if state[v] != ev.from || ev.to <= ev.from {
                return fail(format!("bad transition {} -> {} at vertex {v}", ev.from, ev.to));
            }
            match (ev.from, ev.to) {
                (State::S, State::E) if alpha == 0.0 => return fail("S->E with alpha = 0".into()),
                (State::S, State::I) if alpha == 1.0 => return fail("S->I with alpha = 1".into()),
                (State::S, State::E) | (State::S, State::I) => {
                    let pressured = g
                        .neighbors(v)
                        .iter()
                        .any(|&w| state[w as usize] == State::I);
                    if !pressured {
                        return fail(format!("vertex {v} infected at {} with no infected neighbor", ev.time));
                    }
                }
                (State::E, State::I) | (State::I, State::R) => {}
                (a, b) => return fail(format!("illegal jump {a} -> {b}")),
            }
            state[v] = ev.to;
        }
        for (a, b) in self.grid_fractions().iter().zip(&self.grid) {
            let total: f64 = a.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return fail(format!("fractions at t = {b} sum to {total}"));
            }
        }
        Ok(())
    }

    /// CSV with header `t,s,e,i,r` at the grid times.
    pub fn write_grid_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,s,e,i,r")?;
        for (t, f) in self.grid.iter().zip(&self.fractions) {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_float(*t),
                fmt_float(f[0]),
                fmt_float(f[1]),
                fmt_float(f[2]),
                fmt_float(f[3])
            )?;
        }
        Ok(())
    }

    /// CSV with header `time,vertex,from,to`.
    pub fn write_events_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time,vertex,from,to")?;
        for e in &self.events {
            writeln!(out, "{},{},{},{}", fmt_float(e.time), e.vertex, e.from, e.to)?;
        }
        Ok(())
    }
}

/// Times `0, step, 2 step, ...` up to and including `t_max`.
pub fn time_grid(t_max: f64, step: f64) -> Vec<f64> {
    let n = (t_max / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    if t_max - grid[n] > 1e-9 * step {
        grid.push(t_max);
    }
    grid
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    time: f64,
    vertex: u32,
    version: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    // reversed: BinaryHeap is a max-heap, we pop the earliest (time, vertex)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.vertex.cmp(&self.vertex))
            .then_with(|| other.version.cmp(&self.version))
    }
}

/// Next point after `from` of a Poisson process with intensity
/// `scale * rate(t)`, or `None` if it falls after `t_max`.
fn next_arrival<R: Rng + ?Sized>(
    rate: &RateFunction,
    scale: f64,
    from: f64,
    t_max: f64,
    rng: &mut R,
) -> Option<f64> {
    if let Some(v) = rate.as_constant() {
        let t = from + Exp::new(scale * v).unwrap().sample(rng);
        return (t <= t_max).then_some(t);
    }
    let mut t = from;
    while t < t_max {
        let end = (t + THINNING_WINDOW).min(t_max);
        let bound = scale * rate.upper_bound(t, end);
        let dt = Exp::new(bound).unwrap().sample(rng);
        if t + dt > end {
            t = end;
            continue;
        }
        t += dt;
        if rng.random::<f64>() * bound <= scale * rate.evaluate(t) {
            return Some(t);
        }
    }
    None
}

/// Simulate on `g` with i.i.d. initial states drawn from the params' `p0`.
pub fn simulate(
    g: &SparseGraph,
    p: &EpidemicParams,
    t_max: f64,
    grid_step: f64,
    seed: u64,
) -> Result<Trajectory> {
    simulate_with_rng(g, p, t_max, grid_step, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn simulate_with_rng<R: Rng + ?Sized>(
    g: &SparseGraph,
    p: &EpidemicParams,
    t_max: f64,
    grid_step: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    let initial: Vec<State> = (0..g.n()).map(|_| p.sample_initial(rng)).collect();
    simulate_from_states(g, p, initial, t_max, grid_step, rng)
}

/// Simulate from a given initial configuration. States must be `S`, `E`
/// or `I`.
pub fn simulate_from_states<R: Rng + ?Sized>(
    g: &SparseGraph,
    p: &EpidemicParams,
    initial: Vec<State>,
    t_max: f64,
    grid_step: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!("t_max must be positive, got {t_max}")));
    }
    if !(grid_step > 0.0) {
        return Err(Error::invalid(format!("grid step must be positive, got {grid_step}")));
    }
    let n = g.n();
    if initial.len() != n {
        return Err(Error::invalid("initial state vector length differs from n"));
    }
    if initial.contains(&State::R) {
        return Err(Error::invalid("initial states must not be R"));
    }
    if p.alpha == 0.0 && initial.contains(&State::E) {
        return Err(Error::invalid("SIR dynamics cannot start in E"));
    }

    let mut state = initial.clone();
    let mut counts = [0u32; 4];
    for s in &state {
        counts[*s as usize] += 1;
    }
    let initial_counts = counts;
    let mut infected_nbrs = vec![0u32; n];
    for v in 0..n {
        if state[v] == State::I {
            for &w in g.neighbors(v) {
                infected_nbrs[w as usize] += 1;
            }
        }
    }

    let mut version = vec![0u32; n];
    let mut heap = BinaryHeap::new();

    let arm = |v: usize,
                   now: f64,
                   state: &[State],
                   infected_nbrs: &[u32],
                   version: &mut [u32],
                   heap: &mut BinaryHeap<Candidate>,
                   rng: &mut R| {
        version[v] = version[v].wrapping_add(1);
        let next = match state[v] {
            State::S if infected_nbrs[v] > 0 => {
                next_arrival(&p.beta, infected_nbrs[v] as f64, now, t_max, rng)
            }
            State::E => next_arrival(&p.lambda, 1.0, now, t_max, rng),
            State::I => next_arrival(&p.rho, 1.0, now, t_max, rng),
            _ => None,
        };
        if let Some(time) = next {
            heap.push(Candidate {
                time,
                vertex: v as u32,
                version: version[v],
            });
        }
    };

    for v in 0..n {
        arm(v, 0.0, &state, &infected_nbrs, &mut version, &mut heap, rng);
    }

    let mut events = Vec::new();
    let mut counts_after = Vec::new();
    let mut extinction_time = (counts[1] + counts[2] == 0).then_some(0.0);

    while extinction_time.is_none() {
        let Some(c) = heap.pop() else { break };
        let v = c.vertex as usize;
        if c.version != version[v] {
            continue;
        }
        let from = state[v];
        let to = match from {
            State::S => {
                if p.alpha > 0.0 && (p.alpha == 1.0 || rng.random::<f64>() < p.alpha) {
                    State::E
                } else {
                    State::I
                }
            }
            State::E => State::I,
            State::I => State::R,
            State::R => unreachable!("recovered vertices hold no candidate"),
        };
        state[v] = to;
        counts[from as usize] -= 1;
        counts[to as usize] += 1;
        events.push(Event {
            time: c.time,
            vertex: c.vertex,
            from,
            to,
        });
        counts_after.push(counts);

        arm(v, c.time, &state, &infected_nbrs, &mut version, &mut heap, rng);
        let delta: i32 = match (from, to) {
            (_, State::I) => 1,
            (State::I, _) => -1,
            _ => 0,
        };
        if delta != 0 {
            for &w in g.neighbors(v) {
                let w = w as usize;
                infected_nbrs[w] = (infected_nbrs[w] as i32 + delta) as u32;
                if state[w] == State::S {
                    arm(w, c.time, &state, &infected_nbrs, &mut version, &mut heap, rng);
                }
            }
        }
        if counts[1] + counts[2] == 0 {
            extinction_time = Some(c.time);
        }
    }

    let grid = time_grid(t_max, grid_step);
    let mut tr = Trajectory {
        n,
        t_max,
        initial_states: initial,
        initial_counts,
        events,
        counts_after,
        grid,
        fractions: Vec::new(),
        extinction_time,
    };
    tr.fractions = tr.grid.iter().map(|&t| tr.to_fractions(tr.counts_at(t))).collect();
    Ok(tr)
}
