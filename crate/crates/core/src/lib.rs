//! Epidemics on sparse random graphs.
//!
//! The crate covers three views of the same process:
//!
//! - exact event-driven simulation of the hybrid S(E)IR Markov chain on a
//!   finite [`graphs::SparseGraph`] ([`sim`]),
//! - the deterministic limit ODE systems describing the fractions of
//!   susceptible, exposed and infected individuals as the graph size grows
//!   ([`ode`]),
//! - fixed-point equations for the final outbreak size ([`outbreak`]).
//!
//! [`harness`] ties them together into Monte Carlo experiments that write
//! CSV tables.

pub mod dist;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod ode;
pub mod outbreak;
pub mod rates;
pub mod sim;

pub use dist::DegreeDistribution;
pub use error::{Error, Result};
pub use graphs::SparseGraph;
pub use ode::{LimitModel, LimitOptions, LimitSolution};
pub use outbreak::{OutbreakMethod, OutbreakResult};
pub use rates::RateFunction;
pub use sim::{EpidemicParams, State, Trajectory};
