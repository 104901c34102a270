use std::path::Path;
use std::process::Command;

fn netepi(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_netepi")).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) {
    let out = netepi(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn every_subcommand_writes_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("simulate", "simulate.csv", "t,s,e,i,r"),
        ("ode", "ode.csv", "t,f_S,f_I,F_I,s_inf,i_inf"),
        ("outbreak", "outbreak.csv", "kappa,r,s0,method,F,s_final,outbreak,residual"),
        ("compare-mf", "compare_mf.csv", "kappa,r,s0,sigma,sigma_mf,outbreak,outbreak_mf"),
        ("sweep-periodic", "periodic_sweep.csv", "omega,delta,A,outbreak"),
        ("ratio-scenarios", "ratio_scenarios_summary.csv", "scenario,F,s_final,r_hat"),
        ("effective-rate", "effective_rate.csv", "label,F,s_final,r_hat,s_final_constant"),
    ];
    for (cmd, file, header) in cases {
        let out = dir.path().join(cmd);
        run_ok(&[cmd, "--out", out.to_str().unwrap()]);
        let text = read(&out, file);
        assert_eq!(text.lines().next(), Some(header), "{cmd}");
        assert!(text.lines().count() > 1 && !text.contains('\r'), "{cmd}");
        let meta: serde_json::Value =
            serde_json::from_str(&read(&out, &file.replace("_summary", "").replace(".csv", ".meta.json"))).unwrap();
        assert!(meta["config"].is_object());
    }
}

#[test]
fn sim_vs_ode_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"graph":{"kind":"er","n":80,"mean":2.0},"trials":20,"t_max":5.0}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run_ok(&["sim-vs-ode", "--config", cfg, "--seed", "5", "--threads", "1", "--out", a.to_str().unwrap()]);
    run_ok(&["sim-vs-ode", "--config", cfg, "--seed", "5", "--threads", "4", "--out", b.to_str().unwrap()]);
    assert_eq!(read(&a, "sim_vs_ode.csv"), read(&b, "sim_vs_ode.csv"));
    let c = dir.path().join("c");
    run_ok(&["sim-vs-ode", "--config", cfg, "--seed", "6", "--out", c.to_str().unwrap()]);
    assert_ne!(read(&a, "sim_vs_ode.csv"), read(&c, "sim_vs_ode.csv"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    for text in [r#"{"trials":0}"#, r#"{"epidemic":{"s0":1.5}}"#, "not json", r#"{"kind":"ode"}"#] {
        std::fs::write(&bad, text).unwrap();
        let out = netepi(&["sim-vs-ode", "--config", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{text}");
    }
    assert_eq!(netepi(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(netepi(&["ode", "--config", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(netepi(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_with_two() {
    // critical 3-regular epidemic from a tiny seed does not die out within
    // the integration horizon
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"epidemic":{"s0":0.9999999},"theta":{"kind":"regular","k":3},"extinction_eps":1e-300}"#,
    )
    .unwrap();
    let out = netepi(&["effective-rate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn outbreak_uses_configured_degree_law() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"epidemic":{"s0":0.9,"beta":{"kind":"constant","value":2.0}},"theta":{"kind":"poisson","mean":3.0}}"#,
    )
    .unwrap();
    run_ok(&["outbreak", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    let text = read(dir.path(), "outbreak.csv");
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "");
    assert_eq!(row[1], "0.5");
    let outbreak: f64 = row[6].parse().unwrap();
    assert!(outbreak > 0.1 && outbreak < 1.0);
    assert_eq!(text.lines().count(), 2);
}
