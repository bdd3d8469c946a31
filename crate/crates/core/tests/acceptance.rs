//! Acceptance criteria, one line of output per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};

use common::{engine_view, gen, oracle};
use freshsim::engine::Outcome;
use freshsim::policy::{elastic_rescale, ElasticTask};
use freshsim::trace::{RestartCause, TraceEvent};
use freshsim::workload::{config_from_value, set_path};
use freshsim::{csv_rows, emit_csv, run, RunLabel, SimConfig};

/// Restart count for the infeasible source-mode scenario, obtained from the
/// tick-level oracle: attempts start at 0, 6, 12, 18 and 24, each one is
/// cut off when its sample expires at start + 6, and the fifth expiry at 30
/// is processed before the deadline event at the same tick.
const RESTART_CYCLE_GOLDEN: usize = 5;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn scenario_value(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(scenario(name)).unwrap()).unwrap()
}

fn config(doc: &Value) -> SimConfig {
    config_from_value(doc).unwrap()
}

fn restart_cycle() -> Check {
    let cfg = config(&scenario_value("restart_cycle.json"));
    let reference = oracle::simulate(&cfg);
    let golden = &reference.instances[0];
    ensure(golden.end == oracle::End::Missed(30), || {
        format!("oracle ends with {:?}", golden.end)
    })?;
    ensure(golden.restarts.len() == RESTART_CYCLE_GOLDEN, || {
        format!(
            "oracle counts {} restarts, pinned {RESTART_CYCLE_GOLDEN}",
            golden.restarts.len()
        )
    })?;

    let out = run(&cfg).map_err(|e| e.to_string())?;
    let txn = &out.outcomes[0];
    ensure(txn.outcome == Outcome::Missed(30), || {
        format!("engine ends with {:?}", txn.outcome)
    })?;
    let report = out.report.class("report").unwrap();
    ensure(report.vi_restart_count == RESTART_CYCLE_GOLDEN as u64, || {
        format!("vi_restart_count {}", report.vi_restart_count)
    })?;
    let times: Vec<_> = txn.restarts.iter().map(|r| r.0).collect();
    ensure(times == [6, 12, 18, 24, 30], || format!("restart times {times:?}"))?;
    Ok(format!("missed at 30 after {} restarts", report.vi_restart_count))
}

fn mv_continuation() -> Check {
    let mut doc = scenario_value("mv_continuation.json");
    doc["mode"] = json!("multiversion");
    let mv = run(&config(&doc)).map_err(|e| e.to_string())?;
    let t = &mv.outcomes[0];
    ensure(t.outcome == Outcome::Committed(7), || {
        format!("multiversion: {:?}", t.outcome)
    })?;
    ensure(t.restarts.is_empty(), || {
        format!("multiversion restarts {:?}", t.restarts)
    })?;
    ensure(mv.report.overall.vi_restart_count == 0, || {
        "multiversion vi_restarts > 0".into()
    })?;

    doc["mode"] = json!("classical");
    let cl = run(&config(&doc)).map_err(|e| e.to_string())?;
    let t = &cl.outcomes[0];
    ensure(t.restarts == [(5, RestartCause::Superseded)], || {
        format!("classical restarts {:?}", t.restarts)
    })?;
    ensure(t.outcome == Outcome::Committed(9), || {
        format!("classical: {:?}", t.outcome)
    })?;
    ensure(cl.report.overall.vi_restart_count > 0, || {
        "classical vi_restarts = 0".into()
    })?;
    Ok("multiversion commits at 7 with 0 restarts; classical restarts at 5, commits at 9".into())
}

fn admission_gate() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut doc = scenario_value("restart_cycle.json");
    let bad = dir.path().join("vi5.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    set_path(&mut doc, "objects[0].vi", json!(6))?;
    let good = dir.path().join("vi6.json");
    std::fs::write(&good, doc.to_string()).unwrap();
    let code5 = freshsim::cli::cli(["freshsim", "check", bad.to_str().unwrap()]);
    let code6 = freshsim::cli::cli(["freshsim", "check", good.to_str().unwrap()]);
    ensure(code5 == 1 && code6 == 0, || {
        format!("exit codes vi=5 -> {code5}, vi=6 -> {code6}")
    })?;
    Ok("check exits 1 at vi=5 and 0 at vi=6".into())
}

fn feasible_commit() -> Check {
    for seed in 0..200 {
        let cfg = gen::isolated_feasible(seed);
        let out = run(&cfg).map_err(|e| e.to_string())?;
        let t = &out.outcomes[0];
        ensure(
            matches!(t.outcome, Outcome::Committed(_)) && t.restarts.is_empty(),
            || format!("seed {seed}: {:?} restarts {:?}", t.outcome, t.restarts),
        )?;
    }
    Ok("200/200 isolated feasible transactions commit on the first attempt".into())
}

fn mv_sweep() -> Result<Vec<freshsim::RunOutput>, String> {
    (0..200)
        .map(|seed| run(&gen::multiversion(seed)).map_err(|e| format!("seed {seed}: {e}")))
        .collect()
}

fn mv_zero_restarts(outs: &[freshsim::RunOutput]) -> Check {
    let total: u64 = outs.iter().map(|o| o.report.overall.vi_restart_count).sum();
    let released: u64 = outs.iter().map(|o| o.report.overall.released).sum();
    ensure(total == 0, || format!("{total} restarts"))?;
    Ok(format!("200 configs, {released} transactions, 0 restarts"))
}

fn on_demand_doc(policy: &str) -> Value {
    json!({
        "horizon": 1000, "mode": "multiversion", "seed": 11,
        "objects": [{"id": "x", "vi": 20, "period": 10, "cost": 1,
                     "process": {"kind": "random_walk", "start": 0.0, "step_sigma": 1.0},
                     "policy": {"kind": policy}}],
        "transactions": [{"id": "reader", "read_set": ["x"], "retrieval": {"x": 0}, "analysis": {"x": 2},
                          "deadline": 50, "arrival": {"kind": "poisson", "start": 0, "mean_gap": 100.0},
                          "retrieval_mode": "store"}]
    })
}

fn on_demand_savings() -> Check {
    let periodic = run(&config(&on_demand_doc("periodic"))).map_err(|e| e.to_string())?;
    let on_demand = run(&config(&on_demand_doc("on_demand"))).map_err(|e| e.to_string())?;
    let p = periodic.report.object("x").unwrap().updates_performed;
    let od = on_demand.report.object("x").unwrap().updates_performed;
    let accesses = on_demand.report.overall.released;
    ensure(p == 1000 / 10 + 1, || format!("periodic performed {p}"))?;
    ensure(od <= accesses, || {
        format!("on-demand performed {od} for {accesses} accesses")
    })?;
    Ok(format!(
        "periodic {p} updates; on-demand {od} updates for {accesses} accesses"
    ))
}

fn decisions(out: &freshsim::RunOutput) -> Vec<(f64, Option<f64>, f64, &'static str)> {
    out.trace
        .records
        .iter()
        .filter_map(|r| match r.event {
            TraceEvent::Decision {
                sampled,
                reference,
                effective,
                decision,
                ..
            } => Some((sampled, reference, effective, decision)),
            _ => None,
        })
        .collect()
}

fn single_object(policy: Value, horizon: u64) -> SimConfig {
    config(&json!({
        "horizon": horizon, "mode": "multiversion", "seed": 2024,
        "objects": [{"id": "x", "vi": 3, "period": 1, "cost": 0,
                     "process": {"kind": "random_walk", "start": 50.0, "step_sigma": 0.3},
                     "policy": policy}],
        "transactions": []
    }))
}

fn mk_windows() -> Check {
    for (m, k) in [(1u32, 2u32), (2, 3), (3, 5)] {
        let out = run(&single_object(json!({"kind": "mk_firm", "m": m, "k": k}), 99)).map_err(|e| e.to_string())?;
        let performed: Vec<bool> = decisions(&out).iter().map(|d| d.3 == "perform").collect();
        ensure(performed.len() == 100, || {
            format!("({m},{k}): {} instances", performed.len())
        })?;
        for (i, w) in performed.windows(k as usize).enumerate() {
            let n = w.iter().filter(|&&p| p).count();
            ensure(n >= m as usize, || format!("({m},{k}) window at {i} has {n} performs"))?;
        }
        ensure(performed.iter().any(|p| !p), || format!("({m},{k}) never skipped"))?;
    }
    Ok("every k-window holds at least m performs for (1,2), (2,3), (3,5)".into())
}

fn error_bounds() -> Check {
    let sim = run(&single_object(json!({"kind": "similarity", "delta": 0.5}), 999)).map_err(|e| e.to_string())?;
    let sim = decisions(&sim);
    ensure(sim.len() == 1000, || format!("{} similarity samples", sim.len()))?;
    for (i, &(sampled, _, stored, decision)) in sim.iter().enumerate() {
        let err = (stored - sampled).abs();
        let ok = match decision {
            "skip" => err < 0.5,
            _ => err == 0.0,
        };
        ensure(ok, || format!("similarity sample {i}: {decision} with error {err}"))?;
    }
    let pred = run(&single_object(
        json!({"kind": "prediction", "predictor": "linear", "epsilon": 1.0}),
        999,
    ))
    .map_err(|e| e.to_string())?;
    let pred = decisions(&pred);
    ensure(pred.len() == 1000, || format!("{} prediction samples", pred.len()))?;
    for (i, &(sampled, _, sink, _)) in pred.iter().enumerate() {
        let err = (sink - sampled).abs();
        ensure(err <= 1.0, || format!("prediction sample {i}: divergence {err}"))?;
    }
    let skipped = sim.iter().filter(|d| d.3 == "skip").count();
    let suppressed = pred.iter().filter(|d| d.3 == "suppress").count();
    Ok(format!(
        "1000 samples each; {skipped} skipped within delta, {suppressed} suppressed within epsilon"
    ))
}

fn elastic() -> Check {
    let task = |elasticity| ElasticTask {
        cost: 1,
        period: 4,
        elasticity,
        max_period: 1000,
    };
    for (tasks, expected) in [([task(1.0), task(1.0)], [5, 5]), ([task(1.0), task(0.0)], [7, 4])] {
        let periods = elastic_rescale(&tasks, 0.4).map_err(|e| e.to_string())?;
        ensure(periods == expected, || {
            format!("got {periods:?}, expected {expected:?}")
        })?;
        let util: f64 = periods.iter().map(|&p| 1.0 / p as f64).sum();
        let slack: f64 = periods
            .iter()
            .map(|&p| (1.0 / (p - 1) as f64 - 1.0 / p as f64).max(0.0))
            .sum();
        ensure(util <= 0.4 + slack, || format!("utilization {util} above target"))?;
    }
    Ok("P' = (5,5) and (7,4)".into())
}

fn oracle_equivalence() -> Check {
    let n = 150;
    for seed in 0..n {
        let cfg = gen::small_config(seed);
        let out = run(&cfg).map_err(|e| e.to_string())?;
        let got = engine_view(&out);
        let want = oracle::simulate(&cfg);
        ensure(got == want, || format!("seed {seed} diverges from the oracle"))?;
    }
    Ok(format!("{n} random configs match the tick-level oracle"))
}

fn fingerprint(cfg: &SimConfig) -> Result<(u64, String), String> {
    let out = run(cfg).map_err(|e| e.to_string())?;
    let label = RunLabel {
        scenario: "determinism".into(),
        mode: cfg.mode.as_str().into(),
        policy: cfg.policy_label(),
    };
    Ok((out.trace_hash(), emit_csv(&csv_rows(&out.report, &label))))
}

fn determinism() -> Check {
    let mut configs = vec![
        config(&scenario_value("restart_cycle.json")),
        config(&scenario_value("mv_continuation.json")),
        config(&on_demand_doc("periodic")),
        config(&on_demand_doc("on_demand")),
        single_object(json!({"kind": "similarity", "delta": 0.5}), 999),
        single_object(
            json!({"kind": "prediction", "predictor": "linear", "epsilon": 1.0}),
            999,
        ),
    ];
    for seed in 0..200 {
        configs.push(gen::isolated_feasible(seed));
        configs.push(gen::multiversion(seed));
    }
    for seed in 0..150 {
        configs.push(gen::small_config(seed));
    }
    // Second pass runs concurrently to also rule out any cross-run state.
    let first: Vec<_> = configs.iter().map(fingerprint).collect::<Result<_, _>>()?;
    let second: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .chunks(64)
            .map(|chunk| s.spawn(move || chunk.iter().map(fingerprint).collect::<Result<Vec<_>, _>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .collect::<Result<Vec<_>, _>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure(a == b, || format!("config {i} differs between runs"))?;
    }
    Ok(format!(
        "{} configs reproduce identical trace hashes and CSV bytes",
        configs.len()
    ))
}

fn gc_safety(outs: &[freshsim::RunOutput]) -> Check {
    let mut worst = 0;
    for (seed, out) in outs.iter().enumerate() {
        for (o, stats) in out.store_stats.iter().enumerate() {
            ensure(stats.peak_live_versions <= 1 + stats.max_concurrent_pinners, || {
                format!(
                    "seed {seed} object {o}: peak {} with {} concurrent pinners",
                    stats.peak_live_versions, stats.max_concurrent_pinners
                )
            })?;
            worst = worst.max(stats.peak_live_versions);
        }
    }
    Ok(format!("bound holds on all 200 configs; largest chain {worst}"))
}

fn main() -> ExitCode {
    let sweep = std::panic::catch_unwind(mv_sweep);
    let sweep_result = |f: fn(&[freshsim::RunOutput]) -> Check| match &sweep {
        Ok(Ok(outs)) => f(outs),
        Ok(Err(e)) => Err(e.clone()),
        Err(_) => Err("sweep panicked (pinned version reclaimed?)".into()),
    };
    let results: Vec<(&str, Check)> = vec![
        ("1 infeasible restart cycle", guarded(restart_cycle)),
        ("2 multi-version continuation", guarded(mv_continuation)),
        ("3 admission gate", guarded(admission_gate)),
        ("4 feasible-commit bound", guarded(feasible_commit)),
        ("5 multi-version zero restarts", sweep_result(mv_zero_restarts)),
        ("6 on-demand savings", guarded(on_demand_savings)),
        ("7 (m,k) window property", guarded(mk_windows)),
        ("8 similarity/prediction bounds", guarded(error_bounds)),
        ("9 elastic rescale", guarded(elastic)),
        ("10 oracle equivalence", guarded(oracle_equivalence)),
        ("11 determinism", guarded(determinism)),
        ("12 gc safety", sweep_result(gc_safety)),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn guarded(f: fn() -> Check) -> Check {
    std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()))
}
