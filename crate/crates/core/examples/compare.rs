//! Paired runs of one workload under both freshness modes and several update
//! policies. Every variant shares the seed, so all of them see the same value
//! trajectories. Runs execute on separate threads.

use freshsim::engine::run;
use freshsim::workload::config_from_value;
use freshsim::{csv_rows, emit_csv, FreshnessMode, PolicyConfig, RunLabel};
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = config_from_value(&json!({
        "horizon": 400, "mode": "classical", "seed": 99,
        "objects": [
            {"id": "temp", "vi": 8, "period": 4, "cost": 1,
             "process": {"kind": "random_walk", "start": 20.0, "step_sigma": 0.2}, "policy": {"kind": "periodic"}},
            {"id": "load", "vi": 10, "period": 5, "cost": 1,
             "process": {"kind": "sinusoid", "amplitude": 5.0, "period_ticks": 80.0}, "policy": {"kind": "periodic"}}
        ],
        "transactions": [
            {"id": "dash", "read_set": ["temp", "load"], "retrieval": {"temp": 0, "load": 0},
             "analysis": {"temp": 3, "load": 3}, "deadline": 25,
             "arrival": {"kind": "periodic", "start": 1, "period": 10}, "retrieval_mode": "store"},
            {"id": "audit", "read_set": ["load"], "retrieval": {"load": 2}, "analysis": {"load": 5},
             "deadline": 40, "arrival": {"kind": "poisson", "start": 0, "mean_gap": 30.0}, "retrieval_mode": "source"}
        ]
    }))?;

    let mut variants = Vec::new();
    for mode in [FreshnessMode::Classical, FreshnessMode::MultiVersion] {
        for policy in ["periodic", "mk_firm:1:2", "similarity:0.3"] {
            let mut c = base.clone();
            c.mode = mode;
            let p = PolicyConfig::from_compact(policy)?;
            c.objects.iter_mut().for_each(|o| o.policy = p.clone());
            variants.push(c);
        }
    }

    let outputs = std::thread::scope(|s| {
        let handles: Vec<_> = variants.iter().map(|c| s.spawn(move || run(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut rows = Vec::new();
    for (c, out) in variants.iter().zip(&outputs) {
        let label = RunLabel {
            scenario: "dashboard".into(),
            mode: c.mode.as_str().into(),
            policy: c.policy_label(),
        };
        rows.extend(csv_rows(&out.report, &label).into_iter().filter(|r| r[3] == "all"));
    }
    print!("{}", emit_csv(&rows));
    Ok(())
}
