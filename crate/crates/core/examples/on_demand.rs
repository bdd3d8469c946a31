//! Periodic refresh against refresh-on-access for a rarely read object.

use freshsim::engine::run;
use freshsim::workload::config_from_value;
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for policy in ["periodic", "on_demand"] {
        let config = config_from_value(&json!({
            "horizon": 1000, "mode": "multiversion", "seed": 11,
            "objects": [{"id": "x", "vi": 20, "period": 10, "cost": 1,
                         "process": {"kind": "random_walk", "start": 0.0, "step_sigma": 1.0},
                         "policy": {"kind": policy}}],
            "transactions": [{"id": "reader", "read_set": ["x"], "retrieval": {"x": 0}, "analysis": {"x": 2},
                              "deadline": 50, "arrival": {"kind": "poisson", "start": 0, "mean_gap": 100.0},
                              "retrieval_mode": "store"}]
        }))?;
        let out = run(&config)?;
        let x = out.report.object("x").expect("object exists");
        let all = &out.report.overall;
        println!(
            "{policy:<10} updates={:<4} utilization={:.3} reads={} committed={} mean staleness={:.2}",
            x.updates_performed, x.update_utilization, all.released, all.committed, x.mean_staleness
        );
    }
    Ok(())
}
