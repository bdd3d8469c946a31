//! Elastic period compression: stretch update periods until total update
//! utilization fits a target, then widen validity intervals to match.

use freshsim::engine::effective_objects;
use freshsim::policy::{elastic_rescale, ElasticTask};
use freshsim::workload::config_from_value;
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let task = |elasticity| ElasticTask {
        cost: 1,
        period: 4,
        elasticity,
        max_period: 100,
    };
    println!("equal elasticity: {:?}", elastic_rescale(&[task(1.0), task(1.0)], 0.4)?);
    println!("one rigid task:   {:?}", elastic_rescale(&[task(1.0), task(0.0)], 0.4)?);

    // In a run, elasticity defaults to 1 / (period * access_weight), so
    // rarely read objects absorb most of the stretch.
    let config = config_from_value(&json!({
        "horizon": 500, "mode": "multiversion",
        "objects": [
            {"id": "hot", "vi": 6, "period": 3, "cost": 1, "access_weight": 10.0,
             "process": {"kind": "constant", "value": 0.0}, "policy": {"kind": "elastic", "target_utilization": 0.5}},
            {"id": "cold", "vi": 6, "period": 3, "cost": 1, "access_weight": 0.5,
             "process": {"kind": "constant", "value": 0.0}, "policy": {"kind": "elastic", "target_utilization": 0.5}}
        ],
        "transactions": []
    }))?;
    for (before, after) in config.objects.iter().zip(effective_objects(&config)?) {
        println!(
            "{:<5} period {} -> {}, vi {} -> {}",
            after.id, before.spec.update_period, after.update_period, before.spec.vi, after.vi
        );
    }
    Ok(())
}
