//! Seeded random scenario generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use freshsim::workload::config_from_value;
use freshsim::SimConfig;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn process(r: &mut ChaCha8Rng) -> Value {
    match r.random_range(0..3) {
        0 => json!({"kind": "constant", "value": r.random_range(-5.0..5.0)}),
        1 => json!({"kind": "random_walk", "start": 10.0, "step_sigma": r.random_range(0.0..1.0)}),
        _ => {
            json!({"kind": "sinusoid", "amplitude": 3.0, "period_ticks": r.random_range(5.0..60.0), "phase": 0.5, "offset": 1.0})
        }
    }
}

fn policy(r: &mut ChaCha8Rng) -> Value {
    match r.random_range(0..5) {
        0 | 1 => json!({"kind": "periodic"}),
        2 => json!({"kind": "on_demand"}),
        3 => {
            let k = r.random_range(1..=5);
            json!({"kind": "mk_firm", "m": r.random_range(1..=k), "k": k})
        }
        _ => json!({"kind": "similarity", "delta": r.random_range(0.0..1.5)}),
    }
}

fn arrival(r: &mut ChaCha8Rng, horizon: u64) -> Value {
    match r.random_range(0..3) {
        0 => json!({"kind": "once", "at": r.random_range(0..horizon)}),
        1 => json!({"kind": "periodic", "start": r.random_range(0..20), "period": r.random_range(5..50)}),
        _ => json!({"kind": "poisson", "start": 0, "mean_gap": r.random_range(5.0..40.0)}),
    }
}

/// Small mixed workload: up to three objects and three transaction classes,
/// any mode, any policy the oracle models.
pub fn small_config(seed: u64) -> SimConfig {
    let mut r = rng(seed);
    let horizon = r.random_range(20..=200u64);
    let n_obj = r.random_range(1..=3usize);
    let objects: Vec<Value> = (0..n_obj)
        .map(|i| {
            let period = r.random_range(1..=15u64);
            json!({
                "id": format!("o{i}"),
                "vi": r.random_range(1..=20u64),
                "period": period,
                "cost": r.random_range(0..=period.min(3)),
                "process": process(&mut r),
                "policy": policy(&mut r),
            })
        })
        .collect();
    let n_txn = r.random_range(1..=3usize);
    let transactions: Vec<Value> = (0..n_txn)
        .map(|i| {
            let mut ids: Vec<usize> = (0..n_obj).collect();
            let take = r.random_range(1..=n_obj);
            for j in 0..take {
                let k = r.random_range(j..n_obj);
                ids.swap(j, k);
            }
            ids.truncate(take);
            let store = r.random_bool(0.5);
            let read_set: Vec<String> = ids.iter().map(|o| format!("o{o}")).collect();
            let mut retrieval = serde_json::Map::new();
            let mut analysis = serde_json::Map::new();
            for id in &read_set {
                let lo = if store { 0 } else { 1 };
                retrieval.insert(id.clone(), json!(r.random_range(lo..=4u64)));
                analysis.insert(id.clone(), json!(r.random_range(1..=5u64)));
            }
            json!({
                "id": format!("t{i}"),
                "read_set": read_set,
                "retrieval": retrieval,
                "analysis": analysis,
                "deadline": r.random_range(5..=60u64),
                "arrival": arrival(&mut r, horizon),
                "retrieval_mode": if store { "store" } else { "source" },
                "source_fallback": store && r.random_bool(0.3),
            })
        })
        .collect();
    let doc = json!({
        "horizon": horizon,
        "mode": if r.random_bool(0.5) { "classical" } else { "multiversion" },
        "enforce_admission": r.random_bool(0.3),
        "seed": r.random::<u32>(),
        "objects": objects,
        "transactions": transactions,
    });
    config_from_value(&doc).unwrap_or_else(|e| panic!("generated config invalid: {e}\n{doc:#}"))
}

/// One object and one source-mode transaction with `R + A <= vi`, released
/// once. Nothing else competes for the processor.
pub fn isolated_feasible(seed: u64) -> SimConfig {
    let mut r = rng(seed);
    let retrieval = r.random_range(1..=10u64);
    let analysis = r.random_range(1..=10u64);
    let vi = retrieval + analysis + r.random_range(0..=5u64);
    let deadline = retrieval + analysis + r.random_range(0..=20u64);
    let at = r.random_range(0..50u64);
    let doc = json!({
        "horizon": at + deadline + 10,
        "mode": "classical",
        "seed": r.random::<u32>(),
        "objects": [{"id": "x", "vi": vi, "period": r.random_range(3..=20u64), "cost": r.random_range(0..=3u64),
                     "process": process(&mut r), "policy": {"kind": "periodic"}}],
        "transactions": [{"id": "q", "read_set": ["x"], "retrieval": {"x": retrieval}, "analysis": {"x": analysis},
                          "deadline": deadline, "arrival": {"kind": "once", "at": at}, "retrieval_mode": "source"}]
    });
    config_from_value(&doc).unwrap()
}

/// Multi-transaction multi-version workload over store and source reads.
pub fn multiversion(seed: u64) -> SimConfig {
    let mut c = small_config(seed ^ 0x5eed_fa11);
    c.mode = freshsim::FreshnessMode::MultiVersion;
    c
}
