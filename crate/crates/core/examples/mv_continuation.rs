//! The same store-mode read under both freshness modes. A newer version lands
//! while the analysis is still running and the version being analyzed then
//! expires. Classical mode restarts; multi-version mode keeps going because
//! the data was fresh when it was read.

use freshsim::engine::{run, Outcome};
use freshsim::{parse_config, FreshnessMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/mv_continuation.json"))?;
    let base = parse_config(&text)?;

    for mode in [FreshnessMode::Classical, FreshnessMode::MultiVersion] {
        let mut config = base.clone();
        config.mode = mode;
        let out = run(&config)?;
        let txn = &out.outcomes[0];
        let end = match txn.outcome {
            Outcome::Committed(t) => format!("committed at t={t}"),
            Outcome::Missed(t) => format!("missed at t={t}"),
            other => format!("{other:?}"),
        };
        println!(
            "{:<12} {end}; restarts {:?}; stale at commit: {}; peak versions {}",
            mode.as_str(),
            txn.restarts,
            txn.stale_at_commit,
            out.store_stats[0].peak_live_versions
        );
    }
    Ok(())
}
