//! Admission control on the feasibility condition `vi >= R + A`. With
//! `enforce_admission` on, infeasible transaction classes are rejected before
//! any instance is scheduled.

use freshsim::engine::{run, Outcome};
use freshsim::workload::config_from_value;
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for vi in [5, 6] {
        let config = config_from_value(&json!({
            "horizon": 60, "mode": "classical", "enforce_admission": true,
            "objects": [{"id": "price", "vi": vi, "period": 10,
                         "process": {"kind": "constant", "value": 1.0}, "policy": {"kind": "periodic"}}],
            "transactions": [{"id": "report", "read_set": ["price"], "retrieval": {"price": 2},
                              "analysis": {"price": 4}, "deadline": 30,
                              "arrival": {"kind": "periodic", "start": 0, "period": 20},
                              "retrieval_mode": "source"}]
        }))?;
        let out = run(&config)?;
        let rejected = out.outcomes.iter().filter(|o| o.outcome == Outcome::Rejected).count();
        let committed = out
            .outcomes
            .iter()
            .filter(|o| matches!(o.outcome, Outcome::Committed(_)))
            .count();
        println!(
            "vi={vi}: {rejected} rejected, {committed} committed, {} restarts",
            out.report.overall.restart_count
        );
    }

    // The same gate from the command line: exit code 1 means infeasible.
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/restart_cycle.json");
    let code = freshsim::cli::cli(["freshsim", "check", path]);
    println!("check exit code: {code}");
    Ok(())
}
