#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use freshsim::engine::{Outcome, RunOutput};
use freshsim::trace::TraceEvent;
use oracle::{End, InstanceResult, OracleRun};

/// Engine results in the oracle's shape, for direct comparison.
pub fn engine_view(out: &RunOutput) -> OracleRun {
    let instances = out
        .outcomes
        .iter()
        .map(|o| InstanceResult {
            class: o.class.clone(),
            release: o.release,
            end: match o.outcome {
                Outcome::Committed(t) => End::Committed(t),
                Outcome::Missed(t) => End::Missed(t),
                Outcome::InFlight => End::InFlight,
                Outcome::Rejected => End::Rejected,
            },
            restarts: o.restarts.iter().map(|&(t, c)| (t, c.as_str())).collect(),
            stale_at_commit: o.stale_at_commit,
        })
        .collect();
    let installs = out
        .trace
        .records
        .iter()
        .filter_map(|r| match r.event {
            TraceEvent::Install {
                object, sample_time, ..
            } => Some((r.t, object, sample_time)),
            _ => None,
        })
        .collect();
    OracleRun { instances, installs }
}
