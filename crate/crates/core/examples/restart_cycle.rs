//! A source-mode transaction whose retrieval plus analysis outlasts the
//! validity interval. Under classical semantics every attempt expires before
//! it can commit, so it restarts until the deadline passes.

use freshsim::engine::run;
use freshsim::trace::TraceEvent;
use freshsim::{feasibility_check, parse_config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/restart_cycle.json"))?;
    let config = parse_config(&text)?;

    let report = feasibility_check(&config.transactions[0], &config.object_specs())?;
    for e in &report.entries {
        println!(
            "{}: vi={} R+A={} feasible={}",
            e.object,
            e.vi,
            e.retrieval + e.analysis,
            e.pass
        );
    }

    let out = run(&config)?;
    for r in &out.trace.records {
        match &r.event {
            TraceEvent::SourceSample { value, .. } => println!("t={:>2}  fetch (value {value:.3})", r.t),
            TraceEvent::Restart { restarts, .. } => println!("t={:>2}  sample expired, restart #{restarts}", r.t),
            TraceEvent::Missed { .. } => println!("t={:>2}  deadline missed", r.t),
            TraceEvent::Commit { .. } => println!("t={:>2}  commit", r.t),
            _ => {}
        }
    }
    let m = out.report.class("report").expect("class exists");
    println!("vi_restarts={} missed={}", m.vi_restart_count, m.missed);
    Ok(())
}
