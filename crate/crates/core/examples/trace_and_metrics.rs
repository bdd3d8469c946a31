//! Writes the line-delimited JSON trace and the CSV report of a run, and
//! shows that the trace hash is a hash of exactly those trace bytes.

use freshsim::engine::run;
use freshsim::trace::fnv1a64;
use freshsim::{csv_rows, emit_csv, parse_config, RunLabel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/mv_continuation.json"))?;
    let config = parse_config(&text)?;
    let out = run(&config)?;

    let jsonl = out.trace.to_jsonl();
    for line in jsonl.lines().take(6) {
        println!("{line}");
    }
    println!("... {} records", out.trace.len());
    assert_eq!(fnv1a64(jsonl.as_bytes()), out.trace_hash());
    println!("trace hash {:016x}\n", out.trace_hash());

    let label = RunLabel {
        scenario: "mv_continuation".into(),
        mode: config.mode.as_str().into(),
        policy: config.policy_label(),
    };
    print!("{}", emit_csv(&csv_rows(&out.report, &label)));
    Ok(())
}
