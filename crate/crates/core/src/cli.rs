//! Command-line front end: `run`, `sweep`, `compare` and `check`.
//!
//! Exit codes are 0 on success, 1 for invalid configurations or infeasible
//! transactions, and 2 for runtime failures (I/O, engine errors).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::engine::{self, RunOutput};
use crate::error::Error;
use crate::metrics::{csv_rows, emit_csv, RunLabel};
use crate::policy::PolicyConfig;
use crate::temporal::{feasibility_check, FreshnessMode};
use crate::workload::{config_from_value, parse_config, set_path, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "freshsim", version, about = "Real-time database freshness simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation. Prints the CSV report unless --csv is given.
    Run {
        config: PathBuf,
        /// Write the line-delimited JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run once per value of a config parameter and merge the reports.
    Sweep {
        config: PathBuf,
        /// Dotted path into the config, e.g. `objects[0].vi`.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the same workload under several modes and/or policies.
    Compare {
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        modes: Vec<String>,
        /// Compact policy specs applied to every object, e.g. `mk_firm:2:3`.
        #[arg(long, value_delimiter = ',')]
        policies: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Validate the config and report per-object feasibility.
    Check { config: PathBuf },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) | Error::Policy(_) | Error::UnknownObject(_) => Failure::invalid(e.to_string()),
            other => Failure::runtime(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name) and executes the subcommand.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Cli::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match args.command {
        Command::Run { config, trace, csv } => cmd_run(&config, trace.as_deref(), csv.as_deref()),
        Command::Sweep {
            config,
            param,
            values,
            csv,
        } => cmd_sweep(&config, &param, &values, csv.as_deref()),
        Command::Compare {
            config,
            modes,
            policies,
            csv,
        } => cmd_compare(&config, &modes, &policies, csv.as_deref()),
        Command::Check { config } => cmd_check(&config),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<SimConfig, Failure> {
    parse_config(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn scenario_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::runtime(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::runtime(e.to_string())),
    }
}

fn label(scenario: &str, config: &SimConfig) -> RunLabel {
    RunLabel {
        scenario: scenario.to_string(),
        mode: config.mode.as_str().to_string(),
        policy: config.policy_label(),
    }
}

fn cmd_run(path: &Path, trace: Option<&Path>, csv: Option<&Path>) -> Result<i32, Failure> {
    let config = load(path)?;
    let out = engine::run(&config)?;
    if let Some(t) = trace {
        fs::write(t, out.trace.to_jsonl()).map_err(|e| Failure::runtime(format!("{}: {e}", t.display())))?;
    }
    let rows = csv_rows(&out.report, &label(&scenario_name(path), &config));
    write_out(csv, &emit_csv(&rows))?;
    eprintln!("trace_hash {:016x}", out.trace_hash());
    Ok(EXIT_OK)
}

/// Runs every config on its own thread; results come back in input order.
fn run_all(configs: &[SimConfig]) -> Result<Vec<RunOutput>, Failure> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || engine::run(c))).collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Internal("simulation thread panicked".into())))
            })
            .collect()
    });
    results.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn cmd_sweep(path: &Path, param: &str, values: &[String], csv: Option<&Path>) -> Result<i32, Failure> {
    let base: Value =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let mut configs = Vec::with_capacity(values.len());
    for raw in values {
        // Numbers and literals go in as JSON; anything else as a string.
        let v = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        let mut doc = base.clone();
        set_path(&mut doc, param, v).map_err(Failure::invalid)?;
        let config = config_from_value(&doc).map_err(|e| Failure::invalid(format!("{param}={raw}: {e}")))?;
        configs.push(config);
    }
    let outputs = run_all(&configs)?;
    let scenario = scenario_name(path);
    let mut rows = Vec::new();
    for ((raw, config), out) in values.iter().zip(&configs).zip(&outputs) {
        rows.extend(csv_rows(
            &out.report,
            &label(&format!("{scenario}[{param}={raw}]"), config),
        ));
    }
    write_out(csv, &emit_csv(&rows))?;
    Ok(EXIT_OK)
}

fn cmd_compare(path: &Path, modes: &[String], policies: &[String], csv: Option<&Path>) -> Result<i32, Failure> {
    let base = load(path)?;
    let modes: Vec<FreshnessMode> = if modes.is_empty() {
        vec![base.mode]
    } else {
        modes
            .iter()
            .map(|m| FreshnessMode::parse(m).ok_or_else(|| Failure::invalid(format!("unknown mode `{m}`"))))
            .collect::<Result<_, _>>()?
    };
    let policies: Vec<Option<PolicyConfig>> = if policies.is_empty() {
        vec![None]
    } else {
        policies
            .iter()
            .map(|p| {
                PolicyConfig::from_compact(p)
                    .map(Some)
                    .map_err(|e| Failure::invalid(e.to_string()))
            })
            .collect::<Result<_, _>>()?
    };
    let mut configs = Vec::new();
    for &mode in &modes {
        for policy in &policies {
            let mut c = base.clone();
            c.mode = mode;
            if let Some(p) = policy {
                for o in &mut c.objects {
                    o.policy = p.clone();
                }
            }
            configs.push(c);
        }
    }
    let outputs = run_all(&configs)?;
    let scenario = scenario_name(path);
    let rows: Vec<_> = configs
        .iter()
        .zip(&outputs)
        .flat_map(|(c, out)| csv_rows(&out.report, &label(&scenario, c)))
        .collect();
    write_out(csv, &emit_csv(&rows))?;
    Ok(EXIT_OK)
}

fn cmd_check(path: &Path) -> Result<i32, Failure> {
    let config = load(path)?;
    let objects = engine::effective_objects(&config)?;
    let mut all_feasible = true;
    let mut report = String::new();
    for txn in &config.transactions {
        let r = feasibility_check(txn, &objects)?;
        all_feasible &= r.feasible;
        report.push_str(&format!(
            "{} {}\n",
            txn.id,
            if r.feasible { "feasible" } else { "infeasible" }
        ));
        for e in &r.entries {
            report.push_str(&format!(
                "  {} vi={} R={} A={} {}\n",
                e.object,
                e.vi,
                e.retrieval,
                e.analysis,
                if e.pass { "ok" } else { "violates vi >= R + A" }
            ));
        }
    }
    write_out(None, &report)?;
    Ok(if all_feasible { EXIT_OK } else { EXIT_INVALID })
}
