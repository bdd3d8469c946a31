//! Discrete-event simulation of data freshness in real-time databases.
//!
//! Objects carry a validity interval: a value sampled at `u` with interval
//! `vi` is fresh through tick `u + vi`. Transactions retrieve and analyze each
//! object of their read set on a single EDF processor. Under classical
//! semantics a transaction restarts whenever a value it holds goes stale;
//! under multi-version semantics a value fresh when it was accessed stays
//! usable. Update policies decide which periodic refreshes actually run.
//!
//! ```no_run
//! let text = std::fs::read_to_string("scenario.json").unwrap();
//! let config = freshsim::parse_config(&text).unwrap();
//! let out = freshsim::run(&config).unwrap();
//! println!("{:016x}", out.trace_hash());
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod policy;
pub mod process;
pub mod store;
pub mod temporal;
pub mod trace;
pub mod workload;

pub use engine::{run, Outcome, RunOutput, TxnOutcome};
pub use error::{Error, Result};
pub use metrics::{csv_rows, emit_csv, MetricsReport, RunLabel, CSV_HEADER};
pub use policy::PolicyConfig;
pub use temporal::{feasibility_check, is_fresh, FreshnessMode, ObjectSpec, RetrievalMode, Tick, UserTxnSpec};
pub use workload::{emit_config, parse_config, SimConfig};
