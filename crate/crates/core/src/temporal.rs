//! Core temporal-data vocabulary: ticks, object and transaction specs, the
//! freshness predicate and the per-transaction feasibility check.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::process::ValueProcess;

/// Simulation time. All timestamps and durations are whole ticks.
pub type Tick = u64;

/// Which freshness semantics governs in-flight readers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FreshnessMode {
    /// Single version per object; a reader restarts as soon as the data it
    /// holds expires or is replaced.
    Classical,
    /// Readers keep the version that was fresh when they accessed it.
    MultiVersion,
}

impl FreshnessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FreshnessMode::Classical => "classical",
            FreshnessMode::MultiVersion => "multiversion",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "classical" => Some(FreshnessMode::Classical),
            "multiversion" => Some(FreshnessMode::MultiVersion),
            _ => None,
        }
    }
}

/// A temporal data object.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSpec {
    pub id: String,
    /// Validity interval.
    pub vi: Tick,
    pub update_period: Tick,
    /// Execution/transmission cost of one update.
    pub update_cost: Tick,
    pub value_process: ValueProcess,
    /// Relative access frequency.
    pub access_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetrievalMode {
    /// Every access fetches a fresh sample from the data source.
    Source,
    /// Accesses are served from the version store.
    Store,
}

impl RetrievalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RetrievalMode::Source => "source",
            RetrievalMode::Store => "store",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arrival {
    Once {
        at: Tick,
    },
    Periodic {
        start: Tick,
        period: Tick,
    },
    /// Poisson arrivals, parameterized by the expected inter-arrival gap.
    Poisson {
        start: Tick,
        mean_gap: f64,
    },
}

/// A deadline-constrained, read-only analysis transaction.
#[derive(Debug, Clone, PartialEq)]
pub struct UserTxnSpec {
    pub id: String,
    pub read_set: Vec<String>,
    pub retrieval_time: BTreeMap<String, Tick>,
    pub analysis_time: BTreeMap<String, Tick>,
    pub relative_deadline: Tick,
    pub arrival: Arrival,
    pub retrieval_mode: RetrievalMode,
    /// Store-mode transactions with this flag fetch from the source when the
    /// store holds no fresh version instead of waiting for an update.
    pub source_fallback: bool,
}

impl UserTxnSpec {
    pub fn retrieval(&self, object: &str) -> Tick {
        self.retrieval_time.get(object).copied().unwrap_or(0)
    }

    pub fn analysis(&self, object: &str) -> Tick {
        self.analysis_time.get(object).copied().unwrap_or(0)
    }
}

/// `t <= sample_time + vi`, inclusive at the boundary.
pub fn is_fresh(sample_time: Tick, vi: Tick, t: Tick) -> bool {
    t <= sample_time.saturating_add(vi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityEntry {
    pub object: String,
    pub vi: Tick,
    pub retrieval: Tick,
    pub analysis: Tick,
    pub pass: bool,
}

/// Per-object outcome of `vi >= retrieval + analysis` for one transaction.
///
/// Durations are taken exactly as the workload declares them; whether they
/// are worst-case or expected values is up to the workload author.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub txn: String,
    pub entries: Vec<FeasibilityEntry>,
    pub feasible: bool,
}

impl FeasibilityReport {
    pub fn failing(&self) -> impl Iterator<Item = &FeasibilityEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

pub fn feasibility_check(txn: &UserTxnSpec, objects: &[ObjectSpec]) -> Result<FeasibilityReport> {
    let mut entries = Vec::with_capacity(txn.read_set.len());
    for id in &txn.read_set {
        let obj = objects
            .iter()
            .find(|o| &o.id == id)
            .ok_or_else(|| Error::UnknownObject(id.clone()))?;
        let retrieval = txn.retrieval(id);
        let analysis = txn.analysis(id);
        entries.push(FeasibilityEntry {
            object: id.clone(),
            vi: obj.vi,
            retrieval,
            analysis,
            pass: obj.vi >= retrieval + analysis,
        });
    }
    let feasible = entries.iter().all(|e| e.pass);
    Ok(FeasibilityReport {
        txn: txn.id.clone(),
        entries,
        feasible,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    Rejected(FeasibilityReport),
}

/// Admission gate on top of [`feasibility_check`]. With `enforce` off every
/// transaction is admitted, infeasible or not.
pub fn admit(txn: &UserTxnSpec, objects: &[ObjectSpec], enforce: bool) -> Result<Admission> {
    let report = feasibility_check(txn, objects)?;
    if enforce && !report.feasible {
        Ok(Admission::Rejected(report))
    } else {
        Ok(Admission::Admitted)
    }
}
