//! Streaming metrics over a run's trace, and the CSV report format.

use serde::Serialize;
use thiserror::Error;

use crate::temporal::Tick;
use crate::trace::{Trace, TraceEvent, TraceRecord};

pub const CSV_HEADER: [&str; 17] = [
    "scenario",
    "mode",
    "policy",
    "txn_class",
    "released",
    "committed",
    "missed",
    "miss_ratio",
    "restarts",
    "vi_restarts",
    "updates_performed",
    "updates_skipped",
    "mean_staleness",
    "max_staleness",
    "max_sink_error",
    "peak_live_versions",
    "stale_at_commit",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("trace record at t={got} arrived after t={last}")]
    OutOfOrder { last: Tick, got: Tick },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
struct Staleness {
    count: u64,
    total: u64,
    max: u64,
}

impl Staleness {
    fn add(&mut self, s: Tick) {
        self.count += 1;
        self.total += s;
        self.max = self.max.max(s);
    }

    fn merge(&mut self, other: &Staleness) {
        self.count += other.count;
        self.total += other.total;
        self.max = self.max.max(other.max);
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total as f64 / self.count as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TxnMetrics {
    pub released: u64,
    pub rejected: u64,
    pub committed: u64,
    pub missed: u64,
    pub in_flight: u64,
    pub deadline_miss_ratio: f64,
    pub restart_count: u64,
    pub vi_restart_count: u64,
    pub accesses: u64,
    pub mean_staleness: f64,
    pub max_staleness: Tick,
    pub stale_at_commit: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ObjectMetrics {
    pub updates_performed: u64,
    pub updates_skipped: u64,
    /// Sum of performed update costs over the horizon.
    pub update_utilization: f64,
    pub accesses: u64,
    pub mean_staleness: f64,
    pub max_staleness: Tick,
    pub max_sink_error: f64,
    pub peak_live_versions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricsReport {
    pub horizon: Tick,
    pub overall: TxnMetrics,
    pub classes: Vec<(String, TxnMetrics)>,
    pub objects: Vec<(String, ObjectMetrics)>,
}

impl MetricsReport {
    pub fn class(&self, id: &str) -> Option<&TxnMetrics> {
        self.classes.iter().find(|(n, _)| n == id).map(|(_, m)| m)
    }

    pub fn object(&self, id: &str) -> Option<&ObjectMetrics> {
        self.objects.iter().find(|(n, _)| n == id).map(|(_, m)| m)
    }

    pub fn total_updates_performed(&self) -> u64 {
        self.objects.iter().map(|(_, o)| o.updates_performed).sum()
    }
}

#[derive(Debug, Clone, Default)]
struct ClassAcc {
    released: u64,
    rejected: u64,
    committed: u64,
    missed: u64,
    restarts: u64,
    vi_restarts: u64,
    staleness: Staleness,
    stale_at_commit: u64,
}

#[derive(Debug, Clone, Default)]
struct ObjectAcc {
    performed: u64,
    skipped: u64,
    staleness: Staleness,
    max_sink_error: f64,
    peak_live: usize,
}

/// Aggregates trace records as they are produced.
#[derive(Debug, Clone)]
pub struct MetricsRecorder {
    horizon: Tick,
    class_names: Vec<String>,
    object_names: Vec<String>,
    costs: Vec<Tick>,
    classes: Vec<ClassAcc>,
    objects: Vec<ObjectAcc>,
    last: Tick,
}

impl MetricsRecorder {
    pub fn new(horizon: Tick, class_names: Vec<String>, object_names: Vec<String>, costs: Vec<Tick>) -> Self {
        MetricsRecorder {
            horizon,
            classes: vec![ClassAcc::default(); class_names.len()],
            objects: vec![ObjectAcc::default(); object_names.len()],
            class_names,
            object_names,
            costs,
            last: 0,
        }
    }

    pub fn record(&mut self, r: &TraceRecord) -> Result<(), MetricsError> {
        if r.t < self.last {
            return Err(MetricsError::OutOfOrder {
                last: self.last,
                got: r.t,
            });
        }
        self.last = r.t;
        match &r.event {
            TraceEvent::Rejected { class, .. } => self.classes[*class].rejected += 1,
            TraceEvent::Released { class, .. } => self.classes[*class].released += 1,
            TraceEvent::Read {
                class,
                object,
                sample_time,
                ..
            } => {
                let staleness = r.t - sample_time;
                self.classes[*class].staleness.add(staleness);
                self.objects[*object].staleness.add(staleness);
            }
            TraceEvent::Restart { class, .. } => {
                // Expiry and supersession are the only restart causes modeled,
                // and both stem from validity-interval semantics.
                self.classes[*class].restarts += 1;
                self.classes[*class].vi_restarts += 1;
            }
            TraceEvent::Commit {
                class, stale_at_commit, ..
            } => {
                self.classes[*class].committed += 1;
                if *stale_at_commit {
                    self.classes[*class].stale_at_commit += 1;
                }
            }
            TraceEvent::Missed { class, .. } => self.classes[*class].missed += 1,
            TraceEvent::Decision {
                object,
                decision,
                sampled,
                effective,
                ..
            } => {
                let acc = &mut self.objects[*object];
                match *decision {
                    "skip" | "suppress" => acc.skipped += 1,
                    _ => acc.performed += 1,
                }
                acc.max_sink_error = acc.max_sink_error.max((effective - sampled).abs());
            }
            TraceEvent::Refresh { object, .. } => self.objects[*object].performed += 1,
            TraceEvent::Install {
                object, live_versions, ..
            } => {
                let acc = &mut self.objects[*object];
                acc.peak_live = acc.peak_live.max(*live_versions);
            }
            _ => {}
        }
        Ok(())
    }

    pub fn record_all(&mut self, trace: &Trace) -> Result<(), MetricsError> {
        trace.records.iter().try_for_each(|r| self.record(r))
    }

    pub fn finalize(&self) -> MetricsReport {
        let txn = |a: &ClassAcc| TxnMetrics {
            released: a.released,
            rejected: a.rejected,
            committed: a.committed,
            missed: a.missed,
            in_flight: a.released - a.committed - a.missed,
            deadline_miss_ratio: if a.released == 0 {
                0.0
            } else {
                a.missed as f64 / a.released as f64
            },
            restart_count: a.restarts,
            vi_restart_count: a.vi_restarts,
            accesses: a.staleness.count,
            mean_staleness: a.staleness.mean(),
            max_staleness: a.staleness.max,
            stale_at_commit: a.stale_at_commit,
        };
        let mut total = ClassAcc::default();
        for a in &self.classes {
            total.released += a.released;
            total.rejected += a.rejected;
            total.committed += a.committed;
            total.missed += a.missed;
            total.restarts += a.restarts;
            total.vi_restarts += a.vi_restarts;
            total.staleness.merge(&a.staleness);
            total.stale_at_commit += a.stale_at_commit;
        }
        let objects = self
            .object_names
            .iter()
            .zip(&self.objects)
            .zip(&self.costs)
            .map(|((name, a), &cost)| {
                (
                    name.clone(),
                    ObjectMetrics {
                        updates_performed: a.performed,
                        updates_skipped: a.skipped,
                        update_utilization: (a.performed * cost) as f64 / self.horizon.max(1) as f64,
                        accesses: a.staleness.count,
                        mean_staleness: a.staleness.mean(),
                        max_staleness: a.staleness.max,
                        max_sink_error: a.max_sink_error,
                        peak_live_versions: a.peak_live,
                    },
                )
            })
            .collect();
        MetricsReport {
            horizon: self.horizon,
            overall: txn(&total),
            classes: self
                .class_names
                .iter()
                .cloned()
                .zip(self.classes.iter().map(txn))
                .collect(),
            objects,
        }
    }
}

/// Identifies the run a set of CSV rows belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLabel {
    pub scenario: String,
    pub mode: String,
    pub policy: String,
}

fn float(x: f64) -> String {
    format!("{x:?}")
}

/// CSV rows for one report: one per transaction class, one per object
/// (`obj:<id>`), and an `all` row. An empty report yields no rows.
pub fn csv_rows(report: &MetricsReport, label: &RunLabel) -> Vec<Vec<String>> {
    if report.classes.is_empty() && report.objects.is_empty() {
        return Vec::new();
    }
    let prefix = |class: &str| -> Vec<String> {
        vec![
            label.scenario.clone(),
            label.mode.clone(),
            label.policy.clone(),
            class.to_string(),
        ]
    };
    let txn_cols = |m: &TxnMetrics| {
        vec![
            m.released.to_string(),
            m.committed.to_string(),
            m.missed.to_string(),
            float(m.deadline_miss_ratio),
            m.restart_count.to_string(),
            m.vi_restart_count.to_string(),
        ]
    };
    let blank = |n: usize| vec![String::new(); n];
    let mut rows = Vec::new();
    for (name, m) in &report.classes {
        let mut row = prefix(name);
        row.extend(txn_cols(m));
        row.extend(blank(2));
        row.extend([float(m.mean_staleness), m.max_staleness.to_string()]);
        row.extend(blank(2));
        row.push(m.stale_at_commit.to_string());
        rows.push(row);
    }
    for (name, o) in &report.objects {
        let mut row = prefix(&format!("obj:{name}"));
        row.extend(blank(6));
        row.extend([
            o.updates_performed.to_string(),
            o.updates_skipped.to_string(),
            float(o.mean_staleness),
            o.max_staleness.to_string(),
            float(o.max_sink_error),
            o.peak_live_versions.to_string(),
        ]);
        row.push(String::new());
        rows.push(row);
    }
    let mut row = prefix("all");
    row.extend(txn_cols(&report.overall));
    row.extend([
        report
            .objects
            .iter()
            .map(|(_, o)| o.updates_performed)
            .sum::<u64>()
            .to_string(),
        report
            .objects
            .iter()
            .map(|(_, o)| o.updates_skipped)
            .sum::<u64>()
            .to_string(),
        float(report.overall.mean_staleness),
        report.overall.max_staleness.to_string(),
        float(report.objects.iter().map(|(_, o)| o.max_sink_error).fold(0.0, f64::max)),
        report
            .objects
            .iter()
            .map(|(_, o)| o.peak_live_versions)
            .max()
            .unwrap_or(0)
            .to_string(),
        report.overall.stale_at_commit.to_string(),
    ]);
    rows.push(row);
    rows
}

/// Renders rows under the fixed header.
pub fn emit_csv(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to a Vec cannot fail");
    for row in rows {
        w.write_record(row).expect("writing to a Vec cannot fail");
    }
    let bytes = w.into_inner().expect("flushing a Vec cannot fail");
    String::from_utf8(bytes).expect("CSV fields are UTF-8")
}
