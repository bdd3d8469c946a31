//! Event trace records and their line-delimited JSON form.
//!
//! Each record serializes to one JSON object `{"t", "kind", "subject",
//! "detail"}` per line. The trace hash is 64-bit FNV-1a over the exact bytes
//! of those lines, newline-terminated.

use serde_json::{json, Value};

use crate::temporal::Tick;

/// Instance id of a released transaction.
pub type TxnId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Retrieval,
    Analysis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartCause {
    /// A held version passed the end of its validity interval.
    Expired,
    /// Classical mode: an update replaced a held version.
    Superseded,
}

impl RestartCause {
    pub fn as_str(self) -> &'static str {
        match self {
            RestartCause::Expired => "expired",
            RestartCause::Superseded => "superseded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpiryOutcome {
    Restart,
    Continue,
    /// The version's validity was extended since the expiry was armed.
    Extended,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Rejected {
        txn: TxnId,
        class: usize,
        failing: Vec<usize>,
    },
    Released {
        txn: TxnId,
        class: usize,
        deadline: Tick,
    },
    Dispatched {
        txn: TxnId,
        object: usize,
        segment: Segment,
    },
    SourceSample {
        txn: TxnId,
        object: usize,
        value: f64,
    },
    Read {
        txn: TxnId,
        class: usize,
        object: usize,
        seq: u64,
        sample_time: Tick,
        valid_until: Tick,
    },
    Blocked {
        txn: TxnId,
        object: usize,
    },
    RetrievalDone {
        txn: TxnId,
        object: usize,
    },
    AnalysisDone {
        txn: TxnId,
        object: usize,
    },
    Expiry {
        txn: TxnId,
        object: usize,
        outcome: ExpiryOutcome,
    },
    Restart {
        txn: TxnId,
        class: usize,
        cause: RestartCause,
        restarts: u32,
    },
    Commit {
        txn: TxnId,
        class: usize,
        stale_at_commit: bool,
    },
    Missed {
        txn: TxnId,
        class: usize,
    },
    /// A periodic update instance and the policy's verdict on it.
    Decision {
        object: usize,
        policy: &'static str,
        decision: &'static str,
        sampled: f64,
        /// Stored value (similarity) or prediction (prediction policy).
        reference: Option<f64>,
        /// Value the store or sink holds for this instant after the decision.
        effective: f64,
    },
    /// On-demand refresh triggered by a stale access.
    Refresh {
        object: usize,
        txn: TxnId,
        sampled: f64,
    },
    Install {
        object: usize,
        seq: u64,
        sample_time: Tick,
        value: f64,
        live_versions: usize,
    },
    Extend {
        object: usize,
        valid_until: Tick,
    },
    Gc {
        reclaimed: usize,
        live_versions: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: Tick,
    pub event: TraceEvent,
}

/// A run's trace together with the names needed to render it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub objects: Vec<String>,
    pub classes: Vec<String>,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn new(objects: Vec<String>, classes: Vec<String>) -> Self {
        Trace {
            objects,
            classes,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, t: Tick, event: TraceEvent) {
        self.records.push(TraceRecord { t, event });
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    fn obj(&self, i: usize) -> &str {
        &self.objects[i]
    }

    fn class(&self, i: usize) -> &str {
        &self.classes[i]
    }

    pub fn record_json(&self, r: &TraceRecord) -> Value {
        use TraceEvent::*;
        let txn_subject = |id: &TxnId| format!("txn:{id}");
        let obj_subject = |o: &usize| format!("obj:{}", self.obj(*o));
        let (kind, subject, detail) = match &r.event {
            Rejected { txn, class, failing } => (
                "rejected",
                txn_subject(txn),
                json!({"class": self.class(*class), "failing": failing.iter().map(|o| self.obj(*o)).collect::<Vec<_>>()}),
            ),
            Released { txn, class, deadline } => (
                "released",
                txn_subject(txn),
                json!({"class": self.class(*class), "deadline": deadline}),
            ),
            Dispatched { txn, object, segment } => (
                "dispatched",
                txn_subject(txn),
                json!({"object": self.obj(*object), "segment": match segment { Segment::Retrieval => "retrieval", Segment::Analysis => "analysis" }}),
            ),
            SourceSample { txn, object, value } => (
                "source_sample",
                txn_subject(txn),
                json!({"object": self.obj(*object), "value": value}),
            ),
            Read {
                txn,
                class,
                object,
                seq,
                sample_time,
                valid_until,
            } => (
                "read",
                txn_subject(txn),
                json!({"class": self.class(*class), "object": self.obj(*object), "seq": seq, "sample_time": sample_time, "valid_until": valid_until}),
            ),
            Blocked { txn, object } => ("blocked", txn_subject(txn), json!({"object": self.obj(*object)})),
            RetrievalDone { txn, object } => ("retrieval_done", txn_subject(txn), json!({"object": self.obj(*object)})),
            AnalysisDone { txn, object } => ("analysis_done", txn_subject(txn), json!({"object": self.obj(*object)})),
            Expiry { txn, object, outcome } => (
                "vi_expiry",
                txn_subject(txn),
                json!({"object": self.obj(*object), "outcome": match outcome {
                    ExpiryOutcome::Restart => "restart",
                    ExpiryOutcome::Continue => "continue",
                    ExpiryOutcome::Extended => "extended",
                }}),
            ),
            Restart {
                txn,
                class,
                cause,
                restarts,
            } => (
                "restart",
                txn_subject(txn),
                json!({"class": self.class(*class), "cause": cause.as_str(), "restarts": restarts}),
            ),
            Commit {
                txn,
                class,
                stale_at_commit,
            } => (
                "commit",
                txn_subject(txn),
                json!({"class": self.class(*class), "stale_at_commit": stale_at_commit}),
            ),
            Missed { txn, class } => ("missed", txn_subject(txn), json!({"class": self.class(*class)})),
            Decision {
                object,
                policy,
                decision,
                sampled,
                reference,
                effective,
            } => (
                "decision",
                obj_subject(object),
                json!({"policy": policy, "decision": decision, "sampled": sampled, "reference": reference, "effective": effective}),
            ),
            Refresh { object, txn, sampled } => {
                ("refresh", obj_subject(object), json!({"txn": txn, "sampled": sampled}))
            }
            Install {
                object,
                seq,
                sample_time,
                value,
                live_versions,
            } => (
                "install",
                obj_subject(object),
                json!({"seq": seq, "sample_time": sample_time, "value": value, "live_versions": live_versions}),
            ),
            Extend { object, valid_until } => ("extend", obj_subject(object), json!({"valid_until": valid_until})),
            Gc {
                reclaimed,
                live_versions,
            } => (
                "gc",
                "store".to_string(),
                json!({"reclaimed": reclaimed, "live_versions": live_versions}),
            ),
        };
        json!({"t": r.t, "kind": kind, "subject": subject, "detail": detail})
    }

    /// Line-delimited JSON, one record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&self.record_json(r).to_string());
            out.push('\n');
        }
        out
    }

    pub fn hash(&self) -> u64 {
        fnv1a64(self.to_jsonl().as_bytes())
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}
