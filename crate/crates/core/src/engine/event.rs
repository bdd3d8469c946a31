use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::temporal::Tick;
use crate::trace::TxnId;

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    UpdateInstalled {
        object: usize,
        value: f64,
        sample_time: Tick,
    },
    VIExpiry {
        txn: TxnId,
        attempt: u32,
        access: usize,
    },
    RetrievalDone {
        txn: TxnId,
        attempt: u32,
    },
    AnalysisDone {
        txn: TxnId,
        attempt: u32,
    },
    DeadlineReached {
        txn: TxnId,
    },
    UpdateRelease {
        object: usize,
    },
    TxnArrival {
        txn: TxnId,
    },
}

impl EventKind {
    /// Order of processing among events due at the same tick. Installs land
    /// first so that same-tick readers see them; expiries precede completions
    /// so that work finishing one tick after the end of validity is not
    /// accepted; completions precede deadlines so that finishing exactly at
    /// the deadline counts.
    pub fn rank(&self) -> u8 {
        match self {
            EventKind::UpdateInstalled { .. } => 0,
            EventKind::VIExpiry { .. } => 1,
            EventKind::RetrievalDone { .. } => 2,
            EventKind::AnalysisDone { .. } => 3,
            EventKind::DeadlineReached { .. } => 4,
            EventKind::UpdateRelease { .. } => 5,
            EventKind::TxnArrival { .. } => 6,
        }
    }

    pub fn subject(&self) -> u64 {
        match *self {
            EventKind::UpdateInstalled { object, .. } | EventKind::UpdateRelease { object } => object as u64,
            EventKind::VIExpiry { txn, .. }
            | EventKind::RetrievalDone { txn, .. }
            | EventKind::AnalysisDone { txn, .. }
            | EventKind::DeadlineReached { txn }
            | EventKind::TxnArrival { txn } => txn,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: Tick,
    pub kind: EventKind,
    counter: u64,
}

impl Event {
    fn key(&self) -> (Tick, u8, u64, u64) {
        (self.time, self.kind.rank(), self.kind.subject(), self.counter)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Min-queue ordered by `(time, rank, subject, insertion counter)`.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Event>>,
    counter: u64,
    now: Tick,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: Tick, kind: EventKind) {
        assert!(time >= self.now, "event scheduled in the past ({time} < {})", self.now);
        self.counter += 1;
        self.heap.push(Reverse(Event {
            time,
            kind,
            counter: self.counter,
        }));
    }

    pub fn peek_time(&self) -> Option<Tick> {
        self.heap.peek().map(|Reverse(e)| e.time)
    }

    pub fn pop(&mut self) -> Option<Event> {
        let Reverse(e) = self.heap.pop()?;
        self.now = e.time;
        Some(e)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
