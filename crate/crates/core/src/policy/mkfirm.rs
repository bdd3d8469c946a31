use std::collections::VecDeque;

use super::Decision;

/// The last `k - 1` decisions for one object. Instances before the start of
/// the run count as performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MkHistory {
    window: VecDeque<Decision>,
    capacity: usize,
}

impl MkHistory {
    pub fn new(k: u32) -> Self {
        let capacity = k.saturating_sub(1) as usize;
        MkHistory {
            window: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn from_decisions(k: u32, decisions: &[Decision]) -> Self {
        let mut h = MkHistory::new(k);
        for &d in decisions {
            h.push(d);
        }
        h
    }

    pub fn push(&mut self, decision: Decision) {
        if self.capacity == 0 {
            return;
        }
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back(decision);
    }

    /// Performs among the recorded decisions plus the implicit padding.
    fn performs(&self) -> usize {
        let padding = self.capacity - self.window.len();
        padding + self.window.iter().filter(|&&d| d == Decision::Perform).count()
    }

    pub fn decisions(&self) -> impl Iterator<Item = Decision> + '_ {
        self.window.iter().copied()
    }
}

/// Greedy (m,k)-firm gate. Proposes skipping the current instance and allows
/// it only if the last `k` instances, including this one, would still hold
/// at least `m` performed updates. The decision is recorded in `history`.
pub fn mk_firm_decision(m: u32, k: u32, history: &mut MkHistory) -> Decision {
    debug_assert!(1 <= m && m <= k);
    debug_assert_eq!(history.capacity, k.saturating_sub(1) as usize);
    let decision = if history.performs() >= m as usize {
        Decision::Skip
    } else {
        Decision::Perform
    };
    history.push(decision);
    decision
}
