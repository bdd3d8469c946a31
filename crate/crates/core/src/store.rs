//! Version store for temporal objects.
//!
//! Every object owns a chain of versions ordered by sequence number. New
//! reads are only ever served from the newest version; older versions stay
//! around solely for in-flight readers that pinned them. Under
//! [`FreshnessMode::Classical`] an install supersedes the previous version
//! and reports its pinners so the caller can restart them; under
//! [`FreshnessMode::MultiVersion`] pinned versions are retained until their
//! readers finish.

use serde::Serialize;
use thiserror::Error;

use crate::temporal::{is_fresh, FreshnessMode, Tick};

/// Identifies a reader holding pins (a transaction instance).
pub type ReaderId = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("unknown object index {0}")]
    UnknownObject(usize),
    #[error("non-monotone sample time for object {object}: {sample_time} after {previous}")]
    NonMonotoneSample {
        object: usize,
        sample_time: Tick,
        previous: Tick,
    },
    #[error("object {object} seq {seq} is not pinned by reader {reader}")]
    NotPinned { object: usize, seq: u64, reader: ReaderId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Version {
    pub object: usize,
    pub value: f64,
    pub sample_time: Tick,
    pub seq: u64,
    /// Validity granted on top of the object's interval by skipped or
    /// suppressed updates that confirmed this value.
    pub extension: Tick,
    pinners: Vec<ReaderId>,
}

impl Version {
    pub fn pin_count(&self) -> usize {
        self.pinners.len()
    }

    pub fn pinners(&self) -> &[ReaderId] {
        &self.pinners
    }

    pub fn effective_vi(&self, vi: Tick) -> Tick {
        vi + self.extension
    }

    pub fn valid_until(&self, vi: Tick) -> Tick {
        self.sample_time + self.effective_vi(vi)
    }

    pub fn is_fresh(&self, vi: Tick, t: Tick) -> bool {
        is_fresh(self.sample_time, self.effective_vi(vi), t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadResult {
    pub object: usize,
    pub seq: u64,
    pub value: f64,
    pub sample_time: Tick,
    pub access_time: Tick,
    pub fresh_at_access: bool,
    pub valid_until: Tick,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReadOutcome {
    Fresh(ReadResult),
    NoFreshVersion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstallOutcome {
    pub seq: u64,
    /// Classical mode only: readers pinning a version this install replaced.
    pub displaced: Vec<ReaderId>,
    pub reclaimed: usize,
    pub live_versions: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ObjectStoreStats {
    pub installs: u64,
    pub reclaimed: u64,
    pub peak_live_versions: usize,
    pub max_concurrent_pinners: usize,
}

#[derive(Debug, Clone)]
pub struct VersionStore {
    mode: FreshnessMode,
    vis: Vec<Tick>,
    chains: Vec<Vec<Version>>,
    next_seq: Vec<u64>,
    stats: Vec<ObjectStoreStats>,
}

impl VersionStore {
    /// `vis[i]` is the validity interval of object `i`.
    pub fn new(mode: FreshnessMode, vis: Vec<Tick>) -> Self {
        let n = vis.len();
        VersionStore {
            mode,
            vis,
            chains: vec![Vec::new(); n],
            next_seq: vec![1; n],
            stats: vec![ObjectStoreStats::default(); n],
        }
    }

    pub fn mode(&self) -> FreshnessMode {
        self.mode
    }

    pub fn vi(&self, object: usize) -> Tick {
        self.vis[object]
    }

    fn chain_mut(&mut self, object: usize) -> Result<&mut Vec<Version>, StoreError> {
        self.chains.get_mut(object).ok_or(StoreError::UnknownObject(object))
    }

    pub fn chain(&self, object: usize) -> Result<&[Version], StoreError> {
        self.chains
            .get(object)
            .map(Vec::as_slice)
            .ok_or(StoreError::UnknownObject(object))
    }

    pub fn newest(&self, object: usize) -> Option<&Version> {
        self.chains.get(object).and_then(|c| c.last())
    }

    pub fn version(&self, object: usize, seq: u64) -> Option<&Version> {
        self.chains.get(object)?.iter().find(|v| v.seq == seq)
    }

    pub fn live_version_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    pub fn stats(&self, object: usize) -> ObjectStoreStats {
        self.stats[object]
    }

    pub fn object_count(&self) -> usize {
        self.chains.len()
    }

    pub fn install(&mut self, object: usize, value: f64, sample_time: Tick) -> Result<InstallOutcome, StoreError> {
        let mode = self.mode;
        let chain = self.chain_mut(object)?;
        if let Some(prev) = chain.last() {
            if sample_time <= prev.sample_time {
                return Err(StoreError::NonMonotoneSample {
                    object,
                    sample_time,
                    previous: prev.sample_time,
                });
            }
        }
        let displaced = match mode {
            FreshnessMode::Classical => {
                let mut readers: Vec<ReaderId> = chain.iter().flat_map(|v| v.pinners.iter().copied()).collect();
                readers.sort_unstable();
                readers.dedup();
                readers
            }
            FreshnessMode::MultiVersion => Vec::new(),
        };
        let seq = self.next_seq[object];
        self.next_seq[object] += 1;
        self.chains[object].push(Version {
            object,
            value,
            sample_time,
            seq,
            extension: 0,
            pinners: Vec::new(),
        });
        self.stats[object].installs += 1;
        let reclaimed = self.gc_object(object);
        let live_versions = self.chains[object].len();
        let stats = &mut self.stats[object];
        stats.peak_live_versions = stats.peak_live_versions.max(live_versions);
        Ok(InstallOutcome {
            seq,
            displaced,
            reclaimed,
            live_versions,
        })
    }

    /// Newest version of `object` if it is fresh at `t`, without pinning.
    pub fn peek_fresh(&self, object: usize, t: Tick) -> Option<&Version> {
        let vi = *self.vis.get(object)?;
        self.newest(object).filter(|v| v.is_fresh(vi, t))
    }

    /// Serves the newest version to `reader` and pins it, or reports that no
    /// fresh version exists at `t`.
    pub fn read_latest(&mut self, object: usize, t: Tick, reader: ReaderId) -> Result<ReadOutcome, StoreError> {
        let vi = *self.vis.get(object).ok_or(StoreError::UnknownObject(object))?;
        let chain = self.chain_mut(object)?;
        let Some(newest) = chain.last_mut() else {
            return Ok(ReadOutcome::NoFreshVersion);
        };
        if !newest.is_fresh(vi, t) {
            return Ok(ReadOutcome::NoFreshVersion);
        }
        newest.pinners.push(reader);
        let read = ReadResult {
            object,
            seq: newest.seq,
            value: newest.value,
            sample_time: newest.sample_time,
            access_time: t,
            fresh_at_access: true,
            valid_until: newest.valid_until(vi),
        };
        let pinners = self.distinct_pinners(object);
        let stats = &mut self.stats[object];
        stats.max_concurrent_pinners = stats.max_concurrent_pinners.max(pinners);
        Ok(ReadOutcome::Fresh(read))
    }

    fn distinct_pinners(&self, object: usize) -> usize {
        let mut readers: Vec<ReaderId> = self.chains[object]
            .iter()
            .flat_map(|v| v.pinners.iter().copied())
            .collect();
        readers.sort_unstable();
        readers.dedup();
        readers.len()
    }

    /// Whether a reader that accessed `(object, seq)` at `access_time` may
    /// keep going at `now`.
    ///
    /// Multi-version: the version only had to be fresh when it was accessed.
    /// Classical: it must still be fresh now and must still be the newest.
    pub fn may_continue(&self, object: usize, seq: u64, access_time: Tick, now: Tick) -> bool {
        let Some(version) = self.version(object, seq) else {
            return false;
        };
        let vi = self.vis[object];
        match self.mode {
            FreshnessMode::MultiVersion => version.is_fresh(vi, access_time),
            FreshnessMode::Classical => {
                let newest = self.newest(object).map(|v| v.seq) == Some(seq);
                newest && version.is_fresh(vi, now)
            }
        }
    }

    pub fn unpin(&mut self, object: usize, seq: u64, reader: ReaderId) -> Result<(), StoreError> {
        let chain = self.chain_mut(object)?;
        let version = chain
            .iter_mut()
            .find(|v| v.seq == seq)
            .ok_or(StoreError::NotPinned { object, seq, reader })?;
        let pos = version
            .pinners
            .iter()
            .position(|&r| r == reader)
            .ok_or(StoreError::NotPinned { object, seq, reader })?;
        version.pinners.swap_remove(pos);
        Ok(())
    }

    /// Extends the validity of the newest version of `object` by `by` ticks.
    /// Returns the new effective end of validity.
    pub fn extend_newest(&mut self, object: usize, by: Tick) -> Option<Tick> {
        let vi = *self.vis.get(object)?;
        let newest = self.chains.get_mut(object)?.last_mut()?;
        newest.extension += by;
        Some(newest.valid_until(vi))
    }

    /// Removes every superseded, unpinned version. The newest version of an
    /// object is never reclaimed. Returns the number of versions removed.
    pub fn gc(&mut self, _now: Tick) -> usize {
        (0..self.chains.len()).map(|o| self.gc_object(o)).sum()
    }

    fn gc_object(&mut self, object: usize) -> usize {
        let chain = &mut self.chains[object];
        let Some(newest_seq) = chain.last().map(|v| v.seq) else {
            return 0;
        };
        let before = chain.len();
        chain.retain(|v| v.seq == newest_seq || v.pin_count() > 0);
        assert!(
            chain.iter().all(|v| v.seq == newest_seq || v.pin_count() > 0),
            "gc must never reclaim a pinned version"
        );
        let reclaimed = before - chain.len();
        self.stats[object].reclaimed += reclaimed as u64;
        reclaimed
    }
}
