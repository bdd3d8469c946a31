//! Deterministic discrete-event engine.
//!
//! One processor runs user transactions, non-preemptively per segment, with
//! EDF dispatch at segment boundaries. Updates run on their own server and
//! only interact with transactions through the version store. All events at
//! a tick are processed before the processor is (re)dispatched.

mod event;

use crate::error::{Error, Result};
use crate::metrics::{MetricsRecorder, MetricsReport};
use crate::policy::{
    elastic_rescale, extend_vi_for_period, mk_firm_decision, prediction_decision, similarity_decision, Decision,
    ElasticTask, MkHistory, PolicyConfig, PredictorState, Transmission,
};
use crate::process::Sampler;
use crate::store::{ObjectStoreStats, ReadOutcome, VersionStore};
use crate::temporal::{admit, Admission, FreshnessMode, ObjectSpec, RetrievalMode, Tick};
use crate::trace::{ExpiryOutcome, RestartCause, Segment, Trace, TraceEvent, TxnId};
use crate::workload::{expand_arrivals, SimConfig};

pub use event::{Event, EventKind, EventQueue};

/// Ordering key for EDF dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispatchKey<'a> {
    pub deadline: Tick,
    pub class_id: &'a str,
    pub release: Tick,
    pub id: TxnId,
}

impl DispatchKey<'_> {
    fn tuple(&self) -> (Tick, &str, Tick, TxnId) {
        (self.deadline, self.class_id, self.release, self.id)
    }
}

/// Earliest absolute deadline first; ties go to the lower class id, then the
/// earlier release. Returns the index of the chosen candidate.
pub fn dispatch(ready: &[DispatchKey<'_>]) -> Option<usize> {
    (0..ready.len()).min_by(|&a, &b| ready[a].tuple().cmp(&ready[b].tuple()))
}

/// Objects with the periods and validity intervals actually used by a run,
/// after elastic compression.
pub fn effective_objects(config: &SimConfig) -> Result<Vec<ObjectSpec>> {
    let mut specs = config.object_specs();
    let elastic: Vec<usize> = config
        .objects
        .iter()
        .enumerate()
        .filter(|(_, o)| matches!(o.policy, PolicyConfig::Elastic { .. }))
        .map(|(i, _)| i)
        .collect();
    let Some(&first) = elastic.first() else {
        return Ok(specs);
    };
    let PolicyConfig::Elastic { target_utilization, .. } = config.objects[first].policy else {
        unreachable!("filtered on elastic policies");
    };
    let tasks: Vec<ElasticTask> = elastic
        .iter()
        .map(|&i| {
            let o = &config.objects[i];
            let PolicyConfig::Elastic {
                elasticity, max_period, ..
            } = o.policy
            else {
                unreachable!("filtered on elastic policies");
            };
            let period = o.spec.update_period;
            ElasticTask {
                cost: o.spec.update_cost,
                period,
                elasticity: elasticity.unwrap_or_else(|| default_elasticity(period, o.spec.access_weight)),
                max_period: max_period.unwrap_or(config.horizon).max(period),
            }
        })
        .collect();
    let periods = elastic_rescale(&tasks, target_utilization)?;
    for (&i, &p) in elastic.iter().zip(&periods) {
        let spec = &mut specs[i];
        spec.vi = extend_vi_for_period(spec.vi, spec.update_period, p);
        spec.update_period = p;
    }
    Ok(specs)
}

/// Objects updated often relative to how often they are read stretch the most.
fn default_elasticity(period: Tick, access_weight: f64) -> f64 {
    1.0 / (period as f64 * access_weight.max(1e-6))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Committed(Tick),
    Missed(Tick),
    InFlight,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxnOutcome {
    pub id: TxnId,
    pub class: String,
    pub release: Tick,
    pub deadline: Tick,
    pub outcome: Outcome,
    pub restarts: Vec<(Tick, RestartCause)>,
    pub stale_at_commit: bool,
}

impl TxnOutcome {
    pub fn vi_restart_count(&self) -> usize {
        self.restarts.len()
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: MetricsReport,
    pub trace: Trace,
    pub outcomes: Vec<TxnOutcome>,
    pub store_stats: Vec<ObjectStoreStats>,
    /// Objects as simulated (after elastic rescaling).
    pub objects: Vec<ObjectSpec>,
}

impl RunOutput {
    pub fn trace_hash(&self) -> u64 {
        self.trace.hash()
    }
}

/// Runs one simulation from t=0 to the horizon.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    let mut engine = Engine::new(config)?;
    engine.run()?;
    engine.finish()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Held {
    Store { seq: u64 },
    Source { valid_until: Tick },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Access {
    object: usize,
    held: Held,
    sample_time: Tick,
    access_time: Tick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TxnState {
    Pending,
    Rejected,
    Ready,
    Retrieving(usize),
    AwaitingAnalysis(usize),
    Analyzing(usize),
    Blocked(usize),
    Committed(Tick),
    Missed(Tick),
}

impl TxnState {
    fn is_terminal(self) -> bool {
        matches!(self, TxnState::Committed(_) | TxnState::Missed(_) | TxnState::Rejected)
    }

    fn is_dispatchable(self) -> bool {
        matches!(self, TxnState::Ready | TxnState::AwaitingAnalysis(_))
    }
}

#[derive(Debug, Clone)]
struct TxnInstance {
    id: TxnId,
    class: usize,
    release: Tick,
    deadline: Tick,
    read_set: Vec<usize>,
    cursor: usize,
    state: TxnState,
    accesses: Vec<Access>,
    attempt: u32,
    restarts: Vec<(Tick, RestartCause)>,
    stale_at_commit: bool,
}

#[derive(Debug, Clone)]
enum PolicyState {
    Periodic,
    OnDemand { in_flight: bool },
    MkFirm { m: u32, k: u32, history: MkHistory },
    Similarity { delta: f64 },
    Prediction { state: PredictorState, epsilon: f64 },
}

/// Simulation state for one run. Owns everything it touches, so independent
/// runs can execute on separate threads.
pub struct Engine<'c> {
    config: &'c SimConfig,
    objects: Vec<ObjectSpec>,
    samplers: Vec<Sampler>,
    policies: Vec<PolicyState>,
    store: VersionStore,
    queue: EventQueue,
    txns: Vec<TxnInstance>,
    waiters: Vec<Vec<TxnId>>,
    cpu: Option<TxnId>,
    now: Tick,
    trace: Trace,
}

impl<'c> Engine<'c> {
    pub fn new(config: &'c SimConfig) -> Result<Self> {
        let objects = effective_objects(config)?;
        let samplers = objects
            .iter()
            .map(|o| Sampler::new(o.value_process.clone(), &o.id, config.seed))
            .collect();
        let policies = config
            .objects
            .iter()
            .map(|o| match o.policy {
                PolicyConfig::Periodic | PolicyConfig::Elastic { .. } => PolicyState::Periodic,
                PolicyConfig::OnDemand => PolicyState::OnDemand { in_flight: false },
                PolicyConfig::MkFirm { m, k } => PolicyState::MkFirm {
                    m,
                    k,
                    history: MkHistory::new(k),
                },
                PolicyConfig::Similarity { delta } => PolicyState::Similarity { delta },
                PolicyConfig::Prediction { predictor, epsilon } => PolicyState::Prediction {
                    state: PredictorState::new(predictor),
                    epsilon,
                },
            })
            .collect();
        let store = VersionStore::new(config.mode, objects.iter().map(|o| o.vi).collect());
        let trace = Trace::new(
            objects.iter().map(|o| o.id.clone()).collect(),
            config.transactions.iter().map(|t| t.id.clone()).collect(),
        );

        let mut arrivals: Vec<(Tick, usize)> = Vec::new();
        for (class, spec) in config.transactions.iter().enumerate() {
            arrivals.extend(
                expand_arrivals(spec, config.horizon, config.seed)
                    .into_iter()
                    .map(|t| (t, class)),
            );
        }
        arrivals.sort_unstable();
        let index = |id: &str| {
            config
                .object_index(id)
                .ok_or_else(|| Error::UnknownObject(id.to_string()))
        };
        let mut txns = Vec::with_capacity(arrivals.len());
        for (n, (release, class)) in arrivals.into_iter().enumerate() {
            let spec = &config.transactions[class];
            txns.push(TxnInstance {
                id: n as TxnId,
                class,
                release,
                deadline: release + spec.relative_deadline,
                read_set: spec.read_set.iter().map(|id| index(id)).collect::<Result<_>>()?,
                cursor: 0,
                state: TxnState::Pending,
                accesses: Vec::new(),
                attempt: 0,
                restarts: Vec::new(),
                stale_at_commit: false,
            });
        }

        Ok(Engine {
            config,
            waiters: vec![Vec::new(); objects.len()],
            objects,
            samplers,
            policies,
            store,
            queue: EventQueue::new(),
            txns,
            cpu: None,
            now: 0,
            trace,
        })
    }

    fn seed_events(&mut self) -> Result<()> {
        for (object, policy) in self.config.objects.iter().enumerate() {
            if policy.policy.is_periodic() {
                self.queue.push(0, EventKind::UpdateRelease { object });
            }
        }
        // Admission is decided before anything is queued; rejected instances
        // never enter the event queue.
        let mut verdicts = Vec::with_capacity(self.config.transactions.len());
        for spec in &self.config.transactions {
            verdicts.push(admit(spec, &self.objects, self.config.enforce_admission)?);
        }
        for i in 0..self.txns.len() {
            let class = self.txns[i].class;
            match &verdicts[class] {
                Admission::Admitted => {
                    let (id, release) = (self.txns[i].id, self.txns[i].release);
                    self.queue.push(release, EventKind::TxnArrival { txn: id });
                }
                Admission::Rejected(report) => {
                    self.txns[i].state = TxnState::Rejected;
                    let failing = report
                        .failing()
                        .filter_map(|e| self.config.object_index(&e.object))
                        .collect();
                    self.trace.push(
                        0,
                        TraceEvent::Rejected {
                            txn: self.txns[i].id,
                            class,
                            failing,
                        },
                    );
                }
            }
        }
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        self.seed_events()?;
        while let Some(t) = self.queue.peek_time() {
            if t > self.config.horizon {
                break;
            }
            self.now = t;
            while self.queue.peek_time() == Some(t) {
                let event = self.queue.pop().expect("peeked");
                self.handle(event)?;
            }
            self.dispatch()?;
        }
        Ok(())
    }

    pub fn finish(self) -> Result<RunOutput> {
        let mut recorder = MetricsRecorder::new(
            self.config.horizon,
            self.trace.classes.clone(),
            self.trace.objects.clone(),
            self.objects.iter().map(|o| o.update_cost).collect(),
        );
        recorder
            .record_all(&self.trace)
            .map_err(|e| Error::Internal(e.to_string()))?;
        let outcomes = self
            .txns
            .iter()
            .map(|t| TxnOutcome {
                id: t.id,
                class: self.config.transactions[t.class].id.clone(),
                release: t.release,
                deadline: t.deadline,
                outcome: match t.state {
                    TxnState::Committed(at) => Outcome::Committed(at),
                    TxnState::Missed(at) => Outcome::Missed(at),
                    TxnState::Rejected => Outcome::Rejected,
                    _ => Outcome::InFlight,
                },
                restarts: t.restarts.clone(),
                stale_at_commit: t.stale_at_commit,
            })
            .collect();
        Ok(RunOutput {
            report: recorder.finalize(),
            store_stats: (0..self.store.object_count()).map(|o| self.store.stats(o)).collect(),
            trace: self.trace,
            outcomes,
            objects: self.objects,
        })
    }

    fn txn(&self, id: TxnId) -> &TxnInstance {
        &self.txns[id as usize]
    }

    fn txn_mut(&mut self, id: TxnId) -> &mut TxnInstance {
        &mut self.txns[id as usize]
    }

    fn class_spec(&self, id: TxnId) -> &'c crate::temporal::UserTxnSpec {
        &self.config.transactions[self.txn(id).class]
    }

    fn is_current(&self, id: TxnId, attempt: u32) -> bool {
        let t = self.txn(id);
        !t.state.is_terminal() && t.attempt == attempt
    }

    fn handle(&mut self, event: Event) -> Result<()> {
        let now = self.now;
        match event.kind {
            EventKind::TxnArrival { txn } => {
                let t = self.txn_mut(txn);
                t.state = TxnState::Ready;
                let (class, deadline) = (t.class, t.deadline);
                self.queue.push(deadline, EventKind::DeadlineReached { txn });
                self.trace.push(now, TraceEvent::Released { txn, class, deadline });
            }
            EventKind::DeadlineReached { txn } => {
                if self.txn(txn).state.is_terminal() {
                    return Ok(());
                }
                self.release_holds(txn)?;
                let t = self.txn_mut(txn);
                t.state = TxnState::Missed(now);
                let class = t.class;
                self.trace.push(now, TraceEvent::Missed { txn, class });
            }
            EventKind::VIExpiry { txn, attempt, access } => {
                if !self.is_current(txn, attempt) {
                    return Ok(());
                }
                let acc = self.txn(txn).accesses[access];
                let valid_until = self.valid_until(&acc)?;
                if now <= valid_until {
                    self.queue
                        .push(valid_until + 1, EventKind::VIExpiry { txn, attempt, access });
                    self.trace.push(
                        now,
                        TraceEvent::Expiry {
                            txn,
                            object: acc.object,
                            outcome: ExpiryOutcome::Extended,
                        },
                    );
                } else if self.may_continue(&acc) {
                    self.trace.push(
                        now,
                        TraceEvent::Expiry {
                            txn,
                            object: acc.object,
                            outcome: ExpiryOutcome::Continue,
                        },
                    );
                } else {
                    self.trace.push(
                        now,
                        TraceEvent::Expiry {
                            txn,
                            object: acc.object,
                            outcome: ExpiryOutcome::Restart,
                        },
                    );
                    self.restart(txn, RestartCause::Expired)?;
                }
            }
            EventKind::RetrievalDone { txn, attempt } => {
                if !self.is_current(txn, attempt) {
                    return Ok(());
                }
                let TxnState::Retrieving(object) = self.txn(txn).state else {
                    return Err(Error::Internal(format!(
                        "txn {txn} finished a retrieval it was not running"
                    )));
                };
                self.txn_mut(txn).state = TxnState::AwaitingAnalysis(object);
                self.cpu = None;
                self.trace.push(now, TraceEvent::RetrievalDone { txn, object });
            }
            EventKind::AnalysisDone { txn, attempt } => {
                if !self.is_current(txn, attempt) {
                    return Ok(());
                }
                let TxnState::Analyzing(object) = self.txn(txn).state else {
                    return Err(Error::Internal(format!(
                        "txn {txn} finished an analysis it was not running"
                    )));
                };
                self.cpu = None;
                self.trace.push(now, TraceEvent::AnalysisDone { txn, object });
                let t = self.txn_mut(txn);
                t.cursor += 1;
                if t.cursor == t.read_set.len() {
                    self.commit(txn)?;
                } else {
                    t.state = TxnState::Ready;
                }
            }
            EventKind::UpdateRelease { object } => self.release_update(object)?,
            EventKind::UpdateInstalled {
                object,
                value,
                sample_time,
            } => self.install(object, value, sample_time)?,
        }
        Ok(())
    }

    fn valid_until(&self, acc: &Access) -> Result<Tick> {
        match acc.held {
            Held::Source { valid_until } => Ok(valid_until),
            Held::Store { seq } => self
                .store
                .version(acc.object, seq)
                .map(|v| v.valid_until(self.store.vi(acc.object)))
                .ok_or_else(|| Error::Internal(format!("held version {seq} of object {} vanished", acc.object))),
        }
    }

    fn may_continue(&self, acc: &Access) -> bool {
        match acc.held {
            Held::Store { seq } => self.store.may_continue(acc.object, seq, acc.access_time, self.now),
            Held::Source { valid_until } => match self.config.mode {
                // Sampled at access time, so it was fresh then.
                FreshnessMode::MultiVersion => true,
                FreshnessMode::Classical => self.now <= valid_until,
            },
        }
    }

    fn release_holds(&mut self, txn: TxnId) -> Result<()> {
        let accesses = std::mem::take(&mut self.txn_mut(txn).accesses);
        for acc in &accesses {
            if let Held::Store { seq } = acc.held {
                self.store.unpin(acc.object, seq, txn)?;
            }
        }
        if self.cpu == Some(txn) {
            self.cpu = None;
        }
        if let TxnState::Blocked(object) = self.txn(txn).state {
            self.waiters[object].retain(|&w| w != txn);
        }
        Ok(())
    }

    fn commit(&mut self, txn: TxnId) -> Result<()> {
        let now = self.now;
        let mut stale = false;
        for acc in &self.txn(txn).accesses {
            stale |= now > self.valid_until(acc)?;
        }
        self.release_holds(txn)?;
        let t = self.txn_mut(txn);
        t.state = TxnState::Committed(now);
        t.stale_at_commit = stale;
        let class = t.class;
        self.trace.push(
            now,
            TraceEvent::Commit {
                txn,
                class,
                stale_at_commit: stale,
            },
        );
        let reclaimed = self.store.gc(now);
        self.trace.push(
            now,
            TraceEvent::Gc {
                reclaimed,
                live_versions: self.store.live_version_count(),
            },
        );
        Ok(())
    }

    /// Reacquire and reanalyze everything: all holds are dropped and the
    /// traversal starts over from the first object.
    fn restart(&mut self, txn: TxnId, cause: RestartCause) -> Result<()> {
        self.release_holds(txn)?;
        let now = self.now;
        let t = self.txn_mut(txn);
        t.cursor = 0;
        t.attempt += 1;
        t.state = TxnState::Ready;
        t.restarts.push((now, cause));
        let (class, restarts) = (t.class, t.restarts.len() as u32);
        self.trace.push(
            now,
            TraceEvent::Restart {
                txn,
                class,
                cause,
                restarts,
            },
        );
        Ok(())
    }

    fn wake(&mut self, object: usize) {
        for txn in std::mem::take(&mut self.waiters[object]) {
            let t = self.txn_mut(txn);
            if t.state == TxnState::Blocked(object) {
                t.state = TxnState::Ready;
            }
        }
    }

    fn release_update(&mut self, object: usize) -> Result<()> {
        let now = self.now;
        let sampled = self.samplers[object].at(now);
        let stored = self.store.newest(object).map(|v| v.value);
        let label = self.config.objects[object].policy.label();
        let (decision, verdict, reference, effective) = match &mut self.policies[object] {
            PolicyState::Periodic => (Decision::Perform, "perform", None, sampled),
            PolicyState::OnDemand { .. } => {
                return Err(Error::Internal(format!(
                    "periodic release for on-demand object {object}"
                )));
            }
            PolicyState::MkFirm { m, k, history } => {
                let d = if stored.is_none() {
                    // Nothing to extend yet.
                    history.push(Decision::Perform);
                    Decision::Perform
                } else {
                    mk_firm_decision(*m, *k, history)
                };
                let effective = if d == Decision::Skip {
                    stored.unwrap_or(sampled)
                } else {
                    sampled
                };
                (d, d.as_str(), stored, effective)
            }
            PolicyState::Similarity { delta } => match stored {
                None => (Decision::Perform, "perform", None, sampled),
                Some(s) => {
                    let d = similarity_decision(s, sampled, *delta);
                    (d, d.as_str(), Some(s), if d == Decision::Skip { s } else { sampled })
                }
            },
            PolicyState::Prediction { state, epsilon } => {
                let p = prediction_decision(state, (now, sampled), *epsilon);
                let d = match p.decision {
                    Transmission::Transmit => Decision::Perform,
                    Transmission::Suppress => Decision::Skip,
                };
                (d, p.decision.as_str(), p.predicted, p.sink_value)
            }
        };
        self.trace.push(
            now,
            TraceEvent::Decision {
                object,
                policy: label,
                decision: verdict,
                sampled,
                reference,
                effective,
            },
        );
        let spec = &self.objects[object];
        let (period, cost) = (spec.update_period, spec.update_cost);
        match decision {
            Decision::Perform => self.queue.push(
                now + cost,
                EventKind::UpdateInstalled {
                    object,
                    value: sampled,
                    sample_time: now,
                },
            ),
            Decision::Skip => {
                // The skipped instance confirms the stored value for one more period.
                if let Some(valid_until) = self.store.extend_newest(object, period) {
                    self.trace.push(now, TraceEvent::Extend { object, valid_until });
                    self.wake(object);
                }
            }
        }
        if now + period <= self.config.horizon {
            self.queue.push(now + period, EventKind::UpdateRelease { object });
        }
        Ok(())
    }

    fn install(&mut self, object: usize, value: f64, sample_time: Tick) -> Result<()> {
        let now = self.now;
        let out = self.store.install(object, value, sample_time)?;
        self.trace.push(
            now,
            TraceEvent::Install {
                object,
                seq: out.seq,
                sample_time,
                value,
                live_versions: out.live_versions,
            },
        );
        if !out.displaced.is_empty() {
            for txn in out.displaced {
                self.restart(txn, RestartCause::Superseded)?;
            }
            let reclaimed = self.store.gc(now);
            self.trace.push(
                now,
                TraceEvent::Gc {
                    reclaimed,
                    live_versions: self.store.live_version_count(),
                },
            );
        }
        if let PolicyState::OnDemand { in_flight } = &mut self.policies[object] {
            *in_flight = false;
        }
        self.wake(object);
        Ok(())
    }

    fn dispatch(&mut self) -> Result<()> {
        while self.cpu.is_none() {
            let candidates: Vec<DispatchKey<'_>> = self
                .txns
                .iter()
                .filter(|t| t.state.is_dispatchable())
                .map(|t| DispatchKey {
                    deadline: t.deadline,
                    class_id: &self.config.transactions[t.class].id,
                    release: t.release,
                    id: t.id,
                })
                .collect();
            let Some(pick) = dispatch(&candidates) else {
                break;
            };
            let txn = candidates[pick].id;
            self.start_segment(txn)?;
        }
        Ok(())
    }

    fn start_segment(&mut self, txn: TxnId) -> Result<()> {
        let now = self.now;
        let spec = self.class_spec(txn);
        match self.txn(txn).state {
            TxnState::AwaitingAnalysis(object) => {
                let analysis = spec.analysis(&self.objects[object].id);
                let attempt = self.txn(txn).attempt;
                self.txn_mut(txn).state = TxnState::Analyzing(object);
                self.cpu = Some(txn);
                self.queue
                    .push(now + analysis, EventKind::AnalysisDone { txn, attempt });
                self.trace.push(
                    now,
                    TraceEvent::Dispatched {
                        txn,
                        object,
                        segment: Segment::Analysis,
                    },
                );
            }
            TxnState::Ready => {
                let t = self.txn(txn);
                let object = t.read_set[t.cursor];
                match spec.retrieval_mode {
                    RetrievalMode::Source => self.start_source(txn, object),
                    RetrievalMode::Store => self.start_store_read(txn, object)?,
                }
            }
            other => return Err(Error::Internal(format!("cannot dispatch txn {txn} in state {other:?}"))),
        }
        Ok(())
    }

    fn start_source(&mut self, txn: TxnId, object: usize) {
        let now = self.now;
        let spec = self.class_spec(txn);
        let obj = &self.objects[object];
        let retrieval = spec.retrieval(&obj.id);
        let valid_until = now + obj.vi;
        let value = self.samplers[object].at(now);
        let t = self.txn_mut(txn);
        let attempt = t.attempt;
        let access = t.accesses.len();
        t.accesses.push(Access {
            object,
            held: Held::Source { valid_until },
            sample_time: now,
            access_time: now,
        });
        t.state = TxnState::Retrieving(object);
        self.cpu = Some(txn);
        self.queue
            .push(now + retrieval, EventKind::RetrievalDone { txn, attempt });
        self.queue
            .push(valid_until + 1, EventKind::VIExpiry { txn, attempt, access });
        self.trace.push(now, TraceEvent::SourceSample { txn, object, value });
        self.trace.push(
            now,
            TraceEvent::Dispatched {
                txn,
                object,
                segment: Segment::Retrieval,
            },
        );
    }

    fn start_store_read(&mut self, txn: TxnId, object: usize) -> Result<()> {
        let now = self.now;
        let spec = self.class_spec(txn);
        match self.store.read_latest(object, now, txn)? {
            ReadOutcome::Fresh(read) => {
                let analysis = spec.analysis(&self.objects[object].id);
                let t = self.txn_mut(txn);
                let attempt = t.attempt;
                let access = t.accesses.len();
                t.accesses.push(Access {
                    object,
                    held: Held::Store { seq: read.seq },
                    sample_time: read.sample_time,
                    access_time: now,
                });
                t.state = TxnState::Analyzing(object);
                let class = t.class;
                self.cpu = Some(txn);
                self.queue
                    .push(now + analysis, EventKind::AnalysisDone { txn, attempt });
                self.queue
                    .push(read.valid_until + 1, EventKind::VIExpiry { txn, attempt, access });
                self.trace.push(
                    now,
                    TraceEvent::Read {
                        txn,
                        class,
                        object,
                        seq: read.seq,
                        sample_time: read.sample_time,
                        valid_until: read.valid_until,
                    },
                );
                self.trace.push(
                    now,
                    TraceEvent::Dispatched {
                        txn,
                        object,
                        segment: Segment::Analysis,
                    },
                );
            }
            ReadOutcome::NoFreshVersion if spec.source_fallback => self.start_source(txn, object),
            ReadOutcome::NoFreshVersion => {
                if let PolicyState::OnDemand { in_flight } = &mut self.policies[object] {
                    if !*in_flight {
                        *in_flight = true;
                        let sampled = self.samplers[object].at(now);
                        let cost = self.objects[object].update_cost;
                        self.queue.push(
                            now + cost,
                            EventKind::UpdateInstalled {
                                object,
                                value: sampled,
                                sample_time: now,
                            },
                        );
                        self.trace.push(now, TraceEvent::Refresh { object, txn, sampled });
                    }
                }
                self.txn_mut(txn).state = TxnState::Blocked(object);
                self.waiters[object].push(txn);
                self.trace.push(now, TraceEvent::Blocked { txn, object });
            }
        }
        Ok(())
    }
}
