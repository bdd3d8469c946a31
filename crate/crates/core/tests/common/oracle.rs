//! Brute-force reference simulator. Walks every tick from 0 to the horizon
//! and applies the rules directly, with no event queue and no version store.
//! Only value generation and arrival expansion are shared with the library.

use freshsim::policy::PolicyConfig;
use freshsim::process::Sampler;
use freshsim::workload::expand_arrivals;
use freshsim::{FreshnessMode, RetrievalMode, SimConfig, Tick};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Committed(Tick),
    Missed(Tick),
    InFlight,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceResult {
    pub class: String,
    pub release: Tick,
    pub end: End,
    /// (tick, "expired" | "superseded")
    pub restarts: Vec<(Tick, &'static str)>,
    pub stale_at_commit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub instances: Vec<InstanceResult>,
    /// (install tick, object index, sample time)
    pub installs: Vec<(Tick, usize, Tick)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Phase {
    Waiting,
    Ready,
    Fetching(usize),
    Fetched(usize),
    Analyzing(usize),
    Blocked(usize),
    Over,
}

#[derive(Clone, Copy, Debug)]
enum Hold {
    Source { until: Tick },
    Version { object: usize, index: usize },
}

struct Inst {
    class: usize,
    release: Tick,
    deadline: Tick,
    reads: Vec<usize>,
    cursor: usize,
    phase: Phase,
    segment_end: Tick,
    holds: Vec<Hold>,
    restarts: Vec<(Tick, &'static str)>,
    end: End,
    stale_at_commit: bool,
}

struct Ver {
    sample_time: Tick,
    value: f64,
    extra: Tick,
}

enum Gate {
    Periodic,
    OnDemand,
    MkFirm { m: u32, k: u32, past: Vec<bool> },
    Similarity { delta: f64 },
}

struct World<'a> {
    cfg: &'a SimConfig,
    vi: Vec<Tick>,
    versions: Vec<Vec<Ver>>,
    gates: Vec<Gate>,
    refreshing: Vec<bool>,
    due: Vec<(Tick, usize, Tick, f64)>,
    installs: Vec<(Tick, usize, Tick)>,
    insts: Vec<Inst>,
    cpu: Option<usize>,
    samplers: Vec<Sampler>,
}

impl World<'_> {
    fn until(&self, h: Hold) -> Tick {
        match h {
            Hold::Source { until } => until,
            Hold::Version { object, index } => {
                let v = &self.versions[object][index];
                v.sample_time + self.vi[object] + v.extra
            }
        }
    }

    fn drop_holds(&mut self, i: usize) {
        self.insts[i].holds.clear();
        if self.cpu == Some(i) {
            self.cpu = None;
        }
    }

    fn restart(&mut self, i: usize, t: Tick, why: &'static str) {
        self.drop_holds(i);
        let x = &mut self.insts[i];
        x.cursor = 0;
        x.phase = Phase::Ready;
        x.restarts.push((t, why));
    }

    fn live(&self, i: usize) -> bool {
        !matches!(self.insts[i].phase, Phase::Over | Phase::Waiting)
    }

    fn apply_install(&mut self, t: Tick, object: usize, sample_time: Tick, value: f64) {
        self.versions[object].push(Ver {
            sample_time,
            value,
            extra: 0,
        });
        self.installs.push((t, object, sample_time));
        if self.cfg.mode == FreshnessMode::Classical {
            for i in 0..self.insts.len() {
                let holds_it = self.live(i)
                    && self.insts[i]
                        .holds
                        .iter()
                        .any(|h| matches!(h, Hold::Version { object: o, .. } if *o == object));
                if holds_it {
                    self.restart(i, t, "superseded");
                }
            }
        }
        self.refreshing[object] = false;
        self.wake(object);
    }

    fn wake(&mut self, object: usize) {
        for x in &mut self.insts {
            if x.phase == Phase::Blocked(object) {
                x.phase = Phase::Ready;
            }
        }
    }

    fn installs_due(&mut self, t: Tick) -> bool {
        let mut now: Vec<_> = self.due.iter().copied().filter(|d| d.0 == t).collect();
        if now.is_empty() {
            return false;
        }
        self.due.retain(|d| d.0 != t);
        now.sort_by_key(|d| d.1);
        for (_, object, sample_time, value) in now {
            self.apply_install(t, object, sample_time, value);
        }
        true
    }

    fn segment_done(&mut self, t: Tick) -> bool {
        let Some(i) = self.cpu else { return false };
        if self.insts[i].segment_end != t {
            return false;
        }
        self.cpu = None;
        match self.insts[i].phase {
            Phase::Fetching(o) => self.insts[i].phase = Phase::Fetched(o),
            Phase::Analyzing(_) => {
                self.insts[i].cursor += 1;
                if self.insts[i].cursor == self.insts[i].reads.len() {
                    let stale = self.insts[i].holds.iter().any(|&h| t > self.until(h));
                    self.drop_holds(i);
                    let x = &mut self.insts[i];
                    x.phase = Phase::Over;
                    x.end = End::Committed(t);
                    x.stale_at_commit = stale;
                } else {
                    self.insts[i].phase = Phase::Ready;
                }
            }
            p => panic!("oracle: segment ended in phase {p:?}"),
        }
        true
    }

    fn pick(&self) -> Option<usize> {
        (0..self.insts.len())
            .filter(|&i| matches!(self.insts[i].phase, Phase::Ready | Phase::Fetched(_)))
            .min_by(|&a, &b| {
                let key = |i: usize| {
                    let x = &self.insts[i];
                    (x.deadline, &self.cfg.transactions[x.class].id, x.release, i)
                };
                key(a).cmp(&key(b))
            })
    }

    fn start(&mut self, i: usize, t: Tick) {
        let spec = &self.cfg.transactions[self.insts[i].class];
        if let Phase::Fetched(o) = self.insts[i].phase {
            let a = spec.analysis_time[&self.cfg.objects[o].spec.id];
            self.insts[i].phase = Phase::Analyzing(o);
            self.insts[i].segment_end = t + a;
            self.cpu = Some(i);
            return;
        }
        let o = self.insts[i].reads[self.insts[i].cursor];
        let name = &self.cfg.objects[o].spec.id;
        let fetch = |w: &mut Self| {
            let r = spec.retrieval_time[name];
            let until = t + w.vi[o];
            w.samplers[o].at(t);
            let x = &mut w.insts[i];
            x.holds.push(Hold::Source { until });
            x.phase = Phase::Fetching(o);
            x.segment_end = t + r;
            w.cpu = Some(i);
        };
        if spec.retrieval_mode == RetrievalMode::Source {
            fetch(self);
            return;
        }
        let newest = self.versions[o].len().checked_sub(1);
        if let Some(index) = newest.filter(|&n| t <= self.until(Hold::Version { object: o, index: n })) {
            let x = &mut self.insts[i];
            x.holds.push(Hold::Version { object: o, index });
            x.phase = Phase::Analyzing(o);
            x.segment_end = t + spec.analysis_time[name];
            self.cpu = Some(i);
        } else if spec.source_fallback {
            fetch(self);
        } else {
            if matches!(self.gates[o], Gate::OnDemand) && !self.refreshing[o] {
                self.refreshing[o] = true;
                let v = self.samplers[o].at(t);
                let c = self.cfg.objects[o].spec.update_cost;
                self.due.push((t + c, o, t, v));
            }
            self.insts[i].phase = Phase::Blocked(o);
        }
    }

    fn release_update(&mut self, t: Tick, o: usize) {
        let sampled = self.samplers[o].at(t);
        let stored = self.versions[o].last().map(|v| v.value);
        let perform = match (&mut self.gates[o], stored) {
            (Gate::Periodic, _) => true,
            (Gate::OnDemand, _) => unreachable!("on-demand objects have no periodic instances"),
            (Gate::MkFirm { past, .. }, None) => {
                past.push(true);
                true
            }
            (Gate::MkFirm { m, k, past }, Some(_)) => {
                let k = *k as usize;
                let n = past.len();
                let window = k - 1;
                let seen = &past[n.saturating_sub(window)..];
                let performs = (window - seen.len()) + seen.iter().filter(|&&p| p).count();
                let p = performs < *m as usize;
                past.push(p);
                p
            }
            (Gate::Similarity { .. }, None) => true,
            (Gate::Similarity { delta }, Some(s)) => (sampled - s).abs() >= *delta,
        };
        let spec = &self.cfg.objects[o].spec;
        if perform {
            if spec.update_cost == 0 {
                self.apply_install(t, o, t, sampled);
            } else {
                self.due.push((t + spec.update_cost, o, t, sampled));
            }
        } else if let Some(v) = self.versions[o].last_mut() {
            v.extra += spec.update_period;
            self.wake(o);
        }
    }
}

/// Runs `cfg` tick by tick. Panics on policies it does not model (elastic,
/// prediction).
pub fn simulate(cfg: &SimConfig) -> OracleRun {
    let vi: Vec<Tick> = cfg.objects.iter().map(|o| o.spec.vi).collect();
    let gates = cfg
        .objects
        .iter()
        .map(|o| match o.policy {
            PolicyConfig::Periodic => Gate::Periodic,
            PolicyConfig::OnDemand => Gate::OnDemand,
            PolicyConfig::MkFirm { m, k } => Gate::MkFirm { m, k, past: Vec::new() },
            PolicyConfig::Similarity { delta } => Gate::Similarity { delta },
            ref p => panic!("oracle does not model policy {p}"),
        })
        .collect();

    let mut releases: Vec<(Tick, usize)> = Vec::new();
    for (c, spec) in cfg.transactions.iter().enumerate() {
        for r in expand_arrivals(spec, cfg.horizon, cfg.seed) {
            releases.push((r, c));
        }
    }
    releases.sort();
    let index = |id: &String| cfg.objects.iter().position(|o| &o.spec.id == id).unwrap();
    let insts = releases
        .iter()
        .map(|&(release, class)| {
            let spec = &cfg.transactions[class];
            let reads: Vec<usize> = spec.read_set.iter().map(index).collect();
            let feasible = reads.iter().all(|&o| {
                let name = &cfg.objects[o].spec.id;
                vi[o] >= spec.retrieval_time[name] + spec.analysis_time[name]
            });
            let rejected = cfg.enforce_admission && !feasible;
            Inst {
                class,
                release,
                deadline: release + spec.relative_deadline,
                reads,
                cursor: 0,
                phase: if rejected { Phase::Over } else { Phase::Waiting },
                segment_end: 0,
                holds: Vec::new(),
                restarts: Vec::new(),
                end: if rejected { End::Rejected } else { End::InFlight },
                stale_at_commit: false,
            }
        })
        .collect();

    let mut w = World {
        cfg,
        versions: cfg.objects.iter().map(|_| Vec::new()).collect(),
        gates,
        refreshing: vec![false; cfg.objects.len()],
        due: Vec::new(),
        installs: Vec::new(),
        insts,
        cpu: None,
        samplers: cfg
            .objects
            .iter()
            .map(|o| Sampler::new(o.spec.value_process.clone(), &o.spec.id, cfg.seed))
            .collect(),
        vi,
    };

    for t in 0..=cfg.horizon {
        w.installs_due(t);

        if cfg.mode == FreshnessMode::Classical {
            for i in 0..w.insts.len() {
                if w.live(i) && w.insts[i].holds.iter().any(|&h| t > w.until(h)) {
                    w.restart(i, t, "expired");
                }
            }
        }

        w.segment_done(t);

        for i in 0..w.insts.len() {
            if w.live(i) && w.insts[i].deadline == t {
                w.drop_holds(i);
                w.insts[i].phase = Phase::Over;
                w.insts[i].end = End::Missed(t);
            }
        }

        for o in 0..cfg.objects.len() {
            let p = cfg.objects[o].spec.update_period;
            if !matches!(w.gates[o], Gate::OnDemand) && t % p == 0 {
                w.release_update(t, o);
            }
        }

        for x in &mut w.insts {
            if x.phase == Phase::Waiting && x.release == t {
                x.phase = Phase::Ready;
            }
        }

        loop {
            while w.cpu.is_none() {
                match w.pick() {
                    Some(i) => w.start(i, t),
                    None => break,
                }
            }
            let installed = w.installs_due(t);
            let finished = w.segment_done(t);
            if !installed && !finished {
                break;
            }
        }
    }

    OracleRun {
        instances: w
            .insts
            .into_iter()
            .map(|x| InstanceResult {
                class: cfg.transactions[x.class].id.clone(),
                release: x.release,
                end: x.end,
                restarts: x.restarts,
                stale_at_commit: x.stale_at_commit,
            })
            .collect(),
        installs: w.installs,
    }
}
