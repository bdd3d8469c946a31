//! Simulation configuration: the JSON schema, validation, canonical emission
//! and expansion of transaction arrivals.
//!
//! ```json
//! {
//!   "horizon": 100, "mode": "classical", "enforce_admission": false, "seed": 7,
//!   "objects": [{"id": "o1", "vi": 10, "period": 5, "cost": 0, "access_weight": 1.0,
//!                "process": {"kind": "constant", "value": 1.0},
//!                "policy": {"kind": "periodic"}}],
//!   "transactions": [{"id": "t1", "read_set": ["o1"], "retrieval": {"o1": 2},
//!                     "analysis": {"o1": 3}, "deadline": 20,
//!                     "arrival": {"kind": "once", "at": 0}, "retrieval_mode": "source"}]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::policy::{PolicyConfig, Predictor};
use crate::process::ValueProcess;
use crate::temporal::{Arrival, FreshnessMode, ObjectSpec, RetrievalMode, Tick, UserTxnSpec};

/// Identifier of the only supported arrival generator: ChaCha8 seeded per
/// transaction class, exponential gaps by inverse transform, rounded up to
/// whole ticks.
pub const ARRIVAL_RNG: &str = "chacha8-inverse-exp";

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectConfig {
    pub spec: ObjectSpec,
    pub policy: PolicyConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub horizon: Tick,
    pub mode: FreshnessMode,
    pub enforce_admission: bool,
    pub seed: u64,
    pub objects: Vec<ObjectConfig>,
    pub transactions: Vec<UserTxnSpec>,
}

impl SimConfig {
    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.spec.id == id)
    }

    pub fn object_specs(&self) -> Vec<ObjectSpec> {
        self.objects.iter().map(|o| o.spec.clone()).collect()
    }

    /// Label for the policy column of reports: the shared policy name, or
    /// `mixed`.
    pub fn policy_label(&self) -> String {
        let labels: BTreeSet<String> = self.objects.iter().map(|o| o.policy.to_string()).collect();
        match labels.len() {
            0 => "none".to_string(),
            1 => labels.into_iter().next().unwrap_or_default(),
            _ => "mixed".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// Every problem found in a configuration, not just the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|v| v.path.as_str())
    }

    pub fn contains(&self, path: &str, fragment: &str) -> bool {
        self.0.iter().any(|v| v.path == path && v.message.contains(fragment))
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration ({} problem(s))", self.0.len())?;
        for v in &self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

struct Checker {
    errors: Vec<Violation>,
}

impl Checker {
    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(Violation {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'v>(
        &mut self,
        v: &'v Value,
        path: &str,
        allowed: &[&str],
        required: &[&str],
    ) -> Option<&'v Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.fail(path, "expected an object");
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.fail(&join(path, key), "unknown key");
            }
        }
        for key in required {
            if !map.contains_key(*key) {
                self.fail(&join(path, key), "missing required key");
            }
        }
        Some(map)
    }

    fn tick(&mut self, map: &Map<String, Value>, key: &str, path: &str) -> Option<Tick> {
        let v = map.get(key)?;
        let p = join(path, key);
        match v.as_u64() {
            Some(t) => Some(t),
            None => {
                self.fail(&p, "expected a non-negative integer tick count");
                None
            }
        }
    }

    fn float(&mut self, map: &Map<String, Value>, key: &str, path: &str) -> Option<f64> {
        let v = map.get(key)?;
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.fail(&join(path, key), "expected a finite number");
                None
            }
        }
    }

    fn string<'v>(&mut self, map: &'v Map<String, Value>, key: &str, path: &str) -> Option<&'v str> {
        let v = map.get(key)?;
        match v.as_str() {
            Some(s) => Some(s),
            None => {
                self.fail(&join(path, key), "expected a string");
                None
            }
        }
    }

    fn boolean(&mut self, map: &Map<String, Value>, key: &str, path: &str) -> Option<bool> {
        let v = map.get(key)?;
        match v.as_bool() {
            Some(b) => Some(b),
            None => {
                self.fail(&join(path, key), "expected a boolean");
                None
            }
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Parses and fully validates a JSON configuration.
pub fn parse_config(text: &str) -> Result<SimConfig, ValidationErrors> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        ValidationErrors(vec![Violation {
            path: String::new(),
            message: format!("syntax error at line {} column {}: {e}", e.line(), e.column()),
        }])
    })?;
    config_from_value(&value)
}

pub fn config_from_value(value: &Value) -> Result<SimConfig, ValidationErrors> {
    let mut c = Checker { errors: Vec::new() };
    let top = c.object(
        value,
        "",
        &[
            "horizon",
            "mode",
            "enforce_admission",
            "seed",
            "objects",
            "transactions",
            "rng",
        ],
        &["horizon", "mode", "objects", "transactions"],
    );
    let Some(top) = top else {
        return Err(ValidationErrors(c.errors));
    };

    let horizon = c.tick(top, "horizon", "");
    if horizon == Some(0) {
        c.fail("horizon", "must be positive");
    }
    let mode = c.string(top, "mode", "").and_then(|s| {
        let m = FreshnessMode::parse(s);
        if m.is_none() {
            c.fail(
                "mode",
                format!("unknown mode `{s}` (expected classical or multiversion)"),
            );
        }
        m
    });
    let enforce_admission = c.boolean(top, "enforce_admission", "").unwrap_or(false);
    let seed = c.tick(top, "seed", "").unwrap_or(0);
    if let Some(rng) = c.string(top, "rng", "") {
        if rng != ARRIVAL_RNG {
            c.fail("rng", format!("unsupported generator `{rng}` (only {ARRIVAL_RNG})"));
        }
    }

    let mut objects = Vec::new();
    match top.get("objects") {
        Some(Value::Array(items)) => {
            let mut seen = BTreeSet::new();
            for (i, item) in items.iter().enumerate() {
                let path = format!("objects[{i}]");
                if let Some(obj) = parse_object(&mut c, item, &path) {
                    if !seen.insert(obj.spec.id.clone()) {
                        c.fail(&join(&path, "id"), format!("duplicate object id `{}`", obj.spec.id));
                    }
                    objects.push(obj);
                }
            }
        }
        Some(_) => c.fail("objects", "expected an array"),
        None => {}
    }

    let mut transactions = Vec::new();
    match top.get("transactions") {
        Some(Value::Array(items)) => {
            let known: BTreeSet<&str> = top
                .get("objects")
                .and_then(Value::as_array)
                .map(|a| a.iter().filter_map(|o| o.get("id").and_then(Value::as_str)).collect())
                .unwrap_or_default();
            let mut seen = BTreeSet::new();
            for (i, item) in items.iter().enumerate() {
                let path = format!("transactions[{i}]");
                if let Some(txn) = parse_txn(&mut c, item, &path, &known) {
                    if !seen.insert(txn.id.clone()) {
                        c.fail(&join(&path, "id"), format!("duplicate transaction id `{}`", txn.id));
                    }
                    transactions.push(txn);
                }
            }
        }
        Some(_) => c.fail("transactions", "expected an array"),
        None => {}
    }

    // Elastic objects are rescaled as one group, so they must agree on the target.
    let targets: BTreeSet<u64> = objects
        .iter()
        .filter_map(|o| match o.policy {
            PolicyConfig::Elastic { target_utilization, .. } => Some(target_utilization.to_bits()),
            _ => None,
        })
        .collect();
    if targets.len() > 1 {
        c.fail("objects", "elastic objects must share one target_utilization");
    }

    if !c.errors.is_empty() {
        return Err(ValidationErrors(c.errors));
    }
    match (horizon, mode) {
        (Some(horizon), Some(mode)) => Ok(SimConfig {
            horizon,
            mode,
            enforce_admission,
            seed,
            objects,
            transactions,
        }),
        _ => Err(ValidationErrors(vec![Violation {
            path: String::new(),
            message: "incomplete configuration".into(),
        }])),
    }
}

fn parse_object(c: &mut Checker, v: &Value, path: &str) -> Option<ObjectConfig> {
    const KEYS: &[&str] = &["id", "vi", "period", "cost", "access_weight", "process", "policy"];
    const REQUIRED: &[&str] = &["id", "vi", "period", "process", "policy"];
    let map = c.object(v, path, KEYS, REQUIRED)?;
    let before = c.errors.len();
    let id = c.string(map, "id", path).map(str::to_string);
    let vi = c.tick(map, "vi", path);
    let period = c.tick(map, "period", path);
    let cost = c.tick(map, "cost", path).unwrap_or(0);
    let access_weight = c.float(map, "access_weight", path).unwrap_or(1.0);
    if vi == Some(0) {
        c.fail(&join(path, "vi"), "must be positive");
    }
    if period == Some(0) {
        c.fail(&join(path, "period"), "must be positive");
    }
    if let Some(p) = period {
        if cost > p {
            c.fail(&join(path, "cost"), format!("cost {cost} exceeds period {p}"));
        }
    }
    if access_weight < 0.0 {
        c.fail(&join(path, "access_weight"), "must be non-negative");
    }
    let process = map
        .get("process")
        .and_then(|p| parse_process(c, p, &join(path, "process")));
    let policy = map
        .get("policy")
        .and_then(|p| parse_policy(c, p, &join(path, "policy"), period));
    if c.errors.len() != before {
        return None;
    }
    Some(ObjectConfig {
        spec: ObjectSpec {
            id: id?,
            vi: vi?,
            update_period: period?,
            update_cost: cost,
            value_process: process?,
            access_weight,
        },
        policy: policy?,
    })
}

fn parse_process(c: &mut Checker, v: &Value, path: &str) -> Option<ValueProcess> {
    let kind = v.get("kind").and_then(Value::as_str);
    match kind {
        Some("constant") => {
            let map = c.object(v, path, &["kind", "value"], &["value"])?;
            Some(ValueProcess::Constant {
                value: c.float(map, "value", path)?,
            })
        }
        Some("random_walk") => {
            let map = c.object(v, path, &["kind", "start", "step_sigma", "seed"], &["step_sigma"])?;
            let start = c.float(map, "start", path).unwrap_or(0.0);
            let step_sigma = c.float(map, "step_sigma", path)?;
            if step_sigma < 0.0 {
                c.fail(&join(path, "step_sigma"), "must be non-negative");
                return None;
            }
            let seed = c.tick(map, "seed", path);
            Some(ValueProcess::RandomWalk {
                start,
                step_sigma,
                seed,
            })
        }
        Some("sinusoid") => {
            let map = c.object(
                v,
                path,
                &["kind", "amplitude", "period_ticks", "phase", "offset"],
                &["amplitude", "period_ticks"],
            )?;
            let amplitude = c.float(map, "amplitude", path)?;
            let period_ticks = c.float(map, "period_ticks", path)?;
            if period_ticks <= 0.0 {
                c.fail(&join(path, "period_ticks"), "must be positive");
                return None;
            }
            Some(ValueProcess::Sinusoid {
                amplitude,
                period_ticks,
                phase: c.float(map, "phase", path).unwrap_or(0.0),
                offset: c.float(map, "offset", path).unwrap_or(0.0),
            })
        }
        Some("trace") => {
            c.fail(path, "trace-driven value processes are not supported");
            None
        }
        Some(other) => {
            c.fail(&join(path, "kind"), format!("unknown process kind `{other}`"));
            None
        }
        None => {
            c.fail(&join(path, "kind"), "missing process kind");
            None
        }
    }
}

fn parse_policy(c: &mut Checker, v: &Value, path: &str, period: Option<Tick>) -> Option<PolicyConfig> {
    let kind = v.get("kind").and_then(Value::as_str);
    let policy = match kind {
        Some("periodic") => {
            c.object(v, path, &["kind"], &[])?;
            PolicyConfig::Periodic
        }
        Some("on_demand") => {
            c.object(v, path, &["kind"], &[])?;
            PolicyConfig::OnDemand
        }
        Some("elastic") => {
            let map = c.object(
                v,
                path,
                &["kind", "target_utilization", "elasticity", "max_period"],
                &["target_utilization"],
            )?;
            let max_period = c.tick(map, "max_period", path);
            if let (Some(mp), Some(p)) = (max_period, period) {
                if mp < p {
                    c.fail(&join(path, "max_period"), format!("max_period {mp} below period {p}"));
                }
            }
            PolicyConfig::Elastic {
                target_utilization: c.float(map, "target_utilization", path)?,
                elasticity: c.float(map, "elasticity", path),
                max_period,
            }
        }
        Some("mk_firm") => {
            let map = c.object(v, path, &["kind", "m", "k"], &["m", "k"])?;
            let m = c.tick(map, "m", path)?;
            let k = c.tick(map, "k", path)?;
            let (Ok(m), Ok(k)) = (u32::try_from(m), u32::try_from(k)) else {
                c.fail(path, "m and k must fit in 32 bits");
                return None;
            };
            PolicyConfig::MkFirm { m, k }
        }
        Some("similarity") => {
            let map = c.object(v, path, &["kind", "delta"], &["delta"])?;
            PolicyConfig::Similarity {
                delta: c.float(map, "delta", path)?,
            }
        }
        Some("prediction") => {
            let map = c.object(v, path, &["kind", "predictor", "epsilon"], &["predictor", "epsilon"])?;
            let name = c.string(map, "predictor", path)?;
            let Some(predictor) = Predictor::parse(name) else {
                c.fail(&join(path, "predictor"), format!("unknown predictor `{name}`"));
                return None;
            };
            PolicyConfig::Prediction {
                predictor,
                epsilon: c.float(map, "epsilon", path)?,
            }
        }
        Some(other) => {
            c.fail(&join(path, "kind"), format!("unknown policy kind `{other}`"));
            return None;
        }
        None => {
            c.fail(&join(path, "kind"), "missing policy kind");
            return None;
        }
    };
    if let Err(e) = policy.validate() {
        c.fail(path, e.to_string());
        return None;
    }
    Some(policy)
}

fn parse_txn(c: &mut Checker, v: &Value, path: &str, known: &BTreeSet<&str>) -> Option<UserTxnSpec> {
    const KEYS: &[&str] = &[
        "id",
        "read_set",
        "retrieval",
        "analysis",
        "deadline",
        "arrival",
        "retrieval_mode",
        "source_fallback",
    ];
    const REQUIRED: &[&str] = &[
        "id",
        "read_set",
        "retrieval",
        "analysis",
        "deadline",
        "arrival",
        "retrieval_mode",
    ];
    let map = c.object(v, path, KEYS, REQUIRED)?;
    let before = c.errors.len();
    let id = c.string(map, "id", path).map(str::to_string);

    let mut read_set = Vec::new();
    match map.get("read_set") {
        Some(Value::Array(items)) => {
            if items.is_empty() {
                c.fail(&join(path, "read_set"), "must not be empty");
            }
            for (j, item) in items.iter().enumerate() {
                let p = format!("{path}.read_set[{j}]");
                match item.as_str() {
                    Some(s) if !known.contains(s) => c.fail(&p, format!("unknown object id `{s}`")),
                    Some(s) if read_set.iter().any(|r: &String| r == s) => {
                        c.fail(&p, format!("object `{s}` listed twice"))
                    }
                    Some(s) => read_set.push(s.to_string()),
                    None => c.fail(&p, "expected an object id string"),
                }
            }
        }
        Some(_) => c.fail(&join(path, "read_set"), "expected an array"),
        None => {}
    }

    // Retrieval may be instantaneous (store reads cost no fetch time); analysis
    // always takes at least one tick.
    let durations = |c: &mut Checker, key: &str, allow_zero: bool| -> BTreeMap<String, Tick> {
        let p = join(path, key);
        let mut out = BTreeMap::new();
        let Some(v) = map.get(key) else {
            return out;
        };
        let Some(m) = v.as_object() else {
            c.fail(&p, "expected a map from object id to ticks");
            return out;
        };
        for (obj, d) in m {
            let dp = join(&p, obj);
            if !read_set.contains(obj) {
                c.fail(&dp, "object is not in the read set");
            }
            match d.as_u64() {
                Some(0) if !allow_zero => c.fail(&dp, "duration must be positive"),
                Some(t) => {
                    out.insert(obj.clone(), t);
                }
                None => c.fail(&dp, "expected a non-negative integer tick count"),
            }
        }
        for obj in &read_set {
            if !m.contains_key(obj) {
                c.fail(&join(&p, obj), "missing duration for read-set object");
            }
        }
        out
    };
    let retrieval_time = durations(c, "retrieval", true);
    let analysis_time = durations(c, "analysis", false);

    let deadline = c.tick(map, "deadline", path);
    if deadline == Some(0) {
        c.fail(&join(path, "deadline"), "must be positive");
    }
    let arrival = map
        .get("arrival")
        .and_then(|a| parse_arrival(c, a, &join(path, "arrival")));
    let retrieval_mode = c.string(map, "retrieval_mode", path).and_then(|s| match s {
        "source" => Some(RetrievalMode::Source),
        "store" => Some(RetrievalMode::Store),
        other => {
            c.fail(
                &join(path, "retrieval_mode"),
                format!("unknown retrieval mode `{other}`"),
            );
            None
        }
    });
    let source_fallback = c.boolean(map, "source_fallback", path).unwrap_or(false);
    if c.errors.len() != before {
        return None;
    }
    Some(UserTxnSpec {
        id: id?,
        read_set,
        retrieval_time,
        analysis_time,
        relative_deadline: deadline?,
        arrival: arrival?,
        retrieval_mode: retrieval_mode?,
        source_fallback,
    })
}

fn parse_arrival(c: &mut Checker, v: &Value, path: &str) -> Option<Arrival> {
    match v.get("kind").and_then(Value::as_str) {
        Some("once") => {
            let map = c.object(v, path, &["kind", "at"], &["at"])?;
            Some(Arrival::Once {
                at: c.tick(map, "at", path)?,
            })
        }
        Some("periodic") => {
            let map = c.object(v, path, &["kind", "start", "period"], &["period"])?;
            let start = c.tick(map, "start", path).unwrap_or(0);
            let period = c.tick(map, "period", path)?;
            if period == 0 {
                c.fail(&join(path, "period"), "must be positive");
                return None;
            }
            Some(Arrival::Periodic { start, period })
        }
        Some("poisson") => {
            let map = c.object(v, path, &["kind", "start", "mean_gap"], &["mean_gap"])?;
            let start = c.tick(map, "start", path).unwrap_or(0);
            let mean_gap = c.float(map, "mean_gap", path)?;
            if mean_gap <= 0.0 {
                c.fail(&join(path, "mean_gap"), "must be positive");
                return None;
            }
            Some(Arrival::Poisson { start, mean_gap })
        }
        Some(other) => {
            c.fail(&join(path, "kind"), format!("unknown arrival kind `{other}`"));
            None
        }
        None => {
            c.fail(&join(path, "kind"), "missing arrival kind");
            None
        }
    }
}

/// Canonical JSON form. `parse_config(&emit_config(c)) == Ok(c)`.
pub fn emit_config(config: &SimConfig) -> String {
    let objects: Vec<Value> = config.objects.iter().map(object_value).collect();
    let transactions: Vec<Value> = config.transactions.iter().map(txn_value).collect();
    let v = json!({
        "horizon": config.horizon,
        "mode": config.mode.as_str(),
        "enforce_admission": config.enforce_admission,
        "seed": config.seed,
        "rng": ARRIVAL_RNG,
        "objects": objects,
        "transactions": transactions,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("config values are always serializable");
    s.push('\n');
    s
}

pub fn config_to_value(config: &SimConfig) -> Value {
    serde_json::from_str(&emit_config(config)).expect("emitted config is valid JSON")
}

fn object_value(o: &ObjectConfig) -> Value {
    let process = match o.spec.value_process {
        ValueProcess::Constant { value } => json!({"kind": "constant", "value": value}),
        ValueProcess::RandomWalk {
            start,
            step_sigma,
            seed,
        } => {
            let mut v = json!({"kind": "random_walk", "start": start, "step_sigma": step_sigma});
            if let Some(seed) = seed {
                v["seed"] = json!(seed);
            }
            v
        }
        ValueProcess::Sinusoid {
            amplitude,
            period_ticks,
            phase,
            offset,
        } => {
            json!({"kind": "sinusoid", "amplitude": amplitude, "period_ticks": period_ticks, "phase": phase, "offset": offset})
        }
    };
    let policy = match o.policy {
        PolicyConfig::Periodic => json!({"kind": "periodic"}),
        PolicyConfig::OnDemand => json!({"kind": "on_demand"}),
        PolicyConfig::Elastic {
            target_utilization,
            elasticity,
            max_period,
        } => {
            let mut v = json!({"kind": "elastic", "target_utilization": target_utilization});
            if let Some(e) = elasticity {
                v["elasticity"] = json!(e);
            }
            if let Some(mp) = max_period {
                v["max_period"] = json!(mp);
            }
            v
        }
        PolicyConfig::MkFirm { m, k } => json!({"kind": "mk_firm", "m": m, "k": k}),
        PolicyConfig::Similarity { delta } => json!({"kind": "similarity", "delta": delta}),
        PolicyConfig::Prediction { predictor, epsilon } => {
            json!({"kind": "prediction", "predictor": predictor.as_str(), "epsilon": epsilon})
        }
    };
    json!({
        "id": o.spec.id,
        "vi": o.spec.vi,
        "period": o.spec.update_period,
        "cost": o.spec.update_cost,
        "access_weight": o.spec.access_weight,
        "process": process,
        "policy": policy,
    })
}

fn txn_value(t: &UserTxnSpec) -> Value {
    let arrival = match t.arrival {
        Arrival::Once { at } => json!({"kind": "once", "at": at}),
        Arrival::Periodic { start, period } => json!({"kind": "periodic", "start": start, "period": period}),
        Arrival::Poisson { start, mean_gap } => json!({"kind": "poisson", "start": start, "mean_gap": mean_gap}),
    };
    json!({
        "id": t.id,
        "read_set": t.read_set,
        "retrieval": t.retrieval_time,
        "analysis": t.analysis_time,
        "deadline": t.relative_deadline,
        "arrival": arrival,
        "retrieval_mode": t.retrieval_mode.as_str(),
        "source_fallback": t.source_fallback,
    })
}

/// Release times of a transaction class within `[0, horizon]`.
///
/// Poisson classes draw uniforms from a ChaCha8 stream seeded with
/// `seed ^ fnv1a64(class id)` and turn each into a gap of
/// `ceil(-mean_gap * ln(1 - u))` ticks (at least one).
pub fn expand_arrivals(spec: &UserTxnSpec, horizon: Tick, seed: u64) -> Vec<Tick> {
    match spec.arrival {
        Arrival::Once { at } => {
            if at <= horizon {
                vec![at]
            } else {
                Vec::new()
            }
        }
        Arrival::Periodic { start, period } => {
            if start > horizon {
                return Vec::new();
            }
            (start..=horizon).step_by(period as usize).collect()
        }
        Arrival::Poisson { start, mean_gap } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ crate::trace::fnv1a64(spec.id.as_bytes()));
            let mut out = Vec::new();
            let mut t = start;
            loop {
                let u: f64 = rng.random();
                let gap = (-mean_gap * (1.0 - u).ln()).ceil().max(1.0) as Tick;
                t = t.saturating_add(gap);
                if t > horizon {
                    break;
                }
                out.push(t);
            }
            out
        }
    }
}

/// Sets the value at a dotted path such as `objects[0].policy.delta` inside a
/// JSON document.
pub fn set_path(root: &mut Value, path: &str, new_value: Value) -> Result<(), String> {
    let mut cur = root;
    let segments: Vec<&str> = path.split('.').collect();
    for (n, seg) in segments.iter().enumerate() {
        let (key, indices) = split_indices(seg)?;
        let last = n + 1 == segments.len();
        if !key.is_empty() {
            let map = cur
                .as_object_mut()
                .ok_or_else(|| format!("`{seg}` is not inside an object"))?;
            if last && indices.is_empty() {
                map.insert(key.to_string(), new_value);
                return Ok(());
            }
            cur = map
                .get_mut(key)
                .ok_or_else(|| format!("no key `{key}` in path `{path}`"))?;
        }
        for (i, idx) in indices.iter().enumerate() {
            let arr = cur.as_array_mut().ok_or_else(|| format!("`{seg}` is not an array"))?;
            let slot = arr
                .get_mut(*idx)
                .ok_or_else(|| format!("index {idx} out of range in `{path}`"))?;
            if last && i + 1 == indices.len() {
                *slot = new_value;
                return Ok(());
            }
            cur = slot;
        }
    }
    Err(format!("empty path `{path}`"))
}

fn split_indices(seg: &str) -> Result<(&str, Vec<usize>), String> {
    let key_end = seg.find('[').unwrap_or(seg.len());
    let key = &seg[..key_end];
    let mut indices = Vec::new();
    let mut rest = &seg[key_end..];
    while let Some(stripped) = rest.strip_prefix('[') {
        let close = stripped.find(']').ok_or_else(|| format!("unclosed `[` in `{seg}`"))?;
        let idx = stripped[..close].parse().map_err(|_| format!("bad index in `{seg}`"))?;
        indices.push(idx);
        rest = &stripped[close + 1..];
    }
    if !rest.is_empty() {
        return Err(format!("unexpected `{rest}` in `{seg}`"));
    }
    Ok((key, indices))
}
