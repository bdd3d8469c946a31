//! Update policies: when a temporal object is refreshed, and when an update
//! may be skipped or suppressed.

mod elastic;
mod mkfirm;
mod predict;

use std::fmt;

use thiserror::Error;

use crate::store::VersionStore;
use crate::temporal::Tick;

pub use elastic::{elastic_rescale, ElasticTask};
pub use mkfirm::{mk_firm_decision, MkHistory};
pub use predict::{prediction_decision, Prediction, Predictor, PredictorModel, PredictorState, Transmission};

#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("invalid policy parameter: {0}")]
    InvalidParameter(String),
    #[error("utilization target {target} unreachable: residual utilization {residual:.6} at maximal periods")]
    Infeasible { target: f64, residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyConfig {
    Periodic,
    OnDemand,
    /// Periods of all elastic objects in a run are compressed together to
    /// meet `target_utilization`.
    Elastic {
        target_utilization: f64,
        /// Defaults to `1 / (period * access_weight)`.
        elasticity: Option<f64>,
        /// Upper bound for the stretched period. Defaults to the run horizon.
        max_period: Option<Tick>,
    },
    MkFirm {
        m: u32,
        k: u32,
    },
    Similarity {
        delta: f64,
    },
    Prediction {
        predictor: Predictor,
        epsilon: f64,
    },
}

impl PolicyConfig {
    pub fn label(&self) -> &'static str {
        match self {
            PolicyConfig::Periodic => "periodic",
            PolicyConfig::OnDemand => "on_demand",
            PolicyConfig::Elastic { .. } => "elastic",
            PolicyConfig::MkFirm { .. } => "mk_firm",
            PolicyConfig::Similarity { .. } => "similarity",
            PolicyConfig::Prediction { .. } => "prediction",
        }
    }

    /// Whether the policy generates periodic update instances.
    pub fn is_periodic(&self) -> bool {
        !matches!(self, PolicyConfig::OnDemand)
    }

    /// Parses the compact form used on the command line:
    /// `periodic`, `on_demand`, `elastic:<target>`, `mk_firm:<m>:<k>`,
    /// `similarity:<delta>`, `prediction:<last_value|linear>:<epsilon>`.
    pub fn from_compact(s: &str) -> Result<Self, PolicyError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || PolicyError::InvalidParameter(format!("cannot parse policy `{s}`"));
        let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
        let int = |p: &str| p.parse::<u32>().map_err(|_| bad());
        let policy = match parts.as_slice() {
            ["periodic"] => PolicyConfig::Periodic,
            ["on_demand"] => PolicyConfig::OnDemand,
            ["elastic", target] => PolicyConfig::Elastic {
                target_utilization: num(target)?,
                elasticity: None,
                max_period: None,
            },
            ["mk_firm", m, k] => PolicyConfig::MkFirm { m: int(m)?, k: int(k)? },
            ["similarity", delta] => PolicyConfig::Similarity { delta: num(delta)? },
            ["prediction", predictor, epsilon] => PolicyConfig::Prediction {
                predictor: Predictor::parse(predictor).ok_or_else(bad)?,
                epsilon: num(epsilon)?,
            },
            _ => return Err(bad()),
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        let invalid = |msg: String| Err(PolicyError::InvalidParameter(msg));
        match *self {
            PolicyConfig::MkFirm { m, k } if m < 1 || m > k => {
                invalid(format!("m ≤ k violated (m={m}, k={k}, need 1 ≤ m ≤ k)"))
            }
            PolicyConfig::Elastic {
                target_utilization: u, ..
            } if !(u > 0.0 && u <= 1.0) => invalid(format!("target_utilization {u} outside (0, 1]")),
            PolicyConfig::Elastic {
                elasticity: Some(e), ..
            } if !(e >= 0.0 && e.is_finite()) => invalid(format!("elasticity {e} must be a non-negative number")),
            PolicyConfig::Similarity { delta } if !(delta >= 0.0 && delta.is_finite()) => {
                invalid(format!("delta {delta} must be a non-negative number"))
            }
            PolicyConfig::Prediction { epsilon, .. } if !(epsilon >= 0.0 && epsilon.is_finite()) => {
                invalid(format!("epsilon {epsilon} must be a non-negative number"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PolicyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyConfig::Periodic | PolicyConfig::OnDemand => f.write_str(self.label()),
            PolicyConfig::Elastic { target_utilization, .. } => write!(f, "elastic:{target_utilization}"),
            PolicyConfig::MkFirm { m, k } => write!(f, "mk_firm:{m}:{k}"),
            PolicyConfig::Similarity { delta } => write!(f, "similarity:{delta}"),
            PolicyConfig::Prediction { predictor, epsilon } => write!(f, "prediction:{}:{epsilon}", predictor.as_str()),
        }
    }
}

/// Outcome of a gated periodic update instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Perform,
    Skip,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Perform => "perform",
            Decision::Skip => "skip",
        }
    }
}

/// Release times `0, P, 2P, ...` up to and including `horizon`.
pub fn periodic_instances(period: Tick, horizon: Tick) -> Vec<Tick> {
    assert!(period > 0, "update period must be positive");
    (0..=horizon).step_by(period as usize).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnDemandDecision {
    Serve { seq: u64 },
    Refresh,
}

/// Serve the stored version if it is fresh at `access_time`, otherwise ask
/// for a refresh sampled at `access_time`.
pub fn on_demand_decision(store: &VersionStore, object: usize, access_time: Tick) -> OnDemandDecision {
    match store.peek_fresh(object, access_time) {
        Some(v) => OnDemandDecision::Serve { seq: v.seq },
        None => OnDemandDecision::Refresh,
    }
}

/// Validity interval that goes with a stretched update period: twice the
/// new period, and never shorter than the original interval.
pub fn extend_vi_for_period(vi: Tick, period: Tick, new_period: Tick) -> Tick {
    if new_period > period {
        vi.max(2 * new_period)
    } else {
        vi
    }
}

/// Dead-band gate: skip when the sample is within `delta` of the stored value.
pub fn similarity_decision(last_stored: f64, sampled: f64, delta: f64) -> Decision {
    if (sampled - last_stored).abs() < delta {
        Decision::Skip
    } else {
        Decision::Perform
    }
}
