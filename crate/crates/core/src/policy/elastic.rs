//! Elastic period compression with exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use super::PolicyError;
use crate::temporal::Tick;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticTask {
    pub cost: Tick,
    pub period: Tick,
    /// Share of the excess utilization this task absorbs, relative to the
    /// other tasks. Zero pins the period.
    pub elasticity: f64,
    /// The period may not be stretched beyond this.
    pub max_period: Tick,
}

fn ratio(n: Tick, d: Tick) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn from_f64(x: f64) -> Result<BigRational, PolicyError> {
    let r: Ratio<i64> = Ratio::approximate_float(x)
        .ok_or_else(|| PolicyError::InvalidParameter(format!("{x} is not representable as a ratio")))?;
    Ok(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
}

/// Stretches periods so that `sum(cost / period) <= target_utilization`.
///
/// Excess utilization is removed from each task in proportion to its
/// elasticity. A task whose share would push it below `cost / max_period`
/// is clamped there and the remainder is redistributed among the rest until
/// nothing else clamps. Periods are the compressed utilizations inverted and
/// rounded up to whole ticks, so they never shrink.
pub fn elastic_rescale(tasks: &[ElasticTask], target_utilization: f64) -> Result<Vec<Tick>, PolicyError> {
    for t in tasks {
        if t.period == 0 || t.max_period < t.period || t.cost > t.period {
            return Err(PolicyError::InvalidParameter(format!(
                "elastic task needs 0 < period <= max_period and cost <= period (got cost={}, period={}, max_period={})",
                t.cost, t.period, t.max_period
            )));
        }
    }
    let target = from_f64(target_utilization)?;
    let utils: Vec<BigRational> = tasks.iter().map(|t| ratio(t.cost, t.period)).collect();
    let total: BigRational = utils.iter().sum();
    if total <= target {
        return Ok(tasks.iter().map(|t| t.period).collect());
    }

    let elasticity: Vec<BigRational> = tasks.iter().map(|t| from_f64(t.elasticity)).collect::<Result<_, _>>()?;
    // None = still compressible; Some(u) = fixed at utilization u.
    let mut fixed: Vec<Option<BigRational>> = tasks
        .iter()
        .zip(&utils)
        .zip(&elasticity)
        .map(|((t, u), e)| {
            if e.is_zero() || t.cost == 0 || t.max_period == t.period {
                Some(u.clone())
            } else {
                None
            }
        })
        .collect();
    let mut compressed = utils.clone();

    loop {
        let fixed_sum: BigRational = fixed.iter().flatten().sum();
        let flexible: Vec<usize> = (0..tasks.len()).filter(|&i| fixed[i].is_none()).collect();
        if flexible.is_empty() {
            if fixed_sum > target {
                return Err(PolicyError::Infeasible {
                    target: target_utilization,
                    residual: (fixed_sum - &target).to_f64().unwrap_or(f64::NAN),
                });
            }
            break;
        }
        let flex_sum: BigRational = flexible.iter().map(|&i| &utils[i]).sum();
        let weight: BigRational = flexible.iter().map(|&i| &elasticity[i]).sum();
        let excess = flex_sum + fixed_sum - &target;
        let mut clamped = false;
        for &i in &flexible {
            let candidate = &utils[i] - &excess * &elasticity[i] / &weight;
            let floor = ratio(tasks[i].cost, tasks[i].max_period);
            if candidate < floor {
                fixed[i] = Some(floor);
                clamped = true;
            } else {
                compressed[i] = candidate;
            }
        }
        if !clamped {
            break;
        }
    }
    for (i, f) in fixed.iter().enumerate() {
        if let Some(u) = f {
            compressed[i] = u.clone();
        }
    }

    let periods = tasks
        .iter()
        .zip(&compressed)
        .map(|(t, u)| {
            if t.cost == 0 {
                return t.period;
            }
            let p = (ratio(t.cost, 1) / u).ceil().to_integer();
            p.to_u64().unwrap_or(t.max_period).clamp(t.period, t.max_period)
        })
        .collect();
    Ok(periods)
}
