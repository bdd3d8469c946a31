//! Value processes that stand in for the physical quantity behind a
//! temporal object.
//!
//! Sampling is stateless: the value at a given sample index depends only on
//! the descriptor, the seed and the object id, so a policy that skips samples
//! never shifts the values seen by later samples. Random walks derive each
//! step from a counter-based hash of `(seed, object id, step index)`.

use std::f64::consts::TAU;

use crate::temporal::Tick;

#[derive(Debug, Clone, PartialEq)]
pub enum ValueProcess {
    Constant {
        value: f64,
    },
    RandomWalk {
        start: f64,
        step_sigma: f64,
        /// Falls back to the run seed when absent.
        seed: Option<u64>,
    },
    Sinusoid {
        amplitude: f64,
        period_ticks: f64,
        phase: f64,
        offset: f64,
    },
}

impl ValueProcess {
    /// Value at time `t`. For random walks `index` is the number of steps
    /// taken since the start value; other processes ignore it.
    pub fn sample(&self, object: &str, run_seed: u64, t: Tick, index: u64) -> f64 {
        match *self {
            ValueProcess::Constant { value } => value,
            ValueProcess::RandomWalk {
                start,
                step_sigma,
                seed,
            } => {
                let key = walk_key(seed.unwrap_or(run_seed), object);
                start + step_sigma * (1..=index).map(|j| standard_normal(key, j)).sum::<f64>()
            }
            ValueProcess::Sinusoid {
                amplitude,
                period_ticks,
                phase,
                offset,
            } => offset + amplitude * (TAU * t as f64 / period_ticks + phase).sin(),
        }
    }
}

/// Memoizing sampler used by the engine, where the random-walk index is the
/// sample tick. Produces exactly the values of [`ValueProcess::sample`].
#[derive(Debug, Clone)]
pub struct Sampler {
    process: ValueProcess,
    key: u64,
    // prefix[j] = sum of the first j standard-normal steps
    prefix: Vec<f64>,
    object: String,
    run_seed: u64,
}

impl Sampler {
    pub fn new(process: ValueProcess, object: &str, run_seed: u64) -> Self {
        let key = match process {
            ValueProcess::RandomWalk { seed, .. } => walk_key(seed.unwrap_or(run_seed), object),
            _ => 0,
        };
        Sampler {
            process,
            key,
            prefix: vec![0.0],
            object: object.to_string(),
            run_seed,
        }
    }

    pub fn at(&mut self, t: Tick) -> f64 {
        match self.process {
            ValueProcess::RandomWalk { start, step_sigma, .. } => {
                while (self.prefix.len() as u64) <= t {
                    let j = self.prefix.len() as u64;
                    let last = *self.prefix.last().unwrap_or(&0.0);
                    self.prefix.push(last + standard_normal(self.key, j));
                }
                // Same summation order as `sample`, so results are bit-identical.
                start + step_sigma * self.prefix[t as usize]
            }
            _ => self.process.sample(&self.object, self.run_seed, t, t),
        }
    }
}

fn walk_key(seed: u64, object: &str) -> u64 {
    splitmix64(seed ^ crate::trace::fnv1a64(object.as_bytes()))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Box-Muller on two counter-derived uniforms.
fn standard_normal(key: u64, index: u64) -> f64 {
    let a = splitmix64(key ^ splitmix64(index.wrapping_mul(2)));
    let b = splitmix64(key ^ splitmix64(index.wrapping_mul(2) + 1));
    // (0, 1] so ln never sees zero.
    let u1 = ((a >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
    let u2 = (b >> 11) as f64 / (1u64 << 53) as f64;
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}
