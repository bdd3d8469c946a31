//! Dead-band and prediction gating on a random walk. Both bound the error
//! between what the store (or sink) holds and the true value.

use freshsim::policy::{prediction_decision, similarity_decision, Decision, Predictor, PredictorState, Transmission};
use freshsim::process::{Sampler, ValueProcess};

fn main() {
    let walk = ValueProcess::RandomWalk {
        start: 50.0,
        step_sigma: 0.3,
        seed: Some(7),
    };
    let samples: Vec<f64> = {
        let mut s = Sampler::new(walk, "sensor", 0);
        (0..1000).map(|t| s.at(t)).collect()
    };

    let delta = 0.5;
    let mut stored = samples[0];
    let (mut performed, mut worst) = (1, 0.0f64);
    for &v in &samples[1..] {
        match similarity_decision(stored, v, delta) {
            Decision::Perform => {
                stored = v;
                performed += 1;
            }
            Decision::Skip => worst = worst.max((stored - v).abs()),
        }
    }
    println!("similarity  delta={delta}: {performed}/1000 updates, worst error {worst:.3}");

    let epsilon = 1.0;
    for predictor in [Predictor::LastValue, Predictor::LinearExtrapolation] {
        let mut state = PredictorState::new(predictor);
        let (mut sent, mut worst) = (0, 0.0f64);
        for (t, &v) in samples.iter().enumerate() {
            let p = prediction_decision(&mut state, (t as u64, v), epsilon);
            if p.decision == Transmission::Transmit {
                sent += 1;
            }
            worst = worst.max((p.sink_value - v).abs());
        }
        println!(
            "prediction  {:<20} eps={epsilon}: {sent}/1000 transmitted, worst error {worst:.3}",
            predictor.as_str()
        );
    }
}
