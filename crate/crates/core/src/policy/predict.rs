use crate::temporal::Tick;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    LastValue,
    LinearExtrapolation,
}

impl Predictor {
    pub fn as_str(self) -> &'static str {
        match self {
            Predictor::LastValue => "last_value",
            Predictor::LinearExtrapolation => "linear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "last_value" => Some(Predictor::LastValue),
            "linear" | "linear_extrapolation" => Some(Predictor::LinearExtrapolation),
            _ => None,
        }
    }
}

/// One side's copy of the shared prediction model.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PredictorModel {
    last: Option<(Tick, f64)>,
    previous: Option<(Tick, f64)>,
}

impl PredictorModel {
    pub fn predict(&self, predictor: Predictor, t: Tick) -> Option<f64> {
        let (t1, v1) = self.last?;
        match (predictor, self.previous) {
            (Predictor::LinearExtrapolation, Some((t0, v0))) if t1 > t0 => {
                let slope = (v1 - v0) / (t1 - t0) as f64;
                Some(v1 + slope * (t as f64 - t1 as f64))
            }
            _ => Some(v1),
        }
    }

    fn observe(&mut self, t: Tick, value: f64) {
        self.previous = self.last;
        self.last = Some((t, value));
    }

    pub fn last_transmitted(&self) -> Option<(Tick, f64)> {
        self.last
    }
}

/// Source and sink copies of the model. They are updated by the same
/// transmissions and therefore stay identical.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorState {
    pub predictor: Predictor,
    pub source: PredictorModel,
    pub sink: PredictorModel,
}

impl PredictorState {
    pub fn new(predictor: Predictor) -> Self {
        PredictorState {
            predictor,
            source: PredictorModel::default(),
            sink: PredictorModel::default(),
        }
    }

    pub fn in_sync(&self) -> bool {
        self.source == self.sink
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmission {
    Transmit,
    Suppress,
}

impl Transmission {
    pub fn as_str(self) -> &'static str {
        match self {
            Transmission::Transmit => "transmit",
            Transmission::Suppress => "suppress",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub decision: Transmission,
    /// `None` until the first transmission.
    pub predicted: Option<f64>,
    /// Value the sink holds for this instant after the decision.
    pub sink_value: f64,
}

/// Transmit iff the sample deviates from the shared prediction by more than
/// `epsilon`. Nothing has been transmitted yet on the first sample, so it is
/// always sent.
pub fn prediction_decision(state: &mut PredictorState, sample: (Tick, f64), epsilon: f64) -> Prediction {
    let (t, value) = sample;
    let predicted = state.source.predict(state.predictor, t);
    let decision = match predicted {
        Some(p) if (value - p).abs() <= epsilon => Transmission::Suppress,
        _ => Transmission::Transmit,
    };
    let sink_value = match decision {
        Transmission::Transmit => {
            state.source.observe(t, value);
            state.sink.observe(t, value);
            value
        }
        Transmission::Suppress => state
            .sink
            .predict(state.predictor, t)
            .expect("suppression requires a prior transmission"),
    };
    debug_assert!(state.in_sync());
    Prediction {
        decision,
        predicted,
        sink_value,
    }
}
