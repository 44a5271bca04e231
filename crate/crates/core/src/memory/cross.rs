use std::collections::BTreeMap;

use super::{LearnReport, NeuronRef, StepStats};

/// Directed cue-to-cue weights between different balls.
///
/// Only trained pairs are stored; every other weight is zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrossLinks {
    weights: BTreeMap<(NeuronRef, NeuronRef), f64>,
}

/// Pre-threshold outputs of a target ball driven by a single source cue neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossResponse {
    pub q: Vec<f64>,
    pub fired: Vec<usize>,
}

impl CrossLinks {
    pub fn new() -> Self {
        Self::default()
    }

    /// Weight `u` from `from` to `to`; zero when the pair was never trained.
    pub fn weight(&self, from: NeuronRef, to: NeuronRef) -> f64 {
        self.weights.get(&(from, to)).copied().unwrap_or(0.0)
    }

    pub fn set_weight(&mut self, from: NeuronRef, to: NeuronRef, u: f64) {
        self.weights.insert((from, to), u);
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Trained directed links in canonical (from, to) order.
    pub fn iter(&self) -> impl Iterator<Item = (NeuronRef, NeuronRef, f64)> + '_ {
        self.weights.iter().map(|(&(f, t), &u)| (f, t, u))
    }

    /// `q_l = u_lk z_k` for each of the `target_neurons` cue neurons of `target_ball`.
    pub fn respond(
        &self,
        from: NeuronRef,
        z: f64,
        target_ball: usize,
        target_neurons: usize,
        threshold: f64,
    ) -> CrossResponse {
        let mut q = vec![0.0; target_neurons];
        let lo = (from, NeuronRef::new(target_ball, 0));
        let hi = (from, NeuronRef::new(target_ball, usize::MAX));
        for (&(_, to), &u) in self.weights.range(lo..=hi) {
            if to.neuron < target_neurons {
                q[to.neuron] = u * z;
            }
        }
        let fired = q
            .iter()
            .enumerate()
            .filter(|(_, &ql)| ql >= threshold)
            .map(|(l, _)| l)
            .collect();
        CrossResponse { q, fired }
    }

    /// Delta-rule updates `Δu_lk = λ (θ − q_l) z_k` on one direction, repeated `epochs` times.
    ///
    /// Reported error is `½ (θ − q_l)²` at the target neuron.
    pub fn learn_direction(
        &mut self,
        from: NeuronRef,
        to: NeuronRef,
        z: f64,
        rate: f64,
        theta: f64,
        epochs: usize,
    ) -> LearnReport {
        let mut u = self.weight(from, to);
        let err = |u: f64| {
            let e = theta - u * z;
            0.5 * e * e
        };
        let initial_error = err(u);
        let mut steps = Vec::with_capacity(epochs);
        for _ in 0..epochs {
            let q = u * z;
            let delta = rate * (theta - q) * z;
            u += delta;
            steps.push(StepStats {
                error: err(u),
                max_delta: delta.abs(),
            });
        }
        self.weights.insert((from, to), u);
        LearnReport {
            initial_error,
            steps,
        }
    }
}
