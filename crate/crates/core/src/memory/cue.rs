use crate::catalog::AttributeId;
use crate::error::{Error, Result};
use crate::pattern::{dot, PatternVector};

use super::{LearnReport, StepStats};

/// One attribute group's cue neurons and their weights from the recall layer.
///
/// Cue neurons inside a ball are not connected to each other.
#[derive(Debug, Clone, PartialEq)]
pub struct CueBall {
    id: AttributeId,
    n: usize,
    dim: usize,
    v: Vec<f64>,
}

/// Pre-threshold outputs of every cue neuron for one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct CueResponse {
    pub q: Vec<f64>,
    /// Neurons with `q_i >= D`, ascending.
    pub fired: Vec<usize>,
    /// Largest `q_i`; ties go to the lowest index.
    pub argmax: usize,
}

impl CueResponse {
    pub fn from_q(q: Vec<f64>, threshold: f64) -> Self {
        let fired = q
            .iter()
            .enumerate()
            .filter(|(_, &qi)| qi >= threshold)
            .map(|(i, _)| i)
            .collect();
        Self {
            argmax: argmax(&q),
            fired,
            q,
        }
    }

    pub fn is_fired(&self, neuron: usize) -> bool {
        self.fired.binary_search(&neuron).is_ok()
    }

    pub fn max_q(&self) -> f64 {
        self.q.get(self.argmax).copied().unwrap_or(0.0)
    }
}

/// Index of the largest value, lowest index on ties. Empty input gives 0.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl CueBall {
    pub fn new(id: AttributeId, n: usize, dim: usize) -> Self {
        Self {
            id,
            n,
            dim,
            v: vec![0.0; n * dim],
        }
    }

    pub fn id(&self) -> &AttributeId {
        &self.id
    }

    pub fn neurons(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, neuron: usize) -> Result<&[f64]> {
        self.check(neuron)?;
        Ok(&self.v[neuron * self.dim..(neuron + 1) * self.dim])
    }

    pub fn row_mut(&mut self, neuron: usize) -> Result<&mut [f64]> {
        self.check(neuron)?;
        Ok(&mut self.v[neuron * self.dim..(neuron + 1) * self.dim])
    }

    fn check(&self, neuron: usize) -> Result<()> {
        if neuron >= self.n {
            return Err(Error::NeuronOutOfRange {
                ball: self.id.to_string(),
                index: neuron,
                count: self.n,
            });
        }
        Ok(())
    }

    /// `q_i = Σ_j v_ij y_j` for every neuron.
    pub fn q(&self, probe: &PatternVector) -> Result<Vec<f64>> {
        probe.check_dim(self.dim)?;
        Ok(self
            .v
            .chunks(self.dim.max(1))
            .take(self.n)
            .map(|row| dot(row, probe.as_slice()))
            .collect())
    }

    pub fn respond(&self, probe: &PatternVector, threshold: f64) -> Result<CueResponse> {
        Ok(CueResponse::from_q(self.q(probe)?, threshold))
    }

    /// Delta-rule updates `Δv_ij = ε_V (θ − q_i) y_j`, repeated `epochs` times.
    ///
    /// The reported error is `½ (θ − q_i)²` for the trained neuron.
    pub fn learn(
        &mut self,
        neuron: usize,
        y: &PatternVector,
        rate: f64,
        theta: f64,
        epochs: usize,
    ) -> Result<LearnReport> {
        y.check_dim(self.dim)?;
        let y = y.as_slice();
        let row = self.row_mut(neuron)?;
        let initial_error = half_sq(theta - dot(row, y));
        let mut steps = Vec::with_capacity(epochs);
        for _ in 0..epochs {
            let q = dot(row, y);
            let gain = rate * (theta - q);
            let mut max_delta = 0.0f64;
            for (v, &yj) in row.iter_mut().zip(y) {
                let delta = gain * yj;
                *v += delta;
                max_delta = max_delta.max(delta.abs());
            }
            steps.push(StepStats {
                error: half_sq(theta - dot(row, y)),
                max_delta,
            });
        }
        Ok(LearnReport {
            initial_error,
            steps,
        })
    }
}

fn half_sq(x: f64) -> f64 {
    0.5 * x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(n: usize, dim: usize) -> CueBall {
        CueBall::new(AttributeId::new("Style"), n, dim)
    }

    #[test]
    fn one_step_reaches_theta() {
        let mut b = ball(1, 2);
        let y = PatternVector::new(vec![0.6, 0.8]);
        let report = b.learn(0, &y, 1.0, 100.0, 1).unwrap();
        assert_eq!(b.row(0).unwrap(), &[60.0, 80.0]);
        assert_eq!(b.q(&y).unwrap(), vec![100.0]);
        assert_eq!(report.initial_error, 5000.0);
        assert_eq!(report.final_error(), 0.0);
    }

    #[test]
    fn second_epoch_is_fixed_point() {
        let mut b = ball(1, 2);
        let y = PatternVector::new(vec![0.6, 0.8]);
        let report = b.learn(0, &y, 1.0, 100.0, 2).unwrap();
        assert_eq!(report.steps[1].max_delta, 0.0);
    }

    #[test]
    fn unnormalized_input_scales_q() {
        // ‖y‖² = 0.7265, so one step from zero gives q = θ‖y‖² = 72.65
        let mut b = ball(1, 2);
        let y = PatternVector::new(vec![0.5, (0.7265f64 - 0.25).sqrt()]);
        b.learn(0, &y, 1.0, 100.0, 1).unwrap();
        let q = b.q(&y).unwrap()[0];
        assert!((q - 72.65).abs() < 1e-9, "{q}");
    }

    #[test]
    fn orthogonal_probe_gives_zero() {
        let mut b = ball(2, 2);
        b.learn(0, &PatternVector::new(vec![1.0, 0.0]), 1.0, 100.0, 1)
            .unwrap();
        let r = b
            .respond(&PatternVector::new(vec![0.0, 1.0]), 72.0)
            .unwrap();
        assert_eq!(r.q, vec![0.0, 0.0]);
        assert!(r.fired.is_empty());
        assert_eq!(r.argmax, 0);
    }

    #[test]
    fn half_overlap_does_not_fire() {
        let mut b = ball(1, 4);
        let stored = PatternVector::new(vec![0.5; 4]);
        b.learn(0, &stored, 1.0, 100.0, 1).unwrap();
        // ⟨probe, stored⟩ = 0.5 → q = θ · 0.5
        let probe = PatternVector::new(vec![1.0, 0.0, 0.0, 0.0]);
        let r = b.respond(&probe, 72.0).unwrap();
        let oracle: f64 = b
            .row(0)
            .unwrap()
            .iter()
            .zip(probe.as_slice())
            .map(|(v, p)| v * p)
            .sum();
        assert_eq!(r.q[0], oracle);
        assert!((r.q[0] - 50.0).abs() < 1e-12);
        assert!(r.fired.is_empty());
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[0.0, 0.0]), 0);
        assert_eq!(argmax(&[]), 0);
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let b = ball(1, 3);
        assert!(matches!(
            b.q(&PatternVector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
