use crate::catalog::AttributeId;
use crate::error::{Error, Result};
use crate::pattern::PatternVector;

use super::{recall_error, LearnReport, StepStats};

/// Weights from one ball's cue neurons to the recall layer.
///
/// Row `i` holds `w_ji` for every recall neuron `j`. A cue neuron drives the
/// recall layer on its own: the output is its row scaled by its activity,
/// never a sum over several cue neurons.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallBank {
    id: AttributeId,
    n: usize,
    dim: usize,
    w: Vec<f64>,
}

impl RecallBank {
    pub fn new(id: AttributeId, n: usize, dim: usize) -> Self {
        Self {
            id,
            n,
            dim,
            w: vec![0.0; n * dim],
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
        Ok(&self.w[neuron * self.dim..(neuron + 1) * self.dim])
    }

    pub fn row_mut(&mut self, neuron: usize) -> Result<&mut [f64]> {
        self.check(neuron)?;
        Ok(&mut self.w[neuron * self.dim..(neuron + 1) * self.dim])
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

    /// Recall-layer output with cue neuron `neuron` active (x = 1) and all others silent.
    pub fn recall(&self, neuron: usize) -> Result<PatternVector> {
        Ok(PatternVector::new(self.row(neuron)?.to_vec()))
    }

    /// Delta-rule updates `Δw_ji = ε_W (d_j − y_j) x_i` with `x_i = 1`, repeated `epochs` times.
    pub fn learn(
        &mut self,
        neuron: usize,
        target: &PatternVector,
        rate: f64,
        epochs: usize,
    ) -> Result<LearnReport> {
        target.check_dim(self.dim)?;
        let x = 1.0;
        let d = target.as_slice();
        let row = self.row_mut(neuron)?;
        let initial_error = recall_error(d, row);
        let mut steps = Vec::with_capacity(epochs);
        for _ in 0..epochs {
            let mut max_delta = 0.0f64;
            for (w, &dj) in row.iter_mut().zip(d) {
                let y = *w * x;
                let delta = rate * (dj - y) * x;
                *w += delta;
                max_delta = max_delta.max(delta.abs());
            }
            let y: Vec<f64> = row.iter().map(|w| w * x).collect();
            steps.push(StepStats {
                error: recall_error(d, &y),
                max_delta,
            });
        }
        Ok(LearnReport {
            initial_error,
            steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bank(n: usize, dim: usize) -> RecallBank {
        RecallBank::new(AttributeId::new("Color"), n, dim)
    }

    #[test]
    fn one_step_stores_target_exactly() {
        let mut b = bank(2, 2);
        let target = PatternVector::new(vec![0.6, 0.8]);
        let report = b.learn(0, &target, 1.0, 1).unwrap();
        assert_eq!(b.row(0).unwrap(), &[0.6, 0.8]);
        assert!((report.initial_error - 0.5).abs() < 1e-15);
        assert_eq!(report.final_error(), 0.0);
        assert_eq!(b.recall(0).unwrap(), target);
    }

    #[test]
    fn second_epoch_is_fixed_point() {
        let mut b = bank(1, 2);
        let target = PatternVector::new(vec![0.6, 0.8]);
        let report = b.learn(0, &target, 1.0, 2).unwrap();
        assert_eq!(report.steps[1].max_delta, 0.0);
    }

    #[test]
    fn half_rate_stores_half_target() {
        let mut b = bank(1, 3);
        let target = PatternVector::new(vec![0.2, 0.0, 0.4]);
        b.learn(0, &target, 0.5, 1).unwrap();
        // Δw_j = 0.5 * (d_j - 0) * 1
        assert_eq!(b.row(0).unwrap(), &[0.1, 0.0, 0.2]);
    }

    #[test]
    fn untrained_neuron_recalls_zero() {
        let b = bank(3, 4);
        assert_eq!(b.recall(2).unwrap(), PatternVector::zeros(4));
    }

    #[test]
    fn rejects_bad_index_and_dimension() {
        let mut b = bank(2, 2);
        assert!(matches!(b.recall(2), Err(Error::NeuronOutOfRange { .. })));
        let err = b.learn(0, &PatternVector::zeros(3), 1.0, 1).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                actual: 3
            }
        ));
    }
}
