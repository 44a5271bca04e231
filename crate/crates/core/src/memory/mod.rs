//! Cue balls, the recall layer and the links between them.
//!
//! Training a label is two one-shot delta-rule passes: the recall weights `w`
//! learn the pattern with the cue neuron held active, then the cue weights `v`
//! learn to drive that neuron's pre-threshold output to `θ` when the recalled
//! pattern is fed back. Cross links `u` between cue neurons of different balls
//! are trained the same way, once in each direction.

mod cross;
mod cue;
mod recall;

use std::fmt;

use crate::catalog::{AttributeCatalog, AttributeId};
use crate::error::{Error, Result};
use crate::pattern::{to_vector, Normalization, PatternVector, PATTERN_SIDE};
use crate::provider::PatternProvider;

pub use cross::{CrossLinks, CrossResponse};
pub use cue::{argmax, CueBall, CueResponse};
pub use recall::RecallBank;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub width: usize,
    pub height: usize,
    /// Recall-weight learning rate ε_W.
    pub eps_w: f64,
    /// Cue-weight learning rate ε_V.
    pub eps_v: f64,
    /// Cross-link learning rate λ_CB.
    pub lambda_cb: f64,
    /// Learning value θ: the pre-threshold output a trained cue neuron is driven to.
    pub theta: f64,
    /// Firing threshold D.
    pub threshold: f64,
    pub epochs: usize,
    pub normalization: Normalization,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            width: PATTERN_SIDE,
            height: PATTERN_SIDE,
            eps_w: 1.0,
            eps_v: 1.0,
            lambda_cb: 1.0,
            theta: 100.0,
            threshold: 72.0,
            epochs: 1,
            normalization: Normalization::L2,
        }
    }
}

impl SystemConfig {
    pub fn dim(&self) -> usize {
        self.width * self.height
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dim() == 0 {
            return bad("pattern dimensions must be non-zero".into());
        }
        for (name, rate) in [
            ("eps_w", self.eps_w),
            ("eps_v", self.eps_v),
            ("lambda_cb", self.lambda_cb),
        ] {
            if !(rate > 0.0 && rate.is_finite()) {
                return bad(format!("{name} must be positive, got {rate}"));
            }
        }
        if !(self.threshold > 0.0 && self.theta > self.threshold && self.theta.is_finite()) {
            return bad(format!(
                "need theta > threshold > 0, got theta = {} and threshold = {}",
                self.theta, self.threshold
            ));
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        Ok(())
    }
}

/// A cue neuron addressed by ball position within the system and neuron index within the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronRef {
    pub ball: usize,
    pub neuron: usize,
}

impl NeuronRef {
    pub fn new(ball: usize, neuron: usize) -> Self {
        Self { ball, neuron }
    }
}

/// Diagnostics for one update pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    /// Error after the update.
    pub error: f64,
    /// Largest absolute weight change in the update.
    pub max_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub initial_error: f64,
    pub steps: Vec<StepStats>,
}

impl LearnReport {
    pub fn final_error(&self) -> f64 {
        self.steps.last().map_or(self.initial_error, |s| s.error)
    }

    pub fn max_delta(&self) -> f64 {
        self.steps.iter().map(|s| s.max_delta).fold(0.0, f64::max)
    }
}

/// Recall error `E = ½ Σ_j (d_j − y_j)²`.
pub fn recall_error(d: &[f64], y: &[f64]) -> f64 {
    0.5 * d.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
}

/// Same as [`recall_error`] but rejects vectors of different length.
pub fn checked_recall_error(d: &PatternVector, y: &PatternVector) -> Result<f64> {
    y.check_dim(d.dim())?;
    Ok(recall_error(d.as_slice(), y.as_slice()))
}

/// Cue error `e = ½ Σ_i (θ − q_i)²`; the cross-link error has the same form.
pub fn cue_error(theta: f64, q: &[f64]) -> f64 {
    0.5 * q.iter().map(|qi| (theta - qi) * (theta - qi)).sum::<f64>()
}

/// Cross-link error `η = ½ Σ_l (θ − q_l)²`.
pub fn cross_error(theta: f64, q: &[f64]) -> f64 {
    cue_error(theta, q)
}

/// One attribute group: its cue ball, recall weights and labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CbRn {
    pub labels: Vec<String>,
    pub cue: CueBall,
    pub bank: RecallBank,
}

impl CbRn {
    pub fn new(id: AttributeId, labels: Vec<String>, dim: usize) -> Self {
        let n = labels.len();
        Self {
            cue: CueBall::new(id.clone(), n, dim),
            bank: RecallBank::new(id, n, dim),
            labels,
        }
    }

    pub fn id(&self) -> &AttributeId {
        self.cue.id()
    }

    pub fn neurons(&self) -> usize {
        self.labels.len()
    }
}

/// Reports from storing one pattern on one cue neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct StoreReport {
    pub target: NeuronRef,
    pub recall: LearnReport,
    pub cue: LearnReport,
}

/// Reports from training one cross pair in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub forward: LearnReport,
    pub backward: LearnReport,
}

/// Result of presenting a pattern to one ball and following a cross link to another.
#[derive(Debug, Clone, PartialEq)]
pub struct Association {
    /// Winning cue neuron in the source ball.
    pub source: NeuronRef,
    /// Winning cue neuron in the target ball.
    pub target: NeuronRef,
    pub source_q: f64,
    pub target_q: f64,
    pub recalled: PatternVector,
}

/// All cue balls with their recall weights plus the cross links between balls.
#[derive(Debug, Clone, PartialEq)]
pub struct MemorySystem {
    config: SystemConfig,
    balls: Vec<CbRn>,
    links: CrossLinks,
}

impl MemorySystem {
    /// An untrained system with one ball per catalog group and one cue neuron per label.
    pub fn new(config: SystemConfig, catalog: &AttributeCatalog) -> Result<Self> {
        config.validate()?;
        let balls = catalog
            .groups()
            .iter()
            .map(|g| {
                if g.labels.is_empty() {
                    return Err(Error::InvalidConfig(format!(
                        "group {} has no labels",
                        g.id
                    )));
                }
                Ok(CbRn::new(g.id.clone(), g.labels.clone(), config.dim()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config,
            balls,
            links: CrossLinks::new(),
        })
    }

    pub(crate) fn from_parts(config: SystemConfig, balls: Vec<CbRn>, links: CrossLinks) -> Self {
        Self {
            config,
            balls,
            links,
        }
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut SystemConfig {
        &mut self.config
    }

    pub fn balls(&self) -> &[CbRn] {
        &self.balls
    }

    pub fn balls_mut(&mut self) -> &mut [CbRn] {
        &mut self.balls
    }

    pub fn links(&self) -> &CrossLinks {
        &self.links
    }

    pub fn links_mut(&mut self) -> &mut CrossLinks {
        &mut self.links
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    pub fn catalog(&self) -> AttributeCatalog {
        AttributeCatalog::new(
            self.balls
                .iter()
                .map(|b| crate::catalog::AttributeGroup {
                    id: b.id().clone(),
                    labels: b.labels.clone(),
                })
                .collect(),
        )
    }

    /// Position of the ball named `name` (case-insensitive).
    pub fn ball_index(&self, name: &str) -> Result<usize> {
        self.balls
            .iter()
            .position(|b| b.id().matches(name))
            .ok_or_else(|| Error::UnknownBall(name.to_string()))
    }

    pub fn ball(&self, ball: usize) -> Result<&CbRn> {
        self.balls
            .get(ball)
            .ok_or_else(|| Error::UnknownBall(format!("#{ball}")))
    }

    /// Validated reference to neuron `neuron` of the ball named `ball`.
    pub fn neuron_ref(&self, ball: &str, neuron: usize) -> Result<NeuronRef> {
        let b = self.ball_index(ball)?;
        self.check_ref(NeuronRef::new(b, neuron))
    }

    fn check_ref(&self, r: NeuronRef) -> Result<NeuronRef> {
        let ball = self.ball(r.ball)?;
        if r.neuron >= ball.neurons() {
            return Err(Error::NeuronOutOfRange {
                ball: ball.id().to_string(),
                index: r.neuron,
                count: ball.neurons(),
            });
        }
        Ok(r)
    }

    pub fn describe(&self, r: NeuronRef) -> String {
        match self.balls.get(r.ball) {
            Some(b) => format!("{}:{}", b.id(), r.neuron),
            None => format!("#{}:{}", r.ball, r.neuron),
        }
    }

    /// Recall-layer output of one cue neuron.
    pub fn recall(&self, r: NeuronRef) -> Result<PatternVector> {
        self.check_ref(r)?;
        self.balls[r.ball].bank.recall(r.neuron)
    }

    /// Stores `pattern` on cue neuron `r`: recall weights first, then cue weights
    /// trained on the recall layer's resulting output.
    pub fn store(&mut self, r: NeuronRef, pattern: &PatternVector) -> Result<StoreReport> {
        self.check_ref(r)?;
        let cfg = self.config;
        let ball = &mut self.balls[r.ball];
        let recall = ball.bank.learn(r.neuron, pattern, cfg.eps_w, cfg.epochs)?;
        let y = ball.bank.recall(r.neuron)?;
        let cue = ball
            .cue
            .learn(r.neuron, &y, cfg.eps_v, cfg.theta, cfg.epochs)?;
        Ok(StoreReport {
            target: r,
            recall,
            cue,
        })
    }

    /// Stores every label of every ball using patterns from `provider`.
    pub fn train_all(&mut self, provider: &PatternProvider) -> Result<Vec<StoreReport>> {
        let mode = self.config.normalization;
        let mut reports = Vec::new();
        for b in 0..self.balls.len() {
            for i in 0..self.balls[b].neurons() {
                let label = self.balls[b].labels[i].clone();
                let bits = provider.pattern(b, i, &label)?;
                let d = to_vector(&bits, mode)?;
                reports.push(self.store(NeuronRef::new(b, i), &d)?);
            }
        }
        Ok(reports)
    }

    pub fn cue_response(&self, ball: usize, probe: &PatternVector) -> Result<CueResponse> {
        self.cue_response_at(ball, probe, self.config.threshold)
    }

    pub fn cue_response_at(
        &self,
        ball: usize,
        probe: &PatternVector,
        threshold: f64,
    ) -> Result<CueResponse> {
        self.ball(ball)?.cue.respond(probe, threshold)
    }

    /// Thresholded output `z` of neuron `r` when its own stored pattern is presented.
    pub fn self_activation(&self, r: NeuronRef) -> Result<f64> {
        let y = self.recall(r)?;
        let resp = self.cue_response(r.ball, &y)?;
        Ok(if resp.is_fired(r.neuron) { 1.0 } else { 0.0 })
    }

    /// Response of every cue neuron in `target_ball` when `from` fires.
    pub fn cross_response(&self, from: NeuronRef, target_ball: usize) -> Result<CrossResponse> {
        self.check_ref(from)?;
        let target = self.ball(target_ball)?;
        if from.ball == target_ball {
            return Err(Error::IntraBallLink(
                self.describe(from),
                target.id().to_string(),
            ));
        }
        Ok(self.links.respond(
            from,
            1.0,
            target_ball,
            target.neurons(),
            self.config.threshold,
        ))
    }

    /// Trains the cross link between `a` and `b` in both directions.
    ///
    /// Each source's activity is obtained by presenting its own stored pattern,
    /// so both balls must already be trained.
    pub fn learn_cross(&mut self, a: NeuronRef, b: NeuronRef) -> Result<PairReport> {
        self.check_ref(a)?;
        self.check_ref(b)?;
        if a.ball == b.ball {
            return Err(Error::IntraBallLink(self.describe(a), self.describe(b)));
        }
        let mut learn = |from: NeuronRef, to: NeuronRef| -> Result<LearnReport> {
            let z = self.self_activation(from)?;
            if z == 0.0 {
                return Err(Error::UntrainedNeuron(self.describe(from)));
            }
            let cfg = self.config;
            Ok(self
                .links
                .learn_direction(from, to, z, cfg.lambda_cb, cfg.theta, cfg.epochs))
        };
        let forward = learn(a, b)?;
        let backward = learn(b, a)?;
        Ok(PairReport { forward, backward })
    }

    /// Presents `probe` to `from_ball`, follows the winning cue neuron's links into
    /// `to_ball`, and recalls the winning target neuron's pattern.
    pub fn associate(
        &self,
        from_ball: usize,
        probe: &PatternVector,
        to_ball: usize,
    ) -> Result<Association> {
        let resp = self.cue_response(from_ball, probe)?;
        let k = resp.argmax;
        if !resp.is_fired(k) {
            return Err(Error::NoRecognition {
                ball: self.ball(from_ball)?.id().to_string(),
                max_q: resp.max_q(),
                threshold: self.config.threshold,
            });
        }
        let source = NeuronRef::new(from_ball, k);
        let cross = self.cross_response(source, to_ball)?;
        if cross.fired.is_empty() {
            return Err(Error::NoAssociation {
                from: self.describe(source),
                to: self.ball(to_ball)?.id().to_string(),
            });
        }
        let l = cross.fired.iter().copied().fold(cross.fired[0], |best, l| {
            if cross.q[l] > cross.q[best] {
                l
            } else {
                best
            }
        });
        let target = NeuronRef::new(to_ball, l);
        Ok(Association {
            source,
            target,
            source_q: resp.q[k],
            target_q: cross.q[l],
            recalled: self.recall(target)?,
        })
    }
}

impl fmt::Display for NeuronRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.ball, self.neuron)
    }
}
