//! A deliberately plain re-implementation of the memory used as a test oracle.
//!
//! Everything is flat `Vec`s, textbook loops and naive left-to-right sums, with
//! every cue neuron addressed by a global index. Nothing here calls into the
//! crate's memory module.

#![allow(dead_code, clippy::needless_range_loop)]

pub const TIE: f64 = 1e-9;

pub fn naive_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..a.len() {
        s += a[j] * b[j];
    }
    s
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// (source neuron, target neuron), both local indices.
    Path(usize, usize),
    NoRecognition,
    NoAssociation,
}

pub struct NaiveModel {
    pub theta: f64,
    pub threshold: f64,
    pub eps_w: f64,
    pub eps_v: f64,
    pub lambda: f64,
    pub epochs: usize,
    /// first global index of each ball
    pub offset: Vec<usize>,
    pub sizes: Vec<usize>,
    pub w: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    /// u[from][to], full square matrix over global indices
    pub u: Vec<Vec<f64>>,
}

impl NaiveModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sizes: &[usize],
        dim: usize,
        theta: f64,
        threshold: f64,
        eps_w: f64,
        eps_v: f64,
        lambda: f64,
        epochs: usize,
    ) -> Self {
        let total: usize = sizes.iter().sum();
        let mut offset = Vec::new();
        let mut acc = 0;
        for &s in sizes {
            offset.push(acc);
            acc += s;
        }
        Self {
            theta,
            threshold,
            eps_w,
            eps_v,
            lambda,
            epochs,
            offset,
            sizes: sizes.to_vec(),
            w: vec![vec![0.0; dim]; total],
            v: vec![vec![0.0; dim]; total],
            u: vec![vec![0.0; total]; total],
        }
    }

    pub fn global(&self, ball: usize, neuron: usize) -> usize {
        self.offset[ball] + neuron
    }

    pub fn ball_of(&self, g: usize) -> usize {
        (0..self.sizes.len())
            .rev()
            .find(|&b| self.offset[b] <= g)
            .unwrap()
    }

    pub fn store(&mut self, g: usize, d: &[f64]) {
        for _ in 0..self.epochs {
            for j in 0..d.len() {
                let y = self.w[g][j];
                self.w[g][j] = y + self.eps_w * (d[j] - y);
            }
        }
        let y = self.w[g].clone();
        for _ in 0..self.epochs {
            let q = naive_dot(&self.v[g], &y);
            for j in 0..y.len() {
                self.v[g][j] += self.eps_v * (self.theta - q) * y[j];
            }
        }
    }

    pub fn q(&self, ball: usize, x: &[f64]) -> Vec<f64> {
        (0..self.sizes[ball])
            .map(|i| naive_dot(&self.v[self.global(ball, i)], x))
            .collect()
    }

    /// Neurons whose response is within rounding of the maximum.
    pub fn argmax_candidates(q: &[f64]) -> Vec<usize> {
        let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..q.len()).filter(|&i| close(q[i], max)).collect()
    }

    /// `None` when `q` sits so close to `threshold` that rounding decides.
    pub fn fires(&self, q: f64) -> Option<bool> {
        if close(q, self.threshold) {
            None
        } else {
            Some(q >= self.threshold)
        }
    }

    /// Pair training; `Err(g)` names an untrained source.
    pub fn pair(&mut self, a: usize, b: usize) -> Result<(), usize> {
        for (from, to) in [(a, b), (b, a)] {
            let own = self.w[from].clone();
            let q = naive_dot(&self.v[from], &own);
            let z = if q >= self.threshold { 1.0 } else { 0.0 };
            if z == 0.0 {
                return Err(from);
            }
            for _ in 0..self.epochs {
                let qq = self.u[from][to] * z;
                self.u[from][to] += self.lambda * (self.theta - qq) * z;
            }
        }
        Ok(())
    }

    pub fn cross_q(&self, from: usize, to_ball: usize) -> Vec<f64> {
        (0..self.sizes[to_ball])
            .map(|l| self.u[from][self.global(to_ball, l)])
            .collect()
    }

    /// Association path given the source neuron `k` the system settled on.
    pub fn follow(
        &self,
        from_ball: usize,
        k: usize,
        source_fires: bool,
        to_ball: usize,
    ) -> Outcome {
        if !source_fires {
            return Outcome::NoRecognition;
        }
        let q = self.cross_q(self.global(from_ball, k), to_ball);
        let mut best: Option<usize> = None;
        for l in 0..q.len() {
            if q[l] >= self.threshold && best.is_none_or(|b| q[l] > q[b]) {
                best = Some(l);
            }
        }
        match best {
            Some(l) => Outcome::Path(k, l),
            None => Outcome::NoAssociation,
        }
    }
}
