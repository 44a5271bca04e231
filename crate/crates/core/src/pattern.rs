//! Binary pattern images and the real-valued vectors presented to the recall layer.

use std::fmt;

use crate::error::{Error, Result};

/// Side length of a rendered label pattern in pixels.
pub const PATTERN_SIDE: usize = 116;

/// Number of recall neurons: one per pixel of a rendered pattern.
pub const PATTERN_DIM: usize = PATTERN_SIDE * PATTERN_SIDE;

/// A width × height grid of dark (`true`) / light (`false`) pixels, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryPattern {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryPattern {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn blank(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, dark: bool) {
        self.bits[y * self.width + x] = dark;
    }

    /// Number of dark pixels.
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Debug for BinaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BinaryPattern({}x{}, {} dark)",
            self.width,
            self.height,
            self.popcount()
        )
    }
}

/// How pixel bits become recall-layer values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `d_j = bit_j / sqrt(popcount)`, so the vector has unit L2 norm.
    #[default]
    L2,
    /// `d_j = bit_j`.
    Raw,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::L2 => "l2",
            Normalization::Raw => "raw",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "l2" => Some(Normalization::L2),
            "raw" => Some(Normalization::Raw),
            _ => None,
        }
    }
}

/// A real vector over the recall neurons.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternVector(Vec<f64>);

impl PatternVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &PatternVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn max_abs_diff(&self, other: &PatternVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dim(),
            });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for PatternVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Compensated dot product: each product's rounding error is recovered with an
/// FMA and each sum's with a TwoSum, giving a result as accurate as if computed
/// in twice the working precision and then rounded.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        let p_err = x.mul_add(y, -p);
        let t = sum + p;
        let z = t - sum;
        let s_err = (sum - (t - z)) + (p - z);
        sum = t;
        comp += s_err + p_err;
    }
    sum + comp
}

/// Unit-norm vector of a pattern: dark pixels get `1/sqrt(popcount)`, light pixels 0.
pub fn normalize(pattern: &BinaryPattern) -> Result<PatternVector> {
    let count = pattern.popcount();
    if count == 0 {
        return Err(Error::DegeneratePattern);
    }
    let value = 1.0 / (count as f64).sqrt();
    Ok(PatternVector(
        pattern
            .bits
            .iter()
            .map(|&b| if b { value } else { 0.0 })
            .collect(),
    ))
}

/// Converts a pattern under the chosen normalization mode.
pub fn to_vector(pattern: &BinaryPattern, mode: Normalization) -> Result<PatternVector> {
    match mode {
        Normalization::L2 => normalize(pattern),
        Normalization::Raw => Ok(PatternVector(
            pattern
                .bits
                .iter()
                .map(|&b| if b { 1.0 } else { 0.0 })
                .collect(),
        )),
    }
}

/// Turns a recalled vector back into a bitmap by thresholding at half its maximum.
///
/// A vector with no positive component reconstructs to an all-light pattern.
pub fn reconstruct(vector: &PatternVector, width: usize, height: usize) -> Result<BinaryPattern> {
    vector.check_dim(width * height)?;
    let max = vector.0.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Ok(BinaryPattern::blank(width, height));
    }
    let cut = max / 2.0;
    BinaryPattern::new(width, height, vector.0.iter().map(|&v| v >= cut).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_dark_2x2_normalizes_to_halves() {
        let p = BinaryPattern::new(2, 2, vec![true; 4]).unwrap();
        assert_eq!(normalize(&p).unwrap().as_slice(), &[0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn single_dark_bit_is_unit_vector() {
        let p = BinaryPattern::new(2, 2, vec![true, false, false, false]).unwrap();
        assert_eq!(normalize(&p).unwrap().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn all_light_is_degenerate() {
        let p = BinaryPattern::blank(3, 3);
        assert!(matches!(normalize(&p), Err(Error::DegeneratePattern)));
    }

    #[test]
    fn raw_mode_keeps_bits() {
        let p = BinaryPattern::new(2, 1, vec![true, false]).unwrap();
        let v = to_vector(&p, Normalization::Raw).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 0.0]);
        assert_eq!(v.norm_sq(), 1.0);
    }

    #[test]
    fn reconstruct_inverts_normalize() {
        let p = BinaryPattern::new(3, 2, vec![true, false, true, true, false, false]).unwrap();
        let v = normalize(&p).unwrap();
        assert_eq!(reconstruct(&v, 3, 2).unwrap(), p);
        assert_eq!(
            reconstruct(&PatternVector::zeros(6), 3, 2).unwrap(),
            BinaryPattern::blank(3, 2)
        );
    }

    #[test]
    fn dot_recovers_cancelled_terms() {
        // naive left-to-right summation returns 0 here
        assert_eq!(dot(&[1e16, 1.0, -1e16], &[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(dot(&[0.6, 0.8], &[60.0, 80.0]), 100.0);
    }

    #[test]
    fn bit_count_must_match_dimensions() {
        assert!(BinaryPattern::new(2, 2, vec![true; 3]).is_err());
    }
}
