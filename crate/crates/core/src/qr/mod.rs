//! QR code generation for attribute labels.
//!
//! Every label is encoded as a version 3 symbol (29×29 modules) in byte mode at
//! error-correction level L, with no quiet zone. Rendering at 4 pixels per
//! module gives the 116×116 pattern the recall layer expects.

pub mod gf256;

use crate::error::{Error, Result};
use crate::pattern::BinaryPattern;

pub use gf256::{rs_encode, syndromes, Codeword};

pub const VERSION: u8 = 3;
/// Modules per side for version 3.
pub const SIZE: usize = 17 + 4 * VERSION as usize;
pub const TOTAL_CODEWORDS: usize = 70;
pub const ECC_CODEWORDS: usize = 15;
pub const DATA_CODEWORDS: usize = TOTAL_CODEWORDS - ECC_CODEWORDS;
/// Byte-mode payload capacity: 4-bit mode + 8-bit count leave 53 whole bytes.
pub const MAX_LABEL_BYTES: usize = (DATA_CODEWORDS * 8 - 12) / 8;
/// Centre of the single alignment pattern (row and column).
pub const ALIGNMENT_CENTER: usize = 22;
/// Default pixels per module.
pub const DEFAULT_SCALE: usize = 4;

/// Error-correction level bits as they appear in the format information.
const ECC_L_FORMAT_BITS: u32 = 0b01;
const FORMAT_MASK: u32 = 0x5412;
const FORMAT_GENERATOR: u32 = 0x537;

const PENALTY_N1: u32 = 3;
const PENALTY_N2: u32 = 3;
const PENALTY_N3: u32 = 40;
const PENALTY_N4: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EccLevel {
    L,
}

/// A finished QR symbol. `modules` is row-major, `true` = dark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrMatrix {
    size: usize,
    modules: Vec<bool>,
    version: u8,
    ecc_level: EccLevel,
    mask: u8,
    codeword: Codeword,
}

impl QrMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn version(&self) -> u8 {
        self.version
    }

    pub fn ecc_level(&self) -> EccLevel {
        self.ecc_level
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    /// The data + parity bytes placed in the symbol.
    pub fn codeword(&self) -> &Codeword {
        &self.codeword
    }

    /// Module at column `x`, row `y`.
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.modules[y * self.size + x]
    }

    pub fn modules(&self) -> &[bool] {
        &self.modules
    }

    pub fn dark_count(&self) -> usize {
        self.modules.iter().filter(|&&m| m).count()
    }

    /// Reads the 15 format bits from the copy around the top-left finder.
    pub fn format_bits(&self) -> u32 {
        let mut bits = 0u32;
        for (i, (x, y)) in format_positions_primary().into_iter().enumerate() {
            if self.get(x, y) {
                bits |= 1 << i;
            }
        }
        bits
    }

    /// Reads the 15 format bits from the copy split between the other two finders.
    pub fn format_bits_secondary(&self) -> u32 {
        let mut bits = 0u32;
        for (i, (x, y)) in format_positions_secondary(self.size)
            .into_iter()
            .enumerate()
        {
            if self.get(x, y) {
                bits |= 1 << i;
            }
        }
        bits
    }

    /// Undoes the mask and reads the codewords back in placement order.
    pub fn extract_codewords(&self) -> Vec<u8> {
        let function = function_map(self.size);
        let mut bytes = vec![0u8; TOTAL_CODEWORDS];
        for (i, (x, y)) in data_positions(self.size, &function)
            .into_iter()
            .take(TOTAL_CODEWORDS * 8)
            .enumerate()
        {
            if self.get(x, y) ^ mask_bit(self.mask, x, y) {
                bytes[i >> 3] |= 1 << (7 - (i & 7));
            }
        }
        bytes
    }
}

/// 15-bit format word (BCH(15,5) code, XOR-masked) for level L and the given mask.
pub fn format_word(mask: u8) -> u32 {
    let data = (ECC_L_FORMAT_BITS << 3) | u32::from(mask);
    let mut rem = data;
    for _ in 0..10 {
        rem = (rem << 1) ^ ((rem >> 9) * FORMAT_GENERATOR);
    }
    ((data << 10) | rem) ^ FORMAT_MASK
}

/// The 32 valid format words (all four levels, all eight masks).
pub fn valid_format_words() -> Vec<u32> {
    (0u32..32)
        .map(|data| {
            let mut rem = data;
            for _ in 0..10 {
                rem = (rem << 1) ^ ((rem >> 9) * FORMAT_GENERATOR);
            }
            ((data << 10) | rem) ^ FORMAT_MASK
        })
        .collect()
}

/// Whether mask pattern `mask` inverts the module at column `x`, row `y`.
#[allow(clippy::manual_is_multiple_of)] // mirrors the mask table
pub fn mask_bit(mask: u8, x: usize, y: usize) -> bool {
    match mask {
        0 => (x + y) % 2 == 0,
        1 => y % 2 == 0,
        2 => x % 3 == 0,
        3 => (x + y) % 3 == 0,
        4 => (x / 3 + y / 2) % 2 == 0,
        5 => x * y % 2 + x * y % 3 == 0,
        6 => (x * y % 2 + x * y % 3) % 2 == 0,
        7 => ((x + y) % 2 + x * y % 3) % 2 == 0,
        _ => panic!("mask index {mask} out of range"),
    }
}

fn format_positions_primary() -> [(usize, usize); 15] {
    let mut pos = [(0, 0); 15];
    for (i, p) in pos.iter_mut().enumerate().take(6) {
        *p = (8, i);
    }
    pos[6] = (8, 7);
    pos[7] = (8, 8);
    pos[8] = (7, 8);
    for (i, p) in pos.iter_mut().enumerate().skip(9) {
        *p = (14 - i, 8);
    }
    pos
}

fn format_positions_secondary(size: usize) -> [(usize, usize); 15] {
    let mut pos = [(0, 0); 15];
    for (i, p) in pos.iter_mut().enumerate().take(8) {
        *p = (size - 1 - i, 8);
    }
    for (i, p) in pos.iter_mut().enumerate().skip(8) {
        *p = (8, size - 15 + i);
    }
    pos
}

/// Modules reserved for finder, separator, timing, alignment and format/dark-module areas.
pub fn function_map(size: usize) -> Vec<bool> {
    let mut f = vec![false; size * size];
    let mut mark = |x: usize, y: usize| f[y * size + x] = true;
    // finders plus separators
    for (cx, cy) in [(3, 3), (size - 4, 3), (3, size - 4)] {
        for dy in -4i32..=4 {
            for dx in -4i32..=4 {
                let (x, y) = (cx as i32 + dx, cy as i32 + dy);
                if (0..size as i32).contains(&x) && (0..size as i32).contains(&y) {
                    mark(x as usize, y as usize);
                }
            }
        }
    }
    for i in 0..size {
        mark(6, i);
        mark(i, 6);
    }
    for dy in 0..5 {
        for dx in 0..5 {
            mark(ALIGNMENT_CENTER - 2 + dx, ALIGNMENT_CENTER - 2 + dy);
        }
    }
    for (x, y) in format_positions_primary()
        .into_iter()
        .chain(format_positions_secondary(size))
    {
        mark(x, y);
    }
    mark(8, size - 8);
    f
}

/// Data module coordinates in zig-zag placement order.
fn data_positions(size: usize, function: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut right = size as i32 - 1;
    while right >= 1 {
        if right == 6 {
            right = 5;
        }
        let upward = (right + 1) & 2 == 0;
        for vert in 0..size {
            let y = if upward { size - 1 - vert } else { vert };
            for j in 0..2 {
                let x = (right - j) as usize;
                if !function[y * size + x] {
                    out.push((x, y));
                }
            }
        }
        right -= 2;
    }
    out
}

struct Builder {
    size: usize,
    modules: Vec<bool>,
}

impl Builder {
    fn new(size: usize) -> Self {
        Self {
            size,
            modules: vec![false; size * size],
        }
    }

    fn set(&mut self, x: usize, y: usize, dark: bool) {
        self.modules[y * self.size + x] = dark;
    }

    fn draw_function_patterns(&mut self) {
        let size = self.size;
        for i in 0..size {
            self.set(6, i, i % 2 == 0);
            self.set(i, 6, i % 2 == 0);
        }
        for (cx, cy) in [(3, 3), (size - 4, 3), (3, size - 4)] {
            for dy in -4i32..=4 {
                for dx in -4i32..=4 {
                    let (x, y) = (cx as i32 + dx, cy as i32 + dy);
                    if (0..size as i32).contains(&x) && (0..size as i32).contains(&y) {
                        let dist = dx.abs().max(dy.abs());
                        self.set(x as usize, y as usize, dist != 2 && dist != 4);
                    }
                }
            }
        }
        for dy in -2i32..=2 {
            for dx in -2i32..=2 {
                let dist = dx.abs().max(dy.abs());
                self.set(
                    (ALIGNMENT_CENTER as i32 + dx) as usize,
                    (ALIGNMENT_CENTER as i32 + dy) as usize,
                    dist != 1,
                );
            }
        }
    }

    fn draw_format(&mut self, mask: u8) {
        let word = format_word(mask);
        let size = self.size;
        for (i, (x, y)) in format_positions_primary().into_iter().enumerate() {
            self.set(x, y, (word >> i) & 1 != 0);
        }
        for (i, (x, y)) in format_positions_secondary(size).into_iter().enumerate() {
            self.set(x, y, (word >> i) & 1 != 0);
        }
        self.set(8, size - 8, true);
    }
}

/// Byte-mode bit stream padded to the data capacity.
fn data_codewords(payload: &[u8]) -> Vec<u8> {
    let capacity_bits = DATA_CODEWORDS * 8;
    fn push(bits: &mut Vec<bool>, value: u32, len: usize) {
        for i in (0..len).rev() {
            bits.push((value >> i) & 1 != 0);
        }
    }
    let mut bits: Vec<bool> = Vec::with_capacity(capacity_bits);
    push(&mut bits, 0b0100, 4);
    push(&mut bits, payload.len() as u32, 8);
    for &b in payload {
        push(&mut bits, u32::from(b), 8);
    }
    let terminator = (capacity_bits - bits.len()).min(4);
    push(&mut bits, 0, terminator);
    let pad = (8 - bits.len() % 8) % 8;
    push(&mut bits, 0, pad);

    let mut bytes: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | u8::from(b)))
        .collect();
    for pad in [0xec, 0x11].into_iter().cycle() {
        if bytes.len() >= DATA_CODEWORDS {
            break;
        }
        bytes.push(pad);
    }
    bytes
}

/// Encodes `label` as a version 3-L QR symbol, picking the lowest-penalty mask.
pub fn encode_label(label: &str) -> Result<QrMatrix> {
    if label.is_empty() {
        return Err(Error::EmptyLabel);
    }
    if label.len() > MAX_LABEL_BYTES {
        return Err(Error::LabelTooLong {
            len: label.len(),
            max: MAX_LABEL_BYTES,
        });
    }
    let codeword = rs_encode(&data_codewords(label.as_bytes()), ECC_CODEWORDS);
    let candidates: Vec<QrMatrix> = (0..8)
        .map(|mask| build_with_mask(&codeword, mask))
        .collect();
    let best = candidates
        .into_iter()
        .min_by_key(|m| (penalty(m.modules(), m.size()), m.mask))
        .expect("eight candidates");
    Ok(best)
}

/// Builds the symbol for a codeword with a fixed mask.
pub fn build_with_mask(codeword: &Codeword, mask: u8) -> QrMatrix {
    let mut b = Builder::new(SIZE);
    b.draw_function_patterns();
    let function = function_map(SIZE);
    let bytes = codeword.bytes();
    for (i, (x, y)) in data_positions(SIZE, &function).into_iter().enumerate() {
        // remainder bits beyond the last codeword stay light before masking
        let bit = i < bytes.len() * 8 && (bytes[i >> 3] >> (7 - (i & 7))) & 1 != 0;
        b.set(x, y, bit ^ mask_bit(mask, x, y));
    }
    b.draw_format(mask);
    QrMatrix {
        size: SIZE,
        modules: b.modules,
        version: VERSION,
        ecc_level: EccLevel::L,
        mask,
        codeword: codeword.clone(),
    }
}

/// Builds the symbol for `label` with each of the eight masks (index = mask).
pub fn all_masks(label: &str) -> Result<Vec<QrMatrix>> {
    let best = encode_label(label)?;
    Ok((0..8)
        .map(|mask| build_with_mask(best.codeword(), mask))
        .collect())
}

/// Mask-selection penalty score over a square module grid.
pub fn penalty(modules: &[bool], size: usize) -> u32 {
    let at = |x: usize, y: usize| modules[y * size + x];
    let mut score = 0;

    for line in 0..size {
        let row: Vec<bool> = (0..size).map(|x| at(x, line)).collect();
        let col: Vec<bool> = (0..size).map(|y| at(line, y)).collect();
        score += run_penalty(&row) + finder_like_penalty(&row);
        score += run_penalty(&col) + finder_like_penalty(&col);
    }

    for y in 0..size - 1 {
        for x in 0..size - 1 {
            let c = at(x, y);
            if c == at(x + 1, y) && c == at(x, y + 1) && c == at(x + 1, y + 1) {
                score += PENALTY_N2;
            }
        }
    }

    let dark = modules.iter().filter(|&&m| m).count() as i64;
    let total = modules.len() as i64;
    // smallest k with |dark/total - 1/2| <= (k+1) * 5%
    let k = ((dark * 20 - total * 10).abs() + total - 1) / total - 1;
    score += k.max(0) as u32 * PENALTY_N4;
    score
}

fn run_penalty(line: &[bool]) -> u32 {
    let mut score = 0;
    let mut run = 0;
    let mut prev = None;
    for &m in line.iter().chain(std::iter::once(&!line[line.len() - 1])) {
        if Some(m) == prev {
            run += 1;
        } else {
            if run >= 5 {
                score += PENALTY_N1 + (run - 5);
            }
            run = 1;
            prev = Some(m);
        }
    }
    score
}

/// 1:1:3:1:1 finder-like runs with four light modules on one side. Modules
/// outside the symbol count as light.
fn finder_like_penalty(line: &[bool]) -> u32 {
    const CORE: [bool; 7] = [true, false, true, true, true, false, true];
    let n = line.len() as i32;
    let at = |i: i32| i >= 0 && i < n && line[i as usize];
    let mut score = 0;
    for start in 0..=n - 7 {
        if !CORE
            .iter()
            .enumerate()
            .all(|(i, &c)| at(start + i as i32) == c)
        {
            continue;
        }
        let before = (1..=4).all(|d| !at(start - d));
        let after = (0..4).all(|d| !at(start + 7 + d));
        if before || after {
            score += PENALTY_N3;
        }
    }
    score
}

/// Expands each module into a `scale`×`scale` block of pixels.
pub fn render(matrix: &QrMatrix, scale: usize) -> Result<BinaryPattern> {
    if scale == 0 {
        return Err(Error::InvalidScale(scale));
    }
    let side = matrix.size() * scale;
    let mut pattern = BinaryPattern::blank(side, side);
    for y in 0..side {
        for x in 0..side {
            if matrix.get(x / scale, y / scale) {
                pattern.set(x, y, true);
            }
        }
    }
    Ok(pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_53_bytes() {
        assert_eq!(SIZE, 29);
        assert_eq!(DATA_CODEWORDS, 55);
        assert_eq!(MAX_LABEL_BYTES, 53);
        assert!(encode_label(&"x".repeat(53)).is_ok());
        assert!(matches!(
            encode_label(&"x".repeat(54)),
            Err(Error::LabelTooLong { len: 54, max: 53 })
        ));
    }

    #[test]
    fn empty_label_rejected() {
        assert!(matches!(encode_label(""), Err(Error::EmptyLabel)));
    }

    #[test]
    fn data_stream_layout_for_red() {
        let bytes = data_codewords(b"red");
        assert_eq!(bytes.len(), 55);
        // 0100 | 00000011 | 'r' 'e' 'd' | 0000 terminator
        assert_eq!(&bytes[..5], &[0x40, 0x37, 0x26, 0x56, 0x40]);
        assert_eq!(&bytes[5..9], &[0xec, 0x11, 0xec, 0x11]);
    }

    #[test]
    fn format_word_known_values() {
        // level L, mask 0 and mask 4 from the standard's format table
        assert_eq!(format_word(0), 0b111011111000100);
        assert_eq!(format_word(4), 0b110011000101111);
    }

    #[test]
    fn data_region_holds_all_codewords() {
        let f = function_map(SIZE);
        let free = f.iter().filter(|&&m| !m).count();
        assert_eq!(free, TOTAL_CODEWORDS * 8 + 7);
    }

    #[test]
    fn chosen_mask_has_minimum_penalty() {
        for label in ["red", "rectangle", "extra-small"] {
            let best = encode_label(label).unwrap();
            let scores: Vec<u32> = all_masks(label)
                .unwrap()
                .iter()
                .map(|m| penalty(m.modules(), m.size()))
                .collect();
            let chosen = scores[best.mask() as usize];
            assert!(scores.iter().all(|&s| chosen <= s), "{label}: {scores:?}");
            let first_min = scores.iter().position(|&s| s == chosen).unwrap();
            assert_eq!(first_min, best.mask() as usize);
        }
    }

    #[test]
    fn run_penalty_examples() {
        assert_eq!(run_penalty(&[true; 5]), 3);
        assert_eq!(run_penalty(&[false; 7]), 5);
        assert_eq!(run_penalty(&[true, true, true, true, false]), 0);
    }

    #[test]
    fn finder_like_detection() {
        let mut line = vec![false; 11];
        line[4..].copy_from_slice(&[true, false, true, true, true, false, true]);
        assert_eq!(finder_like_penalty(&line), PENALTY_N3);
        // touching the edge counts as a light border
        let edge = [true, false, true, true, true, false, true, true];
        assert_eq!(finder_like_penalty(&edge), PENALTY_N3);
    }

    #[test]
    fn render_scales_blocks() {
        let m = encode_label("red").unwrap();
        let one = render(&m, 1).unwrap();
        assert_eq!((one.width(), one.height()), (29, 29));
        assert_eq!(one.bits(), m.modules());
        let four = render(&m, 4).unwrap();
        assert_eq!(four.len(), 13_456);
        assert_eq!(four.popcount(), 16 * m.dark_count());
        assert!(matches!(render(&m, 0), Err(Error::InvalidScale(0))));
    }

    #[test]
    fn extracted_codewords_match_placed() {
        let m = encode_label("purple").unwrap();
        assert_eq!(m.extract_codewords(), m.codeword().bytes());
    }
}
