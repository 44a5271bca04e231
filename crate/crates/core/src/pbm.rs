//! Plain (`P1`) portable bitmap reading and writing.
//!
//! `1` is a dark pixel and `0` a light one, which matches [`BinaryPattern`]'s
//! convention directly. `#` starts a comment that runs to the end of the line.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pattern::BinaryPattern;

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses the text of a plain PBM file.
pub fn parse_pbm(text: &str) -> Result<BinaryPattern> {
    let body = strip_comments(text);
    let mut rest = body.trim_start();
    if !rest.starts_with("P1") {
        let magic: String = rest.chars().take(2).collect();
        return Err(Error::Pbm(format!("expected magic P1, found {magic:?}")));
    }
    rest = &rest[2..];

    let mut dims = [0usize; 2];
    for (slot, name) in dims.iter_mut().zip(["width", "height"]) {
        rest = rest.trim_start();
        let end = rest
            .find(|c: char| c.is_ascii_whitespace())
            .unwrap_or(rest.len());
        let token = &rest[..end];
        *slot = token
            .parse()
            .map_err(|_| Error::Pbm(format!("invalid {name} {token:?}")))?;
        rest = &rest[end..];
    }
    let [width, height] = dims;

    let mut bits = Vec::with_capacity(width * height);
    for c in rest.chars() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            c if c.is_ascii_whitespace() => {}
            other => {
                return Err(Error::Pbm(format!(
                    "unexpected token {other:?} in pixel data"
                )))
            }
        }
    }
    if bits.len() != width * height {
        return Err(Error::Pbm(format!(
            "expected {} pixels for {width}x{height}, found {}",
            width * height,
            bits.len()
        )));
    }
    BinaryPattern::new(width, height, bits)
}

/// Formats a pattern as plain PBM text, one image row per line.
pub fn format_pbm(pattern: &BinaryPattern) -> String {
    let mut out = format!("P1\n{} {}\n", pattern.width(), pattern.height());
    for row in pattern.bits().chunks(pattern.width().max(1)) {
        let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a PBM file of any size.
pub fn load_pbm_any(path: impl AsRef<Path>) -> Result<BinaryPattern> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pbm(&text)
}

/// Reads a PBM file and checks it has the expected dimensions.
pub fn load_pbm(path: impl AsRef<Path>, width: usize, height: usize) -> Result<BinaryPattern> {
    let pattern = load_pbm_any(path)?;
    if pattern.width() != width || pattern.height() != height {
        return Err(Error::DimensionMismatch {
            expected: width * height,
            actual: pattern.width() * pattern.height(),
        });
    }
    Ok(pattern)
}

pub fn save_pbm(pattern: &BinaryPattern, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_pbm(pattern)).map_err(|e| Error::io(path, e))
}
