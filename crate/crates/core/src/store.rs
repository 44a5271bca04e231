//! `CBRN1` model files.
//!
//! A line-oriented text format holding the configuration, every ball's labels
//! and weights, and the trained cross links. Reals are written in shortest
//! round-trip form, so loading a file reproduces every weight bit for bit and
//! saving the same system twice produces identical bytes. Blank lines and lines
//! starting with `#` are ignored.
//!
//! ```text
//! CBRN1
//! dim 13456
//! width 116
//! height 116
//! eps_w 1.0
//! eps_v 1.0
//! lambda_cb 1.0
//! theta 100.0
//! threshold 72.0
//! epochs 1
//! normalization l2
//! ball Color 7
//! label 0 red
//! ...
//! w 0 <dim reals>
//! ...
//! v 0 <dim reals>
//! ...
//! link Color 0 Style 3 100.0
//! end
//! ```
//!
//! Each `ball` section lists its `n` labels, then `n` recall-weight rows, then
//! `n` cue-weight rows, all in index order. `link` records name the source
//! ball and neuron, the target ball and neuron, and the weight.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::catalog::AttributeId;
use crate::error::{Error, Result};
use crate::memory::{CbRn, CrossLinks, MemorySystem, NeuronRef, SystemConfig};
use crate::pattern::Normalization;

pub const FORMAT_TAG: &str = "CBRN1";

fn fmt_real(out: &mut String, v: f64) {
    if v == 0.0 && v.is_sign_positive() {
        out.push('0');
    } else {
        let _ = write!(out, "{v:?}");
    }
}

/// Serializes a system to `CBRN1` text.
pub fn to_text(system: &MemorySystem) -> Result<String> {
    let cfg = system.config();
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(FORMAT_TAG.to_string());
    line(format!("dim {}", cfg.dim()));
    line(format!("width {}", cfg.width));
    line(format!("height {}", cfg.height));
    line(format!("eps_w {:?}", cfg.eps_w));
    line(format!("eps_v {:?}", cfg.eps_v));
    line(format!("lambda_cb {:?}", cfg.lambda_cb));
    line(format!("theta {:?}", cfg.theta));
    line(format!("threshold {:?}", cfg.threshold));
    line(format!("epochs {}", cfg.epochs));
    line(format!("normalization {}", cfg.normalization.as_str()));

    for ball in system.balls() {
        let name = ball.id().as_str();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::Model {
                line: 0,
                message: format!(
                    "ball name {name:?} cannot be stored (empty or contains whitespace)"
                ),
            });
        }
        out.push_str(&format!("ball {name} {}\n", ball.neurons()));
        for (i, label) in ball.labels.iter().enumerate() {
            if label.contains('\n') {
                return Err(Error::Model {
                    line: 0,
                    message: format!("label {label:?} contains a newline"),
                });
            }
            out.push_str(&format!("label {i} {label}\n"));
        }
        for (tag, rows) in [
            ("w", &ball.bank as &dyn Rows),
            ("v", &ball.cue as &dyn Rows),
        ] {
            for i in 0..ball.neurons() {
                out.push_str(tag);
                out.push(' ');
                out.push_str(&i.to_string());
                for &x in rows.row_of(i) {
                    out.push(' ');
                    fmt_real(&mut out, x);
                }
                out.push('\n');
            }
        }
    }
    for (from, to, u) in system.links().iter() {
        let f = &system.balls()[from.ball];
        let t = &system.balls()[to.ball];
        out.push_str(&format!(
            "link {} {} {} {} {u:?}\n",
            f.id(),
            from.neuron,
            t.id(),
            to.neuron
        ));
    }
    out.push_str("end\n");
    Ok(out)
}

trait Rows {
    fn row_of(&self, i: usize) -> &[f64];
}

impl Rows for crate::memory::RecallBank {
    fn row_of(&self, i: usize) -> &[f64] {
        self.row(i).expect("index below neuron count")
    }
}

impl Rows for crate::memory::CueBall {
    fn row_of(&self, i: usize) -> &[f64] {
        self.row(i).expect("index below neuron count")
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let t = raw.trim_end_matches('\r');
            if t.trim().is_empty() || t.trim_start().starts_with('#') {
                continue;
            }
            self.last = i + 1;
            return Some((i + 1, t));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| Error::Model {
            line: self.last + 1,
            message: format!("truncated file: expected {what}"),
        })
    }
}

fn model_err(line: usize, message: impl Into<String>) -> Error {
    Error::Model {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| model_err(line, format!("invalid {what} {token:?}")))
}

fn keyed<'a>(lines: &mut Lines<'a>, key: &str) -> Result<(usize, &'a str)> {
    let (n, text) = lines.expect(key)?;
    match text.split_once(' ') {
        Some((k, rest)) if k == key => Ok((n, rest.trim())),
        _ => Err(model_err(
            n,
            format!("expected `{key} ...`, found {text:?}"),
        )),
    }
}

/// Parses `CBRN1` text.
pub fn from_text(text: &str) -> Result<MemorySystem> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (_, tag) = lines.expect("format tag")?;
    if tag.trim() != FORMAT_TAG {
        return Err(Error::UnsupportedVersion(tag.trim().to_string()));
    }

    let (n, v) = keyed(&mut lines, "dim")?;
    let dim: usize = parse_num(n, "dim", v)?;
    let (n, v) = keyed(&mut lines, "width")?;
    let width = parse_num(n, "width", v)?;
    let (n, v) = keyed(&mut lines, "height")?;
    let height = parse_num(n, "height", v)?;
    let mut real = |key: &str| -> Result<f64> {
        let (n, v) = keyed(&mut lines, key)?;
        parse_num(n, key, v)
    };
    let eps_w = real("eps_w")?;
    let eps_v = real("eps_v")?;
    let lambda_cb = real("lambda_cb")?;
    let theta = real("theta")?;
    let threshold = real("threshold")?;
    let (n, v) = keyed(&mut lines, "epochs")?;
    let epochs = parse_num(n, "epochs", v)?;
    let (n, v) = keyed(&mut lines, "normalization")?;
    let normalization = Normalization::parse(v)
        .ok_or_else(|| model_err(n, format!("unknown normalization {v:?}")))?;

    let config = SystemConfig {
        width,
        height,
        eps_w,
        eps_v,
        lambda_cb,
        theta,
        threshold,
        epochs,
        normalization,
    };
    if config.dim() != dim {
        return Err(model_err(
            2,
            format!("dim {dim} does not match width × height = {}", config.dim()),
        ));
    }
    config.validate()?;

    let mut balls: Vec<CbRn> = Vec::new();
    let mut links = CrossLinks::new();
    loop {
        let (n, text) = lines.expect("`ball`, `link` or `end`")?;
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("end") => break,
            Some("ball") => {
                if !links.is_empty() {
                    return Err(model_err(n, "ball section after link records"));
                }
                let name = tokens
                    .next()
                    .ok_or_else(|| model_err(n, "ball without name"))?;
                let count: usize = parse_num(n, "neuron count", tokens.next().unwrap_or(""))?;
                if balls.iter().any(|b| b.id().as_str() == name) {
                    return Err(model_err(n, format!("duplicate ball {name}")));
                }
                balls.push(read_ball(&mut lines, AttributeId::new(name), count, dim)?);
            }
            Some("link") => {
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 5 {
                    return Err(model_err(
                        n,
                        "link needs: from_ball from_neuron to_ball to_neuron weight",
                    ));
                }
                let find = |name: &str, idx: &str| -> Result<NeuronRef> {
                    let b = balls
                        .iter()
                        .position(|b| b.id().as_str() == name)
                        .ok_or_else(|| model_err(n, format!("unknown ball id {name:?}")))?;
                    let i: usize = parse_num(n, "neuron index", idx)?;
                    if i >= balls[b].neurons() {
                        return Err(model_err(n, format!("neuron {i} out of range for {name}")));
                    }
                    Ok(NeuronRef::new(b, i))
                };
                let from = find(fields[0], fields[1])?;
                let to = find(fields[2], fields[3])?;
                if from.ball == to.ball {
                    return Err(model_err(n, "link within a single ball"));
                }
                let u: f64 = parse_num(n, "weight", fields[4])?;
                links.set_weight(from, to, u);
            }
            _ => return Err(model_err(n, format!("unexpected line {text:?}"))),
        }
    }
    if let Some((n, text)) = lines.next() {
        return Err(model_err(n, format!("content after `end`: {text:?}")));
    }
    Ok(MemorySystem::from_parts(config, balls, links))
}

fn read_ball(lines: &mut Lines<'_>, id: AttributeId, count: usize, dim: usize) -> Result<CbRn> {
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let (n, rest) = keyed(lines, "label")?;
        let (idx, label) = rest.split_once(' ').unwrap_or((rest, ""));
        let idx: usize = parse_num(n, "label index", idx)?;
        if idx != i {
            return Err(model_err(n, format!("expected label {i}, found {idx}")));
        }
        labels.push(label.to_string());
    }
    let mut ball = CbRn::new(id, labels, dim);
    for tag in ["w", "v"] {
        for i in 0..count {
            let (n, text) = lines.expect(&format!("{tag} row {i}"))?;
            let mut tokens = text.split_whitespace();
            if tokens.next() != Some(tag) {
                return Err(model_err(n, format!("expected {tag} row {i}")));
            }
            let idx: usize = parse_num(n, "row index", tokens.next().unwrap_or(""))?;
            if idx != i {
                return Err(model_err(n, format!("expected {tag} row {i}, found {idx}")));
            }
            let row = if tag == "w" {
                ball.bank.row_mut(i)?
            } else {
                ball.cue.row_mut(i)?
            };
            let mut filled = 0;
            for (slot, token) in row.iter_mut().zip(tokens.by_ref()) {
                *slot = parse_num(n, "weight", token)?;
                filled += 1;
            }
            let extra = tokens.count();
            if filled != dim || extra != 0 {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: filled + extra,
                });
            }
        }
    }
    Ok(ball)
}

pub fn save(system: &MemorySystem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_text(system)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<MemorySystem> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_catalog;
    use crate::pattern::PatternVector;

    fn small() -> MemorySystem {
        let cat = parse_catalog("A:0:first label\nA:1:x\nB:0:y\n").unwrap();
        let cfg = SystemConfig {
            width: 3,
            height: 1,
            ..SystemConfig::default()
        };
        let mut sys = MemorySystem::new(cfg, &cat).unwrap();
        sys.store(
            NeuronRef::new(0, 0),
            &PatternVector::new(vec![0.6, 0.8, 0.0]),
        )
        .unwrap();
        sys.store(
            NeuronRef::new(0, 1),
            &PatternVector::new(vec![0.0, 0.0, 1.0]),
        )
        .unwrap();
        sys.store(
            NeuronRef::new(1, 0),
            &PatternVector::new(vec![1.0 / 3f64.sqrt(); 3]),
        )
        .unwrap();
        sys.learn_cross(NeuronRef::new(0, 1), NeuronRef::new(1, 0))
            .unwrap();
        sys
    }

    #[test]
    fn text_round_trip_is_exact() {
        let sys = small();
        let text = to_text(&sys).unwrap();
        let back = from_text(&text).unwrap();
        assert_eq!(back, sys);
        assert_eq!(to_text(&back).unwrap(), text);
        assert_eq!(back.catalog().label("A", 0), Some("first label"));
    }

    #[test]
    fn awkward_reals_survive() {
        let mut sys = small();
        let row = sys.balls_mut()[0].cue.row_mut(0).unwrap();
        row.copy_from_slice(&[-0.0, 1e-310, f64::MAX]);
        let back = from_text(&to_text(&sys).unwrap()).unwrap();
        let got = back.balls()[0].cue.row(0).unwrap();
        assert_eq!(got[0].to_bits(), (-0.0f64).to_bits());
        assert_eq!(got[1].to_bits(), 1e-310f64.to_bits());
        assert_eq!(got[2], f64::MAX);
    }

    #[test]
    fn unknown_tag_rejected() {
        let text = to_text(&small()).unwrap().replacen("CBRN1", "CBRN9", 1);
        assert!(matches!(
            from_text(&text),
            Err(Error::UnsupportedVersion(tag)) if tag == "CBRN9"
        ));
    }

    #[test]
    fn truncated_file_rejected() {
        let text = to_text(&small()).unwrap();
        let cut: String = text.lines().take(16).map(|l| format!("{l}\n")).collect();
        assert!(matches!(from_text(&cut), Err(Error::Model { .. })));
    }

    #[test]
    fn dim_mismatch_rejected() {
        let text = to_text(&small()).unwrap().replacen("dim 3", "dim 4", 1);
        assert!(from_text(&text).is_err());
        let text = to_text(&small())
            .unwrap()
            .replacen("w 1 0 0 1.0", "w 1 0 0", 1);
        assert!(matches!(
            from_text(&text),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn unknown_ball_in_link_rejected() {
        let text = to_text(&small()).unwrap().replacen("link A", "link Z", 1);
        assert!(matches!(from_text(&text), Err(Error::Model { .. })));
    }

    #[test]
    fn comments_are_ignored() {
        let text = to_text(&small())
            .unwrap()
            .replacen("\nball", "\n# a comment\n\nball", 1);
        assert_eq!(from_text(&text).unwrap(), small());
    }
}
