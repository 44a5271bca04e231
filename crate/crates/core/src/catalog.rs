//! Attribute groups and their labels.
//!
//! A catalog file has one `group:index:label` entry per line. Blank lines and
//! `#` comments are ignored. Indices within a group must run from 0 without
//! gaps; groups keep the order in which they first appear.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// The catalog shipped with the crate: Color, Style and Volume with seven labels each.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.txt");

/// Name of an attribute group (and of the cue ball that stores it).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttributeId(String);

impl AttributeId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Case-insensitive name comparison, used for command-line lookups.
    pub fn matches(&self, name: &str) -> bool {
        self.0.eq_ignore_ascii_case(name)
    }
}

impl fmt::Display for AttributeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeGroup {
    pub id: AttributeId,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeCatalog {
    groups: Vec<AttributeGroup>,
}

impl AttributeCatalog {
    pub fn new(groups: Vec<AttributeGroup>) -> Self {
        Self { groups }
    }

    pub fn bundled() -> Self {
        parse_catalog(BUNDLED_CATALOG).expect("bundled catalog is well formed")
    }

    pub fn groups(&self) -> &[AttributeGroup] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, name: &str) -> Option<&AttributeGroup> {
        self.groups.iter().find(|g| g.id.matches(name))
    }

    pub fn label(&self, group: &str, index: usize) -> Option<&str> {
        self.group(group)
            .and_then(|g| g.labels.get(index))
            .map(String::as_str)
    }

    pub fn pattern_count(&self) -> usize {
        self.groups.iter().map(|g| g.labels.len()).sum()
    }
}

pub fn parse_catalog(text: &str) -> Result<AttributeCatalog> {
    let mut order: Vec<String> = Vec::new();
    let mut entries: BTreeMap<String, BTreeMap<usize, (usize, String)>> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ':');
        let (group, index, label) = match (parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(i), Some(l)) => (g.trim(), i.trim(), l.trim()),
            _ => {
                return Err(Error::Catalog {
                    line: line_no,
                    message: format!("expected group:index:label, got {line:?}"),
                })
            }
        };
        if group.is_empty() || label.is_empty() {
            return Err(Error::Catalog {
                line: line_no,
                message: "group and label must be non-empty".into(),
            });
        }
        let index: usize = index.parse().map_err(|_| Error::Catalog {
            line: line_no,
            message: format!("invalid index {index:?}"),
        })?;

        if !entries.contains_key(group) {
            order.push(group.to_string());
        }
        let slot = entries.entry(group.to_string()).or_default();
        if slot.contains_key(&index) {
            return Err(Error::DuplicateEntry {
                group: group.to_string(),
                index,
            });
        }
        if let Some((_, (first_line, _))) = slot.iter().find(|(_, (_, l))| l == label) {
            return Err(Error::Catalog {
                line: line_no,
                message: format!("label {label:?} already used in {group} on line {first_line}"),
            });
        }
        slot.insert(index, (line_no, label.to_string()));
    }

    let mut groups = Vec::with_capacity(order.len());
    for name in order {
        let slot = entries.remove(&name).unwrap_or_default();
        let mut labels = Vec::with_capacity(slot.len());
        for (expected, (index, (line, label))) in slot.into_iter().enumerate() {
            if index != expected {
                return Err(Error::Catalog {
                    line,
                    message: format!("group {name} is missing index {expected}"),
                });
            }
            labels.push(label);
        }
        groups.push(AttributeGroup {
            id: AttributeId(name),
            labels,
        });
    }
    Ok(AttributeCatalog { groups })
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<AttributeCatalog> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_catalog(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_layout() {
        let cat = AttributeCatalog::bundled();
        assert_eq!(cat.groups().len(), 3);
        assert!(cat.groups().iter().all(|g| g.labels.len() == 7));
        assert_eq!(cat.label("Color", 0), Some("red"));
        assert_eq!(cat.label("Style", 3), Some("rectangle"));
        assert_eq!(cat.label("Volume", 6), Some("mini"));
        assert_eq!(cat.label("volume", 0), Some("extra-large"));
        assert_eq!(cat.pattern_count(), 21);
    }

    #[test]
    fn empty_file_gives_empty_catalog() {
        let cat = parse_catalog("").unwrap();
        assert!(cat.is_empty());
        assert!(parse_catalog("# nothing here\n\n").unwrap().is_empty());
    }

    #[test]
    fn duplicate_entry_rejected() {
        let err = parse_catalog("Color:0:red\nColor:0:red\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry { index: 0, .. }));
    }

    #[test]
    fn gap_rejected() {
        let err = parse_catalog("Color:0:red\nColor:2:yellow\n").unwrap_err();
        assert!(matches!(err, Error::Catalog { .. }));
    }

    #[test]
    fn duplicate_label_rejected() {
        assert!(parse_catalog("Color:0:red\nColor:1:red\n").is_err());
    }

    #[test]
    fn out_of_order_indices_are_sorted() {
        let cat = parse_catalog("Shape:1:b\nShape:0:a\n").unwrap();
        assert_eq!(cat.groups()[0].labels, vec!["a", "b"]);
    }

    #[test]
    fn label_may_contain_colons() {
        let cat = parse_catalog("Time:0:12:30").unwrap();
        assert_eq!(cat.label("Time", 0), Some("12:30"));
    }
}
