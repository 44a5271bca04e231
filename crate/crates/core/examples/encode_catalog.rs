//! Writes the QR pattern of every bundled catalog label as a PBM file.
//!
//! Run: cargo run -p cbrn-core --example encode_catalog -- <out-dir>

use std::path::PathBuf;

use cbrn_core::{encode_label, qr, render, save_pbm, AttributeCatalog};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    for group in AttributeCatalog::bundled().groups() {
        for (i, label) in group.labels.iter().enumerate() {
            let matrix = encode_label(label)?;
            let path = dir.join(format!(
                "{}_{i}_{label}.pbm",
                group.id.as_str().to_lowercase()
            ));
            save_pbm(&render(&matrix, qr::DEFAULT_SCALE)?, &path)?;
            println!("{} mask {} -> {}", label, matrix.mask(), path.display());
        }
    }
    Ok(())
}
