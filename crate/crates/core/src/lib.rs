//! Attribute-wise associative memory.
//!
//! Each attribute group (color, style, volume, ...) owns a cue ball: a small set
//! of cue neurons, one per stored label. Labels are rendered as QR-code bitmaps
//! and presented to a recall layer with one neuron per pixel. One-shot delta-rule
//! learning ties every cue neuron to its pattern in both directions, and cross
//! links between cue neurons of different balls let one attribute recall another.

pub mod catalog;
pub mod error;
pub mod memory;
pub mod pattern;
pub mod pbm;
pub mod provider;
pub mod qr;
pub mod store;

pub use catalog::{load_catalog, parse_catalog, AttributeCatalog, AttributeGroup, AttributeId};
pub use error::{Error, Result};
pub use memory::{
    Association, CbRn, CrossLinks, CrossResponse, CueBall, CueResponse, LearnReport, MemorySystem,
    NeuronRef, PairReport, RecallBank, StepStats, StoreReport, SystemConfig,
};
pub use pattern::{
    normalize, reconstruct, to_vector, BinaryPattern, Normalization, PatternVector, PATTERN_DIM,
    PATTERN_SIDE,
};
pub use pbm::{load_pbm, load_pbm_any, save_pbm};
pub use provider::PatternProvider;
pub use qr::{encode_label, render, QrMatrix};
