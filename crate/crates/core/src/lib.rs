//! Multichannel distributed local pattern (MDLP) texture descriptor and retrieval core.
//!
//! Per colour channel the descriptor fuses one local binary pattern (centre versus
//! ring) with four local mesh patterns (ring sample versus the sample `d` steps
//! ahead, `d = 1..=4`). Each of those code planes is histogrammed and the histograms
//! are concatenated channel by channel into the image signature. Signatures are
//! compared with the d1 distance and retrieval quality is summarised as average
//! retrieval precision (ARP) and average retrieval rate (ARR).
//!
//! The crate is `no_std` and only needs `alloc`; decoding, file formats and the
//! command line live in the `mdlp` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod feature;
pub mod image;
pub mod params;
pub mod pattern;
pub mod retrieval;
pub mod ring;

pub use error::{Error, Result};
pub use eval::{
    evaluate, evaluate_matrix, precision, recall, CategoryReport, DistanceMatrix, EvalReport, ReportMetadata,
};
pub use feature::{build_feature, histogram, DescriptorMode, FeatureConfig, FeatureLayout, FeatureVector};
pub use image::{tile_vistex, ChannelImage, ColorImage, LabeledImage, Tile};
pub use params::{mesh_partner, MeshDistance, PatternParams};
pub use pattern::{lbp_code, lmep_code, mdlp_planes, pattern_planes, sign, PatternPlane, SubPattern};
pub use retrieval::{d1, d1_distance, rank_query, IndexEntry, Match, RetrievalResult};
pub use ring::{sample_ring, NeighborRing, SamplingGeometry};
