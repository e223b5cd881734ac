//! Histogram feature vectors.
//!
//! Layout is channel-major, then sub-pattern, then bin: block `(t, s)` occupies
//! `[(t * S + s) * 2^Nb, (t * S + s + 1) * 2^Nb)` where `S` is the number of
//! sub-patterns of the descriptor mode.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::image::ColorImage;
use crate::params::PatternParams;
use crate::pattern::{pattern_planes, PatternPlane, SubPattern};

/// Counts how many codes of `plane` fall into each of `bins` bins.
pub fn histogram(plane: &PatternPlane, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    for &code in &plane.codes {
        counts[usize::from(code)] += 1;
    }
    counts
}

/// Which sub-patterns make up the descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DescriptorMode {
    /// LBP plus mesh patterns at d = 1..=4.
    #[default]
    Mdlp,
    /// LBP alone.
    LbpOnly,
    /// Mesh patterns at d = 1..=4 without LBP.
    LmepOnly,
}

impl DescriptorMode {
    pub const ALL: [DescriptorMode; 3] = [DescriptorMode::Mdlp, DescriptorMode::LbpOnly, DescriptorMode::LmepOnly];

    pub fn sub_patterns(self) -> &'static [SubPattern] {
        match self {
            DescriptorMode::Mdlp => &SubPattern::MDLP,
            DescriptorMode::LbpOnly => &SubPattern::MDLP[..1],
            DescriptorMode::LmepOnly => &SubPattern::MDLP[1..],
        }
    }

    pub fn blocks_per_channel(self) -> usize {
        self.sub_patterns().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            DescriptorMode::Mdlp => "mdlp",
            DescriptorMode::LbpOnly => "lbp",
            DescriptorMode::LmepOnly => "lmep",
        }
    }

    /// Recovers the mode from a block count per channel.
    pub fn from_blocks_per_channel(blocks: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.blocks_per_channel() == blocks)
    }
}

impl core::fmt::Display for DescriptorMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for DescriptorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mdlp" => Ok(DescriptorMode::Mdlp),
            "lbp" | "lbp-only" => Ok(DescriptorMode::LbpOnly),
            "lmep" | "lmep-only" => Ok(DescriptorMode::LmepOnly),
            other => Err(Error::Params(format!("unknown descriptor mode {other:?}"))),
        }
    }
}

/// Shape of a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureLayout {
    pub channels: usize,
    pub mode: DescriptorMode,
    pub params: PatternParams,
}

impl FeatureLayout {
    pub fn bins(&self) -> usize {
        self.params.bins()
    }

    pub fn block_count(&self) -> usize {
        self.channels * self.mode.blocks_per_channel()
    }

    pub fn dimension(&self) -> usize {
        self.block_count() * self.bins()
    }

    /// Index range of sub-pattern `block` of channel `channel`.
    pub fn block_range(&self, channel: usize, block: usize) -> Range<usize> {
        let start = (channel * self.mode.blocks_per_channel() + block) * self.bins();
        start..start + self.bins()
    }
}

/// Descriptor settings shared by every image in a database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureConfig {
    pub params: PatternParams,
    pub mode: DescriptorMode,
    /// L1-normalise each histogram block instead of keeping raw counts.
    pub normalize: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            params: PatternParams::CANONICAL,
            mode: DescriptorMode::Mdlp,
            normalize: true,
        }
    }
}

impl FeatureConfig {
    pub fn layout(&self, channels: usize) -> FeatureLayout {
        FeatureLayout {
            channels,
            mode: self.mode,
            params: self.params,
        }
    }

    pub fn build(&self, image: &ColorImage) -> Result<FeatureVector> {
        build_feature(image, self.params, self.mode, self.normalize)
    }
}

/// Concatenated pattern histograms of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    layout: FeatureLayout,
    normalized: bool,
    values: Vec<f64>,
}

impl FeatureVector {
    /// Wraps precomputed values; length must match the layout and entries must be finite and non-negative.
    pub fn from_parts(layout: FeatureLayout, normalized: bool, values: Vec<f64>) -> Result<Self> {
        if values.len() != layout.dimension() {
            return Err(Error::Dimension {
                expected: layout.dimension(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Params(format!(
                "feature value {bad} is not a finite non-negative number"
            )));
        }
        Ok(Self {
            layout,
            normalized,
            values,
        })
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn block(&self, channel: usize, block: usize) -> &[f64] {
        &self.values[self.layout.block_range(channel, block)]
    }

    /// Rounds every value to the nearest `f32`, the precision kept by the index file.
    pub fn to_f32_precision(&self) -> Self {
        Self {
            values: self.values.iter().map(|&v| f64::from(v as f32)).collect(),
            ..self.clone()
        }
    }
}

/// Builds the descriptor of a multichannel image.
///
/// Each channel contributes one histogram per sub-pattern of `mode`; with `normalize`
/// every histogram is divided by its pixel count.
pub fn build_feature(
    image: &ColorImage,
    params: PatternParams,
    mode: DescriptorMode,
    normalize: bool,
) -> Result<FeatureVector> {
    if mode != DescriptorMode::LbpOnly {
        params.require_mesh_family()?;
    }
    let layout = FeatureLayout {
        channels: image.channel_count(),
        mode,
        params,
    };
    let bins = layout.bins();
    let mut values = Vec::with_capacity(layout.dimension());
    for channel in image.channels() {
        for plane in pattern_planes(channel, params, mode.sub_patterns())? {
            let counts = histogram(&plane, bins);
            let area = plane.area() as f64;
            values.extend(
                counts
                    .into_iter()
                    .map(|c| if normalize { c as f64 / area } else { c as f64 }),
            );
        }
    }
    debug_assert_eq!(values.len(), layout.dimension());
    Ok(FeatureVector {
        layout,
        normalized: normalize,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ChannelImage;

    fn textured(width: usize, height: usize, channels: usize, seed: usize) -> ColorImage {
        let samples: Vec<u8> = (0..width * height * channels)
            .map(|i| ((i * 2654435761usize + seed * 97) >> 7) as u8 % 200 + 20)
            .collect();
        ColorImage::from_interleaved_u8(width, height, channels, &samples).unwrap()
    }

    #[test]
    fn histogram_counts_codes() {
        let plane = PatternPlane {
            kind: SubPattern::Lbp,
            channel: 0,
            width: 14,
            height: 14,
            codes: vec![255; 196],
        };
        let h = histogram(&plane, 256);
        assert_eq!(h[255], 196);
        assert_eq!(h.iter().sum::<u64>(), 196);
    }

    #[test]
    fn constant_rgb_image() {
        let img = ColorImage::new((0..3).map(|t| ChannelImage::constant(16, 16, t, 9)).collect()).unwrap();
        let f = build_feature(&img, PatternParams::CANONICAL, DescriptorMode::Mdlp, true).unwrap();
        assert_eq!(f.len(), 3840);
        for t in 0..3 {
            for s in 0..5 {
                let block = f.block(t, s);
                assert_eq!(block[255], 1.0);
                assert!(block[..255].iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn lengths_per_mode() {
        let gray = textured(12, 10, 1, 1);
        let rgb = textured(12, 10, 3, 1);
        let p = PatternParams::CANONICAL;
        assert_eq!(build_feature(&gray, p, DescriptorMode::Mdlp, true).unwrap().len(), 1280);
        assert_eq!(
            build_feature(&rgb, p, DescriptorMode::LbpOnly, true).unwrap().len(),
            768
        );
        assert_eq!(
            build_feature(&rgb, p, DescriptorMode::LmepOnly, true).unwrap().len(),
            3072
        );
    }

    #[test]
    fn raw_counts_sum_to_area() {
        let img = textured(12, 10, 2, 3);
        let f = build_feature(&img, PatternParams::CANONICAL, DescriptorMode::Mdlp, false).unwrap();
        assert!(!f.is_normalized());
        for t in 0..2 {
            for s in 0..5 {
                assert_eq!(f.block(t, s).iter().sum::<f64>(), 80.0);
            }
        }
    }

    #[test]
    fn channel_permutation_permutes_blocks() {
        let img = textured(11, 9, 3, 5);
        let cfg = FeatureConfig::default();
        let f = cfg.build(&img).unwrap();
        let g = cfg.build(&img.permuted(&[2, 0, 1]).unwrap()).unwrap();
        let span = 5 * 256;
        assert_eq!(&g.values()[..span], &f.values()[2 * span..]);
        assert_eq!(&g.values()[span..2 * span], &f.values()[..span]);
        assert_eq!(&g.values()[2 * span..], &f.values()[span..2 * span]);
    }

    #[test]
    fn lbp_mode_is_a_slice_of_mdlp() {
        let img = textured(13, 13, 3, 8);
        let p = PatternParams::CANONICAL;
        let full = build_feature(&img, p, DescriptorMode::Mdlp, true).unwrap();
        let lbp = build_feature(&img, p, DescriptorMode::LbpOnly, true).unwrap();
        let lmep = build_feature(&img, p, DescriptorMode::LmepOnly, true).unwrap();
        for t in 0..3 {
            assert_eq!(lbp.block(t, 0), full.block(t, 0));
            for s in 0..4 {
                assert_eq!(lmep.block(t, s), full.block(t, s + 1));
            }
        }
    }

    #[test]
    fn mode_round_trips_through_names_and_blocks() {
        for mode in DescriptorMode::ALL {
            assert_eq!(mode.name().parse::<DescriptorMode>().unwrap(), mode);
            assert_eq!(
                DescriptorMode::from_blocks_per_channel(mode.blocks_per_channel()),
                Some(mode)
            );
        }
        assert!("ltp".parse::<DescriptorMode>().is_err());
    }

    #[test]
    fn from_parts_validates() {
        let layout = FeatureConfig::default().layout(1);
        assert!(FeatureVector::from_parts(layout, true, vec![0.0; 1280]).is_ok());
        assert!(matches!(
            FeatureVector::from_parts(layout, true, vec![0.0; 3]),
            Err(Error::Dimension {
                expected: 1280,
                found: 3
            })
        ));
        let mut bad = vec![0.0; 1280];
        bad[7] = -1.0;
        assert!(FeatureVector::from_parts(layout, true, bad).is_err());
    }
}
