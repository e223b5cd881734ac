//! Circular neighbourhood sampling.
//!
//! Neighbour `i` (1-based) sits at angle `2π(i-1)/Nb` from the positive column axis,
//! counter-clockwise as seen on screen, so with rows growing downward its position is
//! `(row - R sin θ, col + R cos θ)`. Positions within `GRID_SNAP` of a pixel centre are read
//! directly; all others are bilinearly interpolated from the four surrounding pixels.
//!
//! Eight neighbours at radius one are the exception: they use the 3x3 square ring
//! (diagonals at the corner pixels), the classic interpolation-free LBP neighbourhood.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::image::ChannelImage;
use crate::params::{PatternParams, MAX_NEIGHBORS};

const GRID_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sample {
    Exact { dr: isize, dc: isize },
    Bilinear { dr: isize, dc: isize, fr: f64, fc: f64 },
}

/// Precomputed sampling offsets for one [`PatternParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGeometry {
    params: PatternParams,
    samples: [Sample; MAX_NEIGHBORS as usize],
}

impl SamplingGeometry {
    pub fn new(params: PatternParams) -> Self {
        let mut samples = [Sample::Exact { dr: 0, dc: 0 }; MAX_NEIGHBORS as usize];
        let nb = params.neighbors();
        let radius = f64::from(params.radius());
        for (i, slot) in samples.iter_mut().take(nb as usize).enumerate() {
            let theta = 2.0 * PI * i as f64 / f64::from(nb);
            let (mut row, mut col) = (-radius * libm::sin(theta), radius * libm::cos(theta));
            if params == PatternParams::CANONICAL {
                row = snap_to_square(row);
                col = snap_to_square(col);
            }
            let (rr, rc) = (libm::round(row), libm::round(col));
            *slot = if libm::fabs(row - rr) < GRID_SNAP && libm::fabs(col - rc) < GRID_SNAP {
                Sample::Exact {
                    dr: rr as isize,
                    dc: rc as isize,
                }
            } else {
                let (r0, c0) = (libm::floor(row), libm::floor(col));
                Sample::Bilinear {
                    dr: r0 as isize,
                    dc: c0 as isize,
                    fr: row - r0,
                    fc: col - c0,
                }
            };
        }
        Self { params, samples }
    }

    pub fn params(&self) -> PatternParams {
        self.params
    }

    /// True when every neighbour lands on a pixel centre.
    pub fn is_exact(&self) -> bool {
        self.active().iter().all(|s| matches!(s, Sample::Exact { .. }))
    }

    fn active(&self) -> &[Sample] {
        &self.samples[..self.params.neighbors() as usize]
    }

    /// Samples the ring around an interior pixel. Interior-ness is the caller's contract.
    #[inline]
    pub(crate) fn sample_unchecked(&self, img: &ChannelImage, row: usize, col: usize) -> NeighborRing {
        let mut ring = NeighborRing {
            center: f64::from(img.get(row, col)),
            values: [0.0; MAX_NEIGHBORS as usize],
            len: self.params.neighbors() as usize,
        };
        let at = |dr: isize, dc: isize| f64::from(img.get(row.wrapping_add_signed(dr), col.wrapping_add_signed(dc)));
        for (value, sample) in ring.values.iter_mut().zip(self.active()) {
            *value = match *sample {
                Sample::Exact { dr, dc } => at(dr, dc),
                Sample::Bilinear { dr, dc, fr, fc } => {
                    let top = at(dr, dc) * (1.0 - fc) + at(dr, dc + 1) * fc;
                    let bottom = at(dr + 1, dc) * (1.0 - fc) + at(dr + 1, dc + 1) * fc;
                    top * (1.0 - fr) + bottom * fr
                }
            };
        }
        ring
    }
}

fn snap_to_square(x: f64) -> f64 {
    if libm::fabs(x) < GRID_SNAP {
        0.0
    } else {
        libm::copysign(1.0, x)
    }
}

/// Centre intensity plus the `Nb` ring samples in angular order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborRing {
    center: f64,
    values: [f64; MAX_NEIGHBORS as usize],
    len: usize,
}

impl NeighborRing {
    /// `neighbors` must have an even length in `[2, 16]`.
    pub fn new(center: f64, neighbors: &[f64]) -> Result<Self> {
        PatternParams::new(neighbors.len() as u32, 1)?;
        let mut values = [0.0; MAX_NEIGHBORS as usize];
        values[..neighbors.len()].copy_from_slice(neighbors);
        Ok(Self {
            center,
            values,
            len: neighbors.len(),
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Ring samples; index 0 holds neighbour 1.
    pub fn neighbors(&self) -> &[f64] {
        &self.values[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Samples the ring at (`row`, `col`), which must have every ring point inside the image.
pub fn sample_ring(img: &ChannelImage, row: usize, col: usize, params: PatternParams) -> Result<NeighborRing> {
    let r = params.radius() as usize;
    if row < r || col < r || row + r >= img.height() || col + r >= img.width() {
        return Err(Error::NotInterior {
            row,
            col,
            radius: params.radius(),
            width: img.width(),
            height: img.height(),
        });
    }
    Ok(SamplingGeometry::new(params).sample_unchecked(img, row, col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn patch(width: usize, height: usize) -> ChannelImage {
        let data: Vec<u8> = (0..width * height).map(|i| (i * 37 % 256) as u8).collect();
        ChannelImage::from_u8(width, height, 0, &data).unwrap()
    }

    #[test]
    fn constant_field_gives_constant_ring() {
        let img = ChannelImage::constant(7, 7, 0, 50);
        for params in [PatternParams::CANONICAL, PatternParams::new(16, 2).unwrap()] {
            let ring = sample_ring(&img, 3, 3, params).unwrap();
            assert_eq!(ring.center(), 50.0);
            assert!(ring.neighbors().iter().all(|&v| (v - 50.0).abs() < 1e-12));
        }
    }

    #[test]
    fn canonical_ring_is_exact_and_axis_aligned() {
        let geometry = SamplingGeometry::new(PatternParams::CANONICAL);
        assert!(geometry.is_exact());
        let img = patch(5, 5);
        let ring = sample_ring(&img, 2, 2, PatternParams::CANONICAL).unwrap();
        let n = ring.neighbors();
        assert_eq!(n[0], f64::from(img.get(2, 3)));
        assert_eq!(n[1], f64::from(img.get(1, 3)));
        assert_eq!(n[2], f64::from(img.get(1, 2)));
        assert_eq!(n[3], f64::from(img.get(1, 1)));
        assert_eq!(n[4], f64::from(img.get(2, 1)));
        assert_eq!(n[5], f64::from(img.get(3, 1)));
        assert_eq!(n[6], f64::from(img.get(3, 2)));
        assert_eq!(n[7], f64::from(img.get(3, 3)));
    }

    #[test]
    fn radius_two_diagonals_are_interpolated() {
        let geometry = SamplingGeometry::new(PatternParams::new(8, 2).unwrap());
        assert!(!geometry.is_exact());
    }

    #[test]
    fn border_pixels_are_rejected() {
        let img = patch(5, 5);
        let params = PatternParams::new(8, 2).unwrap();
        assert!(sample_ring(&img, 2, 2, params).is_ok());
        assert!(matches!(
            sample_ring(&img, 1, 2, params),
            Err(Error::NotInterior { .. })
        ));
        assert!(matches!(
            sample_ring(&img, 2, 3, params),
            Err(Error::NotInterior { .. })
        ));
    }

    #[test]
    fn ring_constructor_checks_length() {
        assert!(NeighborRing::new(0.0, &[1.0; 8]).is_ok());
        assert!(NeighborRing::new(0.0, &[1.0; 7]).is_err());
        assert!(NeighborRing::new(0.0, &[1.0; 18]).is_err());
    }
}
