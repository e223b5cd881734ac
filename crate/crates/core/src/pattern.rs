//! Local binary and local mesh pattern codes, and the per-channel plane family.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::ChannelImage;
use crate::params::{MeshDistance, PatternParams, MESH_DISTANCES};
use crate::ring::{NeighborRing, SamplingGeometry};

/// Threshold step: 1 when `x >= 0`, so ties set the bit.
#[inline]
pub fn sign(x: f64) -> u32 {
    u32::from(x >= 0.0)
}

/// Local binary pattern: bit `i` is set when neighbour `i + 1` is at least the centre.
#[inline]
pub fn lbp_code(ring: &NeighborRing) -> u32 {
    let center = ring.center();
    ring.neighbors()
        .iter()
        .enumerate()
        .fold(0, |code, (i, &g)| code | sign(g - center) << i)
}

/// Local mesh pattern at cyclic distance `d`: bit `i - 1` is set when the neighbour
/// `d` steps ahead of neighbour `i` is at least neighbour `i`.
pub fn lmep_code(ring: &NeighborRing, d: u32) -> Result<u32> {
    let d = MeshDistance::new(d, ring.len() as u32)?;
    Ok(mesh_code(ring.neighbors(), d.get() as usize))
}

#[inline]
fn mesh_code(neighbors: &[f64], d: usize) -> u32 {
    let nb = neighbors.len();
    let mut code = 0;
    for (i, &g) in neighbors.iter().enumerate() {
        code |= sign(neighbors[(i + d) % nb] - g) << i;
    }
    code
}

/// Which sub-pattern a [`PatternPlane`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubPattern {
    Lbp,
    /// Local mesh pattern at the given distance.
    Mesh(u32),
}

impl SubPattern {
    /// LBP followed by the mesh patterns for d = 1..=4.
    pub const MDLP: [SubPattern; 5] = [
        SubPattern::Lbp,
        SubPattern::Mesh(1),
        SubPattern::Mesh(2),
        SubPattern::Mesh(3),
        SubPattern::Mesh(4),
    ];
}

impl core::fmt::Display for SubPattern {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SubPattern::Lbp => f.write_str("lbp"),
            SubPattern::Mesh(d) => write!(f, "lmep-d{d}"),
        }
    }
}

/// Per-pixel codes of one sub-pattern over the interior of one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPlane {
    pub kind: SubPattern,
    pub channel: usize,
    pub width: usize,
    pub height: usize,
    pub codes: Vec<u16>,
}

impl PatternPlane {
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.codes[row * self.width + col]
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

/// Computes the requested sub-pattern planes for every pixel that has a full ring.
///
/// The output planes are `(width - 2R) x (height - 2R)` and follow the order of `kinds`.
pub fn pattern_planes(img: &ChannelImage, params: PatternParams, kinds: &[SubPattern]) -> Result<Vec<PatternPlane>> {
    let r = params.radius() as usize;
    if img.width() < 2 * r + 1 || img.height() < 2 * r + 1 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            radius: params.radius(),
        });
    }
    let nb = params.neighbors();
    for kind in kinds {
        if let SubPattern::Mesh(d) = *kind {
            MeshDistance::new(d, nb)?;
        }
    }

    let (width, height) = (img.width() - 2 * r, img.height() - 2 * r);
    let mut planes: Vec<PatternPlane> = kinds
        .iter()
        .map(|&kind| PatternPlane {
            kind,
            channel: img.channel(),
            width,
            height,
            codes: Vec::with_capacity(width * height),
        })
        .collect();

    let geometry = SamplingGeometry::new(params);
    for row in r..img.height() - r {
        for col in r..img.width() - r {
            let ring = geometry.sample_unchecked(img, row, col);
            for plane in planes.iter_mut() {
                let code = match plane.kind {
                    SubPattern::Lbp => lbp_code(&ring),
                    SubPattern::Mesh(d) => mesh_code(ring.neighbors(), d as usize),
                };
                plane.codes.push(code as u16);
            }
        }
    }
    Ok(planes)
}

/// The five-plane family for one channel: LBP, then mesh patterns at d = 1..=4.
pub fn mdlp_planes(img: &ChannelImage, params: PatternParams) -> Result<Vec<PatternPlane>> {
    params.require_mesh_family()?;
    debug_assert_eq!(SubPattern::MDLP.len() as u32, 1 + MESH_DISTANCES);
    pattern_planes(img, params, &SubPattern::MDLP)
}
