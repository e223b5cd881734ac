use alloc::format;

use crate::error::{Error, Result};

/// Largest supported neighbour count; codes then fit in 16 bits.
pub const MAX_NEIGHBORS: u32 = 16;

/// Number of mesh distances fused into the descriptor (d = 1..=4).
pub const MESH_DISTANCES: u32 = 4;

/// Sampling ring configuration: `neighbors` points at integer `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternParams {
    neighbors: u32,
    radius: u32,
}

impl PatternParams {
    /// Eight neighbours at radius one: the 3x3 neighbourhood.
    pub const CANONICAL: Self = Self {
        neighbors: 8,
        radius: 1,
    };

    pub fn new(neighbors: u32, radius: u32) -> Result<Self> {
        if !(2..=MAX_NEIGHBORS).contains(&neighbors) || !neighbors.is_multiple_of(2) {
            return Err(Error::Params(format!(
                "neighbor count must be even and in [2, {MAX_NEIGHBORS}], got {neighbors}"
            )));
        }
        if radius == 0 {
            return Err(Error::Params("radius must be at least 1".into()));
        }
        Ok(Self { neighbors, radius })
    }

    pub fn neighbors(&self) -> u32 {
        self.neighbors
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Histogram bins per sub-pattern, `2^neighbors`.
    pub fn bins(&self) -> usize {
        1usize << self.neighbors
    }

    /// Largest code any pattern can emit.
    pub fn max_code(&self) -> u32 {
        (1u32 << self.neighbors) - 1
    }

    pub fn mesh_distance(&self, d: u32) -> Result<MeshDistance> {
        MeshDistance::new(d, self.neighbors)
    }

    /// Fails unless every mesh distance 1..=4 is valid, i.e. `neighbors >= 8`.
    pub fn require_mesh_family(&self) -> Result<()> {
        self.mesh_distance(MESH_DISTANCES).map(|_| ())
    }
}

impl Default for PatternParams {
    fn default() -> Self {
        Self::CANONICAL
    }
}

/// Cyclic offset `d` in `[1, neighbors / 2]` between the two ring samples compared by a mesh bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeshDistance(u32);

impl MeshDistance {
    pub fn new(distance: u32, neighbors: u32) -> Result<Self> {
        if distance == 0 || distance > neighbors / 2 {
            return Err(Error::MeshDistance { distance, neighbors });
        }
        Ok(Self(distance))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// 1-based partner index compared against neighbour `i` (also 1-based):
/// `1 + ((i + neighbors + d - 1) mod neighbors)`, i.e. the neighbour `d` steps ahead.
#[inline]
pub fn mesh_partner(i: u32, neighbors: u32, d: MeshDistance) -> u32 {
    1 + (i + neighbors + d.0 - 1) % neighbors
}
