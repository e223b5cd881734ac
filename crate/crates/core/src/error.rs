use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid pattern parameters: {0}")]
    Params(String),

    #[error("mesh distance {distance} outside [1, {max}] for {neighbors} neighbors", max = neighbors / 2)]
    MeshDistance { distance: u32, neighbors: u32 },

    #[error("pixel ({row}, {col}) has no full radius-{radius} ring in a {width}x{height} channel")]
    NotInterior {
        row: usize,
        col: usize,
        radius: u32,
        width: usize,
        height: usize,
    },

    #[error("{width}x{height} image is smaller than the {side}x{side} minimum for radius {radius}", side = 2 * radius + 1)]
    ImageTooSmall { width: usize, height: usize, radius: u32 },

    #[error("intensity {value} outside [0, {max}]", max = levels - 1)]
    IntensityOutOfRange { value: u32, levels: u32 },

    #[error("grid of {width}x{height} needs {expected} samples, got {found}")]
    GridLength {
        width: usize,
        height: usize,
        expected: usize,
        found: usize,
    },

    #[error("channel {channel} is {width}x{height}, expected {expected_width}x{expected_height}")]
    ChannelShape {
        channel: usize,
        width: usize,
        height: usize,
        expected_width: usize,
        expected_height: usize,
    },

    #[error("image has no channels")]
    NoChannels,

    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("index is empty")]
    EmptyIndex,

    #[error("retrieval depth must be at least 1")]
    ZeroDepth,

    #[error("{width}x{height} image cannot be tiled into {tile_width}x{tile_height} tiles{detail}")]
    Tiling {
        width: usize,
        height: usize,
        tile_width: usize,
        tile_height: usize,
        detail: &'static str,
    },
}
