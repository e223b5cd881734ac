//! Channel grids, multichannel images and tiling.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default number of intensity levels (8-bit channels).
pub const DEFAULT_LEVELS: u32 = 256;

/// One colour channel stored row-major, intensities in `[0, levels - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelImage {
    width: usize,
    height: usize,
    channel: usize,
    levels: u32,
    data: Vec<u16>,
}

impl ChannelImage {
    pub fn new(width: usize, height: usize, channel: usize, levels: u32, data: Vec<u16>) -> Result<Self> {
        if levels == 0 || levels > 1 << 16 {
            return Err(Error::Params(format!(
                "intensity levels must be in [1, 65536], got {levels}"
            )));
        }
        let expected = width * height;
        if data.len() != expected {
            return Err(Error::GridLength {
                width,
                height,
                expected,
                found: data.len(),
            });
        }
        if let Some(&value) = data.iter().find(|&&v| u32::from(v) >= levels) {
            return Err(Error::IntensityOutOfRange {
                value: value.into(),
                levels,
            });
        }
        Ok(Self {
            width,
            height,
            channel,
            levels,
            data,
        })
    }

    /// Builds an 8-bit channel.
    pub fn from_u8(width: usize, height: usize, channel: usize, data: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            channel,
            DEFAULT_LEVELS,
            data.iter().map(|&v| u16::from(v)).collect(),
        )
    }

    /// Builds an 8-bit channel where every pixel is `value`.
    pub fn constant(width: usize, height: usize, channel: usize, value: u8) -> Self {
        Self {
            width,
            height,
            channel,
            levels: DEFAULT_LEVELS,
            data: alloc::vec![u16::from(value); width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Channel index `t` within its parent image (0-based).
    pub fn channel(&self) -> usize {
        self.channel
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.width + col]
    }

    /// Adds `offset` to every intensity, failing if any result leaves the level range.
    pub fn shifted(&self, offset: i32) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|&v| {
                let shifted = i64::from(v) + i64::from(offset);
                if shifted < 0 || shifted >= i64::from(self.levels) {
                    Err(Error::IntensityOutOfRange {
                        value: shifted.clamp(0, i64::from(u32::MAX)) as u32,
                        levels: self.levels,
                    })
                } else {
                    Ok(shifted as u16)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { data, ..self.clone() })
    }

    fn crop(&self, top: usize, left: usize, width: usize, height: usize) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for row in top..top + height {
            let start = row * self.width + left;
            data.extend_from_slice(&self.data[start..start + width]);
        }
        Self {
            width,
            height,
            channel: self.channel,
            levels: self.levels,
            data,
        }
    }

    fn with_channel(mut self, channel: usize) -> Self {
        self.channel = channel;
        self
    }
}

/// A `C`-channel image whose channels share one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorImage {
    channels: Vec<ChannelImage>,
}

impl ColorImage {
    /// Channel indices are reassigned to their position in `channels`.
    pub fn new(channels: Vec<ChannelImage>) -> Result<Self> {
        let first = channels.first().ok_or(Error::NoChannels)?;
        let (width, height) = (first.width, first.height);
        for (t, ch) in channels.iter().enumerate() {
            if ch.width != width || ch.height != height {
                return Err(Error::ChannelShape {
                    channel: t,
                    width: ch.width,
                    height: ch.height,
                    expected_width: width,
                    expected_height: height,
                });
            }
        }
        Ok(Self {
            channels: channels
                .into_iter()
                .enumerate()
                .map(|(t, ch)| ch.with_channel(t))
                .collect(),
        })
    }

    /// Splits interleaved 8-bit samples (`RGBRGB...`) into planar channels.
    pub fn from_interleaved_u8(width: usize, height: usize, channels: usize, samples: &[u8]) -> Result<Self> {
        if channels == 0 {
            return Err(Error::NoChannels);
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(Error::GridLength {
                width,
                height,
                expected,
                found: samples.len(),
            });
        }
        let planes = (0..channels)
            .map(|t| {
                let data = samples
                    .iter()
                    .skip(t)
                    .step_by(channels)
                    .map(|&v| u16::from(v))
                    .collect();
                ChannelImage::new(width, height, t, DEFAULT_LEVELS, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(planes)
    }

    pub fn width(&self) -> usize {
        self.channels[0].width
    }

    pub fn height(&self) -> usize {
        self.channels[0].height
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn channels(&self) -> &[ChannelImage] {
        &self.channels
    }

    pub fn shifted(&self, offset: i32) -> Result<Self> {
        Ok(Self {
            channels: self.channels.iter().map(|c| c.shifted(offset)).collect::<Result<_>>()?,
        })
    }

    /// Returns the image with its channels reordered so that output channel `i` is input channel `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.channels.len() {
            return Err(Error::Params(format!(
                "channel permutation of length {} for {} channels",
                order.len(),
                self.channels.len()
            )));
        }
        let channels = order
            .iter()
            .map(|&t| {
                self.channels
                    .get(t)
                    .cloned()
                    .ok_or_else(|| Error::Params(format!("channel {t} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(channels)
    }

    /// Interleaves the channels back into `RGBRGB...` order.
    pub fn to_interleaved_u16(&self) -> Vec<u16> {
        let c = self.channels.len();
        let mut out = alloc::vec![0u16; self.width() * self.height() * c];
        for (t, ch) in self.channels.iter().enumerate() {
            for (i, &v) in ch.data.iter().enumerate() {
                out[i * c + t] = v;
            }
        }
        out
    }

    /// Partitions the image into non-overlapping tiles, row-major.
    pub fn tiles(&self, tile_width: usize, tile_height: usize) -> Result<Vec<Tile>> {
        let (width, height) = (self.width(), self.height());
        let fail = |detail| Error::Tiling {
            width,
            height,
            tile_width,
            tile_height,
            detail,
        };
        if tile_width == 0 || tile_height == 0 {
            return Err(fail(": tile size is zero"));
        }
        if width % tile_width != 0 || height % tile_height != 0 {
            return Err(fail(": size is not a multiple of the tile size"));
        }
        let mut tiles = Vec::with_capacity((width / tile_width) * (height / tile_height));
        for row in 0..height / tile_height {
            for col in 0..width / tile_width {
                let channels = self
                    .channels
                    .iter()
                    .map(|ch| ch.crop(row * tile_height, col * tile_width, tile_width, tile_height))
                    .collect();
                tiles.push(Tile {
                    row,
                    col,
                    image: Self { channels },
                });
            }
        }
        Ok(tiles)
    }
}

/// A tile cut from a larger image at grid position (`row`, `col`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub row: usize,
    pub col: usize,
    pub image: ColorImage,
}

/// An image together with its identifier and category label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledImage {
    pub id: String,
    pub category: u32,
    pub image: ColorImage,
}

/// Side length of a texture source image under the tiling protocol.
pub const VISTEX_SOURCE_SIZE: usize = 512;
/// Side length of each tile under the tiling protocol.
pub const VISTEX_TILE_SIZE: usize = 128;

/// Cuts a 512x512 texture into 16 non-overlapping 128x128 tiles that inherit its category.
///
/// Tiles are named `<id>_r<row>_c<col>` and returned row-major.
pub fn tile_vistex(source: &LabeledImage) -> Result<Vec<LabeledImage>> {
    let (width, height) = (source.image.width(), source.image.height());
    if width != VISTEX_SOURCE_SIZE || height != VISTEX_SOURCE_SIZE {
        return Err(Error::Tiling {
            width,
            height,
            tile_width: VISTEX_TILE_SIZE,
            tile_height: VISTEX_TILE_SIZE,
            detail: ": source must be exactly 512x512",
        });
    }
    Ok(source
        .image
        .tiles(VISTEX_TILE_SIZE, VISTEX_TILE_SIZE)?
        .into_iter()
        .map(|tile| LabeledImage {
            id: tile_name(&source.id, tile.row, tile.col),
            category: source.category,
            image: tile.image,
        })
        .collect())
}

pub fn tile_name(stem: &str, row: usize, col: usize) -> String {
    format!("{stem}_r{row}_c{col}")
}
