//! Procedural colour-texture corpus for desk-scale benchmarking.
//!
//! Classes come in families of four so that neighbouring classes are easy to confuse.
//! A family recipe is drawn from a ChaCha8 stream seeded by `(seed, family)`; for every
//! colour channel it holds
//!
//! * a mean level in `[60, 190]`,
//! * two oriented sinusoidal gratings, each with frequency in `[0.02, 0.45]` cycles per
//!   pixel, orientation in `[0, π)`, phase in `[0, 2π)` and amplitude in `[4, 30]`,
//! * a uniform pixel-noise amplitude in `[5, 35]`.
//!
//! A class perturbs its family recipe from a stream seeded by `(seed, family, class)`:
//! frequencies and amplitudes are scaled by `[0.85, 1.15]`, orientations shifted by
//! `[-0.3, 0.3]` rad, noise scaled by `[0.7, 1.3]` and phases redrawn.
//!
//! Textures are not stationary: coordinates are bent by a smooth displacement field of
//! up to `WARP` pixels with two cycles per source side, and grating amplitudes are
//! modulated by up to `±MODULATION` with one cycle per source side. With warped
//! coordinates `(x', y')` a pixel is
//! `mean + Σ a(y) · sin(2π f (x' cos θ + y' sin θ) + φ) + noise`, rounded and clamped to
//! `[0, 255]`. Noise is drawn from a stream seeded by `(seed, class, instance)`.
//! Sources are 512x512 and are cut into the 16 standard 128x128 tiles.

use std::f64::consts::PI;

use mdlp_core::image::VISTEX_SOURCE_SIZE;
use mdlp_core::{tile_vistex, ColorImage, LabeledImage};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

/// Seed of the bundled comparison corpus.
pub const DEFAULT_SEED: u64 = 0x4d44_4c50;
/// Class count of the bundled comparison corpus.
pub const COMPARISON_CLASSES: usize = 20;
/// Class count of the tiling-protocol corpus (40 sources, 640 tiles).
pub const VISTEX_CLASSES: usize = 40;

const CHANNELS: usize = 3;
const FAMILY_SIZE: u32 = 4;
const WARP: f64 = 12.0;
const MODULATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grating {
    frequency: f64,
    orientation: f64,
    phase: f64,
    amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct ChannelRecipe {
    mean: f64,
    gratings: [Grating; 2],
    noise: f64,
}

/// Generation recipe of one texture class.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureClass {
    seed: u64,
    class: u32,
    channels: [ChannelRecipe; CHANNELS],
}

fn stream(parts: &[u64]) -> ChaCha8Rng {
    let mut mixed = 0x9e37_79b9_7f4a_7c15u64;
    for &p in parts {
        mixed = (mixed ^ p).wrapping_mul(0x100_0000_01b3).rotate_left(29);
    }
    ChaCha8Rng::seed_from_u64(mixed)
}

impl TextureClass {
    pub fn new(seed: u64, class: u32) -> Self {
        let family = u64::from(class / FAMILY_SIZE);
        let mut rng = stream(&[seed, family]);
        let grating = |rng: &mut ChaCha8Rng| Grating {
            frequency: rng.random_range(0.02..0.45),
            orientation: rng.random_range(0.0..PI),
            phase: rng.random_range(0.0..2.0 * PI),
            amplitude: rng.random_range(4.0..30.0),
        };
        let mut channels: [ChannelRecipe; CHANNELS] = std::array::from_fn(|_| ChannelRecipe {
            mean: rng.random_range(60.0..190.0),
            gratings: [grating(&mut rng), grating(&mut rng)],
            noise: rng.random_range(5.0..35.0),
        });

        let mut rng = stream(&[seed, family, u64::from(class)]);
        for recipe in &mut channels {
            for g in &mut recipe.gratings {
                g.frequency *= rng.random_range(0.85..1.15);
                g.amplitude *= rng.random_range(0.85..1.15);
                g.orientation += rng.random_range(-0.3..0.3);
                g.phase = rng.random_range(0.0..2.0 * PI);
            }
            recipe.noise *= rng.random_range(0.7..1.3);
        }
        Self { seed, class, channels }
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    /// Renders a `width` x `height` instance; `instance` selects the noise stream.
    pub fn render(&self, width: usize, height: usize, instance: u64) -> ColorImage {
        let mut noise = stream(&[self.seed, u64::from(self.class), instance, 1]);
        let mut samples = vec![0u8; width * height * CHANNELS];
        let (fx, fy) = (2.0 * PI / width as f64, 2.0 * PI / height as f64);
        for y in 0..height {
            for x in 0..width {
                let (xf, yf) = (x as f64, y as f64);
                let xw = xf + WARP * (2.0 * fy * yf).sin();
                let yw = yf + WARP * (2.0 * fx * xf + 1.0).sin();
                for (t, recipe) in self.channels.iter().enumerate() {
                    let mut v = recipe.mean;
                    for (k, g) in recipe.gratings.iter().enumerate() {
                        let amplitude = g.amplitude * (1.0 + MODULATION * (fy * yf - (k + t) as f64).sin());
                        let along = xw * g.orientation.cos() + yw * g.orientation.sin();
                        v += amplitude * (2.0 * PI * g.frequency * along + g.phase).sin();
                    }
                    v += noise.random_range(-recipe.noise..=recipe.noise);
                    samples[(y * width + x) * CHANNELS + t] = v.round().clamp(0.0, 255.0) as u8;
                }
            }
        }
        ColorImage::from_interleaved_u8(width, height, CHANNELS, &samples).expect("sample count matches")
    }
}

/// One 512x512 source texture per class, labelled with its class index.
pub fn synthetic_sources(classes: usize, seed: u64) -> Vec<LabeledImage> {
    (0..classes as u32)
        .into_par_iter()
        .map(|class| LabeledImage {
            id: source_name(class),
            category: class,
            image: TextureClass::new(seed, class).render(VISTEX_SOURCE_SIZE, VISTEX_SOURCE_SIZE, 0),
        })
        .collect()
}

pub fn source_name(class: u32) -> String {
    format!("texture{class:02}")
}

/// All 128x128 tiles of [`synthetic_sources`], 16 per class, in class then row-major order.
pub fn synthetic_tiles(classes: usize, seed: u64) -> Result<Vec<LabeledImage>> {
    let mut tiles = Vec::with_capacity(classes * 16);
    for source in synthetic_sources(classes, seed) {
        tiles.extend(tile_vistex(&source)?);
    }
    Ok(tiles)
}
