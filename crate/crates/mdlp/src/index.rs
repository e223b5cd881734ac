//! Binary feature index files.
//!
//! All integers are little-endian.
//!
//! ```text
//! magic        4 bytes  "MDLP"
//! version      u32      1
//! channels     u32      C
//! neighbors    u32      Nb
//! radius       u32      R
//! normalized   u8       0 | 1
//! entry_count  u64
//! feature_dim  u64      C * blocks * 2^Nb (blocks: 5 mdlp, 1 lbp, 4 lmep)
//! entries      entry_count times:
//!     id_len   u32
//!     id       id_len bytes of UTF-8
//!     category u32
//!     feature  feature_dim x f32
//! ```

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use mdlp_core::{DescriptorMode, FeatureLayout, FeatureVector, IndexEntry, PatternParams};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"MDLP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 * 4 + 1 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexHeader {
    pub version: u32,
    pub channels: u32,
    pub neighbors: u32,
    pub radius: u32,
    pub normalized: bool,
    pub entry_count: u64,
    pub feature_dim: u64,
}

impl IndexHeader {
    /// Descriptor layout implied by the header; the mode follows from the dimension.
    pub fn layout(&self) -> Result<FeatureLayout> {
        let params = PatternParams::new(self.neighbors, self.radius)?;
        let per_block = u64::from(self.channels) * params.bins() as u64;
        let mode = (self.channels > 0 && self.feature_dim.is_multiple_of(per_block))
            .then(|| DescriptorMode::from_blocks_per_channel((self.feature_dim / per_block) as usize))
            .flatten()
            .ok_or_else(|| {
                Error::Malformed(format!(
                    "feature dimension {} does not match {} channels with {} neighbors",
                    self.feature_dim, self.channels, self.neighbors
                ))
            })?;
        Ok(FeatureLayout {
            channels: self.channels as usize,
            mode,
            params,
        })
    }
}

/// A set of signatures sharing one layout, as stored in an index file.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureIndex {
    pub layout: FeatureLayout,
    pub normalized: bool,
    pub entries: Vec<IndexEntry>,
}

impl FeatureIndex {
    /// Checks that every entry matches `layout` and `normalized`, and rounds features to
    /// the `f32` precision the file stores.
    pub fn new(layout: FeatureLayout, normalized: bool, mut entries: Vec<IndexEntry>) -> Result<Self> {
        for e in &entries {
            if *e.feature.layout() != layout || e.feature.is_normalized() != normalized {
                return Err(Error::Inconsistent(format!(
                    "entry {:?} has {} features ({} channels, {}, normalized={}), index expects {} ({} channels, {}, normalized={normalized})",
                    e.id,
                    e.feature.len(),
                    e.feature.layout().channels,
                    e.feature.layout().mode,
                    e.feature.is_normalized(),
                    layout.dimension(),
                    layout.channels,
                    layout.mode,
                )));
            }
            if u32::try_from(e.id.len()).is_err() {
                return Err(Error::Inconsistent(format!(
                    "identifier of {} bytes is too long",
                    e.id.len()
                )));
            }
        }
        for e in &mut entries {
            e.feature = e.feature.to_f32_precision();
        }
        Ok(Self {
            layout,
            normalized,
            entries,
        })
    }

    /// Builds an index from entries, taking the layout from the first one.
    pub fn from_entries(entries: Vec<IndexEntry>) -> Result<Self> {
        let first = entries.first().ok_or(mdlp_core::Error::EmptyIndex)?;
        let (layout, normalized) = (*first.feature.layout(), first.feature.is_normalized());
        Self::new(layout, normalized, entries)
    }

    pub fn header(&self) -> IndexHeader {
        IndexHeader {
            version: VERSION,
            channels: self.layout.channels as u32,
            neighbors: self.layout.params.neighbors(),
            radius: self.layout.params.radius(),
            normalized: self.normalized,
            entry_count: self.entries.len() as u64,
            feature_dim: self.layout.dimension() as u64,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let dim = self.layout.dimension();
        let mut out =
            Vec::with_capacity(HEADER_LEN + self.entries.iter().map(|e| 8 + e.id.len() + 4 * dim).sum::<usize>());
        let h = self.header();
        out.extend_from_slice(MAGIC);
        for v in [h.version, h.channels, h.neighbors, h.radius] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(u8::from(h.normalized));
        out.extend_from_slice(&h.entry_count.to_le_bytes());
        out.extend_from_slice(&h.feature_dim.to_le_bytes());
        for e in &self.entries {
            out.extend_from_slice(&(e.id.len() as u32).to_le_bytes());
            out.extend_from_slice(e.id.as_bytes());
            out.extend_from_slice(&e.category.to_le_bytes());
            for &v in e.feature.values() {
                out.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let magic: [u8; 4] = r.take(4, "magic")?.try_into().expect("4 bytes");
        if &magic != MAGIC {
            return Err(Error::BadMagic { found: magic });
        }
        let version = r.u32("version")?;
        if version != VERSION {
            return Err(Error::Version {
                found: version,
                supported: VERSION,
            });
        }
        let header = IndexHeader {
            version,
            channels: r.u32("channel count")?,
            neighbors: r.u32("neighbor count")?,
            radius: r.u32("radius")?,
            normalized: match r.take(1, "normalization flag")?[0] {
                0 => false,
                1 => true,
                other => return Err(Error::Malformed(format!("normalization flag {other}"))),
            },
            entry_count: r.u64("entry count")?,
            feature_dim: r.u64("feature dimension")?,
        };
        let layout = header.layout()?;
        let dim = layout.dimension();

        // each entry needs at least its fixed-size fields
        let min_entry = 8 + 4 * dim;
        let cap = (bytes.len() - r.pos) / min_entry.max(1);
        let mut entries = Vec::with_capacity((header.entry_count as usize).min(cap));
        for _ in 0..header.entry_count {
            let id_len = r.u32("identifier length")? as usize;
            let id = std::str::from_utf8(r.take(id_len, "identifier")?)
                .map_err(|e| Error::Malformed(format!("identifier is not UTF-8: {e}")))?
                .to_owned();
            let category = r.u32("category")?;
            let raw = r.take(4 * dim, "feature vector")?;
            let values = raw
                .chunks_exact(4)
                .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
                .collect();
            let feature = FeatureVector::from_parts(layout, header.normalized, values)
                .map_err(|e| Error::Malformed(format!("entry {id:?}: {e}")))?;
            entries.push(IndexEntry { id, category, feature });
        }
        if r.pos != bytes.len() {
            return Err(Error::Malformed(format!(
                "{} trailing bytes after {} entries",
                bytes.len() - r.pos,
                header.entry_count
            )));
        }
        Ok(Self {
            layout,
            normalized: header.normalized,
            entries,
        })
    }

    /// Writes to a sibling temporary file, syncs it and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<u64> {
        let bytes = self.to_bytes();
        let tmp = temp_sibling(path);
        let write = || -> std::io::Result<()> {
            let mut file = File::create(&tmp)?;
            file.write_all(&bytes)?;
            file.sync_all()?;
            fs::rename(&tmp, path)
        };
        if let Err(e) = write() {
            let _ = fs::remove_file(&tmp);
            return Err(Error::io(path, e));
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            // directory fsync is not supported everywhere
            if let Ok(d) = File::open(dir) {
                let _ = d.sync_all();
            }
        }
        Ok(bytes.len() as u64)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp-{}", std::process::id()));
    path.with_file_name(name)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, context: &'static str) -> Result<&'a [u8]> {
        let available = self.bytes.len() - self.pos;
        if n > available {
            return Err(Error::Truncated {
                context,
                offset: self.pos,
                needed: n,
                available,
            });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self, context: &'static str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, context)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self, context: &'static str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, context)?.try_into().expect("8 bytes")))
    }
}

/// Saves entries that share one layout; see [`FeatureIndex::save`].
pub fn save_index(index: &FeatureIndex, path: &Path) -> Result<u64> {
    index.save(path)
}

pub fn load_index(path: &Path) -> Result<FeatureIndex> {
    FeatureIndex::load(path)
}
