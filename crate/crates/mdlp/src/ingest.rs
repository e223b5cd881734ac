//! Dataset discovery, category labelling and image decoding.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use image::{DynamicImage, ImageFormat, ImageReader};
use mdlp_core::{ColorImage, LabeledImage};
use walkdir::WalkDir;

use crate::error::{Error, Result};

/// How category labels are assigned to dataset files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelRule {
    /// Top-level folder under the root names the category; categories are numbered
    /// by the sorted folder names.
    Folders,
    /// Numeric file stem `id`, category `id / 100` (Corel grouping).
    Corel,
    /// Explicit `relative_path,category_id` rows.
    Csv(PathBuf),
}

impl LabelRule {
    pub fn name(&self) -> &'static str {
        match self {
            LabelRule::Folders => "folders",
            LabelRule::Corel => "corel",
            LabelRule::Csv(_) => "csv",
        }
    }
}

impl fmt::Display for LabelRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelRule::Csv(path) => write!(f, "csv:{}", path.display()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for LabelRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "folders" => Ok(LabelRule::Folders),
            "corel" => Ok(LabelRule::Corel),
            _ => match s.strip_prefix("csv:") {
                Some(path) if !path.is_empty() => Ok(LabelRule::Csv(path.into())),
                _ => Err(Error::Config(format!(
                    "unknown label rule {s:?} (expected folders, corel or csv:<path>)"
                ))),
            },
        }
    }
}

/// Category of a Corel-style file name: numeric stem divided by 100.
pub fn corel_category(path: &Path) -> Option<u32> {
    let id: u64 = path.file_stem()?.to_str()?.parse().ok()?;
    u32::try_from(id / 100).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the dataset root with `/` separators.
    pub id: String,
    pub path: PathBuf,
    pub category: u32,
    pub channels: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub path: PathBuf,
    pub reason: String,
}

/// Labelled image references discovered under a dataset root, ordered by path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub convention: String,
    pub entries: Vec<ManifestEntry>,
    /// Number of entries per category (`N_t`).
    pub category_sizes: BTreeMap<u32, usize>,
    pub skipped: Vec<Skipped>,
}

impl DatasetManifest {
    pub fn channels(&self) -> usize {
        self.entries.first().map_or(0, |e| e.channels)
    }
}

fn relative_id(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn is_image_path(path: &Path) -> bool {
    path.extension().and_then(ImageFormat::from_extension).is_some()
}

fn read_label_map(path: &Path) -> Result<HashMap<String, u32>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut map = HashMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| label_error(path, e))?;
        if record.len() != 2 {
            return Err(label_error(
                path,
                format!("row {} has {} fields, expected 2", line + 1, record.len()),
            ));
        }
        let (file, category) = (&record[0], &record[1]);
        if line == 0 && category.parse::<u32>().is_err() {
            // header row
            continue;
        }
        let category = category.parse().map_err(|_| {
            label_error(
                path,
                format!("row {}: category {category:?} is not an integer", line + 1),
            )
        })?;
        map.insert(file.replace('\\', "/"), category);
    }
    Ok(map)
}

fn label_error(path: &Path, message: impl fmt::Display) -> Error {
    Error::LabelMap {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

/// Channel count implied by a decoder's colour type: grey (with or without alpha) is one
/// channel, everything else is treated as RGB.
fn channels_of(color: image::ColorType) -> usize {
    if color.has_color() {
        3
    } else {
        1
    }
}

fn probe(path: &Path) -> std::result::Result<usize, String> {
    let reader = ImageReader::open(path)
        .map_err(|e| e.to_string())?
        .with_guessed_format()
        .map_err(|e| e.to_string())?;
    let decoder = reader.into_decoder().map_err(|e| e.to_string())?;
    use image::ImageDecoder;
    Ok(channels_of(decoder.color_type()))
}

/// Walks `root`, labels every image file and checks that each one has a readable header.
///
/// Files without an image extension are ignored; image files that cannot be opened or
/// labelled are reported in [`DatasetManifest::skipped`].
pub fn ingest_directory(root: &Path, rule: &LabelRule) -> Result<DatasetManifest> {
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset root is not a directory"),
        ));
    }
    let labels = match rule {
        LabelRule::Csv(path) => Some(read_label_map(path)?),
        _ => None,
    };

    let mut files = Vec::new();
    for item in WalkDir::new(root).follow_links(true).sort_by_file_name() {
        let item = item.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if item.file_type().is_file() && is_image_path(item.path()) {
            files.push((relative_id(root, item.path()), item.into_path()));
        }
    }
    files.sort();

    let folders: BTreeSet<String> = files
        .iter()
        .filter_map(|(id, _)| id.split_once('/').map(|(top, _)| top.to_string()))
        .collect();
    let folder_index: HashMap<&str, u32> = folders
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_str(), i as u32))
        .collect();

    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (id, path) in files {
        let category = match rule {
            LabelRule::Folders => id
                .split_once('/')
                .map(|(top, _)| folder_index[top])
                .ok_or("file is not inside a category folder"),
            LabelRule::Corel => corel_category(&path).ok_or("file stem is not a numeric Corel id"),
            LabelRule::Csv(_) => labels
                .as_ref()
                .and_then(|m| m.get(&id).copied())
                .ok_or("file is not listed in the label map"),
        };
        let category = match category {
            Ok(c) => c,
            Err(reason) => {
                skipped.push(Skipped {
                    path,
                    reason: reason.into(),
                });
                continue;
            }
        };
        match probe(&path) {
            Ok(channels) => {
                if let Some(first) = entries.first().map(|e: &ManifestEntry| e.channels) {
                    if first != channels {
                        return Err(Error::MixedChannels {
                            first,
                            other: channels,
                            path,
                        });
                    }
                }
                entries.push(ManifestEntry {
                    id,
                    path,
                    category,
                    channels,
                });
            }
            Err(reason) => skipped.push(Skipped { path, reason }),
        }
    }

    if entries.is_empty() {
        return Err(Error::EmptyDataset { root: root.into() });
    }
    let mut category_sizes = BTreeMap::new();
    for e in &entries {
        *category_sizes.entry(e.category).or_insert(0) += 1;
    }
    Ok(DatasetManifest {
        root: root.into(),
        convention: rule.to_string(),
        entries,
        category_sizes,
        skipped,
    })
}

/// Converts a decoded image into 8-bit planar channels (one for grey, three otherwise; alpha dropped).
pub fn to_color_image(img: &DynamicImage) -> Result<ColorImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let image = if channels_of(img.color()) == 1 {
        ColorImage::from_interleaved_u8(w, h, 1, img.to_luma8().as_raw())?
    } else {
        ColorImage::from_interleaved_u8(w, h, 3, img.to_rgb8().as_raw())?
    };
    Ok(image)
}

/// Decodes an image file at native resolution.
pub fn decode_image(path: &Path) -> Result<ColorImage> {
    let img = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|source| match source {
            image::ImageError::IoError(e) => Error::io(path, e),
            source => Error::Decode {
                path: path.into(),
                source,
            },
        })?;
    to_color_image(&img)
}

/// Decodes one manifest entry.
pub fn load_entry(entry: &ManifestEntry) -> Result<LabeledImage> {
    let image = decode_image(&entry.path)?;
    if image.channel_count() != entry.channels {
        return Err(Error::MixedChannels {
            first: entry.channels,
            other: image.channel_count(),
            path: entry.path.clone(),
        });
    }
    Ok(LabeledImage {
        id: entry.id.clone(),
        category: entry.category,
        image,
    })
}

/// Writes an 8-bit image; the format follows the file extension.
pub fn save_image(image: &ColorImage, path: &Path) -> Result<()> {
    let (w, h) = (image.width() as u32, image.height() as u32);
    let samples: Vec<u8> = image
        .to_interleaved_u16()
        .into_iter()
        .map(|v| v.min(255) as u8)
        .collect();
    let dynamic = match image.channel_count() {
        1 => image::GrayImage::from_raw(w, h, samples).map(DynamicImage::ImageLuma8),
        3 => image::RgbImage::from_raw(w, h, samples).map(DynamicImage::ImageRgb8),
        c => return Err(Error::Inconsistent(format!("cannot encode a {c}-channel image"))),
    }
    .expect("sample count matches dimensions");
    dynamic.save(path).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::io(path, e),
        source => Error::Decode {
            path: path.into(),
            source,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corel_rule() {
        assert_eq!(corel_category(Path::new("x/1234.jpg")), Some(12));
        assert_eq!(corel_category(Path::new("0.jpg")), Some(0));
        assert_eq!(corel_category(Path::new("99.jpg")), Some(0));
        assert_eq!(corel_category(Path::new("9999.jpg")), Some(99));
        assert_eq!(corel_category(Path::new("tiger.jpg")), None);
    }

    #[test]
    fn label_rules_parse() {
        assert_eq!("folders".parse::<LabelRule>().unwrap(), LabelRule::Folders);
        assert_eq!("corel".parse::<LabelRule>().unwrap(), LabelRule::Corel);
        assert_eq!(
            "csv:labels.csv".parse::<LabelRule>().unwrap(),
            LabelRule::Csv("labels.csv".into())
        );
        assert!("csv:".parse::<LabelRule>().is_err());
        assert!("tags".parse::<LabelRule>().is_err());
        assert_eq!(LabelRule::Csv("a.csv".into()).to_string(), "csv:a.csv");
    }

    #[test]
    fn relative_ids_use_forward_slashes() {
        let root = Path::new("/data");
        assert_eq!(relative_id(root, Path::new("/data/cat7/x.png")), "cat7/x.png");
    }
}
