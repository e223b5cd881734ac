//! Parallel feature extraction, querying and evaluation over whole databases.

use std::path::Path;

use mdlp_core::{
    evaluate_matrix, rank_query, DistanceMatrix, EvalReport, FeatureConfig, IndexEntry, LabeledImage, RetrievalResult,
};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::FeatureIndex;
use crate::ingest::{decode_image, load_entry, DatasetManifest};

/// Runs `f` on a pool with `jobs` threads (all cores when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn finish(config: &FeatureConfig, channels: usize, entries: Vec<IndexEntry>) -> Result<FeatureIndex> {
    FeatureIndex::new(config.layout(channels), config.normalize, entries)
}

/// Extracts features of already decoded images, preserving input order.
pub fn index_images(images: &[LabeledImage], config: &FeatureConfig, jobs: Option<usize>) -> Result<FeatureIndex> {
    let channels = images.first().map_or(3, |i| i.image.channel_count());
    let entries = with_jobs(jobs, || {
        images
            .par_iter()
            .map(|img| {
                Ok(IndexEntry {
                    id: img.id.clone(),
                    category: img.category,
                    feature: config.build(&img.image)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    finish(config, channels, entries)
}

/// Decodes and describes every manifest entry, preserving manifest order.
pub fn index_manifest(manifest: &DatasetManifest, config: &FeatureConfig, jobs: Option<usize>) -> Result<FeatureIndex> {
    let entries = with_jobs(jobs, || {
        manifest
            .entries
            .par_iter()
            .map(|entry| {
                let labeled = load_entry(entry)?;
                Ok(IndexEntry {
                    id: labeled.id,
                    category: labeled.category,
                    feature: config.build(&labeled.image)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    finish(config, manifest.channels(), entries)
}

/// Ranks an image file against the index using the index's own descriptor settings
/// unless `config` overrides them.
pub fn query_image(
    index: &FeatureIndex,
    image: &Path,
    config: Option<FeatureConfig>,
    depth: usize,
) -> Result<RetrievalResult> {
    let config = config.unwrap_or(FeatureConfig {
        params: index.layout.params,
        mode: index.layout.mode,
        normalize: index.normalized,
    });
    let feature = config.build(&decode_image(image)?)?.to_f32_precision();
    if feature.len() != index.layout.dimension() {
        return Err(Error::QueryDimension {
            query: feature.len(),
            index: index.layout.dimension(),
        });
    }
    let mut result = rank_query(&feature, &index.entries, depth)?;
    result.query_id = Some(image.display().to_string());
    Ok(result)
}

/// All-pairs d1 matrix, one row per worker task.
pub fn distance_matrix(entries: &[IndexEntry], jobs: Option<usize>) -> Result<DistanceMatrix> {
    if jobs == Some(1) {
        return Ok(DistanceMatrix::compute(entries)?);
    }
    let rows = with_jobs(jobs, || {
        entries
            .par_iter()
            .map(|a| {
                entries
                    .iter()
                    .map(|b| mdlp_core::d1(a.feature.values(), b.feature.values()))
                    .collect::<mdlp_core::Result<Vec<f64>>>()
            })
            .collect::<mdlp_core::Result<Vec<_>>>()
    })??;
    Ok(DistanceMatrix::from_rows(rows)?)
}

/// Uses every entry as a query; see [`mdlp_core::evaluate`].
pub fn evaluate_index(index: &FeatureIndex, depths: &[usize], jobs: Option<usize>) -> Result<EvalReport> {
    if index.entries.is_empty() {
        return Err(mdlp_core::Error::EmptyIndex.into());
    }
    let matrix = distance_matrix(&index.entries, jobs)?;
    let mut report = evaluate_matrix(&index.entries, &matrix, depths)?;
    report.metadata.descriptor = describe(index);
    Ok(report)
}

/// Short descriptor label such as `mdlp nb=8 r=1 normalized`.
pub fn describe(index: &FeatureIndex) -> String {
    format!(
        "{} nb={} r={} {}",
        index.layout.mode,
        index.layout.params.neighbors(),
        index.layout.params.radius(),
        if index.normalized { "normalized" } else { "raw" }
    )
}
