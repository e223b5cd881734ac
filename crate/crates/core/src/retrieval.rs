//! d1-distance matching and ranking.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::feature::FeatureVector;

/// `Σ |a_k - b_k| / (1 + a_k + b_k)` over slices of equal length.
pub fn d1(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| (x - y).abs() / (1.0 + (x + y))).sum())
}

/// d1 distance between two feature vectors.
pub fn d1_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    d1(a.values(), b.values())
}

/// One labelled database signature.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub id: String,
    pub category: u32,
    pub feature: FeatureVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    pub id: String,
    pub category: u32,
    pub distance: f64,
    /// 1-based position in the full ordering of the database.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalResult {
    pub query_id: Option<String>,
    pub matches: Vec<Match>,
}

/// Orders candidates by ascending distance, breaking ties by identifier and then position.
pub(crate) fn order_by_distance(distances: &[f64], ids: &[&str]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..distances.len()).collect();
    order.sort_by(|&i, &j| compare_candidates((distances[i], ids[i], i), (distances[j], ids[j], j)));
    order
}

fn compare_candidates(a: (f64, &str, usize), b: (f64, &str, usize)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.cmp(b.1))
        .then_with(|| a.2.cmp(&b.2))
}

fn check_dimension(query: &FeatureVector, entries: &[IndexEntry]) -> Result<()> {
    let first = entries.first().ok_or(Error::EmptyIndex)?;
    if first.feature.len() != query.len() {
        return Err(Error::Dimension {
            expected: first.feature.len(),
            found: query.len(),
        });
    }
    Ok(())
}

/// Ranks every entry against `query` and keeps the first `depth` matches.
pub fn rank_query(query: &FeatureVector, entries: &[IndexEntry], depth: usize) -> Result<RetrievalResult> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    check_dimension(query, entries)?;
    let distances = entries
        .iter()
        .map(|e| d1_distance(query, &e.feature))
        .collect::<Result<Vec<_>>>()?;
    let ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
    let matches = order_by_distance(&distances, &ids)
        .into_iter()
        .take(depth)
        .enumerate()
        .map(|(pos, i)| Match {
            id: entries[i].id.clone(),
            category: entries[i].category,
            distance: distances[i],
            rank: pos + 1,
        })
        .collect();
    Ok(RetrievalResult {
        query_id: None,
        matches,
    })
}
