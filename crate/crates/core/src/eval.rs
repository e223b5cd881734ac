//! Precision, recall and their database-wide averages (ARP / ARR).
//!
//! Every database entry is used once as a query against the whole database,
//! itself included.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::retrieval::{d1, order_by_distance, IndexEntry, RetrievalResult};

fn relevant_within(result: &RetrievalResult, query_category: u32, depth: usize) -> usize {
    result
        .matches
        .iter()
        .filter(|m| m.rank <= depth && m.category == query_category)
        .count()
}

/// Fraction of the top `depth` ranks that share the query's category.
pub fn precision(result: &RetrievalResult, query_category: u32, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    Ok(relevant_within(result, query_category, depth) as f64 / depth as f64)
}

/// Fraction of the `category_size` relevant entries found in the top `depth` ranks.
pub fn recall(result: &RetrievalResult, query_category: u32, depth: usize, category_size: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    if category_size == 0 {
        return Err(Error::Params("category size must be at least 1".into()));
    }
    Ok(relevant_within(result, query_category, depth) as f64 / category_size as f64)
}

/// Dense all-pairs distance table, row `i` holding distances from entry `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Computes all pairwise d1 distances, filling the lower triangle by symmetry.
    pub fn compute(entries: &[IndexEntry]) -> Result<Self> {
        let size = entries.len();
        let mut data = vec![0.0; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let d = d1(entries[i].feature.values(), entries[j].feature.values())?;
                data[i * size + j] = d;
                data[j * size + i] = d;
            }
        }
        Ok(Self { size, data })
    }

    /// Assembles a matrix from precomputed rows, which must form a square table.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::Dimension {
                    expected: size,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { size, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

/// Descriptive labels carried into rendered reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportMetadata {
    pub dataset: String,
    pub descriptor: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryReport {
    pub category: u32,
    /// Number of database entries in the category (`N_t`).
    pub size: usize,
    pub arp: Vec<f64>,
    pub arr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Retrieval depths `n_r`, in the order requested.
    pub depths: Vec<usize>,
    pub arp: Vec<f64>,
    pub arr: Vec<f64>,
    /// Mean recall with each query retrieving exactly its own category size.
    pub headline_arr: f64,
    pub categories: Vec<CategoryReport>,
    pub query_count: usize,
    pub metadata: ReportMetadata,
}

impl EvalReport {
    /// The shared category size when every category has the same number of entries.
    pub fn uniform_category_size(&self) -> Option<usize> {
        let first = self.categories.first()?.size;
        self.categories.iter().all(|c| c.size == first).then_some(first)
    }

    pub fn arr_at(&self, depth: usize) -> Option<f64> {
        self.depths.iter().position(|&d| d == depth).map(|i| self.arr[i])
    }

    pub fn arp_at(&self, depth: usize) -> Option<f64> {
        self.depths.iter().position(|&d| d == depth).map(|i| self.arp[i])
    }
}

/// Runs every entry as a query and averages precision and recall at each depth.
pub fn evaluate(entries: &[IndexEntry], depths: &[usize]) -> Result<EvalReport> {
    if let Some(first) = entries.first() {
        if let Some(bad) = entries.iter().find(|e| e.feature.len() != first.feature.len()) {
            return Err(Error::Dimension {
                expected: first.feature.len(),
                found: bad.feature.len(),
            });
        }
    }
    evaluate_matrix(entries, &DistanceMatrix::compute(entries)?, depths)
}

/// [`evaluate`] over a precomputed distance matrix aligned with `entries`.
pub fn evaluate_matrix(entries: &[IndexEntry], distances: &DistanceMatrix, depths: &[usize]) -> Result<EvalReport> {
    if entries.is_empty() {
        return Err(Error::EmptyIndex);
    }
    if depths.is_empty() {
        return Err(Error::Params("at least one retrieval depth is required".into()));
    }
    if depths.contains(&0) {
        return Err(Error::ZeroDepth);
    }
    if distances.size() != entries.len() {
        return Err(Error::Dimension {
            expected: entries.len(),
            found: distances.size(),
        });
    }

    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for e in entries {
        *sizes.entry(e.category).or_default() += 1;
    }
    let ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
    let n = entries.len();

    let mut arp = vec![0.0; depths.len()];
    let mut arr = vec![0.0; depths.len()];
    let mut headline = 0.0;
    let mut per_category: BTreeMap<u32, (Vec<f64>, Vec<f64>)> = sizes
        .keys()
        .map(|&c| (c, (vec![0.0; depths.len()], vec![0.0; depths.len()])))
        .collect();

    // hits[k] = relevant entries among the first k ranks
    let mut hits = vec![0usize; n + 1];
    for (q, query) in entries.iter().enumerate() {
        let order = order_by_distance(distances.row(q), &ids);
        for (k, &j) in order.iter().enumerate() {
            hits[k + 1] = hits[k] + usize::from(entries[j].category == query.category);
        }
        let size = sizes[&query.category];
        let (cat_p, cat_r) = per_category.get_mut(&query.category).expect("category counted above");
        for (slot, &depth) in depths.iter().enumerate() {
            let found = hits[depth.min(n)] as f64;
            let p = found / depth as f64;
            let r = found / size as f64;
            arp[slot] += p;
            arr[slot] += r;
            cat_p[slot] += p;
            cat_r[slot] += r;
        }
        headline += hits[size] as f64 / size as f64;
    }

    let scale = |v: &mut Vec<f64>, count: usize| v.iter_mut().for_each(|x| *x /= count as f64);
    scale(&mut arp, n);
    scale(&mut arr, n);
    let categories = per_category
        .into_iter()
        .map(|(category, (mut p, mut r))| {
            let size = sizes[&category];
            scale(&mut p, size);
            scale(&mut r, size);
            CategoryReport {
                category,
                size,
                arp: p,
                arr: r,
            }
        })
        .collect();

    Ok(EvalReport {
        depths: depths.to_vec(),
        arp,
        arr,
        headline_arr: headline / n as f64,
        categories,
        query_count: n,
        metadata: ReportMetadata::default(),
    })
}
