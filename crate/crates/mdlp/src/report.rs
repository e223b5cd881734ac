//! Text and CSV rendering of evaluation reports and query listings.

use std::fmt::Write;

use mdlp_core::{EvalReport, RetrievalResult};

/// `n_r,arp,arr` with one row per depth and six decimals.
pub fn eval_csv(report: &EvalReport) -> String {
    let mut out = String::from("n_r,arp,arr\n");
    for ((depth, p), r) in report.depths.iter().zip(&report.arp).zip(&report.arr) {
        writeln!(out, "{depth},{p:.6},{r:.6}").unwrap();
    }
    out
}

/// `category,size,n_r,arp,arr` rows, category-major.
pub fn category_csv(report: &EvalReport) -> String {
    let mut out = String::from("category,size,n_r,arp,arr\n");
    for cat in &report.categories {
        for ((depth, p), r) in report.depths.iter().zip(&cat.arp).zip(&cat.arr) {
            writeln!(out, "{},{},{depth},{p:.6},{r:.6}", cat.category, cat.size).unwrap();
        }
    }
    out
}

pub fn eval_table(report: &EvalReport) -> String {
    let mut out = String::new();
    let meta = &report.metadata;
    if !meta.dataset.is_empty() {
        writeln!(out, "dataset:    {}", meta.dataset).unwrap();
    }
    if !meta.descriptor.is_empty() {
        writeln!(out, "descriptor: {}", meta.descriptor).unwrap();
    }
    let sizes = match report.uniform_category_size() {
        Some(n) => format!("{n} per category"),
        None => {
            let min = report.categories.iter().map(|c| c.size).min().unwrap_or(0);
            let max = report.categories.iter().map(|c| c.size).max().unwrap_or(0);
            format!("{min}..{max} per category")
        }
    };
    writeln!(
        out,
        "queries:    {} ({} categories, {sizes})",
        report.query_count,
        report.categories.len()
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:>6}  {:>9}  {:>9}", "n_r", "ARP (%)", "ARR (%)").unwrap();
    for ((depth, p), r) in report.depths.iter().zip(&report.arp).zip(&report.arr) {
        writeln!(out, "{depth:>6}  {:>9.3}  {:>9.3}", p * 100.0, r * 100.0).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "ARR at n_r = N_t: {:.3}%", report.headline_arr * 100.0).unwrap();
    out
}

/// `rank,id,category,distance` rows.
pub fn matches_csv(result: &RetrievalResult) -> String {
    let mut out = String::from("rank,id,category,distance\n");
    for m in &result.matches {
        writeln!(out, "{},{},{},{:.6}", m.rank, csv_field(&m.id), m.category, m.distance).unwrap();
    }
    out
}

pub fn matches_table(result: &RetrievalResult) -> String {
    let width = result.matches.iter().map(|m| m.id.len()).max().unwrap_or(2).max(2);
    let mut out = String::new();
    if let Some(q) = &result.query_id {
        writeln!(out, "query: {q}").unwrap();
    }
    writeln!(
        out,
        "{:>4}  {:<width$}  {:>8}  {:>10}",
        "rank", "id", "category", "distance"
    )
    .unwrap();
    for m in &result.matches {
        writeln!(
            out,
            "{:>4}  {:<width$}  {:>8}  {:>10.6}",
            m.rank, m.id, m.category, m.distance
        )
        .unwrap();
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
