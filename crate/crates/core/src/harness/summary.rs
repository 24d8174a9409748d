//! Analysis artifacts from a results CSV.
//!
//! Written files (all CSV):
//!
//! - `rankings_by_k.csv`, `rankings_by_bin.csv`, `rankings_all_k.csv`: one row
//!   per origin group with strategies in rank order.
//! - `rankings_detail.csv`: the same tables in long form with their scores.
//! - `distortion.csv`: per non-reference origin, Spearman agreement with the
//!   reference ranking, Mann-Whitney U on per-qubit cut, pooled IQR and
//!   variance of relative cut.
//! - `distortion_by_k.csv`, `distortion_by_strategy.csv`.
//! - `totals.csv`: cut cost totals and means per (origin, strategy).
//! - `dispersion_grid.csv`: relative-cut spread per (origin, strategy, k).
//! - `scaling_by_k.csv`, `scaling_by_bin.csv`: mean costs against k and size.
//! - `distribution.csv`: per-qubit cut quantiles per (origin, strategy).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use super::record::BenchRecord;
use super::{io_err, HarnessError};
use crate::circuit::Origin;
use crate::stats::{
    dispersion, distortion_report, normalized_costs, quantile_sorted, rank_strategies, DistortionReport, GroupBy,
    NormalizedRow, RankTable, StatsError, DEFAULT_QUBIT_BIN,
};

#[derive(Debug, Clone)]
pub struct Summary {
    pub files: Vec<PathBuf>,
    pub rankings_by_k: Vec<RankTable>,
    pub rankings_by_bin: Vec<RankTable>,
    pub rankings_all_k: Vec<RankTable>,
    pub distortion: DistortionReport,
}

pub fn read_results(path: &Path) -> Result<Vec<BenchRecord>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

struct Sheet {
    rows: Vec<Vec<String>>,
}

impl Sheet {
    fn new(header: &[&str]) -> Self {
        Sheet {
            rows: vec![header.iter().map(|s| s.to_string()).collect()],
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn save(self, dir: &Path, name: &str, files: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
        let path = dir.join(name);
        let mut w = csv::WriterBuilder::new().flexible(true).from_path(&path)?;
        for r in self.rows {
            w.write_record(r)?;
        }
        w.flush().map_err(io_err(&path))?;
        files.push(path);
        Ok(())
    }
}

fn ranking_sheet(tables: &[RankTable], key_column: &str) -> Sheet {
    let width = tables.iter().map(|t| t.entries.len()).max().unwrap_or(0);
    let mut header = vec!["origin_group".to_string(), key_column.to_string()];
    header.extend((1..=width).map(|i| format!("rank_{i}")));
    let mut sheet = Sheet { rows: vec![header] };
    for t in tables {
        let mut row = vec![t.origin.to_string(), t.key.to_string()];
        row.extend(t.entries.iter().map(|e| e.strategy.clone()));
        sheet.push(row);
    }
    sheet
}

/// Rows grouped by a key, in key order.
fn grouped<'a, K: Ord>(rows: &'a [NormalizedRow], key: impl Fn(&NormalizedRow) -> K) -> BTreeMap<K, Vec<&'a NormalizedRow>> {
    let mut m: BTreeMap<K, Vec<&NormalizedRow>> = BTreeMap::new();
    for r in rows {
        m.entry(key(r)).or_default().push(r);
    }
    m
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn finite_rel(rs: &[&NormalizedRow]) -> Vec<f64> {
    rs.iter().filter(|r| !r.degenerate).map(|r| r.rel_to_baseline).collect()
}

/// Computes rankings, the distortion report and the aggregate tables and
/// writes them into `out_dir`.
pub fn summarize(results_csv: &Path, reference: Origin, out_dir: &Path) -> Result<Summary, HarnessError> {
    let records = read_results(results_csv)?;
    if records.is_empty() {
        return Err(StatsError::NoRecords.into());
    }
    let rows = normalized_costs(&records)?;
    let distortion = distortion_report(&rows, reference)?;
    let rankings_by_k = rank_strategies(&rows, GroupBy::K)?;
    let rankings_by_bin = rank_strategies(&rows, GroupBy::QubitBin(DEFAULT_QUBIT_BIN))?;
    let rankings_all_k = rank_strategies(&rows, GroupBy::AllK)?;

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut files = Vec::new();
    ranking_sheet(&rankings_by_k, "k").save(out_dir, "rankings_by_k.csv", &mut files)?;
    ranking_sheet(&rankings_by_bin, "qubit_bin").save(out_dir, "rankings_by_bin.csv", &mut files)?;
    ranking_sheet(&rankings_all_k, "k").save(out_dir, "rankings_all_k.csv", &mut files)?;

    let mut detail = Sheet::new(&[
        "view",
        "origin_group",
        "group",
        "rank",
        "strategy",
        "mean_rel",
        "mean_per_qubit",
        "rows",
        "degenerate_rows",
    ]);
    for (view, tables) in [("k", &rankings_by_k), ("qubit_bin", &rankings_by_bin), ("all_k", &rankings_all_k)] {
        for t in tables.iter() {
            for (i, e) in t.entries.iter().enumerate() {
                detail.push(vec![
                    view.into(),
                    t.origin.to_string(),
                    t.key.to_string(),
                    (i + 1).to_string(),
                    e.strategy.clone(),
                    fmt_opt(e.mean_rel),
                    e.mean_per_qubit.to_string(),
                    e.rows.to_string(),
                    e.degenerate_rows.to_string(),
                ]);
            }
        }
    }
    detail.save(out_dir, "rankings_detail.csv", &mut files)?;

    let mut dist = Sheet::new(&[
        "origin",
        "reference",
        "vs_reference_rho",
        "mwu_u",
        "mwu_p",
        "mwu_method",
        "rank_biserial",
        "iqr",
        "variance",
    ]);
    let mut by_k = Sheet::new(&["origin", "k", "vs_reference_rho"]);
    let mut by_strategy = Sheet::new(&["origin", "strategy", "count", "mean_rel", "iqr", "variance"]);
    for o in &distortion.origins {
        dist.push(vec![
            o.origin.to_string(),
            distortion.reference.to_string(),
            fmt_opt(o.rho_overall),
            o.mwu.u_statistic.to_string(),
            o.mwu.p_value.to_string(),
            format!("{:?}", o.mwu.method),
            o.mwu.rank_biserial.to_string(),
            o.pooled.iqr.to_string(),
            o.pooled.variance.to_string(),
        ]);
        for (k, rho) in &o.rho_by_k {
            by_k.push(vec![o.origin.to_string(), k.to_string(), fmt_opt(*rho)]);
        }
        for s in &o.by_strategy {
            by_strategy.push(vec![
                o.origin.to_string(),
                s.strategy.clone(),
                s.dispersion.count.to_string(),
                s.dispersion.mean.to_string(),
                s.dispersion.iqr.to_string(),
                s.dispersion.variance.to_string(),
            ]);
        }
    }
    dist.save(out_dir, "distortion.csv", &mut files)?;
    by_k.save(out_dir, "distortion_by_k.csv", &mut files)?;
    by_strategy.save(out_dir, "distortion_by_strategy.csv", &mut files)?;

    // Totals include the baseline so its cost level is visible next to the
    // partitioners'.
    let mut totals = Sheet::new(&["origin", "strategy", "rows", "total_cut", "mean_cut", "mean_per_qubit", "mean_rel"]);
    for ((origin, strategy), rs) in grouped(&rows, |r| (r.record.origin, r.record.strategy.clone())) {
        let total: u64 = rs.iter().map(|r| r.record.cut_cost.unwrap_or(0)).sum();
        totals.push(vec![
            origin.to_string(),
            strategy,
            rs.len().to_string(),
            total.to_string(),
            (total as f64 / rs.len() as f64).to_string(),
            fmt_opt(mean(rs.iter().map(|r| r.per_qubit))),
            fmt_opt(mean(finite_rel(&rs).into_iter())),
        ]);
    }
    totals.save(out_dir, "totals.csv", &mut files)?;

    let mut grid = Sheet::new(&["origin", "strategy", "k", "count", "mean_rel", "iqr", "variance"]);
    for ((origin, strategy, k), rs) in grouped(&rows, |r| (r.record.origin, r.record.strategy.clone(), r.record.k)) {
        if let Some(d) = dispersion(&finite_rel(&rs)) {
            grid.push(vec![
                origin.to_string(),
                strategy,
                k.to_string(),
                d.count.to_string(),
                d.mean.to_string(),
                d.iqr.to_string(),
                d.variance.to_string(),
            ]);
        }
    }
    grid.save(out_dir, "dispersion_grid.csv", &mut files)?;

    for (name, column, key) in [
        ("scaling_by_k.csv", "k", GroupBy::K),
        ("scaling_by_bin.csv", "qubit_bin", GroupBy::QubitBin(DEFAULT_QUBIT_BIN)),
    ] {
        let mut sheet = Sheet::new(&["origin", "strategy", column, "rows", "mean_per_qubit", "mean_rel"]);
        let group_value = |r: &NormalizedRow| match key {
            GroupBy::QubitBin(w) => r.record.n_qubits / w * w,
            _ => r.record.k,
        };
        for ((origin, strategy, g), rs) in grouped(&rows, |r| (r.record.origin, r.record.strategy.clone(), group_value(r))) {
            sheet.push(vec![
                origin.to_string(),
                strategy,
                g.to_string(),
                rs.len().to_string(),
                fmt_opt(mean(rs.iter().map(|r| r.per_qubit))),
                fmt_opt(mean(finite_rel(&rs).into_iter())),
            ]);
        }
        sheet.save(out_dir, name, &mut files)?;
    }

    let mut distribution = Sheet::new(&["origin", "strategy", "count", "min", "q1", "median", "q3", "max"]);
    for ((origin, strategy), rs) in grouped(&rows, |r| (r.record.origin, r.record.strategy.clone())) {
        let mut v: Vec<f64> = rs.iter().map(|r| r.per_qubit).collect();
        v.sort_by(f64::total_cmp);
        let mut row = vec![origin.to_string(), strategy, v.len().to_string()];
        row.extend([0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&q| quantile_sorted(&v, q).to_string()));
        distribution.push(row);
    }
    distribution.save(out_dir, "distribution.csv", &mut files)?;

    let origins: BTreeSet<Origin> = rows.iter().map(|r| r.record.origin).collect();
    log::info!("summarized {} rows over {} origins into {}", rows.len(), origins.len(), out_dir.display());
    Ok(Summary {
        files,
        rankings_by_k,
        rankings_by_bin,
        rankings_all_k,
        distortion,
    })
}
