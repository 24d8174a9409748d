//! Benchmark statistics: cost normalization, strategy rankings, the
//! Mann-Whitney U test with rank-biserial effect size, Spearman rank
//! agreement, and the per-origin distortion report built from them.
//!
//! Conventions:
//!
//! - p-values are two-sided.
//! - `rank_biserial = 1 - 2·U₁/(n₁n₂)` where U₁ counts pairs in which the
//!   first sample is larger (ties count ½). It is positive when the first
//!   sample tends to be *smaller*. The distortion report passes the
//!   reference origin first.
//! - Rankings order strategies by mean cost relative to the random baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::circuit::Origin;
use crate::harness::record::BenchRecord;

pub const BASELINE_STRATEGY: &str = "random";
pub const DEFAULT_QUBIT_BIN: usize = 15;
/// Largest pooled sample size for which exact MWU p-values are enumerated.
pub const EXACT_MWU_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least two items, got {0}")]
    TooShort(usize),
    #[error("exact p-value needs tie-free samples of at most 60 values in total")]
    ExactUnavailable,
    #[error("ranking has zero variance")]
    ZeroVariance,
    #[error("no records")]
    NoRecords,
    #[error("no successful `{BASELINE_STRATEGY}` baseline row for circuit `{circuit_id}` at k = {k}")]
    MissingBaseline { circuit_id: String, k: usize },
    #[error("group {0} has no strategies to rank")]
    EmptyGroup(String),
    #[error("distortion needs at least two origins, found {0}")]
    TooFewOrigins(usize),
    #[error("reference origin {0} has no records")]
    MissingReference(Origin),
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// A successful record with derived costs filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRow {
    pub record: BenchRecord,
    pub per_qubit: f64,
    pub rel_to_baseline: f64,
    /// Baseline cut was 0: `rel_to_baseline` is 1 (cut 0) or +∞, and the row
    /// is left out of means.
    pub degenerate: bool,
}

/// Derives `per_qubit = cut / n` and `rel_to_baseline = cut / baseline_cut`
/// for every successful row. Failed rows are dropped.
pub fn normalized_costs(records: &[BenchRecord]) -> Result<Vec<NormalizedRow>, StatsError> {
    let mut baseline: BTreeMap<(&str, usize), u64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok() && r.strategy == BASELINE_STRATEGY) {
        baseline.insert((&r.circuit_id, r.k), r.cut_cost.expect("ok rows carry a cut"));
    }
    records
        .iter()
        .filter(|r| r.is_ok())
        .map(|r| {
            let cut = r.cut_cost.expect("ok rows carry a cut");
            let base = *baseline
                .get(&(r.circuit_id.as_str(), r.k))
                .ok_or_else(|| StatsError::MissingBaseline {
                    circuit_id: r.circuit_id.clone(),
                    k: r.k,
                })?;
            let (rel, degenerate) = match (cut, base) {
                (0, 0) => (1.0, true),
                (_, 0) => (f64::INFINITY, true),
                _ => (cut as f64 / base as f64, false),
            };
            let per_qubit = cut as f64 / r.n_qubits as f64;
            let mut record = r.clone();
            record.per_qubit = Some(per_qubit);
            record.rel_to_baseline = Some(rel);
            Ok(NormalizedRow {
                record,
                per_qubit,
                rel_to_baseline: rel,
                degenerate,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Ranks and the two tests
// ---------------------------------------------------------------------------

/// Midranks (1-based, ties share their average rank) and the tie group sizes.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwuMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwuResult {
    /// U of the first sample.
    pub u_statistic: f64,
    pub p_value: f64,
    pub rank_biserial: f64,
    pub method: MwuMethod,
}

/// `counts[u]` = number of ways to interleave `n1` and `n2` distinct values
/// such that the first sample's U equals `u`.
fn u_distribution(n1: usize, n2: usize) -> Vec<u64> {
    // f[i][j] over u, via f(i,j,u) = f(i-1,j,u-j) + f(i,j-1,u): the largest
    // value belongs to sample 1 (beating all j of sample 2) or to sample 2.
    let max_u = n1 * n2;
    let mut table = vec![vec![vec![0u64; max_u + 1]; n2 + 1]; n1 + 1];
    for i in 0..=n1 {
        for j in 0..=n2 {
            if i == 0 || j == 0 {
                table[i][j][0] = 1;
                continue;
            }
            for u in 0..=i * j {
                let from_a = if u >= j { table[i - 1][j][u - j] } else { 0 };
                table[i][j][u] = from_a + table[i][j - 1][u];
            }
        }
    }
    std::mem::take(&mut table[n1][n2])
}

fn check_sample(s: &[f64]) -> Result<(), StatsError> {
    if s.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternative {
    #[default]
    TwoSided,
    /// The first sample tends to be smaller.
    Less,
    /// The first sample tends to be larger.
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MwuOptions {
    pub alternative: Alternative,
    /// `None` picks automatically; forcing `Exact` fails on tied samples.
    pub method: Option<MwuMethod>,
}

/// Largest pooled size for which a forced exact test is attempted; the
/// counting table grows as n1·n2·(n1+n2) and counts must fit in a u64.
const EXACT_MWU_HARD_LIMIT: usize = 60;

fn exact_p(u: f64, n1: usize, n2: usize, alt: Alternative) -> f64 {
    let dist = u_distribution(n1, n2);
    let all: u128 = dist.iter().map(|&c| c as u128).sum();
    let u_int = u.round() as usize;
    let lower: u128 = dist[..=u_int].iter().map(|&c| c as u128).sum();
    let upper: u128 = dist[u_int..].iter().map(|&c| c as u128).sum();
    // One rounding step from the exact rational.
    match alt {
        Alternative::TwoSided => ((2 * lower.min(upper)) as f64 / all as f64).min(1.0),
        Alternative::Less => lower as f64 / all as f64,
        Alternative::Greater => upper as f64 / all as f64,
    }
}

fn normal_p(u: f64, n1: usize, n2: usize, ties: &[usize], alt: Alternative) -> f64 {
    let nn = (n1 * n2) as f64;
    let n = (n1 + n2) as f64;
    let tie_term = if n > 1.0 {
        ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0))
    } else {
        0.0
    };
    let variance = nn / 12.0 * ((n + 1.0) - tie_term);
    if variance <= 0.0 {
        return 1.0;
    }
    let sd = variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let d = u - nn / 2.0;
    match alt {
        Alternative::TwoSided => (2.0 * normal.sf((d.abs() - 0.5).max(0.0) / sd)).min(1.0),
        Alternative::Less => normal.cdf((d + 0.5) / sd),
        Alternative::Greater => normal.sf((d - 0.5) / sd),
    }
}

/// Two-sided Mann-Whitney U test with automatic method choice; see
/// [`mann_whitney_u_with`].
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MwuResult, StatsError> {
    mann_whitney_u_with(a, b, MwuOptions::default())
}

/// Mann-Whitney U test.
///
/// Automatic method choice: exact p-values from the full null distribution
/// of U when the pooled sample has at most [`EXACT_MWU_LIMIT`] values and no
/// ties; otherwise the normal approximation with tie-corrected variance and
/// continuity correction.
pub fn mann_whitney_u_with(a: &[f64], b: &[f64], opts: MwuOptions) -> Result<MwuResult, StatsError> {
    check_sample(a)?;
    check_sample(b)?;
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    let rank_biserial = 1.0 - 2.0 * u / (n1 * n2) as f64;

    let exact_ok = ties.is_empty() && n1 + n2 <= EXACT_MWU_HARD_LIMIT;
    let method = match opts.method {
        Some(MwuMethod::Exact) if !exact_ok => return Err(StatsError::ExactUnavailable),
        Some(m) => m,
        None if exact_ok && n1 + n2 <= EXACT_MWU_LIMIT => MwuMethod::Exact,
        None => MwuMethod::NormalApprox,
    };
    let p_value = match method {
        MwuMethod::Exact => exact_p(u, n1, n2, opts.alternative),
        MwuMethod::NormalApprox => normal_p(u, n1, n2, &ties, opts.alternative),
    };
    Ok(MwuResult {
        u_statistic: u,
        p_value,
        rank_biserial,
        method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpearmanResult {
    pub rho: f64,
    pub n: usize,
}

/// Spearman's ρ as the Pearson correlation of midranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<SpearmanResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort(x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok(SpearmanResult {
        rho: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        n: x.len(),
    })
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub count: usize,
    pub mean: f64,
    pub iqr: f64,
    /// Sample variance (n - 1 denominator); 0 for fewer than two values.
    pub variance: f64,
}

pub fn dispersion(values: &[f64]) -> Option<Dispersion> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let variance = if n > 1 {
        sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Some(Dispersion {
        count: n,
        mean,
        iqr: quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25),
        variance,
    })
}

// ---------------------------------------------------------------------------
// Rankings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    K,
    QubitBin(usize),
    /// One group per origin, pooling every k.
    AllK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKey {
    K(usize),
    /// Lower edge of the size bin.
    QubitBin(usize),
    AllK,
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKey::K(k) => write!(f, "{k}"),
            GroupKey::QubitBin(lo) => write!(f, "{lo}"),
            GroupKey::AllK => f.write_str("all"),
        }
    }
}

fn group_key(r: &BenchRecord, by: GroupBy) -> GroupKey {
    match by {
        GroupBy::K => GroupKey::K(r.k),
        GroupBy::QubitBin(width) => GroupKey::QubitBin(r.n_qubits / width.max(1) * width.max(1)),
        GroupBy::AllK => GroupKey::AllK,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub strategy: String,
    /// Mean over non-degenerate rows; `None` if every row was degenerate.
    pub mean_rel: Option<f64>,
    pub mean_per_qubit: f64,
    pub rows: usize,
    pub degenerate_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub origin: Origin,
    pub key: GroupKey,
    /// Best first.
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn position(&self, strategy: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.strategy == strategy)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Ranks non-baseline strategies within each (origin, k) or (origin, size
/// bin) group: ascending mean `rel_to_baseline`, then mean `per_qubit`, then
/// name. Tables come out ordered by origin, then key.
pub fn rank_strategies(rows: &[NormalizedRow], group_by: GroupBy) -> Result<Vec<RankTable>, StatsError> {
    if rows.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let mut groups: BTreeMap<(Origin, GroupKey), BTreeMap<&str, Vec<&NormalizedRow>>> = BTreeMap::new();
    for row in rows {
        let slot = groups.entry((row.record.origin, group_key(&row.record, group_by))).or_default();
        if row.record.strategy != BASELINE_STRATEGY {
            slot.entry(row.record.strategy.as_str()).or_default().push(row);
        }
    }
    groups
        .into_iter()
        .map(|((origin, key), by_strategy)| {
            if by_strategy.is_empty() {
                return Err(StatsError::EmptyGroup(format!("{origin}/{key}")));
            }
            let mut entries: Vec<RankEntry> = by_strategy
                .into_iter()
                .map(|(strategy, rs)| RankEntry {
                    strategy: strategy.to_string(),
                    mean_rel: mean(rs.iter().filter(|r| !r.degenerate).map(|r| r.rel_to_baseline)),
                    mean_per_qubit: mean(rs.iter().map(|r| r.per_qubit)).expect("non-empty"),
                    rows: rs.len(),
                    degenerate_rows: rs.iter().filter(|r| r.degenerate).count(),
                })
                .collect();
            entries.sort_by(|a, b| {
                let rel = |e: &RankEntry| e.mean_rel.unwrap_or(f64::INFINITY);
                rel(a)
                    .total_cmp(&rel(b))
                    .then(a.mean_per_qubit.total_cmp(&b.mean_per_qubit))
                    .then_with(|| a.strategy.cmp(&b.strategy))
            });
            Ok(RankTable { origin, key, entries })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Distortion
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyDispersion {
    pub strategy: String,
    pub dispersion: Dispersion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OriginDistortion {
    pub origin: Origin,
    /// Agreement of mean rank positions (over the per-k tables) with the
    /// reference; `None` when undefined (fewer than two shared strategies or
    /// a constant ranking).
    pub rho_overall: Option<f64>,
    pub rho_by_k: Vec<(usize, Option<f64>)>,
    /// `mann_whitney_u(reference per-qubit costs, this origin's)`.
    pub mwu: MwuResult,
    /// Dispersion of `rel_to_baseline` over all non-baseline strategies.
    pub pooled: Dispersion,
    pub by_strategy: Vec<StrategyDispersion>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub reference: Origin,
    pub origins: Vec<OriginDistortion>,
}

fn mean_positions(tables: &[&RankTable]) -> BTreeMap<String, f64> {
    let mut acc: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for t in tables {
        for (i, e) in t.entries.iter().enumerate() {
            let slot = acc.entry(e.strategy.clone()).or_default();
            slot.0 += (i + 1) as f64;
            slot.1 += 1;
        }
    }
    acc.into_iter().map(|(s, (sum, n))| (s, sum / n as f64)).collect()
}

fn rho_of(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> Option<f64> {
    let shared: Vec<&String> = a.keys().filter(|s| b.contains_key(*s)).collect();
    let x: Vec<f64> = shared.iter().map(|s| a[*s]).collect();
    let y: Vec<f64> = shared.iter().map(|s| b[*s]).collect();
    spearman_rho(&x, &y).ok().map(|r| r.rho)
}

fn per_strategy_dispersion(rows: &[&NormalizedRow]) -> (Dispersion, Vec<StrategyDispersion>) {
    let mut by: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut pooled = Vec::new();
    for r in rows.iter().filter(|r| !r.degenerate) {
        by.entry(r.record.strategy.as_str()).or_default().push(r.rel_to_baseline);
        pooled.push(r.rel_to_baseline);
    }
    let empty = Dispersion {
        count: 0,
        mean: f64::NAN,
        iqr: f64::NAN,
        variance: f64::NAN,
    };
    (
        dispersion(&pooled).unwrap_or(empty),
        by.into_iter()
            .map(|(s, v)| StrategyDispersion {
                strategy: s.to_string(),
                dispersion: dispersion(&v).expect("non-empty"),
            })
            .collect(),
    )
}

/// Compares every non-reference origin with the reference along ranking
/// agreement, cost distribution and dispersion.
pub fn distortion_report(rows: &[NormalizedRow], reference: Origin) -> Result<DistortionReport, StatsError> {
    if rows.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let origins: BTreeSet<Origin> = rows.iter().map(|r| r.record.origin).collect();
    if origins.len() < 2 {
        return Err(StatsError::TooFewOrigins(origins.len()));
    }
    if !origins.contains(&reference) {
        return Err(StatsError::MissingReference(reference));
    }
    let tables = rank_strategies(rows, GroupBy::K)?;
    let tables_of = |o: Origin| -> Vec<&RankTable> { tables.iter().filter(|t| t.origin == o).collect() };
    let partitioner_rows = |o: Origin| -> Vec<&NormalizedRow> {
        rows.iter()
            .filter(|r| r.record.origin == o && r.record.strategy != BASELINE_STRATEGY)
            .collect()
    };

    let ref_tables = tables_of(reference);
    let ref_positions = mean_positions(&ref_tables);
    let ref_costs: Vec<f64> = partitioner_rows(reference).iter().map(|r| r.per_qubit).collect();

    let mut out = Vec::new();
    for &origin in origins.iter().filter(|&&o| o != reference) {
        let own_tables = tables_of(origin);
        let rho_overall = rho_of(&ref_positions, &mean_positions(&own_tables));
        let rho_by_k = own_tables
            .iter()
            .filter_map(|t| {
                let GroupKey::K(k) = t.key else { return None };
                let rt = ref_tables.iter().find(|r| r.key == t.key)?;
                Some((k, rho_of(&mean_positions(&[*rt]), &mean_positions(&[*t]))))
            })
            .collect();
        let own_rows = partitioner_rows(origin);
        let costs: Vec<f64> = own_rows.iter().map(|r| r.per_qubit).collect();
        let mwu = mann_whitney_u(&ref_costs, &costs)?;
        let (pooled, by_strategy) = per_strategy_dispersion(&own_rows);
        out.push(OriginDistortion {
            origin,
            rho_overall,
            rho_by_k,
            mwu,
            pooled,
            by_strategy,
        });
    }
    Ok(DistortionReport {
        reference,
        origins: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::Status;

    fn rec(circuit: &str, origin: Origin, n: usize, k: usize, strategy: &str, cut: u64) -> BenchRecord {
        BenchRecord {
            circuit_id: circuit.into(),
            origin,
            n_qubits: n,
            n_edges: 0,
            n_multiqubit_gates: 0,
            k,
            strategy: strategy.into(),
            cut_cost: Some(cut),
            per_qubit: None,
            rel_to_baseline: None,
            balanced: Some(true),
            status: Status::Ok,
            seed: 0,
            elapsed_ms: 0.0,
        }
    }

    #[test]
    fn normalization_examples() {
        let rows = normalized_costs(&[
            rec("c", Origin::Real, 24, 2, "random", 60),
            rec("c", Origin::Real, 24, 2, "fm", 30),
            rec("z", Origin::Real, 24, 2, "random", 0),
            rec("z", Origin::Real, 24, 2, "fm", 0),
            rec("z", Origin::Real, 24, 2, "ea", 12),
        ])
        .unwrap();
        assert_eq!(rows[1].rel_to_baseline, 0.5);
        assert_eq!(rows[0].per_qubit, 2.5);
        assert_eq!(rows[4].per_qubit, 0.5);
        assert!(!rows[1].degenerate);
        assert_eq!((rows[3].rel_to_baseline, rows[3].degenerate), (1.0, true));
        assert_eq!((rows[4].rel_to_baseline, rows[4].degenerate), (f64::INFINITY, true));
    }

    #[test]
    fn missing_baseline() {
        let err = normalized_costs(&[rec("c", Origin::Real, 24, 2, "fm", 30)]).unwrap_err();
        assert!(matches!(err, StatsError::MissingBaseline { k: 2, .. }));
    }

    #[test]
    fn failed_rows_are_dropped() {
        let mut failed = rec("c", Origin::Real, 24, 2, "ext", 0);
        failed.status = Status::Failed;
        failed.cut_cost = None;
        let rows = normalized_costs(&[rec("c", Origin::Real, 24, 2, "random", 6), failed]).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn midranks_with_ties() {
        let (r, t) = midranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, vec![2]);
    }

    #[test]
    fn mwu_separated_samples() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        assert_eq!(r.method, MwuMethod::Exact);
        assert!((r.p_value - 0.1).abs() < 1e-12);
        assert_eq!(r.rank_biserial, 1.0);
    }

    #[test]
    fn mwu_identical_samples() {
        let a = [0.3, 1.2, 0.7, 2.2];
        let r = mann_whitney_u(&a, &a).unwrap();
        assert_eq!(r.u_statistic, 8.0);
        assert_eq!(r.rank_biserial, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mwu_errors() {
        assert_eq!(mann_whitney_u(&[], &[1.0]), Err(StatsError::EmptySample));
        assert_eq!(mann_whitney_u(&[f64::NAN], &[1.0]), Err(StatsError::NonFinite));
    }

    /// U by direct pair counting: pairs with a > b, ties counting ½.
    fn pair_count_u(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| if x > y { 1.0 } else if x == y { 0.5 } else { 0.0 }))
            .sum()
    }

    #[test]
    fn mwu_with_ties_matches_pair_counting() {
        let (a, b) = ([1.0, 1.0, 2.0], [1.0, 2.0, 2.0]);
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.method, MwuMethod::NormalApprox);
        assert_eq!(r.u_statistic, pair_count_u(&a, &b));
        assert_eq!(r.u_statistic, 3.0);
        assert!((r.rank_biserial - 1.0 / 3.0).abs() < 1e-12);
        // Tie-corrected variance 9/12·(7 − 48/30) = 4.05; z = 1/√4.05.
        let z = 1.0 / 4.05f64.sqrt();
        let expected = 2.0 * Normal::new(0.0, 1.0).unwrap().sf(z);
        assert!((r.p_value - expected).abs() < 1e-12);
        assert_eq!(
            mann_whitney_u_with(&a, &b, MwuOptions { method: Some(MwuMethod::Exact), ..Default::default() }),
            Err(StatsError::ExactUnavailable)
        );
    }

    #[test]
    fn mwu_symmetry() {
        let mut rng = crate::rng::rng_from_seed(5);
        use rand::Rng as _;
        for _ in 0..300 {
            let n1 = rng.random_range(1..9);
            let n2 = rng.random_range(1..9);
            let a: Vec<f64> = (0..n1).map(|_| rng.random_range(0..12) as f64).collect();
            let b: Vec<f64> = (0..n2).map(|_| rng.random_range(0..12) as f64).collect();
            let ab = mann_whitney_u(&a, &b).unwrap();
            let ba = mann_whitney_u(&b, &a).unwrap();
            assert_eq!(ab.u_statistic + ba.u_statistic, (n1 * n2) as f64);
            assert!((ab.p_value - ba.p_value).abs() < 1e-12);
            assert!((ab.rank_biserial + ba.rank_biserial).abs() < 1e-12);
            assert_eq!(ab.u_statistic, pair_count_u(&a, &b));
            assert!((0.0..=1.0).contains(&ab.p_value));
        }
    }

    /// The normal approximation tracks the exact test to within 0.05 once
    /// both samples have at least two values and the pooled size is at least
    /// six. Below that it does not: a singleton sample is off by more than
    /// 0.1, and 2+2 by 0.088.
    #[test]
    fn exact_and_normal_agree_on_moderate_samples() {
        for n1 in 2..=10 {
            for n2 in 2..=(12 - n1) {
                if n1 + n2 < 6 {
                    continue;
                }
                for u in 0..=n1 * n2 {
                    let e = exact_p(u as f64, n1, n2, Alternative::TwoSided);
                    let a = normal_p(u as f64, n1, n2, &[], Alternative::TwoSided);
                    assert!((e - a).abs() <= 0.05, "n1={n1} n2={n2} u={u}: {e} vs {a}");
                }
            }
        }
        let e = exact_p(0.0, 2, 2, Alternative::TwoSided);
        let a = normal_p(0.0, 2, 2, &[], Alternative::TwoSided);
        assert!((e - a).abs() > 0.05);
    }

    #[test]
    fn one_sided_alternatives() {
        let (a, b) = ([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
        let less = mann_whitney_u_with(&a, &b, MwuOptions { alternative: Alternative::Less, method: None }).unwrap();
        let greater = mann_whitney_u_with(&a, &b, MwuOptions { alternative: Alternative::Greater, method: None }).unwrap();
        assert!((less.p_value - 0.05).abs() < 1e-12);
        assert_eq!(greater.p_value, 1.0);
        let approx = mann_whitney_u_with(
            &a,
            &b,
            MwuOptions { alternative: Alternative::TwoSided, method: Some(MwuMethod::NormalApprox) },
        )
        .unwrap();
        assert_eq!(approx.method, MwuMethod::NormalApprox);
        assert!(approx.p_value > 0.05 && approx.p_value < 0.1);
    }

    #[test]
    fn u_distribution_sums_to_binomial() {
        assert_eq!(u_distribution(3, 3), vec![1, 1, 2, 3, 3, 3, 3, 2, 1, 1]);
        assert_eq!(u_distribution(4, 5).iter().sum::<u64>(), 126);
    }

    #[test]
    fn spearman_fixtures() {
        let id = spearman_rho(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(id.rho, 1.0);
        let rev = spearman_rho(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(rev.rho, -1.0);
        let swap = spearman_rho(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((swap.rho - 0.8).abs() < 1e-12);
        assert_eq!(spearman_rho(&[1.0, 2.0], &[1.0]), Err(StatsError::LengthMismatch(2, 1)));
        assert_eq!(spearman_rho(&[1.0, 1.0], &[1.0, 2.0]), Err(StatsError::ZeroVariance));
        assert_eq!(spearman_rho(&[1.0], &[1.0]), Err(StatsError::TooShort(1)));
    }

    #[test]
    fn quantiles_and_dispersion() {
        let d = dispersion(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(d.mean, 2.5);
        assert_eq!(d.iqr, 1.5);
        assert!((d.variance - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(dispersion(&[2.0]).unwrap().variance, 0.0);
        assert!(dispersion(&[]).is_none());
    }

    fn group(origin: Origin, id: &str, k: usize, base: u64, cuts: &[(&str, u64)]) -> Vec<BenchRecord> {
        let mut v = vec![rec(id, origin, 20, k, "random", base)];
        v.extend(cuts.iter().map(|(s, c)| rec(id, origin, 20, k, s, *c)));
        v
    }

    #[test]
    fn ranking_order() {
        let records = group(Origin::Real, "a", 2, 10, &[("fm", 9), ("greedy", 4)]);
        let tables = rank_strategies(&normalized_costs(&records).unwrap(), GroupBy::K).unwrap();
        assert_eq!(tables.len(), 1);
        let names: Vec<_> = tables[0].entries.iter().map(|e| e.strategy.as_str()).collect();
        assert_eq!(names, ["greedy", "fm"]);

        let single = group(Origin::Real, "a", 2, 10, &[("fm", 9)]);
        let tables = rank_strategies(&normalized_costs(&single).unwrap(), GroupBy::K).unwrap();
        assert_eq!(tables[0].entries.len(), 1);

        let only_base = group(Origin::Real, "a", 2, 10, &[]);
        assert!(matches!(
            rank_strategies(&normalized_costs(&only_base).unwrap(), GroupBy::K),
            Err(StatsError::EmptyGroup(_))
        ));
    }

    #[test]
    fn qubit_bins() {
        let mut records = group(Origin::Real, "a", 2, 10, &[("fm", 9)]);
        for r in &mut records {
            r.n_qubits = 29;
        }
        let tables = rank_strategies(&normalized_costs(&records).unwrap(), GroupBy::QubitBin(15)).unwrap();
        assert_eq!(tables[0].key, GroupKey::QubitBin(15));
    }

    #[test]
    fn distortion_self_agreement_and_reversal() {
        let cuts = [("ea", 2), ("fm", 5), ("greedy", 8)];
        let mut records = group(Origin::Real, "r", 2, 10, &cuts);
        records.extend(group(Origin::Generated, "g", 2, 10, &cuts));
        records.extend(group(Origin::Random, "x", 2, 10, &[("ea", 8), ("fm", 5), ("greedy", 2)]));
        let rows = normalized_costs(&records).unwrap();
        let rep = distortion_report(&rows, Origin::Real).unwrap();
        assert_eq!(rep.origins.len(), 2);
        let gen = rep.origins.iter().find(|o| o.origin == Origin::Generated).unwrap();
        assert_eq!(gen.rho_overall, Some(1.0));
        assert_eq!(gen.mwu.rank_biserial, 0.0);
        assert_eq!(gen.rho_by_k, vec![(2, Some(1.0))]);
        let rnd = rep.origins.iter().find(|o| o.origin == Origin::Random).unwrap();
        assert_eq!(rnd.rho_overall, Some(-1.0));
    }

    #[test]
    fn distortion_errors() {
        let rows = normalized_costs(&group(Origin::Real, "r", 2, 10, &[("fm", 3)])).unwrap();
        assert_eq!(distortion_report(&rows, Origin::Real), Err(StatsError::TooFewOrigins(1)));
        let mut records = group(Origin::Real, "r", 2, 10, &[("fm", 3)]);
        records.extend(group(Origin::Random, "x", 2, 10, &[("fm", 3)]));
        let rows = normalized_costs(&records).unwrap();
        assert_eq!(
            distortion_report(&rows, Origin::Generated),
            Err(StatsError::MissingReference(Origin::Generated))
        );
    }
}
