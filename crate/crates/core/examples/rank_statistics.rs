//! The statistics layer on its own: Mann-Whitney U in both regimes, Spearman
//! agreement between two rankings, and dispersion summaries.
//!
//! ```text
//! cargo run --example rank_statistics
//! ```

use qpart::stats::{
    dispersion, mann_whitney_u, mann_whitney_u_with, spearman_rho, Alternative, MwuMethod, MwuOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reference = [0.42, 0.51, 0.47, 0.39, 0.55];
    let compared = [0.61, 0.58, 0.72, 0.49, 0.66, 0.70];

    // Small and tie-free: the exact distribution is used.
    let r = mann_whitney_u(&reference, &compared)?;
    println!("exact:  U={} p={:.4} r={:+.3} ({:?})", r.u_statistic, r.p_value, r.rank_biserial, r.method);

    let greater = mann_whitney_u_with(
        &compared,
        &reference,
        MwuOptions {
            alternative: Alternative::Greater,
            method: None,
        },
    )?;
    println!("one-sided (compared > reference): p={:.4}", greater.p_value);

    let forced = mann_whitney_u_with(
        &reference,
        &compared,
        MwuOptions {
            alternative: Alternative::TwoSided,
            method: Some(MwuMethod::NormalApprox),
        },
    )?;
    println!("normal: U={} p={:.4}", forced.u_statistic, forced.p_value);

    // Ties switch to the normal approximation with tie correction.
    let tied = mann_whitney_u(&[1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 4.0], &[3.0, 4.0, 4.0, 5.0, 5.0, 6.0, 6.0])?;
    println!("tied:   U={} p={:.4} ({:?})", tied.u_statistic, tied.p_value, tied.method);

    // Two rank orders of five strategies by mean relative cut.
    let on_real = [0.61, 0.63, 0.70, 0.74, 1.00];
    let on_random = [0.66, 0.64, 0.80, 0.71, 1.00];
    let s = spearman_rho(&on_real, &on_random)?;
    println!("spearman rho={:.3} over n={}", s.rho, s.n);

    let d = dispersion(&compared).expect("non-empty");
    println!("dispersion: n={} mean={:.3} iqr={:.3} var={:.4}", d.count, d.mean, d.iqr, d.variance);
    Ok(())
}
