//! Runs the desk-scale origin comparison and prints how the Random ensemble
//! distorts partitioner evaluation relative to structured templates.
//!
//! ```text
//! cargo run --release --example distortion_sweep -- [out_dir] [seeds]
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use qpart::harness::{distortion_preset, run_sweep, summarize};
use qpart::Origin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("qpart-distortion"));
    let seeds = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let _ = std::fs::remove_dir_all(&out);

    let cfg = distortion_preset(&out, seeds);
    let results = run_sweep(&cfg)?;
    let summary = summarize(&results, Origin::Generated, &out)?;

    // Mean per-qubit cut of the partitioners (baseline excluded) by origin and k.
    let mut means: BTreeMap<(Origin, usize), (f64, usize)> = BTreeMap::new();
    for r in qpart::harness::read_results(&results)? {
        if r.strategy != "random" {
            if let Some(pq) = r.per_qubit {
                let e = means.entry((r.origin, r.k)).or_default();
                e.0 += pq;
                e.1 += 1;
            }
        }
    }
    println!("origin     k  mean_cut_per_qubit");
    for ((origin, k), (sum, n)) in &means {
        println!("{:<10} {k}  {:.3}", origin.as_str(), sum / *n as f64);
    }
    println!();
    for t in &summary.rankings_by_k {
        let names: Vec<&str> = t.entries.iter().map(|e| e.strategy.as_str()).collect();
        println!("{:<10} k={}  {}", t.origin.as_str(), t.key, names.join(" < "));
    }
    for o in &summary.distortion.origins {
        println!(
            "\n{} vs {}: rho={:?} mwu_p={:.3e} rank_biserial={:.3} iqr={:.3}",
            o.origin, summary.distortion.reference, o.rho_overall, o.mwu.p_value, o.mwu.rank_biserial, o.pooled.iqr
        );
    }
    println!("\nartifacts in {}", out.display());
    Ok(())
}
