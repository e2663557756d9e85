use rayon::prelude::*;

use super::{run_counterexample, CounterexampleParams, SweepRow};
use crate::tolerance::Tolerances;
use crate::circles::Convention;

/// Runs the pipeline on the grid `a × h × t` in parallel. Rows come back in
/// grid order (a outermost) and invalid points produce an error row instead
/// of aborting the sweep.
pub fn sweep(a: &[f64], h: &[f64], t: &[f64], tol: Tolerances, convention: Convention) -> Vec<SweepRow> {
    let grid: Vec<(f64, f64, f64)> = a
        .iter()
        .flat_map(|&a| h.iter().flat_map(move |&h| t.iter().map(move |&t| (a, h, t))))
        .collect();
    grid.into_par_iter()
        .map(|(a, h, t)| {
            let params = CounterexampleParams { a, h, t, tol, convention };
            match run_counterexample(&params) {
                Ok(report) => SweepRow {
                    a,
                    h,
                    t,
                    verdict: Some(report.verdict),
                    failed_stage: report.failed_stage.clone(),
                    max_inversive_deviation: report.packing.value().map(|p| p.max_inversive_deviation),
                    diagonal_gram_min_deviation: report.gram.value().map(|g| g.diagonal_min_deviation),
                    mobius_deviation: report.mobius.value().map(|m| m.result.deviation()),
                    error: None,
                },
                Err(e) => SweepRow {
                    a,
                    h,
                    t,
                    verdict: None,
                    failed_stage: None,
                    max_inversive_deviation: None,
                    diagonal_gram_min_deviation: None,
                    mobius_deviation: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
