use essc::detect::{essc, summarize, EsscConfig, SeedStrategy, SummaryStats};
use essc::metrics::jaccard;
use essc::{Error, MultiGraph, Result, VertexSet};
use serde::Serialize;

/// One significance level of an α-sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    #[serde(flatten)]
    pub summary: SummaryStats,
    /// Jaccard score of this level's background against the reference
    /// level's background.
    pub background_jaccard: f64,
    #[serde(skip)]
    pub background: VertexSet,
}

/// Runs ESSC at every level in `alphas` and compares each background with
/// the background found at `reference_alpha`, which must be listed.
pub fn sweep_alpha(
    g: &MultiGraph,
    alphas: &[f64],
    reference_alpha: f64,
    seed_strategy: SeedStrategy,
    max_iter: usize,
) -> Result<Vec<SweepRow>> {
    if alphas.is_empty() {
        return Err(Error::Parameter("at least one alpha is required".into()));
    }
    let reference = alphas
        .iter()
        .position(|&a| a == reference_alpha)
        .ok_or_else(|| Error::Parameter(format!("reference alpha {reference_alpha} is not in the sweep")))?;

    let mut runs: Vec<(SummaryStats, VertexSet)> = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let config = EsscConfig {
            alpha,
            seed_strategy,
            max_iter,
        };
        let result = essc(g, &config)?;
        runs.push((summarize(g, &result), result.background));
    }
    let reference_background = runs[reference].1.clone();
    Ok(alphas
        .iter()
        .zip(runs)
        .map(|(&alpha, (summary, background))| SweepRow {
            alpha,
            summary,
            background_jaccard: jaccard(&background, &reference_background),
            background,
        })
        .collect())
}
