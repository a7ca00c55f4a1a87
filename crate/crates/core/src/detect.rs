//! Community-Search and the ESSC extraction loop.
//!
//! Community-Search iterates the Benjamini–Hochberg update `B -> S(B)` from a
//! seed until the set stops changing. ESSC repeatedly seeds the search at the
//! closed neighborhood of the highest-degree vertex not yet covered by a
//! detected community, and stops at the first empty result. Vertices outside
//! every detected community are background.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet};
use crate::significance::{check_alpha, BhWorkspace};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Why a Community-Search run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// One more update leaves the set unchanged.
    FixedPoint,
    /// An update selected no vertex.
    Empty,
    /// An earlier set recurred; the smallest set on the cycle is reported.
    Cycle,
    /// `max_iter` updates ran without settling; the last set is reported.
    IterationCap,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::FixedPoint => "fixed_point",
            Termination::Empty => "empty",
            Termination::Cycle => "cycle",
            Termination::IterationCap => "iteration_cap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_iter: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub community: VertexSet,
    /// Number of BH updates applied.
    pub iterations: usize,
    pub termination: Termination,
    /// Sizes of the seed and of every set produced by an update.
    pub trace: Vec<usize>,
}

/// Runs Community-Search from `seed`.
pub fn community_search(
    g: &MultiGraph,
    seed: &VertexSet,
    alpha: f64,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    check_alpha(alpha)?;
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    if limits.max_iter == 0 {
        return Err(Error::parameter("max_iter must be at least 1"));
    }
    if g.edge_count() == 0 {
        return Err(Error::DegenerateGraph);
    }
    seed.check_bounds(g.n())?;
    let mut ws = BhWorkspace::new(g.n());
    Ok(search(&mut ws, g, seed.clone(), alpha, limits.max_iter))
}

fn set_hash(set: &VertexSet) -> u64 {
    let mut h = DefaultHasher::new();
    set.hash(&mut h);
    h.finish()
}

fn search(
    ws: &mut BhWorkspace,
    g: &MultiGraph,
    seed: VertexSet,
    alpha: f64,
    max_iter: usize,
) -> SearchOutcome {
    let mut trace = vec![seed.len()];
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    seen.entry(set_hash(&seed)).or_default().push(0);
    let mut history = vec![seed];

    for iteration in 1..=max_iter {
        let current = history.last().unwrap();
        let next = ws.select(g, current, alpha);
        trace.push(next.len());

        if next.is_empty() {
            return SearchOutcome {
                community: next,
                iterations: iteration,
                termination: Termination::Empty,
                trace,
            };
        }
        if &next == current {
            return SearchOutcome {
                community: next,
                iterations: iteration,
                termination: Termination::FixedPoint,
                trace,
            };
        }
        let hash = set_hash(&next);
        let revisit = seen
            .get(&hash)
            .and_then(|idx| idx.iter().copied().find(|&i| history[i] == next));
        if let Some(start) = revisit {
            let smallest = history[start..]
                .iter()
                .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
                .unwrap()
                .clone();
            return SearchOutcome {
                community: smallest,
                iterations: iteration,
                termination: Termination::Cycle,
                trace,
            };
        }
        seen.entry(hash).or_default().push(history.len());
        history.push(next);
    }

    SearchOutcome {
        community: history.pop().unwrap(),
        iterations: max_iter,
        termination: Termination::IterationCap,
        trace,
    }
}

/// A seed set anchored at one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub anchor: usize,
    pub set: VertexSet,
}

/// Seed anchored at the smallest-id vertex of maximal degree among
/// `uncovered`, with all of its neighbors in the whole graph. Returns `None`
/// when `uncovered` is empty.
pub fn next_seed(g: &MultiGraph, uncovered: &VertexSet) -> Result<Option<Seed>> {
    uncovered.check_bounds(g.n())?;
    let anchor = uncovered
        .iter()
        .fold(None::<usize>, |best, v| match best {
            Some(b) if g.degree(b) >= g.degree(v) => Some(b),
            _ => Some(v),
        });
    match anchor {
        None => Ok(None),
        Some(anchor) => Ok(Some(Seed {
            anchor,
            set: g.closed_neighborhood(anchor)?,
        })),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStrategy {
    /// Sequential seeding at the highest-degree uncovered vertex.
    #[default]
    MaxDegree,
    /// One search from every vertex's closed neighborhood; unique fixed
    /// points are kept.
    AllNeighborhoods,
}

impl SeedStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            SeedStrategy::MaxDegree => "max_degree",
            SeedStrategy::AllNeighborhoods => "all_neighborhoods",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EsscConfig {
    pub alpha: f64,
    pub seed_strategy: SeedStrategy,
    pub max_iter: usize,
}

impl Default for EsscConfig {
    fn default() -> Self {
        EsscConfig {
            alpha: DEFAULT_ALPHA,
            seed_strategy: SeedStrategy::MaxDegree,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// What the outer loop did with one search result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedAction {
    Added,
    Duplicate,
    /// The search did not reach a non-empty fixed point.
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedRecord {
    pub anchor: usize,
    pub seed_size: usize,
    pub iterations: usize,
    pub termination: Termination,
    pub community_size: usize,
    pub action: SeedAction,
    /// Max-degree strategy only: the anchor was dropped from the uncovered
    /// set because the accepted community covered no new vertex.
    pub anchor_retired: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionResult {
    pub n: usize,
    pub communities: Vec<VertexSet>,
    pub background: VertexSet,
    pub alpha: f64,
    pub seed_strategy: SeedStrategy,
    pub max_iter: usize,
    pub seed_log: Vec<SeedRecord>,
}

impl DetectionResult {
    /// Number of communities each vertex belongs to.
    pub fn membership_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for c in &self.communities {
            for v in c.iter() {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Whether any search ended on a cycle or at the iteration cap.
    pub fn has_unsettled_searches(&self) -> bool {
        self.seed_log.iter().any(|r| {
            matches!(
                r.termination,
                Termination::Cycle | Termination::IterationCap
            )
        })
    }
}

/// Runs ESSC on `g`.
pub fn essc(g: &MultiGraph, config: &EsscConfig) -> Result<DetectionResult> {
    check_alpha(config.alpha)?;
    if config.max_iter == 0 {
        return Err(Error::parameter("max_iter must be at least 1"));
    }
    if g.edge_count() == 0 {
        return Err(Error::DegenerateGraph);
    }
    let (communities, seed_log) = match config.seed_strategy {
        SeedStrategy::MaxDegree => extract_max_degree(g, config),
        SeedStrategy::AllNeighborhoods => extract_all_neighborhoods(g, config),
    };
    let background = background_of(g.n(), &communities)?;
    Ok(DetectionResult {
        n: g.n(),
        communities,
        background,
        alpha: config.alpha,
        seed_strategy: config.seed_strategy,
        max_iter: config.max_iter,
        seed_log,
    })
}

fn extract_max_degree(g: &MultiGraph, config: &EsscConfig) -> (Vec<VertexSet>, Vec<SeedRecord>) {
    let n = g.n();
    let mut ws = BhWorkspace::new(n);
    let mut uncovered = vec![true; n];
    let mut remaining = n;
    let mut communities: Vec<VertexSet> = Vec::new();
    let mut log = Vec::new();

    while remaining > 0 {
        let anchor = (0..n)
            .filter(|&v| uncovered[v])
            .fold(None::<usize>, |best, v| match best {
                Some(b) if g.degree(b) >= g.degree(v) => Some(b),
                _ => Some(v),
            })
            .unwrap();
        let seed = g.closed_neighborhood(anchor).unwrap();
        let seed_size = seed.len();
        let outcome = search(&mut ws, g, seed, config.alpha, config.max_iter);

        let mut record = SeedRecord {
            anchor,
            seed_size,
            iterations: outcome.iterations,
            termination: outcome.termination,
            community_size: outcome.community.len(),
            action: SeedAction::Rejected,
            anchor_retired: false,
        };
        match outcome.termination {
            Termination::FixedPoint => {}
            Termination::Empty => {
                log.push(record);
                break;
            }
            Termination::Cycle | Termination::IterationCap => {
                // Not a community, but not evidence that none remain either.
                uncovered[anchor] = false;
                remaining -= 1;
                record.anchor_retired = true;
                log.push(record);
                continue;
            }
        }

        let community = outcome.community;
        let mut newly_covered = 0;
        for v in community.iter() {
            if uncovered[v] {
                uncovered[v] = false;
                newly_covered += 1;
            }
        }
        remaining -= newly_covered;
        // A community that covers nothing new would reseed at the same
        // anchor forever.
        if newly_covered == 0 && uncovered[anchor] {
            uncovered[anchor] = false;
            remaining -= 1;
            record.anchor_retired = true;
        }
        if communities.contains(&community) {
            record.action = SeedAction::Duplicate;
        } else {
            record.action = SeedAction::Added;
            communities.push(community);
        }
        log.push(record);
    }
    (communities, log)
}

fn extract_all_neighborhoods(
    g: &MultiGraph,
    config: &EsscConfig,
) -> (Vec<VertexSet>, Vec<SeedRecord>) {
    let n = g.n();
    let outcomes: Vec<(usize, usize, SearchOutcome)> = (0..n)
        .into_par_iter()
        .map_init(
            || BhWorkspace::new(n),
            |ws, anchor| {
                let seed = g.closed_neighborhood(anchor).unwrap();
                let seed_size = seed.len();
                (anchor, seed_size, search(ws, g, seed, config.alpha, config.max_iter))
            },
        )
        .collect();

    let mut communities: Vec<VertexSet> = Vec::new();
    let mut index: HashMap<&VertexSet, usize> = HashMap::new();
    let mut log = Vec::with_capacity(n);
    for (anchor, seed_size, outcome) in &outcomes {
        let action = if outcome.termination != Termination::FixedPoint {
            SeedAction::Rejected
        } else if index.contains_key(&outcome.community) {
            SeedAction::Duplicate
        } else {
            index.insert(&outcome.community, communities.len());
            communities.push(outcome.community.clone());
            SeedAction::Added
        };
        log.push(SeedRecord {
            anchor: *anchor,
            seed_size: *seed_size,
            iterations: outcome.iterations,
            termination: outcome.termination,
            community_size: outcome.community.len(),
            action,
            anchor_retired: false,
        });
    }
    (communities, log)
}

/// Vertices of `0..n` that lie in none of `communities`.
pub fn background_of(n: usize, communities: &[VertexSet]) -> Result<VertexSet> {
    let mut covered = vec![false; n];
    for c in communities {
        c.check_bounds(n)?;
        for v in c.iter() {
            covered[v] = true;
        }
    }
    Ok(VertexSet::from_sorted_unchecked(
        (0..n).filter(|&v| !covered[v]).collect(),
    ))
}

/// True when one BH update maps `community` to itself.
pub fn is_fixed_point(g: &MultiGraph, community: &VertexSet, alpha: f64) -> Result<bool> {
    Ok(&crate::significance::bh_select(g, community, alpha)? == community)
}

/// Summary columns for a detection result. Statistics over an empty
/// population are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    /// Number of communities.
    pub community_count: usize,
    pub mean_size: Option<f64>,
    /// Sample standard deviation of community sizes (needs two communities).
    pub size_std_dev: Option<f64>,
    /// Mean number of communities per covered vertex.
    pub mean_membership: Option<f64>,
    /// Mean degree of covered vertices.
    pub mean_degree_community: Option<f64>,
    pub mean_degree_background: Option<f64>,
    pub background_proportion: f64,
}

pub fn summarize(g: &MultiGraph, result: &DetectionResult) -> SummaryStats {
    let sizes: Vec<f64> = result.communities.iter().map(|c| c.len() as f64).collect();
    let k = sizes.len();
    let mean_size = (k > 0).then(|| sizes.iter().sum::<f64>() / k as f64);
    let size_std_dev = match (k, mean_size) {
        (2.., Some(m)) => {
            let ss: f64 = sizes.iter().map(|s| (s - m) * (s - m)).sum();
            Some((ss / (k - 1) as f64).sqrt())
        }
        _ => None,
    };

    let counts = result.membership_counts();
    let covered: Vec<usize> = (0..result.n).filter(|&v| counts[v] > 0).collect();
    let mean_of = |vs: &[usize], f: &dyn Fn(usize) -> f64| {
        (!vs.is_empty()).then(|| vs.iter().map(|&v| f(v)).sum::<f64>() / vs.len() as f64)
    };
    let mean_membership = mean_of(&covered, &|v| counts[v] as f64);
    let mean_degree_community = mean_of(&covered, &|v| g.degree(v) as f64);
    let mean_degree_background = mean_of(result.background.as_slice(), &|v| g.degree(v) as f64);
    let background_proportion = if result.n == 0 {
        0.0
    } else {
        result.background.len() as f64 / result.n as f64
    };

    SummaryStats {
        community_count: k,
        mean_size,
        size_std_dev,
        mean_membership,
        mean_degree_community,
        mean_degree_background,
        background_proportion,
    }
}
