//! Random benchmark graphs with planted ground truth.
//!
//! - Erdős–Rényi and configuration-model graphs with no community structure
//!   (every vertex is background),
//! - a two-block model with one embedded community and a background block,
//! - an LFR-style generator with power-law degrees and community sizes, a
//!   mixing parameter and optional overlap,
//! - an LFR block embedded in an Erdős–Rényi-like background.
//!
//! Every generator draws from a single ChaCha8 stream seeded by the caller,
//! so a spec and a seed determine the graph exactly.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, MultiGraphBuilder, VertexSet};

/// Planted communities (a cover, disjoint when there is no overlap) plus the
/// background vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroundTruth {
    pub communities: Vec<VertexSet>,
    pub background: VertexSet,
}

impl GroundTruth {
    pub fn all_background(n: usize) -> Self {
        GroundTruth {
            communities: Vec::new(),
            background: VertexSet::full(n),
        }
    }

    pub fn membership_counts(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for c in &self.communities {
            for v in c.iter() {
                counts[v] += 1;
            }
        }
        counts
    }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)` with `p = dbar / (n - 1)`.
pub fn gen_erdos_renyi(n: usize, dbar: f64, rng_seed: u64) -> Result<(MultiGraph, GroundTruth)> {
    if !(dbar >= 0.0) {
        return Err(Error::parameter(format!("mean degree {dbar} must be non-negative")));
    }
    let mut builder = MultiGraphBuilder::new(n);
    if n >= 2 {
        let max = (n - 1) as f64;
        if dbar > max {
            return Err(Error::parameter(format!(
                "mean degree {dbar} exceeds n - 1 = {max}"
            )));
        }
        let p = dbar / max;
        let mut rng = rng_from_seed(rng_seed);
        if p > 0.0 {
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        builder.add_edge(u, v);
                    }
                }
            }
        }
    }
    Ok((builder.build(), GroundTruth::all_background(n)))
}

/// Uniform stub matching for a fixed degree sequence. Self-loops and
/// multi-edges are kept, so the realized degrees equal `degrees` exactly.
pub fn gen_configuration(degrees: &[u64], rng_seed: u64) -> Result<MultiGraph> {
    let mut rng = rng_from_seed(rng_seed);
    configuration_with_rng(degrees, &mut rng)
}

pub(crate) fn configuration_with_rng<R: Rng>(degrees: &[u64], rng: &mut R) -> Result<MultiGraph> {
    let total: u64 = degrees.iter().sum();
    if total % 2 == 1 {
        return Err(Error::parameter(format!("degree sum {total} is odd")));
    }
    let mut stubs = stub_list(degrees);
    stubs.shuffle(rng);
    let mut builder = MultiGraphBuilder::new(degrees.len());
    for pair in stubs.chunks_exact(2) {
        builder.add_edge(pair[0], pair[1]);
    }
    Ok(builder.build())
}

fn stub_list(degrees: &[u64]) -> Vec<usize> {
    let total: u64 = degrees.iter().sum();
    let mut stubs = Vec::with_capacity(total as usize);
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, d as usize));
    }
    stubs
}

/// Discrete power law `P(d) ∝ d^(-tau)` on integer ranges within `1..=max`.
struct PowerLaw {
    /// `cumulative[d] = sum_{j=1..=d} j^(-tau)`, `cumulative[0] = 0`.
    cumulative: Vec<f64>,
}

impl PowerLaw {
    fn new(tau: f64, max: u64) -> Self {
        let mut cumulative = Vec::with_capacity(max as usize + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for d in 1..=max {
            acc += (d as f64).powf(-tau);
            cumulative.push(acc);
        }
        PowerLaw { cumulative }
    }

    fn max(&self) -> u64 {
        (self.cumulative.len() - 1) as u64
    }

    /// Mean of the law restricted to `lo..=max`.
    fn mean_from(&self, lo: u64, tau: f64) -> f64 {
        let (num, den) = (lo..=self.max()).fold((0.0, 0.0), |(num, den), d| {
            let w = (d as f64).powf(-tau);
            (num + d as f64 * w, den + w)
        });
        num / den
    }

    /// Inverse-CDF draw restricted to `lo..=max`.
    fn sample<R: Rng>(&self, lo: u64, rng: &mut R) -> u64 {
        let base = self.cumulative[lo as usize - 1];
        let top = *self.cumulative.last().unwrap();
        let target = base + rng.random::<f64>() * (top - base);
        let idx = self.cumulative.partition_point(|&c| c < target);
        (idx as u64).clamp(lo, self.max())
    }
}

/// Degree sequence from a truncated discrete power law with exponent `tau`
/// and mean `dbar`.
///
/// The upper limit is `min(n - 1, floor(10 dbar))`. The lower limit is a real
/// number `x`, realized as a mixture of the laws starting at `floor(x)` and
/// `floor(x) + 1`, chosen so the distribution mean is exactly `dbar`. An odd
/// degree sum is made even by incrementing one vertex.
pub fn sample_powerlaw_degrees(n: usize, tau: f64, dbar: f64, rng_seed: u64) -> Result<Vec<u64>> {
    let mut rng = rng_from_seed(rng_seed);
    powerlaw_degrees_with_rng(n, tau, dbar, &mut rng)
}

pub(crate) fn powerlaw_degrees_with_rng<R: Rng>(
    n: usize,
    tau: f64,
    dbar: f64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    powerlaw_degrees_capped(n, tau, dbar, u64::MAX, rng)
}

/// As [`powerlaw_degrees_with_rng`] with the upper limit further lowered to
/// `cap`.
fn powerlaw_degrees_capped<R: Rng>(
    n: usize,
    tau: f64,
    dbar: f64,
    cap: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if !(tau > 1.0) {
        return Err(Error::parameter(format!("degree exponent {tau} must exceed 1")));
    }
    if !(dbar >= 1.0) {
        return Err(Error::parameter(format!("mean degree {dbar} must be at least 1")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let max = ((n - 1) as u64).min((10.0 * dbar).floor() as u64).min(cap);
    if max == 0 || dbar > max as f64 {
        return Err(Error::parameter(format!(
            "mean degree {dbar} infeasible with maximum degree {max}"
        )));
    }
    let law = PowerLaw::new(tau, max);
    let lowest_mean = law.mean_from(1, tau);
    if dbar < lowest_mean {
        return Err(Error::parameter(format!(
            "mean degree {dbar} below the smallest attainable mean {lowest_mean:.3} for exponent {tau} and maximum {max}"
        )));
    }

    // mean_from is increasing in lo; find lo with mean(lo) <= dbar <= mean(lo + 1).
    let mut lo = 1;
    let mut mean_lo = lowest_mean;
    let mut mix = 0.0;
    while lo < max {
        let mean_next = law.mean_from(lo + 1, tau);
        if dbar <= mean_next {
            mix = (dbar - mean_lo) / (mean_next - mean_lo);
            break;
        }
        lo += 1;
        mean_lo = mean_next;
    }

    let mut degrees: Vec<u64> = (0..n)
        .map(|_| {
            let start = if lo < max && rng.random::<f64>() < mix { lo + 1 } else { lo };
            law.sample(start, rng)
        })
        .collect();

    if degrees.iter().sum::<u64>() % 2 == 1 {
        let below_max: Vec<usize> = (0..n).filter(|&v| degrees[v] < max).collect();
        if let Some(&v) = below_max.as_slice().choose(rng) {
            degrees[v] += 1;
        } else {
            let v = rng.random_range(0..n);
            degrees[v] -= 1;
        }
    }
    Ok(degrees)
}

/// Parameters of the two-block model with a single embedded community.
///
/// Edge probabilities are `theta * kappa` inside the community and `theta`
/// for every other pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingleEmbeddedParams {
    pub n: usize,
    pub pi: f64,
    pub kappa: f64,
    pub theta: f64,
}

impl SingleEmbeddedParams {
    /// Chooses `theta` so the expected mean degree is `dbar`.
    pub fn with_mean_degree(n: usize, pi: f64, kappa: f64, dbar: f64) -> Self {
        SingleEmbeddedParams {
            n,
            pi,
            kappa,
            theta: theta_for_mean_degree(n, pi, kappa, dbar),
        }
    }
}

/// `theta` giving expected mean degree `dbar`:
/// `E[deg] = (n - 1) theta (1 + (kappa - 1) pi^2)`.
pub fn theta_for_mean_degree(n: usize, pi: f64, kappa: f64, dbar: f64) -> f64 {
    dbar / ((n.saturating_sub(1)) as f64 * (1.0 + (kappa - 1.0) * pi * pi))
}

pub fn gen_single_embedded(
    params: &SingleEmbeddedParams,
    rng_seed: u64,
) -> Result<(MultiGraph, GroundTruth)> {
    let SingleEmbeddedParams { n, pi, kappa, theta } = *params;
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::parameter(format!("pi = {pi} must lie in (0, 1)")));
    }
    // kappa = 1 is admitted as the structureless limit.
    if !(kappa >= 1.0) {
        return Err(Error::parameter(format!("kappa = {kappa} must be at least 1")));
    }
    if !(theta > 0.0) || theta * kappa > 1.0 {
        return Err(Error::parameter(format!(
            "edge probabilities theta = {theta}, theta * kappa = {} must lie in (0, 1]",
            theta * kappa
        )));
    }
    let mut rng = rng_from_seed(rng_seed);
    let inside: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < pi).collect();
    let p_in = theta * kappa;
    let mut builder = MultiGraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let p = if inside[u] && inside[v] { p_in } else { theta };
            if rng.random::<f64>() < p {
                builder.add_edge(u, v);
            }
        }
    }
    let community: VertexSet = (0..n).filter(|&v| inside[v]).collect();
    let background: VertexSet = (0..n).filter(|&v| !inside[v]).collect();
    Ok((
        builder.build(),
        GroundTruth {
            communities: vec![community],
            background,
        },
    ))
}

/// LFR-style benchmark parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LfrParams {
    pub n: usize,
    /// Degree exponent.
    pub tau1: f64,
    /// Community-size exponent.
    pub tau2: f64,
    pub dbar: f64,
    /// Fraction of each vertex's edges leaving all of its communities.
    pub mu: f64,
    pub size_min: usize,
    pub size_max: usize,
    /// Fraction of vertices that belong to exactly two communities.
    pub rho: f64,
}

impl LfrParams {
    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::parameter(format!("mu = {} must lie in (0, 1)", self.mu)));
        }
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::parameter(format!("rho = {} must lie in [0, 1)", self.rho)));
        }
        if self.size_min == 0 || self.size_min > self.size_max {
            return Err(Error::parameter(format!(
                "community size range [{}, {}] is invalid",
                self.size_min, self.size_max
            )));
        }
        if !(self.tau2 >= 0.0) {
            return Err(Error::parameter(format!("size exponent {} must be non-negative", self.tau2)));
        }
        Ok(())
    }
}

const REWIRE_PASSES: usize = 100;

pub fn gen_lfr(params: &LfrParams, rng_seed: u64) -> Result<(MultiGraph, GroundTruth)> {
    let mut rng = rng_from_seed(rng_seed);
    let (edges, communities) = lfr_with_rng(params, &mut rng)?;
    let mut builder = MultiGraphBuilder::new(params.n);
    for (u, v) in edges {
        builder.add_edge(u, v);
    }
    Ok((
        builder.build(),
        GroundTruth {
            communities,
            background: VertexSet::new(),
        },
    ))
}

/// Community sizes from a power law on `[size_min, size_max]` whose sum is
/// exactly `slots`.
fn sample_community_sizes<R: Rng>(params: &LfrParams, slots: usize, rng: &mut R) -> Result<Vec<usize>> {
    let (lo, hi) = (params.size_min, params.size_max);
    if slots < lo {
        return Err(Error::Generation(format!(
            "{slots} membership slots cannot fill one community of minimum size {lo}"
        )));
    }
    let law = PowerLaw::new(params.tau2, hi as u64);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < slots {
        let s = law.sample(lo as u64, rng) as usize;
        sizes.push(s);
        total += s;
    }
    // Absorb the overshoot by shrinking communities above the minimum; if
    // that is not enough, drop the last community and grow the others.
    let mut excess = total - slots;
    let shrinkable: usize = sizes.iter().map(|&s| s - lo).sum();
    if excess > shrinkable {
        let dropped = sizes.pop().unwrap();
        let mut deficit = dropped - excess;
        excess = 0;
        let growable: usize = sizes.iter().map(|&s| hi - s).sum();
        if deficit > growable {
            return Err(Error::Generation(format!(
                "community sizes in [{lo}, {hi}] cannot sum to {slots}"
            )));
        }
        while deficit > 0 {
            let i = rng.random_range(0..sizes.len());
            if sizes[i] < hi {
                sizes[i] += 1;
                deficit -= 1;
            }
        }
    }
    while excess > 0 {
        let i = rng.random_range(0..sizes.len());
        if sizes[i] > lo {
            sizes[i] -= 1;
            excess -= 1;
        }
    }
    Ok(sizes)
}

/// Internal stub split of `internal` stubs over `parts` communities.
fn split_even(internal: u64, parts: usize) -> Vec<u64> {
    let parts = parts as u64;
    (0..parts)
        .map(|i| internal / parts + u64::from(i < internal % parts))
        .collect()
}

fn lfr_with_rng<R: Rng>(
    params: &LfrParams,
    rng: &mut R,
) -> Result<(Vec<(usize, usize)>, Vec<VertexSet>)> {
    params.validate()?;
    let n = params.n;
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    // A vertex's internal degree must fit inside the largest community.
    let cap = ((params.size_max - 1) as f64 / (1.0 - params.mu)).floor() as u64;
    let degrees = powerlaw_degrees_capped(n, params.tau1, params.dbar, cap, rng)?;

    let overlapping = (params.rho * n as f64).round() as usize;
    let slots = n + overlapping;
    let sizes = sample_community_sizes(params, slots, rng)?;
    let ncomm = sizes.len();
    if overlapping > 0 && ncomm < 2 {
        return Err(Error::Generation(
            "overlap requires at least two communities".into(),
        ));
    }

    let mut membership_count = vec![1usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &v in &order[..overlapping] {
        membership_count[v] = 2;
    }
    let internal: Vec<u64> = degrees
        .iter()
        .map(|&d| ((1.0 - params.mu) * d as f64).round() as u64)
        .collect();

    // Overlapping vertices first, then by decreasing internal degree, so the
    // largest shares meet communities with the most room.
    order.sort_by(|&a, &b| {
        membership_count[b]
            .cmp(&membership_count[a])
            .then(internal[b].cmp(&internal[a]))
    });

    let mut free = sizes.clone();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomm];
    let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); n];
    // share[v][i] is v's internal stub count in memberships[v][i].
    let mut share: Vec<Vec<u64>> = vec![Vec::new(); n];
    for &v in &order {
        let parts = split_even(internal[v], membership_count[v]);
        for &need in &parts {
            let open: Vec<usize> = (0..ncomm)
                .filter(|&c| free[c] > 0 && !memberships[v].contains(&c))
                .collect();
            if open.is_empty() {
                return Err(Error::Generation(format!(
                    "no community with free slots left for vertex {v}"
                )));
            }
            let fitting: Vec<usize> = open
                .iter()
                .copied()
                .filter(|&c| sizes[c] as u64 > need)
                .collect();
            let c = if fitting.is_empty() {
                *open.iter().max_by_key(|&&c| (sizes[c], std::cmp::Reverse(c))).unwrap()
            } else {
                fitting[rng.random_range(0..fitting.len())]
            };
            free[c] -= 1;
            members[c].push(v);
            memberships[v].push(c);
            share[v].push(need);
        }
    }

    let mut external: Vec<u64> = (0..n).map(|v| degrees[v] - internal[v]).collect();
    // Each community needs an even internal stub count.
    for c in 0..ncomm {
        let total: u64 = members[c]
            .iter()
            .map(|&v| share_in(&memberships, &share, v, c))
            .sum();
        if total % 2 == 1 {
            let donors: Vec<usize> = members[c]
                .iter()
                .copied()
                .filter(|&v| share_in(&memberships, &share, v, c) > 0)
                .collect();
            let v = donors[rng.random_range(0..donors.len())];
            let i = memberships[v].iter().position(|&x| x == c).unwrap();
            share[v][i] -= 1;
            external[v] += 1;
        }
    }

    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    let mut edges = Vec::new();
    for c in 0..ncomm {
        let mut stubs = Vec::new();
        for &v in &members[c] {
            let s = share_in(&memberships, &share, v, c);
            stubs.extend(std::iter::repeat_n(v, s as usize));
        }
        let mut pairs = pair_stubs(&mut stubs, rng, &mut counts);
        rewire(&mut pairs, &mut counts, rng, |_, _| false);
        edges.extend(pairs);
    }

    let shares_community =
        |u: usize, v: usize| memberships[u].iter().any(|c| memberships[v].contains(c));
    let mut stubs = stub_list(&external);
    let mut pairs = pair_stubs(&mut stubs, rng, &mut counts);
    let collisions = rewire(&mut pairs, &mut counts, rng, shares_community);
    if collisions > 0 {
        return Err(Error::Generation(format!(
            "{collisions} external edges still join vertices of a common community after {REWIRE_PASSES} rewiring passes"
        )));
    }
    edges.extend(pairs);

    let communities = members.into_iter().map(VertexSet::from).collect();
    Ok((edges, communities))
}

fn share_in(memberships: &[Vec<usize>], share: &[Vec<u64>], v: usize, c: usize) -> u64 {
    memberships[v]
        .iter()
        .position(|&x| x == c)
        .map(|i| share[v][i])
        .unwrap_or(0)
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn pair_stubs<R: Rng>(
    stubs: &mut [usize],
    rng: &mut R,
    counts: &mut HashMap<(usize, usize), u32>,
) -> Vec<(usize, usize)> {
    stubs.shuffle(rng);
    stubs
        .chunks_exact(2)
        .map(|p| {
            *counts.entry(key(p[0], p[1])).or_default() += 1;
            (p[0], p[1])
        })
        .collect()
}

/// Degree-preserving double-edge swaps that remove self-loops, repeated
/// edges and pairs rejected by `forbidden`. Runs at most `REWIRE_PASSES`
/// passes and returns the number of `forbidden` pairs left; leftover loops
/// and repeats are tolerated.
fn rewire<R: Rng, F: Fn(usize, usize) -> bool>(
    pairs: &mut [(usize, usize)],
    counts: &mut HashMap<(usize, usize), u32>,
    rng: &mut R,
    forbidden: F,
) -> usize {
    if pairs.len() < 2 {
        return pairs.iter().filter(|&&(u, v)| forbidden(u, v)).count();
    }
    let is_bad = |(u, v): (usize, usize), counts: &HashMap<(usize, usize), u32>| {
        u == v || counts[&key(u, v)] > 1 || forbidden(u, v)
    };
    for _ in 0..REWIRE_PASSES {
        let bad: Vec<usize> = (0..pairs.len()).filter(|&i| is_bad(pairs[i], counts)).collect();
        if bad.is_empty() {
            return 0;
        }
        for i in bad {
            if !is_bad(pairs[i], counts) {
                continue;
            }
            let j = rng.random_range(0..pairs.len() - 1);
            let j = if j >= i { j + 1 } else { j };
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            let (e1, e2) = if rng.random::<bool>() {
                ((a, c), (b, d))
            } else {
                ((a, d), (b, c))
            };
            for old in [(a, b), (c, d)] {
                let k = key(old.0, old.1);
                let entry = counts.get_mut(&k).unwrap();
                *entry -= 1;
                if *entry == 0 {
                    counts.remove(&k);
                }
            }
            let acceptable = |(u, v): (usize, usize)| {
                u != v && !counts.contains_key(&key(u, v)) && !forbidden(u, v)
            };
            let (new_i, new_j) = if acceptable(e1) && acceptable(e2) && key(e1.0, e1.1) != key(e2.0, e2.1) {
                (e1, e2)
            } else {
                ((a, b), (c, d))
            };
            for e in [new_i, new_j] {
                *counts.entry(key(e.0, e.1)).or_default() += 1;
            }
            pairs[i] = new_i;
            pairs[j] = new_j;
        }
    }
    pairs.iter().filter(|&&(u, v)| forbidden(u, v)).count()
}

/// LFR communities embedded in a background block.
///
/// Each vertex joins the LFR block with probability `pi`. The block is wired
/// by [`gen_lfr`] with `n` and `dbar` scaled by `pi`, and every pair that
/// involves a background vertex is linked with probability `dbar / n`, so
/// every vertex has expected degree close to `dbar`.
pub fn gen_lfr_background(
    params: &LfrParams,
    pi: f64,
    rng_seed: u64,
) -> Result<(MultiGraph, GroundTruth)> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::parameter(format!("pi = {pi} must lie in (0, 1)")));
    }
    params.validate()?;
    let n = params.n;
    let mut rng = rng_from_seed(rng_seed);
    let in_block: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < pi).collect();
    let block: Vec<usize> = (0..n).filter(|&v| in_block[v]).collect();

    let mut builder = MultiGraphBuilder::new(n);
    let mut communities = Vec::new();
    if !block.is_empty() {
        let inner = LfrParams {
            n: block.len(),
            dbar: params.dbar * pi,
            ..*params
        };
        let (edges, local) = lfr_with_rng(&inner, &mut rng)?;
        for (u, v) in edges {
            builder.add_edge(block[u], block[v]);
        }
        communities = local
            .into_iter()
            .map(|c| c.iter().map(|v| block[v]).collect())
            .collect();
    }

    let p2 = if n == 0 { 0.0 } else { params.dbar / n as f64 };
    for u in 0..n {
        for v in u + 1..n {
            if (!in_block[u] || !in_block[v]) && rng.random::<f64>() < p2 {
                builder.add_edge(u, v);
            }
        }
    }
    let background = (0..n).filter(|&v| !in_block[v]).collect();
    Ok((builder.build(), GroundTruth { communities, background }))
}

/// A benchmark family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BenchmarkSpec {
    ErdosRenyi { n: usize, dbar: f64 },
    /// Configuration model on a power-law degree sequence.
    Configuration { n: usize, tau1: f64, dbar: f64 },
    SingleEmbedded(SingleEmbeddedParams),
    Lfr(LfrParams),
    LfrBackground { lfr: LfrParams, pi: f64 },
}

impl BenchmarkSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BenchmarkSpec::ErdosRenyi { .. } => "er",
            BenchmarkSpec::Configuration { .. } => "config",
            BenchmarkSpec::SingleEmbedded(_) => "sbm-single",
            BenchmarkSpec::Lfr(_) => "lfr",
            BenchmarkSpec::LfrBackground { .. } => "lfr-bg",
        }
    }

    pub fn generate(&self, rng_seed: u64) -> Result<(MultiGraph, GroundTruth)> {
        match *self {
            BenchmarkSpec::ErdosRenyi { n, dbar } => gen_erdos_renyi(n, dbar, rng_seed),
            BenchmarkSpec::Configuration { n, tau1, dbar } => {
                let mut rng = rng_from_seed(rng_seed);
                let degrees = powerlaw_degrees_with_rng(n, tau1, dbar, &mut rng)?;
                let g = configuration_with_rng(&degrees, &mut rng)?;
                Ok((g, GroundTruth::all_background(n)))
            }
            BenchmarkSpec::SingleEmbedded(p) => gen_single_embedded(&p, rng_seed),
            BenchmarkSpec::Lfr(p) => gen_lfr(&p, rng_seed),
            BenchmarkSpec::LfrBackground { lfr, pi } => gen_lfr_background(&lfr, pi, rng_seed),
        }
    }

    /// Parses a flat `key = value` file. `kind` selects the family; `#`
    /// starts a comment line. Returns the spec and the `rng_seed` entry if
    /// one is present.
    pub fn from_key_values(text: &str) -> Result<(BenchmarkSpec, Option<u64>)> {
        let mut map: HashMap<String, String> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected key = value".into(),
            })?;
            let key = k.trim().replace('-', "_");
            let value = v.trim();
            let value = if key == "kind" { value.replace('-', "_") } else { value.to_string() };
            map.insert(key, value);
        }
        let kind = map
            .get("kind")
            .cloned()
            .ok_or_else(|| Error::parameter("missing `kind`"))?;
        let get = |k: &str| -> Result<f64> {
            let raw = map
                .get(k)
                .ok_or_else(|| Error::parameter(format!("missing `{k}` for kind {kind}")))?;
            raw.parse::<f64>()
                .map_err(|_| Error::parameter(format!("`{k}` = `{raw}` is not a number")))
        };
        let get_or = |k: &str, default: f64| -> Result<f64> {
            if map.contains_key(k) {
                get(k)
            } else {
                Ok(default)
            }
        };
        let count = |k: &str| -> Result<usize> {
            let v = get(k)?;
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::parameter(format!("`{k}` must be a non-negative integer")));
            }
            Ok(v as usize)
        };
        let lfr = || -> Result<LfrParams> {
            Ok(LfrParams {
                n: count("n")?,
                tau1: get("tau1")?,
                tau2: get("tau2")?,
                dbar: get("dbar")?,
                mu: get("mu")?,
                size_min: count("smin")?,
                size_max: count("smax")?,
                rho: get_or("rho", 0.0)?,
            })
        };
        let spec = match kind.as_str() {
            "er" => BenchmarkSpec::ErdosRenyi {
                n: count("n")?,
                dbar: get("dbar")?,
            },
            "config" => BenchmarkSpec::Configuration {
                n: count("n")?,
                tau1: get("tau1")?,
                dbar: get("dbar")?,
            },
            "sbm_single" => {
                let (n, pi, kappa) = (count("n")?, get("pi")?, get("kappa")?);
                let theta = if map.contains_key("theta") {
                    get("theta")?
                } else {
                    theta_for_mean_degree(n, pi, kappa, get("dbar")?)
                };
                BenchmarkSpec::SingleEmbedded(SingleEmbeddedParams { n, pi, kappa, theta })
            }
            "lfr" => BenchmarkSpec::Lfr(lfr()?),
            "lfr_bg" => BenchmarkSpec::LfrBackground {
                lfr: lfr()?,
                pi: get("pi")?,
            },
            other => return Err(Error::parameter(format!("unknown benchmark kind `{other}`"))),
        };
        let seed = match map.get("rng_seed") {
            None => None,
            Some(raw) => Some(
                raw.parse::<u64>()
                    .map_err(|_| Error::parameter(format!("rng_seed `{raw}` is not a u64")))?,
            ),
        };
        Ok((spec, seed))
    }
}
