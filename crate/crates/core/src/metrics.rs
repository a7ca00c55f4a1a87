//! Agreement scores between vertex sets, partitions and covers, plus the
//! Monte-Carlo check of the binomial approximation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bench::powerlaw_degrees_with_rng;
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::significance::binomial_pmf_raw;

/// `|a ∩ b| / |a ∪ b|`, with two empty sets scoring 1.
pub fn jaccard(a: &VertexSet, b: &VertexSet) -> f64 {
    let inter = a.intersection_len(b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Best Jaccard score of any predicted set against `truth`; 0 when `pred`
/// is empty.
pub fn best_match_score(pred: &[VertexSet], truth: &VertexSet) -> f64 {
    pred.iter().map(|c| jaccard(c, truth)).fold(0.0, f64::max)
}

fn block_labels(blocks: &[VertexSet], n: usize) -> Result<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        for v in block.iter() {
            if v >= n {
                return Err(Error::domain(format!("vertex {v} outside 0..{n}")));
            }
            if label[v] != usize::MAX {
                return Err(Error::domain(format!("vertex {v} appears in two blocks")));
            }
            label[v] = i;
        }
    }
    if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
        return Err(Error::domain(format!("vertex {v} is in no block")));
    }
    Ok(label)
}

fn entropy_of_counts<'a>(counts: impl IntoIterator<Item = &'a usize>, n: f64) -> f64 {
    counts
        .into_iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `I(p; q) / sqrt(H(p) H(q))` between two
/// partitions of `0..n`.
///
/// Two trivial partitions score 1; if exactly one is trivial the score is 0.
pub fn nmi_partition(p: &[VertexSet], q: &[VertexSet], n: usize) -> Result<f64> {
    let lp = block_labels(p, n)?;
    let lq = block_labels(q, n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for v in 0..n {
        *joint.entry((lp[v], lq[v])).or_default() += 1;
    }
    let sizes_p: Vec<usize> = p.iter().map(VertexSet::len).collect();
    let sizes_q: Vec<usize> = q.iter().map(VertexSet::len).collect();
    let nf = n as f64;
    let hp = entropy_of_counts(&sizes_p, nf);
    let hq = entropy_of_counts(&sizes_q, nf);
    if hp == 0.0 && hq == 0.0 {
        return Ok(1.0);
    }
    if hp == 0.0 || hq == 0.0 {
        return Ok(0.0);
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(i, j), &c)| {
            let c = c as f64;
            c / nf * (nf * c / (sizes_p[i] as f64 * sizes_q[j] as f64)).ln()
        })
        .sum();
    Ok((mi / (hp * hq).sqrt()).clamp(0.0, 1.0))
}

/// A cover of `0..n` with its background set.
#[derive(Clone, Copy, Debug)]
pub struct Cover<'a> {
    pub communities: &'a [VertexSet],
    pub background: &'a VertexSet,
}

impl<'a> Cover<'a> {
    pub fn new(communities: &'a [VertexSet], background: &'a VertexSet) -> Self {
        Cover { communities, background }
    }

    fn sets(&self, n: usize) -> Result<Vec<&'a VertexSet>> {
        let mut sets: Vec<&VertexSet> = self.communities.iter().collect();
        if !self.background.is_empty() {
            sets.push(self.background);
        }
        for s in &sets {
            if let Some(v) = s.iter().find(|&v| v >= n) {
                return Err(Error::domain(format!("vertex {v} outside 0..{n}")));
            }
        }
        Ok(sets)
    }
}

fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

fn binary_entropy(size: usize, n: f64) -> f64 {
    let p = size as f64 / n;
    h(p) + h(1.0 - p)
}

/// Average over `x` of `H(X_k | Y) / H(X_k)` in the overlapping-NMI sense.
///
/// Communities with zero entropy (empty or all of `0..n`) carry no
/// information and are left out; if none remain the term is 1.
fn normalized_conditional_entropy(x: &[&VertexSet], y: &[&VertexSet], n: usize) -> Option<f64> {
    let nf = n as f64;
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (l, set) in y.iter().enumerate() {
        for v in set.iter() {
            membership[v].push(l);
        }
    }
    let entropy_y: Vec<f64> = y.iter().map(|s| binary_entropy(s.len(), nf)).collect();

    let mut total = 0.0;
    let mut informative = 0usize;
    let mut overlap = vec![0usize; y.len()];
    for xk in x {
        let hx = binary_entropy(xk.len(), nf);
        if hx <= 0.0 {
            continue;
        }
        overlap.iter_mut().for_each(|c| *c = 0);
        for v in xk.iter() {
            for &l in &membership[v] {
                overlap[l] += 1;
            }
        }
        let a = xk.len() as f64;
        let mut best = hx;
        for (l, yl) in y.iter().enumerate() {
            let b = yl.len() as f64;
            let both = overlap[l] as f64;
            let p11 = both / nf;
            let p10 = (a - both) / nf;
            let p01 = (b - both) / nf;
            let p00 = (nf - a - b + both) / nf;
            if h(p11) + h(p00) > h(p01) + h(p10) {
                let conditional = h(p11) + h(p10) + h(p01) + h(p00) - entropy_y[l];
                best = best.min(conditional);
            }
        }
        total += best / hx;
        informative += 1;
    }
    (informative > 0).then(|| total / informative as f64)
}

/// Normalized mutual information for covers in the overlapping sense of
/// Lancichinetti, Fortunato and Kertész (2009), with each non-empty
/// background treated as one more community.
///
/// Returns 1 when neither side contains an informative community.
pub fn gnmi_cover(c: Cover<'_>, d: Cover<'_>, n: usize) -> Result<f64> {
    let x = c.sets(n)?;
    let y = d.sets(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let hxy = normalized_conditional_entropy(&x, &y, n);
    let hyx = normalized_conditional_entropy(&y, &x, n);
    let score = match (hxy, hyx) {
        (None, None) => 1.0,
        (a, b) => 1.0 - 0.5 * (a.unwrap_or(1.0) + b.unwrap_or(1.0)),
    };
    Ok(score.clamp(0.0, 1.0))
}

/// Probability mass function on the non-negative integers.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretePMF {
    mass: BTreeMap<u64, f64>,
}

const MASS_TOLERANCE: f64 = 1e-9;

impl DiscretePMF {
    pub fn new(mass: BTreeMap<u64, f64>) -> Result<Self> {
        if let Some((k, p)) = mass.iter().find(|(_, &p)| !(p >= 0.0)) {
            return Err(Error::domain(format!("mass {p} at {k} is negative")));
        }
        let total: f64 = mass.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::domain(format!("masses sum to {total}")));
        }
        Ok(DiscretePMF { mass })
    }

    /// Masses listed for outcomes `0, 1, 2, ...`.
    pub fn from_slice(masses: &[f64]) -> Result<Self> {
        Self::new(masses.iter().enumerate().map(|(i, &p)| (i as u64, p)).collect())
    }

    pub fn point(outcome: u64) -> Self {
        DiscretePMF {
            mass: BTreeMap::from([(outcome, 1.0)]),
        }
    }

    /// Empirical law of a histogram indexed by outcome.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::domain("histogram is empty"));
        }
        let mass = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u64, c as f64 / total as f64))
            .collect();
        Ok(DiscretePMF { mass })
    }

    pub fn binomial(k: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability {p} outside [0, 1]")));
        }
        let mass = (0..=k)
            .map(|x| (x, binomial_pmf_raw(x as f64, k as f64, p, 1.0 - p)))
            .filter(|&(_, m)| m > 0.0)
            .collect();
        Ok(DiscretePMF { mass })
    }

    pub fn get(&self, outcome: u64) -> f64 {
        self.mass.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.mass.iter().map(|(&k, &p)| (k, p))
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, p)| k as f64 * p).sum()
    }
}

/// Half the L1 distance between two mass functions.
pub fn tv_distance(p: &DiscretePMF, q: &DiscretePMF) -> f64 {
    let mut sum = 0.0;
    for (k, pk) in p.iter() {
        sum += (pk - q.get(k)).abs();
    }
    for (k, qk) in q.iter() {
        if !p.mass.contains_key(&k) {
            sum += qk;
        }
    }
    (0.5 * sum).clamp(0.0, 1.0)
}

const ORACLE_CHUNK: u64 = 4096;

/// Empirical law of the number of edges between `u` and `b` in uniform
/// configuration-model multigraphs with degree sequence `degrees`.
///
/// Only `u`'s stubs are matched: each one pairs with a uniformly chosen
/// unmatched stub, which has the same law as matching every stub and then
/// reading off `u`'s edges. A self-loop counts 2 when `u` is in `b`.
/// Samples are drawn in fixed-size chunks on separate ChaCha streams, so the
/// result depends only on the inputs and not on the thread count.
pub fn empirical_boundary_distribution(
    degrees: &[u64],
    u: usize,
    b: &VertexSet,
    samples: u64,
    rng_seed: u64,
) -> Result<DiscretePMF> {
    let n = degrees.len();
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    b.check_bounds(n)?;
    if samples == 0 {
        return Err(Error::parameter("at least one sample is required"));
    }
    let total: u64 = degrees.iter().sum();
    if total % 2 == 1 {
        return Err(Error::parameter(format!("degree sum {total} is odd")));
    }

    let mut owner = Vec::with_capacity(total as usize);
    let mut first_stub = 0;
    for (v, &d) in degrees.iter().enumerate() {
        if v == u {
            first_stub = owner.len();
        }
        owner.extend(std::iter::repeat_n(v, d as usize));
    }
    let k = degrees[u] as usize;
    let mut in_b = vec![false; n];
    for v in b.iter() {
        in_b[v] = true;
    }

    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let histograms: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let draws = ORACLE_CHUNK.min(samples - chunk * ORACLE_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(chunk);
            let mut matcher = PartialMatcher::new(owner.len());
            let mut hist = vec![0u64; k + 1];
            for _ in 0..draws {
                let count = matcher.sample(&owner, first_stub..first_stub + k, u, &in_b, &mut rng);
                hist[count] += 1;
            }
            hist
        })
        .collect();

    let mut hist = vec![0u64; k + 1];
    for h in histograms {
        hist.iter_mut().zip(h).for_each(|(a, b)| *a += b);
    }
    DiscretePMF::from_counts(&hist)
}

/// Outcome of [`binomial_approximation_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximationCheck {
    pub n: usize,
    pub vertex: usize,
    pub degree: u64,
    pub set_size: usize,
    pub block_probability: f64,
    pub samples: u64,
    pub tv_distance: f64,
}

/// Compares the configuration-model law of `d(u:B)` with its binomial
/// approximation on a power-law degree sequence.
///
/// Degrees come from [`sample_powerlaw_degrees`](crate::bench::sample_powerlaw_degrees).
/// `u` is the lowest-id vertex whose degree is closest to `target_degree`,
/// and `B` is a uniformly random set of `round(set_fraction * n)` vertices
/// other than `u`. Returns the total variation distance between the
/// empirical law over `samples` draws and `Bin(d(u), vol(B) / vol(V))`.
pub fn binomial_approximation_check(
    n: usize,
    tau1: f64,
    dbar: f64,
    set_fraction: f64,
    target_degree: u64,
    samples: u64,
    rng_seed: u64,
) -> Result<ApproximationCheck> {
    if !(set_fraction > 0.0 && set_fraction < 1.0) {
        return Err(Error::parameter(format!("set fraction {set_fraction} must lie in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let degrees = powerlaw_degrees_with_rng(n, tau1, dbar, &mut rng)?;
    let vertex = (0..n)
        .min_by_key(|&v| (degrees[v].abs_diff(target_degree), v))
        .ok_or_else(|| Error::parameter("the graph has no vertices"))?;
    let set_size = ((set_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut others: Vec<usize> = (0..n).filter(|&v| v != vertex).collect();
    others.shuffle(&mut rng);
    let b: VertexSet = others[..set_size].iter().copied().collect();

    let volume: u64 = b.iter().map(|v| degrees[v]).sum();
    let total: u64 = degrees.iter().sum();
    let block_probability = volume as f64 / total as f64;
    let empirical = empirical_boundary_distribution(&degrees, vertex, &b, samples, rng.random())?;
    let reference = DiscretePMF::binomial(degrees[vertex], block_probability)?;
    Ok(ApproximationCheck {
        n,
        vertex,
        degree: degrees[vertex],
        set_size,
        block_probability,
        samples,
        tv_distance: tv_distance(&empirical, &reference),
    })
}

/// Pool of unmatched stubs supporting O(1) removal and uniform draws.
struct PartialMatcher {
    pool: Vec<usize>,
    pos: Vec<usize>,
    active: usize,
}

impl PartialMatcher {
    fn new(stubs: usize) -> Self {
        PartialMatcher {
            pool: (0..stubs).collect(),
            pos: (0..stubs).collect(),
            active: stubs,
        }
    }

    fn remove(&mut self, stub: usize) {
        let i = self.pos[stub];
        let last = self.active - 1;
        let moved = self.pool[last];
        self.pool.swap(i, last);
        self.pos[moved] = i;
        self.pos[stub] = last;
        self.active -= 1;
    }

    fn sample<R: Rng>(
        &mut self,
        owner: &[usize],
        own_stubs: std::ops::Range<usize>,
        u: usize,
        in_b: &[bool],
        rng: &mut R,
    ) -> usize {
        self.active = self.pool.len();
        let mut count = 0;
        for s in own_stubs {
            if self.pos[s] >= self.active {
                continue;
            }
            self.remove(s);
            let partner = self.pool[rng.random_range(0..self.active)];
            self.remove(partner);
            let v = owner[partner];
            if v == u {
                if in_b[u] {
                    count += 2;
                }
            } else if in_b[v] {
                count += 1;
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_configuration, sample_powerlaw_degrees};
    use proptest::prelude::*;
    use rand::Rng;

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard(&set(&[1, 2]), &set(&[1, 2])), 1.0);
        assert_eq!(jaccard(&set(&[1, 2]), &set(&[3])), 0.0);
        assert_eq!(jaccard(&set(&[1, 2, 3]), &set(&[2, 3, 4])), 0.5);
        assert_eq!(jaccard(&VertexSet::new(), &VertexSet::new()), 1.0);
    }

    #[test]
    fn best_match_examples() {
        let truth = set(&[3, 4]);
        assert_eq!(best_match_score(&[set(&[3, 4])], &truth), 1.0);
        assert_eq!(best_match_score(&[], &truth), 0.0);
        let score = best_match_score(&[set(&[1, 2]), set(&[3, 4, 5])], &truth);
        assert!((score - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn nmi_partition_examples() {
        let p = [set(&[0, 1]), set(&[2, 3])];
        assert!((nmi_partition(&p, &p, 4).unwrap() - 1.0).abs() < 1e-12);
        let q = [set(&[0, 2]), set(&[1, 3])];
        assert!(nmi_partition(&p, &q, 4).unwrap().abs() < 1e-12);
        let singletons: Vec<VertexSet> = (0..4).map(|v| set(&[v])).collect();
        assert_eq!(nmi_partition(&singletons, &[VertexSet::full(4)], 4).unwrap(), 0.0);
        assert_eq!(nmi_partition(&[VertexSet::full(4)], &[VertexSet::full(4)], 4).unwrap(), 1.0);
    }

    #[test]
    fn nmi_partition_rejects_non_partitions() {
        let p = [set(&[0, 1]), set(&[2, 3])];
        assert!(matches!(nmi_partition(&[set(&[0, 1]), set(&[1, 2, 3])], &p, 4), Err(Error::Domain(_))));
        assert!(nmi_partition(&[set(&[0, 1]), set(&[2])], &p, 4).is_err());
        assert!(nmi_partition(&[set(&[0, 1]), set(&[2, 3, 9])], &p, 4).is_err());
    }

    #[test]
    fn tv_examples() {
        let p = DiscretePMF::from_slice(&[0.5, 0.5]).unwrap();
        let q = DiscretePMF::from_slice(&[0.75, 0.25]).unwrap();
        assert_eq!(tv_distance(&p, &p), 0.0);
        assert!((tv_distance(&p, &q) - 0.25).abs() < 1e-15);
        assert_eq!(tv_distance(&DiscretePMF::point(0), &DiscretePMF::point(1)), 1.0);
        assert!(DiscretePMF::from_slice(&[0.5, 0.6]).is_err());
        assert!(DiscretePMF::from_slice(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn binomial_pmf_sums_to_one() {
        for (k, p) in [(0, 0.3), (10, 0.0), (10, 1.0), (50, 0.37), (2000, 0.01)] {
            let pmf = DiscretePMF::binomial(k, p).unwrap();
            let total: f64 = pmf.iter().map(|(_, m)| m).sum();
            assert!((total - 1.0).abs() < 1e-12, "k={k} p={p}");
            assert!((pmf.mean() - k as f64 * p).abs() < 1e-9);
        }
    }

    /// Overlapping NMI computed directly from membership indicator vectors.
    fn brute_force_cover_nmi(x: &[VertexSet], y: &[VertexSet], n: usize) -> f64 {
        let indicator = |s: &VertexSet| -> Vec<bool> { (0..n).map(|v| s.contains(v)).collect() };
        let xs: Vec<Vec<bool>> = x.iter().map(indicator).collect();
        let ys: Vec<Vec<bool>> = y.iter().map(indicator).collect();
        let plogp = |c: usize| {
            if c == 0 {
                0.0
            } else {
                let p = c as f64 / n as f64;
                -p * p.log2()
            }
        };
        let marginal = |a: &[bool]| {
            let ones = a.iter().filter(|&&b| b).count();
            plogp(ones) + plogp(n - ones)
        };
        let side = |a: &[Vec<bool>], b: &[Vec<bool>]| -> Option<f64> {
            let mut terms = Vec::new();
            for ak in a {
                let ha = marginal(ak);
                if ha == 0.0 {
                    continue;
                }
                let mut best = ha;
                for bl in b {
                    let mut cell = [[0usize; 2]; 2];
                    for v in 0..n {
                        cell[ak[v] as usize][bl[v] as usize] += 1;
                    }
                    if plogp(cell[1][1]) + plogp(cell[0][0]) > plogp(cell[0][1]) + plogp(cell[1][0]) {
                        let joint: f64 = cell.iter().flatten().map(|&c| plogp(c)).sum();
                        best = best.min(joint - marginal(bl));
                    }
                }
                terms.push(best / ha);
            }
            (!terms.is_empty()).then(|| terms.iter().sum::<f64>() / terms.len() as f64)
        };
        match (side(&xs, &ys), side(&ys, &xs)) {
            (None, None) => 1.0,
            (a, b) => 1.0 - 0.5 * (a.unwrap_or(1.0) + b.unwrap_or(1.0)),
        }
    }

    #[test]
    fn gnmi_examples() {
        let comms = vec![set(&[0, 1, 2]), set(&[3, 4, 5, 6])];
        let bg = set(&[7, 8, 9]);
        let c = Cover::new(&comms, &bg);
        assert!((gnmi_cover(c, c, 10).unwrap() - 1.0).abs() < 1e-12);

        let whole = vec![VertexSet::full(20)];
        let singletons: Vec<VertexSet> = (0..20).map(|v| set(&[v])).collect();
        let empty = VertexSet::new();
        let score = gnmi_cover(Cover::new(&whole, &empty), Cover::new(&singletons, &empty), 20).unwrap();
        let oracle = brute_force_cover_nmi(&whole, &singletons, 20);
        assert!(score.abs() < 1e-12, "score {score}");
        assert!((score - oracle).abs() < 1e-9);

        let outside = vec![set(&[0, 25])];
        assert!(matches!(
            gnmi_cover(Cover::new(&outside, &empty), c, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gnmi_background_counts_as_a_community() {
        let comms = vec![set(&[0, 1, 2, 3, 4])];
        let bg = set(&[5, 6, 7, 8, 9]);
        let no_bg = VertexSet::new();
        let with = gnmi_cover(Cover::new(&comms, &bg), Cover::new(&comms, &bg), 10).unwrap();
        let without = gnmi_cover(Cover::new(&comms, &bg), Cover::new(&comms, &no_bg), 10).unwrap();
        assert!((with - 1.0).abs() < 1e-12);
        assert!(without < 1.0);
    }

    fn random_partition(labels: &[usize]) -> Vec<VertexSet> {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        (0..blocks)
            .map(|b| (0..labels.len()).filter(|&v| labels[v] == b).collect::<VertexSet>())
            .filter(|s| !s.is_empty())
            .collect()
    }

    proptest! {
        #[test]
        fn gnmi_matches_brute_force_on_partitions(
            a in prop::collection::vec(0usize..5, 1..=30),
            seed in any::<u64>(),
        ) {
            let n = a.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let (p, q) = (random_partition(&a), random_partition(&b));
            let empty = VertexSet::new();
            let fast = gnmi_cover(Cover::new(&p, &empty), Cover::new(&q, &empty), n).unwrap();
            let slow = brute_force_cover_nmi(&p, &q, n);
            prop_assert!((fast - slow).abs() < 1e-9, "{} vs {}", fast, slow);
            let swapped = gnmi_cover(Cover::new(&q, &empty), Cover::new(&p, &empty), n).unwrap();
            prop_assert!((fast - swapped).abs() < 1e-12);
        }

        #[test]
        fn gnmi_matches_brute_force_on_covers(
            n in 2usize..=30,
            raw in prop::collection::vec(prop::collection::vec(any::<bool>(), 30), 1..5),
            raw2 in prop::collection::vec(prop::collection::vec(any::<bool>(), 30), 1..5),
        ) {
            let to_sets = |raw: &[Vec<bool>]| -> Vec<VertexSet> {
                raw.iter().map(|bits| (0..n).filter(|&v| bits[v]).collect()).collect()
            };
            let (x, y) = (to_sets(&raw), to_sets(&raw2));
            let empty = VertexSet::new();
            let fast = gnmi_cover(Cover::new(&x, &empty), Cover::new(&y, &empty), n).unwrap();
            prop_assert!((fast - brute_force_cover_nmi(&x, &y, n)).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&fast));
        }

        #[test]
        fn nmi_partition_symmetric_and_label_invariant(
            a in prop::collection::vec(0usize..4, 1..=40),
            seed in any::<u64>(),
        ) {
            let n = a.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let (p, q) = (random_partition(&a), random_partition(&b));
            let pq = nmi_partition(&p, &q, n).unwrap();
            prop_assert!((pq - nmi_partition(&q, &p, n).unwrap()).abs() < 1e-12);
            let mut relabeled = p.clone();
            relabeled.reverse();
            prop_assert!((pq - nmi_partition(&relabeled, &q, n).unwrap()).abs() < 1e-12);
            prop_assert!((nmi_partition(&p, &p, n).unwrap() - 1.0).abs() < 1e-12);
            if p != q && pq > 1.0 - 1e-12 {
                // Identical up to block order is the only way to reach 1.
                let mut sp = p.clone();
                let mut sq = q.clone();
                sp.sort();
                sq.sort();
                prop_assert_eq!(sp, sq);
            }
        }

        #[test]
        fn jaccard_symmetric_and_one_iff_equal(
            a in prop::collection::btree_set(0usize..20, 0..10),
            b in prop::collection::btree_set(0usize..20, 0..10),
        ) {
            let (a, b): (VertexSet, VertexSet) = (a.into_iter().collect(), b.into_iter().collect());
            let j = jaccard(&a, &b);
            prop_assert_eq!(j, jaccard(&b, &a));
            prop_assert_eq!(j == 1.0, a == b);
        }

        #[test]
        fn tv_is_a_metric(
            w in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 6), 3),
        ) {
            let pmfs: Vec<DiscretePMF> = w
                .iter()
                .map(|row| {
                    let total: f64 = row.iter().sum::<f64>() + 1e-3;
                    let mut masses: Vec<f64> = row.iter().map(|x| x / total).collect();
                    masses.push(1e-3 / total);
                    DiscretePMF::from_slice(&masses).unwrap()
                })
                .collect();
            let (p, q, r) = (&pmfs[0], &pmfs[1], &pmfs[2]);
            prop_assert_eq!(tv_distance(p, p), 0.0);
            prop_assert!((tv_distance(p, q) - tv_distance(q, p)).abs() < 1e-15);
            prop_assert!(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12);
        }
    }

    #[test]
    fn oracle_forced_edge() {
        let pmf = empirical_boundary_distribution(&[1, 1], 0, &set(&[1]), 1000, 3).unwrap();
        assert_eq!(pmf, DiscretePMF::point(1));
    }

    #[test]
    fn oracle_four_stubs() {
        let samples = 100_000u64;
        let pmf = empirical_boundary_distribution(&[1, 1, 1, 1], 0, &set(&[1]), samples, 17).unwrap();
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / samples as f64).sqrt();
        assert!((pmf.get(1) - 1.0 / 3.0).abs() <= 3.0 * sigma, "{pmf:?}");
        assert!((pmf.get(0) - 2.0 / 3.0).abs() <= 3.0 * sigma);
    }

    #[test]
    fn oracle_rejects_bad_input() {
        assert!(empirical_boundary_distribution(&[1, 2], 0, &set(&[1]), 10, 0).is_err());
        assert!(empirical_boundary_distribution(&[1, 1], 0, &set(&[1]), 0, 0).is_err());
        assert!(empirical_boundary_distribution(&[1, 1], 2, &set(&[1]), 10, 0).is_err());
        assert!(empirical_boundary_distribution(&[1, 1], 0, &set(&[5]), 10, 0).is_err());
    }

    #[test]
    fn oracle_is_deterministic() {
        let degrees = [3, 2, 2, 1, 4, 2];
        let a = empirical_boundary_distribution(&degrees, 0, &set(&[1, 4]), 10_000, 9).unwrap();
        let b = empirical_boundary_distribution(&degrees, 0, &set(&[1, 4]), 10_000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_matches_full_configuration_sampling() {
        // Self-loops included: u sits inside b.
        let degrees = [3, 2, 2, 1, 4, 2];
        let b = set(&[0, 1, 4]);
        let samples = 20_000u64;
        let fast = empirical_boundary_distribution(&degrees, 0, &b, samples, 1).unwrap();
        let mut hist = vec![0u64; 4];
        for seed in 0..samples {
            let g = gen_configuration(&degrees, seed).unwrap();
            hist[g.boundary_count(0, &b).unwrap() as usize] += 1;
        }
        let slow = DiscretePMF::from_counts(&hist).unwrap();
        assert!(tv_distance(&fast, &slow) < 0.02, "{fast:?} vs {slow:?}");
    }

    #[test]
    fn approximation_check_is_reproducible() {
        let a = binomial_approximation_check(200, 2.0, 10.0, 0.1, 10, 5000, 3).unwrap();
        let b = binomial_approximation_check(200, 2.0, 10.0, 0.1, 10, 5000, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.set_size, 20);
        assert!(a.tv_distance < 0.2);
        assert!(binomial_approximation_check(200, 2.0, 10.0, 1.5, 10, 10, 3).is_err());
    }

    #[test]
    fn oracle_close_to_binomial_for_power_law_degrees() {
        let n = 1000;
        let degrees = sample_powerlaw_degrees(n, 2.0, 20.0, 2).unwrap();
        let u = (0..n).find(|&v| degrees[v] == 10).expect("a vertex of degree 10");
        let b: VertexSet = (0..n).filter(|&v| v != u).take(100).collect();
        let pmf = empirical_boundary_distribution(&degrees, u, &b, 100_000, 4).unwrap();
        let vol: u64 = b.iter().map(|v| degrees[v]).sum();
        let total: u64 = degrees.iter().sum();
        let reference = DiscretePMF::binomial(10, vol as f64 / total as f64).unwrap();
        let tv = tv_distance(&pmf, &reference);
        assert!(tv <= 0.05, "tv {tv}");
    }
}
