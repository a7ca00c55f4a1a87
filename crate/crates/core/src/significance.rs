//! Configuration-model significance of vertex-to-set connections.
//!
//! Under the configuration model the number of edges between a vertex `u` of
//! degree `k` and a set `B` is approximately `Binomial(k, p(B))`, where
//! `p(B)` is the fraction of all edge stubs attached to `B`. The p-value of an
//! observed boundary count is the upper binomial tail at that count, and the
//! Benjamini–Hochberg step turns the `n` p-values into a selected vertex set.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexSet};

/// Fraction of edge stubs attached to `b`: `volume(b) / (2 |E|)`.
pub fn block_probability(g: &MultiGraph, b: &VertexSet) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::DegenerateGraph);
    }
    let vol = g.volume(b)?;
    Ok(vol as f64 / (2 * g.edge_count()) as f64)
}

/// `P(Bin(k, p) >= x)`.
///
/// Degrees up to 64 sum the shorter tail of the pmf directly with
/// compensated summation. Larger degrees evaluate the regularized incomplete
/// beta function `I_p(x, k - x + 1)` by continued fraction, with the
/// prefactor taken from a saddle-point binomial pmf so that neither path
/// forms `p^x` or `k!` explicitly.
pub fn binomial_survival(k: u64, p: f64, x: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(survival_unchecked(k, p, x))
}

pub(crate) fn survival_unchecked(k: u64, p: f64, x: u64) -> f64 {
    if x == 0 {
        return 1.0;
    }
    if x > k || p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    let value = if k <= DIRECT_SUM_MAX_TRIALS {
        survival_by_summation(k, p, x)
    } else {
        survival_by_incomplete_beta(k, p, x)
    };
    value.clamp(0.0, 1.0)
}

const DIRECT_SUM_MAX_TRIALS: u64 = 64;

fn survival_by_summation(k: u64, p: f64, x: u64) -> f64 {
    let q = 1.0 - p;
    let kf = k as f64;
    let mut sum = NeumaierSum::default();
    if x as f64 > kf * p {
        for i in x..=k {
            sum.add(binomial_pmf_raw(i as f64, kf, p, q));
        }
        sum.value()
    } else {
        for i in 0..x {
            sum.add(binomial_pmf_raw(i as f64, kf, p, q));
        }
        1.0 - sum.value()
    }
}

fn survival_by_incomplete_beta(k: u64, p: f64, x: u64) -> f64 {
    let q = 1.0 - p;
    let kf = k as f64;
    let a = x as f64;
    let b = (k - x + 1) as f64;
    if p < (a + 1.0) / (a + b + 2.0) {
        // I_p(a, b) = C(k, x) p^x q^(k-x+1) / cf
        let front = binomial_pmf_raw(a, kf, p, q) * q;
        front * incomplete_beta_cf(a, b, p)
    } else {
        // 1 - I_q(b, a), where I_q(b, a) = P(X <= x - 1).
        let front = binomial_pmf_raw(a - 1.0, kf, p, q) * p;
        1.0 - front * incomplete_beta_cf(b, a, q)
    }
}

/// Continued fraction part of the regularized incomplete beta function,
/// evaluated by the modified Lentz method.
fn incomplete_beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const MAX_ITER: usize = 1_000_000;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h
}

/// `ln(n!) - ((n + 1/2) ln n - n + ln sqrt(2 pi))` for n = 1..=15.
const STIRLING_ERROR: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258_22,
    0.041_340_695_955_409_294_09,
    0.027_677_925_684_998_339_15,
    0.020_790_672_103_765_093_11,
    0.016_644_691_189_821_192_16,
    0.013_876_128_823_070_747_99,
    0.011_896_709_945_891_770_10,
    0.010_411_265_261_972_096_50,
    0.009_255_462_182_712_732_918,
    0.008_330_563_433_362_871_256,
    0.007_573_675_487_951_840_795,
    0.006_942_840_107_209_529_866,
    0.006_408_994_188_004_207_068,
    0.005_951_370_112_758_847_736,
    0.005_554_733_551_962_801_371,
];

fn stirling_error(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLING_ERROR[n as usize];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, accurate when `x` is close to `np`.
fn deviance(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Binomial pmf at integer `x` for `n` trials, `q = 1 - p`, computed from
/// Stirling corrections and deviances so that it keeps full relative
/// precision for large `n`.
pub(crate) fn binomial_pmf_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 1.0;
        }
        let lc = if p < 0.1 {
            -deviance(n, n * q) - n * p
        } else {
            n * q.ln()
        };
        return lc.exp();
    }
    if x == n {
        let lc = if q < 0.1 {
            -deviance(n, n * p) - n * q
        } else {
            n * p.ln()
        };
        return lc.exp();
    }
    if x < 0.0 || x > n {
        return 0.0;
    }
    let lc = stirling_error(n)
        - stirling_error(x)
        - stirling_error(n - x)
        - deviance(x, n * p)
        - deviance(n - x, n * q);
    let lf = std::f64::consts::TAU.ln() + x.ln() + (-x / n).ln_1p();
    (lc - 0.5 * lf).exp()
}

#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// p-value of the connection between `u` and `b`: the binomial tail
/// `P(Bin(deg(u), p(b)) >= boundary_count(u, b))`. Isolated vertices get 1.
pub fn connection_pvalue(g: &MultiGraph, u: usize, b: &VertexSet) -> Result<f64> {
    let p_b = block_probability(g, b)?;
    let observed = g.boundary_count(u, b)?;
    Ok(survival_unchecked(g.degree(u), p_b, observed))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PValueEntry {
    pub vertex: usize,
    pub boundary_count: u64,
    pub pvalue: f64,
}

/// Per-vertex boundary counts and p-values with respect to one set.
#[derive(Clone, Debug, PartialEq)]
pub struct PValueTable {
    pub entries: Vec<PValueEntry>,
    pub block_probability: f64,
}

impl PValueTable {
    pub fn compute(g: &MultiGraph, b: &VertexSet) -> Result<Self> {
        let p_b = block_probability(g, b)?;
        let mut counts = vec![0u64; g.n()];
        accumulate_boundary_counts(g, b, &mut counts, &mut Vec::new());
        let entries = counts
            .iter()
            .enumerate()
            .map(|(v, &c)| PValueEntry {
                vertex: v,
                boundary_count: c,
                pvalue: survival_unchecked(g.degree(v), p_b, c),
            })
            .collect();
        Ok(PValueTable {
            entries,
            block_probability: p_b,
        })
    }

    pub fn pvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.pvalue).collect()
    }
}

/// Adds `d(v : b)` into `counts[v]` for every `v`, recording in `touched`
/// each vertex whose count became non-zero.
fn accumulate_boundary_counts(
    g: &MultiGraph,
    b: &VertexSet,
    counts: &mut [u64],
    touched: &mut Vec<usize>,
) {
    for w in b.iter() {
        let (nbrs, mults) = g.row(w);
        for (&v, &m) in nbrs.iter().zip(mults) {
            if counts[v] == 0 {
                touched.push(v);
            }
            counts[v] += if v == w { 2 * m } else { m };
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha {alpha} outside (0, 1)")))
    }
}

/// Benjamini–Hochberg cut-off: the largest `k` with `p_(k) <= (k / n) alpha`,
/// where `sorted` holds ascending p-values and `n` is the total number of
/// hypotheses (which may exceed `sorted.len()` when the omitted p-values are
/// known to be 1).
fn bh_cutoff(sorted: &[(f64, usize)], n: usize, alpha: f64) -> usize {
    let n = n as f64;
    for k in (1..=sorted.len()).rev() {
        if sorted[k - 1].0 <= alpha * k as f64 / n {
            return k;
        }
    }
    0
}

fn sort_by_pvalue_then_id(scored: &mut [(f64, usize)]) {
    scored.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
}

/// BH selection over an explicit p-value list indexed by vertex id.
pub fn bh_select_pvalues(pvalues: &[f64], alpha: f64) -> Result<VertexSet> {
    check_alpha(alpha)?;
    if let Some(bad) = pvalues.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::domain(format!("p-value {bad} outside [0, 1]")));
    }
    let mut scored: Vec<(f64, usize)> = pvalues.iter().copied().zip(0..).collect();
    sort_by_pvalue_then_id(&mut scored);
    let k = bh_cutoff(&scored, pvalues.len(), alpha);
    Ok(scored[..k].iter().map(|&(_, v)| v).collect())
}

/// One Benjamini–Hochberg update: scores every vertex against `b`, orders
/// by (p-value, id) and keeps the BH-rejected prefix.
pub fn bh_select(g: &MultiGraph, b: &VertexSet, alpha: f64) -> Result<VertexSet> {
    check_alpha(alpha)?;
    if g.edge_count() == 0 {
        return Err(Error::DegenerateGraph);
    }
    b.check_bounds(g.n())?;
    Ok(BhWorkspace::new(g.n()).select(g, b, alpha))
}

/// Reusable scratch buffers for repeated BH updates on one graph.
///
/// Only vertices with a positive boundary count are scored; every other
/// vertex has p-value 1, which can never pass a threshold `k alpha / n < 1`,
/// though it still counts towards `n`.
#[derive(Clone, Debug)]
pub(crate) struct BhWorkspace {
    counts: Vec<u64>,
    touched: Vec<usize>,
    scored: Vec<(f64, usize)>,
}

impl BhWorkspace {
    pub(crate) fn new(n: usize) -> Self {
        BhWorkspace {
            counts: vec![0; n],
            touched: Vec::new(),
            scored: Vec::new(),
        }
    }

    /// Caller guarantees `alpha` in (0, 1), a non-empty edge set and `b`
    /// within bounds.
    pub(crate) fn select(&mut self, g: &MultiGraph, b: &VertexSet, alpha: f64) -> VertexSet {
        debug_assert_eq!(self.counts.len(), g.n());
        let vol: u64 = b.iter().map(|v| g.degree(v)).sum();
        let p_b = vol as f64 / (2 * g.edge_count()) as f64;

        self.touched.clear();
        accumulate_boundary_counts(g, b, &mut self.counts, &mut self.touched);

        self.scored.clear();
        for &v in &self.touched {
            let pv = survival_unchecked(g.degree(v), p_b, self.counts[v]);
            self.counts[v] = 0;
            if pv < 1.0 {
                self.scored.push((pv, v));
            }
        }
        sort_by_pvalue_then_id(&mut self.scored);
        let k = bh_cutoff(&self.scored, g.n(), alpha);
        self.scored[..k].iter().map(|&(_, v)| v).collect()
    }
}
