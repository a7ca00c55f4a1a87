//! Undirected multigraphs with degree bookkeeping and edge-list I/O.
//!
//! Vertices are dense ids `0..n`. Every vertex also carries a string label
//! (the token it had in the input file, or its decimal id for generated
//! graphs). A self-loop contributes 2 to the degree of its endpoint, so the
//! degree sum is always twice the edge count.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// The full vertex set `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    /// Wraps an already strictly increasing list of ids.
    pub fn from_sorted(ids: Vec<usize>) -> Result<Self> {
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("vertex ids must be strictly increasing"));
        }
        Ok(VertexSet(ids))
    }

    pub(crate) fn from_sorted_unchecked(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Fails if any member is not a vertex of a graph with `n` vertices.
    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Members of `self` that are not in `other`.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut ids: Vec<usize> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(ids: Vec<usize>) -> Self {
        ids.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Immutable undirected multigraph in compressed adjacency form.
///
/// Each adjacency row is sorted by neighbor id and lists every neighbor
/// once together with the edge multiplicity. A self-loop at `u` appears once
/// in row `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    labels: Vec<String>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    multiplicities: Vec<u64>,
    degrees: Vec<u64>,
    edge_count: u64,
}

impl MultiGraph {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// |E| counting multiplicity; a self-loop counts once.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> u64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label to dense id lookup table.
    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    /// `(neighbor, multiplicity)` pairs of `u`, sorted by neighbor.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.multiplicities[range].iter().copied())
    }

    pub(crate) fn row(&self, u: usize) -> (&[usize], &[u64]) {
        let range = self.offsets[u]..self.offsets[u + 1];
        (&self.neighbors[range.clone()], &self.multiplicities[range])
    }

    /// Edge classes `(u, v, multiplicity)` with `u <= v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v >= u)
                .map(move |(v, m)| (u, v, m))
        })
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        let (nbrs, mults) = self.row(u);
        nbrs.binary_search(&v).map(|i| mults[i]).unwrap_or(0)
    }

    fn check_vertex(&self, u: usize) -> Result<()> {
        if u >= self.n() {
            Err(Error::VertexOutOfRange { vertex: u, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Number of edges between `u` and members of `b`, with multiplicity.
    /// A self-loop at `u` counts twice when `u` is in `b`.
    pub fn boundary_count(&self, u: usize, b: &VertexSet) -> Result<u64> {
        self.check_vertex(u)?;
        b.check_bounds(self.n())?;
        let (nbrs, mults) = self.row(u);
        let mut total = 0;
        // Walk whichever side is shorter.
        if nbrs.len() <= b.len() {
            for (&v, &m) in nbrs.iter().zip(mults) {
                if b.contains(v) {
                    total += if v == u { 2 * m } else { m };
                }
            }
        } else {
            for v in b.iter() {
                if let Ok(i) = nbrs.binary_search(&v) {
                    total += if v == u { 2 * mults[i] } else { mults[i] };
                }
            }
        }
        Ok(total)
    }

    /// Sum of degrees over `b`.
    pub fn volume(&self, b: &VertexSet) -> Result<u64> {
        b.check_bounds(self.n())?;
        Ok(b.iter().map(|v| self.degrees[v]).sum())
    }

    /// `{u}` together with every vertex adjacent to `u`.
    pub fn closed_neighborhood(&self, u: usize) -> Result<VertexSet> {
        self.check_vertex(u)?;
        let mut ids: Vec<usize> = self.row(u).0.to_vec();
        if let Err(pos) = ids.binary_search(&u) {
            ids.insert(pos, u);
        }
        Ok(VertexSet::from_sorted_unchecked(ids))
    }

    /// Copy with self-loops dropped and every multi-edge collapsed to one.
    pub fn simplify(&self) -> MultiGraph {
        let mut builder = MultiGraphBuilder::with_labels(self.labels.clone());
        for (u, v, _) in self.edges() {
            if u != v {
                builder.add_edge(u, v);
            }
        }
        builder.build()
    }
}

/// Accumulates edges and produces a [`MultiGraph`].
#[derive(Clone, Debug)]
pub struct MultiGraphBuilder {
    labels: Vec<String>,
    edges: Vec<(usize, usize, u64)>,
}

impl MultiGraphBuilder {
    /// Builder for vertices `0..n` labelled by their decimal id.
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        MultiGraphBuilder {
            labels,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.add_edges(u, v, 1);
    }

    /// Adds `multiplicity` parallel copies of `{u, v}`.
    pub fn add_edges(&mut self, u: usize, v: usize, multiplicity: u64) {
        assert!(
            u < self.n() && v < self.n(),
            "edge ({u}, {v}) out of range for {} vertices",
            self.n()
        );
        if multiplicity > 0 {
            self.edges.push((u.min(v), u.max(v), multiplicity));
        }
    }

    pub fn build(mut self) -> MultiGraph {
        let n = self.labels.len();
        self.edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
        let mut merged: Vec<(usize, usize, u64)> = Vec::with_capacity(self.edges.len());
        for (u, v, m) in self.edges {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += m,
                _ => merged.push((u, v, m)),
            }
        }

        let mut row_len = vec![0usize; n];
        let mut degrees = vec![0u64; n];
        let mut edge_count = 0u64;
        for &(u, v, m) in &merged {
            edge_count += m;
            degrees[u] += m;
            degrees[v] += m;
            row_len[u] += 1;
            if u != v {
                row_len[v] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for len in &row_len {
            offsets.push(offsets.last().unwrap() + len);
        }
        let total = *offsets.last().unwrap();
        let mut neighbors = vec![0usize; total];
        let mut multiplicities = vec![0u64; total];
        let mut cursor = offsets[..n].to_vec();
        // `merged` is sorted by (u, v); filling in this order keeps every row
        // sorted by neighbor id.
        for &(u, v, m) in &merged {
            if u != v {
                neighbors[cursor[v]] = u;
                multiplicities[cursor[v]] = m;
                cursor[v] += 1;
            }
        }
        for &(u, v, m) in &merged {
            neighbors[cursor[u]] = v;
            multiplicities[cursor[u]] = m;
            cursor[u] += 1;
        }
        for u in 0..n {
            let range = offsets[u]..offsets[u + 1];
            debug_assert!(neighbors[range].windows(2).all(|w| w[0] < w[1]));
        }

        MultiGraph {
            labels: self.labels,
            offsets,
            neighbors,
            multiplicities,
            degrees,
            edge_count,
        }
    }
}

/// Reads a whitespace-separated edge list.
///
/// Each non-blank line not starting with `#` holds two vertex labels and an
/// optional multiplicity. Labels are mapped to dense ids in first-seen order
/// and repeated lines accumulate.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<MultiGraph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = index.get(label) {
            return id;
        }
        let id = labels.len();
        index.insert(label.to_owned(), id);
        labels.push(label.to_owned());
        id
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 or 3 fields, found {}", tokens.len()),
            });
        }
        let multiplicity = match tokens.get(2) {
            None => 1,
            Some(tok) => match tok.parse::<i64>() {
                Ok(m) if m >= 1 => m as u64,
                Ok(m) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("multiplicity must be at least 1, found {m}"),
                    })
                }
                Err(_) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("multiplicity `{tok}` is not an integer"),
                    })
                }
            },
        };
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        edges.push((u, v, multiplicity));
    }

    let mut builder = MultiGraphBuilder::with_labels(labels);
    for (u, v, m) in edges {
        builder.add_edges(u, v, m);
    }
    Ok(builder.build())
}

pub fn parse_edge_list_str(text: &str) -> Result<MultiGraph> {
    parse_edge_list(text.as_bytes())
}

/// Writes `label_u label_v multiplicity`, one edge class per line, sorted
/// by `(u, v)`.
pub fn write_edge_list<W: Write>(g: &MultiGraph, mut out: W) -> Result<()> {
    for (u, v, m) in g.edges() {
        writeln!(out, "{} {} {}", g.label(u), g.label(v), m)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MultiGraph {
        parse_edge_list_str("0 1\n1 2\n2 0\n").unwrap()
    }

    #[test]
    fn parse_simple_path() {
        let g = parse_edge_list_str("0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degrees(), &[1, 2, 1]);
    }

    #[test]
    fn parse_self_loop() {
        let g = parse_edge_list_str("a a\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.label(0), "a");
    }

    #[test]
    fn parse_accumulates_repeats() {
        let g = parse_edge_list_str("0 1\n0 1\n").unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
    }

    #[test]
    fn parse_comments_blanks_and_multiplicity() {
        let g = parse_edge_list_str("# header\n\nx y 3\n  \ny z\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degrees(), &[3, 4, 1]);
    }

    #[test]
    fn parse_first_seen_order() {
        let g = parse_edge_list_str("17 4\n4 9\n").unwrap();
        assert_eq!(g.labels(), &["17", "4", "9"]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = ["0 1\n0\n", "0 1\n1 2 3 4\n", "0 1\n1 2 x\n", "0 1\n1 2 0\n", "0 1\n1 2 -2\n"];
        for text in cases {
            match parse_edge_list_str(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, 2, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn boundary_count_examples() {
        let g = triangle();
        assert_eq!(g.boundary_count(0, &VertexSet::from(vec![1, 2])).unwrap(), 2);
        assert_eq!(g.boundary_count(0, &VertexSet::new()).unwrap(), 0);

        let g = parse_edge_list_str("0 1 3\n").unwrap();
        assert_eq!(g.boundary_count(0, &VertexSet::from(vec![1])).unwrap(), 3);
    }

    #[test]
    fn boundary_count_self_loop_counts_twice() {
        let g = parse_edge_list_str("0 0\n0 1\n").unwrap();
        assert_eq!(g.boundary_count(0, &VertexSet::from(vec![0])).unwrap(), 2);
        assert_eq!(g.boundary_count(0, &VertexSet::full(2)).unwrap(), 3);
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn boundary_count_rejects_bad_vertex() {
        let g = triangle();
        assert!(matches!(
            g.boundary_count(3, &VertexSet::new()),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(g.boundary_count(0, &VertexSet::from(vec![5])).is_err());
    }

    #[test]
    fn volume_examples() {
        let g = triangle();
        assert_eq!(g.volume(&VertexSet::full(3)).unwrap(), 6);
        assert_eq!(g.volume(&VertexSet::new()).unwrap(), 0);
        let path = parse_edge_list_str("0 1\n1 2\n").unwrap();
        assert_eq!(path.volume(&VertexSet::from(vec![1])).unwrap(), 2);
    }

    #[test]
    fn closed_neighborhood_includes_anchor() {
        let g = parse_edge_list_str("0 1\n0 2\n3 3\n").unwrap();
        assert_eq!(g.closed_neighborhood(0).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(g.closed_neighborhood(3).unwrap().as_slice(), &[3]);
    }

    #[test]
    fn simplify_drops_loops_and_parallel_edges() {
        let g = parse_edge_list_str("0 0\n0 1 4\n1 2\n").unwrap();
        let s = g.simplify();
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.degrees(), &[1, 2, 1]);
        assert_eq!(s.labels(), g.labels());
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from(vec![5, 1, 3, 3]);
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        let b = VertexSet::from(vec![3, 4]);
        assert_eq!(a.union(&b).as_slice(), &[1, 3, 4, 5]);
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(a.difference(&b).as_slice(), &[1, 5]);
        assert!(VertexSet::from_sorted(vec![1, 1]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn edge_lists() -> impl Strategy<Value = (usize, Vec<(usize, usize, u64)>)> {
            (1usize..25).prop_flat_map(|n| {
                (Just(n), prop::collection::vec((0..n, 0..n, 1u64..4), 0..60))
            })
        }

        fn build(n: usize, edges: &[(usize, usize, u64)]) -> MultiGraph {
            let mut b = MultiGraphBuilder::new(n);
            for &(u, v, m) in edges {
                b.add_edges(u, v, m);
            }
            b.build()
        }

        proptest! {
            #[test]
            fn degree_sum_is_twice_edge_count((n, edges) in edge_lists()) {
                let g = build(n, &edges);
                let sum: u64 = g.degrees().iter().sum();
                prop_assert_eq!(sum, 2 * g.edge_count());
                prop_assert_eq!(g.volume(&VertexSet::full(n)).unwrap(), 2 * g.edge_count());
                for u in 0..n {
                    prop_assert_eq!(g.boundary_count(u, &VertexSet::full(n)).unwrap(), g.degree(u));
                }
            }

            #[test]
            fn serialization_round_trip_preserves_structure((n, edges) in edge_lists()) {
                let g = build(n, &edges);
                let mut buf = Vec::new();
                write_edge_list(&g, &mut buf).unwrap();
                let h = parse_edge_list(buf.as_slice()).unwrap();
                prop_assert_eq!(h.edge_count(), g.edge_count());
                let idx = g.label_index();
                for u in 0..h.n() {
                    let orig = idx[h.label(u)];
                    prop_assert_eq!(h.degree(u), g.degree(orig));
                }
                // Isolated vertices have no line in the file.
                let isolated = g.degrees().iter().filter(|&&d| d == 0).count();
                prop_assert_eq!(h.n() + isolated, g.n());
            }
        }
    }
}
