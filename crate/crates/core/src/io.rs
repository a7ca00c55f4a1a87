//! Community files.
//!
//! One community per line as space-separated vertex labels, in extraction
//! order, followed by a final `background:` line listing the background
//! vertices (possibly none). Labels are the names used in the edge list, so
//! a file written for a parsed graph can be compared with ground truth for
//! the same graph even though the two may number vertices differently.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::VertexSet;

const BACKGROUND_TAG: &str = "background:";

/// Communities and background as lists of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommunityFile {
    pub communities: Vec<Vec<String>>,
    pub background: Vec<String>,
}

/// Writes communities and background, naming vertex `v` by `labels[v]`, or
/// by its decimal id when `labels` is `None`.
pub fn write_communities<W: Write>(
    mut out: W,
    communities: &[VertexSet],
    background: &VertexSet,
    labels: Option<&[String]>,
) -> Result<()> {
    let name = |v: usize| -> String {
        match labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    };
    for c in communities {
        let line: Vec<String> = c.iter().map(name).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    write!(out, "{BACKGROUND_TAG}")?;
    for v in background.iter() {
        write!(out, " {}", name(v))?;
    }
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_communities<R: BufRead>(reader: R) -> Result<CommunityFile> {
    let mut file = CommunityFile::default();
    let mut background_seen = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if background_seen {
            if trimmed.is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line: i + 1,
                message: "content after the background line".into(),
            });
        }
        if let Some(rest) = trimmed.strip_prefix(BACKGROUND_TAG) {
            file.background = rest.split_whitespace().map(str::to_owned).collect();
            background_seen = true;
        } else {
            file.communities
                .push(trimmed.split_whitespace().map(str::to_owned).collect());
        }
    }
    if !background_seen {
        // Tolerate trailing blank lines in files without a background line.
        while file.communities.last().is_some_and(Vec::is_empty) {
            file.communities.pop();
        }
    }
    Ok(file)
}

pub fn read_communities_str(text: &str) -> Result<CommunityFile> {
    read_communities(text.as_bytes())
}

/// A community file resolved to dense vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedCover {
    pub communities: Vec<VertexSet>,
    pub background: VertexSet,
}

/// Maps two community files onto a shared id space.
///
/// The universe is every label mentioned in either file. A vertex that the
/// other file never mentions counts as background there.
pub fn align(a: &CommunityFile, b: &CommunityFile) -> (ResolvedCover, ResolvedCover, Vec<String>) {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    for file in [a, b] {
        for label in file.communities.iter().flatten().chain(&file.background) {
            if !index.contains_key(label.as_str()) {
                index.insert(label, labels.len());
                labels.push(label.clone());
            }
        }
    }
    let n = labels.len();
    let resolve = |file: &CommunityFile| {
        let communities: Vec<VertexSet> = file
            .communities
            .iter()
            .map(|c| c.iter().map(|l| index[l.as_str()]).collect())
            .collect();
        let mut covered = vec![false; n];
        for c in &communities {
            for v in c.iter() {
                covered[v] = true;
            }
        }
        let background = (0..n).filter(|&v| !covered[v]).collect();
        ResolvedCover { communities, background }
    };
    let (ra, rb) = (resolve(a), resolve(b));
    (ra, rb, labels)
}
