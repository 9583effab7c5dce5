// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Simple weighted graphs, edge-list ingestion and preprocessing.
//!
//! A [`Network`] is a simple graph (no self-loops, no parallel edges) with
//! strictly positive weights and dense node ids `0..node_count`. Input files
//! are whitespace separated `u v [w]` lines; labels are remapped to dense ids
//! in first-seen order and the original labels are kept in an [`IdMap`].

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

/// Counters for input that was dropped while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Directed (or declared-undirected) weighted simple graph.
///
/// Immutable once built. Per-node incidence lists index into the edge list
/// so neighbourhoods are iterated in O(deg).
#[derive(Debug, Clone)]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    directed: bool,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.directed == other.directed
            && self.edges == other.edges
    }
}

impl Network {
    /// Builds a simple graph from `(source, target, weight)` triples.
    ///
    /// Self-loops are dropped and later duplicates of a `(source, target)`
    /// pair are discarded, keeping the first weight. Both are counted in the
    /// returned [`BuildStats`].
    pub fn from_edges<I>(node_count: usize, edges: I, directed: bool) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut stats = BuildStats::default();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (source, target, weight) in edges {
            if source >= node_count || target >= node_count {
                return Err(Error::Validation(format!(
                    "edge ({source}, {target}) references a node outside 0..{node_count}"
                )));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::Validation(format!(
                    "edge ({source}, {target}) has non-positive weight {weight}"
                )));
            }
            if source == target {
                stats.self_loops += 1;
                continue;
            }
            if !seen.insert((source, target)) {
                stats.duplicates += 1;
                continue;
            }
            kept.push(Edge {
                source,
                target,
                weight,
            });
        }
        Ok((Self::from_simple(node_count, kept, directed), stats))
    }

    /// Like [`Network::from_edges`] but discards the drop counters.
    pub fn new<I>(node_count: usize, edges: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        Self::from_edges(node_count, edges, directed).map(|(net, _)| net)
    }

    /// `edges` must already satisfy the simple-graph invariants.
    fn from_simple(node_count: usize, edges: Vec<Edge>, directed: bool) -> Self {
        let mut out_edges = vec![Vec::new(); node_count];
        let mut in_edges = vec![Vec::new(); node_count];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source].push(i);
            in_edges[e.target].push(i);
        }
        Network {
            node_count,
            edges,
            directed,
            out_edges,
            in_edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn out_edges(&self, u: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.out_edges[u].iter().map(move |&i| &self.edges[i])
    }

    pub fn in_edges(&self, u: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[u].iter().map(move |&i| &self.edges[i])
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_edges[u].len()
    }

    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_edges[u].len()
    }

    /// `|E| / (|V| (|V| - 1))`, zero for graphs with fewer than two nodes.
    pub fn density(&self) -> f64 {
        let n = self.node_count as f64;
        if self.node_count < 2 {
            0.0
        } else {
            self.edges.len() as f64 / (n * (n - 1.0))
        }
    }

    /// Same graph with every edge direction flipped.
    pub fn reversed(&self) -> Network {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                source: e.target,
                target: e.source,
                weight: e.weight,
            })
            .collect();
        Self::from_simple(self.node_count, edges, self.directed)
    }

    pub fn with_weights(&self, mut f: impl FnMut(&Edge) -> f64) -> Result<Network> {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.source, e.target, f(e)))
            .collect();
        Network::new(self.node_count, edges, self.directed)
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn content_hash(&self) -> String {
        let mut buf = Vec::new();
        write_canonical(self, &mut buf).expect("writing to a Vec cannot fail");
        hex::encode(Sha256::digest(&buf))
    }
}

/// Points every edge from the smaller to the larger node id and collapses
/// the pairs that become parallel, keeping the first.
///
/// The result is directed. Networks that are already directed are returned
/// unchanged, which also makes the operation idempotent.
pub fn orient_undirected(net: &Network) -> Network {
    if net.directed {
        return net.clone();
    }
    let oriented = net.edges.iter().map(|e| {
        let (s, t) = if e.source < e.target {
            (e.source, e.target)
        } else {
            (e.target, e.source)
        };
        (s, t, e.weight)
    });
    // Endpoints are in range and weights positive, so only dedup can happen.
    Network::new(net.node_count, oriented, true).expect("orientation preserves validity")
}

/// Weighted cascade setting: edge `(u, v)` gets probability `1 / in_degree(v)`.
pub fn apply_wcs(net: &Network) -> Network {
    let edges = net
        .edges
        .iter()
        .map(|e| Edge {
            source: e.source,
            target: e.target,
            weight: 1.0 / net.in_degree(e.target) as f64,
        })
        .collect();
    Network::from_simple(net.node_count, edges, net.directed)
}

/// Original node labels, indexed by dense id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    labels: Vec<String>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// CSV with header `original_label,dense_id`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "original_label,dense_id")?;
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(w, "{label},{id}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut labels = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            if idx == 0 || line.trim().is_empty() {
                continue;
            }
            let (label, id) = line
                .rsplit_once(',')
                .ok_or_else(|| Error::parse(idx + 1, "expected `label,id`"))?;
            let id: usize = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("bad dense id `{id}`")))?;
            if id != labels.len() {
                return Err(Error::parse(idx + 1, "dense ids must be consecutive"));
            }
            labels.push(label.to_string());
        }
        Ok(IdMap { labels })
    }
}

/// Result of reading a raw edge list.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub network: Network,
    pub id_map: IdMap,
    pub stats: BuildStats,
}

pub fn load_edge_list(
    path: impl AsRef<Path>,
    declared_directed: bool,
    declared_weighted: bool,
) -> Result<Ingested> {
    let file = File::open(path)?;
    parse_edge_list(BufReader::new(file), declared_directed, declared_weighted)
}

/// Parses `u v` / `u v w` lines. `#` and `%` lines are comments and columns
/// beyond the ones in use are ignored. Unweighted input gets unit weights.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    declared_directed: bool,
    declared_weighted: bool,
) -> Result<Ingested> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut raw = Vec::new();
    let mut self_loops = 0;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(u), Some(v)) = (cols.next(), cols.next()) else {
            return Err(Error::parse(lineno, "expected at least two columns"));
        };
        let weight = if declared_weighted {
            let w = cols
                .next()
                .ok_or_else(|| Error::parse(lineno, "missing weight column"))?;
            let w: f64 = w
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad weight `{w}`")))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Validation(format!(
                    "line {lineno}: weight must be positive, got {w}"
                )));
            }
            w
        } else {
            1.0
        };
        // Self-loops never introduce nodes.
        if u == v {
            self_loops += 1;
            continue;
        }
        let mut intern = |label: &str| -> NodeId {
            if let Some(&id) = ids.get(label) {
                return id;
            }
            let id = labels.len();
            labels.push(label.to_string());
            ids.insert(label.to_string(), id);
            id
        };
        let s = intern(u);
        let t = intern(v);
        raw.push((s, t, weight));
    }

    if raw.is_empty() {
        return Err(Error::Validation("no edges".into()));
    }
    let (network, mut stats) = Network::from_edges(labels.len(), raw, declared_directed)?;
    stats.self_loops += self_loops;
    Ok(Ingested {
        network,
        id_map: IdMap { labels },
        stats,
    })
}

/// Writes the canonical text form: a `# nodes=N directed=B` header and one
/// `source target weight` line per edge using dense ids.
pub fn write_canonical<W: Write>(net: &Network, mut w: W) -> Result<()> {
    writeln!(w, "# nodes={} directed={}", net.node_count, net.directed)?;
    for e in &net.edges {
        writeln!(w, "{} {} {}", e.source, e.target, e.weight)?;
    }
    Ok(())
}

pub fn read_canonical<R: BufRead>(r: R) -> Result<Network> {
    let mut header: Option<(usize, bool)> = None;
    let mut edges = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if header.is_none() {
                header = parse_header(rest);
            }
            continue;
        }
        let mut cols = line.split_whitespace();
        let mut next = |what: &str| {
            cols.next()
                .ok_or_else(|| Error::parse(lineno, format!("missing {what}")))
        };
        let s = next("source")?;
        let t = next("target")?;
        let w = next("weight")?;
        let s: usize = s
            .parse()
            .map_err(|_| Error::parse(lineno, "bad source id"))?;
        let t: usize = t
            .parse()
            .map_err(|_| Error::parse(lineno, "bad target id"))?;
        let w: f64 = w.parse().map_err(|_| Error::parse(lineno, "bad weight"))?;
        edges.push((s, t, w));
    }
    let (node_count, directed) =
        header.ok_or_else(|| Error::parse(1, "missing `# nodes=N directed=B` header"))?;
    Network::new(node_count, edges, directed)
}

fn parse_header(s: &str) -> Option<(usize, bool)> {
    let mut nodes = None;
    let mut directed = None;
    for tok in s.split_whitespace() {
        if let Some(v) = tok.strip_prefix("nodes=") {
            nodes = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("directed=") {
            directed = v.parse().ok();
        }
    }
    Some((nodes?, directed?))
}
