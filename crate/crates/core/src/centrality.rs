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

//! Classic centrality measures over a [`GraphView`].
//!
//! Distance-based measures (betweenness, closeness) read the view's weights
//! as edge lengths, so weighted inputs should come from
//! [`GraphView::distances`], which reports `1 / w`. Unit-weight views are
//! traversed with BFS.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, NodeId};
use crate::score::ScoreVector;
use crate::view::{GraphView, WeightMode};

/// Sources handled per parallel work item. Partial sums are reduced in
/// chunk order, which keeps floating point results independent of threads.
const SOURCE_CHUNK: usize = 32;

/// Relative slack under which two path lengths count as equal.
const PATH_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KatzDirection {
    /// walks ending at the node
    Incoming,
    /// walks leaving the node
    Outgoing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KatzAlpha {
    /// `0.85 / max(1, rho)` with `rho` the estimated spectral radius.
    AutoSpectral,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl IterationConfig {
    pub const EIGENVECTOR: IterationConfig = IterationConfig {
        tolerance: 1e-9,
        max_iterations: 10_000,
    };

    pub const KATZ: IterationConfig = IterationConfig {
        tolerance: 1e-12,
        max_iterations: 10_000,
    };
}

fn is_weighted(view: &GraphView) -> bool {
    view.weight_mode() != WeightMode::Unit
}

pub fn degree(view: &GraphView, direction: Direction) -> ScoreVector {
    let name = match direction {
        Direction::In => "in_degree",
        Direction::Out => "out_degree",
        Direction::Total => "degree",
    };
    let values = (0..view.node_count())
        .map(|u| {
            let (i, o) = (view.in_neighbors(u).len(), view.out_neighbors(u).len());
            let d = match direction {
                Direction::In => i,
                Direction::Out => o,
                Direction::Total if view.is_directed() => i + o,
                Direction::Total => o,
            };
            d as f64
        })
        .collect();
    ScoreVector::new(name, values)
}

pub fn strength(view: &GraphView, direction: Direction) -> ScoreVector {
    let name = match direction {
        Direction::In => "in_strength",
        Direction::Out => "out_strength",
        Direction::Total => "strength",
    };
    let sum = |adj: &[(NodeId, f64)]| adj.iter().map(|&(_, w)| w).sum::<f64>();
    let values = (0..view.node_count())
        .map(|u| {
            let (i, o) = (sum(view.in_neighbors(u)), sum(view.out_neighbors(u)));
            match direction {
                Direction::In => i,
                Direction::Out => o,
                Direction::Total if view.is_directed() => i + o,
                Direction::Total => o,
            }
        })
        .collect();
    ScoreVector::new(name, values)
}

#[derive(PartialEq)]
struct Pending {
    dist: f64,
    node: NodeId,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATH_EPS * a.abs().max(b.abs()).max(1.0)
}

struct ShortestPaths {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    preds: Vec<Vec<NodeId>>,
    /// nodes in non-decreasing distance order
    order: Vec<NodeId>,
    settled: Vec<bool>,
    delta: Vec<f64>,
    heap: BinaryHeap<Pending>,
    queue: VecDeque<NodeId>,
}

impl ShortestPaths {
    fn new(n: usize) -> Self {
        ShortestPaths {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::new(),
            settled: vec![false; n],
            delta: vec![0.0; n],
            heap: BinaryHeap::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        for &u in &self.order {
            self.dist[u] = f64::INFINITY;
            self.sigma[u] = 0.0;
            self.preds[u].clear();
            self.settled[u] = false;
            self.delta[u] = 0.0;
        }
        self.order.clear();
    }

    /// Shortest path DAG from `s`, counting paths.
    fn run(&mut self, view: &GraphView, s: NodeId, weighted: bool) {
        self.reset();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        if weighted {
            self.heap.push(Pending { dist: 0.0, node: s });
            while let Some(Pending { dist, node: u }) = self.heap.pop() {
                if self.settled[u] || dist > self.dist[u] {
                    continue;
                }
                self.settled[u] = true;
                self.order.push(u);
                for &(v, w) in view.out_neighbors(u) {
                    if self.settled[v] {
                        continue;
                    }
                    let nd = dist + w;
                    let dv = self.dist[v];
                    if dv.is_infinite() || (nd < dv && !same_length(nd, dv)) {
                        self.dist[v] = nd;
                        self.sigma[v] = self.sigma[u];
                        self.preds[v].clear();
                        self.preds[v].push(u);
                        self.heap.push(Pending { dist: nd, node: v });
                    } else if same_length(nd, dv) {
                        self.sigma[v] += self.sigma[u];
                        self.preds[v].push(u);
                    }
                }
            }
        } else {
            self.queue.clear();
            self.queue.push_back(s);
            while let Some(u) = self.queue.pop_front() {
                self.order.push(u);
                let du = self.dist[u];
                for &(v, _) in view.out_neighbors(u) {
                    if self.dist[v].is_infinite() {
                        self.dist[v] = du + 1.0;
                        self.queue.push_back(v);
                    }
                    if self.dist[v] == du + 1.0 {
                        self.sigma[v] += self.sigma[u];
                        self.preds[v].push(u);
                    }
                }
            }
        }
    }
}

/// Runs `per_source` for every source in fixed-size chunks and sums the
/// per-chunk vectors in chunk order.
fn sum_over_sources<F>(n: usize, per_source: F) -> Vec<f64>
where
    F: Fn(NodeId, &mut ShortestPaths, &mut [f64]) + Sync,
{
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut sp = ShortestPaths::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                per_source(s, &mut sp, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Exact betweenness (Brandes accumulation).
///
/// Directed views sum over ordered `(s, t)` pairs; undirected views count
/// each unordered pair once.
pub fn betweenness(view: &GraphView) -> ScoreVector {
    let n = view.node_count();
    let weighted = is_weighted(view);
    let mut values = sum_over_sources(n, |s, sp, acc| {
        sp.run(view, s, weighted);
        for &w in sp.order.iter().rev() {
            let coeff = (1.0 + sp.delta[w]) / sp.sigma[w];
            for &p in &sp.preds[w] {
                sp.delta[p] += sp.sigma[p] * coeff;
            }
            if w != s {
                acc[w] += sp.delta[w];
            }
        }
    });
    if !view.is_directed() {
        values.iter_mut().for_each(|v| *v /= 2.0);
    }
    ScoreVector::new("betweenness", values)
}

/// Outbound closeness, scaled to the reachable set.
///
/// With `r` nodes reachable from `u` at total distance `D`, the score is
/// `(r / (n - 1)) * (r / D)`. On a strongly connected graph this is the
/// plain `(n - 1) / D`; nodes that reach nothing score 0.
pub fn closeness(view: &GraphView) -> ScoreVector {
    let n = view.node_count();
    let weighted = is_weighted(view);
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || ShortestPaths::new(n),
            |sp, s| {
                sp.run(view, s, weighted);
                let reached = sp.order.len() - 1;
                if reached == 0 {
                    return 0.0;
                }
                let total: f64 = sp.order.iter().map(|&v| sp.dist[v]).sum();
                let r = reached as f64;
                (r / (n - 1) as f64) * (r / total)
            },
        )
        .collect();
    ScoreVector::new("closeness", values)
}

fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Leading eigenvector of the adjacency matrix of an undirected view.
///
/// Power iteration runs on `A + I`, which has the same eigenvectors but no
/// oscillation on bipartite graphs. The result is non-negative with unit L2
/// norm.
pub fn eigenvector(view: &GraphView, cfg: IterationConfig) -> Result<ScoreVector> {
    if view.is_directed() {
        return Err(Error::Parameter(
            "eigenvector centrality needs an undirected view".into(),
        ));
    }
    let n = view.node_count();
    if n == 0 {
        return Ok(ScoreVector::new("eigenvector", Vec::new()));
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iterations {
        for (u, slot) in next.iter_mut().enumerate() {
            *slot = x[u]
                + view
                    .out_neighbors(u)
                    .iter()
                    .map(|&(v, w)| w * x[v])
                    .sum::<f64>();
        }
        let norm = l2_norm(&next);
        next.iter_mut().for_each(|v| *v /= norm);
        let step = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        // remaining distance to the limit, from the observed contraction
        let q = (step / residual).min(1.0);
        let remaining = if q < 1.0 {
            step * q / (1.0 - q)
        } else {
            f64::INFINITY
        };
        residual = step;
        std::mem::swap(&mut x, &mut next);
        if step < cfg.tolerance && (remaining < cfg.tolerance || step == 0.0) {
            return Ok(ScoreVector::new("eigenvector", x));
        }
    }
    Err(Error::Convergence {
        method: "eigenvector",
        iterations: cfg.max_iterations,
        residual,
    })
}

/// Estimate of the spectral radius of the view's (weighted) adjacency
/// matrix from the growth rate of `(A + I)^k 1`.
pub fn spectral_radius(view: &GraphView) -> f64 {
    let n = view.node_count();
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut rate = 1.0;
    for _ in 0..10_000 {
        for (u, slot) in next.iter_mut().enumerate() {
            *slot = x[u]
                + view
                    .out_neighbors(u)
                    .iter()
                    .map(|&(v, w)| w * x[v])
                    .sum::<f64>();
        }
        let growth: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= growth);
        std::mem::swap(&mut x, &mut next);
        let done = (growth - rate).abs() <= 1e-13 * growth;
        rate = growth;
        if done {
            break;
        }
    }
    (rate - 1.0).max(0.0)
}

/// Attenuation factor for a Katz run on `view`.
pub fn katz_alpha(view: &GraphView, alpha: KatzAlpha) -> f64 {
    match alpha {
        KatzAlpha::Fixed(a) => a,
        KatzAlpha::AutoSpectral => 0.85 / spectral_radius(view).max(1.0),
    }
}

/// Katz centrality `sum_{k>=1} alpha^k (walks of length k)`.
///
/// `Incoming` counts walks ending at each node (column sums of `A^k`),
/// `Outgoing` counts walks starting there (row sums). Weighted views weigh
/// each walk by the product of its edge weights.
pub fn katz(
    view: &GraphView,
    direction: KatzDirection,
    alpha: f64,
    cfg: IterationConfig,
) -> Result<ScoreVector> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!(
            "Katz alpha must be positive, got {alpha}"
        )));
    }
    let rho = spectral_radius(view);
    if alpha * rho >= 1.0 {
        return Err(Error::Parameter(format!(
            "Katz alpha {alpha} diverges: needs alpha < 1/{rho:.6}"
        )));
    }
    let n = view.node_count();
    let mut x = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iterations {
        for (u, slot) in next.iter_mut().enumerate() {
            let adj = match direction {
                KatzDirection::Incoming => view.in_neighbors(u),
                KatzDirection::Outgoing => view.out_neighbors(u),
            };
            *slot = alpha * adj.iter().map(|&(v, w)| w * (x[v] + 1.0)).sum::<f64>();
        }
        let scale = next.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        residual = x
            .iter()
            .zip(&next)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut x, &mut next);
        if residual <= cfg.tolerance * scale {
            let name = match direction {
                KatzDirection::Incoming => "katz",
                KatzDirection::Outgoing => "katz_out",
            };
            return Ok(ScoreVector::new(name, x));
        }
    }
    Err(Error::Convergence {
        method: "katz",
        iterations: cfg.max_iterations,
        residual,
    })
}

/// k-shell index of every node of an undirected view (bucket peeling).
pub fn kshell(view: &GraphView) -> Result<ScoreVector> {
    if view.is_directed() {
        return Err(Error::Parameter("k-shell needs an undirected view".into()));
    }
    let n = view.node_count();
    let mut deg: Vec<usize> = (0..n).map(|u| view.out_neighbors(u).len()).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // Batagelj-Zaversnik: nodes sorted by degree with bucket starts
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for u in 0..n {
        pos[u] = bin[deg[u]];
        vert[pos[u]] = u;
        bin[deg[u]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for &(u, _) in view.out_neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    Ok(ScoreVector::new(
        "kshell",
        deg.into_iter().map(|d| d as f64).collect(),
    ))
}

/// `sqrt(out_degree * out_strength)` per node.
pub fn partially_weighted_degree(net: &Network) -> Vec<f64> {
    (0..net.node_count())
        .map(|u| {
            let k = net.out_degree(u) as f64;
            let s: f64 = net.out_edges(u).map(|e| e.weight).sum();
            (k * s).sqrt()
        })
        .collect()
}

/// Weighted k-shell on the outgoing side of a directed weighted network.
///
/// Each node's level is its partially weighted degree divided by the
/// largest one and scaled to an integer in `0..=n`. Peeling repeatedly
/// removes a node of minimum level, recomputing the level of nodes that
/// lose an out-edge; a node's shell is the running maximum of removal
/// levels.
pub fn weighted_kshell(net: &Network) -> ScoreVector {
    let n = net.node_count();
    let kp = partially_weighted_degree(net);
    let max = kp.iter().copied().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return ScoreVector::new("wks", vec![0.0; n]);
    }
    let scale = n as f64 / max;
    let level = |k: usize, s: f64| -> usize {
        if k == 0 {
            0
        } else {
            (((k as f64) * s.max(0.0)).sqrt() * scale).floor() as usize
        }
    };

    let mut k: Vec<usize> = (0..n).map(|u| net.out_degree(u)).collect();
    let mut s: Vec<f64> = (0..n)
        .map(|u| net.out_edges(u).map(|e| e.weight).sum())
        .collect();
    let mut lvl: Vec<usize> = (0..n).map(|u| level(k[u], s[u])).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<std::cmp::Reverse<(usize, NodeId)>> =
        (0..n).map(|u| std::cmp::Reverse((lvl[u], u))).collect();
    let mut shell = vec![0.0; n];
    let mut current = 0;

    while let Some(std::cmp::Reverse((l, u))) = heap.pop() {
        if removed[u] || l != lvl[u] {
            continue;
        }
        removed[u] = true;
        current = current.max(l);
        shell[u] = current as f64;
        for e in net.in_edges(u) {
            let v = e.source;
            if removed[v] {
                continue;
            }
            k[v] -= 1;
            s[v] -= e.weight;
            let nl = level(k[v], s[v]);
            if nl != lvl[v] {
                lvl[v] = nl;
                heap.push(std::cmp::Reverse((nl, v)));
            }
        }
    }
    ScoreVector::new("wks", shell)
}
