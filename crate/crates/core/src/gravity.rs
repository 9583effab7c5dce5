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

//! Gravity-style centrality.
//!
//! For a node `u` with mass `m(u)`:
//!
//! ```text
//! C(u) = sum over v in N_r(u) of m(u) * m(v) / dist(u, v)^2
//! ```
//!
//! `N_r(u)` holds the nodes reachable from `u` in at most `r` out-hops.
//! `dist` is the shortest path length under the view's weights, searched
//! inside the ball `N_r(u) + u` only. On a weighted view built with
//! [`GraphView::distances`] the lengths are inverted probabilities.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::centrality::{self, Direction};
use crate::error::{Error, Result};
use crate::graph::{Network, NodeId};
use crate::score::ScoreVector;
use crate::view::{GraphView, ViewKind};

pub const DEFAULT_RADIUS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GravityConfig {
    pub radius: usize,
}

impl Default for GravityConfig {
    fn default() -> Self {
        GravityConfig {
            radius: DEFAULT_RADIUS,
        }
    }
}

struct Ball {
    hops: Vec<usize>,
    dist: Vec<f64>,
    members: Vec<NodeId>,
    queue: VecDeque<NodeId>,
    heap: BinaryHeap<Reverse<(u64, NodeId)>>,
}

impl Ball {
    fn new(n: usize) -> Self {
        Ball {
            hops: vec![usize::MAX; n],
            dist: vec![f64::INFINITY; n],
            members: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Fills `members` with `u` and every node within `r` hops of it.
    fn collect(&mut self, view: &GraphView, u: NodeId, r: usize) {
        for &v in &self.members {
            self.hops[v] = usize::MAX;
            self.dist[v] = f64::INFINITY;
        }
        self.members.clear();
        self.hops[u] = 0;
        self.members.push(u);
        self.queue.clear();
        self.queue.push_back(u);
        while let Some(v) = self.queue.pop_front() {
            let h = self.hops[v];
            if h == r {
                continue;
            }
            for &(w, _) in view.out_neighbors(v) {
                if self.hops[w] == usize::MAX {
                    self.hops[w] = h + 1;
                    self.members.push(w);
                    self.queue.push_back(w);
                }
            }
        }
    }

    /// Dijkstra from `u` over the subgraph induced by the current ball.
    fn distances(&mut self, view: &GraphView, u: NodeId) {
        self.dist[u] = 0.0;
        self.heap.clear();
        // non-negative f64 order matches the order of their bit patterns
        self.heap.push(Reverse((0f64.to_bits(), u)));
        while let Some(Reverse((bits, v))) = self.heap.pop() {
            let d = f64::from_bits(bits);
            if d > self.dist[v] {
                continue;
            }
            for &(w, len) in view.out_neighbors(v) {
                if self.hops[w] == usize::MAX {
                    continue;
                }
                let nd = d + len;
                if nd < self.dist[w] {
                    self.dist[w] = nd;
                    self.heap.push(Reverse((nd.to_bits(), w)));
                }
            }
        }
    }
}

/// Nodes within `r` out-hops of `u`, excluding `u`, in BFS order.
pub fn rhop_neighborhood(view: &GraphView, u: NodeId, r: usize) -> Vec<NodeId> {
    let mut ball = Ball::new(view.node_count());
    ball.collect(view, u, r);
    ball.members[1..].to_vec()
}

/// Generic gravity kernel. `view` supplies both the hop structure and the
/// edge lengths.
pub fn gravity(view: &GraphView, mass: &ScoreVector, cfg: GravityConfig) -> Result<ScoreVector> {
    let n = view.node_count();
    if mass.len() != n {
        return Err(Error::Validation(format!(
            "mass `{}` has {} values for {} nodes",
            mass.measure(),
            mass.len(),
            n
        )));
    }
    if cfg.radius == 0 {
        return Err(Error::Parameter("gravity radius must be at least 1".into()));
    }
    let m = mass.values();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || Ball::new(n),
            |ball, u| {
                if m[u] == 0.0 {
                    return 0.0;
                }
                ball.collect(view, u, cfg.radius);
                ball.distances(view, u);
                ball.members[1..]
                    .iter()
                    .map(|&v| m[u] * m[v] / (ball.dist[v] * ball.dist[v]))
                    .sum()
            },
        )
        .collect();
    Ok(ScoreVector::new(
        format!("gravity[{}]", mass.measure()),
        values,
    ))
}

/// `out_degree * out_strength` per node.
pub fn mass_ods(net: &Network) -> ScoreVector {
    let od = centrality::degree(&GraphView::new(net, ViewKind::DU), Direction::Out);
    let os = centrality::strength(&GraphView::new(net, ViewKind::DW), Direction::Out);
    od.product(&os, "ods").expect("same network")
}

/// `ods * outgoing Katz` per node.
pub fn mass_wk(net: &Network, katz_out_dw: &ScoreVector) -> Result<ScoreVector> {
    mass_ods(net).product(katz_out_dw, "wk")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgcVariant {
    Ods,
    S,
    Sc,
    Sk,
    Wk,
}

impl MgcVariant {
    pub fn id(self) -> &'static str {
        match self {
            MgcVariant::Ods => "mgc_ods",
            MgcVariant::S => "mgc_s",
            MgcVariant::Sc => "mgc_sc",
            MgcVariant::Sk => "mgc_sk",
            MgcVariant::Wk => "mgc_wk",
        }
    }
}

/// Score vectors the MGC variants draw their masses from. Only the one the
/// requested variant needs has to be present.
#[derive(Debug, Default, Clone, Copy)]
pub struct MgcInputs<'a> {
    pub out_strength: Option<&'a ScoreVector>,
    pub sc1: Option<&'a ScoreVector>,
    pub sk3: Option<&'a ScoreVector>,
    pub katz_out_dw: Option<&'a ScoreVector>,
}

fn need<'a>(
    v: Option<&'a ScoreVector>,
    what: &str,
    variant: MgcVariant,
) -> Result<&'a ScoreVector> {
    v.ok_or_else(|| Error::Dependency(format!("{} needs `{what}`", variant.id())))
}

/// Gravity on inverted-weight directed distances with a variant-specific mass.
pub fn mgc(
    net: &Network,
    variant: MgcVariant,
    inputs: MgcInputs,
    cfg: GravityConfig,
) -> Result<ScoreVector> {
    let mass = match variant {
        MgcVariant::Ods => mass_ods(net),
        MgcVariant::S => need(inputs.out_strength, "c_os", variant)?.clone(),
        MgcVariant::Sc => need(inputs.sc1, "sc1", variant)?.clone(),
        MgcVariant::Sk => need(inputs.sk3, "sk3", variant)?.clone(),
        MgcVariant::Wk => mass_wk(net, need(inputs.katz_out_dw, "c_katz_dw_out", variant)?)?,
    };
    let view = GraphView::distances(net, ViewKind::DW);
    Ok(gravity(&view, &mass, cfg)?.renamed(variant.id()))
}

/// Weighted gravitational centrality: mass is the weighted k-shell.
pub fn gc_weighted(net: &Network, cfg: GravityConfig) -> Result<ScoreVector> {
    let wks = centrality::weighted_kshell(net);
    let view = GraphView::distances(net, ViewKind::DW);
    Ok(gravity(&view, &wks, cfg)?.renamed("gc_w"))
}

/// Unweighted, undirected gravitational centrality with k-shell mass.
pub fn gc_unweighted(net: &Network, cfg: GravityConfig) -> Result<ScoreVector> {
    let view = GraphView::new(net, ViewKind::UU);
    let ks = centrality::kshell(&view)?;
    Ok(gravity(&view, &ks, cfg)?.renamed("gc"))
}
