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

//! The four ways of reading a network: (un)directed x (un)weighted.
//!
//! Undirected views merge `u -> v` and `v -> u` into one edge `{u, v}` that
//! keeps the larger of the two weights, and expose it in both directions.

use crate::graph::{Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViewKind {
    /// undirected, unweighted
    UU,
    /// undirected, weighted
    UW,
    /// directed, unweighted
    DU,
    /// directed, weighted
    DW,
}

impl ViewKind {
    pub fn is_directed(self) -> bool {
        matches!(self, ViewKind::DU | ViewKind::DW)
    }

    pub fn is_weighted(self) -> bool {
        matches!(self, ViewKind::UW | ViewKind::DW)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    AsIs,
    Unit,
    /// `1 / w`, turning probabilities into distances.
    Inverted,
}

#[derive(Debug, Clone)]
pub struct GraphView<'a> {
    base: &'a Network,
    kind: ViewKind,
    weight_mode: WeightMode,
    out: Vec<Vec<(NodeId, f64)>>,
    inc: Vec<Vec<(NodeId, f64)>>,
}

impl<'a> GraphView<'a> {
    /// View with the natural weight mode for `kind`: as-is for weighted
    /// kinds, unit for unweighted ones.
    pub fn new(base: &'a Network, kind: ViewKind) -> Self {
        let mode = if kind.is_weighted() {
            WeightMode::AsIs
        } else {
            WeightMode::Unit
        };
        Self::with_mode(base, kind, mode)
    }

    /// Distance view: weighted kinds report `1 / w`, unweighted kinds stay unit.
    pub fn distances(base: &'a Network, kind: ViewKind) -> Self {
        let mode = if kind.is_weighted() {
            WeightMode::Inverted
        } else {
            WeightMode::Unit
        };
        Self::with_mode(base, kind, mode)
    }

    pub fn with_mode(base: &'a Network, kind: ViewKind, weight_mode: WeightMode) -> Self {
        let n = base.node_count();
        let weigh = |w: f64| match weight_mode {
            WeightMode::AsIs => w,
            WeightMode::Unit => 1.0,
            WeightMode::Inverted => 1.0 / w,
        };
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        if kind.is_directed() {
            for e in base.edges() {
                let w = weigh(e.weight);
                out[e.source].push((e.target, w));
                inc[e.target].push((e.source, w));
            }
        } else {
            let mut pairs: Vec<(NodeId, NodeId, f64)> = base
                .edges()
                .iter()
                .map(|e| (e.source.min(e.target), e.source.max(e.target), e.weight))
                .collect();
            pairs.sort_by_key(|p| (p.0, p.1));
            let mut merged: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(pairs.len());
            for (a, b, w) in pairs {
                match merged.last_mut() {
                    Some(last) if last.0 == a && last.1 == b => last.2 = last.2.max(w),
                    _ => merged.push((a, b, w)),
                }
            }
            for (a, b, w) in merged {
                let w = weigh(w);
                out[a].push((b, w));
                out[b].push((a, w));
            }
            inc.clone_from(&out);
        }
        GraphView {
            base,
            kind,
            weight_mode,
            out,
            inc,
        }
    }

    pub fn base(&self) -> &'a Network {
        self.base
    }

    pub fn kind(&self) -> ViewKind {
        self.kind
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn is_directed(&self) -> bool {
        self.kind.is_directed()
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    /// Outgoing `(neighbour, weight)` pairs; all neighbours on undirected views.
    pub fn out_neighbors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.out[u]
    }

    /// Incoming `(neighbour, weight)` pairs; all neighbours on undirected views.
    pub fn in_neighbors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.inc[u]
    }

    /// Every traversable arc. Undirected edges appear once per direction.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&(v, w)| (u, v, w)))
    }
}
