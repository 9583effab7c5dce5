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

//! Independent Cascade simulation.
//!
//! Every edge weight is read as an activation probability. A cascade starts
//! from a single active seed; each node, in the round it becomes active, gets
//! exactly one attempt per out-edge and activates an inactive neighbour when
//! a uniform draw `r` in `[0, 1)` satisfies `r < P(e)`. The cascade stops
//! when a round activates nobody.
//!
//! Run `i` of seed `s` draws from a ChaCha8 stream keyed by
//! `(master_seed, s)` with stream id `i`, so the estimate does not depend on
//! how runs are scheduled across threads. Per-run sizes are integers and are
//! accumulated exactly before the mean is formed.

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, NodeId};

/// Largest edge count accepted by [`exact_spread`].
pub const EXACT_EDGE_LIMIT: usize = 20;

/// Runs per parallel work item.
const RUN_BLOCK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub runs: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global rayon pool. Never affects results.
    pub parallel_width: Option<usize>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            runs: 20_000,
            master_seed: 0,
            parallel_width: None,
        }
    }
}

/// Mean and standard error of the cascade size for one seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadSample {
    pub mean: f64,
    pub std_error: f64,
}

/// Per-node expected spread (seed included).
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadEstimate {
    pub values: Vec<f64>,
    pub std_error: Vec<f64>,
    pub runs: usize,
    pub master_seed: u64,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    sum: u64,
    sum_sq: u64,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        Moments {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn sample(self, runs: usize) -> SpreadSample {
        let n = runs as f64;
        let mean = self.sum as f64 / n;
        // Exact integer arithmetic for the centred sum of squares.
        let centred = self.sum_sq as f64 - (self.sum as f64) * (self.sum as f64) / n;
        let var = (centred / (n - 1.0)).max(0.0);
        SpreadSample {
            mean,
            std_error: (var / n).sqrt(),
        }
    }
}

fn check_probabilities(net: &Network) -> Result<()> {
    if let Some(e) = net.edges().iter().find(|e| e.weight > 1.0) {
        return Err(Error::Validation(format!(
            "edge ({}, {}) has weight {} which is not a probability",
            e.source, e.target, e.weight
        )));
    }
    Ok(())
}

fn check_runs(runs: usize) -> Result<()> {
    if runs < 2 {
        return Err(Error::Parameter(format!(
            "at least 2 runs are needed for a standard error, got {runs}"
        )));
    }
    Ok(())
}

fn run_rng(master_seed: u64, seed_node: NodeId, run: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(seed_node as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(run as u64);
    rng
}

/// Worker-local scratch for repeated cascades on one network.
struct Cascade {
    stamp: Vec<u32>,
    generation: u32,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
}

impl Cascade {
    fn new(n: usize) -> Self {
        Cascade {
            stamp: vec![0; n],
            generation: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn run(&mut self, net: &Network, seed: NodeId, rng: &mut ChaCha8Rng) -> u64 {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        let gen = self.generation;
        self.stamp[seed] = gen;
        self.frontier.clear();
        self.frontier.push(seed);
        let mut active = 1u64;
        while !self.frontier.is_empty() {
            self.next.clear();
            for &u in &self.frontier {
                for e in net.out_edges(u) {
                    if self.stamp[e.target] == gen {
                        continue;
                    }
                    let r: f64 = rng.random();
                    if r < e.weight {
                        self.stamp[e.target] = gen;
                        self.next.push(e.target);
                        active += 1;
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        active
    }
}

fn simulate_block(
    net: &Network,
    seed: NodeId,
    master_seed: u64,
    runs: std::ops::Range<usize>,
) -> Moments {
    let mut cascade = Cascade::new(net.node_count());
    let mut m = Moments::default();
    for run in runs {
        let mut rng = run_rng(master_seed, seed, run);
        let size = cascade.run(net, seed, &mut rng);
        m.sum += size;
        m.sum_sq += size * size;
    }
    m
}

fn blocks(runs: usize) -> impl Iterator<Item = std::ops::Range<usize>> {
    (0..runs)
        .step_by(RUN_BLOCK)
        .map(move |start| start..(start + RUN_BLOCK).min(runs))
}

fn with_pool<T: Send>(width: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match width {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Monte Carlo estimate of the expected cascade size from `seed_node`.
pub fn simulate_ic(
    net: &Network,
    seed_node: NodeId,
    cfg: &SimulationConfig,
) -> Result<SpreadSample> {
    check_probabilities(net)?;
    check_runs(cfg.runs)?;
    if seed_node >= net.node_count() {
        return Err(Error::Validation(format!(
            "seed node {seed_node} out of range"
        )));
    }
    let ranges: Vec<_> = blocks(cfg.runs).collect();
    let moments = with_pool(cfg.parallel_width, || {
        ranges
            .into_par_iter()
            .map(|r| simulate_block(net, seed_node, cfg.master_seed, r))
            .reduce(Moments::default, Moments::merge)
    })?;
    Ok(moments.sample(cfg.runs))
}

/// [`simulate_ic`] for every node as single seed.
pub fn spread_all(net: &Network, cfg: &SimulationConfig) -> Result<SpreadEstimate> {
    spread_all_with_progress(net, cfg, &|_, _| {})
}

/// Like [`spread_all`], calling `progress(done, total)` as seeds complete.
pub fn spread_all_with_progress(
    net: &Network,
    cfg: &SimulationConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SpreadEstimate> {
    check_probabilities(net)?;
    check_runs(cfg.runs)?;
    let n = net.node_count();
    let per_seed: Vec<_> = blocks(cfg.runs).collect();
    let remaining: Vec<AtomicUsize> = (0..n).map(|_| AtomicUsize::new(per_seed.len())).collect();
    let done = AtomicUsize::new(0);

    let work: Vec<(NodeId, std::ops::Range<usize>)> = (0..n)
        .flat_map(|u| per_seed.iter().cloned().map(move |r| (u, r)))
        .collect();
    let partial: Vec<Moments> = with_pool(cfg.parallel_width, || {
        work.into_par_iter()
            .map(|(u, r)| {
                let m = simulate_block(net, u, cfg.master_seed, r);
                if remaining[u].fetch_sub(1, Ordering::AcqRel) == 1 {
                    progress(done.fetch_add(1, Ordering::AcqRel) + 1, n);
                }
                m
            })
            .collect()
    })?;

    let mut values = Vec::with_capacity(n);
    let mut std_error = Vec::with_capacity(n);
    for chunk in partial.chunks(per_seed.len()) {
        let s = chunk
            .iter()
            .fold(Moments::default(), |a, &b| a.merge(b))
            .sample(cfg.runs);
        values.push(s.mean);
        std_error.push(s.std_error);
    }
    Ok(SpreadEstimate {
        values,
        std_error,
        runs: cfg.runs,
        master_seed: cfg.master_seed,
    })
}

/// Exact expected spread by enumerating every live-edge outcome.
///
/// Only edges whose source is reachable from the seed can influence the
/// outcome, so the enumeration runs over those. Networks with more than
/// [`EXACT_EDGE_LIMIT`] edges are rejected.
pub fn exact_spread(net: &Network, seed_node: NodeId) -> Result<f64> {
    if net.edge_count() > EXACT_EDGE_LIMIT {
        return Err(Error::Capacity {
            edges: net.edge_count(),
            limit: EXACT_EDGE_LIMIT,
        });
    }
    check_probabilities(net)?;
    if seed_node >= net.node_count() {
        return Err(Error::Validation(format!(
            "seed node {seed_node} out of range"
        )));
    }

    // local ids for nodes reachable from the seed
    let mut local = vec![usize::MAX; net.node_count()];
    let mut order = vec![seed_node];
    local[seed_node] = 0;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for e in net.out_edges(u) {
            if local[e.target] == usize::MAX {
                local[e.target] = order.len();
                order.push(e.target);
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = net
        .edges()
        .iter()
        .filter(|e| local[e.source] != usize::MAX)
        .map(|e| (local[e.source], local[e.target], e.weight))
        .collect();

    let m = edges.len();
    let k = order.len();
    let mut adj = vec![0u32; k];
    let mut expected = 0.0;
    for mask in 0u32..(1u32 << m) {
        let mut p = 1.0;
        adj.iter_mut().for_each(|a| *a = 0);
        for (j, &(s, t, w)) in edges.iter().enumerate() {
            if mask >> j & 1 == 1 {
                p *= w;
                adj[s] |= 1 << t;
            } else {
                p *= 1.0 - w;
            }
        }
        if p == 0.0 {
            continue;
        }
        let mut reached = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[b];
            }
            frontier = next & !reached;
            reached |= next;
        }
        expected += p * reached.count_ones() as f64;
    }
    Ok(expected)
}

impl SpreadEstimate {
    /// CSV with header `node,expected_spread,std_error,runs,master_seed`,
    /// preceded by `# key` comment lines.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "node,expected_spread,std_error,runs,master_seed")?;
        for (u, (v, se)) in self.values.iter().zip(&self.std_error).enumerate() {
            writeln!(w, "{u},{v},{se},{},{}", self.runs, self.master_seed)?;
        }
        Ok(())
    }

    /// Returns the estimate and its comment lines (without the `# `).
    pub fn read_csv<R: BufRead>(r: R) -> Result<(SpreadEstimate, Vec<String>)> {
        let mut comments = Vec::new();
        let mut values = Vec::new();
        let mut std_error = Vec::new();
        let mut runs = 0;
        let mut master_seed = 0;
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim();
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            if line.is_empty() || line.starts_with("node,") {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::parse(lineno, "expected 5 columns"));
            }
            let bad = |what: &str| Error::parse(lineno, format!("bad {what}"));
            let node: usize = cols[0].parse().map_err(|_| bad("node"))?;
            if node != values.len() {
                return Err(Error::parse(lineno, "node ids must be consecutive"));
            }
            values.push(cols[1].parse().map_err(|_| bad("expected_spread"))?);
            std_error.push(cols[2].parse().map_err(|_| bad("std_error"))?);
            runs = cols[3].parse().map_err(|_| bad("runs"))?;
            master_seed = cols[4].parse().map_err(|_| bad("master_seed"))?;
        }
        Ok((
            SpreadEstimate {
                values,
                std_error,
                runs,
                master_seed,
            },
            comments,
        ))
    }
}
