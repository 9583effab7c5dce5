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

//! Reference implementations used as test oracles. They favour obviously
//! correct definitions over speed and share no code with the library
//! beyond the `Network` container.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod checks;

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadrank::Network;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed graph on `n` nodes, each ordered pair present with probability
/// `p`, weights uniform in `[0.05, 1]`.
pub fn random_network(rng: &mut impl Rng, n: usize, p: f64) -> Network {
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                edges.push((s, t, rng.random_range(0.05..=1.0)));
            }
        }
    }
    Network::new(n, edges, true).unwrap()
}

/// Directed graph with at most `max_edges` edges.
pub fn random_small_network(rng: &mut impl Rng, n: usize, max_edges: usize) -> Network {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect();
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.random_range(0..=i));
    }
    let m = rng.random_range(0..=max_edges.min(pairs.len()));
    Network::new(n, pairs[..m].iter().map(|&(s, t)| (s, t, 1.0)), true).unwrap()
}

/// Weight matrix `w[s][t]` (0 for no edge). Undirected views take the
/// larger weight of a reciprocal pair.
pub fn weight_matrix(net: &Network, undirected: bool) -> Vec<Vec<f64>> {
    let n = net.node_count();
    let mut w = vec![vec![0.0; n]; n];
    for e in net.edges() {
        w[e.source][e.target] = e.weight;
    }
    if undirected {
        for s in 0..n {
            for t in 0..n {
                let m = w[s][t].max(w[t][s]);
                w[s][t] = m;
                w[t][s] = m;
            }
        }
    }
    w
}

/// Edge lengths for distance computations: `None` for no edge.
pub fn lengths(net: &Network, undirected: bool, weighted: bool) -> Vec<Vec<Option<f64>>> {
    weight_matrix(net, undirected)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|w| (w > 0.0).then(|| if weighted { 1.0 / w } else { 1.0 }))
                .collect()
        })
        .collect()
}

/// All-pairs shortest path lengths restricted to `allowed` nodes.
pub fn floyd_warshall(len: &[Vec<Option<f64>>], allowed: &[bool]) -> Vec<Vec<f64>> {
    let n = len.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        if !allowed[i] {
            continue;
        }
        d[i][i] = 0.0;
        for j in 0..n {
            if let (true, Some(l)) = (allowed[j], len[i][j]) {
                d[i][j] = d[i][j].min(l);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Betweenness by enumerating every simple path between every pair and
/// keeping the shortest ones. Undirected graphs count unordered pairs.
pub fn betweenness(net: &Network, undirected: bool, weighted: bool) -> Vec<f64> {
    let n = net.node_count();
    let len = lengths(net, undirected, weighted);
    let dist = floyd_warshall(&len, &vec![true; n]);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || !dist[s][t].is_finite() {
                continue;
            }
            let mut through = vec![0u64; n];
            let mut total = 0u64;
            let mut path = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            enumerate_paths(
                &len,
                t,
                dist[s][t],
                0.0,
                &mut path,
                &mut on_path,
                &mut |p| {
                    total += 1;
                    for &v in &p[1..p.len() - 1] {
                        through[v] += 1;
                    }
                },
            );
            for v in 0..n {
                bc[v] += through[v] as f64 / total as f64;
            }
        }
    }
    if undirected {
        bc.iter_mut().for_each(|b| *b /= 2.0);
    }
    bc
}

fn enumerate_paths(
    len: &[Vec<Option<f64>>],
    target: usize,
    best: f64,
    so_far: f64,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    visit: &mut dyn FnMut(&[usize]),
) {
    let u = *path.last().unwrap();
    if u == target {
        if same_length(so_far, best) {
            visit(path);
        }
        return;
    }
    for v in 0..len.len() {
        if let (false, Some(l)) = (on_path[v], len[u][v]) {
            let d = so_far + l;
            if d > best && !same_length(d, best) {
                continue;
            }
            path.push(v);
            on_path[v] = true;
            enumerate_paths(len, target, best, d, path, on_path, visit);
            on_path[v] = false;
            path.pop();
        }
    }
}

/// Outbound closeness scaled by the reachable fraction.
pub fn closeness(net: &Network, weighted: bool) -> Vec<f64> {
    let n = net.node_count();
    let dist = floyd_warshall(&lengths(net, false, weighted), &vec![true; n]);
    (0..n)
        .map(|u| {
            let reach: Vec<f64> = (0..n)
                .filter(|&v| v != u && dist[u][v].is_finite())
                .map(|v| dist[u][v])
                .collect();
            if reach.is_empty() {
                return 0.0;
            }
            let r = reach.len() as f64;
            (r / (n - 1) as f64) * (r / reach.iter().sum::<f64>())
        })
        .collect()
}

/// Projection of the all-ones vector onto the leading eigenspace of the
/// undirected unit adjacency matrix, normalized to unit length.
pub fn eigenvector(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    let w = weight_matrix(net, true);
    let a = DMatrix::from_fn(n, n, |i, j| if w[i][j] > 0.0 { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(a);
    let top: f64 = eig.eigenvalues.max();
    let mut x = DVector::zeros(n);
    let ones = DVector::from_element(n, 1.0);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let lambda: f64 = lambda;
        if (lambda - top).abs() < 1e-9 {
            let v = eig.eigenvectors.column(k);
            x += v * v.dot(&ones);
        }
    }
    let norm = x.norm();
    x.iter().map(|v| v / norm).collect()
}

/// Dense adjacency matrix (`a[s][t]` = weight of `s -> t`).
pub fn adjacency(net: &Network, weighted: bool) -> DMatrix<f64> {
    let w = weight_matrix(net, false);
    let n = net.node_count();
    DMatrix::from_fn(n, n, |i, j| match (w[i][j] > 0.0, weighted) {
        (false, _) => 0.0,
        (true, true) => w[i][j],
        (true, false) => 1.0,
    })
}

/// Truncated Katz series `sum_{k=1..terms} alpha^k A^k`, then column sums
/// (incoming) or row sums (outgoing).
pub fn katz_series(a: &DMatrix<f64>, alpha: f64, terms: usize, incoming: bool) -> Vec<f64> {
    let n = a.nrows();
    let mut power = DMatrix::identity(n, n);
    let mut total = DMatrix::zeros(n, n);
    for _ in 0..terms {
        power = &power * a * alpha;
        total += &power;
    }
    if incoming {
        (0..n).map(|j| total.column(j).sum()).collect()
    } else {
        (0..n).map(|i| total.row(i).sum()).collect()
    }
}

/// Upper bound on the spectral radius: the smaller of the largest row and
/// column sums.
pub fn radius_bound(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let row = (0..n).map(|i| a.row(i).sum()).fold(0.0, f64::max);
    let col = (0..n).map(|j| a.column(j).sum()).fold(0.0, f64::max);
    row.min(col)
}

/// Largest `k` such that `u` belongs to the k-core, found by computing
/// every k-core from scratch.
pub fn kshell(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    let w = weight_matrix(net, true);
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| w[u][v] > 0.0).collect())
        .collect();
    let mut shell = vec![0.0; n];
    for k in 1..n {
        let mut alive = vec![true; n];
        loop {
            let drop: Vec<usize> = (0..n)
                .filter(|&u| alive[u] && adj[u].iter().filter(|&&v| alive[v]).count() < k)
                .collect();
            if drop.is_empty() {
                break;
            }
            for u in drop {
                alive[u] = false;
            }
        }
        // definitional check of the core just built
        for u in (0..n).filter(|&u| alive[u]) {
            assert!(adj[u].iter().filter(|&&v| alive[v]).count() >= k);
            shell[u] = k as f64;
        }
    }
    shell
}

/// Weighted k-shell by quadratic peeling: always remove the lowest-level
/// remaining node (smallest id on ties) and rescan everything.
pub fn weighted_kshell(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    let w = weight_matrix(net, false);
    let kp = |u: usize, alive: &[bool]| {
        let (k, s) = (0..n)
            .filter(|&v| alive[v] && w[u][v] > 0.0)
            .fold((0.0, 0.0), |(k, s), v| (k + 1.0, s + w[u][v]));
        (k * s).sqrt()
    };
    let all = vec![true; n];
    let max = (0..n).map(|u| kp(u, &all)).fold(0.0, f64::max);
    if max == 0.0 {
        return vec![0.0; n];
    }
    let level = |x: f64| (x * n as f64 / max).floor();
    let mut alive = vec![true; n];
    let mut shell = vec![0.0; n];
    let mut current = 0.0f64;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&u| alive[u])
            .min_by(|&a, &b| {
                level(kp(a, &alive))
                    .total_cmp(&level(kp(b, &alive)))
                    .then(a.cmp(&b))
            })
            .unwrap();
        current = current.max(level(kp(u, &alive)));
        shell[u] = current;
        alive[u] = false;
    }
    shell
}

/// Hop distance from `u` along out-edges (usize::MAX when unreachable).
pub fn hops_from(net: &Network, undirected: bool, u: usize) -> Vec<usize> {
    let n = net.node_count();
    let w = weight_matrix(net, undirected);
    let mut h = vec![usize::MAX; n];
    h[u] = 0;
    let mut q = VecDeque::from([u]);
    while let Some(v) = q.pop_front() {
        for t in 0..n {
            if w[v][t] > 0.0 && h[t] == usize::MAX {
                h[t] = h[v] + 1;
                q.push_back(t);
            }
        }
    }
    h
}

/// Gravity straight from its definition: every pair within `r` hops,
/// distance measured inside the ball around the source.
pub fn gravity(
    net: &Network,
    mass: &[f64],
    r: usize,
    undirected: bool,
    weighted: bool,
) -> Vec<f64> {
    let n = net.node_count();
    let len = lengths(net, undirected, weighted);
    (0..n)
        .map(|u| {
            let h = hops_from(net, undirected, u);
            let ball: Vec<bool> = h.iter().map(|&x| x <= r).collect();
            let d = floyd_warshall(&len, &ball);
            (0..n)
                .filter(|&v| v != u && ball[v])
                .map(|v| mass[u] * mass[v] / (d[u][v] * d[u][v]))
                .sum()
        })
        .collect()
}

/// Expected spread by enumerating all `2^m` live-edge outcomes of the whole
/// graph.
pub fn exact_spread_naive(net: &Network, seed: usize) -> f64 {
    let n = net.node_count();
    let edges = net.edges();
    let m = edges.len();
    assert!(m <= 22, "too many edges for the naive oracle");
    let mut expected = 0.0;
    for mask in 0u32..(1u32 << m) {
        let mut p = 1.0;
        for (i, e) in edges.iter().enumerate() {
            p *= if mask >> i & 1 == 1 {
                e.weight
            } else {
                1.0 - e.weight
            };
        }
        if p == 0.0 {
            continue;
        }
        let mut seen = vec![false; n];
        seen[seed] = true;
        let mut stack = vec![seed];
        while let Some(v) = stack.pop() {
            for (i, e) in edges.iter().enumerate() {
                if e.source == v && mask >> i & 1 == 1 && !seen[e.target] {
                    seen[e.target] = true;
                    stack.push(e.target);
                }
            }
        }
        expected += p * seen.iter().filter(|&&s| s).count() as f64;
    }
    expected
}

/// Kendall tau-b by visiting every pair.
pub fn kendall_tau_pairs(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                tx += 1;
            }
            if dy == 0.0 {
                ty += 1;
            }
            if dx != 0.0 && dy != 0.0 {
                if (dx > 0.0) == (dy > 0.0) {
                    conc += 1;
                } else {
                    disc += 1;
                }
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    if tx == n0 || ty == n0 {
        return None;
    }
    Some((conc - disc) as f64 / (((n0 - tx) as f64) * ((n0 - ty) as f64)).sqrt())
}

/// Ranking error by repeated selection of the best remaining node.
pub fn ranking_error(scores: &[f64], spread: &[f64], k: usize) -> f64 {
    fn pick(values: &[f64], k: usize) -> Vec<usize> {
        let mut taken = vec![false; values.len()];
        let mut out = Vec::new();
        for _ in 0..k {
            let mut best: Option<usize> = None;
            for u in 0..values.len() {
                if taken[u] {
                    continue;
                }
                if best.map_or(true, |b| values[u] > values[b]) {
                    best = Some(u);
                }
            }
            let b = best.unwrap();
            taken[b] = true;
            out.push(b);
        }
        out
    }
    // sum in descending order on both sides, as floating point addition
    // is order dependent
    let total = |set: Vec<usize>| {
        let mut v: Vec<f64> = set.iter().map(|&u| spread[u]).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v.iter().sum::<f64>()
    };
    1.0 - total(pick(scores, k)) / total(pick(spread, k))
}

/// Monotonicity from ordered tied pairs counted directly.
pub fn monotonicity(scores: &[f64]) -> f64 {
    let n = scores.len();
    let key = |v: f64| (v * 1e12).round() / 1e12;
    let mut tied = 0u64;
    for i in 0..n {
        for j in 0..n {
            if i != j && key(scores[i]) == key(scores[j]) {
                tied += 1;
            }
        }
    }
    (1.0 - tied as f64 / (n as f64 * (n as f64 - 1.0))).powi(2)
}

/// Random score vector of length `n` drawn from a small value set so that
/// ties are common.
pub fn tied_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let levels = rng.random_range(1..=n.max(2));
    (0..n)
        .map(|_| rng.random_range(0..levels) as f64 * 0.5)
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest difference relative to `max(1, |expected|)`.
pub fn max_rel_diff(actual: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    actual
        .iter()
        .zip(expected)
        .map(|(a, e)| (a - e).abs() / e.abs().max(1.0))
        .fold(0.0, f64::max)
}
