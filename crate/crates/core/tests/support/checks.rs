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

//! Oracle comparisons shared by the integration tests and the acceptance
//! suite. Each check returns a one-line summary or the first mismatch.

use std::time::{Duration, Instant};

use rand::Rng;
use spreadrank::centrality::{self, Direction, IterationConfig, KatzDirection};
use spreadrank::eval;
use spreadrank::gravity::{self, GravityConfig};
use spreadrank::propagation::{exact_spread, spread_all, SimulationConfig, SpreadEstimate};
use spreadrank::{apply_wcs, GraphView, ViewKind};

use super::*;

pub type Check = Result<String, String>;

pub struct SpreadOracleOutcome {
    pub cases: usize,
    pub within: usize,
    pub elapsed: Duration,
    pub worst_z: f64,
}

/// Monte Carlo spread against exact enumeration on random WCS graphs with
/// at most 20 edges. A case is within tolerance when the error is at most
/// four standard errors (or 1e-9 when the standard error is zero).
pub fn spread_oracle(graphs: usize, runs: usize, seed: u64) -> SpreadOracleOutcome {
    let start = Instant::now();
    let mut r = rng(seed);
    let (mut cases, mut within, mut worst_z) = (0, 0, 0.0f64);
    for g in 0..graphs {
        let n = r.random_range(2..=8);
        let net = apply_wcs(&random_small_network(&mut r, n, 20));
        let cfg = SimulationConfig {
            runs,
            master_seed: seed ^ g as u64,
            parallel_width: None,
        };
        let est = spread_all(&net, &cfg).unwrap();
        for u in 0..n {
            let exact = exact_spread(&net, u).unwrap();
            let err = (est.values[u] - exact).abs();
            let tol = (4.0 * est.std_error[u]).max(1e-9);
            cases += 1;
            if err <= tol {
                within += 1;
            }
            if est.std_error[u] > 0.0 {
                worst_z = worst_z.max(err / est.std_error[u]);
            }
        }
    }
    SpreadOracleOutcome {
        cases,
        within,
        elapsed: start.elapsed(),
        worst_z,
    }
}

pub fn kendall_oracle(cases: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    let mut undefined = 0;
    for c in 0..cases {
        let n = r.random_range(2..=200);
        let x = tied_vector(&mut r, n);
        let y = tied_vector(&mut r, n);
        let fast = eval::kendall_tau(&x, &y).ok();
        let slow = kendall_tau_pairs(&x, &y);
        match (fast, slow) {
            (Some(a), Some(b)) => {
                worst = worst.max((a - b).abs());
                if (a - b).abs() > 1e-12 {
                    return Err(format!("case {c}: n={n} tau {a} vs oracle {b}"));
                }
            }
            (None, None) => undefined += 1,
            (a, b) => return Err(format!("case {c}: defined-ness differs ({a:?} vs {b:?})")),
        }
    }
    Ok(format!(
        "{cases} vectors, {undefined} all-tied, max |diff| {worst:e}"
    ))
}

fn spread_of(values: Vec<f64>) -> SpreadEstimate {
    let n = values.len();
    SpreadEstimate {
        values,
        std_error: vec![0.0; n],
        runs: 2,
        master_seed: 0,
    }
}

pub fn ranking_oracles(cases: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for c in 0..cases {
        let n = r.random_range(2..=150);
        let scores = tied_vector(&mut r, n);
        // spreads are at least one node
        let f: Vec<f64> = if c % 2 == 0 {
            tied_vector(&mut r, n).iter().map(|v| 1.0 + v).collect()
        } else {
            (0..n).map(|_| r.random_range(1.0..=n as f64)).collect()
        };
        let m = eval::monotonicity(&scores).unwrap();
        if m != monotonicity(&scores) {
            return Err(format!(
                "case {c}: monotonicity {m} vs {}",
                monotonicity(&scores)
            ));
        }
        let k = r.random_range(1..=n);
        let e = eval::ranking_error(&scores, &spread_of(f.clone()), k).unwrap();
        let o = ranking_error(&scores, &f, k);
        if e != o {
            return Err(format!("case {c}: ranking error {e} vs {o}"));
        }
        if !(0.0..=1.0).contains(&e) {
            return Err(format!("case {c}: ranking error {e} outside [0, 1]"));
        }
    }
    Ok(format!("{cases} cases, exact agreement"))
}

fn exact(name: &str, g: usize, got: &[f64], want: &[f64]) -> Result<(), String> {
    if got != want {
        return Err(format!("graph {g}: {name} {got:?} vs oracle {want:?}"));
    }
    Ok(())
}

fn close(
    name: &str,
    g: usize,
    got: &[f64],
    want: &[f64],
    tol: f64,
    worst: &mut f64,
) -> Result<(), String> {
    let d = max_rel_diff(got, want);
    *worst = worst.max(d);
    if d > tol {
        return Err(format!(
            "graph {g}: {name} off by {d:e}\n  got    {got:?}\n  oracle {want:?}"
        ));
    }
    Ok(())
}

/// Tolerances for the centrality comparison: iterative methods and the
/// floating point sums of path-based ones.
pub const ITERATIVE_TOL: f64 = 1e-8;
pub const SUMMATION_TOL: f64 = 1e-9;

pub fn centrality_oracles(graphs: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let (mut it_worst, mut sum_worst) = (0.0f64, 0.0f64);
    for g in 0..graphs {
        let n = r.random_range(1..=8);
        let p = r.random_range(0.1..0.6);
        let net = random_network(&mut r, n, p);
        let v = |kind| GraphView::new(&net, kind);
        let d = |kind| GraphView::distances(&net, kind);

        // betweenness, all four views
        for (name, view, und, w) in [
            ("betweenness uu", v(ViewKind::UU), true, false),
            ("betweenness uw", d(ViewKind::UW), true, true),
            ("betweenness du", v(ViewKind::DU), false, false),
            ("betweenness dw", d(ViewKind::DW), false, true),
        ] {
            close(
                name,
                g,
                centrality::betweenness(&view).values(),
                &betweenness(&net, und, w),
                SUMMATION_TOL,
                &mut sum_worst,
            )?;
        }

        close(
            "closeness du",
            g,
            centrality::closeness(&v(ViewKind::DU)).values(),
            &closeness(&net, false),
            SUMMATION_TOL,
            &mut sum_worst,
        )?;
        close(
            "closeness dw",
            g,
            centrality::closeness(&d(ViewKind::DW)).values(),
            &closeness(&net, true),
            SUMMATION_TOL,
            &mut sum_worst,
        )?;

        let ev = centrality::eigenvector(&v(ViewKind::UU), IterationConfig::EIGENVECTOR)
            .map_err(|e| format!("graph {g}: eigenvector: {e}"))?;
        close(
            "eigenvector",
            g,
            ev.values(),
            &eigenvector(&net),
            ITERATIVE_TOL,
            &mut it_worst,
        )?;

        for (kind, weighted) in [(ViewKind::DU, false), (ViewKind::DW, true)] {
            let a = adjacency(&net, weighted);
            let alpha = 0.5 / radius_bound(&a).max(1.0);
            for (dir, incoming) in [
                (KatzDirection::Incoming, true),
                (KatzDirection::Outgoing, false),
            ] {
                let k = centrality::katz(&v(kind), dir, alpha, IterationConfig::KATZ)
                    .map_err(|e| format!("graph {g}: katz: {e}"))?;
                close(
                    "katz",
                    g,
                    k.values(),
                    &katz_series(&a, alpha, 60, incoming),
                    ITERATIVE_TOL,
                    &mut it_worst,
                )?;
            }
        }

        let ks = centrality::kshell(&v(ViewKind::UU)).unwrap();
        exact("k-shell", g, ks.values(), &kshell(&net))?;
        let wks = centrality::weighted_kshell(&net);
        exact("weighted k-shell", g, wks.values(), &weighted_kshell(&net))?;

        let cfg = GravityConfig::default();
        let gc = gravity::gc_unweighted(&net, cfg).unwrap();
        close(
            "gc",
            g,
            gc.values(),
            &gravity(&net, ks.values(), 3, true, false),
            SUMMATION_TOL,
            &mut sum_worst,
        )?;
        let gcw = gravity::gc_weighted(&net, cfg).unwrap();
        close(
            "gc_w",
            g,
            gcw.values(),
            &gravity(&net, wks.values(), 3, false, true),
            SUMMATION_TOL,
            &mut sum_worst,
        )?;
        let os = centrality::strength(&v(ViewKind::DW), Direction::Out);
        for radius in 1..=3 {
            let mgc = gravity::gravity(&d(ViewKind::DW), &os, GravityConfig { radius }).unwrap();
            close(
                "gravity",
                g,
                mgc.values(),
                &gravity(&net, os.values(), radius, false, true),
                SUMMATION_TOL,
                &mut sum_worst,
            )?;
        }
    }
    Ok(format!(
        "{graphs} graphs; max rel diff iterative {it_worst:e}, path sums {sum_worst:e}; k-shell and wks exact"
    ))
}

/// Both hop-based neighbourhoods agree with plain BFS.
pub fn neighbourhood_oracle(graphs: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    for g in 0..graphs {
        let n = r.random_range(1..=10);
        let p = r.random_range(0.05..0.5);
        let net = random_network(&mut r, n, p);
        let view = GraphView::new(&net, ViewKind::DW);
        for u in 0..n {
            let h = hops_from(&net, false, u);
            for radius in 1..=4 {
                let mut got = gravity::rhop_neighborhood(&view, u, radius);
                got.sort_unstable();
                let want: Vec<usize> = (0..n).filter(|&v| v != u && h[v] <= radius).collect();
                if got != want {
                    return Err(format!(
                        "graph {g} node {u} r={radius}: {got:?} vs {want:?}"
                    ));
                }
            }
        }
    }
    Ok(format!("{graphs} graphs"))
}

/// Library enumeration against whole-graph enumeration.
pub fn exact_spread_oracle(graphs: usize, seed: u64) -> Check {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for g in 0..graphs {
        let n = r.random_range(1..=7);
        let mut net = random_small_network(&mut r, n, 14);
        if r.random_bool(0.5) {
            net = apply_wcs(&net);
        } else {
            net = net.with_weights(|_| r.random_range(0.01..=1.0)).unwrap();
        }
        for u in 0..n {
            let a = exact_spread(&net, u).unwrap();
            let b = exact_spread_naive(&net, u);
            worst = worst.max((a - b).abs());
            if (a - b).abs() > 1e-12 {
                return Err(format!("graph {g} seed {u}: {a} vs {b}"));
            }
        }
    }
    Ok(format!("{graphs} graphs, max |diff| {worst:e}"))
}
