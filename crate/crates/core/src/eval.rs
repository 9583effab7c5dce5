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

//! Ranking quality of a centrality measure against simulated spread.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::propagation::SpreadEstimate;

/// Measure every τ is divided by.
pub const TAU_BASELINE: &str = "c_od";
/// Measure every ε is divided by.
pub const EPSILON_BASELINE: &str = "c_os";
/// Datasets smaller than this are left out of the ε aggregate.
pub const MIN_NODES_FOR_EPSILON: usize = 100;
pub const AGGREGATE_ROW: &str = "__geomean__";

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation(format!(
            "`{name}` contains non-finite values"
        )));
    }
    Ok(())
}

fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("finite values")
}

/// Sum of `t(t-1)/2` over runs of equal values in a sorted sequence.
fn tied_pairs<T: PartialEq>(sorted: impl IntoIterator<Item = T>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for item in sorted {
        if prev.as_ref() == Some(&item) {
            run += 1;
        } else {
            total += run * (run + 1) / 2;
            run = 0;
        }
        prev = Some(item);
    }
    total + run * (run + 1) / 2
}

/// Sorts `idx` by `key` with a stable merge sort and returns the number of
/// inversions (pairs moved past each other).
fn merge_count(idx: &mut [usize], key: &[f64], buf: &mut [usize]) -> u64 {
    let n = idx.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut idx[..mid], key, &mut buf[..mid])
        + merge_count(&mut idx[mid..], key, &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if cmp(key[idx[j]], key[idx[i]]) == Ordering::Less {
            buf[k] = idx[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = idx[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&idx[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&idx[j..n]);
    idx.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's τ-b in `O(n log n)`.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Validation(format!(
            "rankings differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let n = x.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation(
            "Kendall tau needs at least two items",
        ));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cmp(x[a], x[b]).then(cmp(y[a], y[b])));

    let ties_x = tied_pairs(idx.iter().map(|&i| x[i]));
    let ties_xy = tied_pairs(idx.iter().map(|&i| (x[i], y[i])));

    let mut buf = vec![0; n];
    let discordant = merge_count(&mut idx, y, &mut buf);
    let ties_y = tied_pairs(idx.iter().map(|&i| y[i]));

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    if ties_x == n0 || ties_y == n0 {
        return Err(Error::UndefinedCorrelation("a ranking has all values tied"));
    }
    // concordant - discordant, both over pairs untied in x and y
    let numer =
        n0 as i128 - ties_x as i128 - ties_y as i128 + ties_xy as i128 - 2 * discordant as i128;
    let denom = (((n0 - ties_x) as f64) * ((n0 - ties_y) as f64)).sqrt();
    Ok(numer as f64 / denom)
}

/// The `k` best nodes: descending value, ties by ascending id.
pub fn top_k(values: &[f64], k: usize) -> Vec<NodeId> {
    let mut idx: Vec<NodeId> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| cmp(values[b], values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// `1 - spread(top-k by scores) / spread(top-k by spread)`.
pub fn ranking_error(scores: &[f64], spread: &SpreadEstimate, k: usize) -> Result<f64> {
    let f = &spread.values;
    if scores.len() != f.len() {
        return Err(Error::Validation(format!(
            "{} scores for {} spread values",
            scores.len(),
            f.len()
        )));
    }
    check_finite("scores", scores)?;
    check_finite("spread", f)?;
    if k == 0 || k > f.len() {
        return Err(Error::Parameter(format!(
            "top-k must be in 1..={}, got {k}",
            f.len()
        )));
    }
    // Both sums run over descending spread so that rounding can never make
    // the captured mass exceed the optimum.
    let mut captured: Vec<f64> = top_k(scores, k).iter().map(|&u| f[u]).collect();
    captured.sort_by(|a, b| cmp(*b, *a));
    let captured: f64 = captured.iter().sum();
    let best: f64 = top_k(f, k).iter().map(|&u| f[u]).sum();
    Ok(1.0 - captured / best)
}

/// Score rounded to 12 decimals, as an exact key for rank classes.
fn rank_key(v: f64) -> u64 {
    let r = (v * 1e12).round() / 1e12;
    // fold -0.0 into 0.0
    (r + 0.0).to_bits()
}

/// `(1 - sum_r |V_r| (|V_r| - 1) / (n (n - 1)))^2` over rank classes.
pub fn monotonicity(scores: &[f64]) -> Result<f64> {
    check_finite("scores", scores)?;
    let n = scores.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation(
            "monotonicity needs at least two items",
        ));
    }
    let mut classes: HashMap<u64, u64> = HashMap::new();
    for &v in scores {
        *classes.entry(rank_key(v)).or_default() += 1;
    }
    let tied: u64 = classes.values().map(|&c| c * (c - 1)).sum();
    let frac = tied as f64 / (n as f64 * (n as f64 - 1.0));
    Ok((1.0 - frac).powi(2))
}

/// Metrics for one measure on one dataset. `None` marks an undefined value.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRecord {
    pub measure: String,
    pub tau: Option<f64>,
    pub tau_norm: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_norm: Option<f64>,
    pub monotonicity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub dataset: String,
    pub node_count: usize,
    pub density: f64,
    pub records: Vec<MeasureRecord>,
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedCorrelation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn ratio(v: Option<f64>, base: Option<f64>) -> Option<f64> {
    match (v, base) {
        (Some(v), Some(b)) if b != 0.0 => Some(v / b),
        _ => None,
    }
}

/// Scores every measure against `spread`. The baselines `c_od` and `c_os`
/// must be among `measures`. `top_k` is clipped to the node count.
pub fn evaluate(
    dataset: &str,
    density: f64,
    spread: &SpreadEstimate,
    measures: &[(&str, &[f64])],
    top_k: usize,
) -> Result<EvaluationReport> {
    let n = spread.values.len();
    let k = top_k.min(n);
    let mut records = Vec::with_capacity(measures.len());
    for &(name, scores) in measures {
        records.push(MeasureRecord {
            measure: name.to_string(),
            tau: defined(kendall_tau(scores, &spread.values))?,
            tau_norm: None,
            epsilon: Some(ranking_error(scores, spread, k)?),
            epsilon_norm: None,
            monotonicity: defined(monotonicity(scores))?,
        });
    }
    let base = |id: &str| {
        records
            .iter()
            .find(|r| r.measure == id)
            .cloned()
            .ok_or_else(|| Error::Dependency(format!("evaluation needs baseline `{id}`")))
    };
    let tau_base = base(TAU_BASELINE)?.tau;
    let eps_base = base(EPSILON_BASELINE)?.epsilon;
    for r in &mut records {
        r.tau_norm = ratio(r.tau, tau_base);
        r.epsilon_norm = ratio(r.epsilon, eps_base);
    }
    Ok(EvaluationReport {
        dataset: dataset.to_string(),
        node_count: n,
        density,
        records,
    })
}

/// Geometric mean of absolute values; `None` if there are none.
pub fn geometric_mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut count = 0usize;
    let mut log_sum = 0.0;
    for v in values {
        count += 1;
        log_sum += v.abs().ln();
    }
    (count > 0).then(|| (log_sum / count as f64).exp())
}

/// Per-measure geometric means across datasets. ε columns skip datasets
/// with fewer than [`MIN_NODES_FOR_EPSILON`] nodes.
pub fn aggregate(reports: &[EvaluationReport]) -> EvaluationReport {
    let mut order: Vec<&str> = Vec::new();
    for rep in reports {
        for r in &rep.records {
            if !order.contains(&r.measure.as_str()) {
                order.push(&r.measure);
            }
        }
    }
    let column = |measure: &str, eps: bool, get: fn(&MeasureRecord) -> Option<f64>| {
        geometric_mean(
            reports
                .iter()
                .filter(|rep| !eps || rep.node_count >= MIN_NODES_FOR_EPSILON)
                .flat_map(|rep| rep.records.iter().filter(|r| r.measure == measure))
                .filter_map(get),
        )
    };
    let records = order
        .iter()
        .map(|&m| MeasureRecord {
            measure: m.to_string(),
            tau: column(m, false, |r| r.tau),
            tau_norm: column(m, false, |r| r.tau_norm),
            epsilon: column(m, true, |r| r.epsilon),
            epsilon_norm: column(m, true, |r| r.epsilon_norm),
            monotonicity: column(m, false, |r| r.monotonicity),
        })
        .collect();
    EvaluationReport {
        dataset: AGGREGATE_ROW.to_string(),
        node_count: reports.iter().map(|r| r.node_count).sum(),
        density: geometric_mean(reports.iter().map(|r| r.density)).unwrap_or(0.0),
        records,
    }
}

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn parse_opt(s: &str, lineno: usize) -> Result<Option<f64>> {
    if s == "NA" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::parse(lineno, format!("bad number `{s}`")))
}

pub const REPORT_HEADER: &str = "dataset,measure,tau,tau_norm,epsilon,epsilon_norm,monotonicity";
pub const SCATTER_HEADER: &str = "dataset,density,measure,metric,value";

impl EvaluationReport {
    /// Report CSV. A `# dataset=.. nodes=.. density=..` line precedes any
    /// extra comments so that [`EvaluationReport::read_csv`] can rebuild it.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<()> {
        writeln!(
            w,
            "# dataset={} nodes={} density={}",
            self.dataset, self.node_count, self.density
        )?;
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{REPORT_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                self.dataset,
                r.measure,
                fmt(r.tau),
                fmt(r.tau_norm),
                fmt(r.epsilon),
                fmt(r.epsilon_norm),
                fmt(r.monotonicity)
            )?;
        }
        Ok(())
    }

    /// Returns the report and its comment lines (without the `# `).
    pub fn read_csv<R: BufRead>(r: R) -> Result<(EvaluationReport, Vec<String>)> {
        let mut comments = Vec::new();
        let mut report = EvaluationReport {
            dataset: String::new(),
            node_count: 0,
            density: 0.0,
            records: Vec::new(),
        };
        let mut have_meta = false;
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let line = line.trim();
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if c.starts_with("dataset=") && !have_meta {
                    for kv in c.split_whitespace() {
                        match kv.split_once('=') {
                            Some(("dataset", v)) => report.dataset = v.to_string(),
                            Some(("nodes", v)) => {
                                report.node_count =
                                    v.parse().map_err(|_| Error::parse(lineno, "bad nodes"))?
                            }
                            Some(("density", v)) => {
                                report.density =
                                    v.parse().map_err(|_| Error::parse(lineno, "bad density"))?
                            }
                            _ => {}
                        }
                    }
                    have_meta = true;
                } else {
                    comments.push(c.to_string());
                }
                continue;
            }
            if line.is_empty() || line == REPORT_HEADER {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 7 {
                return Err(Error::parse(lineno, "expected 7 columns"));
            }
            report.records.push(MeasureRecord {
                measure: cols[1].to_string(),
                tau: parse_opt(cols[2], lineno)?,
                tau_norm: parse_opt(cols[3], lineno)?,
                epsilon: parse_opt(cols[4], lineno)?,
                epsilon_norm: parse_opt(cols[5], lineno)?,
                monotonicity: parse_opt(cols[6], lineno)?,
            });
        }
        if !have_meta {
            return Err(Error::parse(1, "missing `# dataset=` line"));
        }
        Ok((report, comments))
    }

    /// Long-format rows for density-versus-metric plots. Undefined values
    /// are skipped.
    pub fn write_scatter<W: Write>(&self, mut w: W, header: bool) -> Result<()> {
        if header {
            writeln!(w, "{SCATTER_HEADER}")?;
        }
        for r in &self.records {
            for (metric, v) in [
                ("tau_norm", r.tau_norm),
                ("epsilon_norm", r.epsilon_norm),
                ("monotonicity", r.monotonicity),
            ] {
                if let Some(v) = v {
                    writeln!(
                        w,
                        "{},{},{},{metric},{v}",
                        self.dataset, self.density, r.measure
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn record(&self, measure: &str) -> Option<&MeasureRecord> {
        self.records.iter().find(|r| r.measure == measure)
    }
}
