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

//! Glue between the stages: the network cascades run on, and a full
//! evaluation of a measure list.

use crate::config::{Probabilities, RunConfig};
use crate::error::{Error, Result};
use crate::eval::{self, EvaluationReport, EPSILON_BASELINE, TAU_BASELINE};
use crate::graph::{apply_wcs, Network};
use crate::measures::{measure_id, MeasureSet};
use crate::propagation::SpreadEstimate;

/// The network whose edge weights serve as cascade probabilities.
pub fn ic_network(net: &Network, probabilities: Probabilities) -> Result<Network> {
    match probabilities {
        Probabilities::Wcs => Ok(apply_wcs(net)),
        Probabilities::AsIs => {
            if let Some(e) = net.edges().iter().find(|e| e.weight > 1.0) {
                return Err(Error::Validation(format!(
                    "edge {} -> {} has weight {} > 1; use WCS probabilities",
                    e.source, e.target, e.weight
                )));
            }
            Ok(net.clone())
        }
    }
}

/// Measure ids from `cfg` with the two normalization baselines in front.
pub fn evaluation_measures(cfg: &RunConfig) -> Result<Vec<&'static str>> {
    let mut ids = vec![TAU_BASELINE, EPSILON_BASELINE];
    for m in &cfg.measures {
        let id = measure_id(m)?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Computes every configured measure on `net` and scores it against
/// `spread`.
pub fn evaluate_network(
    dataset: &str,
    net: &Network,
    spread: &SpreadEstimate,
    cfg: &RunConfig,
) -> Result<EvaluationReport> {
    if spread.values.len() != net.node_count() {
        return Err(Error::Validation(format!(
            "spread covers {} nodes, graph has {}",
            spread.values.len(),
            net.node_count()
        )));
    }
    let ids = evaluation_measures(cfg)?;
    let mut set = MeasureSet::new(net, cfg.params);
    let mut scores = Vec::with_capacity(ids.len());
    for &id in &ids {
        scores.push(set.get(id)?.clone());
    }
    let named: Vec<(&str, &[f64])> = scores.iter().map(|s| (s.measure(), s.values())).collect();
    eval::evaluate(dataset, net.density(), spread, &named, cfg.top_k)
}
