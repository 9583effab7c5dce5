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

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measures::{measure_id, MeasureParams, MEASURE_IDS};
use crate::propagation::SimulationConfig;

pub const DEFAULT_TOP_K: usize = 50;

/// Where cascade probabilities come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probabilities {
    /// `1 / in_degree(target)` for every edge.
    #[default]
    Wcs,
    /// The stored edge weights, which must lie in `(0, 1]`.
    AsIs,
}

/// Every parameter that influences a result file.
///
/// Output locations and thread counts are deliberately absent: they never
/// change a value, so they must not change the hash either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub runs: usize,
    pub master_seed: u64,
    pub top_k: usize,
    pub probabilities: Probabilities,
    #[serde(flatten)]
    pub params: MeasureParams,
    pub measures: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            runs: SimulationConfig::default().runs,
            master_seed: 0,
            top_k: DEFAULT_TOP_K,
            probabilities: Probabilities::Wcs,
            params: MeasureParams::default(),
            measures: MEASURE_IDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 2 {
            return Err(Error::Parameter(format!(
                "runs must be at least 2, got {}",
                self.runs
            )));
        }
        if self.top_k == 0 {
            return Err(Error::Parameter("top-k must be at least 1".into()));
        }
        if self.params.gravity_radius == 0 {
            return Err(Error::Parameter("gravity radius must be at least 1".into()));
        }
        if self.params.eps_guard.is_nan() || self.params.eps_guard <= 0.0 {
            return Err(Error::Parameter("eps guard must be positive".into()));
        }
        for m in &self.measures {
            measure_id(m)?;
        }
        Ok(())
    }

    pub fn simulation(&self, parallel_width: Option<usize>) -> SimulationConfig {
        SimulationConfig {
            runs: self.runs,
            master_seed: self.master_seed,
            parallel_width,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    /// Hex SHA-256 of the JSON form.
    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }

    /// Key for a spread cache: the graph and the simulation parameters.
    pub fn simulation_hash(&self, graph_hash: &str) -> String {
        let probs = match self.probabilities {
            Probabilities::Wcs => "wcs",
            Probabilities::AsIs => "as-is",
        };
        sha256_hex(format!("{graph_hash}:{}:{}:{probs}", self.runs, self.master_seed).as_bytes())
    }
}
