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

//! Named measures and the graph view each one runs on.
//!
//! | id              | computation                                         |
//! |-----------------|-----------------------------------------------------|
//! | `c_od`          | out-degree, DU                                      |
//! | `c_os`          | out-strength, DW                                    |
//! | `c_b_uu`        | betweenness, UU                                     |
//! | `c_b_uw`        | betweenness, UW with inverted weights               |
//! | `c_c_du`        | outbound closeness, DU                              |
//! | `c_c_dw`        | outbound closeness, DW with inverted weights        |
//! | `c_c_dw_mod`    | `c_c_dw` folded at the closeness threshold          |
//! | `c_e_uu`        | eigenvector, UU                                     |
//! | `c_katz_du`     | incoming Katz, DU                                   |
//! | `c_katz_dw_out` | outgoing Katz, DW                                   |
//! | `wks`           | weighted k-shell on out-degree and out-strength     |
//! | `gc`            | gravity, UU, k-shell mass                           |
//! | `gc_w`          | gravity, DW inverted, `wks` mass                    |
//! | `sc1`           | `c_os` and `c_c_dw_mod`, both max-normalized        |
//! | `sk1`..`sk3`    | `c_os` over `c_katz_du`, both max-normalized        |
//! | `mgc_*`         | gravity, DW inverted, variant mass                  |

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::centrality::{self, Direction, IterationConfig, KatzAlpha, KatzDirection};
use crate::combined::{self, SkVariant};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::gravity::{self, GravityConfig, MgcInputs, MgcVariant};
use crate::score::ScoreVector;
use crate::view::{GraphView, ViewKind};

pub const MEASURE_IDS: [&str; 22] = [
    "c_od",
    "c_os",
    "c_b_uu",
    "c_b_uw",
    "c_c_du",
    "c_c_dw",
    "c_c_dw_mod",
    "c_e_uu",
    "c_katz_du",
    "c_katz_dw_out",
    "wks",
    "gc",
    "gc_w",
    "sc1",
    "sk1",
    "sk2",
    "sk3",
    "mgc_ods",
    "mgc_s",
    "mgc_sc",
    "mgc_sk",
    "mgc_wk",
];

/// Resolves a user-supplied id to its registry entry.
pub fn measure_id(s: &str) -> Result<&'static str> {
    MEASURE_IDS
        .iter()
        .copied()
        .find(|&id| id == s)
        .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
}

/// Parameters that influence measure values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub katz_alpha: KatzAlpha,
    pub closeness_threshold: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eps_guard: f64,
    pub gravity_radius: usize,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            katz_alpha: KatzAlpha::AutoSpectral,
            closeness_threshold: combined::DEFAULT_CLOSENESS_THRESHOLD,
            gamma: combined::DEFAULT_GAMMA,
            delta: combined::DEFAULT_DELTA,
            eps_guard: combined::DEFAULT_EPS_GUARD,
            gravity_radius: gravity::DEFAULT_RADIUS,
        }
    }
}

/// Computes measures on one network, caching every intermediate result.
pub struct MeasureSet<'a> {
    net: &'a Network,
    params: MeasureParams,
    cache: HashMap<&'static str, ScoreVector>,
}

impl<'a> MeasureSet<'a> {
    pub fn new(net: &'a Network, params: MeasureParams) -> Self {
        MeasureSet {
            net,
            params,
            cache: HashMap::new(),
        }
    }

    pub fn get(&mut self, id: &str) -> Result<&ScoreVector> {
        let id = measure_id(id)?;
        if !self.cache.contains_key(id) {
            let v = self.compute(id)?.renamed(id);
            self.cache.insert(id, v);
        }
        Ok(&self.cache[id])
    }

    fn dep(&mut self, id: &str) -> Result<ScoreVector> {
        self.get(id).cloned()
    }

    fn katz(&self, kind: ViewKind, dir: KatzDirection) -> Result<ScoreVector> {
        let view = GraphView::new(self.net, kind);
        let alpha = centrality::katz_alpha(&view, self.params.katz_alpha);
        centrality::katz(&view, dir, alpha, IterationConfig::KATZ)
    }

    fn sk(&mut self, variant: SkVariant) -> Result<ScoreVector> {
        let os = self.dep("c_os")?.normalized();
        let katz = self.dep("c_katz_du")?.normalized();
        combined::sk_family(&os, &katz, variant, self.params.eps_guard)
    }

    fn mgc(&mut self, variant: MgcVariant) -> Result<ScoreVector> {
        let dep = match variant {
            MgcVariant::Ods => None,
            MgcVariant::S => Some(self.dep("c_os")?),
            MgcVariant::Sc => Some(self.dep("sc1")?),
            MgcVariant::Sk => Some(self.dep("sk3")?),
            MgcVariant::Wk => Some(self.dep("c_katz_dw_out")?),
        };
        let mut inputs = MgcInputs::default();
        match variant {
            MgcVariant::Ods => {}
            MgcVariant::S => inputs.out_strength = dep.as_ref(),
            MgcVariant::Sc => inputs.sc1 = dep.as_ref(),
            MgcVariant::Sk => inputs.sk3 = dep.as_ref(),
            MgcVariant::Wk => inputs.katz_out_dw = dep.as_ref(),
        }
        gravity::mgc(self.net, variant, inputs, self.gravity_cfg())
    }

    fn gravity_cfg(&self) -> GravityConfig {
        GravityConfig {
            radius: self.params.gravity_radius,
        }
    }

    fn compute(&mut self, id: &'static str) -> Result<ScoreVector> {
        let net = self.net;
        let view = |kind| GraphView::new(net, kind);
        let dist = |kind| GraphView::distances(net, kind);
        Ok(match id {
            "c_od" => centrality::degree(&view(ViewKind::DU), Direction::Out),
            "c_os" => centrality::strength(&view(ViewKind::DW), Direction::Out),
            "c_b_uu" => centrality::betweenness(&view(ViewKind::UU)),
            "c_b_uw" => centrality::betweenness(&dist(ViewKind::UW)),
            "c_c_du" => centrality::closeness(&view(ViewKind::DU)),
            "c_c_dw" => centrality::closeness(&dist(ViewKind::DW)),
            "c_c_dw_mod" => {
                combined::modified_closeness(&self.dep("c_c_dw")?, self.params.closeness_threshold)
            }
            "c_e_uu" => centrality::eigenvector(&view(ViewKind::UU), IterationConfig::EIGENVECTOR)?,
            "c_katz_du" => self.katz(ViewKind::DU, KatzDirection::Incoming)?,
            "c_katz_dw_out" => self.katz(ViewKind::DW, KatzDirection::Outgoing)?,
            "wks" => centrality::weighted_kshell(net),
            "gc" => gravity::gc_unweighted(net, self.gravity_cfg())?,
            "gc_w" => gravity::gc_weighted(net, self.gravity_cfg())?,
            "sc1" => {
                let os = self.dep("c_os")?.normalized();
                let modc = self.dep("c_c_dw_mod")?.normalized();
                combined::sc1(&os, &modc, self.params.gamma, self.params.delta)?
            }
            "sk1" => self.sk(SkVariant::Sk1)?,
            "sk2" => self.sk(SkVariant::Sk2)?,
            "sk3" => self.sk(SkVariant::Sk3)?,
            "mgc_ods" => self.mgc(MgcVariant::Ods)?,
            "mgc_s" => self.mgc(MgcVariant::S)?,
            "mgc_sc" => self.mgc(MgcVariant::Sc)?,
            "mgc_sk" => self.mgc(MgcVariant::Sk)?,
            "mgc_wk" => self.mgc(MgcVariant::Wk)?,
            other => unreachable!("`{other}` is in the registry but has no rule"),
        })
    }
}
