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

//! Centrality measures, Independent Cascade spread estimation and ranking
//! evaluation for directed weighted social networks.
//!
//! A typical pipeline:
//!
//! ```
//! use spreadrank::{apply_wcs, orient_undirected, parse_edge_list};
//! use spreadrank::{MeasureParams, MeasureSet, SimulationConfig};
//!
//! let text = "a b\nb c\nc a\na d\n";
//! let raw = parse_edge_list(text.as_bytes(), false, false).unwrap();
//! let net = apply_wcs(&orient_undirected(&raw.network));
//!
//! let cfg = SimulationConfig { runs: 1000, master_seed: 7, parallel_width: None };
//! let spread = spreadrank::spread_all(&net, &cfg).unwrap();
//! assert!(spread.values.iter().all(|&f| f >= 1.0));
//!
//! let mut measures = MeasureSet::new(&net, MeasureParams::default());
//! let c_os = measures.get("c_os").unwrap().clone();
//! let tau = spreadrank::kendall_tau(c_os.values(), &spread.values).unwrap();
//! assert!((-1.0..=1.0).contains(&tau));
//! ```

pub mod centrality;
pub mod combined;
pub mod config;
pub mod error;
pub mod eval;
pub mod graph;
pub mod gravity;
pub mod measures;
pub mod pipeline;
pub mod propagation;
pub mod score;
pub mod view;

pub use config::{Probabilities, RunConfig};
pub use error::{Error, Result};
pub use eval::{aggregate, evaluate, kendall_tau, monotonicity, ranking_error, EvaluationReport};
pub use graph::{
    apply_wcs, load_edge_list, orient_undirected, parse_edge_list, read_canonical, write_canonical,
    IdMap, Network, NodeId,
};
pub use measures::{MeasureParams, MeasureSet, MEASURE_IDS};
pub use propagation::{exact_spread, simulate_ic, spread_all, SimulationConfig, SpreadEstimate};
pub use score::ScoreVector;
pub use view::{GraphView, ViewKind, WeightMode};

/// Guide chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/cascade.md")]
    mod cascade {}
    #[doc = include_str!("../../../book/src/centralities.md")]
    mod centralities {}
    #[doc = include_str!("../../../book/src/combined.md")]
    mod combined {}
    #[doc = include_str!("../../../book/src/gravity.md")]
    mod gravity {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
