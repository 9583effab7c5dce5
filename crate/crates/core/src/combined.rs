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

//! Measures that combine a local and a global centrality.
//!
//! * [`modified_closeness`] folds outbound closeness around a threshold so
//!   that the small values which go with large spread map to the top.
//! * [`sc1`] is a convex combination of out-strength and modified closeness.
//! * [`sk_family`] mixes out-strength with incoming Katz, which tends to
//!   fall as spread rises, by placing Katz in a denominator.

use crate::error::{Error, Result};
use crate::score::{check_same_len, ScoreVector};

pub const DEFAULT_CLOSENESS_THRESHOLD: f64 = 0.04;
pub const DEFAULT_GAMMA: f64 = 0.64;
pub const DEFAULT_DELTA: f64 = 0.36;
pub const DEFAULT_EPS_GUARD: f64 = 1e-12;

/// `c + 1 - t` for `c <= t`, `1 - c + t` above.
pub fn modified_closeness_value(c: f64, threshold: f64) -> f64 {
    if c <= threshold {
        c + 1.0 - threshold
    } else {
        1.0 - c + threshold
    }
}

pub fn modified_closeness(closeness: &ScoreVector, threshold: f64) -> ScoreVector {
    let values = closeness
        .values()
        .iter()
        .map(|&c| modified_closeness_value(c, threshold))
        .collect();
    ScoreVector::new("c_c_dw_mod", values)
}

/// Splits unit weight between two measures in proportion to their
/// correlation strengths: `gamma / delta = k_local / k_global`.
pub fn derive_coefficients(k_local: f64, k_global: f64) -> Result<(f64, f64)> {
    if !(k_local > 0.0 && k_global > 0.0) {
        return Err(Error::Parameter(format!(
            "correlation strengths must be positive, got {k_local} and {k_global}"
        )));
    }
    let total = k_local + k_global;
    Ok((k_local / total, k_global / total))
}

/// `gamma * out_strength + delta * modified_closeness`, elementwise.
///
/// Both inputs are expected to be max-normalized already.
pub fn sc1(
    out_strength: &ScoreVector,
    mod_closeness: &ScoreVector,
    gamma: f64,
    delta: f64,
) -> Result<ScoreVector> {
    check_same_len(out_strength, mod_closeness)?;
    if ((gamma + delta) - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "coefficients must sum to 1, got {gamma} + {delta}"
        )));
    }
    let values = out_strength
        .values()
        .iter()
        .zip(mod_closeness.values())
        .map(|(s, c)| gamma * s + delta * c)
        .collect();
    Ok(ScoreVector::new("sc1", values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkVariant {
    /// `s + s / z`
    Sk1,
    /// `s - z / (s + z)`
    Sk2,
    /// `s / z`
    Sk3,
}

impl SkVariant {
    pub fn id(self) -> &'static str {
        match self {
            SkVariant::Sk1 => "sk1",
            SkVariant::Sk2 => "sk2",
            SkVariant::Sk3 => "sk3",
        }
    }

    /// Single-node formula. A zero Katz value is replaced by `eps`, as is a
    /// zero `s + z` denominator.
    pub fn apply(self, s: f64, katz: f64, eps: f64) -> f64 {
        let z = if katz == 0.0 { eps } else { katz };
        match self {
            SkVariant::Sk1 => s + s / z,
            SkVariant::Sk2 => {
                let denom = s + z;
                s - z / if denom == 0.0 { eps } else { denom }
            }
            SkVariant::Sk3 => s / z,
        }
    }
}

pub fn sk_family(
    out_strength: &ScoreVector,
    katz_in: &ScoreVector,
    variant: SkVariant,
    eps: f64,
) -> Result<ScoreVector> {
    check_same_len(out_strength, katz_in)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Parameter(format!(
            "eps guard must be positive, got {eps}"
        )));
    }
    let values = out_strength
        .values()
        .iter()
        .zip(katz_in.values())
        .map(|(&s, &z)| variant.apply(s, z, eps))
        .collect();
    Ok(ScoreVector::new(variant.id(), values))
}
