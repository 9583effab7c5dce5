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

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// One centrality value per node, tagged with the measure that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    measure: String,
    values: Vec<f64>,
    normalized: bool,
}

impl ScoreVector {
    pub fn new(measure: impl Into<String>, values: Vec<f64>) -> Self {
        ScoreVector {
            measure: measure.into(),
            values,
            normalized: false,
        }
    }

    pub fn measure(&self) -> &str {
        &self.measure
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn renamed(mut self, measure: impl Into<String>) -> Self {
        self.measure = measure.into();
        self
    }

    /// Divides by the largest absolute value. All-zero vectors are returned
    /// unchanged (but still flagged as normalized).
    pub fn normalized(&self) -> ScoreVector {
        let max = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let values = if max > 0.0 {
            self.values.iter().map(|v| v / max).collect()
        } else {
            self.values.clone()
        };
        ScoreVector {
            measure: self.measure.clone(),
            values,
            normalized: true,
        }
    }

    /// Elementwise product of two score vectors.
    pub fn product(&self, other: &ScoreVector, measure: impl Into<String>) -> Result<ScoreVector> {
        check_same_len(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(ScoreVector::new(measure, values))
    }

    /// `# measure=<id>` followed by any extra comment lines, then `node,score`.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<()> {
        writeln!(w, "# measure={}", self.measure)?;
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "node,score")?;
        for (u, v) in self.values.iter().enumerate() {
            writeln!(w, "{u},{v}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<ScoreVector> {
        let mut measure = None;
        let mut values = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if let Some(c) = line.strip_prefix('#') {
                if let Some(m) = c.trim().strip_prefix("measure=") {
                    measure = Some(m.to_string());
                }
                continue;
            }
            if line.is_empty() || line == "node,score" {
                continue;
            }
            let (node, score) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(idx + 1, "expected `node,score`"))?;
            let node: usize = node
                .parse()
                .map_err(|_| Error::parse(idx + 1, "bad node id"))?;
            if node != values.len() {
                return Err(Error::parse(idx + 1, "node ids must be consecutive"));
            }
            values.push(
                score
                    .parse()
                    .map_err(|_| Error::parse(idx + 1, "bad score"))?,
            );
        }
        let measure = measure.ok_or_else(|| Error::parse(1, "missing `# measure=` header"))?;
        Ok(ScoreVector::new(measure, values))
    }
}

pub(crate) fn check_same_len(a: &ScoreVector, b: &ScoreVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Validation(format!(
            "`{}` has {} values but `{}` has {}",
            a.measure(),
            a.len(),
            b.measure(),
            b.len()
        )));
    }
    Ok(())
}
