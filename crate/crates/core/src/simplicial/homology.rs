//! Exact integral homology of a chain complex, reported as a canonical
//! profile: Betti rank plus the torsion divisibility chain per degree.
//!
//! Two profiles are equal iff the graded groups are isomorphic, which makes
//! the serialized form a bit-exact comparison key.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::chain::ChainComplex;
use crate::simplicial::snf::{smith_summary, SmithSummary};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub k: usize,
    pub betti: usize,
    /// Torsion coefficients ≥ 2, each dividing the next.
    pub torsion: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialization cannot fail")
    }

    /// Handy constructor for expected values in tests and oracles.
    pub fn from_parts(parts: &[(usize, &[u64])]) -> Self {
        HomologyProfile {
            degrees: parts
                .iter()
                .enumerate()
                .map(|(k, &(betti, torsion))| DegreeHomology {
                    k,
                    betti,
                    torsion: torsion.to_vec(),
                })
                .collect(),
        }
    }

    /// True when every degree is zero (no Betti rank, no torsion).
    pub fn is_trivial(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.betti == 0 && d.torsion.is_empty())
    }

    /// True when reduced homology vanishes and H_0 is free of the given
    /// rank.
    pub fn is_acyclic_with_components(&self, components: usize) -> bool {
        self.degrees
            .iter()
            .all(|d| d.torsion.is_empty() && d.betti == if d.k == 0 { components } else { 0 })
    }

    pub fn display_text(&self) -> String {
        let mut out = String::new();
        for d in &self.degrees {
            let mut parts = Vec::new();
            if d.betti == 1 {
                parts.push("Z".to_string());
            } else if d.betti > 1 {
                parts.push(format!("Z^{}", d.betti));
            }
            for t in &d.torsion {
                parts.push(format!("Z/{t}"));
            }
            let group = if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            };
            out.push_str(&format!("H_{} = {}\n", d.k, group));
        }
        out
    }
}

/// `H_k = ker d_k / im d_{k+1}` for `k = 0..=k_max`, via Smith normal form.
///
/// A truncated complex must carry chains through degree `k_max + 1`;
/// otherwise the computation would silently report wrong groups, so it
/// errors instead. Complete complexes may be shorter — missing degrees are
/// genuinely zero.
pub fn homology(c: &ChainComplex, k_max: usize) -> Result<HomologyProfile> {
    if !c.is_complete() && c.top_degree() < k_max + 1 {
        return Err(Error::TruncationTooShallow {
            k_max,
            needed: k_max + 1,
            available: c.top_degree(),
        });
    }

    // one summary per boundary map, shared between adjacent degrees
    let mut summaries: Vec<SmithSummary> = Vec::with_capacity(k_max + 2);
    for k in 0..=k_max + 1 {
        summaries.push(smith_summary(&c.boundary(k)));
    }

    let mut degrees = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let kernel_rank = c.rank(k) - summaries[k].rank;
        let betti = kernel_rank - summaries[k + 1].rank;
        let torsion = summaries[k + 1]
            .torsion
            .iter()
            .map(|t: &BigInt| t.to_u64().ok_or(Error::TorsionOverflow))
            .collect::<Result<Vec<u64>>>()?;
        degrees.push(DegreeHomology { k, betti, torsion });
    }
    Ok(HomologyProfile { degrees })
}
