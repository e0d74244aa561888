use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the certificates and dual computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Support threshold relative to `max |φ̂|`.
    pub eps_supp: f64,
    /// Eigenvalue cutoff relative to the largest eigenvalue.
    pub rank_cutoff: f64,
    /// Operator-norm tolerance for in-model exact identities.
    pub residual_tol: f64,
    /// Tolerance for dual / Parseval comparisons.
    pub dual_tol: f64,
    /// `p / P` below this ratio counts as "no positive lower bound".
    pub ess_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_supp: 1e-12, rank_cutoff: 1e-10, residual_tol: 1e-10, dual_tol: 1e-8, ess_floor: 1e-3 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("eps_supp", self.eps_supp),
            ("rank_cutoff", self.rank_cutoff),
            ("residual_tol", self.residual_tol),
            ("dual_tol", self.dual_tol),
            ("ess_floor", self.ess_floor),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::Config(format!("tolerance `{name}` must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// `lhs <= rhs` up to a slack of `tol` scaled by the magnitude of `rhs`.
    pub fn le(lhs: f64, rhs: f64, tol: f64) -> bool {
        lhs <= rhs + tol * rhs.abs().max(1.0)
    }
}
