//! Analysis, synthesis, frame and Gram matrices of exponential and translate
//! systems, multiplication operators, and the operator factorizations that tie
//! the two systems together.
//!
//! Matrices act on the √h-scaled grid coordinates, so the Euclidean inner
//! product is the quadrature inner product of `L²(E)`. Translates are stored
//! by their Fourier transforms `e_λ · φ̂`; conjugation by `𝓕` is therefore the
//! identity of representation.

use std::sync::Arc;

use serde::Serialize;

use crate::generators::Generator;
use crate::gramian::TranslateSet;
use crate::grid::{exponential_vector, FrequencyGrid, GridVector};
use crate::linalg::{scale_cols, scale_rows, select_rows, spectral_norm, CMatrix};
use crate::{Error, Result, Tolerances, C64};

/// Pointwise multiplier `M_ψ` with its essential range over the support.
#[derive(Debug, Clone)]
pub struct MultiplicationOperator {
    symbol: GridVector,
    mask: Vec<bool>,
    ess_inf: f64,
    ess_sup: f64,
}

/// `eps_supp_rel` is relative to `max |ψ|`.
pub fn multiplication_operator(symbol: GridVector, eps_supp_rel: f64) -> MultiplicationOperator {
    let peak = symbol.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eps = eps_supp_rel * peak;
    let mask: Vec<bool> = symbol.values().iter().map(|z| z.norm() > eps).collect();
    let masked = symbol.values().iter().zip(&mask).filter(|(_, &m)| m).map(|(z, _)| z.norm());
    let (ess_inf, ess_sup) = masked.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let ess_inf = if ess_inf.is_finite() { ess_inf } else { 0.0 };
    MultiplicationOperator { symbol, mask, ess_inf, ess_sup }
}

impl MultiplicationOperator {
    pub fn symbol(&self) -> &GridVector {
        &self.symbol
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
    /// `p`: smallest `|ψ|` on the support.
    pub fn ess_inf(&self) -> f64 {
        self.ess_inf
    }
    /// `P`: largest `|ψ|`.
    pub fn ess_sup(&self) -> f64 {
        self.ess_sup
    }
    /// Smallest `|ψ|` over every node of the grid (0 if the support is partial).
    pub fn inf_over_grid(&self) -> f64 {
        if self.mask.iter().all(|&m| m) {
            self.ess_inf
        } else {
            0.0
        }
    }
    pub fn op_norm(&self) -> f64 {
        self.ess_sup
    }

    /// `ψ†`.
    pub fn dagger(&self) -> Vec<C64> {
        self.symbol
            .values()
            .iter()
            .zip(&self.mask)
            .map(|(&z, &m)| if m { z.inv() } else { C64::new(0.0, 0.0) })
            .collect()
    }

    pub fn apply(&self, f: &GridVector) -> Result<GridVector> {
        self.symbol.mul(f)
    }

    pub fn apply_pseudo_inverse(&self, f: &GridVector) -> Result<GridVector> {
        f.check_grid(&self.symbol)?;
        let values = self.dagger().iter().zip(f.values()).map(|(d, v)| d * v).collect();
        GridVector::new(f.grid().clone(), values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Exponentials,
    Translates,
}

/// Dense operator matrices of a finite system in scaled grid coordinates.
///
/// `rows` lists the grid nodes the system is represented on; a system
/// restricted to `supp(φ̂)` only keeps those rows.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    pub kind: SystemKind,
    grid: Arc<FrequencyGrid>,
    points: Vec<f64>,
    rows: Vec<usize>,
    /// `φ̂` at every grid node, for translate systems.
    symbol: Option<Vec<C64>>,
    /// `D`: rows × K, column k is the k-th system vector.
    pub synthesis: CMatrix,
    /// `G = C·D`, so `G[k][l] = ⟨ψ_l, ψ_k⟩`.
    pub gram: CMatrix,
}

impl SystemMatrices {
    fn assemble(
        kind: SystemKind,
        grid: Arc<FrequencyGrid>,
        lambda: &TranslateSet,
        rows: Vec<usize>,
        symbol: Option<Vec<C64>>,
    ) -> Self {
        let points = lambda.points().to_vec();
        let sw = grid.sqrt_weights();
        let cols: Vec<GridVector> = points.iter().map(|&l| exponential_vector(l, &grid)).collect();
        let synthesis = CMatrix::from_fn(rows.len(), points.len(), |i, k| {
            let n = rows[i];
            let e = cols[k].values()[n] * sw[n];
            match &symbol {
                Some(s) => s[n] * e,
                None => e,
            }
        });
        let gram = synthesis.adjoint() * &synthesis;
        Self { kind, grid, points, rows, symbol, synthesis, gram }
    }

    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        &self.grid
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }
    pub fn symbol(&self) -> Option<&[C64]> {
        self.symbol.as_deref()
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_full_grid(&self) -> bool {
        self.rows.len() == self.grid.len()
    }

    /// `C = D*`.
    pub fn analysis(&self) -> CMatrix {
        self.synthesis.adjoint()
    }

    /// `S = D·C`.
    pub fn frame_operator(&self) -> CMatrix {
        &self.synthesis * self.synthesis.adjoint()
    }

    /// Same system represented on a subset of its rows.
    pub fn restrict(&self, rows: &[usize]) -> Result<Self> {
        let pos: Vec<usize> = rows
            .iter()
            .map(|r| {
                self.rows
                    .iter()
                    .position(|x| x == r)
                    .ok_or_else(|| Error::Precondition(format!("row {r} not in system")))
            })
            .collect::<Result<_>>()?;
        let synthesis = select_rows(&self.synthesis, &pos);
        let gram = synthesis.adjoint() * &synthesis;
        Ok(Self { rows: rows.to_vec(), synthesis, gram, ..self.clone() })
    }

    /// Lift scaled coordinates on `rows` back to a full-grid vector (zero elsewhere).
    pub fn lift(&self, coords: &[C64]) -> Result<GridVector> {
        if coords.len() != self.rows.len() {
            return Err(Error::Dimension { expected: self.rows.len(), got: coords.len() });
        }
        let mut full = vec![C64::new(0.0, 0.0); self.grid.len()];
        for (&r, &c) in self.rows.iter().zip(coords) {
            full[r] = c;
        }
        GridVector::from_scaled(self.grid.clone(), &full)
    }

    /// Restrict a full-grid vector to scaled coordinates on `rows`.
    pub fn coords(&self, f: &GridVector) -> Result<Vec<C64>> {
        if !self.grid.same_as(f.grid()) {
            return Err(Error::GridMismatch);
        }
        let scaled = f.scaled();
        Ok(self.rows.iter().map(|&r| scaled[r]).collect())
    }

    pub fn column(&self, k: usize) -> Result<GridVector> {
        let col: Vec<C64> = self.synthesis.column(k).iter().copied().collect();
        self.lift(&col)
    }
}

/// Columns `√h · e_λk`.
pub fn exponential_system(lambda: &TranslateSet, grid: &Arc<FrequencyGrid>) -> SystemMatrices {
    let rows = (0..grid.len()).collect();
    SystemMatrices::assemble(SystemKind::Exponentials, grid.clone(), lambda, rows, None)
}

/// Exponential system on the nodes of `supp(φ̂)` only, i.e. in `L²(supp φ̂)`.
pub fn exponential_system_on_support(g: &Generator, lambda: &TranslateSet) -> SystemMatrices {
    SystemMatrices::assemble(SystemKind::Exponentials, g.grid().clone(), lambda, g.support_indices(), None)
}

/// Columns `√h · φ̂ · e_λk`, the Fourier transforms of `T_λk φ`.
pub fn translate_system(g: &Generator, lambda: &TranslateSet) -> SystemMatrices {
    let grid = g.grid().clone();
    let rows = (0..grid.len()).collect();
    let symbol = Some(g.hat_phi().values().to_vec());
    SystemMatrices::assemble(SystemKind::Translates, grid, lambda, rows, symbol)
}

/// One row of a residual report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub id: String,
    pub identity: String,
    /// `E` or `supp(phi_hat)`.
    pub domain: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl IdentityResidual {
    pub fn measured(id: &str, identity: &str, domain: &str, lhs: &CMatrix, rhs: &CMatrix, tol: f64) -> Self {
        Self {
            id: id.into(),
            identity: identity.into(),
            domain: domain.into(),
            residual: Some(spectral_norm(&(lhs - rhs))),
            tolerance: tol,
            skipped: None,
        }
    }

    pub fn skipped(id: &str, identity: &str, reason: String, tol: f64) -> Self {
        Self {
            id: id.into(),
            identity: identity.into(),
            domain: String::new(),
            residual: None,
            tolerance: tol,
            skipped: Some(reason),
        }
    }

    /// Skipped rows count as passing.
    pub fn passed(&self) -> bool {
        self.residual.is_none_or(|r| r <= self.tolerance)
    }
}

/// Operator-norm residuals of the identities relating `D_φ, C_φ, S_φ, G_φ` to
/// `D_e, C_e, S_e, G_e` through `M_φ̂`, `M_Φ` and their pseudo-inverses.
///
/// Inverse-direction identities are evaluated on `supp(φ̂)` when `φ̂`
/// vanishes on part of `E`.
pub fn verify_factorizations(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Vec<IdentityResidual> {
    let t = tol.residual_tol;
    let sys_e = exponential_system(lambda, g.grid());
    let sys_phi = translate_system(g, lambda);
    let hat: Vec<C64> = g.hat_phi().values().to_vec();
    let hat_conj: Vec<C64> = hat.iter().map(|z| z.conj()).collect();
    let big_phi: Vec<C64> = hat.iter().map(|z| C64::new(z.norm_sqr(), 0.0)).collect();

    let d_e = &sys_e.synthesis;
    let c_e = sys_e.analysis();
    let d_phi = &sys_phi.synthesis;
    let c_phi = sys_phi.analysis();

    let mut out = vec![
        IdentityResidual::measured("i", "D_phi = M_phihat D_e", "E", d_phi, &scale_rows(&hat, d_e), t),
        IdentityResidual::measured("ii", "C_phi = C_e M_conj(phihat)", "E", &c_phi, &scale_cols(&c_e, &hat_conj), t),
        IdentityResidual::measured(
            "iii",
            "S_phi = M_phihat S_e M_conj(phihat)",
            "E",
            &sys_phi.frame_operator(),
            &scale_cols(&scale_rows(&hat, &sys_e.frame_operator()), &hat_conj),
            t,
        ),
        IdentityResidual::measured(
            "iv",
            "G_phi = C_e M_Phi D_e",
            "E",
            &sys_phi.gram,
            &(&c_e * scale_rows(&big_phi, d_e)),
            t,
        ),
    ];

    let support = g.support_indices();
    let inverse_ids = [
        ("v", "D_e = M_(1/phihat) D_phi"),
        ("vi", "C_e = C_phi M_(conj phihat)^dagger"),
        ("vii", "G_e = C_phi M_(1/Phi) D_phi"),
    ];
    if support.is_empty() {
        for (id, identity) in inverse_ids {
            out.push(IdentityResidual::skipped(id, identity, "phi_hat vanishes on every node of E".into(), t));
        }
        return out;
    }
    let domain = if g.full_support() { "E" } else { "supp(phi_hat)" };
    let (re, rp) = match (sys_e.restrict(&support), sys_phi.restrict(&support)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => unreachable!("support rows come from the same grid"),
    };
    let dagger: Vec<C64> = support.iter().map(|&n| g.hat_phi_dagger()[n]).collect();
    let dagger_conj: Vec<C64> = dagger.iter().map(|z| z.conj()).collect();
    let inv_big_phi: Vec<C64> = dagger.iter().map(|z| C64::new(z.norm_sqr(), 0.0)).collect();
    out.push(IdentityResidual::measured(
        inverse_ids[0].0,
        inverse_ids[0].1,
        domain,
        &re.synthesis,
        &scale_rows(&dagger, &rp.synthesis),
        t,
    ));
    out.push(IdentityResidual::measured(
        inverse_ids[1].0,
        inverse_ids[1].1,
        domain,
        &re.analysis(),
        &scale_cols(&rp.analysis(), &dagger_conj),
        t,
    ));
    out.push(IdentityResidual::measured(
        inverse_ids[2].0,
        inverse_ids[2].1,
        domain,
        &re.gram,
        &(rp.analysis() * scale_rows(&inv_big_phi, &rp.synthesis)),
        t,
    ));
    out
}
