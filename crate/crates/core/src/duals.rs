//! Canonical duals and canonical Parseval frames of translate systems.
//!
//! Every explicit construction built from the exponential system is paired
//! with the brute-force route through the pseudo-inverse of the frame
//! operator, so the two can be compared column by column.

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{frame_bounds, phi_range, FrameBounds};
use crate::generators::Generator;
use crate::gramian::TranslateSet;
use crate::grid::{FrequencyGrid, GridVector};
use crate::linalg::{
    adjoint_pseudo_inverse, polar_factor, scale_cols, scale_rows, spectral_norm, CMatrix, HermitianEigen,
};
use crate::operators::{
    exponential_system, exponential_system_on_support, translate_system, IdentityResidual, SystemKind, SystemMatrices,
};
use crate::{Error, Result, Tolerances, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    CanonicalDual,
    CanonicalTight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualMethod {
    ExplicitFormula,
    PseudoInverseOracle,
}

/// `K` dual vectors, stored like a synthesis matrix (scaled coordinates on `rows`).
#[derive(Debug, Clone)]
pub struct DualSystem {
    pub kind: DualKind,
    pub method: DualMethod,
    pub source: SystemKind,
    grid: Arc<FrequencyGrid>,
    points: Vec<f64>,
    rows: Vec<usize>,
    pub synthesis: CMatrix,
}

impl DualSystem {
    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }
    pub fn is_empty(&self) -> bool {
        self.synthesis.ncols() == 0
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn analysis(&self) -> CMatrix {
        self.synthesis.adjoint()
    }

    pub fn frame_operator(&self) -> CMatrix {
        &self.synthesis * self.synthesis.adjoint()
    }

    pub fn rank(&self, rank_cutoff: f64) -> usize {
        HermitianEigen::new(&(self.synthesis.adjoint() * &self.synthesis)).rank(rank_cutoff)
    }

    /// k-th dual vector as a full-grid frequency-domain vector.
    pub fn vector(&self, k: usize) -> Result<GridVector> {
        let mut full = vec![C64::new(0.0, 0.0); self.grid.len()];
        for (i, &r) in self.rows.iter().enumerate() {
            full[r] = self.synthesis[(i, k)];
        }
        GridVector::from_scaled(self.grid.clone(), &full)
    }

    /// Largest column-wise distance (grid norm) to another dual on the same rows.
    pub fn max_column_distance(&self, other: &DualSystem) -> Result<f64> {
        if self.rows != other.rows || self.len() != other.len() {
            return Err(Error::Dimension { expected: self.len(), got: other.len() });
        }
        Ok((0..self.len()).map(|k| (self.synthesis.column(k) - other.synthesis.column(k)).norm()).fold(0.0, f64::max))
    }

    /// Largest column-wise distance relative to the column norms of `other`.
    pub fn max_relative_column_distance(&self, other: &DualSystem) -> Result<f64> {
        self.max_column_distance(other)?;
        Ok((0..self.len())
            .map(|k| {
                let reference = other.synthesis.column(k).norm();
                let d = (self.synthesis.column(k) - other.synthesis.column(k)).norm();
                if reference > 0.0 {
                    d / reference
                } else {
                    d
                }
            })
            .fold(0.0, f64::max))
    }
}

/// Embed a matrix on `rows_in` into `total` rows, zero elsewhere.
fn lift_rows(rows_in: &[usize], total: usize, m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(total, m.ncols());
    for (i, &r) in rows_in.iter().enumerate() {
        out.set_row(r, &m.row(i));
    }
    out
}

fn pinv_apply(sys: &SystemMatrices, rank_cutoff: f64) -> Result<CMatrix> {
    let (m, rank) = adjoint_pseudo_inverse(&sys.synthesis, rank_cutoff)?;
    if rank == 0 {
        return Err(Error::ZeroSystem { cutoff: rank_cutoff });
    }
    Ok(m)
}

/// `ẽ_k = S_e⁺ e_k`, computed from the SVD of the synthesis matrix.
pub fn canonical_dual_exponentials(sys_e: &SystemMatrices, rank_cutoff: f64) -> Result<DualSystem> {
    if sys_e.is_empty() {
        return Err(Error::Precondition("empty exponential system".into()));
    }
    Ok(DualSystem {
        kind: DualKind::CanonicalDual,
        method: DualMethod::PseudoInverseOracle,
        source: sys_e.kind,
        grid: sys_e.grid().clone(),
        points: sys_e.points().to_vec(),
        rows: sys_e.rows().to_vec(),
        synthesis: pinv_apply(sys_e, rank_cutoff)?,
    })
}

/// Checks the hypotheses under which the Fourier-side formulas produce the
/// canonical objects: `Φ > 0` on the support, and either the exponentials are
/// complete in `L²(supp φ̂)` or `Φ` is constant there.
///
/// Returns the exponential system on the support.
fn check_dual_hypotheses(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<SystemMatrices> {
    let support = g.support_indices();
    if support.is_empty() {
        return Err(Error::Precondition("phi_hat has empty support".into()));
    }
    let vals = g.hat_phi().values();
    if let Some(&n) = support.iter().find(|&&n| !(vals[n].norm_sqr() > 0.0 && vals[n].norm_sqr().is_finite())) {
        return Err(Error::Precondition(format!(
            "Phi is not bounded below at node {n} (omega = {})",
            g.grid().nodes()[n]
        )));
    }
    let (p, big_p, _) = phi_range(g);
    let sys_e = exponential_system_on_support(g, lambda);
    let rank = HermitianEigen::new(&sys_e.gram).rank(tol.rank_cutoff);
    let flat = big_p - p <= tol.residual_tol * big_p;
    if rank < support.len() && !flat {
        return Err(Error::Precondition(format!(
            "exponentials span a {rank}-dimensional subspace of L2(supp phi_hat) (dim {}) and Phi is not constant; \
             the Fourier-side formula is a dual but not the canonical one",
            support.len()
        )));
    }
    Ok(sys_e)
}

/// Canonical dual of `{T_λk φ}`.
///
/// `ExplicitFormula`: `θ̂_k = (φ̂/Φ)·ẽ_k` on `supp φ̂` (0 elsewhere) with `ẽ_k`
/// the canonical dual of the exponentials in `L²(supp φ̂)`.
/// `PseudoInverseOracle`: `θ_k = S_φ⁺ T_λk φ`.
pub fn canonical_dual_translates(
    g: &Generator,
    lambda: &TranslateSet,
    method: DualMethod,
    tol: &Tolerances,
) -> Result<DualSystem> {
    let n = g.grid().len();
    let synthesis = match method {
        DualMethod::ExplicitFormula => {
            let sys_e = check_dual_hypotheses(g, lambda, tol)?;
            let dual_e = canonical_dual_exponentials(&sys_e, tol.rank_cutoff)?;
            // φ̂/Φ = 1/conj(φ̂) on the support
            let weight: Vec<C64> = sys_e.rows().iter().map(|&r| g.hat_phi().values()[r].conj().inv()).collect();
            lift_rows(sys_e.rows(), n, &scale_rows(&weight, &dual_e.synthesis))
        }
        DualMethod::PseudoInverseOracle => pinv_apply(&translate_system(g, lambda), tol.rank_cutoff)?,
    };
    Ok(DualSystem {
        kind: DualKind::CanonicalDual,
        method,
        source: SystemKind::Translates,
        grid: g.grid().clone(),
        points: lambda.points().to_vec(),
        rows: (0..n).collect(),
        synthesis,
    })
}

/// Dual generator `θ̂ = (1/A_e)·(1/conj φ̂)` for an `A_e`-tight exponential system.
pub fn tight_dual_generator(g: &Generator, exp_bounds: &FrameBounds, tol: &Tolerances) -> Result<Generator> {
    require_tight(exp_bounds, tol)?;
    let a = exp_bounds.a_opt;
    let vals = g.hat_phi().values();
    let theta = g
        .support_mask()
        .iter()
        .zip(vals)
        .map(|(&m, z)| if m { z.conj().inv() / a } else { C64::new(0.0, 0.0) })
        .collect();
    Generator::from_samples(GridVector::new(g.grid().clone(), theta)?, tol.eps_supp)
}

fn require_tight(b: &FrameBounds, tol: &Tolerances) -> Result<()> {
    if b.is_tight(tol.residual_tol) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("exponential system is not tight: A_e = {}, B_e = {}", b.a_opt, b.b_opt)))
    }
}

#[derive(Debug, Clone)]
pub struct InvSqrtFrameOperator {
    /// `S^{−1/2}` on the span, 0 on its complement.
    pub matrix: CMatrix,
    pub rank: usize,
    pub checks: Vec<IdentityResidual>,
}

/// `S^{−1/2}` by functional calculus above the cutoff, plus the closed forms
/// for `Φ ≡ 1` and for tight exponential systems when those hypotheses hold.
pub fn inv_sqrt_frame_operator(sys: &SystemMatrices, tol: &Tolerances) -> Result<InvSqrtFrameOperator> {
    if sys.is_empty() {
        return Err(Error::Precondition("empty system".into()));
    }
    let rc = tol.rank_cutoff;
    let eig = HermitianEigen::new(&sys.frame_operator());
    let rank = eig.rank(rc);
    if rank == 0 {
        return Err(Error::ZeroSystem { cutoff: eig.cutoff(rc) });
    }
    let matrix = eig.inv_sqrt(rc);
    let t = tol.residual_tol;
    let mut checks = vec![IdentityResidual::measured(
        "square",
        "(S^-1/2)^2 = S^+",
        "span",
        &(&matrix * &matrix),
        &eig.pseudo_inverse(rc),
        t * eig.pseudo_inverse(rc).norm().max(1.0),
    )];

    let rows: Vec<usize> = sys.rows().to_vec();
    let hat: Vec<C64> = match sys.symbol() {
        Some(s) => rows.iter().map(|&r| s[r]).collect(),
        None => vec![C64::new(1.0, 0.0); rows.len()],
    };
    let sys_e = exponential_system(&TranslateSet::explicit(sys.points().to_vec())?, sys.grid()).restrict(&rows)?;
    let eig_e = HermitianEigen::new(&sys_e.frame_operator());

    let unimodular = hat.iter().all(|z| (z.norm_sqr() - 1.0).abs() <= t);
    let id_flat = "S_phi^-1/2 = M_phihat S_e^-1/2 M_conj(phihat)";
    checks.push(if sys.kind == SystemKind::Exponentials {
        IdentityResidual::skipped("phi_one", id_flat, "exponential system (trivial)".into(), t)
    } else if unimodular {
        let hat_conj: Vec<C64> = hat.iter().map(|z| z.conj()).collect();
        let rhs = scale_cols(&scale_rows(&hat, &eig_e.inv_sqrt(rc)), &hat_conj);
        let scale = spectral_norm(&rhs).max(1.0);
        IdentityResidual::measured("phi_one", id_flat, "E", &matrix, &rhs, t * scale)
    } else {
        IdentityResidual::skipped("phi_one", id_flat, "Phi is not identically 1".into(), t)
    });

    let id_tight = "S^-1/2 = M_(sqrt(A_e)|phihat|)^dagger";
    let tight = frame_bounds(&sys_e, rc).ok().filter(|b| b.is_tight(t) && b.rank == rows.len());
    checks.push(match tight {
        Some(b) => {
            let peak = hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let d: Vec<C64> = hat
                .iter()
                .map(|z| {
                    let m = z.norm() * b.a_opt.sqrt();
                    if z.norm() > tol.eps_supp * peak {
                        C64::new(1.0 / m, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            let scale = d.iter().map(|z| z.norm()).fold(1.0, f64::max);
            IdentityResidual::measured("tight", id_tight, "E", &matrix, &crate::linalg::diag(&d), t * scale)
        }
        None => IdentityResidual::skipped(
            "tight",
            id_tight,
            "exponential system is not a tight frame of the represented space".into(),
            t,
        ),
    });
    Ok(InvSqrtFrameOperator { matrix, rank, checks })
}

/// Canonical Parseval frame `θ̂#_k = (φ̂/√Φ)·S_e^{−1/2} e_k` on `supp φ̂`.
///
/// Needs the exponentials to be a frame for `L²(supp φ̂)`.
pub fn parseval_system(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<DualSystem> {
    let support = g.support_indices();
    if support.is_empty() {
        return Err(Error::Precondition("phi_hat has empty support".into()));
    }
    let sys_e = exponential_system_on_support(g, lambda);
    let (e_sharp, rank) = polar_factor(&sys_e.synthesis, tol.rank_cutoff)?;
    if rank < support.len() {
        return Err(Error::Precondition(format!(
            "exponentials are not a frame for L2(supp phi_hat): rank {rank} < dim {}",
            support.len()
        )));
    }
    let phase: Vec<C64> = support
        .iter()
        .map(|&r| {
            let z = g.hat_phi().values()[r];
            z / z.norm()
        })
        .collect();
    let n = g.grid().len();
    Ok(DualSystem {
        kind: DualKind::CanonicalTight,
        method: DualMethod::ExplicitFormula,
        source: SystemKind::Translates,
        grid: g.grid().clone(),
        points: lambda.points().to_vec(),
        rows: (0..n).collect(),
        synthesis: lift_rows(&support, n, &scale_rows(&phase, &e_sharp)),
    })
}

/// Tight-case Parseval generator `(1/√A_e)·φ̂/√Φ`.
pub fn tight_parseval_generator(g: &Generator, exp_bounds: &FrameBounds, tol: &Tolerances) -> Result<Generator> {
    require_tight(exp_bounds, tol)?;
    scaled_phase_generator(g, 1.0 / exp_bounds.a_opt.sqrt(), tol)
}

fn scaled_phase_generator(g: &Generator, factor: f64, tol: &Tolerances) -> Result<Generator> {
    let values = g
        .hat_phi()
        .values()
        .iter()
        .zip(g.support_mask())
        .map(|(z, &m)| if m { z / z.norm() * factor } else { C64::new(0.0, 0.0) })
        .collect();
    Generator::from_samples(GridVector::new(g.grid().clone(), values)?, tol.eps_supp)
}

/// Parseval test of one candidate scaling of the tight-case generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub label: String,
    pub factor: f64,
    pub max_span_eigen_deviation: f64,
    pub parseval: bool,
}

/// Tries the generator scalings `1/√A_e` and `1/A_e` and reports which one
/// yields a Parseval system of translates.
pub fn tight_parseval_scalings(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<Vec<ScalingCheck>> {
    let fe = frame_bounds(&exponential_system_on_support(g, lambda), tol.rank_cutoff)?;
    require_tight(&fe, tol)?;
    let a = fe.a_opt;
    [("1/sqrt(A_e)", 1.0 / a.sqrt()), ("1/A_e", 1.0 / a)]
        .into_iter()
        .map(|(label, factor)| {
            let theta = scaled_phase_generator(g, factor, tol)?;
            let fb = frame_bounds(&translate_system(&theta, lambda), tol.rank_cutoff)?;
            let dev =
                fb.eigen_spectrum.iter().filter(|&&v| v > fb.rank_cutoff).map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
            Ok(ScalingCheck {
                label: label.into(),
                factor,
                max_span_eigen_deviation: dev,
                parseval: dev <= tol.dual_tol,
            })
        })
        .collect()
}

/// Residuals of `D_θ = M_(φ̂/Φ) D̃_e` and `C_θ = C̃_e M_conj(φ̂/Φ)` with `θ`
/// the pseudo-inverse dual, plus the tight-case column identity when the
/// exponential system is tight.
pub fn dual_operator_identities(
    g: &Generator,
    lambda: &TranslateSet,
    tol: &Tolerances,
) -> Result<Vec<IdentityResidual>> {
    let sys_e = check_dual_hypotheses(g, lambda, tol)?;
    let t = tol.dual_tol;
    let n = g.grid().len();
    let theta = canonical_dual_translates(g, lambda, DualMethod::PseudoInverseOracle, tol)?;
    let dual_e = canonical_dual_exponentials(&sys_e, tol.rank_cutoff)?;
    let rows = sys_e.rows();
    let w: Vec<C64> = rows
        .iter()
        .map(|&r| {
            let z = g.hat_phi().values()[r];
            z / z.norm_sqr()
        })
        .collect();
    let w_conj: Vec<C64> = w.iter().map(|z| z.conj()).collect();
    let d_rhs = lift_rows(rows, n, &scale_rows(&w, &dual_e.synthesis));
    let c_rhs_restricted = scale_cols(&dual_e.analysis(), &w_conj);
    let mut c_rhs = CMatrix::zeros(lambda.len(), n);
    for (i, &r) in rows.iter().enumerate() {
        c_rhs.set_column(r, &c_rhs_restricted.column(i));
    }
    let domain = if g.full_support() { "E" } else { "supp(phi_hat)" };
    // dual vectors scale like 1/phi_hat
    let t = t * spectral_norm(&d_rhs).max(1.0);
    let mut out = vec![
        IdentityResidual::measured("D_theta", "D_theta = M_(phihat/Phi) D~_e", domain, &theta.synthesis, &d_rhs, t),
        IdentityResidual::measured(
            "C_theta",
            "C_theta = C~_e M_conj(phihat/Phi)",
            domain,
            &theta.analysis(),
            &c_rhs,
            t,
        ),
    ];
    let id = "D_theta e_k-column = (1/A) M_(1/conj phihat) e_k";
    let fe = frame_bounds(&sys_e, tol.rank_cutoff)?;
    out.push(if fe.is_tight(tol.residual_tol) {
        let theta_gen = tight_dual_generator(g, &fe, tol)?;
        IdentityResidual::measured(
            "tight",
            id,
            domain,
            &theta.synthesis,
            &translate_system(&theta_gen, lambda).synthesis,
            t,
        )
    } else {
        IdentityResidual::skipped("tight", id, format!("A_e = {} < B_e = {}", fe.a_opt, fe.b_opt), t)
    });
    Ok(out)
}

/// `‖Σ_k ⟨f, ψ̃_k⟩ ψ_k − f‖ / ‖f‖` and the swapped-role residual, for a
/// system and one of its duals.
pub fn duality_residuals(sys: &SystemMatrices, dual: &DualSystem, f: &[C64]) -> (f64, f64) {
    let fv = nalgebra::DVector::from_column_slice(f);
    let norm = fv.norm().max(f64::MIN_POSITIVE);
    let a = &sys.synthesis * (dual.synthesis.adjoint() * &fv) - &fv;
    let b = &dual.synthesis * (sys.synthesis.adjoint() * &fv) - &fv;
    (a.norm() / norm, b.norm() / norm)
}

/// Largest deviation of the frame operator's span eigenvalues from 1, and the
/// largest off-span eigenvalue.
pub fn parseval_deviation(dual: &DualSystem, rank_cutoff: f64) -> (f64, f64) {
    let eig = HermitianEigen::new(&dual.frame_operator());
    let c = eig.cutoff(rank_cutoff);
    let span = eig.values.iter().filter(|&&v| v > c).map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let off = eig.values.iter().filter(|&&v| v <= c).map(|v| v.abs()).fold(0.0, f64::max);
    (span, off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_generator, GeneratorKind};
    use crate::grid::{build_grid, exponential_vector, BoundedSet};
    use crate::linalg::max_abs;

    fn grid_on(a: f64, b: f64, n: usize) -> Arc<FrequencyGrid> {
        build_grid(BoundedSet::interval(a, b).unwrap(), n).unwrap()
    }

    fn gen(kind: GeneratorKind, grid: &Arc<FrequencyGrid>) -> Generator {
        make_generator(kind, grid, 1e-12).unwrap()
    }

    const IND: GeneratorKind = GeneratorKind::Indicator { a: -0.5, b: 0.5 };

    #[test]
    fn orthonormal_duals_are_self() {
        let grid = grid_on(-0.5, 0.5, 16);
        let sys = exponential_system(&TranslateSet::lattice(1.0, 0, 16).unwrap(), &grid);
        let dual = canonical_dual_exponentials(&sys, 1e-10).unwrap();
        assert!(max_abs(&(dual.synthesis.clone() - &sys.synthesis)) < 1e-12);
    }

    #[test]
    fn half_integer_duals_are_halved() {
        let n = 16;
        let grid = grid_on(-0.5, 0.5, n);
        let l = TranslateSet::lattice(0.5, 0, 2 * n).unwrap();
        let sys = exponential_system(&l, &grid);
        let dual = canonical_dual_exponentials(&sys, 1e-10).unwrap();
        assert!(max_abs(&(dual.synthesis.clone() - &sys.synthesis * C64::new(0.5, 0.0))) < 1e-12);

        let g = gen(IND, &grid);
        let tol = Tolerances::default();
        let theta = canonical_dual_translates(&g, &l, DualMethod::ExplicitFormula, &tol).unwrap();
        for k in [0, 7, 31] {
            let v = theta.vector(k).unwrap();
            let e = exponential_vector(l.points()[k], &grid);
            for (a, b) in v.values().iter().zip(e.values()) {
                assert!((a - b * 0.5).norm() < 1e-12);
            }
        }
        let fe = frame_bounds(&sys, 1e-10).unwrap();
        let tg = tight_dual_generator(&g, &fe, &tol).unwrap();
        assert!(tg.hat_phi().values().iter().all(|z| (z - C64::new(0.5, 0.0)).norm() < 1e-12));
        let via_gen = translate_system(&tg, &l);
        assert!(max_abs(&(via_gen.synthesis - &theta.synthesis)) < 1e-12);
    }

    #[test]
    fn exponential_duality_on_span() {
        let grid = grid_on(-0.5, 0.5, 24);
        let l = TranslateSet::jittered_lattice(0.9, 0, 14, 0.2, 11).unwrap();
        let sys = exponential_system(&l, &grid);
        let dual = canonical_dual_exponentials(&sys, 1e-10).unwrap();
        let c = nalgebra::DVector::from_fn(l.len(), |i, _| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
        let f: Vec<C64> = (&sys.synthesis * c).iter().copied().collect();
        let (a, b) = duality_residuals(&sys, &dual, &f);
        assert!(a < 1e-10 && b < 1e-10);
    }

    #[test]
    fn fejer_truncated_explicit_matches_oracle() {
        let grid = grid_on(-0.375, 0.375, 32);
        let g = gen(GeneratorKind::Fejer { w: 0.5 }, &grid);
        let l = TranslateSet::jittered_lattice(0.8, 0, 36, 0.125, 21).unwrap();
        let tol = Tolerances::default();
        let a = canonical_dual_translates(&g, &l, DualMethod::ExplicitFormula, &tol).unwrap();
        let b = canonical_dual_translates(&g, &l, DualMethod::PseudoInverseOracle, &tol).unwrap();
        assert!(a.max_column_distance(&b).unwrap() < 1e-8);
        assert_eq!(a.rank(1e-10), frame_bounds(&translate_system(&g, &l), 1e-10).unwrap().rank);
    }

    #[test]
    fn incomplete_exponentials_reject_explicit_formula() {
        let grid = grid_on(-0.5, 0.5, 32);
        let g = gen(GeneratorKind::TruncatedGaussian { sigma: 0.5 }, &grid);
        let l = TranslateSet::lattice(1.0, 0, 10).unwrap();
        let tol = Tolerances::default();
        assert!(matches!(
            canonical_dual_translates(&g, &l, DualMethod::ExplicitFormula, &tol),
            Err(Error::Precondition(_))
        ));
        assert!(canonical_dual_translates(&g, &l, DualMethod::PseudoInverseOracle, &tol).is_ok());
        assert!(parseval_system(&g, &l, &tol).is_err());
        // flat Φ keeps the formula canonical
        let ind = gen(IND, &grid);
        let a = canonical_dual_translates(&ind, &l, DualMethod::ExplicitFormula, &tol).unwrap();
        let b = canonical_dual_translates(&ind, &l, DualMethod::PseudoInverseOracle, &tol).unwrap();
        assert!(a.max_column_distance(&b).unwrap() < 1e-10);
    }

    #[test]
    fn gaussian_tight_dual_generator() {
        let n = 32;
        let grid = grid_on(-0.5, 0.5, n);
        let g = gen(GeneratorKind::TruncatedGaussian { sigma: 1.0 }, &grid);
        let l = TranslateSet::lattice(0.5, 0, 2 * n).unwrap();
        let tol = Tolerances::default();
        let fe = frame_bounds(&exponential_system(&l, &grid), 1e-10).unwrap();
        let tg = tight_dual_generator(&g, &fe, &tol).unwrap();
        for (z, &w) in tg.hat_phi().values().iter().zip(grid.nodes()) {
            assert!((z.re - (w * w / 2.0).exp() / 2.0).abs() < 1e-12);
        }
        let oracle = canonical_dual_translates(&g, &l, DualMethod::PseudoInverseOracle, &tol).unwrap();
        assert!(max_abs(&(translate_system(&tg, &l).synthesis - &oracle.synthesis)) < 1e-8);
        let bad = frame_bounds(
            &exponential_system(&TranslateSet::jittered_lattice(0.7, 0, 50, 0.2, 1).unwrap(), &grid),
            1e-10,
        )
        .unwrap();
        assert!(matches!(tight_dual_generator(&g, &bad, &tol), Err(Error::Precondition(_))));
    }

    #[test]
    fn inv_sqrt_closed_forms() {
        let n = 16;
        let grid = grid_on(-0.5, 0.5, n);
        let tol = Tolerances::default();
        let sys = exponential_system(&TranslateSet::lattice(1.0, 0, n).unwrap(), &grid);
        let r = inv_sqrt_frame_operator(&sys, &tol).unwrap();
        assert!(max_abs(&(r.matrix.clone() - CMatrix::identity(n, n))) < 1e-12);

        let sys = exponential_system(&TranslateSet::lattice(0.5, 0, 2 * n).unwrap(), &grid);
        let r = inv_sqrt_frame_operator(&sys, &tol).unwrap();
        let expected = CMatrix::identity(n, n) * C64::new(0.5f64.sqrt(), 0.0);
        assert!(max_abs(&(r.matrix.clone() - expected)) < 1e-12);
        assert!(r.checks.iter().all(|c| c.passed()), "{:?}", r.checks);
        assert!(r.checks.iter().find(|c| c.id == "tight").unwrap().residual.is_some());

        // tight case with a non-flat generator: S_φ^{-1/2} = M_(1/(√2 |φ̂|))
        let g = gen(GeneratorKind::TruncatedGaussian { sigma: 0.7 }, &grid);
        let r = inv_sqrt_frame_operator(&translate_system(&g, &TranslateSet::lattice(0.5, 0, 2 * n).unwrap()), &tol)
            .unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(r.checks[1].skipped.as_deref(), Some("Phi is not identically 1"));
        assert!(r.checks[2].residual.is_some());

        // unimodular φ̂ with non-tight exponentials
        let re: Vec<f64> = grid.nodes().iter().map(|w| (3.0 * w).cos()).collect();
        let im: Vec<f64> = grid.nodes().iter().map(|w| (3.0 * w).sin()).collect();
        let u = make_generator(GeneratorKind::Table { re, im: Some(im) }, &grid, 1e-12).unwrap();
        let l = TranslateSet::jittered_lattice(0.8, 0, 24, 0.2, 5).unwrap();
        let r = inv_sqrt_frame_operator(&translate_system(&u, &l), &tol).unwrap();
        assert!(r.checks[1].residual.unwrap() < 1e-10, "{:?}", r.checks[1]);
    }

    #[test]
    fn parseval_is_projector_with_same_span() {
        let grid = grid_on(-0.5, 0.5, 24);
        let g = gen(GeneratorKind::RaisedCosine { beta: 0.5 }, &grid);
        let l = TranslateSet::jittered_lattice(0.75, 0, 36, 0.15, 8).unwrap();
        let tol = Tolerances::default();
        let p = parseval_system(&g, &l, &tol).unwrap();
        let (span, off) = parseval_deviation(&p, 1e-10);
        assert!(span < 1e-8 && off < 1e-10);
        assert_eq!(p.rank(1e-10), frame_bounds(&translate_system(&g, &l), 1e-10).unwrap().rank);
    }

    #[test]
    fn parseval_orthonormal_case_is_identity_map() {
        let n = 16;
        let grid = grid_on(-0.5, 0.5, n);
        let l = TranslateSet::lattice(1.0, 0, n).unwrap();
        let p = parseval_system(&gen(IND, &grid), &l, &Tolerances::default()).unwrap();
        assert!(max_abs(&(p.synthesis.clone() - exponential_system(&l, &grid).synthesis)) < 1e-12);
    }

    #[test]
    fn tight_scaling_selects_inverse_sqrt() {
        let n = 16;
        let grid = grid_on(-0.5, 0.5, n);
        let g = gen(GeneratorKind::TruncatedGaussian { sigma: 0.6 }, &grid);
        let l = TranslateSet::lattice(0.5, 0, 2 * n).unwrap();
        let tol = Tolerances::default();
        let checks = tight_parseval_scalings(&g, &l, &tol).unwrap();
        assert!(checks[0].parseval && !checks[1].parseval, "{checks:?}");
        let fe = frame_bounds(&exponential_system(&l, &grid), 1e-10).unwrap();
        let tg = tight_parseval_generator(&g, &fe, &tol).unwrap();
        let p = parseval_system(&g, &l, &tol).unwrap();
        assert!(max_abs(&(translate_system(&tg, &l).synthesis - &p.synthesis)) < 1e-10);
    }

    #[test]
    fn dual_identities_hold() {
        let grid = grid_on(-0.5, 0.5, 24);
        let g = gen(GeneratorKind::TruncatedGaussian { sigma: 0.5 }, &grid);
        let l = TranslateSet::jittered_lattice(0.8, 0, 34, 0.125, 3).unwrap();
        let rep = dual_operator_identities(&g, &l, &Tolerances::default()).unwrap();
        assert!(rep[0].passed() && rep[1].passed(), "{rep:?}");
        assert!(rep[2].skipped.is_some());

        let l = TranslateSet::lattice(0.5, 0, 48).unwrap();
        let rep = dual_operator_identities(&g, &l, &Tolerances::default()).unwrap();
        assert!(rep.iter().all(|r| r.passed() && r.residual.is_some()), "{rep:?}");
    }

    #[test]
    fn dual_of_dual_is_original() {
        let grid = grid_on(-0.5, 0.5, 20);
        let g = gen(GeneratorKind::Fejer { w: 0.5 }, &grid);
        let l = TranslateSet::jittered_lattice(0.8, 0, 30, 0.1, 2).unwrap();
        let tol = Tolerances::default();
        let theta = canonical_dual_translates(&g, &l, DualMethod::PseudoInverseOracle, &tol).unwrap();
        let s = HermitianEigen::new(&theta.frame_operator());
        let back = s.pseudo_inverse(tol.rank_cutoff) * &theta.synthesis;
        assert!(max_abs(&(back - &translate_system(&g, &l).synthesis)) < 1e-8);
    }
}
