//! Optimal frame bounds on spans and the certificates that compare the
//! exponential system with the translate system through `p ≤ Φ ≤ P`.

use serde::Serialize;

use crate::generators::Generator;
use crate::gramian::{Certificate, TranslateSet, Verdict};
use crate::linalg::HermitianEigen;
use crate::operators::{exponential_system, exponential_system_on_support, translate_system, SystemMatrices};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameBounds {
    pub a_opt: f64,
    pub b_opt: f64,
    pub rank: usize,
    /// Gram eigenvalues, ascending.
    pub eigen_spectrum: Vec<f64>,
    /// Absolute cutoff separating the span from its zero modes.
    pub rank_cutoff: f64,
}

impl FrameBounds {
    pub fn is_tight(&self, rel_tol: f64) -> bool {
        self.b_opt - self.a_opt <= rel_tol * self.b_opt
    }
}

/// Optimal bounds of a finite system as a frame for its span, read off the
/// nonzero Gram spectrum. `rank_cutoff` is relative to the largest eigenvalue.
pub fn frame_bounds(sys: &SystemMatrices, rank_cutoff: f64) -> Result<FrameBounds> {
    if sys.is_empty() {
        return Err(Error::Precondition("frame bounds of an empty system".into()));
    }
    let eig = HermitianEigen::new(&sys.gram);
    let cutoff = eig.cutoff(rank_cutoff);
    let span: Vec<f64> = eig.values.iter().copied().filter(|&v| v > cutoff).collect();
    if span.is_empty() || eig.max() <= 0.0 {
        return Err(Error::ZeroSystem { cutoff });
    }
    Ok(FrameBounds {
        a_opt: span[0],
        b_opt: *span.last().expect("nonempty"),
        rank: span.len(),
        eigen_spectrum: eig.values,
        rank_cutoff: cutoff,
    })
}

/// Range of `Φ`: `(p on supp φ̂, P, p over all of E)`.
pub(crate) fn phi_range(g: &Generator) -> (f64, f64, f64) {
    let vals = g.hat_phi().values();
    let mut p = f64::INFINITY;
    let mut big = 0.0f64;
    for (z, &m) in vals.iter().zip(g.support_mask()) {
        if m {
            p = p.min(z.norm_sqr());
            big = big.max(z.norm_sqr());
        }
    }
    let p = if p.is_finite() { p } else { 0.0 };
    let p_grid = if g.full_support() { p } else { 0.0 };
    (p, big, p_grid)
}

/// Bessel-bound transfer: `B_φ ≤ B_e·P`, and `B_e ≤ B_φ/p` when `Φ ≥ p > 0` on `E`.
pub fn bound_transfer_check(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<Certificate> {
    let (_, big_p, p_grid) = phi_range(g);
    let be = frame_bounds(&exponential_system(lambda, g.grid()), tol.rank_cutoff)?.b_opt;
    let bphi = frame_bounds(&translate_system(g, lambda), tol.rank_cutoff)?.b_opt;
    let mut c = Certificate::new("bound_transfer", "B_phi <= B_e * P; B_e <= B_phi / p", lambda.len())
        .with("B_e", be)
        .with("B_phi", bphi)
        .with("P", big_p)
        .with("p", p_grid);
    let upper = Tolerances::le(bphi, be * big_p, tol.residual_tol);
    let lower = if p_grid > 0.0 {
        Tolerances::le(be, bphi / p_grid, tol.residual_tol)
    } else {
        c.notes.push("Phi vanishes on part of E: B_e <= B_phi / p skipped".into());
        true
    };
    c = c.with("upper_slack", be * big_p - bphi);
    if p_grid > 0.0 {
        c = c.with("lower_slack", bphi / p_grid - be);
    }
    c.verdict = Verdict::from_bool(upper && lower);
    Ok(c)
}

/// `p·A_e ≤ A_φ ≤ P·A_e` and `B_φ ≤ P·B_e`, with the exponentials taken in
/// `L²(supp φ̂)`.
pub fn bound_sandwich_check(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<Certificate> {
    let (p, big_p, _) = phi_range(g);
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Precondition(format!("Phi has no positive lower bound on supp(phi_hat) (p = {p:e})")));
    }
    let fe = frame_bounds(&exponential_system_on_support(g, lambda), tol.rank_cutoff)?;
    let fphi = frame_bounds(&translate_system(g, lambda), tol.rank_cutoff)?;
    let t = tol.residual_tol;
    let ok = Tolerances::le(p * fe.a_opt, fphi.a_opt, t)
        && Tolerances::le(fphi.a_opt, big_p * fe.a_opt, t)
        && Tolerances::le(fphi.b_opt, big_p * fe.b_opt, t);
    let mut c = Certificate::new("bound_sandwich", "p*A_e <= A_phi <= P*A_e; B_phi <= P*B_e", lambda.len())
        .with("p", p)
        .with("P", big_p)
        .with("A_e", fe.a_opt)
        .with("B_e", fe.b_opt)
        .with("A_phi", fphi.a_opt)
        .with("B_phi", fphi.b_opt)
        .with("rank_e", fe.rank as f64)
        .with("rank_phi", fphi.rank as f64)
        .with("lower_slack", fphi.a_opt - p * fe.a_opt)
        .with("upper_slack", big_p * fe.a_opt - fphi.a_opt)
        .with("bessel_slack", big_p * fe.b_opt - fphi.b_opt);
    c.verdict = Verdict::from_bool(ok);
    Ok(c)
}

/// Numerical shadow of the three-way equivalence between frame properties of
/// `{e_λk}` in `L²(supp φ̂)`, of `{T_λk φ}` in `PW_supp φ̂`, and `p ≤ Φ ≤ P`.
///
/// Condition (c) counts as holding when `p/P ≥ ess_floor`. The Riesz variant
/// requires the bound over all of `E`.
pub fn equivalence_certificate(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<Certificate> {
    let (p, big_p, p_grid) = phi_range(g);
    let k = lambda.len();
    let n_supp = g.support_indices().len();
    let mut c = Certificate::new(
        "equivalence",
        "(c) p <= Phi <= P on supp(phi_hat)  =>  (a) exponentials frame <=> (b) translates frame",
        k,
    )
    .with("p", p)
    .with("P", big_p)
    .with("p_over_E", p_grid)
    .with("ess_floor", tol.ess_floor)
    .with("dim_supp", n_supp as f64);

    let floor = tol.ess_floor * big_p;
    let vals = g.hat_phi().values();
    let violating: Vec<usize> =
        (0..vals.len()).filter(|&n| g.support_mask()[n] && vals[n].norm_sqr() < floor).collect();
    let cond_supp = violating.is_empty() && p > 0.0;
    let cond_e = cond_supp && p_grid >= floor;
    c = c.with("c_on_supp", cond_supp as u8 as f64).with("c_on_E", cond_e as u8 as f64);

    let fe = frame_bounds(&exponential_system_on_support(g, lambda), tol.rank_cutoff)?;
    let fphi = frame_bounds(&translate_system(g, lambda), tol.rank_cutoff)?;
    c = c
        .with("rank_e", fe.rank as f64)
        .with("rank_phi", fphi.rank as f64)
        .with("A_e", fe.a_opt)
        .with("A_phi", fphi.a_opt);

    if !cond_supp {
        let first = violating[0];
        c = c
            .with("violating_nodes", violating.len() as f64)
            .with("first_violating_node", first as f64)
            .with("first_violating_frequency", g.grid().nodes()[first]);
        c.notes.push(format!(
            "condition (c) fails at {} node(s) of supp(phi_hat), first at omega = {}; the (a)<=>(b) bridge is not certified",
            violating.len(),
            g.grid().nodes()[first]
        ));
        c.verdict = Verdict::Inconclusive;
        return Ok(c);
    }

    let e_frame = fe.rank == n_supp;
    let phi_frame = fphi.rank == n_supp;
    let sandwich = Tolerances::le(p * fe.a_opt, fphi.a_opt, tol.residual_tol)
        && Tolerances::le(fphi.a_opt, big_p * fe.a_opt, tol.residual_tol);
    c = c
        .with("e_frame", e_frame as u8 as f64)
        .with("phi_frame", phi_frame as u8 as f64)
        .with("e_riesz", (fe.rank == k) as u8 as f64)
        .with("phi_riesz", (fphi.rank == k) as u8 as f64);
    if !cond_e {
        c.notes.push("Riesz variant needs p <= Phi on all of E; not certified".into());
    }
    // finite systems are always frame sequences of their span; only the
    // complete-frame and Riesz bridges carry information
    c.verdict = Verdict::from_bool(e_frame == phi_frame && fe.rank == fphi.rank && sandwich);
    Ok(c)
}

/// Exactness in the finite model: the Gram matrix has full rank above cutoff.
pub fn exactness_check(sys: &SystemMatrices, rank_cutoff: f64) -> Result<Certificate> {
    let fb = frame_bounds(sys, rank_cutoff)?;
    let k = sys.len();
    let mut c = Certificate::new("exactness", "exact <=> rank(G) = K", k)
        .with("rank", fb.rank as f64)
        .with("rank_deficiency", (k - fb.rank) as f64)
        .with("exact", (fb.rank == k) as u8 as f64)
        .with("smallest_eigenvalue", fb.eigen_spectrum[0]);
    c.verdict = Verdict::Informational;
    Ok(c)
}

/// Exactness of translates versus exponentials in `L²(E)`: translates exact
/// implies exponentials exact, and the converse holds when `Φ ≥ p > 0` on `E`.
pub fn exactness_bridge(g: &Generator, lambda: &TranslateSet, tol: &Tolerances) -> Result<Certificate> {
    let (_, big_p, p_grid) = phi_range(g);
    let ce = exactness_check(&exponential_system(lambda, g.grid()), tol.rank_cutoff)?;
    let cphi = exactness_check(&translate_system(g, lambda), tol.rank_cutoff)?;
    let ex_e = ce.constant("exact") == Some(1.0);
    let ex_phi = cphi.constant("exact") == Some(1.0);
    let mut c =
        Certificate::new("exactness_bridge", "T exact => e exact; p > 0 on E: T exact <=> e exact", lambda.len())
            .with("exact_e", ex_e as u8 as f64)
            .with("exact_phi", ex_phi as u8 as f64)
            .with("rank_e", ce.constant("rank").unwrap_or(0.0))
            .with("rank_phi", cphi.constant("rank").unwrap_or(0.0))
            .with("p_over_E", p_grid);
    let forward = !ex_phi || ex_e;
    c.verdict = if !forward {
        Verdict::Fail
    } else if p_grid >= tol.ess_floor * big_p {
        Verdict::from_bool(ex_e == ex_phi)
    } else if ex_phi {
        Verdict::Pass
    } else {
        c.notes.push("Phi not bounded below on E: converse not applicable".into());
        Verdict::Inconclusive
    };
    Ok(c)
}
