//! Sampling and reconstruction with the canonical dual: samples
//! `⟨f, T_λk φ⟩`, then `f ≈ Σ_k ⟨f, T_λk φ⟩ θ_k`.

use itframe::linalg::HermitianEigen;
use itframe::{
    canonical_dual_translates, translate_system, DualMethod, Generator, GridVector, Tolerances, TranslateSet, C64,
};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{SignalSource, SignalSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEvaluation {
    pub x: f64,
    pub f_re: f64,
    pub f_im: f64,
    pub rec_re: f64,
    pub rec_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionResult {
    pub signal: String,
    pub method: DualMethod,
    pub samples: usize,
    /// `‖f − f_rec‖ / ‖f‖` in the grid norm.
    pub relative_error: f64,
    /// `‖f − P f‖ / ‖f‖`, with `P` the projector onto the span computed from
    /// the Gram pseudo-inverse.
    pub distance_to_span: f64,
    pub in_span: bool,
    pub evaluations: Vec<PointEvaluation>,
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn reconstruct(
    g: &Generator,
    lambda: &TranslateSet,
    spec: &SignalSpec,
    tol: &Tolerances,
    rng: &mut ChaCha8Rng,
) -> itframe::Result<ReconstructionResult> {
    let sys = translate_system(g, lambda);
    let k = lambda.len();
    let grid = g.grid().clone();
    let (label, f_scaled, in_span): (String, DVector<C64>, bool) = match &spec.source {
        SignalSource::Random => {
            let c = DVector::from_fn(k, |_, _| random_c64(rng));
            ("random".into(), &sys.synthesis * c, true)
        }
        SignalSource::Element { index } => {
            if *index >= k {
                return Err(itframe::Error::Config(format!("element index {index} out of range (K = {k})")));
            }
            (format!("element {index}"), sys.synthesis.column(*index).into_owned(), true)
        }
        SignalSource::Coefficients { re, im } => {
            if re.len() != k || im.as_ref().is_some_and(|im| im.len() != k) {
                return Err(itframe::Error::Dimension { expected: k, got: re.len() });
            }
            let c = DVector::from_fn(k, |i, _| C64::new(re[i], im.as_ref().map_or(0.0, |v| v[i])));
            ("coefficients".into(), &sys.synthesis * c, true)
        }
        SignalSource::OffSpan => {
            let f = DVector::from_fn(grid.len(), |_, _| random_c64(rng));
            ("off_span".into(), f, false)
        }
    };

    let theta = canonical_dual_translates(g, lambda, DualMethod::ExplicitFormula, tol)?;
    let samples = sys.analysis() * &f_scaled;
    let rec = &theta.synthesis * &samples;
    let norm = f_scaled.norm().max(f64::MIN_POSITIVE);
    let relative_error = (&f_scaled - &rec).norm() / norm;

    let gram_pinv = HermitianEigen::new(&sys.gram).pseudo_inverse(tol.rank_cutoff);
    let projected = &sys.synthesis * (gram_pinv * &samples);
    let distance_to_span = (&f_scaled - projected).norm() / norm;

    let to_grid = |v: &DVector<C64>| GridVector::from_scaled(grid.clone(), v.as_slice());
    let f_vec = to_grid(&f_scaled)?;
    let rec_vec = to_grid(&rec)?;
    let evaluations = spec
        .eval_points
        .iter()
        .map(|&x| {
            let a = f_vec.inverse_transform_at(x);
            let b = rec_vec.inverse_transform_at(x);
            PointEvaluation { x, f_re: a.re, f_im: a.im, rec_re: b.re, rec_im: b.im }
        })
        .collect();

    Ok(ReconstructionResult {
        signal: label,
        method: theta.method,
        samples: k,
        relative_error,
        distance_to_span,
        in_span,
        evaluations,
    })
}
