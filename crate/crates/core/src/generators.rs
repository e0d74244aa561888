//! Bandlimited generators held by their Fourier samples, plus the
//! pseudo-Gramian `Φ = |φ̂|²` and its Fourier transform `Φ̂`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grid::{FrequencyGrid, GridVector};
use crate::{Error, Result, C64};

/// Closed-form generator families (frequency-side definitions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorKind {
    /// `φ̂ = χ_[a,b]`.
    Indicator { a: f64, b: f64 },
    /// Triangle `φ̂(ω) = max(0, 1 − |ω|/w)`.
    Fejer { w: f64 },
    /// Raised-cosine spectrum with unit symbol period and roll-off `beta`.
    RaisedCosine { beta: f64 },
    /// `φ̂(ω) = exp(−ω²/(2σ²))`, truncated to `E`.
    TruncatedGaussian { sigma: f64 },
    /// Explicit samples, one per grid node.
    Table {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Indicator { .. } => "indicator",
            Self::Fejer { .. } => "fejer",
            Self::RaisedCosine { .. } => "raised_cosine",
            Self::TruncatedGaussian { .. } => "truncated_gaussian",
            Self::Table { .. } => "table",
        }
    }

    fn validate(&self, grid: &FrequencyGrid) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match *self {
            Self::Indicator { a, b } if !(a.is_finite() && b.is_finite() && a < b) => {
                bad(format!("indicator needs a < b, got [{a}, {b}]"))
            }
            Self::Fejer { w } if !(w.is_finite() && w > 0.0) => bad(format!("fejer needs w > 0, got {w}")),
            Self::RaisedCosine { beta } if !(0.0..=1.0).contains(&beta) => {
                bad(format!("raised_cosine needs 0 <= beta <= 1, got {beta}"))
            }
            Self::TruncatedGaussian { sigma } if !(sigma.is_finite() && sigma > 0.0) => {
                bad(format!("truncated_gaussian needs sigma > 0, got {sigma}"))
            }
            Self::Table { ref re, ref im } => {
                if re.len() != grid.len() || im.as_ref().is_some_and(|im| im.len() != grid.len()) {
                    return bad(format!("table needs {} samples per component", grid.len()));
                }
                if re.iter().chain(im.iter().flatten()).any(|v| !v.is_finite()) {
                    return bad("table samples must be finite".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn sample(&self, w: f64) -> f64 {
        match *self {
            Self::Indicator { a, b } => {
                if a <= w && w <= b {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Fejer { w: width } => (1.0 - w.abs() / width).max(0.0),
            Self::RaisedCosine { beta } => raised_cosine(beta, w),
            Self::TruncatedGaussian { sigma } => (-w * w / (2.0 * sigma * sigma)).exp(),
            Self::Table { .. } => unreachable!("table kinds are sampled directly"),
        }
    }
}

fn raised_cosine(beta: f64, w: f64) -> f64 {
    let a = w.abs();
    let inner = (1.0 - beta) / 2.0;
    let outer = (1.0 + beta) / 2.0;
    if a <= inner {
        1.0
    } else if a <= outer {
        0.5 * (1.0 + (PI / beta * (a - inner)).cos())
    } else {
        0.0
    }
}

/// Closed forms of `Φ̂` available for some kinds.
#[derive(Debug, Clone, PartialEq)]
enum AnalyticTransform {
    /// `Φ = χ` on these pieces (the indicator intersected with `E`).
    Pieces(Vec<[f64; 2]>),
    /// `Φ(ω) = (1 − |ω|/w)²` on `[−w, w] ⊆ E`.
    FejerSquared(f64),
}

impl AnalyticTransform {
    fn eval(&self, x: f64) -> C64 {
        match self {
            Self::Pieces(pieces) => pieces
                .iter()
                .map(|&[l, r]| {
                    let len = r - l;
                    C64::from_polar(len * sinc(len * x), -PI * x * (l + r))
                })
                .sum(),
            Self::FejerSquared(w) => {
                let a = 2.0 * PI * x * w;
                C64::new(4.0 * w * cubic_remainder(a), 0.0)
            }
        }
    }
}

/// `sin(πt)/(πt)`, 1 at 0.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        let pt = PI * t;
        pt.sin() / pt
    }
}

/// `(a − sin a)/a³`, evaluated by series near zero.
fn cubic_remainder(a: f64) -> f64 {
    if a.abs() < 0.1 {
        let a2 = a * a;
        1.0 / 6.0 - a2 / 120.0 + a2 * a2 / 5040.0 - a2 * a2 * a2 / 362_880.0
    } else {
        (a - a.sin()) / (a * a * a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformMode {
    Analytic,
    Quadrature,
}

/// A generator `φ`, stored as `φ̂` on a frequency grid.
#[derive(Debug, Clone)]
pub struct Generator {
    kind: GeneratorKind,
    hat_phi: GridVector,
    support_mask: Vec<bool>,
    eps_supp: f64,
    analytic: Option<AnalyticTransform>,
}

/// Sample `kind` on `grid`. `eps_supp_rel` is relative to `max |φ̂|`.
pub fn make_generator(kind: GeneratorKind, grid: &Arc<FrequencyGrid>, eps_supp_rel: f64) -> Result<Generator> {
    if !(eps_supp_rel >= 0.0 && eps_supp_rel.is_finite()) {
        return Err(Error::Config(format!("eps_supp must be nonnegative, got {eps_supp_rel}")));
    }
    kind.validate(grid)?;
    let hat_phi = match &kind {
        GeneratorKind::Table { re, im } => {
            let values =
                re.iter().enumerate().map(|(n, &r)| C64::new(r, im.as_ref().map_or(0.0, |im| im[n]))).collect();
            GridVector::new(grid.clone(), values)?
        }
        k => GridVector::from_fn(grid.clone(), |w| C64::new(k.sample(w), 0.0)),
    };
    let analytic = match kind {
        GeneratorKind::Indicator { a, b } => Some(AnalyticTransform::Pieces(grid.set().intersect(a, b))),
        GeneratorKind::Fejer { w } => {
            grid.set().intervals().iter().any(|&[l, r]| l <= -w && w <= r).then_some(AnalyticTransform::FejerSquared(w))
        }
        _ => None,
    };
    Generator::assemble(kind, hat_phi, eps_supp_rel, analytic)
}

impl Generator {
    /// Generator from explicit `φ̂` samples (a `table` kind).
    pub fn from_samples(hat_phi: GridVector, eps_supp_rel: f64) -> Result<Self> {
        let kind = GeneratorKind::Table {
            re: hat_phi.values().iter().map(|z| z.re).collect(),
            im: Some(hat_phi.values().iter().map(|z| z.im).collect()),
        };
        Self::assemble(kind, hat_phi, eps_supp_rel, None)
    }

    fn assemble(
        kind: GeneratorKind,
        hat_phi: GridVector,
        eps_supp_rel: f64,
        analytic: Option<AnalyticTransform>,
    ) -> Result<Self> {
        let peak = hat_phi.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 || hat_phi.norm_sq() <= 0.0 {
            return Err(Error::Config(format!("{} generator is identically zero on E", kind.name())));
        }
        let eps_supp = eps_supp_rel * peak;
        let support_mask = hat_phi.values().iter().map(|z| z.norm() > eps_supp).collect();
        Ok(Self { kind, hat_phi, support_mask, eps_supp, analytic })
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }
    pub fn hat_phi(&self) -> &GridVector {
        &self.hat_phi
    }
    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        self.hat_phi.grid()
    }
    pub fn support_mask(&self) -> &[bool] {
        &self.support_mask
    }
    /// Absolute support threshold.
    pub fn eps_supp(&self) -> f64 {
        self.eps_supp
    }
    pub fn has_analytic_transform(&self) -> bool {
        self.analytic.is_some()
    }

    /// Indices of grid nodes inside `supp(φ̂)`.
    pub fn support_indices(&self) -> Vec<usize> {
        self.support_mask.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect()
    }

    pub fn full_support(&self) -> bool {
        self.support_mask.iter().all(|&m| m)
    }

    /// `‖φ‖² = ⟨φ̂, φ̂⟩`.
    pub fn norm_sq(&self) -> f64 {
        self.hat_phi.norm_sq()
    }

    /// `ψ†`-style reciprocal of `φ̂`: `1/φ̂` on the support, 0 off it.
    pub fn hat_phi_dagger(&self) -> Vec<C64> {
        self.hat_phi
            .values()
            .iter()
            .zip(&self.support_mask)
            .map(|(&z, &m)| if m { z.inv() } else { C64::new(0.0, 0.0) })
            .collect()
    }
}

/// `Φ = |φ̂|²` as a grid vector.
pub fn pseudo_gramian(g: &Generator) -> GridVector {
    g.hat_phi.map(|z| C64::new(z.norm_sqr(), 0.0))
}

/// `Φ̂(x) = ∫ Φ(ω) e^{−2πixω} dω`, by closed form or midpoint quadrature.
pub fn phi_hat_transform(g: &Generator, x: f64, mode: TransformMode) -> Result<C64> {
    match mode {
        TransformMode::Analytic => {
            g.analytic.as_ref().map(|a| a.eval(x)).ok_or_else(|| Error::UnsupportedMode(g.kind.name().into()))
        }
        TransformMode::Quadrature => Ok(quadrature_transform(g, x)),
    }
}

pub(crate) fn quadrature_transform(g: &Generator, x: f64) -> C64 {
    let grid = g.grid();
    g.hat_phi
        .values()
        .iter()
        .zip(grid.nodes())
        .zip(grid.weights())
        .map(|((z, &w), &h)| C64::from_polar(h * z.norm_sqr(), -2.0 * PI * x * w))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, BoundedSet};

    fn unit_grid(n: usize) -> Arc<FrequencyGrid> {
        build_grid(BoundedSet::interval(-0.5, 0.5).unwrap(), n).unwrap()
    }

    #[test]
    fn indicator_is_all_ones() {
        let g = make_generator(GeneratorKind::Indicator { a: -0.5, b: 0.5 }, &unit_grid(16), 1e-12).unwrap();
        assert!(g.hat_phi().values().iter().all(|z| *z == C64::new(1.0, 0.0)));
        assert!(g.full_support());
        let phi = pseudo_gramian(&g);
        assert!(phi.values().iter().all(|z| *z == C64::new(1.0, 0.0)));
    }

    #[test]
    fn fejer_triangle_and_square() {
        let grid = unit_grid(32);
        let g = make_generator(GeneratorKind::Fejer { w: 0.5 }, &grid, 1e-12).unwrap();
        let phi = pseudo_gramian(&g);
        for ((z, p), &w) in g.hat_phi().values().iter().zip(phi.values()).zip(grid.nodes()) {
            let t = 1.0 - 2.0 * w.abs();
            assert!((z.re - t).abs() < 1e-15);
            assert!((p.re - t * t).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_endpoint_values() {
        let grid = unit_grid(64);
        let g = make_generator(GeneratorKind::TruncatedGaussian { sigma: 1.0 }, &grid, 1e-12).unwrap();
        let min = g.hat_phi().values().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let outer = grid.nodes()[0];
        assert!((min - (-outer * outer / 2.0).exp()).abs() < 1e-15);
        // the outermost node sits h/2 inside the endpoint, so the value exceeds e^{-1/8}
        assert!(min > (-0.125f64).exp() && min - (-0.125f64).exp() < 1e-2);
    }

    #[test]
    fn support_mask_excludes_zeros() {
        let grid = unit_grid(32);
        let g = make_generator(GeneratorKind::Fejer { w: 0.25 }, &grid, 1e-12).unwrap();
        let phi = pseudo_gramian(&g);
        for ((m, p), &w) in g.support_mask().iter().zip(phi.values()).zip(grid.nodes()) {
            assert_eq!(*m, w.abs() < 0.25);
            assert!(p.re >= 0.0);
            if !m {
                assert_eq!(p.re, 0.0);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        let grid = unit_grid(8);
        for kind in [
            GeneratorKind::Fejer { w: 0.0 },
            GeneratorKind::RaisedCosine { beta: 1.5 },
            GeneratorKind::TruncatedGaussian { sigma: -1.0 },
            GeneratorKind::Indicator { a: 1.0, b: 0.0 },
            GeneratorKind::Table { re: vec![1.0; 3], im: None },
        ] {
            assert!(matches!(make_generator(kind, &grid, 1e-12), Err(Error::Config(_))));
        }
        let zero = GeneratorKind::Table { re: vec![0.0; 8], im: None };
        assert!(matches!(make_generator(zero, &grid, 1e-12), Err(Error::Config(_))));
        // indicator disjoint from E is zero too
        let off = GeneratorKind::Indicator { a: 2.0, b: 3.0 };
        assert!(make_generator(off, &grid, 1e-12).is_err());
    }

    #[test]
    fn indicator_transform_values() {
        let g = make_generator(GeneratorKind::Indicator { a: -0.5, b: 0.5 }, &unit_grid(1024), 1e-12).unwrap();
        let a0 = phi_hat_transform(&g, 0.0, TransformMode::Analytic).unwrap();
        assert!((a0 - C64::new(1.0, 0.0)).norm() < 1e-15);
        let a1 = phi_hat_transform(&g, 1.0, TransformMode::Analytic).unwrap();
        assert!(a1.norm() < 1e-15);
        let x = 0.3;
        let exact = (PI * x).sin() / (PI * x);
        let q = phi_hat_transform(&g, x, TransformMode::Quadrature).unwrap();
        let a = phi_hat_transform(&g, x, TransformMode::Analytic).unwrap();
        assert!((a.re - exact).abs() < 1e-15);
        assert!((q - a).norm() < 1e-6);
    }

    #[test]
    fn fejer_closed_form_matches_fine_quadrature() {
        let g = make_generator(GeneratorKind::Fejer { w: 0.5 }, &unit_grid(4096), 1e-12).unwrap();
        for x in [0.0, 1e-3, 0.05, 0.5, 0.9, 2.3] {
            let a = phi_hat_transform(&g, x, TransformMode::Analytic).unwrap();
            let q = phi_hat_transform(&g, x, TransformMode::Quadrature).unwrap();
            assert!((a - q).norm() < 1e-6, "x={x} a={a} q={q}");
        }
        // Φ̂(0) = ∫(1−2|ω|)² = 1/3
        let a0 = phi_hat_transform(&g, 0.0, TransformMode::Analytic).unwrap();
        assert!((a0.re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_has_no_closed_form() {
        let g = make_generator(GeneratorKind::TruncatedGaussian { sigma: 1.0 }, &unit_grid(8), 1e-12).unwrap();
        assert_eq!(
            phi_hat_transform(&g, 0.0, TransformMode::Analytic),
            Err(Error::UnsupportedMode("truncated_gaussian".into()))
        );
    }

    #[test]
    fn fejer_wider_than_e_has_no_closed_form() {
        let g = make_generator(GeneratorKind::Fejer { w: 1.0 }, &unit_grid(8), 1e-12).unwrap();
        assert!(!g.has_analytic_transform());
    }

    #[test]
    fn partial_indicator_closed_form_is_offset_sinc() {
        let grid = build_grid(BoundedSet::new(vec![[-0.5, 0.5], [1.0, 1.5]]).unwrap(), 2048).unwrap();
        let g = make_generator(GeneratorKind::Indicator { a: 0.25, b: 1.25 }, &grid, 1e-12).unwrap();
        for x in [0.0, 0.4, 1.7] {
            let a = phi_hat_transform(&g, x, TransformMode::Analytic).unwrap();
            let q = phi_hat_transform(&g, x, TransformMode::Quadrature).unwrap();
            assert!((a - q).norm() < 1e-5, "x={x} a={a} q={q}");
        }
    }
}
