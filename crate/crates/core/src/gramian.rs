//! Gram matrices of translate systems built from `Φ̂`, and the Gram-level
//! certificates: Schur (Bessel sufficiency), row ℓ² sums (Bessel necessity)
//! and diagonal dominance (Riesz sufficiency).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generators::{phi_hat_transform, Generator, TransformMode};
use crate::linalg::{CMatrix, HermitianEigen};
use crate::{Error, Result, C64};

/// How a point set was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Provenance {
    Explicit,
    Lattice { step: f64, start: i64 },
    JitteredLattice { step: f64, start: i64, jitter: f64, seed: u64 },
}

/// Finite set of translation points `λ_k`, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslateSet {
    points: Vec<f64>,
    provenance: Provenance,
}

impl TranslateSet {
    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        Self::checked(points, Provenance::Explicit)
    }

    /// `λ_k = (start + k)·step` for `k = 0..count`.
    pub fn lattice(step: f64, start: i64, count: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Config(format!("lattice step must be positive, got {step}")));
        }
        let points = (0..count).map(|k| (start + k as i64) as f64 * step).collect();
        Self::checked(points, Provenance::Lattice { step, start })
    }

    /// Lattice points perturbed by independent `U(−jitter, jitter)` offsets.
    pub fn jittered_lattice(step: f64, start: i64, count: usize, jitter: f64, seed: u64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Config(format!("lattice step must be positive, got {step}")));
        }
        if !(jitter.is_finite() && jitter >= 0.0) {
            return Err(Error::Config(format!("jitter must be nonnegative, got {jitter}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|k| {
                let offset = if jitter > 0.0 { rng.random_range(-jitter..=jitter) } else { 0.0 };
                (start + k as i64) as f64 * step + offset
            })
            .collect();
        Self::checked(points, Provenance::JitteredLattice { step, start, jitter, seed })
    }

    fn checked(points: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("translate set is empty".into()));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Config(format!("translate point {bad} is not finite")));
        }
        let mut sorted = points.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Config(format!("duplicate translate point {}", w[0])));
        }
        Ok(Self { points, provenance })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn translated(&self, shift: f64) -> Result<Self> {
        Self::explicit(self.points.iter().map(|p| p + shift).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// Diagnostic constant only; never fails a run.
    Informational,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// A named verdict with the constants it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub inequality: String,
    pub constants: BTreeMap<String, f64>,
    pub verdict: Verdict,
    /// Number of translates the suprema were taken over.
    pub truncation: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(name: &str, inequality: &str, truncation: usize) -> Self {
        Self {
            name: name.into(),
            inequality: inequality.into(),
            constants: BTreeMap::new(),
            verdict: Verdict::Inconclusive,
            truncation,
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.into(), value);
        self
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemTag {
    Translates,
    Exponentials,
}

/// `G[k][l] = Φ̂(λ_k − λ_l)`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub entries: CMatrix,
    pub mode: TransformMode,
    pub system: SystemTag,
}

/// Assemble the translate Gram matrix from `Φ̂`; upper triangle computed, lower
/// mirrored by conjugation.
pub fn gram_matrix(g: &Generator, lambda: &TranslateSet, mode: TransformMode) -> Result<GramMatrix> {
    let pts = lambda.points();
    let k = pts.len();
    // fail fast on unsupported mode
    phi_hat_transform(g, 0.0, mode)?;
    let rows: Vec<Vec<C64>> = (0..k)
        .into_par_iter()
        .map(|i| (i..k).map(|j| phi_hat_transform(g, pts[i] - pts[j], mode).expect("mode checked")).collect())
        .collect();
    let mut entries = CMatrix::zeros(k, k);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, z) in row.into_iter().enumerate() {
            let j = i + off;
            if i == j {
                entries[(i, i)] = C64::new(z.re, 0.0);
            } else {
                entries[(i, j)] = z;
                entries[(j, i)] = z.conj();
            }
        }
    }
    Ok(GramMatrix { entries, mode, system: SystemTag::Translates })
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eigen(&self) -> HermitianEigen {
        HermitianEigen::new(&self.entries)
    }

    fn row_sums(&self, f: impl Fn(C64) -> f64, skip_diag: bool) -> f64 {
        let k = self.size();
        (0..k)
            .map(|i| (0..k).filter(|&j| !(skip_diag && i == j)).map(|j| f(self.entries[(i, j)])).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn schur_bessel(&self) -> Certificate {
        let r = self.row_sums(|z| z.norm(), false);
        let mut c = Certificate::new("schur_bessel", "sup_k sum_l |Phi_hat(l_k - l_l)| = R < inf", self.size())
            .with("R", r)
            .with("bessel_bound", r);
        c.verdict = Verdict::from_bool(r.is_finite());
        c
    }

    pub fn bessel_necessary(&self) -> Certificate {
        let q = self.row_sums(|z| z.norm_sqr(), false);
        let mut c = Certificate::new("bessel_necessary", "sup_k sum_l |Phi_hat(l_k - l_l)|^2 = Q < inf", self.size())
            .with("Q", q);
        c.verdict = Verdict::Informational;
        c.notes.push("necessary condition only; finite truncations always give finite Q".into());
        c
    }

    pub fn diagonal_dominance(&self, norm_sq: f64) -> Result<Certificate> {
        if norm_sq.is_nan() || norm_sq <= 0.0 {
            return Err(Error::Precondition("diagonal dominance needs a nonzero generator".into()));
        }
        let s_off = self.row_sums(|z| z.norm(), true);
        let mut c = Certificate::new(
            "riesz_diagonal_dominance",
            "||phi||^2 = D > S_off = sup_j sum_{l!=j} |G_jl|",
            self.size(),
        )
        .with("D", norm_sq)
        .with("S_off", s_off);
        let ok = norm_sq > s_off;
        c.verdict = Verdict::from_bool(ok);
        if ok {
            c = c.with("riesz_lower", norm_sq - s_off).with("riesz_upper", norm_sq + s_off);
        }
        Ok(c)
    }
}

pub fn schur_bessel_certificate(g: &Generator, lambda: &TranslateSet) -> Result<Certificate> {
    Ok(gram_matrix(g, lambda, TransformMode::Quadrature)?.schur_bessel())
}

pub fn bessel_necessary_check(g: &Generator, lambda: &TranslateSet) -> Result<Certificate> {
    Ok(gram_matrix(g, lambda, TransformMode::Quadrature)?.bessel_necessary())
}

pub fn riesz_diagonal_dominance(g: &Generator, lambda: &TranslateSet) -> Result<Certificate> {
    gram_matrix(g, lambda, TransformMode::Quadrature)?.diagonal_dominance(g.norm_sq())
}
