//! Dense Hermitian helpers: sorted eigendecomposition, cutoff functional
//! calculus (pseudo-inverse, inverse square root), thin SVD and spectral norms.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::C64;

pub type CMatrix = DMatrix<C64>;

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        assert!(m.is_square(), "Hermitian eigendecomposition needs a square matrix");
        let n = m.nrows();
        if n == 0 {
            return Self { values: Vec::new(), vectors: CMatrix::zeros(0, 0) };
        }
        let sym = hermitian_part(m);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self { values, vectors }
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Absolute cutoff `rel * max(λ_max, 0)`.
    pub fn cutoff(&self, rel: f64) -> f64 {
        rel * self.max().max(0.0)
    }

    pub fn rank(&self, rel: f64) -> usize {
        let c = self.cutoff(rel);
        self.values.iter().filter(|&&v| v > c).count()
    }

    /// `Σ f(λ_i) v_i v_i*` over eigenvalues above the relative cutoff.
    pub fn apply_fn(&self, rel: f64, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let c = self.cutoff(rel);
        let mut out = CMatrix::zeros(n, n);
        for (i, &lam) in self.values.iter().enumerate() {
            if lam <= c {
                continue;
            }
            let v = self.vectors.column(i);
            let s = f(lam);
            out += (v * v.adjoint()) * C64::new(s, 0.0);
        }
        out
    }

    /// Orthogonal projector onto the span of eigenvectors above cutoff.
    pub fn projector(&self, rel: f64) -> CMatrix {
        self.apply_fn(rel, |_| 1.0)
    }

    pub fn pseudo_inverse(&self, rel: f64) -> CMatrix {
        self.apply_fn(rel, |l| 1.0 / l)
    }

    pub fn inv_sqrt(&self, rel: f64) -> CMatrix {
        self.apply_fn(rel, |l| 1.0 / l.sqrt())
    }
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `m = U Σ V*` with singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

pub fn thin_svd(m: &CMatrix) -> Result<Svd> {
    let svd = to_faer(m).thin_svd().map_err(|e| Error::Precondition(format!("SVD failed: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let r = s.dim();
    Ok(Svd {
        u: CMatrix::from_fn(m.nrows(), r, |i, j| u[(i, j)]),
        singular_values: (0..r).map(|i| s[i].re).collect(),
        v: CMatrix::from_fn(m.ncols(), r, |i, j| v[(i, j)]),
    })
}

impl Svd {
    /// Number of singular values with `σ² > rel · σ_max²`.
    pub fn rank(&self, rel: f64) -> usize {
        let s_max = self.singular_values.first().copied().unwrap_or(0.0);
        let cutoff = rel * s_max * s_max;
        self.singular_values.iter().take_while(|&&s| s > 0.0 && s * s > cutoff).count()
    }

    /// `Σ u_i f(σ_i) v_i*` over the kept singular triples.
    fn recombine(&self, rel: f64, f: impl Fn(f64) -> f64) -> CMatrix {
        let kept = self.rank(rel);
        let d: Vec<C64> = self.singular_values[..kept].iter().map(|&s| C64::new(f(s), 0.0)).collect();
        scale_cols(&self.u.columns(0, kept).into_owned(), &d) * self.v.columns(0, kept).adjoint()
    }
}

/// `(m*)⁺ = (m m*)⁺ m`, through the SVD of `m`; also returns the rank.
pub fn adjoint_pseudo_inverse(m: &CMatrix, rel: f64) -> Result<(CMatrix, usize)> {
    let svd = thin_svd(m)?;
    Ok((svd.recombine(rel, |s| 1.0 / s), svd.rank(rel)))
}

/// Polar factor `(m m*)^(-1/2) m = U V*` on the kept singular triples; also returns the rank.
pub fn polar_factor(m: &CMatrix, rel: f64) -> Result<(CMatrix, usize)> {
    let svd = thin_svd(m)?;
    Ok((svd.recombine(rel, |_| 1.0), svd.rank(rel)))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match to_faer(m).singular_values() {
        Ok(s) => s.into_iter().fold(0.0, f64::max),
        Err(_) => m.clone().singular_values().max(),
    }
}

/// Largest entry-wise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Keep the listed rows.
pub fn select_rows(m: &CMatrix, rows: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)])
}

/// Scale row `n` by `d[n]`, i.e. `diag(d) · M`.
pub fn scale_rows(d: &[C64], m: &CMatrix) -> CMatrix {
    assert_eq!(d.len(), m.nrows());
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)])
}

/// Scale column `n` by `d[n]`, i.e. `M · diag(d)`.
pub fn scale_cols(m: &CMatrix, d: &[C64]) -> CMatrix {
    assert_eq!(d.len(), m.ncols());
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j])
}

/// Materialize `diag(d)`.
pub fn diag(d: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let e = HermitianEigen::new(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let back = e.apply_fn(0.0, |l| l);
        assert!(max_abs(&(back - &m)) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_of_singular_matrix() {
        // rank-1 projector scaled by 2
        let v = nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]) * C64::new(0.5f64.sqrt(), 0.0);
        let m = (&v * v.adjoint()) * c(2.0, 0.0);
        let e = HermitianEigen::new(&m);
        assert_eq!(e.rank(1e-10), 1);
        let p = e.pseudo_inverse(1e-10);
        let expected = (&v * v.adjoint()) * c(0.5, 0.0);
        assert!(max_abs(&(p - expected)) < 1e-14);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = diag(&[c(0.5, 0.0), c(0.0, -3.0)]);
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-14);
    }
}
