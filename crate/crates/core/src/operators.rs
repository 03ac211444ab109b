//! Dense complex matrices, Hermitian eigenvalues, and entropy primitives.
//!
//! Everything here targets small Hilbert spaces (dimension ≤ 256); storage is
//! dense row-major and all operations are pure.

use crate::error::{Error, Result};
use num_complex::Complex;

pub type C64 = Complex<f64>;

/// Eigenvalues in [-NEG_EIG_FLOOR, 0] are treated as exact zeros; anything more
/// negative is rejected as genuinely non-positive-semidefinite.
pub const NEG_EIG_FLOOR: f64 = 1e-9;
/// Eigenvalues below this are excluded from entropy sums (0·log 0 = 0).
pub const EIG_CLAMP: f64 = 1e-12;

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![C64::ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, C64::ONE);
        }
        m
    }

    /// Build from nested rows of (re, im) pairs; handy in tests.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix needs at least one row");
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        ComplexMatrix { rows: r, cols: c, data }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(entries: &[C64]) -> Self {
        ComplexMatrix { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, factor: C64) -> ComplexMatrix {
        let data = self.data.iter().map(|a| a * factor).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value, via the top eigenvalue of M†M.
    pub fn operator_norm(&self) -> f64 {
        let gram = matmul(&self.dagger(), self);
        let vals = eigvals_hermitian(&gram).expect("gram matrix is hermitian");
        vals.first().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut res: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                res = res.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        res
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows == self.cols && self.is_isometry(tol)
    }

    /// M†M = I within tol (columns orthonormal).
    pub fn is_isometry(&self, tol: f64) -> bool {
        let gram = matmul(&self.dagger(), self);
        gram.sub(&ComplexMatrix::identity(self.cols)).max_abs() <= tol
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        match eigvals_hermitian(self) {
            Ok(vals) => vals.iter().all(|&v| v >= -tol),
            Err(_) => false,
        }
    }
}

/// Standard matrix product.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols, b.rows, "matmul dimension mismatch");
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let ark = a.get(r, k);
            if ark == C64::ZERO {
                continue;
            }
            for c in 0..b.cols {
                let v = out.get(r, c) + ark * b.get(k, c);
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Kronecker product; the left factor is the major index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let av = a.get(ar, ac);
            if av == C64::ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out.set(ar * b.rows + br, ac * b.cols + bc, av * b.get(br, bc));
                }
            }
        }
    }
    out
}

/// Partial trace over the factors NOT listed in `keep`.
///
/// `dims` are the tensor factor dimensions, factor 0 major (matching `kron`);
/// `keep` lists factor indices to retain, in increasing order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if m.rows != m.cols || m.rows != total {
        return Err(Error::DimensionMismatch { expected: total, got: m.rows });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::OutOfRange("keep indices must be increasing and in range".into()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let trace_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // Row-major strides of the full index space.
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let expand = |packed: usize, factors: &[usize]| -> usize {
        let mut rest = packed;
        let mut full = 0;
        for &f in factors.iter().rev() {
            full += (rest % dims[f]) * stride[f];
            rest /= dims[f];
        }
        full
    };

    // Empty products are 1, so keep == [] yields the 1x1 full trace.
    let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
    for kr in 0..keep_dim {
        let base_r = expand(kr, keep);
        for kc in 0..keep_dim {
            let base_c = expand(kc, keep);
            let mut acc = C64::ZERO;
            for t in 0..trace_dim {
                let offs = expand(t, &traced);
                acc += m.get(base_r + offs, base_c + offs);
            }
            out.set(kr, kc, acc);
        }
    }
    Ok(out)
}

/// Real eigenvalues of a Hermitian matrix, descending, via cyclic complex Jacobi.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch { expected: m.rows, got: m.cols });
    }
    let scale = m.max_abs().max(1.0);
    let res = m.hermiticity_residual();
    if res > 1e-8 * scale {
        return Err(Error::NotHermitian { residual: res });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(vec![]);
    }
    // Work on the symmetrized copy so tiny asymmetries cannot bias the result.
    let mut a = vec![C64::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = (m.get(r, c) + m.get(c, r).conj()) * 0.5;
        }
    }

    let frob: f64 = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let stop = (1e-15 * frob) * (1e-15 * frob);
    for _sweep in 0..75 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let napq = apq.norm();
                if napq < 1e-300 {
                    a[p * n + q] = C64::ZERO;
                    a[q * n + p] = C64::ZERO;
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let ph = apq / napq;
                let tau = (aqq - app) / (2.0 * napq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * ph.conj() * aiq;
                    a[i * n + q] = s * ph * aip + c * aiq;
                    a[p * n + i] = a[i * n + p].conj();
                    a[q * n + i] = a[i * n + q].conj();
                }
                a[p * n + p] = C64::new(c * c * app - 2.0 * c * s * napq + s * s * aqq, 0.0);
                a[q * n + q] = C64::new(s * s * app + 2.0 * c * s * napq + c * c * aqq, 0.0);
                a[p * n + q] = C64::ZERO;
                a[q * n + p] = C64::ZERO;
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    vals.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    Ok(vals)
}

/// Density operator: square, Hermitian, unit trace.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        let res = mat.hermiticity_residual();
        if res > tol {
            return Err(Error::InvalidDensity(format!("hermiticity residual {res:.3e}")));
        }
        let tr = mat.trace();
        if (tr - C64::ONE).norm() > tol {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mat = ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { mat }
    }

    pub fn from_pure(state: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = state.iter().map(|v| v.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let dim = state.len();
        let mut mat = ComplexMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                mat.set(r, c, state[r] * state[c].conj() / norm_sqr);
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < -EIG_CLAMP) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDensity("diagonal is not a probability vector".into()));
        }
        let entries: Vec<C64> = probs.iter().map(|&p| C64::new(p.max(0.0), 0.0)).collect();
        Ok(DensityMatrix { mat: ComplexMatrix::diagonal(&entries) })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

/// Entropy of a nonnegative spectrum in bits; −1e−9 ≤ λ ≤ 0 counts as zero.
pub fn entropy_from_spectrum(vals: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in vals {
        if v < -NEG_EIG_FLOOR {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        if v > EIG_CLAMP {
            s -= v * v.log2();
        }
    }
    Ok(s)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = eigvals_hermitian(rho.mat())?;
    entropy_from_spectrum(&vals)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    entropy_from_spectrum(probs)
}

/// Binary entropy h2(x) in bits.
pub fn binary_entropy(x: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&x), "h2 argument out of [0,1]");
    let x = x.clamp(0.0, 1.0);
    let mut s = 0.0;
    if x > EIG_CLAMP {
        s -= x * x.log2();
    }
    if 1.0 - x > EIG_CLAMP {
        s -= (1.0 - x) * (1.0 - x).log2();
    }
    s
}

/// (1/2)·Σ|singular values of a−b| for Hermitian a, b.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: b.rows() });
    }
    let vals = eigvals_hermitian(&a.sub(b))?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}
