//! Weyl–Heisenberg (generalized Pauli) operators on n qudits.
//!
//! Phases are tracked as exact integer exponents of the primitive 2d-th root
//! of unity e^{iπ/d}, so operator identities hold to full double precision
//! rather than degrading with accumulated floating-point phase error.

use crate::error::{Error, Result};
use crate::operators::{C64, ComplexMatrix};

/// Phase modulus: D = d for even d, D = 2d for odd d.
pub fn big_d(d: u32) -> u32 {
    if d % 2 == 0 {
        d
    } else {
        2 * d
    }
}

/// Label x = (q, p) of a Weyl operator on n qudits of local dimension d.
///
/// Canonical labels keep every entry in {0, …, D−1}; the fields are public so
/// callers can also form unreduced labels such as x + d·z, which
/// [`weyl_operator`] evaluates exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliIndex {
    pub d: u32,
    pub q: Vec<u32>,
    pub p: Vec<u32>,
}

impl PauliIndex {
    /// Canonical label; every entry must lie in {0, …, D−1}.
    pub fn new(d: u32, q: Vec<u32>, p: Vec<u32>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("local dimension {d} must be at least 2")));
        }
        if q.is_empty() || q.len() != p.len() {
            return Err(Error::InvalidSpec(
                "q and p must be equal-length, non-empty dit strings".into(),
            ));
        }
        let dd = big_d(d);
        if q.iter().chain(p.iter()).any(|&e| e >= dd) {
            return Err(Error::OutOfRange(format!("label entries must be below D = {dd}")));
        }
        Ok(PauliIndex { d, q, p })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// Hilbert-space dimension d^n.
    pub fn space_dim(&self) -> usize {
        (self.d as usize).pow(self.n() as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(|&e| e == 0) && self.p.iter().all(|&e| e == 0)
    }

    /// Entry-wise x + d·z, kept unreduced.
    pub fn add_scaled(&self, z: &PauliIndex, factor: u32) -> PauliIndex {
        assert_eq!((self.d, self.n()), (z.d, z.n()), "mismatched Pauli systems");
        PauliIndex {
            d: self.d,
            q: self.q.iter().zip(&z.q).map(|(&a, &b)| a + factor * b).collect(),
            p: self.p.iter().zip(&z.p).map(|(&a, &b)| a + factor * b).collect(),
        }
    }
}

/// Table of τ^k for τ = e^{iπ/d}, k = 0, …, 2d−1.
fn half_root_table(d: u32) -> Vec<C64> {
    (0..2 * d)
        .map(|k| {
            let angle = std::f64::consts::PI * k as f64 / d as f64;
            C64::new(angle.cos(), angle.sin())
        })
        .collect()
}

/// W_x = e^{−(d²+1)πi(p·q)/d} ⊗_j Z^{p_j} X^{q_j} as a dense d^n × d^n matrix.
///
/// Entries of x may exceed D; the phase and shift are evaluated with exact
/// integer arithmetic, so unreduced labels reproduce the sign relation
/// W_{x+dz} = (−1)^{(d+1)⟨x,z⟩} W_x identically.
pub fn weyl_operator(x: &PauliIndex) -> ComplexMatrix {
    let d = x.d as i128;
    let n = x.n();
    let dim = x.space_dim();
    let table = half_root_table(x.d);
    let two_d = 2 * d;

    // Global phase exponent of τ = e^{iπ/d}: −(d²+1)·(p·q) mod 2d.
    let pq: i128 = x.p.iter().zip(&x.q).map(|(&pj, &qj)| pj as i128 * qj as i128).sum();
    let global = (-(d * d + 1) * pq).rem_euclid(two_d);

    let mut out = ComplexMatrix::zeros(dim, dim);
    // One nonzero per row: (Z^p X^q)[r, c] = ω^{r·p} δ_{r, c+q mod d}.
    for row in 0..dim {
        let mut rest = row;
        let mut col = 0usize;
        let mut exp = global;
        for j in 0..n {
            let radix = (x.d as usize).pow((n - 1 - j) as u32);
            let rj = (rest / radix) as i128;
            rest %= radix;
            let cj = (rj - x.q[j] as i128).rem_euclid(d) as usize;
            col += cj * radix;
            exp = (exp + 2 * rj * x.p[j] as i128).rem_euclid(two_d);
        }
        out.set(row, col, table[exp as usize]);
    }
    out
}

/// Symplectic form ⟨x,y⟩ = p·q′ − q·p′ mod D.
pub fn symplectic_form(x: &PauliIndex, y: &PauliIndex) -> Result<u32> {
    if x.d != y.d || x.n() != y.n() {
        return Err(Error::InvalidSpec("mismatched Pauli systems".into()));
    }
    let dd = big_d(x.d) as i64;
    let mut acc: i64 = 0;
    for j in 0..x.n() {
        acc += x.p[j] as i64 * y.q[j] as i64 - x.q[j] as i64 * y.p[j] as i64;
        acc = acc.rem_euclid(dd);
    }
    Ok(acc as u32)
}

/// All d^{2n} channel-level labels, entries in {0, …, d−1}, ordered
/// lexicographically over the concatenated string (q₁…qₙ, p₁…pₙ).
pub fn pauli_twirl_basis(d: u32, n: usize) -> Vec<PauliIndex> {
    assert!(d >= 2 && n >= 1, "need d >= 2 and n >= 1");
    let total = (d as usize).pow(2 * n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut digits = vec![0u32; 2 * n];
        let mut rest = code;
        for slot in (0..2 * n).rev() {
            digits[slot] = (rest % d as usize) as u32;
            rest /= d as usize;
        }
        let q = digits[..n].to_vec();
        let p = digits[n..].to_vec();
        out.push(PauliIndex { d, q, p });
    }
    out
}
