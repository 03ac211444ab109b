//! Quantum channels in Kraus form: Stinespring dilation, complementary
//! channels, Choi matrices, and coherent information.

use crate::error::{Error, Result};
use crate::operators::{
    matmul, partial_trace, trace_distance, von_neumann_entropy, C64, ComplexMatrix,
    DensityMatrix,
};
use crate::optimize::{
    coarse_grid_then_refine, golden_section, multistart_simplex, Mode, ScalarProblem,
    SimplexProblem,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default tolerance on Σ K†K = I for channel construction.
pub const CPTP_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map, stored as Kraus operators
/// (each `dim_out × dim_in`).
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, CPTP_TOL)
    }

    /// Construct with a caller-chosen trace-preservation tolerance.
    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        if kraus.iter().any(|k| (k.rows(), k.cols()) != (dim_out, dim_in)) {
            return Err(Error::InvalidChannel("Kraus operators differ in shape".into()));
        }
        let ch = KrausChannel { kraus, dim_in, dim_out };
        let residual = ch.cptp_residual();
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    /// Internal constructor for channels whose validity is inherited
    /// (complementary channels, compositions of valid channels).
    pub(crate) fn from_parts_unchecked(
        kraus: Vec<ComplexMatrix>,
        dim_in: usize,
        dim_out: usize,
    ) -> Self {
        KrausChannel { kraus, dim_in, dim_out }
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { kraus: vec![ComplexMatrix::identity(dim)], dim_in: dim, dim_out: dim }
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(CPTP_TOL) {
            return Err(Error::InvalidChannel("matrix is not unitary".into()));
        }
        Ok(KrausChannel { kraus: vec![u.clone()], dim_in: u.cols(), dim_out: u.rows() })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// max-abs entry of Σ K†K − I.
    pub fn cptp_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc = acc.add(&matmul(&k.dagger(), k));
        }
        acc.sub(&ComplexMatrix::identity(self.dim_in)).max_abs()
    }

    /// Σ K m K† on an arbitrary matrix (the channel's linear action).
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim_in || m.cols() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: m.rows() });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&matmul(&matmul(k, m), &k.dagger()));
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.mat())?;
        DensityMatrix::new(out, 1e-8)
    }

    /// Canonical Stinespring isometry V: dim_in → dim_out ⊗ env, with the
    /// environment indexed by Kraus order: V|ψ⟩ = Σ_j (K_j|ψ⟩) ⊗ |j⟩.
    pub fn stinespring(&self) -> ComplexMatrix {
        let r = self.kraus_count();
        let mut v = ComplexMatrix::zeros(self.dim_out * r, self.dim_in);
        for (j, k) in self.kraus.iter().enumerate() {
            for b in 0..self.dim_out {
                for a in 0..self.dim_in {
                    v.set(b * r + j, a, k.get(b, a));
                }
            }
        }
        v
    }

    /// Channel into the canonical Stinespring environment; its Kraus count is
    /// dim_out and its output dimension is the Kraus count of `self`.
    ///
    /// Environments of different dilations differ by an isometry, so compare
    /// complementary objects via entropies or explicit degrading maps rather
    /// than raw Choi matrices.
    pub fn complementary(&self) -> KrausChannel {
        let r = self.kraus_count();
        let mut flipped = Vec::with_capacity(self.dim_out);
        for b in 0..self.dim_out {
            let mut f = ComplexMatrix::zeros(r, self.dim_in);
            for (j, k) in self.kraus.iter().enumerate() {
                for a in 0..self.dim_in {
                    f.set(j, a, k.get(b, a));
                }
            }
            flipped.push(f);
        }
        KrausChannel::from_parts_unchecked(flipped, self.dim_in, r)
    }

    /// Choi matrix (Λ⊗id)|Ω⟩⟨Ω| with |Ω⟩ = Σ_i |i⟩|i⟩ unnormalized; the
    /// output factor is major.
    pub fn choi(&self) -> ChoiMatrix {
        let (din, dout) = (self.dim_in, self.dim_out);
        let n = din * dout;
        let mut mat = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            for b in 0..dout {
                for i in 0..din {
                    let left = k.get(b, i);
                    if left == C64::ZERO {
                        continue;
                    }
                    for bp in 0..dout {
                        for j in 0..din {
                            let row = b * din + i;
                            let col = bp * din + j;
                            let v = mat.get(row, col) + left * k.get(bp, j).conj();
                            mat.set(row, col, v);
                        }
                    }
                }
            }
        }
        ChoiMatrix { mat, dim_in: din, dim_out: dout }
    }
}

/// Choi matrix of a channel, with its dimensions recorded. Serves as the
/// canonical fingerprint for channel equality.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    mat: ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiMatrix {
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Max of the PSD violation and the trace-preservation violation
    /// (partial trace over the output factor vs identity).
    pub fn validity_residual(&self) -> Result<f64> {
        let eigs = crate::operators::eigvals_hermitian(&self.mat)?;
        let neg = eigs.last().map_or(0.0, |&v| (-v).max(0.0));
        let reduced = partial_trace(&self.mat, &[self.dim_out, self.dim_in], &[1])?;
        let tp = reduced.sub(&ComplexMatrix::identity(self.dim_in)).max_abs();
        Ok(neg.max(tp))
    }
}

/// Trace distance between Choi matrices, compared against `tol·dim_in`.
pub fn channels_equal(a: &KrausChannel, b: &KrausChannel, tol: f64) -> Result<(bool, f64)> {
    if a.dim_in != b.dim_in || a.dim_out != b.dim_out {
        return Err(Error::DimensionMismatch { expected: a.dim_in, got: b.dim_in });
    }
    let residual = trace_distance(a.choi().mat(), b.choi().mat())?;
    Ok((residual <= tol * a.dim_in as f64, residual))
}

/// Composition `after ∘ before`; the Kraus set is all pairwise products.
pub fn compose(after: &KrausChannel, before: &KrausChannel) -> Result<KrausChannel> {
    if before.dim_out != after.dim_in {
        return Err(Error::DimensionMismatch { expected: after.dim_in, got: before.dim_out });
    }
    let mut kraus = Vec::with_capacity(after.kraus.len() * before.kraus.len());
    for a in &after.kraus {
        for b in &before.kraus {
            kraus.push(matmul(a, b));
        }
    }
    Ok(KrausChannel::from_parts_unchecked(kraus, before.dim_in, after.dim_out))
}

/// I_c(Λ, ρ) = S(Λ(ρ)) − S(Λ̃(ρ)) in bits.
pub fn coherent_information(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    let out = ch.apply(rho)?;
    let env = ch.complementary().apply(rho)?;
    Ok(von_neumann_entropy(&out)? - von_neumann_entropy(&env)?)
}

/// Input families over which [`q1_maximize`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputStrategy {
    /// Evaluate at the maximally mixed state only (exact for flagged Pauli
    /// channels, where I/d is optimal).
    MaximallyMixed,
    /// Diagonal qubit inputs diag(1−τ, τ); optimal for phase-covariant
    /// families such as amplitude damping.
    Diagonal,
    /// Full Bloch-ball search on a qubit input.
    FullQubit,
}

/// Maximal coherent information over the selected input family. Equals the
/// quantum capacity for degradable channels.
pub fn q1_maximize(ch: &KrausChannel, strategy: InputStrategy) -> Result<f64> {
    match strategy {
        InputStrategy::MaximallyMixed => {
            coherent_information(ch, &DensityMatrix::maximally_mixed(ch.dim_in))
        }
        InputStrategy::Diagonal => {
            if ch.dim_in != 2 {
                return Err(Error::InvalidSpec(
                    "diagonal input search expects a qubit input".into(),
                ));
            }
            let objective = |tau: f64| {
                let rho = DensityMatrix::from_diagonal(&[1.0 - tau, tau])
                    .expect("valid diagonal state");
                coherent_information(ch, &rho).unwrap_or(f64::NAN)
            };
            let p = ScalarProblem { objective, lo: 0.0, hi: 1.0, mode: Mode::Maximize };
            let (_, v) = coarse_grid_then_refine(&p, 33, 1e-10)?;
            Ok(v)
        }
        InputStrategy::FullQubit => {
            if ch.dim_in != 2 {
                return Err(Error::InvalidSpec("Bloch-ball search expects a qubit input".into()));
            }
            let objective = |r: &[f64]| match bloch_state(r) {
                Ok(rho) => coherent_information(ch, &rho).map_or(f64::NAN, |v| -v),
                Err(_) => f64::NAN,
            };
            let mut starts = vec![
                vec![0.0, 0.0, 0.0],
                vec![0.999, 0.0, 0.0],
                vec![-0.999, 0.0, 0.0],
                vec![0.0, 0.999, 0.0],
                vec![0.0, -0.999, 0.0],
                vec![0.0, 0.0, 0.999],
                vec![0.0, 0.0, -0.999],
            ];
            starts.push(random_bloch_start());
            let p = SimplexProblem {
                objective,
                feasible: |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>() <= 1.0,
                starts,
            };
            let (_, v) = multistart_simplex(&p, 1e-10, 400)?;
            Ok(-v)
        }
    }
}

/// ρ = (I + r·σ)/2 for a Bloch vector r with |r| ≤ 1.
pub fn bloch_state(r: &[f64]) -> Result<DensityMatrix> {
    if r.len() != 3 {
        return Err(Error::InvalidSpec("Bloch vector needs 3 components".into()));
    }
    let (x, y, z) = (r[0], r[1], r[2]);
    let mat = ComplexMatrix::from_rows(&[
        vec![C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
        vec![C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
    ]);
    DensityMatrix::new(mat, 1e-9)
}

/// Fixed seeded draw — the single "random" start stays identical run to run.
fn random_bloch_start() -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(20260817);
    loop {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        if v.iter().map(|c| c * c).sum::<f64>() <= 0.96 {
            return v;
        }
    }
}

/// Diagonal-input scan returning both the optimizer and the value; used by
/// pipelines that report the maximizing input.
pub fn q1_diagonal_argmax(ch: &KrausChannel) -> Result<(f64, f64)> {
    if ch.dim_in != 2 {
        return Err(Error::InvalidSpec("diagonal input search expects a qubit input".into()));
    }
    let objective = |tau: f64| {
        let rho = DensityMatrix::from_diagonal(&[1.0 - tau, tau]).expect("valid diagonal state");
        coherent_information(ch, &rho).unwrap_or(f64::NAN)
    };
    let p = ScalarProblem { objective, lo: 0.0, hi: 1.0, mode: Mode::Maximize };
    let (x, _) = coarse_grid_then_refine(&p, 33, 1e-10)?;
    let refined = ScalarProblem {
        objective,
        lo: (x - 0.05).max(0.0),
        hi: (x + 0.05).min(1.0),
        mode: Mode::Maximize,
    };
    golden_section(&refined, 1e-12)
}
