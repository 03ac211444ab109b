//! Flagged Pauli channels: the Ψ-state constraint formulation, symplectic
//! projectors, and the closed-form Q1 bound they certify.
//!
//! A Pauli channel Φ_w applies the Weyl operator W_x with probability w_x.
//! Attaching a flag |φ_x⟩ per branch gives a flagged channel whose Q1 equals
//! `n·log2(d) − S(w) + S(ρ_F)` with ρ_F = Σ w_x |φ_x⟩⟨φ_x| whenever the flags
//! satisfy a family of symplectic-projector constraints; minimizing the flag
//! entropy over a constraint-respecting family yields capacity upper bounds.

use crate::error::{Error, Result};
use crate::flagged::FlaggedSpec;
use crate::operators::{
    eigvals_hermitian, entropy_from_spectrum, shannon_entropy, C64, ComplexMatrix,
};
use crate::optimize::{
    coarse_grid_then_refine, multistart_simplex, Mode, ScalarProblem, SimplexProblem,
};
use crate::pauli::{pauli_twirl_basis, symplectic_form, weyl_operator};

/// Probability distribution over the canonical Weyl labels of n qudits.
#[derive(Clone, Debug)]
pub struct PauliWeights {
    d: u32,
    n: usize,
    w: Vec<f64>,
}

impl PauliWeights {
    pub fn new(d: u32, n: usize, w: Vec<f64>) -> Result<Self> {
        if d < 2 || n < 1 {
            return Err(Error::InvalidSpec("need d >= 2 and n >= 1".into()));
        }
        let expect = (d as usize).pow(2 * n as u32);
        if w.len() != expect {
            return Err(Error::DimensionMismatch { expected: expect, got: w.len() });
        }
        if w.iter().any(|&v| v < -1e-12) {
            return Err(Error::InvalidSpec("negative Pauli weight".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("Pauli weights sum to {sum}, not 1")));
        }
        let w = w.into_iter().map(|v| v.max(0.0)).collect();
        Ok(PauliWeights { d, n, w })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// d^{2n}: the number of labels, and also the flag-space dimension.
    pub fn label_count(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn entropy(&self) -> Result<f64> {
        shannon_entropy(&self.w)
    }
}

fn validate_flags(label_count: usize, flags: &[Vec<C64>]) -> Result<()> {
    if flags.len() != label_count {
        return Err(Error::DimensionMismatch { expected: label_count, got: flags.len() });
    }
    for (i, f) in flags.iter().enumerate() {
        if f.len() != label_count {
            return Err(Error::DimensionMismatch { expected: label_count, got: f.len() });
        }
        let norm: f64 = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!("flag {i} has norm {norm}")));
        }
    }
    Ok(())
}

/// |Ψ⟩ = Σ_x √w_x |x⟩_C ⊗ |φ_x⟩_F on H_C ⊗ H_F, dimension d^{2n} each.
#[derive(Clone, Debug)]
pub struct PsiState {
    d: u32,
    n: usize,
    amplitudes: Vec<C64>,
}

impl PsiState {
    pub fn from_flags(w: &PauliWeights, flags: &[Vec<C64>]) -> Result<Self> {
        let count = w.label_count();
        validate_flags(count, flags)?;
        let mut amplitudes = vec![C64::ZERO; count * count];
        for (x, flag) in flags.iter().enumerate() {
            let root = C64::new(w.weights()[x].sqrt(), 0.0);
            for (f, &v) in flag.iter().enumerate() {
                amplitudes[x * count + f] = root * v;
            }
        }
        let norm_sqr: f64 = amplitudes.iter().map(|v| v.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!("Ψ has squared norm {norm_sqr}")));
        }
        Ok(PsiState { d: w.d(), n: w.n(), amplitudes })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label_count(&self) -> usize {
        (self.d as usize).pow(2 * self.n as u32)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// ρ_F = Tr_C |Ψ⟩⟨Ψ| — the flag marginal whose entropy enters the bound.
    pub fn flag_marginal(&self) -> ComplexMatrix {
        let count = self.label_count();
        let mut rho = ComplexMatrix::zeros(count, count);
        for x in 0..count {
            for f in 0..count {
                let left = self.amplitudes[x * count + f];
                if left == C64::ZERO {
                    continue;
                }
                for fp in 0..count {
                    let v = rho.get(f, fp) + left * self.amplitudes[x * count + fp].conj();
                    rho.set(f, fp, v);
                }
            }
        }
        rho
    }
}

/// Orthogonal projector Π_j onto span{(|x⟩|y⟩ − ω^j|y⟩|x⟩)/√2} over unordered
/// label pairs x ≠ y whose symplectic form is ≡ j (mod d), with x before y in
/// canonical order. Swapping a pair maps its vector into the class d−j up to
/// phase, so each unordered pair is counted exactly once and distinct classes
/// stay orthogonal.
pub fn symplectic_projector(d: u32, n: usize, j: u32) -> ComplexMatrix {
    assert!(j < d, "class index must satisfy 0 <= j < d");
    let labels = pauli_twirl_basis(d, n);
    let count = labels.len();
    let dim = count * count;
    let angle = 2.0 * std::f64::consts::PI * j as f64 / d as f64;
    let omega_j = C64::new(angle.cos(), angle.sin());
    let mut proj = ComplexMatrix::zeros(dim, dim);
    for x in 0..count {
        for y in (x + 1)..count {
            let form = symplectic_form(&labels[x], &labels[y]).expect("same system") % d;
            if form != j {
                continue;
            }
            // v = (|x,y⟩ − ω^j |y,x⟩)/√2; accumulate v v†.
            let idx = [(x * count + y, C64::ONE), (y * count + x, -omega_j)];
            for (r, a) in idx {
                for (c, b) in idx {
                    let v = proj.get(r, c) + a * b.conj() * 0.5;
                    proj.set(r, c, v);
                }
            }
        }
    }
    proj
}

/// Residuals of the two constraint families on |Ψ⟩.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintReport {
    pub pass: bool,
    /// max_j |⟨Ψ|Π_j|Ψ⟩|
    pub projector_residual: f64,
    /// max_x |⟨Ψ|(|x⟩⟨x|⊗I)|Ψ⟩ − w_x|
    pub marginal_residual: f64,
}

impl ConstraintReport {
    pub fn max_residual(&self) -> f64 {
        self.projector_residual.max(self.marginal_residual)
    }
}

/// Evaluate tr[Π_j |Ψ⟩⟨Ψ|] = 0 for all j and the marginal condition
/// ⟨Ψ|(|x⟩⟨x|⊗I)|Ψ⟩ = w_x; pass iff every residual is ≤ tol.
pub fn check_psi_constraints(
    psi: &PsiState,
    w: &PauliWeights,
    tol: f64,
) -> Result<ConstraintReport> {
    if psi.d() != w.d() || psi.n() != w.n() {
        return Err(Error::InvalidSpec("Ψ and weights describe different systems".into()));
    }
    let count = psi.label_count();
    let amps = psi.amplitudes();

    let mut projector_residual = 0.0f64;
    for j in 0..psi.d() {
        let proj = symplectic_projector(psi.d(), psi.n(), j);
        // ⟨Ψ|Π_j|Ψ⟩ without materializing |Ψ⟩⟨Ψ|.
        let mut acc = C64::ZERO;
        for r in 0..count * count {
            let ar = amps[r].conj();
            if ar == C64::ZERO {
                continue;
            }
            for c in 0..count * count {
                let p = proj.get(r, c);
                if p != C64::ZERO {
                    acc += ar * p * amps[c];
                }
            }
        }
        projector_residual = projector_residual.max(acc.norm());
    }

    let mut marginal_residual = 0.0f64;
    for x in 0..count {
        let mass: f64 = (0..count).map(|f| amps[x * count + f].norm_sqr()).sum();
        marginal_residual = marginal_residual.max((mass - w.weights()[x]).abs());
    }

    let pass = projector_residual <= tol && marginal_residual <= tol;
    Ok(ConstraintReport { pass, projector_residual, marginal_residual })
}

/// Q1 of the flagged Pauli channel: n·log2(d) − S(w) + S(ρ_F) with
/// ρ_F = Σ w_x |φ_x⟩⟨φ_x|.
///
/// The value is a capacity upper bound only when (w, flags) satisfy the Ψ
/// constraints; use [`flagged_pauli_q1_checked`] to evaluate both at once.
pub fn flagged_pauli_q1(w: &PauliWeights, flags: &[Vec<C64>]) -> Result<f64> {
    validate_flags(w.label_count(), flags)?;
    let count = w.label_count();
    let mut rho = ComplexMatrix::zeros(count, count);
    for (x, flag) in flags.iter().enumerate() {
        let weight = w.weights()[x];
        if weight == 0.0 {
            continue;
        }
        for f in 0..count {
            for fp in 0..count {
                let v = rho.get(f, fp) + flag[f] * flag[fp].conj() * weight;
                rho.set(f, fp, v);
            }
        }
    }
    let spectrum = eigvals_hermitian(&rho)?;
    let s_flags = entropy_from_spectrum(&spectrum)?;
    Ok(w.n() as f64 * (w.d() as f64).log2() - w.entropy()? + s_flags)
}

/// Bound value plus the constraint report for the same (w, flags).
pub fn flagged_pauli_q1_checked(
    w: &PauliWeights,
    flags: &[Vec<C64>],
    tol: f64,
) -> Result<(f64, ConstraintReport)> {
    let value = flagged_pauli_q1(w, flags)?;
    let psi = PsiState::from_flags(w, flags)?;
    let report = check_psi_constraints(&psi, w, tol)?;
    Ok((value, report))
}

/// The flagged channel behind the bound: component x is the unitary W_x with
/// weight w_x and flag φ_x, in canonical label order.
pub fn pauli_flagged_spec(w: &PauliWeights, flags: &[Vec<C64>]) -> Result<FlaggedSpec> {
    validate_flags(w.label_count(), flags)?;
    let labels = pauli_twirl_basis(w.d(), w.n());
    let mut components = Vec::with_capacity(labels.len());
    for (x, label) in labels.iter().enumerate() {
        let u = weyl_operator(label);
        components.push((w.weights()[x], crate::channel::KrausChannel::from_unitary(&u)?));
    }
    FlaggedSpec::new(components, flags.to_vec())
}

/// A parametrized family of flag lists that satisfies the Ψ constraints at
/// every feasible parameter point by construction.
pub trait FlagFamily {
    fn param_dim(&self) -> usize;
    /// Box bounds (lo, hi) per parameter.
    fn bounds(&self) -> Vec<(f64, f64)>;
    /// Flags at this parameter point, or None when infeasible (e.g. a
    /// normalization radicand would go negative).
    fn flags(&self, params: &[f64]) -> Option<Vec<Vec<C64>>>;
    /// Additional starting points for the simplex search.
    fn extra_starts(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }
}

/// Minimize [`flagged_pauli_q1`] over a flag family. One-parameter families
/// use a coarse grid plus golden-section refinement; higher dimensions use
/// multi-start Nelder–Mead with infeasibility rejection.
pub fn pauli_bound_minimize(
    w: &PauliWeights,
    family: &dyn FlagFamily,
    grid_points: usize,
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    let eval = |params: &[f64]| -> f64 {
        match family.flags(params) {
            Some(flags) => flagged_pauli_q1(w, &flags).unwrap_or(f64::NAN),
            None => f64::NAN,
        }
    };
    let bounds = family.bounds();
    if bounds.len() != family.param_dim() {
        return Err(Error::InvalidSpec("family bounds do not match its dimension".into()));
    }
    match family.param_dim() {
        0 => {
            let v = eval(&[]);
            if !v.is_finite() {
                return Err(Error::Infeasible("flag family has no feasible point".into()));
            }
            Ok((v, Vec::new()))
        }
        1 => {
            let (lo, hi) = bounds[0];
            let p = ScalarProblem { objective: |t: f64| eval(&[t]), lo, hi, mode: Mode::Minimize };
            let (x, v) = coarse_grid_then_refine(&p, grid_points.max(16), tol)?;
            Ok((v, vec![x]))
        }
        _ => {
            let mut starts: Vec<Vec<f64>> = Vec::new();
            let center: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
            starts.push(center.clone());
            for i in 0..bounds.len() {
                let (lo, hi) = bounds[i];
                let delta = 0.3 * (hi - lo);
                for sign in [1.0, -1.0] {
                    let mut s = center.clone();
                    s[i] = (s[i] + sign * delta).clamp(lo, hi);
                    starts.push(s);
                }
            }
            starts.extend(family.extra_starts());
            let in_box = |x: &[f64]| {
                x.iter()
                    .zip(&bounds)
                    .all(|(v, (lo, hi))| *v >= lo - 1e-12 && *v <= hi + 1e-12)
            };
            let problem = SimplexProblem {
                objective: eval,
                feasible: |x: &[f64]| in_box(x) && family.flags(x).is_some(),
                starts,
            };
            let (params, v) = multistart_simplex(&problem, tol, 600)?;
            Ok((v, params))
        }
    }
}
