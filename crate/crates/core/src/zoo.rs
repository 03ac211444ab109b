//! Concrete channel families and their named bound pipelines: depolarizing,
//! BB84, generalized amplitude damping (GAD), the no-cloning bound, and
//! convex-hull combinations, emitted as figure-ready curves.

use crate::channel::{
    channels_equal, compose, q1_maximize, InputStrategy, KrausChannel,
};
use crate::error::{Error, Result};
use crate::flagged::{
    build_flagged, check_degradability, degrading_residual, FlaggedSpec,
};
use crate::operators::{
    binary_entropy, entropy_from_spectrum, shannon_entropy, C64, ComplexMatrix,
};
use crate::optimize::{coarse_grid_then_refine, golden_section, Mode, ScalarProblem};
use crate::pauli::{pauli_twirl_basis, weyl_operator};
use crate::pauli_bounds::{
    flagged_pauli_q1, pauli_bound_minimize, pauli_flagged_spec, FlagFamily, PauliWeights,
};
use rayon::prelude::*;

/// Emitted bounds are capacities: clamp below at exactly 0.0 (never −0.0).
fn clamp_nonneg(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        v
    }
}

/// Pauli channel with Kraus √w_x·W_x over the canonical label order.
pub fn pauli_channel(d: u32, n: usize, weights: &[f64]) -> Result<KrausChannel> {
    let w = PauliWeights::new(d, n, weights.to_vec())?;
    let kraus: Vec<ComplexMatrix> = pauli_twirl_basis(d, n)
        .iter()
        .zip(w.weights())
        .map(|(x, &wx)| weyl_operator(x).scale(C64::new(wx.sqrt(), 0.0)))
        .collect();
    KrausChannel::new(kraus)
}

// ---------------------------------------------------------------------------
// Depolarizing channel
// ---------------------------------------------------------------------------

/// Canonical weights: 1 − (d²−1)p/d² on the identity, p/d² elsewhere.
pub fn dep_weights(d: u32, p: f64) -> Vec<f64> {
    let dd = (d as f64) * (d as f64);
    let mut w = vec![p / dd; (d * d) as usize];
    w[0] = 1.0 - (dd - 1.0) * p / dd;
    w
}

pub fn depolarizing(d: u32, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("depolarizing probability {p} not in [0,1]")));
    }
    pauli_channel(d, 1, &dep_weights(d, p))
}

/// Flag amplitudes of the symmetric one-parameter depolarizing family:
/// α = ⟨0,0|Ψ⟩, β = ⟨0,x|Ψ⟩ = ⟨x,0|Ψ⟩, γ = ⟨x,x|Ψ⟩, all real nonnegative.
#[derive(Clone, Copy, Debug)]
pub struct DepFlagParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DepFlagParams {
    /// Parameters at β² = t along the constraint surface
    /// α² + (d²−1)β² = 1 − (d²−1)p/d² and β² + γ² = p/d².
    pub fn from_t(d: u32, p: f64, t: f64) -> Result<Self> {
        let dd = (d as f64) * (d as f64);
        let w0 = 1.0 - (dd - 1.0) * p / dd;
        let alpha_sq = w0 - (dd - 1.0) * t;
        let gamma_sq = p / dd - t;
        if t < -1e-12 || alpha_sq < -1e-12 || gamma_sq < -1e-12 {
            return Err(Error::Infeasible(format!(
                "t = {t} leaves a negative radicand (α² = {alpha_sq}, γ² = {gamma_sq})"
            )));
        }
        Ok(DepFlagParams {
            alpha: alpha_sq.max(0.0).sqrt(),
            beta: t.max(0.0).sqrt(),
            gamma: gamma_sq.max(0.0).sqrt(),
        })
    }

    /// Max violation of the two constraints at noise level p.
    pub fn constraint_residual(&self, d: u32, p: f64) -> f64 {
        let dd = (d as f64) * (d as f64);
        let first = self.alpha * self.alpha + (dd - 1.0) * self.beta * self.beta
            - (1.0 - (dd - 1.0) * p / dd);
        let second = self.beta * self.beta + self.gamma * self.gamma - p / dd;
        first.abs().max(second.abs())
    }
}

/// Closed-form flag-marginal entropy S(Tr_C|Ψ⟩⟨Ψ|) in bits: d²−2 eigenvalues
/// equal to γ² plus the pair v± = ½(α²+γ²+2(d²−1)β² ± √((α²−γ²)² + 4(d²−1)β²(α+γ)²)).
pub fn dep_flag_entropy(params: &DepFlagParams, d: u32) -> Result<f64> {
    let (a, b, g) = (params.alpha, params.beta, params.gamma);
    if a < 0.0 || b < 0.0 || g < 0.0 {
        return Err(Error::OutOfRange("flag amplitudes must be nonnegative".into()));
    }
    let m = (d as f64) * (d as f64) - 1.0;
    let (a2, b2, g2) = (a * a, b * b, g * g);
    let mean = a2 + g2 + 2.0 * m * b2;
    let split = ((a2 - g2) * (a2 - g2) + 4.0 * m * b2 * (a + g) * (a + g)).sqrt();
    let v_plus = 0.5 * (mean + split);
    let v_minus = 0.5 * (mean - split);
    let mut spectrum = vec![v_plus, v_minus];
    spectrum.extend(std::iter::repeat(g2).take((d * d - 2) as usize));
    entropy_from_spectrum(&spectrum)
}

fn dep_t_max(d: u32, p: f64) -> f64 {
    let dd = (d as f64) * (d as f64);
    let w0 = 1.0 - (dd - 1.0) * p / dd;
    (p / dd).min(w0 / (dd - 1.0)).max(0.0)
}

fn dep_minimize(d: u32, p: f64) -> Result<(f64, f64)> {
    let w = dep_weights(d, p);
    let base = (d as f64).log2() - shannon_entropy(&w)?;
    let objective = |t: f64| match DepFlagParams::from_t(d, p, t) {
        Ok(params) => match dep_flag_entropy(&params, d) {
            Ok(s) => base + s,
            Err(_) => f64::NAN,
        },
        Err(_) => f64::NAN,
    };
    let p1d = ScalarProblem { objective, lo: 0.0, hi: dep_t_max(d, p), mode: Mode::Minimize };
    let (t, v) = coarse_grid_then_refine(&p1d, 64, 1e-12)?;
    Ok((t, v))
}

/// Best upper bound from the one-parameter depolarizing flag family:
/// min over t = β² of log2(d) − S(w) + S(Tr_C|Ψ⟩⟨Ψ|).
pub fn dep_fmin_bound(d: u32, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("depolarizing probability {p} not in [0,1]")));
    }
    dep_minimize(d, p).map(|(_, v)| v)
}

/// The minimizing flagged extension itself: flags φ_0 = (α|0⟩ + βΣ_{x≠0}|x⟩)/√w_0
/// and φ_x = (β|0⟩ + γ|x⟩)/√w_x, with orthogonal fallbacks on zero weights.
pub fn dep_optimal_spec(d: u32, p: f64) -> Result<(FlaggedSpec, f64)> {
    let (t, bound) = dep_minimize(d, p)?;
    let params = DepFlagParams::from_t(d, p, t)?;
    let w = dep_weights(d, p);
    let count = (d * d) as usize;
    let mut flags: Vec<Vec<C64>> = Vec::with_capacity(count);
    let w0_root = w[0].sqrt();
    let mut phi0 = vec![C64::ZERO; count];
    phi0[0] = C64::new(params.alpha / w0_root, 0.0);
    for x in 1..count {
        phi0[x] = C64::new(params.beta / w0_root, 0.0);
    }
    flags.push(phi0);
    for x in 1..count {
        let mut phi = vec![C64::ZERO; count];
        if w[x] > 0.0 {
            let root = w[x].sqrt();
            phi[0] = C64::new(params.beta / root, 0.0);
            phi[x] = C64::new(params.gamma / root, 0.0);
        } else {
            phi[x] = C64::ONE;
        }
        flags.push(phi);
    }
    let weights = PauliWeights::new(d, 1, w)?;
    let spec = pauli_flagged_spec(&weights, &flags)?;
    Ok((spec, bound))
}

/// (1 − 2p(d+1)/d)·log2(d), clamped at zero.
pub fn no_cloning_bound(d: u32, p: f64) -> f64 {
    clamp_nonneg((1.0 - 2.0 * p * (d as f64 + 1.0) / d as f64) * (d as f64).log2())
}

// ---------------------------------------------------------------------------
// Bound curves and convex-hull combination
// ---------------------------------------------------------------------------

/// A labeled curve of (parameter, bits) samples on a strictly increasing grid.
#[derive(Clone, Debug)]
pub struct BoundCurve {
    label: String,
    samples: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn new(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSpec("curve parameters must strictly increase".into()));
        }
        Ok(BoundCurve { label: label.into(), samples })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }
}

/// Lower convex envelope of the pointwise minimum of the input curves,
/// evaluated back on the shared grid (monotone-chain hull over the samples).
pub fn convex_hull_combine(curves: &[BoundCurve]) -> Result<BoundCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidSpec("no curves to combine".into()))?;
    let grid: Vec<f64> = first.samples().iter().map(|s| s.0).collect();
    for c in curves {
        let same = c.samples().len() == grid.len()
            && c.samples().iter().zip(&grid).all(|(s, &x)| s.0 == x);
        if !same {
            return Err(Error::InvalidSpec("curves do not share a parameter grid".into()));
        }
    }
    let minimum: Vec<(f64, f64)> = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let y = curves
                .iter()
                .map(|c| c.samples()[i].1)
                .fold(f64::INFINITY, f64::min);
            (x, y)
        })
        .collect();

    // Monotone-chain lower hull; the pop test keeps only vertices lying
    // strictly below every chord.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(minimum.len());
    for &p in &minimum {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut samples = Vec::with_capacity(grid.len());
    let mut seg = 0usize;
    for &x in &grid {
        while seg + 1 < hull.len() && hull[seg + 1].0 < x {
            seg += 1;
        }
        let y = if seg + 1 == hull.len() {
            hull[seg].1
        } else {
            let (x0, y0) = hull[seg];
            let (x1, y1) = hull[seg + 1];
            if x <= x0 {
                y0
            } else {
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        };
        samples.push((x, y));
    }
    BoundCurve::new("conv", samples)
}

// ---------------------------------------------------------------------------
// Shared flag family for one big weight, an equal-weight pair, and a special
// component (the BB84 shape, reused by GAD at N = 1/2)
// ---------------------------------------------------------------------------

/// Three-parameter qubit flag family for weights (w₀, w_eq, w_eq, w_s):
/// component 0 carries w₀, the `pair` components share w_eq, and `special`
/// carries w_s. With α = a√(w_eq/w₀), β = b√(w_s/w₀), γ = c√(w_s/w_eq) the
/// flags satisfy the degradability condition at every feasible (a, b, c).
pub struct PairedFlagFamily {
    w0: f64,
    w_eq: f64,
    w_s: f64,
    pair: (usize, usize),
    special: usize,
}

impl PairedFlagFamily {
    pub fn new(weights: &[f64], pair: (usize, usize), special: usize) -> Result<Self> {
        if weights.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: weights.len() });
        }
        let mut seen = [false; 4];
        for idx in [0, pair.0, pair.1, special] {
            if idx >= 4 || seen[idx] {
                return Err(Error::InvalidSpec("pair/special indices must partition 1..4".into()));
            }
            seen[idx] = true;
        }
        if (weights[pair.0] - weights[pair.1]).abs() > 1e-12 {
            return Err(Error::InvalidSpec("paired components must carry equal weights".into()));
        }
        if weights[0] <= 0.0 {
            return Err(Error::InvalidSpec("leading weight must be positive".into()));
        }
        Ok(PairedFlagFamily {
            w0: weights[0],
            w_eq: weights[pair.0],
            w_s: weights[special],
            pair,
            special,
        })
    }
}

impl FlagFamily for PairedFlagFamily {
    fn param_dim(&self) -> usize {
        3
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0), (0.0, 1.0), (0.0, std::f64::consts::FRAC_1_SQRT_2)]
    }

    fn flags(&self, params: &[f64]) -> Option<Vec<Vec<C64>>> {
        let (a, b, c) = (params[0], params[1], params[2]);
        let alpha = if self.w_eq > 0.0 { a * (self.w_eq / self.w0).sqrt() } else { 0.0 };
        let beta = if self.w_s > 0.0 { b * (self.w_s / self.w0).sqrt() } else { 0.0 };
        let gamma = if self.w_s > 0.0 {
            if self.w_eq <= 0.0 {
                return None;
            }
            c * (self.w_s / self.w_eq).sqrt()
        } else {
            0.0
        };
        let f0_sq = 1.0 - 2.0 * alpha * alpha - beta * beta;
        let f1_sq = 1.0 - a * a - gamma * gamma;
        let f3_sq = 1.0 - b * b - 2.0 * c * c;
        if f0_sq < -1e-12 || f1_sq < -1e-12 || f3_sq < -1e-12 {
            return None;
        }
        let re = |v: f64| C64::new(v, 0.0);
        let (e1, e2, sp) = (self.pair.0, self.pair.1, self.special);
        let mut phi0 = vec![C64::ZERO; 4];
        phi0[0] = re(f0_sq.max(0.0).sqrt());
        phi0[e1] = re(alpha);
        phi0[e2] = re(alpha);
        phi0[sp] = re(beta);
        let mut phi_e1 = vec![C64::ZERO; 4];
        phi_e1[0] = re(a);
        phi_e1[e1] = re(f1_sq.max(0.0).sqrt());
        phi_e1[sp] = re(-gamma);
        let mut phi_e2 = vec![C64::ZERO; 4];
        phi_e2[0] = re(a);
        phi_e2[e2] = re(f1_sq.max(0.0).sqrt());
        phi_e2[sp] = re(-gamma);
        let mut phi_sp = vec![C64::ZERO; 4];
        phi_sp[0] = re(b);
        phi_sp[e1] = re(c);
        phi_sp[e2] = re(c);
        phi_sp[sp] = re(f3_sq.max(0.0).sqrt());

        let mut flags = vec![vec![]; 4];
        flags[0] = phi0;
        flags[e1] = phi_e1;
        flags[e2] = phi_e2;
        flags[sp] = phi_sp;
        Some(flags)
    }

    fn extra_starts(&self) -> Vec<Vec<f64>> {
        let mut starts = Vec::with_capacity(127);
        let bounds = self.bounds();
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let pick = |idx: usize, (lo, hi): (f64, f64)| {
                        lo + (hi - lo) * idx as f64 / 4.0
                    };
                    starts.push(vec![
                        pick(i, bounds[0]),
                        pick(j, bounds[1]),
                        pick(k, bounds[2]),
                    ]);
                }
            }
        }
        starts.push(vec![1.0, 1.0, 0.0]);
        starts
    }
}

// ---------------------------------------------------------------------------
// BB84 channel
// ---------------------------------------------------------------------------

/// Canonical (1, Z, X, Y) weights ((1−p)², p(1−p), p(1−p), p²): independent
/// bit-flip and phase-flip with probability p each.
pub fn bb84_weights(p: f64) -> Vec<f64> {
    vec![(1.0 - p) * (1.0 - p), p * (1.0 - p), p * (1.0 - p), p * p]
}

pub fn bb84(p: f64) -> Result<KrausChannel> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::OutOfRange(format!("BB84 flip probability {p} not in [0,1/2]")));
    }
    pauli_channel(2, 1, &bb84_weights(p))
}

/// The flag family behind the BB84 bound: Z and X share weight p(1−p), Y is
/// the special low-weight component.
pub fn bb84_flag_family(p: f64) -> Result<PairedFlagFamily> {
    PairedFlagFamily::new(&bb84_weights(p), (1, 2), 3)
}

fn bb84_minimize(p: f64) -> Result<(f64, Vec<f64>)> {
    let w = PauliWeights::new(2, 1, bb84_weights(p))?;
    let family = bb84_flag_family(p)?;
    pauli_bound_minimize(&w, &family, 64, 1e-9)
}

/// Minimum of the flagged bound over the three-parameter BB84 family.
pub fn bb84_fmin_bound(p: f64) -> Result<f64> {
    bb84_minimize(p).map(|(v, _)| v)
}

/// The bound at the reference parameters (a,b,c) = (1,1,0); infeasible for
/// p > 1 − 1/√2 ≈ 0.2929, where the leading flag coefficient turns imaginary.
pub fn bb84_at_110(p: f64) -> Result<f64> {
    let family = bb84_flag_family(p)?;
    let flags = family
        .flags(&[1.0, 1.0, 0.0])
        .ok_or_else(|| Error::Infeasible(format!("reference point (1,1,0) infeasible at p = {p}")))?;
    let w = PauliWeights::new(2, 1, bb84_weights(p))?;
    flagged_pauli_q1(&w, &flags)
}

/// The minimizing flagged extension for verification.
pub fn bb84_optimal_spec(p: f64) -> Result<(FlaggedSpec, f64)> {
    let (bound, params) = bb84_minimize(p)?;
    let family = bb84_flag_family(p)?;
    let flags = family
        .flags(&params)
        .ok_or_else(|| Error::Optimization("minimizer returned an infeasible point".into()))?;
    let w = PauliWeights::new(2, 1, bb84_weights(p))?;
    let spec = pauli_flagged_spec(&w, &flags)?;
    Ok((spec, bound))
}

// ---------------------------------------------------------------------------
// Generalized amplitude damping
// ---------------------------------------------------------------------------

/// Damping probability y and thermal mixing N.
#[derive(Clone, Copy, Debug)]
pub struct GadParams {
    pub y: f64,
    pub n: f64,
}

impl GadParams {
    pub fn new(y: f64, n: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&y) || !(0.0..=1.0).contains(&n) {
            return Err(Error::OutOfRange(format!("GAD parameters (y={y}, N={n}) not in [0,1]²")));
        }
        Ok(GadParams { y, n })
    }

    /// s = √(1−y).
    pub fn s(&self) -> f64 {
        (1.0 - self.y).sqrt()
    }
}

fn damping_kraus(y: f64) -> (ComplexMatrix, ComplexMatrix) {
    let re = |v: f64| C64::new(v, 0.0);
    let k1 = ComplexMatrix::from_rows(&[
        vec![re(1.0), re(0.0)],
        vec![re(0.0), re((1.0 - y).sqrt())],
    ]);
    let k2 = ComplexMatrix::from_rows(&[vec![re(0.0), re(y.sqrt())], vec![re(0.0), re(0.0)]]);
    (k1, k2)
}

pub fn amplitude_damping(y: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfRange(format!("damping probability {y} not in [0,1]")));
    }
    let (k1, k2) = damping_kraus(y);
    KrausChannel::new(vec![k1, k2])
}

fn pauli_x_matrix() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::ZERO, C64::ONE],
        vec![C64::ONE, C64::ZERO],
    ])
}

/// GAD as the mixture N·A_y + (1−N)·X∘A_y∘X with Kraus
/// {√N K1, √N K2, √(1−N) XK1X, √(1−N) XK2X}.
pub fn gad(params: &GadParams) -> Result<KrausChannel> {
    let (k1, k2) = damping_kraus(params.y);
    let x = pauli_x_matrix();
    let conj = |k: &ComplexMatrix| {
        crate::operators::matmul(&crate::operators::matmul(&x, k), &x)
    };
    let rn = C64::new(params.n.sqrt(), 0.0);
    let rm = C64::new((1.0 - params.n).sqrt(), 0.0);
    KrausChannel::new(vec![
        k1.scale(rn),
        k2.scale(rn),
        conj(&k1).scale(rm),
        conj(&k2).scale(rm),
    ])
}

fn gad_alt_kraus_list(params: &GadParams, swap_a3_mixing: bool) -> Vec<ComplexMatrix> {
    let (y, n) = (params.y, params.n);
    let s = params.s();
    let re = |v: f64| C64::new(v, 0.0);
    let diag = |top: f64, bottom: f64| {
        ComplexMatrix::from_rows(&[vec![re(top), re(0.0)], vec![re(0.0), re(bottom)]])
    };
    let a1 = ComplexMatrix::identity(2).scale(re((n * (1.0 - n)).sqrt() * (1.0 + s)));
    let a2 = ComplexMatrix::from_rows(&[
        vec![re(0.0), re(0.0)],
        vec![re(((1.0 - n) * y).sqrt()), re(0.0)],
    ]);
    let a3 = if swap_a3_mixing {
        diag((1.0 - n) - n * s, (1.0 - n) * s - n)
    } else {
        diag(n - (1.0 - n) * s, n * s - (1.0 - n))
    };
    let a4 = ComplexMatrix::from_rows(&[
        vec![re(0.0), re((n * y).sqrt())],
        vec![re(0.0), re(0.0)],
    ]);
    vec![a1, a2, a3, a4]
}

/// Alternative GAD Kraus set {A1, A2, A3, A4} with A1 proportional to the
/// identity, obtained by remixing the two diagonal Kraus operators with rows
/// (√(1−N), √N) and (√N, −√(1−N)). Validated to be trace-preserving and
/// Choi-equal to [`gad`].
pub fn gad_alt_kraus(params: &GadParams) -> Result<KrausChannel> {
    let kraus = gad_alt_kraus_list(params, false);
    let ch = KrausChannel::with_tolerance(kraus, 1e-10)?;
    Ok(ch)
}

/// The same set with the mixing of A3 swapped (N ↔ 1−N in its coefficients).
/// Not trace-preserving away from N = 1/2; kept as a raw list so the
/// discrepancy is reproducible (Σ A†A acquires a 1.076 coefficient at
/// N = 0.3, y = 0.19).
pub fn gad_alt_kraus_with_swapped_a3(params: &GadParams) -> Vec<ComplexMatrix> {
    gad_alt_kraus_list(params, true)
}

/// Weight of the identity component A1 in the alternative set:
/// N(1−N)(1+√(1−y))².
pub fn gad_unitary_weight(params: &GadParams) -> f64 {
    let s = params.s();
    params.n * (1.0 - params.n) * (1.0 + s) * (1.0 + s)
}

/// Quantum capacity of amplitude damping: max_τ h2((1−y)τ) − h2(yτ) for
/// y ≤ 1/2, and 0 beyond (the channel becomes antidegradable).
pub fn ad_capacity(y: f64) -> f64 {
    if y >= 0.5 {
        return 0.0;
    }
    let objective =
        |tau: f64| binary_entropy((1.0 - y) * tau) - binary_entropy(y * tau);
    let problem = ScalarProblem { objective, lo: 0.0, hi: 1.0, mode: Mode::Maximize };
    let (_, v) = golden_section(&problem, 1e-10).expect("entropy difference is finite");
    clamp_nonneg(v)
}

/// Canonical (1, Z, X, Y) Pauli weights of GAD at N = 1/2:
/// ((1−y/2+√(1−y))/2, (1−y/2−√(1−y))/2, y/4, y/4).
pub fn gad_half_weights(y: f64) -> Vec<f64> {
    let s = (1.0 - y).sqrt();
    vec![
        (1.0 - y / 2.0 + s) / 2.0,
        ((1.0 - y / 2.0 - s) / 2.0).max(0.0),
        y / 4.0,
        y / 4.0,
    ]
}

/// The paired flag family on the N = 1/2 weights: X and Y share weight y/4,
/// Z is the special component.
pub fn gad_half_flag_family(y: f64) -> Result<PairedFlagFamily> {
    PairedFlagFamily::new(&gad_half_weights(y), (2, 3), 1)
}

fn gad_half_minimize(y: f64) -> Result<(f64, Vec<f64>)> {
    let w = PauliWeights::new(2, 1, gad_half_weights(y))?;
    let family = gad_half_flag_family(y)?;
    pauli_bound_minimize(&w, &family, 64, 1e-9)
}

/// Flagged-family bound for GAD at N = 1/2.
pub fn gad_fmin_half(y: f64) -> Result<f64> {
    gad_half_minimize(y).map(|(v, _)| v)
}

/// The minimizing flagged extension at N = 1/2 for verification.
pub fn gad_half_optimal_spec(y: f64) -> Result<(FlaggedSpec, f64)> {
    let (bound, params) = gad_half_minimize(y)?;
    let family = gad_half_flag_family(y)?;
    let flags = family
        .flags(&params)
        .ok_or_else(|| Error::Optimization("minimizer returned an infeasible point".into()))?;
    let w = PauliWeights::new(2, 1, gad_half_weights(y))?;
    let spec = pauli_flagged_spec(&w, &flags)?;
    Ok((spec, bound))
}

/// Convex combination 2N′·Q_fmin_half(y) + (1−2N′)·Q_AD(y) with
/// N′ = min(N, 1−N); GAD at (y, N) and (y, 1−N) are X-conjugates.
pub fn gad_conv_bound(y: f64, n: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&n) {
        return Err(Error::OutOfRange(format!("thermal parameter {n} not in [0,1]")));
    }
    let np = n.min(1.0 - n);
    Ok(2.0 * np * gad_fmin_half(y)? + (1.0 - 2.0 * np) * ad_capacity(y))
}

/// The orthogonal-flag bound: Q of the flagged GAD extension collapses to Q of
/// plain amplitude damping, independent of N.
pub fn gad_orthogonal_flag_bound(y: f64) -> f64 {
    ad_capacity(y)
}

/// End-to-end certificate for the orthogonal-flag GAD extension at (y, N):
/// the flag-controlled map (degrade-A_y on flag 0, degrade-XA_yX on flag 1)
/// reproduces the complementary channel. Returns the Choi residual.
///
/// The per-branch degrader is A_w with w = (1−2y)/(1−y) (composed with X on
/// the conjugated branch), so y must stay ≤ 1/2.
pub fn gad_orthogonal_degrading_residual(params: &GadParams) -> Result<f64> {
    if params.y > 0.5 {
        return Err(Error::OutOfRange(
            "beyond y = 1/2 amplitude damping is antidegradable; no degrading map exists".into(),
        ));
    }
    let damping = amplitude_damping(params.y)?;
    let x = KrausChannel::from_unitary(&pauli_x_matrix())?;
    let conjugated = compose(&x, &compose(&damping, &x)?)?;
    let spec = FlaggedSpec::new(
        vec![(params.n, damping), (1.0 - params.n, conjugated)],
        vec![vec![C64::ONE, C64::ZERO], vec![C64::ZERO, C64::ONE]],
    )?;
    let flagged = build_flagged(&spec)?;

    let w = (1.0 - 2.0 * params.y) / (1.0 - params.y);
    let degrade = amplitude_damping(w)?;
    let degrade_conj = compose(&degrade, &x)?;
    let blocks = [&degrade, &degrade_conj];

    // Flag-controlled block map: G_{i,m}[(i′,j),(o,f)] = δ_{i′,i} δ_{f,i} W^{(i)}_m[j,o].
    let (count, r, dout, l) = (2usize, spec.max_kraus_count(), 2usize, 2usize);
    let mut kraus = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        for m in block.kraus() {
            let mut g = ComplexMatrix::zeros(count * r, dout * l);
            for j in 0..m.rows() {
                for o in 0..dout {
                    g.set(i * r + j, o * l + i, m.get(j, o));
                }
            }
            kraus.push(g);
        }
    }
    let controlled = KrausChannel::new(kraus)?;
    let degraded = compose(&controlled, &flagged)?;
    let (_, residual) = channels_equal(&degraded, &flagged.complementary(), f64::INFINITY)?;
    Ok(residual)
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

/// Uniform grid with exact endpoints.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(lo < hi) {
        return Err(Error::InvalidSpec(format!(
            "need at least 2 steps and lo < hi; got steps={steps}, [{lo}, {hi}]"
        )));
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Both degradability certificates for a flagged extension, or an error.
fn verify_spec(spec: &FlaggedSpec, context: &str) -> Result<()> {
    let (ok, residual) = check_degradability(spec, 1e-10)?;
    if !ok {
        return Err(Error::InvalidChannel(format!(
            "{context}: degradability condition residual {residual:.3e} exceeds 1e-10"
        )));
    }
    let residual = degrading_residual(spec)?;
    if residual > 1e-8 {
        return Err(Error::InvalidChannel(format!(
            "{context}: degrading-map Choi residual {residual:.3e} exceeds 1e-8"
        )));
    }
    Ok(())
}

/// Depolarizing curves: hashing lower bound, flagged-family bound, no-cloning
/// bound, and the convex hull of the upper bounds' pointwise minimum. Every
/// grid point's flagged extension is re-verified before emission.
pub fn dep_pipeline(d: u32, grid: &[f64]) -> Result<Vec<BoundCurve>> {
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&p| -> Result<(f64, f64, f64)> {
            let w = dep_weights(d, p);
            let q1 = clamp_nonneg((d as f64).log2() - shannon_entropy(&w)?);
            let (spec, fmin) = dep_optimal_spec(d, p)?;
            verify_spec(&spec, &format!("depolarizing d={d} p={p}"))?;
            Ok((p, q1, clamp_nonneg(fmin)))
        })
        .collect::<Result<Vec<_>>>()?;

    let q1_curve = BoundCurve::new("q1_lower", rows.iter().map(|r| (r.0, r.1)).collect())?;
    let fmin_curve = BoundCurve::new("q_fmin", rows.iter().map(|r| (r.0, r.2)).collect())?;
    let ncl_curve = BoundCurve::new(
        "q_nocloning",
        grid.iter().map(|&p| (p, no_cloning_bound(d, p))).collect(),
    )?;
    let hull = convex_hull_combine(&[fmin_curve.clone(), ncl_curve.clone()])?;
    let conv = BoundCurve::new(
        "q_conv",
        hull.samples().iter().map(|&(x, v)| (x, clamp_nonneg(v))).collect(),
    )?;
    Ok(vec![q1_curve, fmin_curve, ncl_curve, conv])
}

/// BB84 curves: hashing lower bound, family minimum, and the (1,1,0)
/// reference point (NaN where that point is infeasible).
pub fn bb84_pipeline(grid: &[f64]) -> Result<Vec<BoundCurve>> {
    let rows: Vec<(f64, f64, f64, f64)> = grid
        .par_iter()
        .map(|&p| -> Result<(f64, f64, f64, f64)> {
            let q1 = clamp_nonneg(1.0 - 2.0 * binary_entropy(p));
            let (spec, fmin) = bb84_optimal_spec(p)?;
            verify_spec(&spec, &format!("BB84 p={p}"))?;
            let at_110 = match bb84_at_110(p) {
                Ok(v) => clamp_nonneg(v),
                Err(Error::Infeasible(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok((p, q1, clamp_nonneg(fmin), at_110))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(vec![
        BoundCurve::new("q1_lower", rows.iter().map(|r| (r.0, r.1)).collect())?,
        BoundCurve::new("q_fmin", rows.iter().map(|r| (r.0, r.2)).collect())?,
        BoundCurve::new("q_at_110", rows.iter().map(|r| (r.0, r.3)).collect())?,
    ])
}

/// GAD curves at fixed N: diagonal-input lower bound, the amplitude-damping
/// bound, the N = 1/2 family bound, and their convex combination.
pub fn gad_pipeline(n: f64, grid: &[f64]) -> Result<Vec<BoundCurve>> {
    if !(0.0..=1.0).contains(&n) {
        return Err(Error::OutOfRange(format!("thermal parameter {n} not in [0,1]")));
    }
    // (y, N) and (y, 1−N) are X-conjugate channels with identical bounds.
    let n = n.min(1.0 - n);
    let np = n;
    let rows: Vec<(f64, f64, f64, f64, f64)> = grid
        .par_iter()
        .map(|&y| -> Result<(f64, f64, f64, f64, f64)> {
            let params = GadParams::new(y, n)?;
            let channel = gad(&params)?;
            let q1 = clamp_nonneg(q1_maximize(&channel, InputStrategy::Diagonal)?);
            let q_ad = ad_capacity(y);
            let (spec, fmin_half) = gad_half_optimal_spec(y)?;
            verify_spec(&spec, &format!("GAD half-mix y={y}"))?;
            if y <= 0.5 {
                let ortho = GadParams::new(y, np)?;
                let residual = gad_orthogonal_degrading_residual(&ortho)?;
                if residual > 1e-8 {
                    return Err(Error::InvalidChannel(format!(
                        "GAD orthogonal-flag degrading residual {residual:.3e} at y={y}"
                    )));
                }
            }
            let fmin_half = clamp_nonneg(fmin_half);
            let conv = clamp_nonneg(2.0 * np * fmin_half + (1.0 - 2.0 * np) * q_ad);
            Ok((y, q1, q_ad, fmin_half, conv))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(vec![
        BoundCurve::new("q1_lower", rows.iter().map(|r| (r.0, r.1)).collect())?,
        BoundCurve::new("q_ad", rows.iter().map(|r| (r.0, r.2)).collect())?,
        BoundCurve::new("q_fmin_half", rows.iter().map(|r| (r.0, r.3)).collect())?,
        BoundCurve::new("q_conv", rows.iter().map(|r| (r.0, r.4)).collect())?,
    ])
}
