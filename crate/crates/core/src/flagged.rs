//! Flagged extensions of convex channel mixtures, the sufficient algebraic
//! degradability condition, and the explicit degrading map that certifies it.
//!
//! A mixture Σ pᵢ Λᵢ becomes the flagged channel 𝕃(ρ) = Σ pᵢ Λᵢ(ρ) ⊗ |φᵢ⟩⟨φᵢ|,
//! which reveals which branch occurred (exactly for orthogonal flags, partially
//! otherwise). When the pairwise condition checked by [`check_degradability`]
//! holds, 𝕃 is degradable, its coherent information is additive, and its Q1
//! upper-bounds the quantum and private capacities of the unflagged mixture.

use crate::channel::{channels_equal, compose, KrausChannel};
use crate::error::{Error, Result};
use crate::operators::{C64, ComplexMatrix};

/// Convex combination of channels with a normalized flag state per component.
#[derive(Clone, Debug)]
pub struct FlaggedSpec {
    weights: Vec<f64>,
    channels: Vec<KrausChannel>,
    flags: Vec<Vec<C64>>,
}

impl FlaggedSpec {
    pub fn new(components: Vec<(f64, KrausChannel)>, flags: Vec<Vec<C64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSpec("no components".into()));
        }
        if components.len() != flags.len() {
            return Err(Error::InvalidSpec(format!(
                "{} components but {} flags",
                components.len(),
                flags.len()
            )));
        }
        let weight_sum: f64 = components.iter().map(|(w, _)| w).sum();
        if (weight_sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("weights sum to {weight_sum}, not 1")));
        }
        if components.iter().any(|(w, _)| *w < -1e-12) {
            return Err(Error::InvalidSpec("negative component weight".into()));
        }
        let (din, dout) = (components[0].1.dim_in(), components[0].1.dim_out());
        if components.iter().any(|(_, c)| c.dim_in() != din || c.dim_out() != dout) {
            return Err(Error::InvalidSpec("component channels differ in dimensions".into()));
        }
        let l = flags[0].len();
        if l == 0 || flags.iter().any(|f| f.len() != l) {
            return Err(Error::InvalidSpec("flags must share a nonzero dimension".into()));
        }
        for (i, f) in flags.iter().enumerate() {
            let norm: f64 = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidSpec(format!("flag {i} has norm {norm}")));
            }
        }
        let mut weights = Vec::with_capacity(components.len());
        let mut channels = Vec::with_capacity(components.len());
        for (w, c) in components {
            // Optimizer round-off can leave weights at -1e-16; store them as 0.
            weights.push(w.max(0.0));
            channels.push(c);
        }
        Ok(FlaggedSpec { weights, channels, flags })
    }

    pub fn component_count(&self) -> usize {
        self.channels.len()
    }

    pub fn flag_dim(&self) -> usize {
        self.flags[0].len()
    }

    pub fn dim_in(&self) -> usize {
        self.channels[0].dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.channels[0].dim_out()
    }

    /// Largest Kraus count among components; every component is padded with
    /// zero operators up to this count so all dilations share one environment.
    pub fn max_kraus_count(&self) -> usize {
        self.channels.iter().map(|c| c.kraus_count()).max().unwrap_or(0)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn channels(&self) -> &[KrausChannel] {
        &self.channels
    }

    pub fn flags(&self) -> &[Vec<C64>] {
        &self.flags
    }

    /// The unflagged mixture Σ pᵢ Λᵢ, with Kraus set {√pᵢ K_j^{(i)}}.
    pub fn mixture(&self) -> KrausChannel {
        let mut kraus = Vec::new();
        for (w, ch) in self.weights.iter().zip(&self.channels) {
            let root = C64::new(w.sqrt(), 0.0);
            for k in ch.kraus() {
                kraus.push(k.scale(root));
            }
        }
        KrausChannel::from_parts_unchecked(kraus, self.dim_in(), self.dim_out())
    }

    /// j-th Kraus operator of component i under zero padding.
    fn padded_kraus(&self, i: usize, j: usize) -> ComplexMatrix {
        self.channels[i]
            .kraus()
            .get(j)
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.dim_out(), self.dim_in()))
    }
}

/// The flagged channel 𝕃: A → B ⊗ F with Kraus operators
/// √pᵢ K_j^{(i)} ⊗ |φᵢ⟩, listed component-major and zero-padded to a common
/// per-component Kraus count.
///
/// The padding fixes the canonical environment layout of `complementary(𝕃)`
/// to (component, within-component) pairs, which is exactly the environment
/// [`degrading_map`] targets; the two are raw-Choi comparable without any
/// environment-isometry slack.
pub fn build_flagged(spec: &FlaggedSpec) -> Result<KrausChannel> {
    let l = spec.flag_dim();
    let r = spec.max_kraus_count();
    let (din, dout) = (spec.dim_in(), spec.dim_out());
    let mut kraus = Vec::with_capacity(spec.component_count() * r);
    for i in 0..spec.component_count() {
        let root = C64::new(spec.weights()[i].sqrt(), 0.0);
        for j in 0..r {
            let base = spec.padded_kraus(i, j);
            let mut op = ComplexMatrix::zeros(dout * l, din);
            for b in 0..dout {
                for f in 0..l {
                    let phase = root * spec.flags()[i][f];
                    if phase == C64::ZERO {
                        continue;
                    }
                    for a in 0..din {
                        op.set(b * l + f, a, phase * base.get(b, a));
                    }
                }
            }
            kraus.push(op);
        }
    }
    KrausChannel::new(kraus)
}

/// Evaluate the pairwise degradability condition
///
/// ⟨i′|φᵢ⟩ √pᵢ K^{(i′)}_{j′} K^{(i)}_j = ⟨i|φ_{i′}⟩ √p_{i′} K^{(i)}_j K^{(i′)}_{j′}
///
/// over all component/Kraus quadruples. Returns pass/fail at `tol` together
/// with the worst Frobenius residual, normalized by the largest operator norm
/// among the weighted products so the verdict is scale-free.
pub fn check_degradability(spec: &FlaggedSpec, tol: f64) -> Result<(bool, f64)> {
    if spec.flag_dim() < spec.component_count() {
        return Err(Error::InvalidSpec(format!(
            "flag dimension {} is below the component count {}",
            spec.flag_dim(),
            spec.component_count()
        )));
    }
    if spec.dim_in() != spec.dim_out() {
        return Err(Error::InvalidSpec(
            "degradability condition needs equal input and output dimensions".into(),
        ));
    }
    let count = spec.component_count();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..count {
        let root_i = spec.weights()[i].sqrt();
        for ip in 0..count {
            let root_ip = spec.weights()[ip].sqrt();
            // ⟨i′|φᵢ⟩ with the component basis = computational flag basis.
            let overlap_l = spec.flags()[i][ip];
            let overlap_r = spec.flags()[ip][i];
            for kj in spec.channels()[i].kraus() {
                for kjp in spec.channels()[ip].kraus() {
                    let forward = crate::operators::matmul(kjp, kj);
                    let backward = crate::operators::matmul(kj, kjp);
                    let lhs = forward.scale(overlap_l * root_i);
                    let rhs = backward.scale(overlap_r * root_ip);
                    worst = worst.max(lhs.sub(&rhs).frobenius_norm());
                    scale = scale.max(forward.scale(C64::new(root_i, 0.0)).operator_norm());
                }
            }
        }
    }
    let normalizer = if scale > 0.0 { scale } else { 1.0 };
    let residual = worst / normalizer;
    Ok((residual <= tol, residual))
}

/// The degrading map W: B ⊗ F → E with Kraus operators
/// E_m[(i,j), (o,f)] = δ_{i,f} · K_j^{(i)}[m, o], one per output-basis index m.
///
/// E is the canonical environment of [`build_flagged`] — (component,
/// within-component) pairs after zero padding. W is trace-preserving whenever
/// every component channel is, regardless of whether the degradability
/// condition holds; only the identity W∘𝕃 = 𝕃̃ depends on it.
pub fn degrading_map(spec: &FlaggedSpec) -> Result<KrausChannel> {
    if spec.dim_in() != spec.dim_out() {
        return Err(Error::InvalidSpec(
            "degrading map needs equal input and output dimensions".into(),
        ));
    }
    if spec.flag_dim() != spec.component_count() {
        return Err(Error::InvalidSpec(format!(
            "degrading map pairs flag basis vectors with components; got flag dimension {} \
             for {} components",
            spec.flag_dim(),
            spec.component_count()
        )));
    }
    let count = spec.component_count();
    let r = spec.max_kraus_count();
    let (dout, l) = (spec.dim_out(), spec.flag_dim());
    let mut kraus = Vec::with_capacity(dout);
    for m in 0..dout {
        let mut e = ComplexMatrix::zeros(count * r, dout * l);
        for i in 0..count {
            for j in 0..r {
                let k = spec.padded_kraus(i, j);
                for o in 0..dout {
                    e.set(i * r + j, o * l + i, k.get(m, o));
                }
            }
        }
        kraus.push(e);
    }
    KrausChannel::new(kraus)
}

/// Trace distance between the Choi matrices of W∘𝕃 and 𝕃̃ — the end-to-end
/// certificate that the degrading map actually degrades.
pub fn degrading_residual(spec: &FlaggedSpec) -> Result<f64> {
    let flagged = build_flagged(spec)?;
    let w = degrading_map(spec)?;
    let degraded = compose(&w, &flagged)?;
    let complementary = flagged.complementary();
    let (_, residual) = channels_equal(&degraded, &complementary, f64::INFINITY)?;
    Ok(residual)
}

/// Flag pair (φ₀, φ₁) for a mixture u·id + (1−u)·Λ₁ of the identity (or any
/// unitary conjugation, component 0) with an arbitrary channel (component 1):
/// φ₁ = |0⟩ and φ₀ = √((u−q)/u)|0⟩ + √(q/u)|1⟩ with q = 1−u. Requires u ≥ 1/2,
/// otherwise φ₀ is not normalizable.
pub fn unitary_mixture_flags(u: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    if !(0.5..=1.0).contains(&u) {
        return Err(Error::OutOfRange(format!(
            "unitary weight {u} must lie in [1/2, 1] for normalizable flags"
        )));
    }
    let q = 1.0 - u;
    let phi0 = vec![
        C64::new(((u - q) / u).max(0.0).sqrt(), 0.0),
        C64::new((q / u).sqrt(), 0.0),
    ];
    let phi1 = vec![C64::ONE, C64::ZERO];
    Ok((phi0, phi1))
}

/// Full flagged spec for u·id + (1−u)·Λ₁ with the flags of
/// [`unitary_mixture_flags`]; passes the degradability check for any Λ₁.
pub fn unitary_mixture_spec(u: f64, lambda1: &KrausChannel) -> Result<FlaggedSpec> {
    if lambda1.dim_in() != lambda1.dim_out() {
        return Err(Error::InvalidSpec("mixture component must be square".into()));
    }
    let (phi0, phi1) = unitary_mixture_flags(u)?;
    FlaggedSpec::new(
        vec![
            (u, KrausChannel::identity(lambda1.dim_in())),
            (1.0 - u, lambda1.clone()),
        ],
        vec![phi0, phi1],
    )
}

/// Q1 of the flagged extension of u·id + (1−u)·Λ₁ — an upper bound on the
/// quantum and private capacities of the mixture when u ≥ 1/2.
pub fn unitary_mixture_bound(u: f64, lambda1: &KrausChannel) -> Result<f64> {
    use crate::channel::{q1_maximize, InputStrategy};
    let spec = unitary_mixture_spec(u, lambda1)?;
    let flagged = build_flagged(&spec)?;
    let strategy = if spec.dim_in() == 2 {
        InputStrategy::FullQubit
    } else {
        InputStrategy::MaximallyMixed
    };
    q1_maximize(&flagged, strategy)
}
