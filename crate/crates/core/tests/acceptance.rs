//! Release acceptance checks, one test per criterion.
//!
//! Each test prints a single `criterion NN <name>: pass|FAIL — <details>`
//! line (visible with `--nocapture` or on failure) and then asserts, so the
//! suite doubles as a checklist: `cargo test --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flagcap::channel::{channels_equal, coherent_information, KrausChannel};
use flagcap::flagged::{build_flagged, degrading_residual, unitary_mixture_spec};
use flagcap::operators::{
    eigvals_hermitian, entropy_from_spectrum, matmul, partial_trace, ComplexMatrix, DensityMatrix,
    C64,
};
use flagcap::pauli::{pauli_twirl_basis, symplectic_form, weyl_operator};
use flagcap::pauli_bounds::{flagged_pauli_q1, pauli_flagged_spec, FlagFamily, PauliWeights};
use flagcap::zoo::{
    ad_capacity, bb84_at_110, bb84_fmin_bound, bb84_flag_family, bb84_optimal_spec, bb84_pipeline,
    dep_flag_entropy, dep_optimal_spec, dep_pipeline, dep_weights, gad, gad_alt_kraus,
    gad_alt_kraus_with_swapped_a3, gad_pipeline, linspace, no_cloning_bound, BoundCurve,
    DepFlagParams, GadParams,
};

fn report(index: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "pass" } else { "FAIL" };
    println!("criterion {index:02} {name}: {verdict} — {detail}");
    assert!(pass, "criterion {index:02} ({name}) failed: {detail}");
}

/// Random unitary by modified Gram–Schmidt on a dense random matrix.
fn random_unitary(dim: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    for c in 0..dim {
        for prev in 0..c {
            let proj: C64 = (0..dim).map(|i| cols[prev][i].conj() * cols[c][i]).sum();
            for i in 0..dim {
                let sub = proj * cols[prev][i];
                cols[c][i] -= sub;
            }
        }
        let norm = cols[c].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..dim {
            cols[c][i] /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for c in 0..dim {
        for (i, v) in cols[c].iter().enumerate() {
            u.set(i, c, *v);
        }
    }
    u
}

/// Random CPTP channel: slice an isometry out of a random unitary.
fn random_cptp(dim: usize, kraus_count: usize, r: &mut ChaCha8Rng) -> KrausChannel {
    let u = random_unitary(dim * kraus_count, r);
    let kraus: Vec<ComplexMatrix> = (0..kraus_count)
        .map(|j| {
            let mut k = ComplexMatrix::zeros(dim, dim);
            for m in 0..dim {
                for o in 0..dim {
                    k.set(m, o, u.get(j * dim + m, o));
                }
            }
            k
        })
        .collect();
    KrausChannel::new(kraus).expect("columns of a unitary form an isometry")
}

/// Random qubit Pauli weights and flags satisfying the overlap constraints:
/// entries of the Gram-like matrix M are symmetric across commuting label
/// pairs and antisymmetric across anticommuting ones, rows normalize to the
/// flags and their squared norms to the weights.
fn random_feasible_qubit_draw(r: &mut ChaCha8Rng) -> (PauliWeights, Vec<Vec<C64>>) {
    let labels = pauli_twirl_basis(2, 1);
    let mut m = [[0.0f64; 4]; 4];
    for x in 0..4 {
        m[x][x] = r.random_range(0.2..1.0);
    }
    for x in 0..4 {
        for y in (x + 1)..4 {
            let v: f64 = r.random_range(-0.5..0.5);
            let form = symplectic_form(&labels[x], &labels[y]).unwrap() % 2;
            m[x][y] = v;
            m[y][x] = if form == 0 { v } else { -v };
        }
    }
    let total: f64 = m.iter().flatten().map(|v| v * v).sum();
    let scale = total.sqrt();
    let w: Vec<f64> =
        (0..4).map(|x| m[x].iter().map(|v| (v / scale) * (v / scale)).sum()).collect();
    let flags: Vec<Vec<C64>> = (0..4)
        .map(|x| {
            let wx: f64 = w[x];
            (0..4).map(|y| C64::new(m[x][y] / scale / wx.sqrt(), 0.0)).collect()
        })
        .collect();
    (PauliWeights::new(2, 1, w).unwrap(), flags)
}

/// Largest lower-minus-upper gap across the named upper-bound columns,
/// skipping samples where the upper bound is not defined.
fn sandwich_gap(curves: &[BoundCurve], upper_cols: &[usize]) -> f64 {
    let lower = curves[0].samples();
    let mut gap = f64::NEG_INFINITY;
    for &c in upper_cols {
        for (lo, up) in lower.iter().zip(curves[c].samples()) {
            if up.1.is_nan() {
                continue;
            }
            gap = gap.max(lo.1 - up.1);
        }
    }
    gap
}

#[test]
fn criterion_01_optimal_flag_extensions_are_degradable() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for p in [0.05, 0.1, 0.2] {
        let (spec, _) = dep_optimal_spec(2, p).unwrap();
        worst = worst.max(degrading_residual(&spec).unwrap());
    }
    for p in [0.05, 0.1] {
        let (spec, _) = bb84_optimal_spec(p).unwrap();
        worst = worst.max(degrading_residual(&spec).unwrap());
    }
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    for u in [0.6, 0.75, 0.9] {
        let lambda1 = random_cptp(2, 3, &mut r);
        let spec = unitary_mixture_spec(u, &lambda1).unwrap();
        worst = worst.max(degrading_residual(&spec).unwrap());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-8 && elapsed < Duration::from_secs(10);
    report(
        1,
        "optimal flag extensions are degradable",
        pass,
        &format!("max Choi distance of degraded vs complementary {worst:.3e}, elapsed {elapsed:.2?} (limit 10s)"),
    );
}

#[test]
fn criterion_02_flag_formula_matches_coherent_information() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (w, flags) = random_feasible_qubit_draw(&mut r);
        let formula = flagged_pauli_q1(&w, &flags).unwrap();
        let ch = build_flagged(&pauli_flagged_spec(&w, &flags).unwrap()).unwrap();
        let direct = coherent_information(&ch, &DensityMatrix::maximally_mixed(2)).unwrap();
        worst = worst.max((formula - direct).abs());
    }
    report(
        2,
        "flag formula matches coherent information",
        worst <= 1e-9,
        &format!("max |formula − direct| = {worst:.3e} over 100 random feasible draws (tol 1e-9)"),
    );
}

#[test]
fn criterion_03_flag_entropy_matches_partial_trace() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for d in [2u32, 3, 4] {
        let count = (d * d) as usize;
        let dd = (d as f64) * (d as f64);
        for _ in 0..1000 {
            let p: f64 = r.random_range(0.01..0.99);
            let w = dep_weights(d, p);
            let t_max = (p / dd).min(w[0] / (dd - 1.0));
            let t: f64 = r.random_range(0.0..t_max);
            let params = DepFlagParams::from_t(d, p, t).unwrap();
            let closed = dep_flag_entropy(&params, d).unwrap();
            // Unnormalized flag rows √w_x·φ_x of the label⊗flag pure state.
            let mut psi = vec![C64::ZERO; count * count];
            psi[0] = C64::new(params.alpha, 0.0);
            for x in 1..count {
                psi[x] = C64::new(params.beta, 0.0);
                psi[x * count] = C64::new(params.beta, 0.0);
                psi[x * count + x] = C64::new(params.gamma, 0.0);
            }
            let total = count * count;
            let mut data = Vec::with_capacity(total * total);
            for i in 0..total {
                for j in 0..total {
                    data.push(psi[i] * psi[j].conj());
                }
            }
            let projector = ComplexMatrix::new(total, total, data);
            let marginal = partial_trace(&projector, &[count, count], &[1]).unwrap();
            let brute =
                entropy_from_spectrum(&eigvals_hermitian(&marginal).unwrap()).unwrap();
            worst = worst.max((closed - brute).abs());
        }
    }
    report(
        3,
        "flag entropy matches partial trace",
        worst <= 1e-10,
        &format!("max |closed form − eigen entropy| = {worst:.3e} over 1000 draws per d ∈ {{2,3,4}} (tol 1e-10)"),
    );
}

#[test]
fn criterion_04_exact_special_points() {
    let ncl = no_cloning_bound(2, 1.0 / 3.0);
    let mut zero_noise_dev = 0.0f64;
    for d in [2u32, 3, 4] {
        let target = (d as f64).log2();
        for curve in dep_pipeline(d, &[0.0]).unwrap() {
            zero_noise_dev = zero_noise_dev.max((curve.samples()[0].1 - target).abs());
        }
    }
    for curve in bb84_pipeline(&[0.0]).unwrap() {
        zero_noise_dev = zero_noise_dev.max((curve.samples()[0].1 - 1.0).abs());
    }
    for n in [0.5, 0.3] {
        for curve in gad_pipeline(n, &[0.0]).unwrap() {
            zero_noise_dev = zero_noise_dev.max((curve.samples()[0].1 - 1.0).abs());
        }
    }
    let ad_half = ad_capacity(0.5).abs();
    let pass = ncl == 0.0 && zero_noise_dev <= 1e-12 && ad_half <= 1e-9;
    report(
        4,
        "exact special points",
        pass,
        &format!(
            "no-cloning(2, 1/3) = {ncl:e}, max zero-noise deviation from log2(d) = {zero_noise_dev:.3e} (tol 1e-12), damping capacity at y = 1/2: {ad_half:.3e} (tol 1e-9)"
        ),
    );
}

#[test]
fn criterion_05_optimized_flags_improve_on_reference_point() {
    let mut violation = f64::NEG_INFINITY;
    let mut best_gain = f64::NEG_INFINITY;
    let mut best_p = 0.0;
    for k in 1..=100 {
        let p = 0.25 * k as f64 / 100.0;
        let fmin = bb84_fmin_bound(p).unwrap();
        let fixed = bb84_at_110(p).unwrap();
        violation = violation.max(fmin - fixed);
        if fixed - fmin > best_gain {
            best_gain = fixed - fmin;
            best_p = p;
        }
    }
    let inequality = violation <= 1e-12;
    let strict = best_gain > 1e-4;
    if !strict {
        println!(
            "OBSERVATION: optimized flags never beat the reference point by more than 1e-4 \
             (best gain {best_gain:.3e}); inequality still holds but this warrants investigation"
        );
    }
    report(
        5,
        "optimized flags improve on reference point",
        inequality,
        &format!(
            "max (optimized − reference) = {violation:.3e} over 100 points of (0, 0.25], best improvement {best_gain:.4} at p = {best_p}"
        ),
    );
}

#[test]
fn criterion_06_lower_bound_stays_under_upper_bounds() {
    let mut worst_gap = f64::NEG_INFINITY;
    for (d, hi, steps) in [(2u32, 0.3, 41), (3, 0.4, 9), (4, 0.45, 5)] {
        let grid = linspace(0.0, hi, steps).unwrap();
        let curves = dep_pipeline(d, &grid).unwrap();
        worst_gap = worst_gap.max(sandwich_gap(&curves, &[1, 2, 3]));
    }
    let curves = bb84_pipeline(&linspace(0.0, 0.25, 13).unwrap()).unwrap();
    worst_gap = worst_gap.max(sandwich_gap(&curves, &[1, 2]));
    for n in [0.5, 0.3, 0.0] {
        let grid = linspace(0.0, 0.5, 6).unwrap();
        let curves = gad_pipeline(n, &grid).unwrap();
        // The half-mixing family column upper-bounds the emitted channel only
        // when the run is at N = 1/2; elsewhere it is an ingredient of the
        // convex combination column.
        let cols: &[usize] = if n == 0.5 { &[1, 2, 3] } else { &[1, 3] };
        worst_gap = worst_gap.max(sandwich_gap(&curves, cols));
    }
    report(
        6,
        "lower bound stays under upper bounds",
        worst_gap <= 1e-9,
        &format!("max (lower − upper) over all pipeline grids = {worst_gap:.3e} (tol 1e-9)"),
    );
}

#[test]
fn criterion_07_damping_kraus_remix_consistency() {
    let ys = linspace(0.05, 0.95, 10).unwrap();
    let ns = linspace(0.05, 0.95, 10).unwrap();
    let mut worst_tp = 0.0f64;
    let mut worst_choi = 0.0f64;
    for &y in &ys {
        for &n in &ns {
            let params = GadParams::new(y, n).unwrap();
            let alt = gad_alt_kraus(&params).unwrap();
            let mut acc = ComplexMatrix::identity(2).scale(C64::new(-1.0, 0.0));
            for k in alt.kraus() {
                acc = acc.add(&matmul(&k.dagger(), k));
            }
            worst_tp = worst_tp.max(acc.max_abs());
            let standard = gad(&params).unwrap();
            let (_, residual) = channels_equal(&alt, &standard, 1e-10).unwrap();
            worst_choi = worst_choi.max(residual);
        }
    }
    // Mixing the third operator's weights the other way round breaks trace
    // preservation: the Kraus sum acquires a 1.076 coefficient on |0⟩⟨0| at
    // (N, y) = (0.3, 0.19), which pins down the corrected ordering.
    let swapped = gad_alt_kraus_with_swapped_a3(&GadParams::new(0.19, 0.3).unwrap());
    let mut acc = ComplexMatrix::zeros(2, 2);
    for k in &swapped {
        acc = acc.add(&matmul(&k.dagger(), k));
    }
    let coeff = acc.get(0, 0).re;
    let coeff_dev = (coeff - 1.076).abs();
    let pass = worst_tp <= 1e-10 && worst_choi <= 1e-10 && coeff_dev <= 1e-12;
    report(
        7,
        "damping kraus remix consistency",
        pass,
        &format!(
            "max trace-preservation residual {worst_tp:.3e}, max Choi distance {worst_choi:.3e} on a 10×10 (y,N) grid (tol 1e-10); swapped-mixing coefficient {coeff:.6} vs 1.076 (tol 1e-12)"
        ),
    );
}

#[test]
fn criterion_08_weyl_algebra_identities() {
    let mut worst = 0.0f64;
    for (d, n) in [(2u32, 1usize), (3, 1), (4, 1), (2, 2)] {
        let basis = pauli_twirl_basis(d, n);
        let dim = (d as f64).powi(n as i32);
        for (xi, x) in basis.iter().enumerate() {
            let wx = weyl_operator(x);
            for (yi, y) in basis.iter().enumerate() {
                let wy = weyl_operator(y);
                let form = symplectic_form(x, y).unwrap();
                let angle = 2.0 * std::f64::consts::PI * form as f64 / d as f64;
                let phase = C64::new(angle.cos(), angle.sin());
                let commutation =
                    matmul(&wx, &wy).sub(&matmul(&wy, &wx).scale(phase)).max_abs();
                worst = worst.max(commutation);
                // Shifting a label by d·y only flips a prescribed sign.
                let shifted = weyl_operator(&x.add_scaled(y, d));
                let sign = if ((d + 1) * form) % 2 == 0 { 1.0 } else { -1.0 };
                let reduction = shifted.sub(&wx.scale(C64::new(sign, 0.0))).max_abs();
                worst = worst.max(reduction);
                let tr = matmul(&wx.dagger(), &wy).trace();
                let expected = if xi == yi { dim } else { 0.0 };
                worst = worst.max((tr - C64::new(expected, 0.0)).norm());
            }
        }
    }
    report(
        8,
        "weyl algebra identities",
        worst <= 1e-12,
        &format!(
            "max residual of commutation, label-reduction, and trace identities = {worst:.3e} for (d,n) ∈ {{(2,1),(3,1),(4,1),(2,2)}} (tol 1e-12)"
        ),
    );
}

#[test]
fn criterion_09_depolarizing_pipeline_single_thread_runtime() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let grid = linspace(0.0, 0.3, 151).unwrap();
    let start = Instant::now();
    let curves = pool.install(|| dep_pipeline(2, &grid)).unwrap();
    let elapsed = start.elapsed();
    let complete = curves.len() == 4 && curves.iter().all(|c| c.samples().len() == 151);
    let pass = complete && elapsed < Duration::from_secs(60);
    report(
        9,
        "depolarizing pipeline single-thread runtime",
        pass,
        &format!("151 grid points on one thread in {elapsed:.2?} (limit 60s), {} curves", curves.len()),
    );
}

#[test]
fn criterion_10_pipelines_emit_identical_csv() {
    let bin = env!("CARGO_BIN_EXE_flagcap");
    let runs: [&[&str]; 3] = [
        &["depolarizing", "--steps", "16", "--p-max", "0.3"],
        &["bb84", "--steps", "6", "--p-max", "0.25"],
        &["gad", "0.3", "--steps", "6"],
    ];
    let mut all = true;
    let mut notes = Vec::new();
    for args in runs {
        let first = Command::new(bin).args(args).output().unwrap();
        let second = Command::new(bin).args(args).output().unwrap();
        let same =
            first.status.success() && second.status.success() && first.stdout == second.stdout;
        all &= same;
        notes.push(format!("{} {}", args[0], if same { "identical" } else { "DIFFERS" }));
    }
    report(10, "pipelines emit identical csv", all, &notes.join(", "));
}

// Keep the reference-point evaluation honest: the minimizer must consider the
// reference start, otherwise criterion 5's inequality would be vacuous.
#[test]
fn reference_point_is_among_minimizer_starts() {
    let family = bb84_flag_family(0.1).unwrap();
    let has_reference = family
        .extra_starts()
        .iter()
        .any(|s| s == &[1.0, 1.0, 0.0]);
    assert!(has_reference, "the (1,1,0) reference start is missing");
}
