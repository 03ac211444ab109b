//! Seeded random matrices for unit tests.

use crate::operators::{matmul, C64, ComplexMatrix, DensityMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_matrix(rows: usize, cols: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
        }
    }
    m
}

pub fn random_hermitian(dim: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_complex_matrix(dim, dim, r);
    a.add(&a.dagger()).scale(C64::new(0.5, 0.0))
}

pub fn random_density(dim: usize, r: &mut ChaCha8Rng) -> DensityMatrix {
    let a = random_complex_matrix(dim, dim, r);
    let psd = matmul(&a, &a.dagger());
    let tr = psd.trace().re;
    DensityMatrix::new(psd.scale(C64::new(1.0 / tr, 0.0)), 1e-9).expect("normalized PSD matrix")
}

/// Random CPTP channel with `kraus_count` Kraus operators, carved from the
/// column-isometry of a random unitary on dim·kraus_count dimensions.
pub fn random_cptp(dim: usize, kraus_count: usize, r: &mut ChaCha8Rng) -> crate::channel::KrausChannel {
    let u = random_unitary(dim * kraus_count, r);
    let kraus: Vec<ComplexMatrix> = (0..kraus_count)
        .map(|j| {
            let mut k = ComplexMatrix::zeros(dim, dim);
            for b in 0..dim {
                for a in 0..dim {
                    k.set(b, a, u.get(b * kraus_count + j, a));
                }
            }
            k
        })
        .collect();
    crate::channel::KrausChannel::new(kraus).expect("isometry columns form a CPTP set")
}

/// Haar-ish unitary via Gram–Schmidt on a random matrix (good enough for tests).
pub fn random_unitary(dim: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let a = random_complex_matrix(dim, dim, r);
        let mut cols: Vec<Vec<C64>> = (0..dim)
            .map(|j| (0..dim).map(|i| a.get(i, j)).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for _pass in 0..2 {
                for k in 0..j {
                    let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                    for i in 0..dim {
                        let v = cols[k][i];
                        cols[j][i] -= proj * v;
                    }
                }
            }
            let norm: f64 = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for i in 0..dim {
                cols[j][i] /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut u = ComplexMatrix::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                u.set(i, j, cols[j][i]);
            }
        }
        return u;
    }
}
