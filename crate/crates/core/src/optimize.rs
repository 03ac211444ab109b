//! Derivative-free scalar and low-dimensional optimization.
//!
//! All routines are deterministic: no internal randomness, so repeated runs
//! on the same inputs produce bit-identical results.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Minimize,
    Maximize,
}

/// One-dimensional objective on a closed interval.
pub struct ScalarProblem<F: Fn(f64) -> f64> {
    pub objective: F,
    pub lo: f64,
    pub hi: f64,
    pub mode: Mode,
}

impl<F: Fn(f64) -> f64> ScalarProblem<F> {
    fn eval_signed(&self, x: f64) -> Result<f64> {
        let v = (self.objective)(x);
        if !v.is_finite() {
            return Err(Error::Optimization(format!("objective is {v} at x = {x}")));
        }
        Ok(match self.mode {
            Mode::Minimize => v,
            Mode::Maximize => -v,
        })
    }

    fn unsign(&self, v: f64) -> f64 {
        match self.mode {
            Mode::Minimize => v,
            Mode::Maximize => -v,
        }
    }
}

/// Golden-section search. Requires a unimodal objective for the accuracy
/// guarantee; callers bracket with a coarse grid first when unsure.
pub fn golden_section<F: Fn(f64) -> f64>(p: &ScalarProblem<F>, tol: f64) -> Result<(f64, f64)> {
    if !(p.lo <= p.hi) || !p.lo.is_finite() || !p.hi.is_finite() {
        return Err(Error::InvalidSpec(format!("bad interval [{}, {}]", p.lo, p.hi)));
    }
    if p.lo == p.hi {
        let v = p.eval_signed(p.lo)?;
        return Ok((p.lo, p.unsign(v)));
    }
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (p.lo, p.hi);
    let mut best = (a, p.eval_signed(a)?);
    let fb = p.eval_signed(b)?;
    if fb < best.1 {
        best = (b, fb);
    }
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = p.eval_signed(c)?;
    let mut fd = p.eval_signed(d)?;
    for _ in 0..400 {
        if fc < best.1 {
            best = (c, fc);
        }
        if fd < best.1 {
            best = (d, fd);
        }
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = p.eval_signed(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = p.eval_signed(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = p.eval_signed(mid)?;
    if fm < best.1 {
        best = (mid, fm);
    }
    Ok((best.0, p.unsign(best.1)))
}

/// Uniform scan with `grid_points` samples, then golden-section refinement on
/// the bracket around the best sample. The result is never worse than the
/// best grid sample.
pub fn coarse_grid_then_refine<F: Fn(f64) -> f64>(
    p: &ScalarProblem<F>,
    grid_points: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    if grid_points < 16 {
        return Err(Error::InvalidSpec(format!("grid_points = {grid_points} < 16")));
    }
    if !(p.lo <= p.hi) || !p.lo.is_finite() || !p.hi.is_finite() {
        return Err(Error::InvalidSpec(format!("bad interval [{}, {}]", p.lo, p.hi)));
    }
    if p.lo == p.hi {
        let v = p.eval_signed(p.lo)?;
        return Ok((p.lo, p.unsign(v)));
    }
    let step = (p.hi - p.lo) / (grid_points - 1) as f64;
    let xs: Vec<f64> = (0..grid_points).map(|i| p.lo + step * i as f64).collect();
    let mut best_i = 0;
    let mut best_f = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let f = p.eval_signed(x)?;
        if f < best_f {
            best_f = f;
            best_i = i;
        }
    }
    let lo = xs[best_i.saturating_sub(1)];
    let hi = xs[(best_i + 1).min(grid_points - 1)];
    let sub = ScalarProblem { objective: &p.objective, lo, hi, mode: p.mode };
    let (rx, rv) = golden_section(&sub, tol)?;
    let rv_signed = match p.mode {
        Mode::Minimize => rv,
        Mode::Maximize => -rv,
    };
    if rv_signed <= best_f {
        Ok((rx, rv))
    } else {
        Ok((xs[best_i], p.unsign(best_f)))
    }
}

/// Multi-start Nelder–Mead minimization with feasibility by rejection.
///
/// Always minimizes; negate the objective to maximize. Infeasible points
/// evaluate to +∞, so the simplex retreats from constraint boundaries.
pub struct SimplexProblem<F, G>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> bool,
{
    pub objective: F,
    pub feasible: G,
    pub starts: Vec<Vec<f64>>,
}

const SIMPLEX_REFLECT: f64 = 1.0;
const SIMPLEX_EXPAND: f64 = 2.0;
const SIMPLEX_CONTRACT: f64 = 0.5;
const SIMPLEX_SHRINK: f64 = 0.5;
const SIMPLEX_STEP: f64 = 0.15;

pub fn multistart_simplex<F, G>(
    p: &SimplexProblem<F, G>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> bool,
{
    if p.starts.is_empty() {
        return Err(Error::InvalidSpec("no start points supplied".into()));
    }
    let k = p.starts[0].len();
    if k == 0 || k > 4 || p.starts.iter().any(|s| s.len() != k) {
        return Err(Error::InvalidSpec("start points must share a dimension in 1..=4".into()));
    }
    if !p.starts.iter().any(|s| (p.feasible)(s)) {
        return Err(Error::Infeasible("every start point violates the constraints".into()));
    }
    let eval = |x: &[f64]| -> f64 {
        if !(p.feasible)(x) {
            return f64::INFINITY;
        }
        let v = (p.objective)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let note = |x: &[f64], f: f64, best: &mut Option<(Vec<f64>, f64)>| {
        if f.is_finite() && best.as_ref().map_or(true, |(_, bf)| f < *bf) {
            *best = Some((x.to_vec(), f));
        }
    };

    for start in &p.starts {
        // Initial simplex: the start plus one offset vertex per coordinate.
        let mut verts: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
        verts.push(start.clone());
        for i in 0..k {
            let mut v = start.clone();
            v[i] += SIMPLEX_STEP;
            verts.push(v);
        }
        let mut fvals: Vec<f64> = verts.iter().map(|v| eval(v)).collect();
        for (v, &f) in verts.iter().zip(&fvals) {
            note(v, f, &mut best);
        }

        for _ in 0..max_iter {
            // Order so vertex 0 is best, vertex k is worst.
            let mut order: Vec<usize> = (0..=k).collect();
            order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).expect("no NaN survives eval"));
            let verts_s: Vec<Vec<f64>> = order.iter().map(|&i| verts[i].clone()).collect();
            let fvals_s: Vec<f64> = order.iter().map(|&i| fvals[i]).collect();
            verts = verts_s;
            fvals = fvals_s;

            let spread = fvals[k] - fvals[0];
            let diameter = verts[1..]
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&verts[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diameter <= tol && (spread <= tol || !spread.is_finite()) {
                break;
            }

            let centroid: Vec<f64> = (0..k)
                .map(|i| verts[..k].iter().map(|v| v[i]).sum::<f64>() / k as f64)
                .collect();
            let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
                a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
            };

            // Reflect the worst vertex through the centroid.
            let reflected = blend(&centroid, &verts[k], -SIMPLEX_REFLECT);
            let f_ref = eval(&reflected);
            note(&reflected, f_ref, &mut best);

            if f_ref < fvals[0] {
                let expanded = blend(&centroid, &verts[k], -SIMPLEX_EXPAND);
                let f_exp = eval(&expanded);
                note(&expanded, f_exp, &mut best);
                if f_exp < f_ref {
                    verts[k] = expanded;
                    fvals[k] = f_exp;
                } else {
                    verts[k] = reflected;
                    fvals[k] = f_ref;
                }
                continue;
            }
            if f_ref < fvals[k - 1] {
                verts[k] = reflected;
                fvals[k] = f_ref;
                continue;
            }
            // Contract toward the better of {reflected, worst}.
            let (toward, f_toward) = if f_ref < fvals[k] {
                (reflected.clone(), f_ref)
            } else {
                (verts[k].clone(), fvals[k])
            };
            let contracted = blend(&centroid, &toward, SIMPLEX_CONTRACT);
            let f_con = eval(&contracted);
            note(&contracted, f_con, &mut best);
            if f_con <= f_toward {
                verts[k] = contracted;
                fvals[k] = f_con;
                continue;
            }
            // Shrink everything toward the best vertex.
            for i in 1..=k {
                verts[i] = blend(&verts[0], &verts[i], 1.0 - SIMPLEX_SHRINK);
                fvals[i] = eval(&verts[i]);
                let (v, f) = (verts[i].clone(), fvals[i]);
                note(&v, f, &mut best);
            }
        }
    }

    best.ok_or_else(|| {
        Error::Infeasible("no feasible point with a finite objective was found".into())
    })
}
