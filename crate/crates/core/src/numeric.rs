//! Damped least squares (Levenberg-Marquardt) with finite-difference Jacobians,
//! and torus parametrizations shared by the numerical checks and samplers.

use num_complex::Complex64;
use rand::Rng;

pub(crate) struct LmOptions {
    pub iters: usize,
    /// Target residual norm; iteration stops once the residual is far below it.
    pub tol: f64,
    /// The first `boxed` coordinates are clamped to `[-bound, bound]`.
    pub boxed: usize,
    pub bound: f64,
}

pub(crate) struct LmResult {
    pub x: Vec<f64>,
    pub norm: f64,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[r][k] -= factor * a[col][k];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

pub(crate) fn levenberg_marquardt<F>(residual: F, x0: Vec<f64>, opts: &LmOptions) -> LmResult
where
    F: Fn(&[f64], &mut Vec<f64>),
{
    let clamp = |x: &mut [f64]| {
        for v in x.iter_mut().take(opts.boxed) {
            *v = v.clamp(-opts.bound, opts.bound);
        }
    };
    let dim = x0.len();
    let mut x = x0;
    clamp(&mut x);
    let mut r = Vec::new();
    residual(&x, &mut r);
    let mut cost = norm2(&r);
    if !cost.is_finite() {
        return LmResult { x, norm: f64::INFINITY, iterations: 0 };
    }
    let m = r.len();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let target = (opts.tol * 1e-4).powi(2);
    let mut rp = Vec::with_capacity(m);
    let mut rm = Vec::with_capacity(m);
    while iterations < opts.iters && cost > target {
        iterations += 1;
        let mut jac = vec![vec![0.0; dim]; m];
        let mut xp = x.clone();
        for k in 0..dim {
            let h = 1e-7 * x[k].abs().max(1.0);
            xp[k] = x[k] + h;
            residual(&xp, &mut rp);
            xp[k] = x[k] - h;
            residual(&xp, &mut rm);
            xp[k] = x[k];
            for i in 0..m {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = vec![vec![0.0; dim]; dim];
        let mut jtr = vec![0.0; dim];
        for i in 0..m {
            for a in 0..dim {
                jtr[a] += jac[i][a] * r[i];
                for b in a..dim {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        for a in 0..dim {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj.clone();
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] += lambda * (jtj[a][a] + 1e-12);
            }
            let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let Some(step) = solve(damped, rhs) else {
                lambda *= 4.0;
                continue;
            };
            let mut xn: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            clamp(&mut xn);
            let mut rn = Vec::new();
            residual(&xn, &mut rn);
            let cn = norm2(&rn);
            if cn.is_finite() && cn < cost {
                let moved = xn.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = moved > 1e-15;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LmResult { x, norm: cost.sqrt(), iterations }
}

/// `z_k = exp(s_k + i θ_k)` from the packed vector `(s_1..s_m, θ_1..θ_m)`.
pub(crate) fn torus_point(x: &[f64]) -> Vec<Complex64> {
    let m = x.len() / 2;
    (0..m).map(|k| Complex64::from_polar(x[k].exp(), x[m + k])).collect()
}

pub(crate) fn random_torus_start<R: Rng>(rng: &mut R, m: usize, radius: f64) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * m);
    for _ in 0..m {
        x.push(rng.gen_range(-radius..=radius));
    }
    for _ in 0..m {
        x.push(rng.gen_range(0.0..std::f64::consts::TAU));
    }
    x
}

/// SplitMix64 mixing of a base seed with a task tag, for per-task reproducible streams.
pub(crate) fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_root_of_simple_system() {
        let res = levenberg_marquardt(
            |x, r| {
                r.clear();
                r.push(x[0] * x[0] - 2.0);
                r.push(x[0] * x[1] - 1.0);
            },
            vec![1.0, 1.0],
            &LmOptions { iters: 100, tol: 1e-9, boxed: 0, bound: 0.0 },
        );
        assert!(res.norm < 1e-12);
        assert!((res.x[0] - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn respects_box() {
        let res = levenberg_marquardt(
            |x, r| {
                r.clear();
                r.push(x[0] - 10.0);
            },
            vec![0.0],
            &LmOptions { iters: 50, tol: 1e-9, boxed: 1, bound: 5.0 },
        );
        assert!((res.x[0] - 5.0).abs() < 1e-12);
        assert!(res.norm > 1.0);
    }

    #[test]
    fn seeds_differ_by_task() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_eq!(derive_seed(7, 3, 2), derive_seed(7, 3, 2));
    }
}
