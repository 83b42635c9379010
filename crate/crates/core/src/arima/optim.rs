//! Unconstrained minimization for the CSS objective: quasi-Newton (BFGS)
//! with central finite-difference gradients and a Nelder–Mead fallback when
//! the line search stalls.

use crate::scalar::{cast, Scalar};

pub(crate) struct OptimOptions {
    pub max_iter: usize,
    /// Stop when the relative objective improvement drops below this.
    pub rel_tol: f64,
    /// Relative step for central finite differences.
    pub fd_step: f64,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            rel_tol: 1e-9,
            fd_step: 1e-6,
        }
    }
}

pub(crate) struct OptimOutcome<T> {
    pub x: Vec<T>,
    pub value: T,
    pub converged: bool,
}

pub(crate) fn minimize<T, F>(f: F, x0: &[T], opts: &OptimOptions) -> OptimOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if x0.is_empty() {
        return OptimOutcome {
            value: f(x0),
            x: Vec::new(),
            converged: true,
        };
    }
    let bfgs = bfgs(&f, x0, opts);
    if bfgs.converged {
        return bfgs;
    }
    // Line search stalled or the iteration budget ran out with a rough
    // gradient; polish with a simplex from the best point seen.
    let nm = nelder_mead(&f, &bfgs.x, opts);
    if nm.value <= bfgs.value {
        nm
    } else {
        OptimOutcome {
            converged: nm.converged,
            ..bfgs
        }
    }
}

fn bfgs<T, F>(f: &F, x0: &[T], opts: &OptimOptions) -> OptimOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let n = x0.len();
    let rel_tol = cast::<T>(opts.rel_tol);
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return OptimOutcome {
            x,
            value: fx,
            converged: false,
        };
    }
    let mut grad = gradient(f, &x, opts);
    // Inverse Hessian approximation, row-major.
    let mut h = identity::<T>(n);
    let mut converged = false;

    for _ in 0..opts.max_iter {
        if grad.iter().any(|g| !g.is_finite()) {
            break;
        }
        // Search direction d = −H·g.
        let mut dir = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                acc = acc + h[i * n + j] * grad[j];
            }
            dir[i] = -acc;
        }
        let slope: T = dir.iter().zip(&grad).map(|(d, g)| *d * *g).sum();
        if !(slope < T::zero()) {
            // Not a descent direction; reset the curvature estimate.
            h = identity::<T>(n);
            for i in 0..n {
                dir[i] = -grad[i];
            }
        }

        let (x_new, f_new, ok) = line_search(f, &x, &dir, fx, &grad);
        if !ok {
            break;
        }
        let improvement = (fx - f_new) / (fx.abs() + T::min_positive_value());
        let grad_new = gradient(f, &x_new, opts);

        // BFGS update on H with s = x_new − x, y = grad_new − grad.
        let s: Vec<T> = x_new.iter().zip(&x).map(|(a, b)| *a - *b).collect();
        let y: Vec<T> = grad_new.iter().zip(&grad).map(|(a, b)| *a - *b).collect();
        let sy: T = s.iter().zip(&y).map(|(a, b)| *a * *b).sum();
        let s_norm: T = s.iter().map(|v| *v * *v).sum::<T>().sqrt();
        let y_norm: T = y.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if sy > cast::<T>(1e-12) * s_norm * y_norm && sy.is_finite() {
            let rho = T::one() / sy;
            // H ← (I − ρsyᵀ)H(I − ρysᵀ) + ρssᵀ
            let mut hy = vec![T::zero(); n];
            for i in 0..n {
                let mut acc = T::zero();
                for j in 0..n {
                    acc = acc + h[i * n + j] * y[j];
                }
                hy[i] = acc;
            }
            let yhy: T = y.iter().zip(&hy).map(|(a, b)| *a * *b).sum();
            for i in 0..n {
                for j in 0..n {
                    let term = rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j]
                        - rho * (s[i] * hy[j] + hy[i] * s[j]);
                    h[i * n + j] = h[i * n + j] + term;
                }
            }
        }

        x = x_new;
        fx = f_new;
        grad = grad_new;
        if improvement >= T::zero() && improvement < rel_tol {
            converged = true;
            break;
        }
    }

    OptimOutcome {
        x,
        value: fx,
        converged,
    }
}

fn line_search<T, F>(f: &F, x: &[T], dir: &[T], fx: T, grad: &[T]) -> (Vec<T>, T, bool)
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let slope: T = dir.iter().zip(grad).map(|(d, g)| *d * *g).sum();
    let c1 = cast::<T>(1e-4);
    let mut step = T::one();
    for _ in 0..50 {
        let cand: Vec<T> = x
            .iter()
            .zip(dir)
            .map(|(xi, di)| *xi + step * *di)
            .collect();
        let fc = f(&cand);
        if fc.is_finite() && fc <= fx + c1 * step * slope {
            return (cand, fc, true);
        }
        step = step * cast::<T>(0.5);
    }
    (x.to_vec(), fx, false)
}

fn gradient<T, F>(f: &F, x: &[T], opts: &OptimOptions) -> Vec<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let rel = cast::<T>(opts.fd_step);
    let mut work = x.to_vec();
    let mut grad = vec![T::zero(); x.len()];
    for i in 0..x.len() {
        let h = rel * (T::one() + x[i].abs());
        let orig = work[i];
        work[i] = orig + h;
        let fp = f(&work);
        work[i] = orig - h;
        let fm = f(&work);
        work[i] = orig;
        grad[i] = (fp - fm) / (h + h);
    }
    grad
}

fn identity<T: Scalar>(n: usize) -> Vec<T> {
    let mut h = vec![T::zero(); n * n];
    for i in 0..n {
        h[i * n + i] = T::one();
    }
    h
}

fn nelder_mead<T, F>(f: &F, x0: &[T], opts: &OptimOptions) -> OptimOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let n = x0.len();
    let alpha = T::one();
    let gamma = cast::<T>(2.0);
    let rho = cast::<T>(0.5);
    let sigma = cast::<T>(0.5);
    let rel_tol = cast::<T>(opts.rel_tol);

    // Initial simplex around x0.
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = if v[i].abs() > cast::<T>(1e-8) {
            v[i].abs() * cast::<T>(0.05)
        } else {
            cast::<T>(0.1)
        };
        v[i] = v[i] + step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let max_iter = (opts.max_iter * 2).max(200 * n);
    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best.is_finite()
            && worst.is_finite()
            && (worst - best) <= rel_tol * (best.abs() + T::min_positive_value())
        {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![T::zero(); n];
        for (v, _) in simplex.iter().take(n) {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c = *c + *vi;
            }
        }
        let inv = T::one() / cast::<T>(n as f64);
        for c in &mut centroid {
            *c = *c * inv;
        }

        let reflect: Vec<T> = centroid
            .iter()
            .zip(&simplex[n].0)
            .map(|(c, w)| *c + alpha * (*c - *w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < simplex[0].1 {
            let expand: Vec<T> = centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| *c + gamma * (*c - *w))
                .collect();
            let f_expand = f(&expand);
            simplex[n] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[n - 1].1 {
            simplex[n] = (reflect, f_reflect);
        } else {
            let contract: Vec<T> = centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| *c + rho * (*w - *c))
                .collect();
            let f_contract = f(&contract);
            if f_contract < simplex[n].1 {
                simplex[n] = (contract, f_contract);
            } else {
                // Shrink toward the best vertex.
                let best_v = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (vi, bi) in entry.0.iter_mut().zip(&best_v) {
                        *vi = *bi + sigma * (*vi - *bi);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    OptimOutcome { x, value, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2);
        let out = minimize(f, &[0.0, 0.0], &OptimOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-5);
        assert!((out.x[1] + 1.0).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock_two_dim() {
        let f = |x: &[f64]| {
            let a = 1.0 - x[0];
            let b = x[1] - x[0] * x[0];
            a * a + 100.0 * b * b
        };
        let out = minimize(f, &[-1.2, 1.0], &OptimOptions::default());
        assert!((out.x[0] - 1.0).abs() < 1e-3, "got {:?}", out.x);
        assert!((out.x[1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn objective_with_infinite_region() {
        // Infinite north of x = 2; the minimizer sits at the origin.
        let f = |x: &[f64]| {
            if x[0] > 2.0 {
                f64::INFINITY
            } else {
                x[0] * x[0]
            }
        };
        let out = minimize(f, &[1.5], &OptimOptions::default());
        assert!(out.x[0].abs() < 1e-4);
    }

    #[test]
    fn empty_parameter_vector() {
        let out = minimize(|_: &[f64]| 7.0, &[], &OptimOptions::default());
        assert!(out.converged);
        assert_eq!(out.value, 7.0);
    }

    #[test]
    fn works_at_f32() {
        let f = |x: &[f32]| (x[0] - 1.5).powi(2);
        let out = minimize(
            f,
            &[0.0],
            &OptimOptions {
                rel_tol: 1e-6,
                ..Default::default()
            },
        );
        assert!((out.x[0] - 1.5).abs() < 1e-2);
    }
}
