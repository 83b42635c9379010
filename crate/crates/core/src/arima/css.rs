//! Conditional-sum-of-squares residual recursion.
//!
//! The multiplicative seasonal polynomials are expanded once into sparse
//! `(lag, coefficient)` lists, so one residual step costs only as many
//! multiplies as there are nonzero expanded terms.

use super::{ArimaCoeffs, ArimaOrders};
use crate::poly::{poly_mul, Polynomial};
use crate::scalar::Scalar;

/// Expanded AR and MA sides of the model, nonzero lags only.
///
/// With `phi_ar(B) = 1 + Σ aᵢ Bⁱ` and `theta_ma(B) = 1 + Σ bⱼ Bʲ`
/// (coefficients stored with their signs), the residual recursion is
/// `ε_t = x̃_t + Σ aᵢ x̃_{t−i} − Σ bⱼ ε_{t−j}` with zero pre-sample values.
pub(crate) struct LagForm<T> {
    ar: Vec<(usize, T)>,
    ma: Vec<(usize, T)>,
}

impl<T: Scalar> LagForm<T> {
    pub(crate) fn new(orders: &ArimaOrders, coeffs: &ArimaCoeffs<T>) -> Self {
        let ar_poly = poly_mul(
            &Polynomial::ar_char(&coeffs.phi),
            &Polynomial::seasonal_ar_char(&coeffs.cap_phi, orders.m),
        );
        let ma_poly = poly_mul(
            &Polynomial::ma_char(&coeffs.theta),
            &Polynomial::seasonal_ma_char(&coeffs.cap_theta, orders.m),
        );
        Self {
            ar: sparse_tail(&ar_poly),
            ma: sparse_tail(&ma_poly),
        }
    }

    /// Writes residuals for `x̃ = x − mean` into `eps` (resized to `x.len()`).
    pub(crate) fn residuals_into(&self, x: &[T], mean: T, eps: &mut Vec<T>) {
        eps.clear();
        eps.resize(x.len(), T::zero());
        for t in 0..x.len() {
            let mut e = x[t] - mean;
            for &(lag, c) in &self.ar {
                if lag > t {
                    break;
                }
                e = e + c * (x[t - lag] - mean);
            }
            for &(lag, c) in &self.ma {
                if lag > t {
                    break;
                }
                e = e - c * eps[t - lag];
            }
            eps[t] = e;
        }
    }

    /// Conditional sum of squares over residuals `skip..`, `+∞` on overflow.
    pub(crate) fn css(&self, x: &[T], mean: T, skip: usize, eps: &mut Vec<T>) -> T {
        self.residuals_into(x, mean, eps);
        let mut acc = T::zero();
        for &e in eps.iter().skip(skip) {
            acc = acc + e * e;
        }
        if acc.is_finite() {
            acc
        } else {
            T::infinity()
        }
    }
}

fn sparse_tail<T: Scalar>(poly: &Polynomial<T>) -> Vec<(usize, T)> {
    poly.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| **c != T::zero())
        .map(|(i, c)| (i, *c))
        .collect()
}

/// Residuals of the conditional recursion on an already differenced
/// sequence, excluding the first `p + P·m` burn-in values.
///
/// `mean` is subtracted from `x` first when an intercept or drift term is
/// present on the differenced scale.
pub fn css_residuals<T: Scalar>(
    x: &[T],
    orders: &ArimaOrders,
    coeffs: &ArimaCoeffs<T>,
    mean: Option<T>,
) -> Vec<T> {
    let form = LagForm::new(orders, coeffs);
    let mut eps = Vec::new();
    form.residuals_into(x, mean.unwrap_or_else(T::zero), &mut eps);
    eps.split_off(orders.ar_span().min(eps.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(p: usize, q: usize) -> ArimaOrders {
        ArimaOrders::nonseasonal(p, 0, q)
    }

    #[test]
    fn zero_ar_coefficient_passes_series_through() {
        let x = [3.0, 1.0, 4.0, 1.0, 5.0];
        let coeffs = ArimaCoeffs {
            phi: vec![0.0],
            ..Default::default()
        };
        let res = css_residuals(&x, &orders(1, 0), &coeffs, None);
        assert_eq!(res, x[1..].to_vec());
    }

    #[test]
    fn ma1_hand_recursion() {
        // ε_t = x_t − θ ε_{t−1} with θ = 0.5 on x = [1, 0, 0].
        let coeffs = ArimaCoeffs {
            theta: vec![0.5],
            ..Default::default()
        };
        let res = css_residuals(&[1.0, 0.0, 0.0], &orders(0, 1), &coeffs, None);
        assert_eq!(res, vec![1.0, -0.5, 0.25]);
    }

    #[test]
    fn seasonal_ar_hand_recursion() {
        // (1 − 0.5B²) x̃_t: first two residuals are burn-in and excluded.
        let o = ArimaOrders::seasonal(0, 0, 0, 1, 0, 0, 2);
        let coeffs = ArimaCoeffs {
            cap_phi: vec![0.5],
            ..Default::default()
        };
        let res = css_residuals(&[1.0, 1.0, 1.0, 1.0], &o, &coeffs, None);
        assert_eq!(res, vec![0.5, 0.5]);
    }

    #[test]
    fn mean_term_is_subtracted() {
        let x = [2.0, 2.0, 2.0];
        let coeffs = ArimaCoeffs::default();
        let res = css_residuals(&x, &orders(0, 0), &coeffs, Some(2.0));
        assert_eq!(res, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn multiplicative_cross_terms_match_direct_expansion() {
        // (1 − φB)(1 − ΦB^m) expands with a +φΦ B^{1+m} cross term.
        let o = ArimaOrders::seasonal(1, 0, 0, 1, 0, 0, 3);
        let coeffs = ArimaCoeffs {
            phi: vec![0.4],
            cap_phi: vec![0.6],
            ..Default::default()
        };
        let x: Vec<f64> = (1..=10).map(|i| (i as f64).sin()).collect();
        let res = css_residuals(&x, &o, &coeffs, None);
        assert_eq!(res.len(), x.len() - 4);
        for (idx, r) in res.iter().enumerate() {
            let t = idx + 4;
            let direct = x[t] - 0.4 * x[t - 1] - 0.6 * x[t - 3] + 0.4 * 0.6 * x[t - 4];
            assert!((r - direct).abs() < 1e-14);
        }
    }
}
