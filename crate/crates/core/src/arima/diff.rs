//! Regular and seasonal differencing, and the zero-initial-condition
//! integrations that invert them during simulation.

use super::ArimaOrders;
use crate::error::{DarimaError, Result};
use crate::scalar::Scalar;

/// Applies `(1 − B)^d (1 − B^m)^D` to the sequence.
///
/// The output is `d + D·m` observations shorter than the input.
pub fn difference<T: Scalar>(values: &[T], d: usize, cap_d: usize, m: usize) -> Result<Vec<T>> {
    let m = m.max(1);
    let span = d + cap_d * m;
    if values.len() <= span {
        return Err(DarimaError::SeriesTooShort {
            needed: span + 1,
            got: values.len(),
        });
    }
    let mut out = values.to_vec();
    for _ in 0..d {
        out = lag_diff(&out, 1);
    }
    for _ in 0..cap_d {
        out = lag_diff(&out, m);
    }
    Ok(out)
}

pub(crate) fn diff_for_orders<T: Scalar>(values: &[T], orders: &ArimaOrders) -> Result<Vec<T>> {
    difference(values, orders.d, orders.cap_d, orders.m)
}

fn lag_diff<T: Scalar>(values: &[T], lag: usize) -> Vec<T> {
    values
        .iter()
        .skip(lag)
        .zip(values.iter())
        .map(|(cur, prev)| *cur - *prev)
        .collect()
}

/// Cumulative sum applied `d` times with zero initial conditions; inverts
/// `(1 − B)^d` up to those conditions and keeps the length unchanged.
pub fn integrate<T: Scalar>(values: &[T], d: usize) -> Vec<T> {
    let mut out = values.to_vec();
    for _ in 0..d {
        let mut acc = T::zero();
        for v in &mut out {
            acc = acc + *v;
            *v = acc;
        }
    }
    out
}

/// Seasonal cumulative sum applied `cap_d` times with zero initial
/// conditions; inverts `(1 − B^m)^cap_d` up to those conditions.
pub fn seasonal_integrate<T: Scalar>(values: &[T], m: usize, cap_d: usize) -> Vec<T> {
    let m = m.max(1);
    let mut out = values.to_vec();
    for _ in 0..cap_d {
        for t in m..out.len() {
            out[t] = out[t] + out[t - m];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{poly_mul, Polynomial};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn first_difference_of_ramp() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(difference(&x, 1, 0, 1).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn seasonal_difference_of_ramp() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(difference(&x, 0, 1, 2).unwrap(), vec![2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn mixed_difference_matches_polynomial_convolution() {
        // (1 − B)(1 − B²) applied to a sequence equals convolving the
        // sequence with the expanded polynomial 1 − B − B² + B³.
        let x = [1.0f64, 4.0, 9.0, 16.0, 25.0, 36.0];
        let got = difference(&x, 1, 1, 2).unwrap();

        let poly = poly_mul(
            &Polynomial::differencing(1, 1),
            &Polynomial::differencing(2, 1),
        );
        let c = poly.coeffs();
        let mut expected = Vec::new();
        for t in poly.degree()..x.len() {
            let mut v = 0.0;
            for (i, &ci) in c.iter().enumerate() {
                v += ci * x[t - i];
            }
            expected.push(v);
        }
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(expected.iter()) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn too_short_series_rejected() {
        let x = [1.0, 2.0];
        assert!(difference(&x, 1, 1, 2).is_err());
        assert!(difference(&x, 2, 0, 1).is_err());
    }

    #[test]
    fn integrate_inverts_difference() {
        let mut rng = StdRng::seed_from_u64(3);
        let x: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let integrated = integrate(&x, 1);
        let back = difference(&integrated, 1, 0, 1).unwrap();
        for (b, orig) in back.iter().zip(x.iter().skip(1)) {
            assert!((b - orig).abs() < 1e-12);
        }

        let s = seasonal_integrate(&x, 7, 1);
        let back = difference(&s, 0, 1, 7).unwrap();
        for (b, orig) in back.iter().zip(x.iter().skip(7)) {
            assert!((b - orig).abs() < 1e-12);
        }
    }
}
