//! Backshift polynomial algebra.
//!
//! A [`Polynomial`] stores the coefficients `c₀..c_deg` of `Σ cᵢ Bⁱ` in the
//! backward-shift operator `B`. Characteristic polynomials follow the usual
//! sign conventions: AR factors are `1 − Σ φᵢ Bⁱ`, MA factors `1 + Σ θᵢ Bⁱ`,
//! so the stored coefficients already carry their signs.

use std::ops::Mul;

use crate::scalar::{cast, Scalar};

/// Dense polynomial in the backshift operator, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from `c₀..c_deg`, trimming trailing zeros.
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        if p.coeffs.is_empty() {
            p.coeffs.push(T::zero());
        }
        p
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self {
            coeffs: vec![T::one()],
        }
    }

    /// AR characteristic polynomial `1 − Σ φᵢ Bⁱ`.
    pub fn ar_char(phi: &[T]) -> Self {
        let mut coeffs = Vec::with_capacity(phi.len() + 1);
        coeffs.push(T::one());
        coeffs.extend(phi.iter().map(|&c| -c));
        Self::new(coeffs)
    }

    /// MA characteristic polynomial `1 + Σ θᵢ Bⁱ`.
    pub fn ma_char(theta: &[T]) -> Self {
        let mut coeffs = Vec::with_capacity(theta.len() + 1);
        coeffs.push(T::one());
        coeffs.extend_from_slice(theta);
        Self::new(coeffs)
    }

    /// Seasonal AR characteristic polynomial `1 − Σ Φᵢ B^{im}`.
    pub fn seasonal_ar_char(phi: &[T], m: usize) -> Self {
        Self::seasonal(phi, m, true)
    }

    /// Seasonal MA characteristic polynomial `1 + Σ Θᵢ B^{im}`.
    pub fn seasonal_ma_char(theta: &[T], m: usize) -> Self {
        Self::seasonal(theta, m, false)
    }

    fn seasonal(coeffs: &[T], m: usize, negate: bool) -> Self {
        let m = m.max(1);
        let mut out = vec![T::zero(); coeffs.len() * m + 1];
        out[0] = T::one();
        for (i, &c) in coeffs.iter().enumerate() {
            out[(i + 1) * m] = if negate { -c } else { c };
        }
        Self::new(out)
    }

    /// Differencing factor `(1 − B^m)^order`; `m = 1` gives `(1 − B)^order`.
    pub fn differencing(m: usize, order: usize) -> Self {
        let m = m.max(1);
        let mut base = vec![T::zero(); m + 1];
        base[0] = T::one();
        base[m] = -T::one();
        let base = Self::new(base);
        let mut acc = Self::one();
        for _ in 0..order {
            acc = poly_mul(&acc, &base);
        }
        acc
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `Bⁱ`, zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).copied().unwrap_or_else(T::zero)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| *c == T::zero()) {
            self.coeffs.pop();
        }
    }
}

/// Convolves the coefficient sequences of two polynomials.
pub fn poly_mul<T: Scalar>(a: &Polynomial<T>, b: &Polynomial<T>) -> Polynomial<T> {
    let mut out = vec![T::zero(); a.degree() + b.degree() + 1];
    for (i, &ai) in a.coeffs().iter().enumerate() {
        if ai == T::zero() {
            continue;
        }
        for (j, &bj) in b.coeffs().iter().enumerate() {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    Polynomial::new(out)
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        poly_mul(self, rhs)
    }
}

/// Tests whether every root of the polynomial satisfies `|z| > 1 + tol`.
///
/// Uses the Schur–Cohn reduction: after rescaling `z → (1+tol)·w` and
/// reversing coefficients, the condition becomes Schur stability of the
/// reversed polynomial, decided by a pure-arithmetic recursion (no
/// eigenvalue solve). Non-finite coefficients fail the check.
pub fn check_roots<T: Scalar>(poly: &Polynomial<T>, tol: T) -> bool {
    if poly.coeffs().iter().any(|c| !c.is_finite()) {
        return false;
    }
    let r = T::one() + tol;

    // Coefficients of P((1+tol)·w), constant term first, exact zeros trimmed.
    let mut scaled: Vec<T> = Vec::with_capacity(poly.coeffs().len());
    let mut pow = T::one();
    for &c in poly.coeffs() {
        scaled.push(c * pow);
        pow = pow * r;
    }
    while scaled.len() > 1 && *scaled.last().unwrap() == T::zero() {
        scaled.pop();
    }
    if scaled.len() == 1 {
        // Constant polynomial: no roots at all.
        return scaled[0] != T::zero();
    }
    if scaled[0] == T::zero() {
        // P(0) = 0 means a root at the origin.
        return false;
    }

    // Reverse: all roots of the scaled polynomial lie outside the unit
    // circle iff the reversed polynomial is Schur stable.
    let mut f: Vec<T> = scaled.into_iter().rev().collect();

    while f.len() > 1 {
        let lead = *f.last().unwrap();
        let tail = f[0];
        if !(tail.abs() < lead.abs()) {
            return false;
        }
        // f ← (lead·f − tail·rev(f)) / w, degree drops by one.
        let n = f.len() - 1;
        let mut next = Vec::with_capacity(n);
        for j in 1..=n {
            next.push(lead * f[j] - tail * f[n - j]);
        }
        // Rescale to keep the recursion in floating-point range.
        let max = next.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        if !max.is_finite() {
            return false;
        }
        if max > T::zero() {
            for c in &mut next {
                *c = *c / max;
            }
        }
        f = next;
    }
    true
}

/// `Σ πᵢ` and `Σ i·πᵢ` over a weight sequence, as used by trend folding.
pub(crate) fn weight_sums<T: Scalar>(pi: &[T]) -> (T, T) {
    let mut sum = T::zero();
    let mut weighted = T::zero();
    for (i, &p) in pi.iter().enumerate() {
        sum = sum + p;
        weighted = weighted + cast::<T>((i + 1) as f64) * p;
    }
    (sum, weighted)
}
