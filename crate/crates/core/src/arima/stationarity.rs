//! Differencing-order decisions: a level-stationarity KPSS test for the
//! regular difference and a seasonal-strength measure for the seasonal one.

use super::{KPSS_CRITICAL_5PCT, SEASONAL_STRENGTH_THRESHOLD};
use crate::error::{DarimaError, Result};
use crate::scalar::{cast, Scalar};

/// Level-stationarity KPSS statistic with a Bartlett-window long-run
/// variance at lag truncation `floor(3·sqrt(n)/13)`.
///
/// A constant sequence has no variation around its level and scores 0.
pub fn kpss_stat<T: Scalar>(x: &[T]) -> Result<T> {
    let n = x.len();
    if n < 12 {
        return Err(DarimaError::SeriesTooShort { needed: 12, got: n });
    }
    let nf = cast::<T>(n as f64);
    let mean = x.iter().copied().sum::<T>() / nf;
    let resid: Vec<T> = x.iter().map(|v| *v - mean).collect();

    let gamma0 = resid.iter().map(|e| *e * *e).sum::<T>() / nf;
    if !(gamma0 > T::zero()) {
        return Ok(T::zero());
    }

    // Numerator: scaled partial sums of the residuals.
    let mut cum = T::zero();
    let mut eta = T::zero();
    for e in &resid {
        cum = cum + *e;
        eta = eta + cum * cum;
    }
    eta = eta / (nf * nf);

    // Bartlett long-run variance.
    let lag = (3.0 * (n as f64).sqrt() / 13.0).floor() as usize;
    let mut lrv = gamma0;
    for j in 1..=lag {
        let mut gj = T::zero();
        for t in j..n {
            gj = gj + resid[t] * resid[t - j];
        }
        gj = gj / nf;
        let w = cast::<T>(1.0 - j as f64 / (lag as f64 + 1.0));
        lrv = lrv + cast::<T>(2.0) * w * gj;
    }
    if !(lrv > T::zero()) {
        return Ok(T::zero());
    }
    Ok(eta / lrv)
}

/// Number of regular differences needed for level stationarity: difference
/// while the KPSS statistic exceeds the 5% critical value, up to `max_d`.
pub fn select_d<T: Scalar>(x: &[T], max_d: usize) -> usize {
    let crit = cast::<T>(KPSS_CRITICAL_5PCT);
    let mut current = x.to_vec();
    let mut d = 0;
    while d < max_d {
        match kpss_stat(&current) {
            Ok(stat) if stat > crit => {
                current = current
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .collect();
                d += 1;
            }
            _ => break,
        }
    }
    d
}

/// Seasonal strength in `[0, 1]`: `max(0, 1 − Var(remainder)/Var(detrended))`
/// from a moving-average trend and per-phase seasonal means.
pub fn seasonal_strength<T: Scalar>(x: &[T], m: usize) -> T {
    if m < 2 || x.len() < 2 * m {
        return T::zero();
    }
    let trend = centered_ma(x, m);
    let half = m / 2;
    // Detrended values with their phase, only where the trend is defined.
    let mut detrended = Vec::with_capacity(trend.len());
    let mut phases = Vec::with_capacity(trend.len());
    for (i, tr) in trend.iter().enumerate() {
        let t = i + half;
        detrended.push(x[t] - *tr);
        phases.push(t % m);
    }

    let mut phase_sum = vec![T::zero(); m];
    let mut phase_count = vec![0usize; m];
    for (v, ph) in detrended.iter().zip(&phases) {
        phase_sum[*ph] = phase_sum[*ph] + *v;
        phase_count[*ph] += 1;
    }
    let seasonal: Vec<T> = phase_sum
        .iter()
        .zip(&phase_count)
        .map(|(s, c)| {
            if *c > 0 {
                *s / cast::<T>(*c as f64)
            } else {
                T::zero()
            }
        })
        .collect();

    let remainder: Vec<T> = detrended
        .iter()
        .zip(&phases)
        .map(|(v, ph)| *v - seasonal[*ph])
        .collect();

    let var_detrended = variance(&detrended);
    if !(var_detrended > T::zero()) {
        return T::zero();
    }
    let strength = T::one() - variance(&remainder) / var_detrended;
    strength.max(T::zero()).min(T::one())
}

/// Seasonal differencing order: 1 when the seasonal strength exceeds the
/// threshold, otherwise 0.
pub fn select_seasonal_d<T: Scalar>(x: &[T], m: usize) -> usize {
    usize::from(seasonal_strength(x, m) > cast::<T>(SEASONAL_STRENGTH_THRESHOLD))
}

/// Centered moving average of window `m`; for even `m` the usual 2×m
/// average with half weights at the ends. Defined for `t` in
/// `m/2 .. n − m/2` (odd `m`: `(m−1)/2`).
fn centered_ma<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let n = x.len();
    let mf = cast::<T>(m as f64);
    let mut out = Vec::new();
    if m % 2 == 1 {
        let half = m / 2;
        for t in half..n - half {
            let mut acc = T::zero();
            for v in &x[t - half..=t + half] {
                acc = acc + *v;
            }
            out.push(acc / mf);
        }
    } else {
        let half = m / 2;
        for t in half..n - half {
            let mut acc = (x[t - half] + x[t + half]) / cast::<T>(2.0);
            for v in &x[t - half + 1..t + half] {
                acc = acc + *v;
            }
            out.push(acc / mf);
        }
    }
    out
}

fn variance<T: Scalar>(x: &[T]) -> T {
    if x.is_empty() {
        return T::zero();
    }
    let n = cast::<T>(x.len() as f64);
    let mean = x.iter().copied().sum::<T>() / n;
    x.iter().map(|v| (*v - mean) * (*v - mean)).sum::<T>() / n
}
