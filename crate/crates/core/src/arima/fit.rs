//! CSS estimation of a seasonal ARIMA model with fixed orders.

use super::css::LagForm;
use super::diff::diff_for_orders;
use super::optim::{minimize, OptimOptions, OptimOutcome};
use super::{ArimaCoeffs, ArimaFit, ArimaOrders, SelectionConfig};
use crate::error::{DarimaError, Result};
use crate::scalar::{cast, Scalar};
use crate::series::TimeSeries;

/// Fits the model by minimizing the conditional sum of squares with a
/// quasi-Newton search started from Yule–Walker AR estimates.
pub fn fit_css<T: Scalar>(
    series: &TimeSeries<T>,
    orders: &ArimaOrders,
    config: &SelectionConfig,
) -> Result<ArimaFit<T>> {
    fit_css_impl(series, orders, config, None, &OptimOptions::default())
}

/// Same as [`fit_css`] but warm-started from explicit parameter values laid
/// out as `[phi, theta, cap_phi, cap_theta, mean?]` on the differenced scale.
pub fn fit_css_with_init<T: Scalar>(
    series: &TimeSeries<T>,
    orders: &ArimaOrders,
    config: &SelectionConfig,
    init: &[T],
) -> Result<ArimaFit<T>> {
    fit_css_impl(series, orders, config, Some(init), &OptimOptions::default())
}

pub(crate) fn fit_css_opts<T: Scalar>(
    series: &TimeSeries<T>,
    orders: &ArimaOrders,
    config: &SelectionConfig,
    opts: &OptimOptions,
) -> Result<ArimaFit<T>> {
    fit_css_impl(series, orders, config, None, opts)
}

fn fit_css_impl<T: Scalar>(
    series: &TimeSeries<T>,
    orders: &ArimaOrders,
    config: &SelectionConfig,
    init: Option<&[T]>,
    opts: &OptimOptions,
) -> Result<ArimaFit<T>> {
    config.validate()?;
    let with_constant = constant_allowed(orders, config);
    let n_coeffs = orders.num_coeffs();
    let n_params = n_coeffs + usize::from(with_constant);

    let needed = orders.diff_span() + orders.ar_span() + 2;
    if series.len() < needed {
        return Err(DarimaError::SeriesTooShort {
            needed,
            got: series.len(),
        });
    }
    let w = diff_for_orders(series.values(), orders)?;
    if w.len() <= n_params + 1 || w.len() <= orders.ar_span() + 1 {
        return Err(DarimaError::SeriesTooShort {
            needed: orders.diff_span() + n_params + 2,
            got: series.len(),
        });
    }

    let x0 = match init {
        Some(given) => {
            if given.len() != n_params {
                return Err(DarimaError::FitFailed(format!(
                    "warm start has {} parameters, model needs {}",
                    given.len(),
                    n_params
                )));
            }
            given.to_vec()
        }
        None => initial_params(series, orders, &w, with_constant),
    };

    let skip = orders.ar_span();
    let objective = CssObjective {
        w: &w,
        orders,
        with_constant,
        skip,
        scratch: std::cell::RefCell::new(Vec::new()),
    };
    let OptimOutcome {
        x: solution,
        value,
        converged,
    } = minimize(|p| objective.eval(p), &x0, opts);
    if !value.is_finite() {
        return Err(DarimaError::FitFailed(
            "conditional sum of squares did not stay finite".into(),
        ));
    }
    if !converged {
        return Err(DarimaError::FitFailed(
            "optimizer did not converge".into(),
        ));
    }

    let (coeffs, mean) = split_params(&solution, orders, with_constant);
    let tol = cast::<T>(config.root_tol);
    for (ok, part) in [
        (crate::poly::check_roots(&crate::poly::Polynomial::ar_char(&coeffs.phi), tol), "AR"),
        (
            crate::poly::check_roots(
                &crate::poly::Polynomial::seasonal_ar_char(&coeffs.cap_phi, orders.m),
                tol,
            ),
            "seasonal AR",
        ),
        (crate::poly::check_roots(&crate::poly::Polynomial::ma_char(&coeffs.theta), tol), "MA"),
        (
            crate::poly::check_roots(
                &crate::poly::Polynomial::seasonal_ma_char(&coeffs.cap_theta, orders.m),
                tol,
            ),
            "seasonal MA",
        ),
    ] {
        if !ok {
            return Err(DarimaError::RootsInsideUnitCircle { part });
        }
    }

    let form = LagForm::new(orders, &coeffs);
    let mut eps = Vec::new();
    let css = form.css(&w, mean.unwrap_or_else(T::zero), skip, &mut eps);
    let n_obs = w.len() - skip;
    // Positive-variance floor so a perfectly fitted (e.g. constant) series
    // still yields a usable combination weight.
    let scale: T = w.iter().map(|v| *v * *v).sum::<T>() / cast::<T>(w.len() as f64);
    let floor = T::epsilon() * (T::one() + scale);
    let sigma2 = (css / cast::<T>(n_obs as f64)).max(floor);
    let k = n_params + 1;
    let aicc = aicc_from_css(css.max(floor * cast::<T>(n_obs as f64)), n_obs, k);

    let (mu0, mu1) = translate_mean(mean, orders);
    Ok(ArimaFit {
        orders: *orders,
        coeffs,
        mu0,
        mu1,
        sigma2,
        css,
        aicc,
        n_obs,
        n: series.len(),
        origin: series.origin(),
    })
}

struct CssObjective<'a, T> {
    w: &'a [T],
    orders: &'a ArimaOrders,
    with_constant: bool,
    skip: usize,
    scratch: std::cell::RefCell<Vec<T>>,
}

impl<T: Scalar> CssObjective<'_, T> {
    fn eval(&self, params: &[T]) -> T {
        if params.iter().any(|p| !p.is_finite()) {
            return T::infinity();
        }
        let (coeffs, mean) = split_params(params, self.orders, self.with_constant);
        let form = LagForm::new(self.orders, &coeffs);
        let mut eps = self.scratch.borrow_mut();
        form.css(self.w, mean.unwrap_or_else(T::zero), self.skip, &mut eps)
    }
}

fn constant_allowed(orders: &ArimaOrders, config: &SelectionConfig) -> bool {
    match orders.total_diff() {
        0 => config.allow_mean,
        1 => config.allow_drift,
        _ => false,
    }
}

fn split_params<T: Scalar>(
    params: &[T],
    orders: &ArimaOrders,
    with_constant: bool,
) -> (ArimaCoeffs<T>, Option<T>) {
    let (p, q, cp, cq) = (orders.p, orders.q, orders.cap_p, orders.cap_q);
    let coeffs = ArimaCoeffs {
        phi: params[..p].to_vec(),
        theta: params[p..p + q].to_vec(),
        cap_phi: params[p + q..p + q + cp].to_vec(),
        cap_theta: params[p + q + cp..p + q + cp + cq].to_vec(),
    };
    let mean = with_constant.then(|| params[p + q + cp + cq]);
    (coeffs, mean)
}

/// Maps the constant fitted on the differenced scale back to an intercept
/// (`d + D = 0`) or a per-step trend slope (`d + D = 1`).
fn translate_mean<T: Scalar>(mean: Option<T>, orders: &ArimaOrders) -> (Option<T>, Option<T>) {
    match (mean, orders.total_diff()) {
        (Some(c), 0) => (Some(c), None),
        (Some(c), 1) => {
            let slope = if orders.d == 1 {
                c
            } else {
                c / cast::<T>(orders.m as f64)
            };
            (None, Some(slope))
        }
        _ => (None, None),
    }
}

fn initial_params<T: Scalar>(
    series: &TimeSeries<T>,
    orders: &ArimaOrders,
    w: &[T],
    with_constant: bool,
) -> Vec<T> {
    let n = cast::<T>(w.len() as f64);
    let mean = w.iter().copied().sum::<T>() / n;
    let centered: Vec<T> = w.iter().map(|v| *v - mean).collect();
    let mut params = Vec::with_capacity(orders.num_coeffs() + 1);
    params.extend(yule_walker(&centered, orders.p));
    params.extend(std::iter::repeat(T::zero()).take(orders.q));
    params.extend(std::iter::repeat(T::zero()).take(orders.cap_p));
    params.extend(std::iter::repeat(T::zero()).take(orders.cap_q));
    if with_constant {
        let c = match orders.total_diff() {
            0 => mean,
            // One unit root: start the constant from the least-squares
            // trend slope of the raw series, on the differenced scale.
            _ => {
                let slope = ls_slope(series.values());
                if orders.d == 1 {
                    slope
                } else {
                    slope * cast::<T>(orders.m as f64)
                }
            }
        };
        params.push(c);
    }
    params
}

/// Slope of the least-squares line through `(1, y₁), …, (n, yₙ)`.
fn ls_slope<T: Scalar>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let nf = cast::<T>(n as f64);
    let t_mean = (nf + T::one()) / cast::<T>(2.0);
    let y_mean = values.iter().copied().sum::<T>() / nf;
    let mut num = T::zero();
    let mut den = T::zero();
    for (i, &y) in values.iter().enumerate() {
        let dt = cast::<T>((i + 1) as f64) - t_mean;
        num = num + dt * (y - y_mean);
        den = den + dt * dt;
    }
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

/// Levinson–Durbin solve of the Yule–Walker equations for AR(p) starting
/// values; falls back to zeros for degenerate autocovariances.
fn yule_walker<T: Scalar>(x: &[T], p: usize) -> Vec<T> {
    if p == 0 {
        return Vec::new();
    }
    let n = x.len();
    if n <= p + 1 {
        return vec![T::zero(); p];
    }
    let nf = cast::<T>(n as f64);
    let mut gamma = vec![T::zero(); p + 1];
    for (lag, g) in gamma.iter_mut().enumerate() {
        let mut acc = T::zero();
        for t in lag..n {
            acc = acc + x[t] * x[t - lag];
        }
        *g = acc / nf;
    }
    if !(gamma[0] > T::zero()) {
        return vec![T::zero(); p];
    }

    let mut phi = vec![T::zero(); p];
    let mut prev = vec![T::zero(); p];
    let mut err = gamma[0];
    for k in 0..p {
        let mut acc = gamma[k + 1];
        for j in 0..k {
            acc = acc - prev[j] * gamma[k - j];
        }
        let reflect = acc / err;
        phi[..k].copy_from_slice(&prev[..k]);
        phi[k] = reflect;
        for j in 0..k {
            phi[j] = prev[j] - reflect * prev[k - 1 - j];
        }
        err = err * (T::one() - reflect * reflect);
        if !(err > T::zero()) {
            // Singular system; damp the partial solution and stop.
            for v in phi.iter_mut() {
                *v = *v * cast::<T>(0.5);
            }
            break;
        }
        prev[..=k].copy_from_slice(&phi[..=k]);
    }
    // Keep the warm start strictly inside the stationary region.
    if !crate::poly::check_roots(
        &crate::poly::Polynomial::ar_char(&phi),
        cast::<T>(super::DEFAULT_ROOT_TOL),
    ) {
        for v in phi.iter_mut() {
            *v = *v * cast::<T>(0.5);
        }
    }
    phi
}

/// `AICc = n·ln(css/n) + 2k·n/(n − k − 1)` from the Gaussian CSS
/// approximation, `k` counting all coefficients plus the variance.
pub(crate) fn aicc_from_css<T: Scalar>(css: T, n_obs: usize, k: usize) -> T {
    if n_obs <= k + 1 {
        return T::infinity();
    }
    let n = cast::<T>(n_obs as f64);
    let kf = cast::<T>(k as f64);
    let variance = (css / n).max(T::min_positive_value());
    n * variance.ln() + cast::<T>(2.0) * kf * n / (n - kf - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arima::sim::simulate_arima;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn white_noise(n: usize, seed: u64) -> TimeSeries {
        let orders = ArimaOrders::nonseasonal(0, 0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        simulate_arima(&orders, &ArimaCoeffs::default(), n, 50, 1.0, &mut rng).unwrap()
    }

    #[test]
    fn white_noise_mean_and_variance() {
        let series = white_noise(2000, 11);
        let fit = fit_css(
            &series,
            &ArimaOrders::nonseasonal(0, 0, 0),
            &SelectionConfig::default(),
        )
        .unwrap();
        let mu0 = fit.mu0.unwrap();
        assert!(mu0.abs() < 0.1, "mean {mu0}");
        assert!((fit.sigma2 - 1.0).abs() < 0.15, "sigma2 {}", fit.sigma2);
        assert!(fit.mu1.is_none());
    }

    #[test]
    fn ar1_coefficient_recovery() {
        let orders = ArimaOrders::nonseasonal(1, 0, 0);
        let coeffs = ArimaCoeffs {
            phi: vec![0.6],
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let series = simulate_arima(&orders, &coeffs, 5000, 100, 1.0, &mut rng).unwrap();
        let fit = fit_css(&series, &orders, &SelectionConfig::default()).unwrap();
        assert!(
            (fit.coeffs.phi[0] - 0.6).abs() < 0.05,
            "phi {}",
            fit.coeffs.phi[0]
        );
    }

    #[test]
    fn ma1_coefficient_recovery() {
        let orders = ArimaOrders::nonseasonal(0, 0, 1);
        let coeffs = ArimaCoeffs {
            theta: vec![0.5],
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let series = simulate_arima(&orders, &coeffs, 5000, 100, 1.0, &mut rng).unwrap();
        let fit = fit_css(&series, &orders, &SelectionConfig::default()).unwrap();
        assert!(
            (fit.coeffs.theta[0] - 0.5).abs() < 0.07,
            "theta {}",
            fit.coeffs.theta[0]
        );
    }

    #[test]
    fn orders_exceeding_series_length_rejected() {
        let series = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0], 1).unwrap();
        let err = fit_css(
            &series,
            &ArimaOrders::nonseasonal(3, 1, 0),
            &SelectionConfig::default(),
        );
        assert!(matches!(err, Err(DarimaError::SeriesTooShort { .. })));
    }

    #[test]
    fn sigma2_is_css_over_n_obs() {
        let series = white_noise(500, 3);
        let orders = ArimaOrders::nonseasonal(1, 0, 0);
        let fit = fit_css(&series, &orders, &SelectionConfig::default()).unwrap();
        assert_eq!(fit.n_obs, 500 - 1);
        assert_eq!(fit.sigma2, fit.css / fit.n_obs as f64);
    }

    #[test]
    fn drift_estimated_on_differenced_scale() {
        // y_t = 0.5 t + noise: after one difference the mean is the slope.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise = simulate_arima(
            &ArimaOrders::nonseasonal(0, 0, 0),
            &ArimaCoeffs::default(),
            1500,
            10,
            0.3,
            &mut rng,
        )
        .unwrap();
        let values: Vec<f64> = noise
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| 0.5 * (i as f64 + 1.0) + v)
            .collect();
        let series = TimeSeries::new(values, 1).unwrap();
        let fit = fit_css(
            &series,
            &ArimaOrders::nonseasonal(0, 1, 0),
            &SelectionConfig::default(),
        )
        .unwrap();
        let mu1 = fit.mu1.unwrap();
        assert!((mu1 - 0.5).abs() < 0.05, "drift {mu1}");
        assert!(fit.mu0.is_none());
    }

    #[test]
    fn constant_series_gets_floored_variance() {
        let series = TimeSeries::new(vec![5.0; 200], 1).unwrap();
        let fit = fit_css(
            &series,
            &ArimaOrders::nonseasonal(0, 0, 0),
            &SelectionConfig::default(),
        )
        .unwrap();
        assert!(fit.sigma2 > 0.0);
        assert_eq!(fit.mu0, Some(5.0));
    }

    #[test]
    fn nested_css_never_increases_with_warm_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let orders = ArimaOrders::nonseasonal(2, 0, 0);
        let coeffs = ArimaCoeffs {
            phi: vec![0.4, 0.2],
            ..Default::default()
        };
        let series = simulate_arima(&orders, &coeffs, 800, 100, 1.0, &mut rng).unwrap();
        let config = SelectionConfig::default();

        for p in 1..4usize {
            let small = fit_css(&series, &ArimaOrders::nonseasonal(p, 0, 0), &config).unwrap();
            let mut init = small.coeffs.phi.clone();
            init.push(0.0); // new AR coefficient starts at zero
            init.push(small.diff_scale_mean());
            let big =
                fit_css_with_init(&series, &ArimaOrders::nonseasonal(p + 1, 0, 0), &config, &init)
                    .unwrap();
            assert!(
                big.css <= small.css + 1e-6 * small.css.abs().max(1.0),
                "css grew from {} to {} at p={}",
                small.css,
                big.css,
                p
            );
        }
    }

    #[test]
    fn aicc_penalizes_parameters() {
        let a = aicc_from_css(100.0f64, 200, 2);
        let b = aicc_from_css(100.0f64, 200, 4);
        assert!(b > a);
        assert_eq!(aicc_from_css(100.0f64, 4, 4), f64::INFINITY);
    }
}
