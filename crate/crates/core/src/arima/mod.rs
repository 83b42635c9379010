//! Seasonal ARIMA modeling: conditional-sum-of-squares estimation, automatic
//! order selection, and sample-path simulation.

mod css;
mod diff;
mod fit;
mod optim;
mod select;
mod sim;
mod stationarity;

pub use css::css_residuals;
pub use diff::{difference, integrate, seasonal_integrate};
pub use fit::{fit_css, fit_css_with_init};
pub use select::auto_arima;
pub use sim::{draw_random_dgp, simulate_arima};
pub use stationarity::{kpss_stat, seasonal_strength, select_d, select_seasonal_d};

use serde::{Deserialize, Serialize};

use crate::error::{DarimaError, Result};
use crate::poly::{check_roots, Polynomial};
use crate::scalar::{cast, Scalar};

/// Default tolerance band around the unit circle for root checks.
pub const DEFAULT_ROOT_TOL: f64 = 1e-3;

/// KPSS 5% critical value used when choosing the differencing order.
pub const KPSS_CRITICAL_5PCT: f64 = 0.463;

/// Seasonal-strength threshold above which one seasonal difference is taken.
pub const SEASONAL_STRENGTH_THRESHOLD: f64 = 0.64;

/// Orders `(p, d, q)(P, D, Q)_m` of a seasonal ARIMA model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArimaOrders {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub cap_p: usize,
    pub cap_d: usize,
    pub cap_q: usize,
    pub m: usize,
}

impl ArimaOrders {
    pub fn nonseasonal(p: usize, d: usize, q: usize) -> Self {
        Self::seasonal(p, d, q, 0, 0, 0, 1)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn seasonal(
        p: usize,
        d: usize,
        q: usize,
        cap_p: usize,
        cap_d: usize,
        cap_q: usize,
        m: usize,
    ) -> Self {
        Self {
            p,
            d,
            q,
            cap_p,
            cap_d,
            cap_q,
            m: m.max(1),
        }
    }

    /// Number of ARMA coefficients (excluding any mean or drift term).
    pub fn num_coeffs(&self) -> usize {
        self.p + self.q + self.cap_p + self.cap_q
    }

    /// Observations consumed by differencing: `d + D·m`.
    pub fn diff_span(&self) -> usize {
        self.d + self.cap_d * self.m
    }

    /// Longest AR lag after seasonal expansion: `p + P·m`.
    pub fn ar_span(&self) -> usize {
        self.p + self.cap_p * self.m
    }

    /// Longest MA lag after seasonal expansion: `q + Q·m`.
    pub fn ma_span(&self) -> usize {
        self.q + self.cap_q * self.m
    }

    pub fn total_diff(&self) -> usize {
        self.d + self.cap_d
    }
}

impl std::fmt::Display for ArimaOrders {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{})({},{},{})[{}]",
            self.p, self.d, self.q, self.cap_p, self.cap_d, self.cap_q, self.m
        )
    }
}

/// ARMA coefficient sets for the four polynomial factors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArimaCoeffs<T = f64> {
    pub phi: Vec<T>,
    pub theta: Vec<T>,
    pub cap_phi: Vec<T>,
    pub cap_theta: Vec<T>,
}

impl<T: Scalar> ArimaCoeffs<T> {
    pub fn zeros(orders: &ArimaOrders) -> Self {
        Self {
            phi: vec![T::zero(); orders.p],
            theta: vec![T::zero(); orders.q],
            cap_phi: vec![T::zero(); orders.cap_p],
            cap_theta: vec![T::zero(); orders.cap_q],
        }
    }

    /// True when all four characteristic polynomials have every root
    /// strictly outside `|z| = 1 + tol`.
    pub fn roots_outside(&self, m: usize, tol: T) -> bool {
        check_roots(&Polynomial::ar_char(&self.phi), tol)
            && check_roots(&Polynomial::seasonal_ar_char(&self.cap_phi, m), tol)
            && check_roots(&Polynomial::ma_char(&self.theta), tol)
            && check_roots(&Polynomial::seasonal_ma_char(&self.cap_theta, m), tol)
    }
}

/// A fitted seasonal ARIMA model.
#[derive(Debug, Clone)]
pub struct ArimaFit<T = f64> {
    pub orders: ArimaOrders,
    pub coeffs: ArimaCoeffs<T>,
    /// Intercept on the original scale; present only when `d + D = 0`.
    pub mu0: Option<T>,
    /// Linear trend slope per time step; present only when `d + D = 1`.
    pub mu1: Option<T>,
    /// Residual variance `css / n_obs`.
    pub sigma2: T,
    /// Conditional sum of squares at the optimum.
    pub css: T,
    pub aicc: T,
    /// Residual count entering the sum of squares.
    pub n_obs: usize,
    /// Observations the model was fitted on.
    pub n: usize,
    /// Global index of the first observation.
    pub origin: i64,
}

impl<T: Scalar> ArimaFit<T> {
    /// Mean of the differenced series implied by the intercept or drift.
    pub(crate) fn diff_scale_mean(&self) -> T {
        match (self.mu0, self.mu1) {
            (Some(mu0), _) => mu0,
            (_, Some(mu1)) => {
                if self.orders.d == 1 {
                    mu1
                } else {
                    mu1 * cast::<T>(self.orders.m as f64)
                }
            }
            _ => T::zero(),
        }
    }
}

/// Settings for automatic order selection.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SelectionConfig {
    pub max_p: usize,
    pub max_q: usize,
    pub max_cap_p: usize,
    pub max_cap_q: usize,
    /// Cap on `p + q + P + Q`.
    pub max_order: usize,
    /// Greedy stepwise search when true, exhaustive grid otherwise.
    pub stepwise: bool,
    /// Search with a cheap low-iteration fit, then refit the winner exactly.
    pub approx_ic: bool,
    pub allow_drift: bool,
    pub allow_mean: bool,
    /// Roots of every characteristic polynomial must stay outside
    /// `|z| = 1 + root_tol`.
    pub root_tol: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            max_p: 5,
            max_q: 5,
            max_cap_p: 2,
            max_cap_q: 2,
            max_order: 5,
            stepwise: true,
            approx_ic: false,
            allow_drift: true,
            allow_mean: true,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.root_tol <= 0.0 || !self.root_tol.is_finite() {
            return Err(DarimaError::FitFailed(format!(
                "root_tol must be a small positive number, got {}",
                self.root_tol
            )));
        }
        Ok(())
    }
}
