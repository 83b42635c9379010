//! Automatic order selection: stationarity decisions for `d` and `D`,
//! then a greedy stepwise AICc search (or an exhaustive grid) over the
//! remaining orders.

use std::collections::HashMap;

use super::diff::difference;
use super::fit::fit_css_opts;
use super::optim::OptimOptions;
use super::stationarity::{select_d, select_seasonal_d};
use super::{ArimaFit, ArimaOrders, SelectionConfig};
use crate::error::{DarimaError, Result};
use crate::scalar::Scalar;
use crate::series::TimeSeries;

/// Candidate in the order search, with or without a constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Candidate {
    p: usize,
    q: usize,
    cap_p: usize,
    cap_q: usize,
    constant: bool,
}

/// Selects and fits a seasonal ARIMA model.
///
/// The seasonal differencing order comes from the seasonal-strength
/// measure, the regular one from repeated KPSS tests on the seasonally
/// differenced values. Orders are then chosen by greedy stepwise AICc
/// search from the four standard starting models (moves of ±1 in one of
/// p, q, P, Q, or toggling the constant), or by an exhaustive grid when
/// `stepwise` is off. Candidates whose roots fall inside the tolerance
/// band are skipped. If every candidate fails, a mean-only model with the
/// selected differencing is returned.
pub fn auto_arima<T: Scalar>(
    series: &TimeSeries<T>,
    config: &SelectionConfig,
) -> Result<ArimaFit<T>> {
    config.validate()?;
    let m = series.period();
    let min_len = 3 * m + 10;
    if series.len() < min_len {
        return Err(DarimaError::SeriesTooShort {
            needed: min_len,
            got: series.len(),
        });
    }

    let seasonal = m >= 2;
    let cap_d = if seasonal {
        select_seasonal_d(series.values(), m)
    } else {
        0
    };
    let deseasoned = if cap_d > 0 {
        difference(series.values(), 0, cap_d, m)?
    } else {
        series.values().to_vec()
    };
    let d = select_d(&deseasoned, 2);

    let mut search = Search {
        series,
        config,
        d,
        cap_d,
        m,
        seasonal,
        constant_allowed: match d + cap_d {
            0 => config.allow_mean,
            1 => config.allow_drift,
            _ => false,
        },
        cache: HashMap::new(),
        search_opts: if config.approx_ic {
            OptimOptions {
                max_iter: 100,
                rel_tol: 1e-6,
                ..Default::default()
            }
        } else {
            OptimOptions::default()
        },
    };

    let best = if config.stepwise {
        search.stepwise()
    } else {
        search.grid()
    };

    let best = match best {
        Some(cand) => cand,
        None => {
            // Every candidate failed: fall back to a mean-only model with
            // the selected differencing.
            let orders = ArimaOrders::seasonal(0, d, 0, 0, 0, 0, m);
            return fit_css_opts(series, &orders, config, &OptimOptions::default());
        }
    };

    if config.approx_ic {
        // The search ran on cheap fits; refit the winner exactly.
        let orders = search.orders_of(&best);
        let refit_config = SelectionConfig {
            allow_mean: best.constant && d + cap_d == 0,
            allow_drift: best.constant && d + cap_d == 1,
            ..config.clone()
        };
        return fit_css_opts(series, &orders, &refit_config, &OptimOptions::default());
    }
    // The cache owns the winning fit.
    Ok(search.cache.remove(&best).unwrap().unwrap())
}

struct Search<'a, T> {
    series: &'a TimeSeries<T>,
    config: &'a SelectionConfig,
    d: usize,
    cap_d: usize,
    m: usize,
    seasonal: bool,
    constant_allowed: bool,
    cache: HashMap<Candidate, Option<ArimaFit<T>>>,
    search_opts: OptimOptions,
}

impl<T: Scalar> Search<'_, T> {
    fn orders_of(&self, c: &Candidate) -> ArimaOrders {
        ArimaOrders::seasonal(c.p, self.d, c.q, c.cap_p, self.cap_d, c.cap_q, self.m)
    }

    fn valid(&self, c: &Candidate) -> bool {
        c.p <= self.config.max_p
            && c.q <= self.config.max_q
            && c.cap_p <= self.config.max_cap_p
            && c.cap_q <= self.config.max_cap_q
            && c.p + c.q + c.cap_p + c.cap_q <= self.config.max_order
            && (self.seasonal || (c.cap_p == 0 && c.cap_q == 0))
            && (!c.constant || self.constant_allowed)
    }

    /// AICc of a candidate, fitting and caching on first use; `None` when
    /// the fit fails or is rejected by the root check.
    fn aicc(&mut self, c: Candidate) -> Option<T> {
        if !self.valid(&c) {
            return None;
        }
        if !self.cache.contains_key(&c) {
            let orders = self.orders_of(&c);
            let fit_config = SelectionConfig {
                allow_mean: c.constant && self.d + self.cap_d == 0,
                allow_drift: c.constant && self.d + self.cap_d == 1,
                ..self.config.clone()
            };
            let fit = fit_css_opts(self.series, &orders, &fit_config, &self.search_opts).ok();
            self.cache.insert(c, fit);
        }
        self.cache.get(&c).unwrap().as_ref().map(|f| f.aicc)
    }

    fn stepwise(&mut self) -> Option<Candidate> {
        let seasonal_start = |p, q, cp, cq| Candidate {
            p: p.min(self.config.max_p),
            q: q.min(self.config.max_q),
            cap_p: if self.seasonal {
                cp.min(self.config.max_cap_p)
            } else {
                0
            },
            cap_q: if self.seasonal {
                cq.min(self.config.max_cap_q)
            } else {
                0
            },
            constant: self.constant_allowed,
        };
        let clamp_order = |mut c: Candidate| {
            while c.p + c.q + c.cap_p + c.cap_q > self.config.max_order {
                if c.p >= c.q && c.p > 0 {
                    c.p -= 1;
                } else if c.q > 0 {
                    c.q -= 1;
                } else if c.cap_p >= c.cap_q && c.cap_p > 0 {
                    c.cap_p -= 1;
                } else if c.cap_q > 0 {
                    c.cap_q -= 1;
                } else {
                    break;
                }
            }
            c
        };
        let starts = [
            clamp_order(seasonal_start(2, 2, 1, 1)),
            seasonal_start(0, 0, 0, 0),
            seasonal_start(1, 0, 1, 0),
            seasonal_start(0, 1, 0, 1),
        ];

        let mut best: Option<(Candidate, T)> = None;
        for c in starts {
            if let Some(ic) = self.aicc(c) {
                if best.as_ref().is_none_or(|(_, b)| ic < *b) {
                    best = Some((c, ic));
                }
            }
        }
        let (mut best_c, mut best_ic) = best?;

        loop {
            let mut improved = false;
            for neighbor in self.neighbors(&best_c) {
                if let Some(ic) = self.aicc(neighbor) {
                    if ic < best_ic {
                        best_c = neighbor;
                        best_ic = ic;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        Some(best_c)
    }

    fn neighbors(&self, c: &Candidate) -> Vec<Candidate> {
        let mut out = Vec::with_capacity(9);
        let deltas: [(i64, i64, i64, i64); 8] = [
            (1, 0, 0, 0),
            (-1, 0, 0, 0),
            (0, 1, 0, 0),
            (0, -1, 0, 0),
            (0, 0, 1, 0),
            (0, 0, -1, 0),
            (0, 0, 0, 1),
            (0, 0, 0, -1),
        ];
        let step = |v: usize, dv: i64| -> Option<usize> {
            let nv = v as i64 + dv;
            (nv >= 0).then_some(nv as usize)
        };
        for (dp, dq, dcp, dcq) in deltas {
            if let (Some(p), Some(q), Some(cap_p), Some(cap_q)) = (
                step(c.p, dp),
                step(c.q, dq),
                step(c.cap_p, dcp),
                step(c.cap_q, dcq),
            ) {
                out.push(Candidate {
                    p,
                    q,
                    cap_p,
                    cap_q,
                    constant: c.constant,
                });
            }
        }
        if self.constant_allowed {
            out.push(Candidate {
                constant: !c.constant,
                ..*c
            });
        }
        out
    }

    fn grid(&mut self) -> Option<Candidate> {
        let mut best: Option<(Candidate, T)> = None;
        let constants: &[bool] = if self.constant_allowed {
            &[true, false]
        } else {
            &[false]
        };
        let (max_cp, max_cq) = if self.seasonal {
            (self.config.max_cap_p, self.config.max_cap_q)
        } else {
            (0, 0)
        };
        for p in 0..=self.config.max_p {
            for q in 0..=self.config.max_q {
                for cap_p in 0..=max_cp {
                    for cap_q in 0..=max_cq {
                        for &constant in constants {
                            let c = Candidate {
                                p,
                                q,
                                cap_p,
                                cap_q,
                                constant,
                            };
                            if let Some(ic) = self.aicc(c) {
                                if best.as_ref().is_none_or(|(_, b)| ic < *b) {
                                    best = Some((c, ic));
                                }
                            }
                        }
                    }
                }
            }
        }
        best.map(|(c, _)| c)
    }
}
