//! Distributed seasonal ARIMA forecasting for ultra-long time series.
//!
//! The engine splits a long series into contiguous subseries, fits an
//! automatically selected seasonal ARIMA model to each one, converts every
//! fitted model into a truncated AR linear representation, combines the local
//! estimators by weighted least squares, and forecasts from the combined
//! model with normal-theory prediction intervals.
//!
//! Pipeline stages map onto modules:
//!
//! * [`series`] — time-series containers, contiguous partitioning
//! * [`arima`] — seasonal ARIMA estimation, order selection, simulation
//! * [`poly`] / [`linrep`] — backshift algebra and AR/MA representations
//! * [`combine`] — weighted-least-squares and simple-average aggregation
//! * [`forecast`] — multi-step point forecasts and prediction intervals
//! * [`cluster`] — coordinator/worker execution, in-process or over TCP
//! * [`eval`] — MASE/MSIS/ACD metrics and the benchmark harness
//! * [`io`] — CSV ingestion and forecast output
//!
//! Numeric kernels are generic over [`Scalar`] (any `num-traits` float);
//! every public type defaults its scalar parameter to `f64`, which is the
//! precision the distributed pipeline, wire protocol, and file formats run
//! at.

pub mod arima;
pub mod cluster;
pub mod combine;
pub mod error;
pub mod eval;
pub mod forecast;
pub mod io;
pub mod linrep;
pub mod poly;
mod scalar;
pub mod series;

pub use error::{DarimaError, Result};
pub use scalar::Scalar;

pub use arima::{auto_arima, fit_css, ArimaFit, ArimaOrders, SelectionConfig};
pub use combine::{dlsa_combine, simple_average_combine, CombinedModel};
pub use forecast::{forecast_benchmark_arima, ForecastResult};
pub use linrep::LinearRep;
pub use series::{Partition, TimeSeries};
