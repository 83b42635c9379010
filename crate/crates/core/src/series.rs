//! Time-series containers and contiguous partitioning.
//!
//! A [`TimeSeries`] carries its seasonal period and the global index of its
//! first observation, so a subseries produced by [`TimeSeries::slice`] keeps
//! pointing at the same global clock as the full series. Trend terms in the
//! combined model refer to that clock, which is what makes per-subseries
//! estimates combinable.

use crate::error::{DarimaError, Result};
use crate::scalar::Scalar;

/// Equally spaced observations with a seasonal period and global origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T = f64> {
    values: Vec<T>,
    period_m: usize,
    origin: i64,
}

impl<T: Scalar> TimeSeries<T> {
    /// Builds a series starting at global index 1.
    pub fn new(values: Vec<T>, period_m: usize) -> Result<Self> {
        Self::with_origin(values, period_m, 1)
    }

    /// Builds a series whose first observation sits at `origin` on the
    /// global clock.
    pub fn with_origin(values: Vec<T>, period_m: usize, origin: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(DarimaError::InvalidSeries("no observations".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DarimaError::InvalidSeries(format!(
                "non-finite value at position {i}"
            )));
        }
        if period_m == 0 {
            return Err(DarimaError::InvalidSeries("period must be >= 1".into()));
        }
        Ok(Self {
            values,
            period_m,
            origin,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> usize {
        self.period_m
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Global index of the last observation.
    pub fn last_index(&self) -> i64 {
        self.origin + self.values.len() as i64 - 1
    }

    /// Splits `1..=len` into `K` contiguous index ranges of length
    /// `floor(len/K)`, the last range absorbing the remainder.
    pub fn partition(&self, k: usize) -> Result<Partition> {
        partition_bounds(self.len(), k)
    }

    /// Copies out the observations at 1-based positions `lbound..=ubound`,
    /// keeping the period and shifting the origin.
    pub fn slice(&self, lbound: usize, ubound: usize) -> Result<Self> {
        if lbound < 1 || ubound < lbound || ubound > self.len() {
            return Err(DarimaError::SliceOutOfRange {
                lbound,
                ubound,
                len: self.len(),
            });
        }
        Ok(Self {
            values: self.values[lbound - 1..ubound].to_vec(),
            period_m: self.period_m,
            origin: self.origin + lbound as i64 - 1,
        })
    }

    /// Splits off the last `horizon` observations as a test set.
    pub fn train_test_split(&self, horizon: usize) -> Result<(Self, Self)> {
        if horizon == 0 || horizon >= self.len() {
            return Err(DarimaError::InvalidSplit {
                horizon,
                len: self.len(),
            });
        }
        let split = self.len() - horizon;
        Ok((self.slice(1, split)?, self.slice(split + 1, self.len())?))
    }
}

/// Contiguous cover of `1..=T` by `K` inclusive index ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    bounds: Vec<(usize, usize)>,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.bounds.len()
    }

    /// Inclusive 1-based `(lbound, ubound)` pairs in subseries order.
    pub fn bounds(&self) -> &[(usize, usize)] {
        &self.bounds
    }
}

fn partition_bounds(t: usize, k: usize) -> Result<Partition> {
    if k < 1 || k > t {
        return Err(DarimaError::InvalidPartition { t, k });
    }
    let n = t / k;
    let bounds = (1..=k)
        .map(|i| {
            let lbound = n * (i - 1) + 1;
            let ubound = if i >= k { t } else { n * i };
            (lbound, ubound)
        })
        .collect();
    Ok(Partition { bounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ramp(n: usize) -> TimeSeries {
        TimeSeries::new((1..=n).map(|i| i as f64).collect(), 1).unwrap()
    }

    #[test]
    fn rejects_empty_and_nonfinite() {
        assert!(TimeSeries::<f64>::new(vec![], 1).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN], 1).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::INFINITY], 1).is_err());
        assert!(TimeSeries::new(vec![1.0], 0).is_err());
    }

    #[test]
    fn partition_ten_by_three() {
        let p = ramp(10).partition(3).unwrap();
        assert_eq!(p.bounds(), &[(1, 3), (4, 6), (7, 10)]);
    }

    #[test]
    fn partition_single_subseries() {
        let p = ramp(10).partition(1).unwrap();
        assert_eq!(p.bounds(), &[(1, 10)]);
    }

    #[test]
    fn partition_gefcom_scale() {
        // T = 124171, K = 150: n = 827, last subseries absorbs the remainder.
        let p = partition_bounds(124_171, 150).unwrap();
        assert_eq!(p.k(), 150);
        for (l, u) in &p.bounds()[..149] {
            assert_eq!(u - l + 1, 827);
        }
        let (l, u) = p.bounds()[149];
        assert_eq!(u - l + 1, 124_171 - 827 * 149);
        assert_eq!(u - l + 1, 948);
    }

    #[test]
    fn partition_rejects_bad_k() {
        assert!(ramp(10).partition(0).is_err());
        assert!(ramp(10).partition(11).is_err());
    }

    #[test]
    fn partition_is_contiguous_cover() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let t = rng.gen_range(1..5000usize);
            let k = rng.gen_range(1..=t);
            let p = partition_bounds(t, k).unwrap();
            assert_eq!(p.k(), k);
            assert_eq!(p.bounds()[0].0, 1);
            assert_eq!(p.bounds()[k - 1].1, t);
            let mut total = 0;
            for w in p.bounds().windows(2) {
                assert_eq!(w[1].0, w[0].1 + 1);
            }
            for (l, u) in p.bounds() {
                assert!(l <= u);
                total += u - l + 1;
            }
            assert_eq!(total, t);
            // Deterministic.
            assert_eq!(p, partition_bounds(t, k).unwrap());
        }
    }

    #[test]
    fn slice_index_arithmetic() {
        let s = TimeSeries::new(vec![5.0, 6.0, 7.0, 8.0], 1).unwrap();
        let sub = s.slice(2, 3).unwrap();
        assert_eq!(sub.values(), &[6.0, 7.0]);
        assert_eq!(sub.origin(), 2);
        assert_eq!(s.slice(1, 4).unwrap(), s);
        assert!(s.slice(0, 2).is_err());
        assert!(s.slice(2, 5).is_err());
    }

    #[test]
    fn slice_lengths_match_partition() {
        let s = ramp(10);
        let p = s.partition(3).unwrap();
        for &(l, u) in p.bounds() {
            assert_eq!(s.slice(l, u).unwrap().len(), u - l + 1);
        }
        assert_eq!(s.slice(7, 10).unwrap().len(), 4);
    }

    #[test]
    fn slice_preserves_global_clock() {
        let s = TimeSeries::with_origin(vec![1.0; 20], 7, 100).unwrap();
        let sub = s.slice(5, 10).unwrap();
        assert_eq!(sub.origin(), 104);
        assert_eq!(sub.period(), 7);
        assert_eq!(sub.last_index(), 109);
    }

    #[test]
    fn train_test_split_suffix() {
        let s = ramp(10);
        let (train, test) = s.train_test_split(2).unwrap();
        assert_eq!(train.values(), (1..=8).map(|i| i as f64).collect::<Vec<_>>());
        assert_eq!(test.values(), &[9.0, 10.0]);
        assert_eq!(test.origin(), 9);
        assert!(s.train_test_split(0).is_err());
        assert!(s.train_test_split(10).is_err());
        // Training length at application scale.
        let (train, test) = ramp(124_171).train_test_split(2879).unwrap();
        assert_eq!(train.len(), 121_292);
        assert_eq!(test.len(), 2879);
    }
}
