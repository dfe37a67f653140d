//! Annual time series and the elementary transformations applied to them.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A gap-free sequence of annual observations.
///
/// Values are finite and there is one value per consecutive calendar year
/// starting at `start_year`. Instances are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnualSeries {
    start_year: i32,
    values: Vec<f64>,
    label: String,
}

impl AnnualSeries {
    pub fn new(label: impl Into<String>, start_year: i32, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                label,
                year: start_year + i as i32,
            });
        }
        Ok(Self {
            start_year,
            values,
            label,
        })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    /// Last calendar year covered (inclusive).
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        let offset = year.checked_sub(self.start_year)?;
        usize::try_from(offset).ok().and_then(|i| self.values.get(i).copied())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Restricts the series to `first..=last`, clipped to its own range.
    pub fn window(&self, first: i32, last: i32) -> Result<Self> {
        let lo = first.max(self.start_year);
        let hi = last.min(self.end_year());
        if lo > hi {
            return Err(Error::EmptyWindow { first, last });
        }
        let a = (lo - self.start_year) as usize;
        let b = (hi - self.start_year) as usize;
        Ok(Self {
            start_year: lo,
            values: self.values[a..=b].to_vec(),
            label: self.label.clone(),
        })
    }

    /// Element-wise map; the result must stay finite.
    pub fn map(&self, label: &str, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(label, self.start_year, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Combines two aligned series element-wise.
    pub fn zip_with(&self, other: &Self, label: &str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        ensure_aligned(self, other)?;
        Self::new(
            label,
            self.start_year,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    fn require_positive(&self) -> Result<()> {
        match self.values.iter().position(|&v| v <= 0.0) {
            Some(i) => Err(Error::NonPositiveValue {
                label: self.label.clone(),
                year: self.start_year + i as i32,
                value: self.values[i],
            }),
            None => Ok(()),
        }
    }

    fn require_len(&self, required: usize) -> Result<()> {
        if self.values.len() < required {
            return Err(Error::SeriesTooShort {
                required,
                available: self.values.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn ensure_aligned(a: &AnnualSeries, b: &AnnualSeries) -> Result<()> {
    if a.start_year != b.start_year || a.len() != b.len() {
        return Err(Error::Misaligned(alloc::format!(
            "`{}` covers {}..={} but `{}` covers {}..={}",
            a.label,
            a.start_year,
            a.end_year(),
            b.label,
            b.start_year,
            b.end_year()
        )));
    }
    Ok(())
}

/// Sample summary of one series (standard deviation uses the n-1 divisor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

/// Natural logarithm of every value.
pub fn log_transform(s: &AnnualSeries) -> Result<AnnualSeries> {
    s.require_positive()?;
    s.map(s.label(), |v| v.ln())
}

/// Log growth `ln(s_t) - ln(s_{t-1})`, dated at `t`.
pub fn log_growth(s: &AnnualSeries) -> Result<AnnualSeries> {
    s.require_len(2)?;
    s.require_positive()?;
    AnnualSeries::new(
        s.label(),
        s.start_year + 1,
        s.values.windows(2).map(|w| w[1].ln() - w[0].ln()).collect(),
    )
}

/// First difference, dated at the later year.
pub fn diff(s: &AnnualSeries) -> Result<AnnualSeries> {
    s.require_len(2)?;
    AnnualSeries::new(
        s.label(),
        s.start_year + 1,
        s.values.windows(2).map(|w| w[1] - w[0]).collect(),
    )
}

pub fn summarize(s: &AnnualSeries) -> Result<SummaryStats> {
    s.require_len(2)?;
    let n = s.len();
    let mean = s.mean();
    let ss: f64 = s.values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let (min, max) = s
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(SummaryStats {
        // clamp guards against the mean landing one ulp outside [min, max]
        mean: mean.clamp(min, max),
        std: (ss / (n - 1) as f64).sqrt(),
        min,
        max,
        n,
    })
}

/// Restricts both series to their common year window.
pub fn align(a: &AnnualSeries, b: &AnnualSeries) -> Result<(AnnualSeries, AnnualSeries)> {
    let first = a.start_year.max(b.start_year);
    let last = a.end_year().min(b.end_year());
    if first > last {
        return Err(Error::NoOverlap);
    }
    Ok((a.window(first, last)?, b.window(first, last)?))
}

/// Restricts every series to the window they all share.
pub fn align_all(series: &[&AnnualSeries]) -> Result<Vec<AnnualSeries>> {
    let first = series.iter().map(|s| s.start_year).max().ok_or(Error::EmptySeries)?;
    let last = series.iter().map(|s| s.end_year()).min().ok_or(Error::EmptySeries)?;
    if first > last {
        return Err(Error::NoOverlap);
    }
    series.iter().map(|s| s.window(first, last)).collect()
}

impl core::fmt::Display for AnnualSeries {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} [{}..={}]", self.label, self.start_year, self.end_year())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::E;
    use proptest::prelude::*;

    fn series(start: i32, values: Vec<f64>) -> AnnualSeries {
        AnnualSeries::new("s", start, values).unwrap()
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(AnnualSeries::new("x", 1960, vec![]), Err(Error::EmptySeries));
        assert!(matches!(
            AnnualSeries::new("x", 1960, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { year: 1961, .. })
        ));
    }

    #[test]
    fn log_of_powers_of_e() {
        let l = log_transform(&series(1960, vec![1.0, E, E * E])).unwrap();
        assert_eq!(l.start_year(), 1960);
        for (got, want) in l.values().iter().zip([0.0, 1.0, 2.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let c = log_transform(&series(1960, vec![3.0; 3])).unwrap();
        assert!(c.values().iter().all(|&v| v == 3f64.ln()));
        let two_eight = log_transform(&series(1960, vec![2.0, 8.0])).unwrap();
        assert_abs_diff_eq!(two_eight.values()[0], core::f64::consts::LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(two_eight.values()[1], 3.0 * core::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn log_rejects_non_positive() {
        let err = log_transform(&series(1960, vec![1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::NonPositiveValue { year: 1961, .. }));
    }

    #[test]
    fn growth_rates() {
        let g = log_growth(&series(1960, vec![1.0, E, E * E])).unwrap();
        assert_eq!(g.start_year(), 1961);
        assert_eq!(g.len(), 2);
        for v in g.values() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-15);
        }
        let zero = log_growth(&series(1960, vec![4.0; 5])).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let g = log_growth(&series(2000, vec![100.0, 103.0])).unwrap();
        assert_abs_diff_eq!(g.values()[0], 0.029559, epsilon = 5e-7);
        assert!(matches!(
            log_growth(&series(2000, vec![1.0])),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn differences() {
        assert_eq!(diff(&series(1960, vec![5.0; 3])).unwrap().values(), &[0.0, 0.0]);
        let d = diff(&series(1960, vec![0.0, 1.0, 3.0])).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0]);
        assert_eq!(d.start_year(), 1961);
        let arith = series(1960, (0..10).map(|i| 2.5 + 0.75 * i as f64).collect());
        assert!(diff(&arith).unwrap().values().iter().all(|&v| (v - 0.75).abs() < 1e-12));
        assert!(diff(&series(1960, vec![1.0])).is_err());
    }

    #[test]
    fn summary_of_constant() {
        let s = summarize(&series(1960, vec![1.0; 3])).unwrap();
        assert_eq!((s.mean, s.std, s.min, s.max, s.n), (1.0, 0.0, 1.0, 1.0, 3));
        assert!(summarize(&series(1960, vec![1.0])).is_err());
    }

    #[test]
    fn align_cases() {
        let a = series(1960, vec![1.0; 11]);
        let b = series(1965, vec![2.0; 16]);
        let (x, y) = align(&a, &b).unwrap();
        assert_eq!((x.start_year(), x.end_year()), (1965, 1970));
        assert_eq!((y.start_year(), y.end_year()), (1965, 1970));
        let (x, y) = align(&a, &a).unwrap();
        assert_eq!((&x, &y), (&a, &a));
        let c = series(1960, vec![1.0; 5]);
        let d = series(1970, vec![1.0; 6]);
        assert_eq!(align(&c, &d), Err(Error::NoOverlap));
    }

    fn positive_series() -> impl Strategy<Value = AnnualSeries> {
        (1900i32..2000, prop::collection::vec(1e-3f64..1e3, 2..60))
            .prop_map(|(y, v)| AnnualSeries::new("p", y, v).unwrap())
    }

    proptest! {
        #[test]
        fn diff_of_log_is_log_growth(s in positive_series()) {
            let a = diff(&log_transform(&s).unwrap()).unwrap();
            let b = log_growth(&s).unwrap();
            prop_assert_eq!(a.start_year(), b.start_year());
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn summary_matches_brute_force(s in positive_series()) {
            let st = summarize(&s).unwrap();
            let v = s.values();
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            prop_assert!((st.mean - mean).abs() <= 1e-12 * mean.abs().max(1.0));
            prop_assert!((st.std - var.sqrt()).abs() <= 1e-9 * var.sqrt().max(1.0));
            prop_assert!(st.min <= st.mean && st.mean <= st.max);
            prop_assert!(st.std >= 0.0);
            prop_assert_eq!(st.min, v.iter().cloned().fold(f64::INFINITY, f64::min));
            prop_assert_eq!(st.max, v.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        }

        #[test]
        fn align_is_idempotent(a in positive_series(), b in positive_series()) {
            if let Ok((x, y)) = align(&a, &b) {
                let (x2, y2) = align(&x, &y).unwrap();
                prop_assert_eq!(x2, x);
                prop_assert_eq!(y2, y);
            }
        }
    }
}
