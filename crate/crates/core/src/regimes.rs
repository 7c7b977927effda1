//! Constant-drift regime detection on monthly log prices.
//!
//! The log price is modelled as a sequence of independent straight lines.
//! Breakpoints minimizing the total squared error for each break count are
//! found exactly by dynamic programming over segment costs; the break count is
//! then chosen by BIC with `3k + 2` free parameters for `k` breaks (two per
//! line plus one per break).

use chrono::{Datelike, Days, NaiveDate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{PriceSeries, ReturnSeries};
use crate::strategy::{average_curves, sweep, Statistic, StrategyMode, SweepCurve};
use crate::Scalar;

/// One straight-line segment `[start, end)` of the monthly series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment<T = f64> {
    pub start: usize,
    pub end: usize,
    /// First day covered when mapping onto another series: the day after the
    /// previous segment's last observation.
    pub span_start: NaiveDate,
    /// Date of the last observation in the segment.
    pub end_date: NaiveDate,
    /// Per-period slope of the fitted line (log price per month).
    pub slope: T,
    pub intercept: T,
    pub sse: T,
}

impl<T> Segment<T> {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    /// Calendar length in whole weeks.
    pub fn weeks(&self) -> usize {
        ((self.end_date - self.span_start).num_days() + 1).max(0) as usize / 7
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct RegimePartition<T = f64> {
    pub segments: Vec<Segment<T>>,
    /// Minimal total SSE for `0, 1, ..` breaks before BIC selection.
    pub sse_by_breaks: Vec<T>,
    pub bic_by_breaks: Vec<T>,
    /// Set once [`filter_regimes`] has run.
    pub min_weeks_filter: Option<usize>,
    pub series_len: usize,
}

impl<T: Scalar> RegimePartition<T> {
    /// Start index of every segment after the first.
    pub fn breakpoints(&self) -> Vec<usize> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    pub fn breakpoint_dates(&self) -> Vec<NaiveDate> {
        self.segments.iter().skip(1).map(|s| s.span_start).collect()
    }
}

/// O(1) least-squares line cost of any index range.
struct LineCosts<T> {
    s_t: Vec<T>,
    s_tt: Vec<T>,
    s_y: Vec<T>,
    s_yy: Vec<T>,
    s_ty: Vec<T>,
}

impl<T: Scalar> LineCosts<T> {
    fn new(y: &[T]) -> Self {
        let n = y.len();
        let mut c = Self {
            s_t: Vec::with_capacity(n + 1),
            s_tt: Vec::with_capacity(n + 1),
            s_y: Vec::with_capacity(n + 1),
            s_yy: Vec::with_capacity(n + 1),
            s_ty: Vec::with_capacity(n + 1),
        };
        let z = T::zero();
        let (mut a, mut b, mut d, mut e, mut f) = (z, z, z, z, z);
        for v in [&mut c.s_t, &mut c.s_tt, &mut c.s_y, &mut c.s_yy, &mut c.s_ty] {
            v.push(z);
        }
        for (i, &yi) in y.iter().enumerate() {
            let t = T::from_usize_lossy(i);
            a = a + t;
            b = b + t * t;
            d = d + yi;
            e = e + yi * yi;
            f = f + t * yi;
            c.s_t.push(a);
            c.s_tt.push(b);
            c.s_y.push(d);
            c.s_yy.push(e);
            c.s_ty.push(f);
        }
        c
    }

    /// `(slope, intercept, sse)` of the OLS line on `[i, j)`, `j - i >= 2`.
    fn fit(&self, i: usize, j: usize) -> (T, T, T) {
        let n = T::from_usize_lossy(j - i);
        let st = self.s_t[j] - self.s_t[i];
        let stt = self.s_tt[j] - self.s_tt[i];
        let sy = self.s_y[j] - self.s_y[i];
        let syy = self.s_yy[j] - self.s_yy[i];
        let sty = self.s_ty[j] - self.s_ty[i];
        let sxx = stt - st * st / n;
        let sxy = sty - st * sy / n;
        let syy_c = syy - sy * sy / n;
        let slope = sxy / sxx;
        let intercept = (sy - slope * st) / n;
        let sse = (syy_c - slope * sxy).max(T::zero());
        (slope, intercept, sse)
    }

    fn sse(&self, i: usize, j: usize) -> T {
        self.fit(i, j).2
    }
}

/// Minimal-SSE piecewise-linear fit with a fixed number of breaks.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSegmentation<T = f64> {
    pub sse: T,
    /// Start index of every segment after the first.
    pub breakpoints: Vec<usize>,
}

/// Exact optimal segmentations of `y` for every break count `0..=max_breaks`
/// (capped by what `min_segment` allows). Each segment has at least
/// `max(min_segment, 2)` points.
pub fn optimal_segmentations<T: Scalar>(
    y: &[T],
    min_segment: usize,
    max_breaks: usize,
) -> Result<Vec<OptimalSegmentation<T>>> {
    let n = y.len();
    let h = min_segment.max(2);
    if n < 2 * min_segment || n < h {
        return Err(Error::InfeasibleSegmentation { len: n, min_segment });
    }
    let max_breaks = max_breaks.min(n / h - 1);
    let costs = LineCosts::new(y);
    let inf = T::infinity();
    // best[m][j]: min SSE splitting y[..j] into m + 1 segments
    let mut best = vec![vec![inf; n + 1]; max_breaks + 1];
    let mut arg = vec![vec![0usize; n + 1]; max_breaks + 1];
    for j in h..=n {
        best[0][j] = costs.sse(0, j);
    }
    for m in 1..=max_breaks {
        let prev = &best[m - 1];
        let row: Vec<(T, usize)> = ((m + 1) * h..=n)
            .into_par_iter()
            .map(|j| {
                let mut top = (inf, 0);
                for i in (m * h)..=(j - h) {
                    let c = prev[i] + costs.sse(i, j);
                    if c < top.0 {
                        top = (c, i);
                    }
                }
                top
            })
            .collect();
        for (offset, (c, i)) in row.into_iter().enumerate() {
            let j = (m + 1) * h + offset;
            best[m][j] = c;
            arg[m][j] = i;
        }
    }
    Ok((0..=max_breaks)
        .map(|m| {
            let mut starts = Vec::with_capacity(m);
            let mut j = n;
            for level in (1..=m).rev() {
                let i = arg[level][j];
                starts.push(i);
                j = i;
            }
            starts.reverse();
            OptimalSegmentation {
                sse: best[m][n],
                breakpoints: starts,
            }
        })
        .collect())
}

/// `floor` keeps perfect fits finite so the penalty decides between them.
fn bic<T: Scalar>(sse: T, n: usize, breaks: usize, floor: T) -> T {
    let nf = T::from_usize_lossy(n);
    let params = T::from_usize_lossy(2 * (breaks + 1) + breaks);
    nf * (sse.max(floor) / nf).ln() + params * nf.ln()
}

/// Piecewise-linear segmentation of monthly log prices.
pub fn detect_breakpoints<T: Scalar>(
    monthly_prices: &PriceSeries<T>,
    min_segment: usize,
    max_breaks: usize,
) -> Result<RegimePartition<T>> {
    let y = monthly_prices.map_log();
    let n = y.len();
    let paths = optimal_segmentations(&y, min_segment, max_breaks)?;
    let floor = (paths[0].sse * T::epsilon() * T::lit(1e3)).max(T::min_positive_value());
    let bics: Vec<T> = paths.iter().enumerate().map(|(k, p)| bic(p.sse, n, k, floor)).collect();
    let chosen = bics
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| if b < bics[acc] { k } else { acc });
    let costs = LineCosts::new(&y);
    let dates = monthly_prices.dates();
    let starts: Vec<usize> = std::iter::once(0)
        .chain(paths[chosen].breakpoints.iter().copied())
        .collect();
    let segments = starts
        .iter()
        .enumerate()
        .map(|(s, &start)| {
            let end = starts.get(s + 1).copied().unwrap_or(n);
            let (slope, intercept_local, sse) = costs.fit(start, end);
            // express the intercept at the segment's own first index
            let intercept = intercept_local + slope * T::from_usize_lossy(start);
            let span_start = if start == 0 {
                dates[0]
            } else {
                dates[start - 1] + Days::new(1)
            };
            Segment {
                start,
                end,
                span_start,
                end_date: dates[end - 1],
                slope,
                intercept,
                sse,
            }
        })
        .collect();
    Ok(RegimePartition {
        segments,
        sse_by_breaks: paths.iter().map(|p| p.sse).collect(),
        bic_by_breaks: bics,
        min_weeks_filter: None,
        series_len: n,
    })
}

/// Drops segments spanning fewer than `min_weeks` calendar weeks.
pub fn filter_regimes<T: Scalar>(p: &RegimePartition<T>, min_weeks: usize) -> Result<RegimePartition<T>> {
    let segments: Vec<Segment<T>> = p.segments.iter().filter(|s| s.weeks() >= min_weeks).cloned().collect();
    if segments.is_empty() {
        return Err(Error::AllRegimesDropped);
    }
    Ok(RegimePartition {
        segments,
        min_weeks_filter: Some(min_weeks),
        ..p.clone()
    })
}

/// Lag autocorrelation inside one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeAutocorrelation<T = f64> {
    pub span_start: NaiveDate,
    pub end_date: NaiveDate,
    pub count: usize,
    pub rho: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct RegimeAutocorrelations<T = f64> {
    pub lag: usize,
    pub epoch_year: i32,
    pub per_regime: Vec<RegimeAutocorrelation<T>>,
    /// Pooled over regimes starting before `epoch_year`.
    pub pre_epoch: Option<T>,
    /// Pooled over regimes starting in or after `epoch_year`.
    pub post_epoch: Option<T>,
}

struct LagMoments<T> {
    cross: T,
    square: T,
}

fn regime_lag_moments<T: Scalar>(x: &[T], lag: usize) -> LagMoments<T> {
    let m = crate::series::mean(x);
    LagMoments {
        cross: (lag..x.len()).map(|t| (x[t] - m) * (x[t - lag] - m)).sum(),
        square: x.iter().map(|&v| (v - m) * (v - m)).sum(),
    }
}

fn regime_slices<T: Scalar>(r: &ReturnSeries<T>, p: &RegimePartition<T>) -> Vec<std::ops::Range<usize>> {
    p.segments
        .iter()
        .map(|s| r.range_between(s.span_start, s.end_date))
        .collect()
}

fn in_pre_epoch<T>(s: &Segment<T>, epoch_year: i32) -> bool {
    s.span_start.year() < epoch_year
}

/// Lag-`lag` autocorrelation within each regime, plus within-regime pooled
/// estimates before and after `epoch_year`.
pub fn regime_autocorrelations<T: Scalar>(
    r: &ReturnSeries<T>,
    p: &RegimePartition<T>,
    lag: usize,
    epoch_year: i32,
) -> Result<RegimeAutocorrelations<T>> {
    if lag == 0 {
        return Err(Error::InvalidInput("lag must be >= 1".into()));
    }
    let slices = regime_slices(r, p);
    let mut per_regime = Vec::with_capacity(slices.len());
    let (mut pre, mut post) = ((T::zero(), T::zero()), (T::zero(), T::zero()));
    for (index, (seg, range)) in p.segments.iter().zip(&slices).enumerate() {
        let x = &r.values()[range.clone()];
        if x.len() < lag + 2 {
            return Err(Error::RegimeTooShort {
                index,
                len: x.len(),
                needed: lag + 2,
            });
        }
        let lm = regime_lag_moments(x, lag);
        if !(lm.square > T::zero()) {
            return Err(Error::ZeroStd);
        }
        let acc = if in_pre_epoch(seg, epoch_year) {
            &mut pre
        } else {
            &mut post
        };
        acc.0 = acc.0 + lm.cross;
        acc.1 = acc.1 + lm.square;
        per_regime.push(RegimeAutocorrelation {
            span_start: seg.span_start,
            end_date: seg.end_date,
            count: x.len(),
            rho: lm.cross / lm.square,
        });
    }
    let pooled = |(c, s): (T, T)| if s > T::zero() { Some(c / s) } else { None };
    Ok(RegimeAutocorrelations {
        lag,
        epoch_year,
        per_regime,
        pre_epoch: pooled(pre),
        post_epoch: pooled(post),
    })
}

/// Regime-averaged SR curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct RegimeSweep<T = f64> {
    pub all: SweepCurve<T>,
    /// Regimes starting before the epoch year, when any.
    pub pre_epoch: Option<SweepCurve<T>>,
    pub post_epoch: Option<SweepCurve<T>>,
    pub per_regime: Vec<SweepCurve<T>>,
}

/// Runs the strategy separately inside every regime (moving averages never
/// reach across a regime boundary) and averages the per-regime curves.
pub fn regime_sweep<T: Scalar>(
    r: &ReturnSeries<T>,
    p: &RegimePartition<T>,
    lookbacks: &[usize],
    mode: StrategyMode,
    epoch_year: Option<i32>,
) -> Result<RegimeSweep<T>> {
    let slices = regime_slices(r, p);
    let max_n = lookbacks.iter().copied().max().unwrap_or(0);
    if let Some((index, range)) = slices.iter().enumerate().find(|(_, s)| s.len() < max_n + 2) {
        return Err(Error::RegimeTooShort {
            index,
            len: range.len(),
            needed: max_n + 2,
        });
    }
    let per_regime = slices
        .par_iter()
        .map(|range| sweep(&r.slice(range.clone()), lookbacks, mode, Statistic::SharpeRatio))
        .collect::<Result<Vec<_>>>()?;
    let all = average_curves(&per_regime)?;
    let (mut pre_epoch, mut post_epoch) = (None, None);
    if let Some(year) = epoch_year {
        let group = |pre: bool| -> Result<Option<SweepCurve<T>>> {
            let curves: Vec<SweepCurve<T>> = p
                .segments
                .iter()
                .zip(&per_regime)
                .filter(|(s, _)| in_pre_epoch(s, year) == pre)
                .map(|(_, c)| c.clone())
                .collect();
            if curves.is_empty() {
                Ok(None)
            } else {
                average_curves(&curves).map(Some)
            }
        };
        pre_epoch = group(true)?;
        post_epoch = group(false)?;
    }
    Ok(RegimeSweep {
        all,
        pre_epoch,
        post_epoch,
        per_regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::series::{Frequency, Weekday};
    use chrono::Months;

    fn monthly(y: &[f64]) -> PriceSeries<f64> {
        let start = NaiveDate::from_ymd_opt(1950, 1, 31).unwrap();
        let dates = (0..y.len())
            .map(|i| (start + Months::new(i as u32)).with_day(28).unwrap())
            .collect();
        PriceSeries::new(dates, y.iter().map(|v| v.exp()).collect(), Frequency::Monthly).unwrap()
    }

    fn noise(n: usize, sd: f64, seed: u64) -> Vec<f64> {
        let mut r = rng::seeded(seed);
        (0..n).map(|_| sd * f64::standard_normal(&mut r)).collect()
    }

    fn two_slope(seed: u64) -> Vec<f64> {
        let e = noise(120, 0.005, seed);
        (0..120)
            .map(|t| if t < 60 { 0.01 * t as f64 } else { 0.6 - 0.01 * (t - 60) as f64 } + e[t])
            .collect()
    }

    #[test]
    fn single_line_has_no_breaks() {
        let e = noise(100, 1e-4, 1);
        let y: Vec<f64> = (0..100).map(|t| 0.003 * t as f64 + e[t]).collect();
        let p = detect_breakpoints(&monthly(&y), 6, 5).unwrap();
        assert!(p.breakpoints().is_empty());
        assert_eq!(p.segments.len(), 1);
    }

    #[test]
    fn two_slopes_recovered() {
        let hits = (0..100)
            .filter(|&s| {
                let p = detect_breakpoints(&monthly(&two_slope(s)), 10, 4).unwrap();
                p.breakpoints().len() == 1 && p.breakpoints()[0].abs_diff(60) <= 3
            })
            .count();
        assert!(hits >= 95, "{hits}");
    }

    #[test]
    fn segments_tile_and_sse_decreases() {
        let p = detect_breakpoints(&monthly(&two_slope(3)), 5, 6).unwrap();
        assert_eq!(p.segments[0].start, 0);
        assert_eq!(p.segments.last().unwrap().end, 120);
        for w in p.segments.windows(2) {
            assert_eq!(w[0].end, w[1].start);
            assert_eq!(w[0].end_date + Days::new(1), w[1].span_start);
        }
        assert!(p.segments.iter().all(|s| s.len() >= 5 && s.slope.is_finite()));
        assert!(p.sse_by_breaks.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert_eq!(p.sse_by_breaks.len(), 7);
    }

    #[test]
    fn slope_and_intercept_describe_segment() {
        let y: Vec<f64> = (0..40)
            .map(|t| {
                if t < 20 {
                    1.0 + 0.02 * t as f64
                } else {
                    3.0 - 0.05 * t as f64
                }
            })
            .collect();
        let p = detect_breakpoints(&monthly(&y), 5, 3).unwrap();
        assert_eq!(p.breakpoints(), vec![20]);
        assert!((p.segments[1].slope + 0.05).abs() < 1e-9);
        assert!((p.segments[1].intercept - (3.0 - 0.05 * 20.0)).abs() < 1e-9);
    }

    #[test]
    fn infeasible_lengths() {
        assert!(matches!(
            detect_breakpoints(&monthly(&[0.0; 9]), 5, 2),
            Err(Error::InfeasibleSegmentation { len: 9, min_segment: 5 })
        ));
    }

    fn partition_with_weeks(weeks: &[usize]) -> RegimePartition<f64> {
        let mut day = NaiveDate::from_ymd_opt(1960, 1, 4).unwrap();
        let mut start = 0;
        let segments = weeks
            .iter()
            .map(|&w| {
                let span_start = day;
                let end_date = day + Days::new(7 * w as u64 - 1);
                day = end_date + Days::new(1);
                let s = Segment {
                    start,
                    end: start + 1,
                    span_start,
                    end_date,
                    slope: 0.0,
                    intercept: 0.0,
                    sse: 0.0,
                };
                start += 1;
                s
            })
            .collect();
        RegimePartition {
            segments,
            sse_by_breaks: vec![],
            bic_by_breaks: vec![],
            min_weeks_filter: None,
            series_len: weeks.len(),
        }
    }

    #[test]
    fn filter_examples() {
        let p = partition_with_weeks(&[100, 120, 80]);
        let f = filter_regimes(&p, 70).unwrap();
        assert_eq!(f.segments, p.segments);
        assert_eq!(f.min_weeks_filter, Some(70));

        let p = partition_with_weeks(&[100, 50, 80]);
        let f = filter_regimes(&p, 70).unwrap();
        assert_eq!(f.segments.len(), 2);
        assert!(f.segments.iter().all(|s| s.weeks() >= 70));

        assert_eq!(
            filter_regimes(&partition_with_weeks(&[10, 20]), 70).unwrap_err(),
            Error::AllRegimesDropped
        );
    }

    fn weekly_returns_over(p: &RegimePartition<f64>, values: impl Fn(usize, usize) -> f64) -> ReturnSeries<f64> {
        let mut dates = Vec::new();
        let mut vals = Vec::new();
        for (k, s) in p.segments.iter().enumerate() {
            let mut d = s.span_start + Days::new(4);
            let mut i = 0;
            while d <= s.end_date {
                dates.push(d);
                vals.push(values(k, i));
                d = d + Days::new(7);
                i += 1;
            }
        }
        ReturnSeries::new(dates, vals, crate::ReturnKind::RawLog, Frequency::Weekly(Weekday::Fri)).unwrap()
    }

    #[test]
    fn iid_regime_autocorrelation_near_zero() {
        let p = partition_with_weeks(&[5000]);
        let e = noise(5000, 1.0, 8);
        let r = weekly_returns_over(&p, |_, i| e[i]);
        let ac = regime_autocorrelations(&r, &p, 1, 1975).unwrap();
        let n = ac.per_regime[0].count as f64;
        assert!(ac.per_regime[0].rho.abs() < 3.0 / n.sqrt());
    }

    #[test]
    fn short_regime_autocorrelation_errors() {
        let p = partition_with_weeks(&[100, 2]);
        let r = weekly_returns_over(&p, |_, i| (i as f64).sin());
        assert!(matches!(
            regime_autocorrelations(&r, &p, 1, 1975),
            Err(Error::RegimeTooShort {
                index: 1,
                len: 2,
                needed: 3
            })
        ));
    }

    #[test]
    fn epoch_pooling_signs() {
        // pre-epoch regime alternates in pairs (positive lag-1), post alternates each step
        let mut p = partition_with_weeks(&[200, 200]);
        p.segments[1].span_start = NaiveDate::from_ymd_opt(1980, 1, 1).unwrap();
        p.segments[1].end_date = p.segments[1].span_start + Days::new(7 * 200 - 1);
        let r = weekly_returns_over(&p, |k, i| {
            if k == 0 {
                [1.0, 1.0, -1.0, -1.0][i % 4]
            } else {
                [1.0, -1.0][i % 2]
            }
        });
        let ac = regime_autocorrelations(&r, &p, 1, 1975).unwrap();
        assert!(ac.pre_epoch.unwrap() > 0.0);
        assert!(ac.post_epoch.unwrap() < 0.0);
    }

    #[test]
    fn single_regime_equals_plain_sweep() {
        let p = partition_with_weeks(&[300]);
        let e = noise(300, 1.0, 9);
        let r = weekly_returns_over(&p, |_, i| 0.05 + e[i]);
        let ns: Vec<usize> = (1..=20).collect();
        let rs = regime_sweep(&r, &p, &ns, StrategyMode::Linear, None).unwrap();
        let plain = sweep(&r, &ns, StrategyMode::Linear, Statistic::SharpeRatio).unwrap();
        assert_eq!(rs.all, plain);
    }

    #[test]
    fn no_cross_regime_leakage() {
        let p = partition_with_weeks(&[150, 150, 150]);
        let e = noise(450, 1.0, 10);
        let clean = weekly_returns_over(&p, |k, i| e[k * 150 + i.min(149)]);
        let ns: Vec<usize> = (1..=10).collect();
        let base = regime_sweep(&clean, &p, &ns, StrategyMode::Linear, None).unwrap();
        // poison regimes 0 and 2; regime 1's curve must not move
        let poisoned = weekly_returns_over(&p, |k, i| if k == 1 { e[150 + i.min(149)] } else { f64::NAN });
        let one = RegimePartition {
            segments: vec![p.segments[1].clone()],
            ..p.clone()
        };
        let isolated = regime_sweep(&poisoned, &one, &ns, StrategyMode::Linear, None).unwrap();
        assert_eq!(isolated.all, base.per_regime[1]);
        assert!(isolated.all.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn alternating_drift_regimes_look_like_case_one() {
        let mu = 0.15;
        let p = partition_with_weeks(&[400; 40]);
        let e = noise(400 * 40, 1.0, 11);
        let r = weekly_returns_over(&p, |k, i| if k % 2 == 0 { mu } else { -mu } + e[k * 400 + i.min(399)]);
        let ns: Vec<usize> = vec![1, 4, 16, 64];
        let rs = regime_sweep(&r, &p, &ns, StrategyMode::Linear, Some(1975)).unwrap();
        assert!(rs.all.values.windows(2).all(|w| w[1] > w[0]), "{:?}", rs.all.values);
        assert!(rs.all.values[3] < mu + 0.02);
        assert!(rs.pre_epoch.is_some());
    }

    #[test]
    fn regime_too_short_for_lookback() {
        let p = partition_with_weeks(&[100, 10]);
        let r = weekly_returns_over(&p, |_, i| (i as f64 * 0.3).sin());
        assert!(matches!(
            regime_sweep(&r, &p, &[1, 9], StrategyMode::Linear, None),
            Err(Error::RegimeTooShort { index: 1, .. })
        ));
    }
}
