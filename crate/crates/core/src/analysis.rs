//! Trajectory diagnostics: spectral peaks, rational frequency ratios, curve
//! closure and record-to-record comparison.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dynamics::{Observable, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::numeric::nan_max;

/// Minimum number of samples accepted by [`dominant_frequencies`].
pub const MIN_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumPeak {
    /// Cycles per unit `tau`.
    pub frequency: f64,
    pub amplitude: f64,
    /// FFT bin the peak was interpolated around.
    pub index: usize,
}

impl SpectrumPeak {
    /// Angular frequency, radians per unit `tau`.
    pub fn angular(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency
    }
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::InsufficientData("need at least two samples".into()));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::NonUniformSampling("times must increase".into()));
    }
    for (k, t) in times.iter().enumerate() {
        let expected = times[0] + k as f64 * dt;
        if (t - expected).abs() > 1e-6 * dt {
            return Err(Error::NonUniformSampling(format!("sample {k} at {t} is off the uniform grid ({expected})")));
        }
    }
    Ok(dt)
}

/// Strongest spectral lines of a uniformly sampled signal.
///
/// The mean is removed and a Hann window applied; peak positions are refined
/// by a parabola through the log-magnitudes of the three bins around each
/// local maximum. Amplitudes are window-corrected, so a pure `A cos(w tau)`
/// reports about `A`. Peaks weaker than `1e-9` of the signal scale are
/// treated as noise.
pub fn dominant_frequencies(times: &[f64], signal: &[f64], n_peaks: usize) -> Result<Vec<SpectrumPeak>> {
    if times.len() != signal.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), actual: signal.len() });
    }
    if times.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!("{} samples, need at least {MIN_SAMPLES}", times.len())));
    }
    let dt = uniform_step(times)?;
    let n = signal.len();
    let mean = signal.iter().sum::<f64>() / n as f64;
    // periodic Hann window: exact-bin tones stay exactly on their bin
    let window: Vec<f64> =
        (0..n).map(|k| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
    let wsum: f64 = window.iter().sum();
    let mut buf: Vec<Complex<f64>> =
        signal.iter().zip(&window).map(|(v, w)| Complex::new((v - mean) * w, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2 + 1].iter().map(|z| 2.0 * z.norm() / wsum).collect();
    let scale = signal.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let floor = 1e-9 * scale;
    let mut peaks = Vec::new();
    for k in 1..mag.len().saturating_sub(1) {
        if mag[k] > floor && mag[k] >= mag[k - 1] && mag[k] > mag[k + 1] {
            let (a, b, c) = (mag[k - 1].max(1e-300).ln(), mag[k].ln(), mag[k + 1].max(1e-300).ln());
            let denom = a - 2.0 * b + c;
            let delta = if denom.abs() > 0.0 { (0.5 * (a - c) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            let amplitude = (b - 0.25 * (a - c) * delta).exp();
            peaks.push(SpectrumPeak { frequency: (k as f64 + delta) / (n as f64 * dt), amplitude, index: k });
        }
    }
    peaks.sort_by(|p, q| q.amplitude.total_cmp(&p.amplitude));
    peaks.truncate(n_peaks);
    Ok(peaks)
}

/// [`dominant_frequencies`] of one column of a record.
pub fn record_frequencies(
    record: &TrajectoryRecord,
    observable: Observable,
    n_peaks: usize,
) -> Result<Vec<SpectrumPeak>> {
    dominant_frequencies(&record.times, &record.series(observable), n_peaks)
}

/// Best rational approximation `p/q` with `q <= max_denominator`.
///
/// Walks the continued-fraction convergents and also considers the final
/// semiconvergent, which is what makes the result optimal rather than merely
/// a convergent. Returns `(p, q, |ratio - p/q|)`.
pub fn rationalize(ratio: f64, max_denominator: u64) -> Result<(u64, u64, f64)> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::param("ratio", format!("must be positive and finite, got {ratio}")));
    }
    if max_denominator == 0 {
        return Err(Error::param("max_denominator", "must be >= 1"));
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut x = ratio;
    loop {
        let a = x.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_denominator {
            // semiconvergent with the largest admissible partial quotient
            let k = (max_denominator - q0) / q1;
            let (ps, qs) = (p0 + k * p1, q0 + k * q1);
            if qs > 0 && (ratio - ps as f64 / qs as f64).abs() < (ratio - p1 as f64 / q1 as f64).abs() {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac.abs() < 1e-12 * x.max(1.0) {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        // ratio below 1/max_denominator's neighbourhood: fall back to 1/max
        return Ok((1, max_denominator, (ratio - 1.0 / max_denominator as f64).abs()));
    }
    let approx = p1 as f64 / q1 as f64;
    let err = (ratio - approx).abs();
    Ok((p1, q1, if err < 1e-15 * ratio { 0.0 } else { err }))
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&s| s <= t);
    if i == 0 {
        return values[0];
    }
    if i >= times.len() {
        return values[times.len() - 1];
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let u = (t - t0) / (t1 - t0);
    if u < 1e-9 {
        return values[i - 1];
    }
    if u > 1.0 - 1e-9 {
        return values[i];
    }
    values[i - 1] + u * (values[i] - values[i - 1])
}

fn convex_hull(points: &mut [(f64, f64)]) -> Vec<(f64, f64)> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(points.iter()) } else { Box::new(points.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Largest distance between two points of the curve.
pub fn diameter(x: &[f64], y: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    let hull = if pts.len() > 3 { convex_hull(&mut pts) } else { pts };
    let mut best: f64 = 0.0;
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            best = nan_max(best, (hull[i].0 - hull[j].0).hypot(hull[i].1 - hull[j].1));
        }
    }
    best
}

/// `max_tau |c(tau) - c(tau + T)| / diameter(c)`, with linear interpolation.
pub fn closure_metric(times: &[f64], x: &[f64], y: &[f64], period: f64) -> Result<f64> {
    if times.len() != x.len() || times.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), actual: x.len().min(y.len()) });
    }
    if period == 0.0 {
        return Ok(0.0);
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::param("period", format!("must be non-negative, got {period}")));
    }
    if times.len() < 2 || times[times.len() - 1] - times[0] < period * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(format!("curve spans less than one period T = {period}")));
    }
    let end = times[times.len() - 1];
    let mut worst: f64 = 0.0;
    for (k, &t) in times.iter().enumerate() {
        let target = t + period;
        if target > end + 1e-9 * period {
            break;
        }
        let dx = interpolate(times, x, target) - x[k];
        let dy = interpolate(times, y, target) - y[k];
        worst = nan_max(worst, dx.hypot(dy));
    }
    let d = diameter(x, y);
    Ok(if d > 0.0 { worst / d } else { worst })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableComparison {
    pub observable: Observable,
    pub rms: f64,
    pub peak: f64,
    pub correlation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub tau_range: (f64, f64),
    pub entries: Vec<ObservableComparison>,
}

impl ComparisonReport {
    pub fn max_peak(&self) -> f64 {
        self.entries.iter().map(|e| e.peak).fold(0.0, nan_max)
    }

    pub fn get(&self, o: Observable) -> Option<&ObservableComparison> {
        self.entries.iter().find(|e| e.observable == o)
    }
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    let scale = (ma.abs() + mb.abs()).max(1.0);
    let flat = |s: f64| s.sqrt() <= 1e-14 * scale * n.sqrt();
    match (flat(saa), flat(sbb)) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0),
    }
}

/// Compare two series on `a`'s samples inside the overlapping time range.
pub fn compare_series(ta: &[f64], a: &[f64], tb: &[f64], b: &[f64]) -> Result<(f64, f64, f64, (f64, f64))> {
    if ta.is_empty() || tb.is_empty() {
        return Err(Error::InsufficientData("empty series".into()));
    }
    let lo = ta[0].max(tb[0]);
    let hi = ta[ta.len() - 1].min(tb[tb.len() - 1]);
    if hi < lo {
        return Err(Error::InsufficientData(format!("time ranges are disjoint ({lo} > {hi})")));
    }
    let tol = 1e-12 * hi.abs().max(1.0);
    let idx: Vec<usize> = (0..ta.len()).filter(|&i| ta[i] >= lo - tol && ta[i] <= hi + tol).collect();
    let va: Vec<f64> = idx.iter().map(|&i| a[i]).collect();
    let vb: Vec<f64> = idx.iter().map(|&i| interpolate(tb, b, ta[i])).collect();
    let n = va.len() as f64;
    let mut sq = 0.0;
    let mut peak: f64 = 0.0;
    for (x, y) in va.iter().zip(&vb) {
        sq += (x - y).powi(2);
        peak = nan_max(peak, (x - y).abs());
    }
    Ok(((sq / n).sqrt(), peak, correlation(&va, &vb), (lo, hi)))
}

/// Per-observable rms, peak deviation and correlation between two records.
pub fn compare(a: &TrajectoryRecord, b: &TrajectoryRecord, observables: &[Observable]) -> Result<ComparisonReport> {
    let mut entries = Vec::new();
    let mut range = (0.0, 0.0);
    for &o in observables {
        let (rms, peak, corr, r) = compare_series(&a.times, &a.series(o), &b.times, &b.series(o))?;
        range = r;
        entries.push(ObservableComparison { observable: o, rms, peak, correlation: corr });
    }
    Ok(ComparisonReport { tau_range: range, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{lissajous_period, traj_eq12, uniform_grid, AnalyticParams};
    use crate::dynamics::Sample;
    use std::f64::consts::PI;

    #[test]
    fn cosine_peak() {
        let tau = uniform_grid(100.0 * PI, 20001);
        let sig: Vec<f64> = tau.iter().map(|t| (2.0 * t).cos()).collect();
        let peaks = dominant_frequencies(&tau, &sig, 3).unwrap();
        let f = peaks[0].frequency;
        assert!((f - 1.0 / PI).abs() < 1e-3 / PI, "{f}");
        assert!((peaks[0].amplitude - 1.0).abs() < 0.05);
    }

    #[test]
    fn constant_has_no_peaks() {
        let tau = uniform_grid(10.0, 256);
        assert!(dominant_frequencies(&tau, &vec![3.7; 256], 4).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_sampling() {
        let mut tau = uniform_grid(10.0, 128);
        let sig = vec![0.0; 128];
        tau[5] += 0.01;
        assert!(matches!(dominant_frequencies(&tau, &sig, 1), Err(Error::NonUniformSampling(_))));
        assert!(dominant_frequencies(&tau[..32], &sig[..32], 1).is_err());
    }

    #[test]
    fn amplitude_scaling_keeps_frequency() {
        let tau = uniform_grid(50.0, 1000);
        let sig: Vec<f64> = tau.iter().map(|t| (1.37 * t).sin() + 0.3 * (3.1 * t).cos()).collect();
        let big: Vec<f64> = sig.iter().map(|v| 250.0 * v).collect();
        let a = dominant_frequencies(&tau, &sig, 2).unwrap();
        let b = dominant_frequencies(&tau, &big, 2).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p.frequency - q.frequency).abs() < 1e-12);
            assert!((q.amplitude / p.amplitude - 250.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lissajous_spectrum() {
        let varpi: f64 = 1.96;
        let period = lissajous_period(varpi, 5);
        let n = 4 * 1024;
        let tau: Vec<f64> = (0..n).map(|k| k as f64 * 4.0 * period / n as f64).collect();
        let c = traj_eq12(&AnalyticParams::lissajous(varpi), &tau).unwrap();
        let fx = dominant_frequencies(&tau, &c.x, 1).unwrap()[0].frequency;
        let fy = dominant_frequencies(&tau, &c.y, 1).unwrap()[0].frequency;
        assert!((fx - varpi / (2.0 * PI)).abs() < 1e-12);
        let (p, q, err) = rationalize(fx / fy, 20).unwrap();
        assert_eq!((p, q), (7, 5));
        assert!(err < 1e-9);
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(1.4, 20).unwrap(), (7, 5, 0.0));
        assert_eq!(rationalize(1.0, 20).unwrap(), (1, 1, 0.0));
        let (p, q, e) = rationalize(2f64.sqrt(), 5).unwrap();
        assert_eq!((p, q), (7, 5));
        assert!((e - 0.01421).abs() < 1e-5);
        // semiconvergent beats the last convergent here
        assert_eq!(rationalize(PI, 10).unwrap().0, 22);
        assert_eq!(rationalize(0.3, 10).unwrap(), (3, 10, 0.0));
        assert!(rationalize(-1.0, 5).is_err());
    }

    #[test]
    fn closure_examples() {
        let varpi: f64 = 1.96;
        let period = lissajous_period(varpi, 5);
        let tau: Vec<f64> = (0..4096).map(|k| k as f64 * 2.0 * period / 4096.0).collect();
        let c = traj_eq12(&AnalyticParams::lissajous(varpi), &tau).unwrap();
        assert!(closure_metric(&tau, &c.x, &c.y, period).unwrap() < 1e-9);
        assert!(closure_metric(&tau, &c.x, &c.y, period * 1.01).unwrap() > 1e-3);
        assert_eq!(closure_metric(&tau, &c.x, &c.y, 0.0).unwrap(), 0.0);
        assert!(closure_metric(&tau, &c.x, &c.y, 3.0 * period).is_err());
        // translation and rotation leave the metric unchanged
        let (s, co) = (0.7f64.sin(), 0.7f64.cos());
        let xr: Vec<f64> = c.x.iter().zip(&c.y).map(|(x, y)| co * x - s * y + 4.0).collect();
        let yr: Vec<f64> = c.x.iter().zip(&c.y).map(|(x, y)| s * x + co * y - 1.0).collect();
        let a = closure_metric(&tau, &c.x, &c.y, period * 1.01).unwrap();
        let b = closure_metric(&tau, &xr, &yr, period * 1.01).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
    }

    #[test]
    fn diameter_of_square() {
        let x = [0.0, 1.0, 1.0, 0.0, 0.5];
        let y = [0.0, 0.0, 1.0, 1.0, 0.5];
        assert!((diameter(&x, &y) - 2f64.sqrt()).abs() < 1e-15);
    }

    fn record(f: impl Fn(f64) -> f64, n: usize) -> TrajectoryRecord {
        let mut r = TrajectoryRecord::default();
        for k in 0..n {
            let t = k as f64 * 0.1;
            r.push(t, Sample { x: f(t), trace: 1.0, ..Sample::default() }).unwrap();
        }
        r
    }

    #[test]
    fn compare_self_and_shifted() {
        let a = record(|t| t.sin(), 200);
        let rep = compare(&a, &a, &[Observable::X, Observable::Trace]).unwrap();
        assert_eq!(rep.get(Observable::X).unwrap().rms, 0.0);
        assert_eq!(rep.get(Observable::X).unwrap().correlation, 1.0);
        assert_eq!(rep.get(Observable::Trace).unwrap().correlation, 1.0);
        let b = record(|t| t.sin() + 1e-3, 100);
        let rep = compare(&a, &b, &[Observable::X]).unwrap();
        assert!((rep.max_peak() - 1e-3).abs() < 1e-12);
        assert!(rep.tau_range.1 < 10.0);
        let mut far = TrajectoryRecord::default();
        far.push(100.0, Sample::default()).unwrap();
        assert!(compare(&a, &far, &[Observable::X]).is_err());
    }
}
