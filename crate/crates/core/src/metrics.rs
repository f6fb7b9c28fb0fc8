//! Autocorrelation, the periodicity metric and the EPM procedure that
//! estimates the energy of every exactly periodic component from a single
//! autocorrelation pass.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_theory::divisors;
use crate::signal::Signal;

/// Signals at least this long use the FFT autocorrelation under [`AcfMethod::Auto`].
pub const FAST_ACF_THRESHOLD: usize = 256;

/// Unnormalized autocorrelation `values[k] = sum_j x[j] x[j + k]`, `k = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Acf {
    values: Vec<f64>,
}

impl Acf {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lag(&self, k: usize) -> f64 {
        self.values[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcfMethod {
    /// Direct `O(N^2)` summation.
    Direct,
    /// Zero-padded FFT, `O(N log N)`.
    Fast,
    /// `Fast` for `N >= FAST_ACF_THRESHOLD`, `Direct` below.
    #[default]
    Auto,
}

impl AcfMethod {
    fn resolve(self, len: usize) -> AcfMethod {
        match self {
            AcfMethod::Auto if len >= FAST_ACF_THRESHOLD => AcfMethod::Fast,
            AcfMethod::Auto => AcfMethod::Direct,
            m => m,
        }
    }
}

/// Which form of the periodicity metric ranks candidate periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricMode {
    /// `(N + q) / (2q) * energy`
    #[default]
    Exact,
    /// `energy / (2q)`, the large-`N` form.
    Approximate,
}

/// Reusable FFT plans for autocorrelations of one signal length.
pub struct AcfPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl AcfPlan {
    pub fn new(len: usize) -> Self {
        // >= 2N so circular wrap-around never reaches a linear lag
        let fft_len = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        AcfPlan {
            len,
            forward,
            inverse,
            buffer: vec![Complex64::default(); fft_len],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    pub fn compute(&mut self, x: &[f64]) -> Acf {
        assert_eq!(x.len(), self.len, "plan built for a different length");
        let fft_len = self.buffer.len();
        for (b, v) in self
            .buffer
            .iter_mut()
            .zip(x.iter().chain(std::iter::repeat(&0.0)))
        {
            *b = Complex64::new(*v, 0.0);
        }
        self.forward
            .process_with_scratch(&mut self.buffer, &mut self.scratch);
        for b in self.buffer.iter_mut() {
            *b = Complex64::new(b.norm_sqr(), 0.0);
        }
        self.inverse
            .process_with_scratch(&mut self.buffer, &mut self.scratch);
        let scale = 1.0 / fft_len as f64;
        Acf {
            values: self.buffer[..self.len]
                .iter()
                .map(|c| c.re * scale)
                .collect(),
        }
    }
}

fn acf_direct(x: &[f64]) -> Acf {
    let n = x.len();
    let values = (0..n)
        .map(|k| x[..n - k].iter().zip(&x[k..]).map(|(a, b)| a * b).sum())
        .collect();
    Acf { values }
}

pub fn autocorrelation(x: &Signal, method: AcfMethod) -> Acf {
    match method.resolve(x.len()) {
        AcfMethod::Fast => AcfPlan::new(x.len()).compute(x.samples()),
        _ => acf_direct(x.samples()),
    }
}

/// Periodicity metric of an exactly `q`-periodic component of a length-`len`
/// signal, computed from the component's energy.
pub fn periodicity_metric(energy: f64, q: usize, len: usize, mode: MetricMode) -> Result<f64> {
    if q == 0 {
        return Err(Error::ZeroPeriod);
    }
    Ok(match mode {
        MetricMode::Exact => (len + q) as f64 / (2 * q) as f64 * energy,
        MetricMode::Approximate => energy / (2 * q) as f64,
    })
}

/// Maximum-likelihood estimate of the energy of the `q`-periodic part of the
/// signal whose autocorrelation is `acf`:
/// `(q/N) (acf[0] + 2 sum_{l=1}^{M-1} acf[l q])` with `M = floor(N/q)`,
/// clamped at zero.
pub fn mle_periodic_energy(acf: &Acf, q: usize, len: usize) -> Result<f64> {
    if q == 0 {
        return Err(Error::ZeroPeriod);
    }
    if q > len {
        return Err(Error::PeriodExceedsLength { period: q, len });
    }
    if acf.len() != len {
        return Err(Error::InvalidArgument(format!(
            "autocorrelation has {} lags, expected {len}",
            acf.len()
        )));
    }
    Ok(mle_unchecked(acf, q, len))
}

fn mle_unchecked(acf: &Acf, q: usize, len: usize) -> f64 {
    let blocks = len / q;
    let tail: f64 = (1..blocks).map(|l| acf.values[l * q]).sum();
    let e = q as f64 / len as f64 * (acf.values[0] + 2.0 * tail);
    e.max(0.0)
}

/// Per-period energies and metrics for `q = 1..=Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub max_period: usize,
    pub mode: MetricMode,
    /// Index `q - 1` holds the estimated energy of the exactly `q`-periodic part.
    pub exact_energies: Vec<f64>,
    /// Index `q - 1` holds the MLE energy of the `q`-periodic part.
    pub periodic_energies: Vec<f64>,
    /// Index `q - 1` holds the periodicity metric for period `q`.
    pub metrics: Vec<f64>,
}

impl MetricTable {
    /// Builds a table from already known exact energies (used by RSP).
    pub fn from_exact_energies(energies: Vec<f64>, len: usize, mode: MetricMode) -> Self {
        let metrics = energies
            .iter()
            .enumerate()
            .map(|(i, &e)| periodicity_metric(e, i + 1, len, mode).expect("q >= 1"))
            .collect();
        MetricTable {
            max_period: energies.len(),
            mode,
            periodic_energies: Vec::new(),
            exact_energies: energies,
            metrics,
        }
    }

    pub fn exact_energy(&self, q: usize) -> f64 {
        self.exact_energies[q - 1]
    }

    pub fn metric(&self, q: usize) -> f64 {
        self.metrics[q - 1]
    }
}

/// EPM with the default metric mode and ACF method.
pub fn estimate_metric_table(x: &Signal, max_period: usize) -> Result<MetricTable> {
    estimate_metric_table_with(x, max_period, MetricMode::Exact, AcfMethod::Auto)
}

pub fn estimate_metric_table_with(
    x: &Signal,
    max_period: usize,
    mode: MetricMode,
    method: AcfMethod,
) -> Result<MetricTable> {
    check_max_period(x.len(), max_period)?;
    let acf = autocorrelation(x, method);
    let divs = divisor_table(max_period);
    Ok(metric_table_from_acf(
        &acf,
        x.len(),
        max_period,
        mode,
        &divs,
    ))
}

pub(crate) fn check_max_period(len: usize, max_period: usize) -> Result<()> {
    if max_period == 0 {
        return Err(Error::ZeroPeriod);
    }
    if max_period > len {
        return Err(Error::PeriodExceedsLength {
            period: max_period,
            len,
        });
    }
    Ok(())
}

/// Proper divisors (`d < q`) of every `q` in `1..=max_period`, index `q - 1`.
pub(crate) fn divisor_table(max_period: usize) -> Vec<Vec<usize>> {
    (1..=max_period)
        .map(|q| {
            let mut d = divisors(q).expect("q >= 1");
            d.pop();
            d
        })
        .collect()
}

/// Divisor recursion: the exact energy at `q` is the `q`-periodic MLE energy
/// minus the exact energies already assigned to the proper divisors of `q`.
/// Negative estimates are clamped to zero before they feed later periods.
pub(crate) fn metric_table_from_acf(
    acf: &Acf,
    len: usize,
    max_period: usize,
    mode: MetricMode,
    proper_divisors: &[Vec<usize>],
) -> MetricTable {
    let mut periodic = Vec::with_capacity(max_period);
    let mut exact: Vec<f64> = Vec::with_capacity(max_period);
    for q in 1..=max_period {
        let p = mle_unchecked(acf, q, len);
        let below: f64 = proper_divisors[q - 1].iter().map(|&d| exact[d - 1]).sum();
        periodic.push(p);
        exact.push((p - below).max(0.0));
    }
    let metrics = exact
        .iter()
        .enumerate()
        .map(|(i, &e)| periodicity_metric(e, i + 1, len, mode).expect("q >= 1"))
        .collect();
    MetricTable {
        max_period,
        mode,
        exact_energies: exact,
        periodic_energies: periodic,
        metrics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{project_exact, project_periodic};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sig(v: Vec<f64>) -> Signal {
        Signal::new(v).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn acf_examples() {
        for m in [AcfMethod::Direct, AcfMethod::Fast] {
            let a = autocorrelation(&sig(vec![1.0; 4]), m);
            for (v, e) in a.values().iter().zip([4.0, 3.0, 2.0, 1.0]) {
                assert!((v - e).abs() < 1e-12);
            }
            let a = autocorrelation(&sig(vec![1.0, 0.0, 0.0]), m);
            for (v, e) in a.values().iter().zip([1.0, 0.0, 0.0]) {
                assert!((v - e).abs() < 1e-12);
            }
            let a = autocorrelation(&sig(vec![1.0, 2.0]), m);
            for (v, e) in a.values().iter().zip([5.0, 2.0]) {
                assert!((v - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fast_and_direct_acf_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 3, 17, 255, 256, 511, 1000] {
            let x = sig((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
            let d = autocorrelation(&x, AcfMethod::Direct);
            let f = autocorrelation(&x, AcfMethod::Fast);
            let scale = d.lag(0);
            for (a, b) in d.values().iter().zip(f.values()) {
                assert!((a - b).abs() <= 1e-8 * scale, "n={n}");
            }
            assert!(rel_close(d.lag(0), x.energy(), 1e-9));
        }
    }

    #[test]
    fn metric_examples() {
        assert_eq!(
            periodicity_metric(12.0, 1, 12, MetricMode::Exact).unwrap(),
            78.0
        );
        // ACF-sum definition for ones(12), q = 1: sum of 12..1
        let acf_sum: f64 = autocorrelation(&sig(vec![1.0; 12]), AcfMethod::Direct)
            .values()
            .iter()
            .sum();
        assert_eq!(acf_sum, 78.0);
        assert_eq!(
            periodicity_metric(0.0, 5, 30, MetricMode::Exact).unwrap(),
            0.0
        );
        assert_eq!(
            periodicity_metric(3.5, 9, 9, MetricMode::Exact).unwrap(),
            3.5
        );
        assert_eq!(
            periodicity_metric(8.0, 2, 100, MetricMode::Approximate).unwrap(),
            2.0
        );
        assert_eq!(
            periodicity_metric(1.0, 0, 10, MetricMode::Exact),
            Err(Error::ZeroPeriod)
        );
    }

    #[test]
    fn mle_examples() {
        for n in [1, 7, 12, 100] {
            let acf = autocorrelation(&sig(vec![1.0; n]), AcfMethod::Direct);
            assert!(rel_close(
                mle_periodic_energy(&acf, 1, n).unwrap(),
                n as f64,
                1e-12
            ));
        }
        let alt: Vec<f64> = (0..20)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let acf = autocorrelation(&sig(alt), AcfMethod::Direct);
        assert!(mle_periodic_energy(&acf, 1, 20).unwrap().abs() < 1e-12);
        assert!(mle_periodic_energy(&acf, 21, 20).is_err());
        assert!(mle_periodic_energy(&acf, 0, 20).is_err());
    }

    #[test]
    fn mle_matches_periodic_projection_on_divisor_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let q = rng.random_range(1..=30);
            let n = q * rng.random_range(1..=8);
            let x = sig((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
            let acf = autocorrelation(&x, AcfMethod::Direct);
            let mle = mle_periodic_energy(&acf, q, n).unwrap();
            let proj = project_periodic(&x, q).unwrap().energy;
            assert!(rel_close(mle, proj, 1e-9), "q={q} n={n} {mle} {proj}");
        }
    }

    #[test]
    fn metric_table_examples() {
        let t = estimate_metric_table(&sig(vec![1.0; 12]), 6).unwrap();
        let expect = [12.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (q, e) in (1..=6).zip(expect) {
            let oracle = project_exact(&sig(vec![1.0; 12]), q).unwrap().energy;
            assert!((t.exact_energy(q) - e).abs() < 1e-9);
            assert!((oracle - e).abs() < 1e-9);
        }
        assert_eq!(t.exact_energies[0], t.periodic_energies[0]);

        let alt: Vec<f64> = (0..12)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let t = estimate_metric_table(&sig(alt), 4).unwrap();
        let best = (1..=4)
            .max_by(|&a, &b| t.metric(a).total_cmp(&t.metric(b)))
            .unwrap();
        assert_eq!(best, 2);

        assert!(estimate_metric_table(&sig(vec![1.0; 5]), 6).is_err());
        assert!(estimate_metric_table(&sig(vec![1.0; 5]), 0).is_err());
    }

    #[test]
    fn metric_table_matches_projection_energies_on_lcm_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 2520;
        for _ in 0..10 {
            let x = sig((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
            let t = estimate_metric_table(&x, 10).unwrap();
            for q in 1..=10 {
                let e = project_exact(&x, q).unwrap().energy;
                assert!(rel_close(t.exact_energy(q), e, 1e-6), "q={q}");
            }
        }
    }

    proptest! {
        #[test]
        fn metrics_scale_quadratically(
            samples in prop::collection::vec(-1.0f64..1.0, 40..120),
            c in 0.1f64..10.0,
        ) {
            let x = sig(samples.clone());
            let y = sig(samples.iter().map(|v| v * c).collect());
            let tx = estimate_metric_table(&x, 20).unwrap();
            let ty = estimate_metric_table(&y, 20).unwrap();
            let scale = tx.metrics.iter().cloned().fold(0.0, f64::max);
            for (a, b) in tx.metrics.iter().zip(&ty.metrics) {
                prop_assert!((a * c * c - b).abs() <= 1e-9 * scale * c * c + 1e-12);
            }
        }
    }
}
