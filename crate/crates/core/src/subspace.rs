//! Ramanujan subspaces and projections of arbitrary-length signals.
//!
//! The exactly `q`-periodic subspace `S_q` of `R^q` is spanned by the columns
//! of the integer circulant matrix `B_q[i][j] = c_q((i - j) mod q)`, and
//! `P_q = B_q / q` is its orthogonal projector. A length-`N` signal is
//! projected by averaging its length-`q` blocks, projecting the mean with
//! `P_q` and tiling the result back to length `N`. When `q` does not divide
//! `N` the last block is short and each phase is averaged over the samples it
//! actually has (equivalent to zero padding with per-position weights `1/M`
//! and `1/(M-1)`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{periodicity_metric, MetricMode};
use crate::number_theory::{euler_totient, ramanujan_sums, RamanujanSums};
use crate::signal::{energy, Signal};

/// Largest period [`build_basis`] will materialize by default.
pub const DEFAULT_MAX_BASIS_PERIOD: usize = 4096;

/// Dense basis bundle for one period. Intended for inspection and small `q`;
/// projections never build it.
#[derive(Debug, Clone)]
pub struct RamanujanBasis {
    sums: RamanujanSums,
    dimension: usize,
}

impl RamanujanBasis {
    pub fn period(&self) -> usize {
        self.sums.period()
    }

    pub fn sums(&self) -> &RamanujanSums {
        &self.sums
    }

    /// `phi(q)`, the dimension of `S_q`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `B_q[i][j]`.
    pub fn circulant_entry(&self, i: usize, j: usize) -> i64 {
        let q = self.period();
        self.sums.values()[(i + q - j % q) % q]
    }

    /// `P_q[i][j]`.
    pub fn projector_entry(&self, i: usize, j: usize) -> f64 {
        self.circulant_entry(i, j) as f64 / self.period() as f64
    }

    /// Row-major `q x q` integer circulant.
    pub fn circulant(&self) -> Vec<Vec<i64>> {
        let q = self.period();
        (0..q)
            .map(|i| (0..q).map(|j| self.circulant_entry(i, j)).collect())
            .collect()
    }

    /// Row-major `q x q` projector.
    pub fn projector(&self) -> Vec<Vec<f64>> {
        let q = self.period();
        (0..q)
            .map(|i| (0..q).map(|j| self.projector_entry(i, j)).collect())
            .collect()
    }

    /// Trace of `P_q`; equals `phi(q)`.
    pub fn projector_trace(&self) -> f64 {
        self.sums.values()[0] as f64
    }
}

/// One exactly periodic component of a signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicComponent {
    pub period: usize,
    pub samples: Vec<f64>,
    pub energy: f64,
    /// Periodicity metric used to rank this component.
    pub metric: f64,
    /// Pursuit iteration that produced the component (1-based); 0 when the
    /// component was projected on its own.
    pub iteration: usize,
}

pub fn build_basis(q: usize) -> Result<RamanujanBasis> {
    build_basis_with_limit(q, DEFAULT_MAX_BASIS_PERIOD)
}

pub fn build_basis_with_limit(q: usize, limit: usize) -> Result<RamanujanBasis> {
    if q == 0 {
        return Err(Error::ZeroPeriod);
    }
    if q > limit {
        return Err(Error::PeriodTooLarge { period: q, limit });
    }
    Ok(RamanujanBasis {
        sums: ramanujan_sums(q)?,
        dimension: euler_totient(q)?,
    })
}

fn check_period(len: usize, q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::ZeroPeriod);
    }
    if q > len {
        return Err(Error::PeriodExceedsLength { period: q, len });
    }
    Ok(())
}

/// Per-phase means `s[i] = mean{x[m q + i]}` over the samples that exist.
pub(crate) fn phase_means(x: &[f64], q: usize) -> Vec<f64> {
    let mut sums = vec![0.0; q];
    let mut counts = vec![0usize; q];
    for chunk in x.chunks(q) {
        for (i, v) in chunk.iter().enumerate() {
            sums[i] += v;
            counts[i] += 1;
        }
    }
    sums.iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect()
}

/// `P_q s` as a circular correlation of `s` with `c_q`, scaled by `1/q`.
pub(crate) fn apply_projector(sums: &RamanujanSums, s: &[f64]) -> Vec<f64> {
    let q = sums.period();
    let c = sums.values();
    let scale = 1.0 / q as f64;
    (0..q)
        .map(|i| {
            let mut acc = 0.0;
            for (j, sj) in s.iter().enumerate() {
                let k = if i >= j { i - j } else { i + q - j };
                acc += c[k] as f64 * sj;
            }
            acc * scale
        })
        .collect()
}

fn tile(block: &[f64], len: usize) -> Vec<f64> {
    block.iter().copied().cycle().take(len).collect()
}

/// Projection samples into `S_q` using precomputed sums.
pub(crate) fn project_exact_samples(x: &[f64], sums: &RamanujanSums) -> Vec<f64> {
    let q = sums.period();
    let s = phase_means(x, q);
    let block = apply_projector(sums, &s);
    tile(&block, x.len())
}

/// Projects `x` into the exactly `q`-periodic subspace `S_q`.
pub fn project_exact(x: &Signal, q: usize) -> Result<PeriodicComponent> {
    check_period(x.len(), q)?;
    let sums = ramanujan_sums(q)?;
    Ok(project_exact_with(x, &sums))
}

/// [`project_exact`] with caller-provided Ramanujan sums.
pub fn project_exact_with(x: &Signal, sums: &RamanujanSums) -> PeriodicComponent {
    let q = sums.period();
    assert!(
        q >= 1 && q <= x.len(),
        "period {q} out of range for length {}",
        x.len()
    );
    let samples = project_exact_samples(x.samples(), sums);
    let e = energy(&samples);
    PeriodicComponent {
        period: q,
        metric: periodicity_metric(e, q, x.len(), MetricMode::Exact)
            .expect("period validated above"),
        energy: e,
        samples,
        iteration: 0,
    }
}

/// Orthogonal projection into the `q`-periodic subspace `P_q` (per-phase
/// averaging).
pub fn project_periodic(x: &Signal, q: usize) -> Result<PeriodicComponent> {
    check_period(x.len(), q)?;
    let samples = tile(&phase_means(x.samples(), q), x.len());
    let e = energy(&samples);
    Ok(PeriodicComponent {
        period: q,
        metric: periodicity_metric(e, q, x.len(), MetricMode::Exact)?,
        energy: e,
        samples,
        iteration: 0,
    })
}
