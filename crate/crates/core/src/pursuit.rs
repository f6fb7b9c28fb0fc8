//! Greedy Ramanujan subspace pursuit.
//!
//! Each iteration ranks every candidate period `q = 1..=Q` by its periodicity
//! metric on the current residual, projects the residual into the winning
//! `S_q` and subtracts the projection. [`rsp`] ranks with true projection
//! energies; [`frsp`] estimates all energies from one autocorrelation of the
//! residual and projects only once per iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{
    autocorrelation, check_max_period, divisor_table, metric_table_from_acf, AcfMethod, AcfPlan,
    MetricMode, MetricTable, FAST_ACF_THRESHOLD,
};
use crate::number_theory::{ramanujan_sums, totient_summatory, RamanujanSums};
use crate::signal::{energy, Signal};
use crate::subspace::{project_exact_samples, PeriodicComponent};

pub const DEFAULT_MAX_ITERATIONS: usize = 10;
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Rsp,
    #[default]
    Frsp,
}

/// Pursuit parameters. Ties in the metric always go to the smallest period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PursuitConfig {
    pub max_period: usize,
    pub max_iterations: usize,
    /// Stop once `||r||^2 / ||x||^2` falls to this value or below.
    pub residual_tolerance: f64,
    pub metric_mode: MetricMode,
    /// Autocorrelation route used by FRSP.
    pub acf_method: AcfMethod,
}

impl PursuitConfig {
    pub fn new(max_period: usize) -> Self {
        PursuitConfig {
            max_period,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
            metric_mode: MetricMode::Exact,
            acf_method: AcfMethod::Auto,
        }
    }

    pub fn with_iterations(mut self, k: usize) -> Self {
        self.max_iterations = k;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.residual_tolerance = tol;
        self
    }

    pub fn with_metric_mode(mut self, mode: MetricMode) -> Self {
        self.metric_mode = mode;
        self
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        check_max_period(len, self.max_period)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.residual_tolerance) {
            return Err(Error::InvalidConfig(format!(
                "residual_tolerance must lie in [0, 1), got {}",
                self.residual_tolerance
            )));
        }
        Ok(())
    }
}

/// Output of a pursuit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub algorithm: Algorithm,
    pub input_energy: f64,
    /// Components in extraction order. A period may appear more than once.
    pub components: Vec<PeriodicComponent>,
    pub residual: Signal,
    /// `||r^k||^2` for `k = 0..=iterations`; the first entry is `||x||^2`.
    pub residual_energy_trace: Vec<f64>,
    /// Per-iteration `||r^k||^2 - ||x_q||^2 - ||r^{k+1}||^2`. Zero (up to
    /// rounding) whenever the selected period divides the signal length.
    pub energy_defects: Vec<f64>,
    /// Whether `Phi(Q) >= N`.
    pub representation_condition_met: bool,
    /// Set when the pursuit stopped because every metric was zero.
    pub degenerate_stop: bool,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.residual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn periods(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.period).collect()
    }

    pub fn residual_energy(&self) -> f64 {
        *self
            .residual_energy_trace
            .last()
            .expect("trace starts with input energy")
    }

    pub fn relative_residual_energy(&self) -> f64 {
        if self.input_energy == 0.0 {
            0.0
        } else {
            self.residual_energy() / self.input_energy
        }
    }

    /// Sum of all components plus the residual.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = self.residual.samples().to_vec();
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(&c.samples) {
                *o += v;
            }
        }
        out
    }
}

/// Result of ranking one metric table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub period: usize,
    /// Every metric was zero; `period` is 1 by convention.
    pub degenerate: bool,
}

/// Argmax of `metrics` (index `q - 1`), ties to the smallest period.
pub fn select_from_metrics(metrics: &[f64]) -> Result<Selection> {
    if metrics.is_empty() {
        return Err(Error::InvalidArgument("empty metric table".into()));
    }
    let mut best = 0;
    for (i, &m) in metrics.iter().enumerate().skip(1) {
        if m > metrics[best] {
            best = i;
        }
    }
    Ok(Selection {
        period: best + 1,
        degenerate: metrics.iter().all(|&m| m == 0.0),
    })
}

pub fn select_period(table: &MetricTable) -> Result<Selection> {
    select_from_metrics(&table.metrics)
}

/// Exact Ramanujan subspace pursuit.
pub fn rsp(x: &Signal, cfg: &PursuitConfig) -> Result<Decomposition> {
    rsp_with_execution(x, cfg, Execution::default())
}

/// [`rsp`] with an explicit strategy for the per-period projections.
pub fn rsp_with_execution(
    x: &Signal,
    cfg: &PursuitConfig,
    exec: Execution,
) -> Result<Decomposition> {
    pursue(x, cfg, Algorithm::Rsp, exec)
}

/// Fast Ramanujan subspace pursuit.
pub fn frsp(x: &Signal, cfg: &PursuitConfig) -> Result<Decomposition> {
    pursue(x, cfg, Algorithm::Frsp, Execution::Sequential)
}

pub fn decompose(x: &Signal, cfg: &PursuitConfig, algorithm: Algorithm) -> Result<Decomposition> {
    pursue(x, cfg, algorithm, Execution::default())
}

fn pursue(
    x: &Signal,
    cfg: &PursuitConfig,
    algorithm: Algorithm,
    exec: Execution,
) -> Result<Decomposition> {
    let len = x.len();
    cfg.validate(len)?;
    let q_max = cfg.max_period;
    let sums: Vec<RamanujanSums> = (1..=q_max).map(ramanujan_sums).collect::<Result<_>>()?;
    let representation_condition_met = totient_summatory(q_max)? >= len;

    let (mut plan, proper_divisors) = match algorithm {
        Algorithm::Frsp => {
            let fast = match cfg.acf_method {
                AcfMethod::Fast => true,
                AcfMethod::Direct => false,
                AcfMethod::Auto => len >= FAST_ACF_THRESHOLD,
            };
            (fast.then(|| AcfPlan::new(len)), divisor_table(q_max))
        }
        Algorithm::Rsp => (None, Vec::new()),
    };

    let input_energy = x.energy();
    let mut residual = x.samples().to_vec();
    let mut residual_energy = input_energy;
    let mut trace = vec![input_energy];
    let mut defects = Vec::new();
    let mut components = Vec::new();
    let mut degenerate_stop = false;

    for iteration in 1..=cfg.max_iterations {
        if residual_energy == 0.0 || residual_energy <= cfg.residual_tolerance * input_energy {
            break;
        }
        let table = match algorithm {
            Algorithm::Rsp => {
                let energies = exec.map_range(0..q_max, |i| {
                    energy(&project_exact_samples(&residual, &sums[i]))
                });
                MetricTable::from_exact_energies(energies, len, cfg.metric_mode)
            }
            Algorithm::Frsp => {
                let acf = match plan.as_mut() {
                    Some(p) => p.compute(&residual),
                    None => autocorrelation(&Signal::from_raw(residual.clone()), AcfMethod::Direct),
                };
                metric_table_from_acf(&acf, len, q_max, cfg.metric_mode, &proper_divisors)
            }
        };
        let selection = select_period(&table)?;
        if selection.degenerate {
            degenerate_stop = true;
            break;
        }
        let q = selection.period;
        let samples = project_exact_samples(&residual, &sums[q - 1]);
        for (r, v) in residual.iter_mut().zip(&samples) {
            *r -= v;
        }
        let component_energy = energy(&samples);
        let next = energy(&residual);
        defects.push(residual_energy - component_energy - next);
        residual_energy = next;
        trace.push(next);
        components.push(PeriodicComponent {
            period: q,
            samples,
            energy: component_energy,
            metric: table.metric(q),
            iteration,
        });
    }

    Ok(Decomposition {
        algorithm,
        input_energy,
        components,
        residual: Signal::from_raw(residual),
        residual_energy_trace: trace,
        energy_defects: defects,
        representation_condition_met,
        degenerate_stop,
    })
}
