//! Period-domain summaries of a decomposition and the periodic similarity
//! between two signals.
//!
//! All vectors here are period-indexed with 1-based labels: element `i`
//! belongs to period `i + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pursuit::Decomposition;
use crate::signal::energy;

/// Energy of the exactly `q`-periodic part for `q = 1..=Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicEnergySpectrum {
    pub max_period: usize,
    pub energies: Vec<f64>,
}

impl PeriodicEnergySpectrum {
    pub fn energy(&self, q: usize) -> f64 {
        self.energies[q - 1]
    }

    /// Periods sorted by decreasing energy (ties to the smaller period),
    /// zero-energy periods omitted.
    pub fn ranked_periods(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.max_period)
            .filter(|&i| self.energies[i] > 0.0)
            .collect();
        idx.sort_by(|&a, &b| {
            self.energies[b]
                .total_cmp(&self.energies[a])
                .then(a.cmp(&b))
        });
        idx.into_iter().map(|i| i + 1).collect()
    }
}

/// Norm ratios `||x_q|| / ||x||` for `q = 1..=Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicEnergyHistogram {
    pub max_period: usize,
    pub values: Vec<f64>,
}

impl PeriodicEnergyHistogram {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroPeriod);
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "histogram entry {v} is not a nonnegative number"
            )));
        }
        Ok(PeriodicEnergyHistogram {
            max_period: values.len(),
            values,
        })
    }

    /// Builds `sqrt(energies[q]) / sqrt(total_energy)`.
    pub fn from_energies(energies: &[f64], total_energy: f64) -> Result<Self> {
        if total_energy <= 0.0 {
            return Err(Error::ZeroEnergy);
        }
        let norm = total_energy.sqrt();
        Self::new(energies.iter().map(|e| e.max(0.0).sqrt() / norm).collect())
    }

    pub fn value(&self, q: usize) -> f64 {
        self.values[q - 1]
    }

    pub fn norm(&self) -> f64 {
        energy(&self.values).sqrt()
    }
}

/// Periodic energy spectrum of a decomposition. Components sharing a period
/// are summed sample-wise before their energy is taken.
pub fn pes(d: &Decomposition, max_period: usize) -> Result<PeriodicEnergySpectrum> {
    if max_period == 0 {
        return Err(Error::ZeroPeriod);
    }
    let mut merged: Vec<Option<Vec<f64>>> = vec![None; max_period];
    for c in &d.components {
        if c.period > max_period {
            return Err(Error::InvalidArgument(format!(
                "component period {} exceeds spectrum range {max_period}",
                c.period
            )));
        }
        match &mut merged[c.period - 1] {
            Some(acc) => acc.iter_mut().zip(&c.samples).for_each(|(a, v)| *a += v),
            slot => *slot = Some(c.samples.clone()),
        }
    }
    Ok(PeriodicEnergySpectrum {
        max_period,
        energies: merged
            .into_iter()
            .map(|m| m.map_or(0.0, |s| energy(&s)))
            .collect(),
    })
}

pub fn energy_histogram(d: &Decomposition, max_period: usize) -> Result<PeriodicEnergyHistogram> {
    if d.input_energy <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let spectrum = pes(d, max_period)?;
    PeriodicEnergyHistogram::from_energies(&spectrum.energies, d.input_energy)
}

fn check_same_range(a: &PeriodicEnergyHistogram, b: &PeriodicEnergyHistogram) -> Result<()> {
    if a.max_period != b.max_period {
        return Err(Error::MismatchedPeriods {
            left: a.max_period,
            right: b.max_period,
        });
    }
    Ok(())
}

fn half_squared_distance(a: &PeriodicEnergyHistogram, b: &PeriodicEnergyHistogram) -> f64 {
    0.5 * a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
}

/// Hellinger distance on norm-ratio histograms: `0.5 * ||a - b||^2`.
pub fn hellinger_distance(a: &PeriodicEnergyHistogram, b: &PeriodicEnergyHistogram) -> Result<f64> {
    check_same_range(a, b)?;
    Ok(half_squared_distance(a, b))
}

/// Cosine Hellinger distance `0.5 * ||a - b||^2 / (||a|| ||b||)`.
pub fn cosine_hellinger_distance(
    a: &PeriodicEnergyHistogram,
    b: &PeriodicEnergyHistogram,
) -> Result<f64> {
    check_same_range(a, b)?;
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroNormHistogram);
    }
    Ok(half_squared_distance(a, b) / (na * nb))
}

/// `1 - cosine_hellinger_distance(a, b)`. Lies in `[0, 1]` when both
/// histograms have equal norm; it is not clamped otherwise.
pub fn periodic_similarity(
    a: &PeriodicEnergyHistogram,
    b: &PeriodicEnergyHistogram,
) -> Result<f64> {
    Ok(1.0 - cosine_hellinger_distance(a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pursuit::{frsp, PursuitConfig};
    use crate::signal::Signal;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn hist(v: &[f64]) -> PeriodicEnergyHistogram {
        PeriodicEnergyHistogram::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pes_and_histogram_of_constant() {
        let x = Signal::new(vec![1.0; 12]).unwrap();
        let d = frsp(&x, &PursuitConfig::new(6)).unwrap();
        let s = pes(&d, 6).unwrap();
        assert!((s.energy(1) - 12.0).abs() < 1e-9);
        assert!(s.energies[1..].iter().all(|&e| e == 0.0));
        let h = energy_histogram(&d, 6).unwrap();
        assert!((h.value(1) - 1.0).abs() < 1e-12);
        assert!(h.values[1..].iter().all(|&v| v == 0.0));
        assert!(pes(&d, 0).is_err());
    }

    #[test]
    fn pes_of_zero_signal_is_empty_and_histogram_rejects_it() {
        let x = Signal::zeros(12).unwrap();
        let d = frsp(&x, &PursuitConfig::new(6)).unwrap();
        assert!(d.components.is_empty());
        assert!(pes(&d, 6).unwrap().energies.iter().all(|&e| e == 0.0));
        assert_eq!(energy_histogram(&d, 6), Err(Error::ZeroEnergy));
    }

    #[test]
    fn pes_rejects_small_range() {
        let x = Signal::new(
            (0..30)
                .map(|i| if i % 5 == 0 { 1.0 } else { 0.0 })
                .collect(),
        )
        .unwrap();
        let d = frsp(&x, &PursuitConfig::new(10)).unwrap();
        assert!(d.periods().contains(&5));
        assert!(pes(&d, 4).is_err());
    }

    #[test]
    fn repeated_periods_merge_by_samples() {
        use crate::subspace::PeriodicComponent;
        let comp = |samples: Vec<f64>| PeriodicComponent {
            period: 2,
            energy: energy(&samples),
            samples,
            metric: 0.0,
            iteration: 1,
        };
        let d = Decomposition {
            algorithm: crate::pursuit::Algorithm::Frsp,
            input_energy: 4.0,
            components: vec![
                comp(vec![1.0, -1.0, 1.0, -1.0]),
                comp(vec![-1.0, 1.0, -1.0, 1.0]),
            ],
            residual: Signal::new(vec![1.0; 4]).unwrap(),
            residual_energy_trace: vec![4.0, 4.0, 4.0],
            energy_defects: vec![],
            representation_condition_met: true,
            degenerate_stop: false,
        };
        // opposite components cancel; summing energies would give 8
        assert_eq!(pes(&d, 2).unwrap().energy(2), 0.0);
    }

    #[test]
    fn equal_energy_mixture_histogram() {
        // alternating and constant parts with equal energy, N multiple of 2
        let x: Vec<f64> = (0..24)
            .map(|i| 1.0 + if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let d = frsp(&Signal::new(x).unwrap(), &PursuitConfig::new(4)).unwrap();
        let h = energy_histogram(&d, 4).unwrap();
        assert!((h.value(1) - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((h.value(2) - FRAC_1_SQRT_2).abs() < 1e-12);
        let total: f64 = h.values.iter().map(|v| v * v).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_examples() {
        let a = hist(&[1.0, 0.0]);
        let b = hist(&[0.0, 1.0]);
        let c = hist(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert_eq!(hellinger_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hellinger_distance(&a, &b).unwrap(), 1.0);
        let expect = 0.5 * ((1.0 - FRAC_1_SQRT_2).powi(2) + 0.5);
        assert!((hellinger_distance(&a, &c).unwrap() - expect).abs() < 1e-15);
        assert_eq!(
            hellinger_distance(&a, &hist(&[1.0, 0.0, 0.0])),
            Err(Error::MismatchedPeriods { left: 2, right: 3 })
        );
    }

    #[test]
    fn similarity_examples() {
        let a = hist(&[0.6, 0.8, 0.0]);
        assert_eq!(periodic_similarity(&a, &a).unwrap(), 1.0);
        let e1 = hist(&[1.0, 0.0]);
        let e2 = hist(&[0.0, 1.0]);
        assert_eq!(periodic_similarity(&e1, &e2).unwrap(), 0.0);
        assert_eq!(
            periodic_similarity(&e1, &hist(&[0.0, 0.0])),
            Err(Error::ZeroNormHistogram)
        );
    }

    #[test]
    fn histogram_rejects_bad_entries() {
        assert!(PeriodicEnergyHistogram::new(vec![]).is_err());
        assert!(PeriodicEnergyHistogram::new(vec![-0.1]).is_err());
        assert!(PeriodicEnergyHistogram::from_energies(&[1.0], 0.0).is_err());
    }

    fn unit_histogram() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 8).prop_filter_map("nonzero", |v| {
            let n = energy(&v).sqrt();
            (n > 1e-6).then(|| v.iter().map(|x| x / n).collect())
        })
    }

    proptest! {
        #[test]
        fn similarity_is_symmetric_and_bounded(a in unit_histogram(), b in unit_histogram()) {
            let (a, b) = (hist(&a), hist(&b));
            let sab = periodic_similarity(&a, &b).unwrap();
            prop_assert_eq!(sab, periodic_similarity(&b, &a).unwrap());
            prop_assert_eq!(hellinger_distance(&a, &b).unwrap(), hellinger_distance(&b, &a).unwrap());
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&sab));
            prop_assert_eq!(periodic_similarity(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(hellinger_distance(&a, &a).unwrap(), 0.0);
        }
    }
}
