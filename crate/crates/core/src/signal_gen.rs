//! Seeded test signals: the three-cosine mixture, random periodic mixtures
//! and white Gaussian noise at a prescribed SNR.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{energy, Signal};

/// Periods of the three-cosine mixture.
pub const THREE_COSINE_PERIODS: [usize; 3] = [17, 36, 45];

/// `x[n] = cos(2 pi n / 17) + cos(2 pi n / 36) + cos(2 pi n / 45)`.
pub fn three_cosine(len: usize) -> Result<Signal> {
    let longest = THREE_COSINE_PERIODS[2];
    if len < longest {
        return Err(Error::PeriodExceedsLength {
            period: longest,
            len,
        });
    }
    Ok(Signal::from_raw(
        (0..len)
            .map(|n| {
                THREE_COSINE_PERIODS
                    .iter()
                    .map(|&q| (2.0 * PI * n as f64 / q as f64).cos())
                    .sum()
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub period: usize,
    /// One period of samples; `block.len() == period`.
    pub block: Vec<f64>,
}

impl MixtureComponent {
    pub fn tiled(&self, len: usize) -> Vec<f64> {
        self.block.iter().copied().cycle().take(len).collect()
    }
}

/// Everything needed to replay a random mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<MixtureComponent>,
    pub length: usize,
    pub seed: u64,
}

impl MixtureSpec {
    pub fn render(&self) -> Result<Signal> {
        let mut out = vec![0.0; self.length];
        for c in &self.components {
            if c.block.len() != c.period || c.period == 0 || c.period > self.length {
                return Err(Error::InvalidArgument(format!(
                    "component with period {} has a block of length {} (signal length {})",
                    c.period,
                    c.block.len(),
                    self.length
                )));
            }
            for (o, v) in out.iter_mut().zip(c.tiled(self.length)) {
                *o += v;
            }
        }
        Signal::new(out)
    }

    /// Components merged by period and tiled to full length, in ascending
    /// period order.
    pub fn merged_components(&self) -> Vec<(usize, Vec<f64>)> {
        let mut merged: Vec<(usize, Vec<f64>)> = Vec::new();
        for c in &self.components {
            let tiled = c.tiled(self.length);
            match merged.iter_mut().find(|(q, _)| *q == c.period) {
                Some((_, acc)) => acc.iter_mut().zip(&tiled).for_each(|(a, v)| *a += v),
                None => merged.push((c.period, tiled)),
            }
        }
        merged.sort_by_key(|(q, _)| *q);
        merged
    }
}

/// Sum of `num_components` tiled random blocks. Periods are uniform in
/// `[lo, hi]`; block samples are uniform in `[-1, 1]`.
pub fn random_mixture(
    num_components: usize,
    period_range: (usize, usize),
    len: usize,
    seed: u64,
) -> Result<(Signal, MixtureSpec)> {
    let (lo, hi) = period_range;
    if num_components == 0 {
        return Err(Error::InvalidArgument(
            "a mixture needs at least one component".into(),
        ));
    }
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "invalid period range [{lo}, {hi}]"
        )));
    }
    if hi > len {
        return Err(Error::PeriodExceedsLength { period: hi, len });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let components = (0..num_components)
        .map(|_| {
            let period = rng.random_range(lo..=hi);
            let block = (0..period).map(|_| rng.random_range(-1.0..=1.0)).collect();
            MixtureComponent { period, block }
        })
        .collect();
    let spec = MixtureSpec {
        components,
        length: len,
        seed,
    };
    Ok((spec.render()?, spec))
}

/// Adds zero-mean Gaussian noise scaled so that the realized SNR
/// `10 log10(||x||^2 / ||n||^2)` equals `snr_db`. `f64::INFINITY` leaves `x`
/// untouched.
pub fn add_white_noise(x: &Signal, snr_db: f64, seed: u64) -> Result<Signal> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(format!("invalid SNR {snr_db} dB")));
    }
    let signal_energy = x.energy();
    if signal_energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    if snr_db == f64::INFINITY {
        return Ok(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..x.len()).map(|_| rng.sample(StandardNormal)).collect();
    let noise_energy = energy(&noise);
    if noise_energy == 0.0 {
        return Err(Error::InvalidArgument("degenerate noise draw".into()));
    }
    let target = signal_energy / 10f64.powf(snr_db / 10.0);
    let scale = (target / noise_energy).sqrt();
    Signal::new(
        x.samples()
            .iter()
            .zip(&noise)
            .map(|(s, n)| s + scale * n)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::project_exact;

    #[test]
    fn three_cosine_basics() {
        let x = three_cosine(3060).unwrap();
        assert_eq!(x.len(), 3060);
        assert!((x.samples()[0] - 3.0).abs() < 1e-15);
        assert!(three_cosine(44).is_err());
        assert!(three_cosine(45).is_ok());
    }

    #[test]
    fn cosine_components_lie_in_their_subspaces() {
        let n = 3060;
        for q in THREE_COSINE_PERIODS {
            let c: Vec<f64> = (0..n)
                .map(|i| (2.0 * PI * i as f64 / q as f64).cos())
                .collect();
            let p = project_exact(&Signal::new(c.clone()).unwrap(), q).unwrap();
            let err: f64 = c.iter().zip(&p.samples).map(|(a, b)| (a - b).powi(2)).sum();
            assert!(err.sqrt() <= 1e-9 * energy(&c).sqrt(), "q={q}");
        }
    }

    #[test]
    fn mixture_is_deterministic() {
        let (a, sa) = random_mixture(4, (1, 100), 500, 42).unwrap();
        let (b, sb) = random_mixture(4, (1, 100), 500, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        let (c, _) = random_mixture(4, (1, 100), 500, 43).unwrap();
        assert_ne!(a, c);
        assert_eq!(sa.render().unwrap(), a);
        assert!(sa
            .components
            .iter()
            .all(|c| (1..=100).contains(&c.period) && c.block.len() == c.period));
        assert!(sa
            .components
            .iter()
            .flat_map(|c| &c.block)
            .all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn single_component_mixture_is_periodic() {
        let (x, spec) = random_mixture(1, (5, 5), 20, 9).unwrap();
        assert_eq!(spec.components[0].period, 5);
        for n in 0..15 {
            assert_eq!(x.samples()[n], x.samples()[n + 5]);
        }
    }

    #[test]
    fn mixture_argument_errors() {
        assert!(random_mixture(4, (1, 100), 99, 0).is_err());
        assert!(random_mixture(0, (1, 10), 99, 0).is_err());
        assert!(random_mixture(1, (0, 10), 99, 0).is_err());
        assert!(random_mixture(1, (11, 10), 99, 0).is_err());
    }

    #[test]
    fn noise_hits_requested_snr() {
        let x = three_cosine(500).unwrap();
        assert_eq!(add_white_noise(&x, f64::INFINITY, 1).unwrap(), x);
        for snr in [-20.0, -3.5, 0.0, 10.0, 40.0] {
            let y = add_white_noise(&x, snr, 7).unwrap();
            let n: Vec<f64> = y
                .samples()
                .iter()
                .zip(x.samples())
                .map(|(a, b)| a - b)
                .collect();
            let realized = 10.0 * (x.energy() / energy(&n)).log10();
            assert!(
                (realized - snr).abs() < 0.01,
                "snr={snr} realized={realized}"
            );
            if snr == 0.0 {
                assert!((energy(&n) - x.energy()).abs() <= 1e-6 * x.energy());
            }
        }
        assert_eq!(
            add_white_noise(&Signal::zeros(10).unwrap(), 0.0, 1),
            Err(Error::ZeroEnergy)
        );
        assert!(add_white_noise(&x, f64::NAN, 1).is_err());
    }

    #[test]
    fn noise_is_seeded() {
        let x = three_cosine(600).unwrap();
        let a = add_white_noise(&x, 0.0, 1).unwrap();
        assert_eq!(a, add_white_noise(&x, 0.0, 1).unwrap());
        let b = add_white_noise(&x, 0.0, 2).unwrap();
        let na: Vec<f64> = a
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(p, q)| p - q)
            .collect();
        let nb: Vec<f64> = b
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(p, q)| p - q)
            .collect();
        let corr = na.iter().zip(&nb).map(|(p, q)| p * q).sum::<f64>()
            / (energy(&na) * energy(&nb)).sqrt();
        assert!(corr.abs() < 0.1, "corr={corr}");
    }
}
