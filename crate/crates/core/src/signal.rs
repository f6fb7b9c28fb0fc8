use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, non-empty sequence of real samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(Signal(samples))
    }

    /// All-zero signal of length `len`.
    pub fn zeros(len: usize) -> Result<Self> {
        Signal::new(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.0
    }

    pub fn energy(&self) -> f64 {
        energy(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub(crate) fn from_raw(samples: Vec<f64>) -> Self {
        debug_assert!(!samples.is_empty());
        Signal(samples)
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Signal::new(samples)
    }
}

impl From<Signal> for Vec<f64> {
    fn from(signal: Signal) -> Self {
        signal.0
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn energy(samples: &[f64]) -> f64 {
    samples.iter().map(|v| v * v).sum()
}
