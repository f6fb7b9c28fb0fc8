//! Integer arithmetic behind the Ramanujan sums: prime-power factorization,
//! Euler's totient, divisor enumeration and the sums `c_q(n)` themselves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime-power factorization `q = p_1^a_1 * ... * p_k^a_k` with `p_1 < ... < p_k`.
///
/// The factor list is empty exactly when the factorized integer is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerFactorization {
    factors: Vec<(usize, u32)>,
}

impl PrimePowerFactorization {
    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    /// Multiplies the prime powers back together.
    pub fn product(&self) -> usize {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// The Ramanujan sums `c_q(0), ..., c_q(q-1)` for one period `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamanujanSums {
    period: usize,
    values: Vec<i64>,
}

impl RamanujanSums {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `c_q(n)` for any integer lag, reduced mod `q`.
    pub fn at(&self, n: usize) -> i64 {
        self.values[n % self.period]
    }
}

fn nonzero(q: usize) -> Result<()> {
    if q == 0 {
        Err(Error::ZeroArgument)
    } else {
        Ok(())
    }
}

/// Trial division up to `sqrt(q)`.
pub fn factorize(q: usize) -> Result<PrimePowerFactorization> {
    nonzero(q)?;
    let mut factors = Vec::new();
    let mut rest = q;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut exp = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                exp += 1;
            }
            factors.push((p, exp));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimePowerFactorization { factors })
}

/// Euler's totient `phi(q) = q * prod(1 - 1/p)`.
pub fn euler_totient(q: usize) -> Result<usize> {
    let f = factorize(q)?;
    Ok(f.factors.iter().fold(q, |acc, &(p, _)| acc / p * (p - 1)))
}

/// All positive divisors of `q` in ascending order.
pub fn divisors(q: usize) -> Result<Vec<usize>> {
    nonzero(q)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= q {
        if q.is_multiple_of(d) {
            small.push(d);
            if d * d != q {
                large.push(q / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// `Phi(Q) = sum_{q=1..Q} phi(q)`, the total dimension of the first `Q`
/// Ramanujan subspaces.
pub fn totient_summatory(max_period: usize) -> Result<usize> {
    nonzero(max_period)?;
    (1..=max_period).map(euler_totient).sum()
}

/// Smallest `Q` with `Phi(Q) >= len`.
pub fn min_period_for_representation(len: usize) -> Result<usize> {
    nonzero(len)?;
    let mut total = 0;
    let mut q = 0;
    while total < len {
        q += 1;
        total += euler_totient(q)?;
    }
    Ok(q)
}

/// `c_{p^m}(n)` for a prime power. With `m = 1` this reduces to the prime case.
fn prime_power_sum(p: usize, m: u32, n: usize) -> i64 {
    let lower = p.pow(m - 1);
    let full = lower * p;
    if n.is_multiple_of(full) {
        (lower * (p - 1)) as i64
    } else if n.is_multiple_of(lower) {
        -(lower as i64)
    } else {
        0
    }
}

/// Computes `c_q(n)` for `n = 0..q` by factorizing `q`, evaluating each
/// prime-power factor in closed form and multiplying the coprime factors.
pub fn ramanujan_sums(q: usize) -> Result<RamanujanSums> {
    let f = factorize(q)?;
    let values = (0..q)
        .map(|n| {
            f.factors
                .iter()
                .map(|&(p, m)| prime_power_sum(p, m, n))
                .product()
        })
        .collect();
    Ok(RamanujanSums { period: q, values })
}
