//! Sigmoid derivative calculus.
//!
//! The n-th derivative of the logistic function is a polynomial in the
//! logistic itself whose coefficients are signed Stirling numbers of the
//! second kind:
//!
//! ```text
//! σ⁽ⁿ⁾(x) = Σ_{k=1}^{n+1} (-1)^{k+1} (k-1)! S(n+1, k) σ(x)^k
//! ```
//!
//! From that expansion one gets a radius `δ` such that every derivative up to
//! order `n` is below a threshold `ε` whenever `|x| > δ`. That radius defines
//! the active gradient zone of a sigmoid neuron.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest derivative order accepted by [`sigmoid_derivative`] and the zone
/// radius helpers. `(n + 1)!` stays exactly representable well past this.
pub const MAX_DERIVATIVE_ORDER: u32 = 20;

/// Largest `m` for which [`stirling2`] is tabulated. `S(25, k)` still fits a `u64`.
pub const MAX_STIRLING_M: u32 = 25;

fn stirling_table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let size = MAX_STIRLING_M as usize + 1;
        let mut table = vec![vec![0u64; size]; size];
        table[0][0] = 1;
        for m in 0..size - 1 {
            for n in 1..=m + 1 {
                // S(m+1, n) = n S(m, n) + S(m, n-1)
                table[m + 1][n] = n as u64 * table[m][n] + table[m][n - 1];
            }
        }
        table
    })
}

/// Stirling number of the second kind `S(m, n)`: the number of ways to split
/// a set of `m` labelled objects into `n` non-empty blocks.
///
/// Follows the usual boundary conventions `S(0, 0) = 1` and `S(m, 0) = 0`
/// for `m ≥ 1`. Computed exactly from the integer recurrence.
pub fn stirling2(m: u32, n: u32) -> Result<u64> {
    if n > m {
        return Err(Error::StirlingOrder { m, n });
    }
    if m > MAX_STIRLING_M {
        return Err(Error::OrderTooLarge(m));
    }
    Ok(stirling_table()[m as usize][n as usize])
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Logistic function, evaluated without overflow for large `|x|`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `n`-th derivative of the logistic function via the Stirling expansion.
pub fn sigmoid_derivative(n: u32, x: f64) -> Result<f64> {
    if n > MAX_DERIVATIVE_ORDER {
        return Err(Error::OrderTooLarge(n));
    }
    // The alternating sum cancels badly as sigma -> 1, so evaluate at -|x|
    // and reflect.
    let s = sigmoid(-x.abs());
    let mut power = 1.0;
    let mut total = 0.0;
    for k in 1..=n + 1 {
        power *= s;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let coeff = factorial(k - 1) * stirling2(n + 1, k)? as f64;
        total += sign * coeff * power;
    }
    if x > 0.0 && n.is_multiple_of(2) {
        total = -total;
    }
    Ok(total)
}

/// Threshold and derivative order defining an active gradient zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneRadiusSpec {
    epsilon: f64,
    derivative_order: u32,
}

impl ZoneRadiusSpec {
    pub fn new(epsilon: f64, derivative_order: u32) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Config(format!(
                "zone epsilon must lie in (0, 1/2), got {epsilon}"
            )));
        }
        if derivative_order == 0 {
            return Err(Error::Config("derivative order must be at least 1".into()));
        }
        if derivative_order > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooLarge(derivative_order));
        }
        Ok(Self {
            epsilon,
            derivative_order,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn derivative_order(&self) -> u32 {
        self.derivative_order
    }
}

/// Scaled threshold `ε_n = ε / ((n+1)! · max_k S(n+1, k))`.
pub fn epsilon_n(spec: &ZoneRadiusSpec) -> Result<f64> {
    let n = spec.derivative_order;
    if n > MAX_DERIVATIVE_ORDER {
        return Err(Error::OrderTooLarge(n));
    }
    let mut max_s = 0u64;
    for k in 1..=n + 1 {
        max_s = max_s.max(stirling2(n + 1, k)?);
    }
    Ok(spec.epsilon / (factorial(n + 1) * max_s as f64))
}

/// Radius `δ = ln((1 - ε_n) / ε_n)` of the active gradient zone in
/// preactivation units.
pub fn delta_epsilon(spec: &ZoneRadiusSpec) -> Result<f64> {
    delta_from_epsilon_n(epsilon_n(spec)?)
}

/// Radius for an already-scaled threshold.
pub fn delta_from_epsilon_n(eps_n: f64) -> Result<f64> {
    if !(eps_n > 0.0 && eps_n < 0.5) {
        return Err(Error::ZoneUndefined(eps_n));
    }
    Ok(((1.0 - eps_n) / eps_n).ln())
}
