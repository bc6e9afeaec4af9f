//! Benchmark problems.
//!
//! Each problem is a scalar PDE on a rectangle `[x_lo, x_hi] × [t_lo, t_hi]`
//! with an initial profile, Dirichlet-style values on both spatial edges and
//! a closed-form traveling-wave solution.
//!
//! | name           | residual                      | exact solution                                |
//! |----------------|-------------------------------|-----------------------------------------------|
//! | `advection`    | `u_t + c u_x`                 | `exp(-(x - c t)²)`                            |
//! | `fisher`       | `u_t - u_xx - u (1 - u)`      | `(1 + exp(x/√6 - 5t/6))^-2`                   |
//! | `zeldovich`    | `u_t - u_xx - u² (1 - u)`     | `1 / (1 + exp((x - t/√2)/√2))`                |
//! | `sine-plateau` | `u_t`                         | `1`, `sin(x/2)` or `-1` depending on `x`      |
//!
//! The last one is a static profile with flat plateaus around a localized
//! sine ramp, used to exercise initial-condition fitting.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::calculus::sigmoid;
use crate::net::{EvalJet, JetAdjoint};
use crate::sampler::Point;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Domain {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        let d = Self { x_lo, x_hi, t_lo, t_hi };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_lo, self.x_hi, self.t_lo, self.t_hi].iter().all(|v| v.is_finite());
        if !finite || self.x_lo >= self.x_hi || self.t_lo >= self.t_hi {
            return Err(Error::Config(format!(
                "domain must satisfy x_lo < x_hi and t_lo < t_hi, got [{}, {}] × [{}, {}]",
                self.x_lo, self.x_hi, self.t_lo, self.t_hi
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn duration(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn area(&self) -> f64 {
        self.width() * self.duration()
    }

    /// Strictly inside the open rectangle.
    pub fn contains_interior(&self, p: Point) -> bool {
        p.x > self.x_lo && p.x < self.x_hi && p.t > self.t_lo && p.t < self.t_hi
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.x_lo, self.x_hi, self.t_lo, self.t_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    Advection { speed: f64 },
    Fisher,
    Zeldovich,
    SinePlateau,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeProblem {
    kind: ProblemKind,
    domain: Domain,
}

const FISHER_A: f64 = 0.408_248_290_463_863; // √(1/6)
const FISHER_B: f64 = 5.0 / 6.0;

/// Front speed of the Zeldovich benchmark.
pub const ZELDOVICH_SPEED: f64 = FRAC_1_SQRT_2;

pub fn advection_problem(c: f64, domain: Domain) -> PdeProblem {
    PdeProblem {
        kind: ProblemKind::Advection { speed: c },
        domain,
    }
}

pub fn fisher_problem(domain: Domain) -> PdeProblem {
    PdeProblem {
        kind: ProblemKind::Fisher,
        domain,
    }
}

pub fn zeldovich_problem(domain: Domain) -> PdeProblem {
    PdeProblem {
        kind: ProblemKind::Zeldovich,
        domain,
    }
}

pub fn sine_plateau_problem(domain: Domain) -> PdeProblem {
    PdeProblem {
        kind: ProblemKind::SinePlateau,
        domain,
    }
}

/// Looks a problem up by its registry name. `speed` only applies to
/// `advection` (default 1).
pub fn problem_by_name(name: &str, domain: Domain, speed: Option<f64>) -> Result<PdeProblem> {
    domain.validate()?;
    match name {
        "advection" => Ok(advection_problem(speed.unwrap_or(1.0), domain)),
        "fisher" => Ok(fisher_problem(domain)),
        "zeldovich" => Ok(zeldovich_problem(domain)),
        "sine-plateau" => Ok(sine_plateau_problem(domain)),
        other => Err(Error::Config(format!("unknown problem `{other}`"))),
    }
}

impl PdeProblem {
    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ProblemKind::Advection { .. } => "advection",
            ProblemKind::Fisher => "fisher",
            ProblemKind::Zeldovich => "zeldovich",
            ProblemKind::SinePlateau => "sine-plateau",
        }
    }

    /// Highest input derivative the residual reads.
    pub fn order(&self) -> u32 {
        match self.kind {
            ProblemKind::Advection { .. } | ProblemKind::SinePlateau => 1,
            ProblemKind::Fisher | ProblemKind::Zeldovich => 2,
        }
    }

    pub fn residual(&self, j: &EvalJet) -> f64 {
        match self.kind {
            ProblemKind::Advection { speed } => j.u_t + speed * j.u_x,
            ProblemKind::Fisher => j.u_t - j.u_xx - j.u * (1.0 - j.u),
            ProblemKind::Zeldovich => j.u_t - j.u_xx - j.u * j.u * (1.0 - j.u),
            ProblemKind::SinePlateau => j.u_t,
        }
    }

    /// `∂residual/∂(u, u_x, u_t, u_xx)`.
    pub fn residual_partials(&self, j: &EvalJet) -> JetAdjoint {
        match self.kind {
            ProblemKind::Advection { speed } => JetAdjoint {
                u: 0.0,
                u_x: speed,
                u_t: 1.0,
                u_xx: 0.0,
            },
            ProblemKind::Fisher => JetAdjoint {
                u: 2.0 * j.u - 1.0,
                u_x: 0.0,
                u_t: 1.0,
                u_xx: -1.0,
            },
            ProblemKind::Zeldovich => JetAdjoint {
                u: 3.0 * j.u * j.u - 2.0 * j.u,
                u_x: 0.0,
                u_t: 1.0,
                u_xx: -1.0,
            },
            ProblemKind::SinePlateau => JetAdjoint {
                u_t: 1.0,
                ..JetAdjoint::default()
            },
        }
    }

    pub fn initial_condition(&self, x: f64) -> f64 {
        match self.kind {
            ProblemKind::Advection { .. } => (-x * x).exp(),
            ProblemKind::Fisher => {
                let q = sigmoid(-FISHER_A * x);
                q * q
            }
            ProblemKind::Zeldovich => sigmoid(-x * FRAC_1_SQRT_2),
            ProblemKind::SinePlateau => sine_plateau(x),
        }
    }

    pub fn left_value(&self, _t: f64) -> f64 {
        match self.kind {
            ProblemKind::Advection { .. } => 0.0,
            ProblemKind::Fisher | ProblemKind::Zeldovich | ProblemKind::SinePlateau => 1.0,
        }
    }

    pub fn right_value(&self, _t: f64) -> f64 {
        match self.kind {
            ProblemKind::Advection { .. } | ProblemKind::Fisher | ProblemKind::Zeldovich => 0.0,
            ProblemKind::SinePlateau => -1.0,
        }
    }

    pub fn has_exact(&self) -> bool {
        true
    }

    pub fn exact(&self, x: f64, t: f64) -> Option<f64> {
        self.exact_jet(x, t).map(|j| j.u)
    }

    /// Exact solution with hand-derived partials.
    pub fn exact_jet(&self, x: f64, t: f64) -> Option<EvalJet> {
        Some(match self.kind {
            ProblemKind::Advection { speed } => {
                let s = x - speed * t;
                let u = (-s * s).exp();
                EvalJet {
                    u,
                    u_x: -2.0 * s * u,
                    u_t: 2.0 * speed * s * u,
                    u_xx: (4.0 * s * s - 2.0) * u,
                }
            }
            ProblemKind::Fisher => {
                // u = q², q = 1/(1 + e^ξ), ξ = a x - b t
                let q = sigmoid(-(FISHER_A * x - FISHER_B * t));
                let du = -2.0 * q * q * (1.0 - q);
                let d2u = q * q * (1.0 - q) * (4.0 - 6.0 * q);
                EvalJet {
                    u: q * q,
                    u_x: FISHER_A * du,
                    u_t: -FISHER_B * du,
                    u_xx: FISHER_A * FISHER_A * d2u,
                }
            }
            ProblemKind::Zeldovich => {
                // u = q, q = 1/(1 + e^ξ), ξ = (x - v t)/√2
                let q = sigmoid(-(x - ZELDOVICH_SPEED * t) * FRAC_1_SQRT_2);
                let dq = -q * (1.0 - q);
                let d2q = q * (1.0 - q) * (1.0 - 2.0 * q);
                EvalJet {
                    u: q,
                    u_x: FRAC_1_SQRT_2 * dq,
                    u_t: -ZELDOVICH_SPEED * FRAC_1_SQRT_2 * dq,
                    u_xx: 0.5 * d2q,
                }
            }
            ProblemKind::SinePlateau => {
                let inside = x.abs() <= 3.0 * PI;
                EvalJet {
                    u: sine_plateau(x),
                    u_x: if inside { 0.5 * (0.5 * x).cos() } else { 0.0 },
                    u_t: 0.0,
                    u_xx: if inside { -0.25 * (0.5 * x).sin() } else { 0.0 },
                }
            }
        })
    }

    /// Front speed of the exact traveling wave.
    pub fn wave_speed(&self) -> f64 {
        match self.kind {
            ProblemKind::Advection { speed } => speed,
            ProblemKind::Fisher => FISHER_B / FISHER_A,
            ProblemKind::Zeldovich => ZELDOVICH_SPEED,
            ProblemKind::SinePlateau => 0.0,
        }
    }
}

fn sine_plateau(x: f64) -> f64 {
    if x <= -3.0 * PI {
        1.0
    } else if x >= 3.0 * PI {
        -1.0
    } else {
        (0.5 * x).sin()
    }
}

/// Maps the dimensional Fisher variables `(z, τ, v)` to the dimensionless
/// ones via `x = √(ρ/D) z`, `t = ρ τ`, `u = K v`.
pub fn rescale_fisher(d: f64, rho: f64, k: f64, z: f64, tau: f64, v: f64) -> Result<(f64, f64, f64)> {
    if !(d > 0.0 && rho > 0.0 && k > 0.0) {
        return Err(Error::Config(format!(
            "Fisher coefficients must be positive, got D={d}, rho={rho}, K={k}"
        )));
    }
    Ok(((rho / d).sqrt() * z, rho * tau, k * v))
}

/// Largest `|residual|` of the exact solution's analytic jet over `points`.
pub fn exact_residual_check(problem: &PdeProblem, points: &[Point]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let jet = problem
            .exact_jet(p.x, p.t)
            .ok_or_else(|| Error::NoExactSolution(problem.name().into()))?;
        worst = worst.max(problem.residual(&jet).abs());
    }
    Ok(worst)
}
