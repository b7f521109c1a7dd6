//! Protocol synthesis from a single `n`-dimensional Riccati equation.
//!
//! Two recipes are supported. Both pick a coupling strength `c`, solve
//! `Aᵀ P + P A − κ P B Bᵀ P + λ_N CᵀC + eps·I = 0` with
//! `κ = 2cλ − c²λ³ > 0` evaluated at `λ = λ₂` ([`Method::LowGain`]) or
//! `λ = λ_N` ([`Method::HighGain`]), test `tr(Eᵀ P E) < γ / (N − 1)` and
//! return `K = −c Bᵀ P`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianSpectrum;
use crate::h2::STRICT_MARGIN;
use crate::matkernel::{default_eps, solve_riccati, trace, Matrix};
use crate::network::AgentDynamics;

/// Synthesis recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// `0 < c ≤ 2/(λ₂² + λ₂λ_N + λ_N²)`, Riccati coefficient taken at `λ₂`.
    #[serde(rename = "thm4", alias = "Thm4", alias = "low-gain")]
    LowGain,
    /// `2/(λ₂² + λ₂λ_N + λ_N²) < c < 2/λ_N²`, Riccati coefficient taken at `λ_N`.
    #[serde(rename = "thm5", alias = "Thm5", alias = "high-gain")]
    HighGain,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::LowGain => "thm4",
            Method::HighGain => "thm5",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Admissible coupling strengths; the lower end is always exclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRange {
    pub lower: f64,
    pub upper: f64,
    pub upper_inclusive: bool,
}

impl CouplingRange {
    /// Membership test; an inclusive upper end admits a relative round-off
    /// slack of `1e-12` so that endpoints computed from a numerical spectrum
    /// still accept the exact value.
    pub fn contains(&self, c: f64) -> bool {
        let upper_ok = if self.upper_inclusive {
            c <= self.upper * (1.0 + 1e-12)
        } else {
            c < self.upper
        };
        c > self.lower && upper_ok
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

impl fmt::Display for CouplingRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.upper_inclusive { ']' } else { ')' };
        write!(f, "({}, {}{close}", self.lower, self.upper)
    }
}

/// `2 / (λ₂² + λ₂λ_N + λ_N²)`, the boundary shared by both recipes.
fn split_point(lambda2: f64, lambda_n: f64) -> f64 {
    2.0 / (lambda2 * lambda2 + lambda2 * lambda_n + lambda_n * lambda_n)
}

pub fn coupling_range(method: Method, lambda2: f64, lambda_n: f64) -> Result<CouplingRange> {
    if !(lambda2 > 0.0 && lambda2.is_finite()) {
        return Err(Error::InvalidSpectrum(format!(
            "lambda_2 must be positive, got {lambda2}"
        )));
    }
    if !(lambda_n >= lambda2 && lambda_n.is_finite()) {
        return Err(Error::InvalidSpectrum(format!(
            "lambda_N must satisfy lambda_2 <= lambda_N, got {lambda2} and {lambda_n}"
        )));
    }
    let split = split_point(lambda2, lambda_n);
    Ok(match method {
        Method::LowGain => CouplingRange {
            lower: 0.0,
            upper: split,
            upper_inclusive: true,
        },
        Method::HighGain => CouplingRange {
            lower: split,
            upper: 2.0 / (lambda_n * lambda_n),
            upper_inclusive: false,
        },
    })
}

/// `c²λ³ − 2cλ`, the coefficient of `P B Bᵀ P` in mode `λ`'s Riccati inequality.
pub fn riccati_coefficient(c: f64, lambda: f64) -> f64 {
    c * c * lambda.powi(3) - 2.0 * c * lambda
}

/// Default coupling strength: the inclusive upper end for [`Method::LowGain`],
/// the midpoint for [`Method::HighGain`].
pub fn default_coupling(method: Method, range: &CouplingRange) -> f64 {
    match method {
        Method::LowGain => range.upper,
        Method::HighGain => range.midpoint(),
    }
}

/// Synthesized distributed gain `K = −c Bᵀ P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolGain {
    pub k: Matrix,
    pub c: f64,
    pub p: Matrix,
    pub method: Method,
    /// `tr(Eᵀ P E)`.
    pub trace_value: f64,
    pub gamma: f64,
    /// Riccati shift used to make the inequality strict.
    pub eps: f64,
}

impl ProtocolGain {
    /// `(N − 1)·tr(Eᵀ P E)`, an upper bound on the network cost.
    pub fn cost_bound(&self, nodes: usize) -> f64 {
        (nodes.saturating_sub(1)) as f64 * self.trace_value
    }
}

fn validate_spectrum(spectrum: &LaplacianSpectrum) -> Result<(f64, f64, usize)> {
    let nodes = spectrum.node_count();
    if nodes < 2 {
        return Err(Error::InvalidSpectrum("network needs at least two agents".into()));
    }
    if !spectrum.is_connected() {
        return Err(Error::InvalidSpectrum("lambda_2 is zero; graph is disconnected".into()));
    }
    Ok((spectrum.lambda2(), spectrum.lambda_max(), nodes))
}

struct RiccatiSolution {
    p: Matrix,
    eps: f64,
    trace: f64,
}

fn solve_for_coupling(
    agent: &AgentDynamics,
    method: Method,
    c: f64,
    lambda2: f64,
    lambda_n: f64,
) -> Result<RiccatiSolution> {
    let anchor = match method {
        Method::LowGain => lambda2,
        Method::HighGain => lambda_n,
    };
    let kappa = -riccati_coefficient(c, anchor);
    if !(kappa > 0.0) {
        return Err(Error::RiccatiFailure(Box::new(Error::InvalidArgument(format!(
            "Riccati coefficient {} is not negative at c = {c}",
            -kappa
        )))));
    }
    let bt = &agent.b * kappa.sqrt();
    let q = agent.c.transpose() * &agent.c * lambda_n;
    let eps = default_eps(&q);
    let p = solve_riccati(&agent.a, &bt, &q, eps).map_err(|e| Error::RiccatiFailure(Box::new(e)))?;
    let trace = trace(&(agent.e.transpose() * &p * &agent.e));
    Ok(RiccatiSolution { p, eps, trace })
}

/// Synthesizes `K = −c Bᵀ P`.
///
/// `c` defaults to [`default_coupling`]. Fails with
/// [`Error::GammaInfeasible`] reporting `(N − 1)·tr(Eᵀ P E)` when the trace
/// condition `tr(Eᵀ P E) < γ/(N − 1)` does not hold.
pub fn design_protocol(
    agent: &AgentDynamics,
    spectrum: &LaplacianSpectrum,
    gamma: f64,
    method: Method,
    c: Option<f64>,
) -> Result<ProtocolGain> {
    agent.check_standard_form()?;
    let (lambda2, lambda_n, nodes) = validate_spectrum(spectrum)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let range = coupling_range(method, lambda2, lambda_n)?;
    let c = match c {
        Some(c) if !range.contains(c) => {
            return Err(Error::COutOfRange {
                c,
                range: range.to_string(),
            })
        }
        Some(c) => c,
        None => default_coupling(method, &range),
    };
    let sol = solve_for_coupling(agent, method, c, lambda2, lambda_n)?;
    let modes = (nodes - 1) as f64;
    if sol.trace >= (gamma / modes) * (1.0 - STRICT_MARGIN) {
        return Err(Error::GammaInfeasible {
            gamma,
            achieved: modes * sol.trace,
        });
    }
    Ok(ProtocolGain {
        k: -(agent.b.transpose() * &sol.p) * c,
        c,
        p: sol.p,
        method,
        trace_value: sol.trace,
        gamma,
        eps: sol.eps,
    })
}

/// One grid point of [`sweep_feasibility`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub c: f64,
    /// `tr(Eᵀ P E)`, `None` when the Riccati solve failed at this `c`.
    pub trace_value: Option<f64>,
    pub feasible: bool,
}

/// Evaluates the trace condition on a uniform grid over the admissible `c`.
///
/// The exclusive lower end is replaced by the first interior grid point
/// (`lower + Δ/2`); an exclusive upper end likewise by `upper − Δ/2`, with `Δ`
/// the grid spacing. An inclusive upper end is sampled exactly.
pub fn sweep_feasibility(
    agent: &AgentDynamics,
    spectrum: &LaplacianSpectrum,
    gamma: f64,
    method: Method,
    grid_points: usize,
) -> Result<Vec<SweepPoint>> {
    agent.check_standard_form()?;
    let (lambda2, lambda_n, nodes) = validate_spectrum(spectrum)?;
    if grid_points < 2 {
        return Err(Error::InvalidArgument("sweep needs at least two grid points".into()));
    }
    let range = coupling_range(method, lambda2, lambda_n)?;
    let grid = coupling_grid(&range, grid_points);
    let modes = (nodes - 1) as f64;
    Ok(grid
        .into_iter()
        .map(|c| match solve_for_coupling(agent, method, c, lambda2, lambda_n) {
            Ok(sol) => SweepPoint {
                c,
                trace_value: Some(sol.trace),
                feasible: sol.trace < (gamma / modes) * (1.0 - STRICT_MARGIN),
            },
            Err(_) => SweepPoint {
                c,
                trace_value: None,
                feasible: false,
            },
        })
        .collect())
}

fn coupling_grid(range: &CouplingRange, points: usize) -> Vec<f64> {
    let width = range.upper - range.lower;
    if range.upper_inclusive {
        // points at lower + width·k/points, k = 1..=points
        (1..=points)
            .map(|k| {
                if k == points {
                    range.upper
                } else {
                    range.lower + width * k as f64 / points as f64
                }
            })
            .collect()
    } else {
        // cell midpoints of `points` equal cells
        (0..points)
            .map(|k| range.lower + width * (k as f64 + 0.5) / points as f64)
            .collect()
    }
}
