//! H2 performance of a single LTI system `(Ā, C̄, Ē)`: exact Lyapunov cost,
//! matrix-exponential quadrature oracle, Lyapunov-inequality certificates and
//! Riccati-based suboptimal state feedback.

use crate::error::{Error, Result};
use crate::matkernel::{
    check_finite, default_eps, expm, inf_norm, is_hurwitz, max_abs, solve_lyapunov, solve_riccati, sym_eig,
    symmetrize, trace, Matrix,
};

/// Tolerance for the standard-form conditions `DᵀC = 0`, `DᵀD = I`.
pub const STANDARD_FORM_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a certificate matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Relative strictness margin for the Lyapunov and trace inequalities.
pub const STRICT_MARGIN: f64 = 1e-12;

/// `ẋ = Ā x + Ē d`, `z = C̄ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceTriple {
    pub a: Matrix,
    pub c: Matrix,
    pub e: Matrix,
}

impl PerformanceTriple {
    pub fn new(a: Matrix, c: Matrix, e: Matrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "state matrix must be square, got {}x{}",
                n,
                a.ncols()
            )));
        }
        if c.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "output matrix has {} columns, expected {n}",
                c.ncols()
            )));
        }
        if e.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "disturbance matrix has {} rows, expected {n}",
                e.nrows()
            )));
        }
        check_finite(&a, "state matrix")?;
        check_finite(&c, "output matrix")?;
        check_finite(&e, "disturbance matrix")?;
        Ok(PerformanceTriple { a, c, e })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// `C̄ᵀ C̄`.
    pub fn output_weight(&self) -> Matrix {
        self.c.transpose() * &self.c
    }
}

/// Data certifying `J < γ` through a positive semidefinite `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostCertificate {
    pub p: Matrix,
    pub gamma: f64,
    /// `γ − tr(Ēᵀ P Ē)`.
    pub slack: f64,
    /// Largest eigenvalue of `Āᵀ P + P Ā + C̄ᵀ C̄`.
    pub lyap_margin: f64,
}

impl CostCertificate {
    pub fn trace(&self) -> f64 {
        self.gamma - self.slack
    }
}

/// Observability Gramian `Y` with `Āᵀ Y + Y Ā + C̄ᵀ C̄ = 0`.
fn cost_gramian(sys: &PerformanceTriple) -> Result<Matrix> {
    if !is_hurwitz(&sys.a) {
        return Err(Error::NotStable);
    }
    solve_lyapunov(&sys.a, &sys.output_weight())
}

/// `J = tr(Ēᵀ Y Ē)` where `Y` solves `Āᵀ Y + Y Ā + C̄ᵀ C̄ = 0`.
pub fn exact_cost(sys: &PerformanceTriple) -> Result<f64> {
    let y = cost_gramian(sys)?;
    Ok(trace(&(sys.e.transpose() * y * &sys.e)).max(0.0))
}

/// Horizon `40 / r` with decay-rate estimate `r = 1 / (2‖Y₀‖)`, where
/// `Āᵀ Y₀ + Y₀ Ā + I = 0`.
pub fn default_horizon(sys: &PerformanceTriple) -> Result<f64> {
    decay_horizon(&sys.a)
}

pub(crate) fn decay_horizon(a: &Matrix) -> Result<f64> {
    if !is_hurwitz(a) {
        return Err(Error::NotStable);
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(1.0);
    }
    let y0 = solve_lyapunov(a, &Matrix::identity(n, n))?;
    let norm = sym_eig(&y0)?.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok(40.0 * 2.0 * norm)
}

/// Panel count keeping `h·‖Ā‖_∞ ≤ 0.1`, clamped to `[2000, 200000]`.
pub fn default_steps(sys: &PerformanceTriple, horizon: f64) -> usize {
    steps_for(&sys.a, horizon)
}

pub(crate) fn steps_for(a: &Matrix, horizon: f64) -> usize {
    let want = (horizon * inf_norm(a) * 10.0).ceil();
    (want as usize).clamp(2000, 200_000)
}

/// Composite Simpson quadrature of `‖C̄ e^{Āt} Ē‖_F²` over `[0, horizon]`.
///
/// `steps` is rounded up to an even panel count.
pub fn quadrature_cost(sys: &PerformanceTriple, horizon: f64, steps: usize) -> Result<f64> {
    if !is_hurwitz(&sys.a) {
        return Err(Error::NotStable);
    }
    if !(horizon > 0.0 && horizon.is_finite()) || steps == 0 {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs a positive horizon and step count, got {horizon} and {steps}"
        )));
    }
    Ok(simpson_energy(&sys.a, &sys.c, &sys.e, horizon, steps, None))
}

/// Simpson rule for `∫ ‖C e^{At} M₀‖_F² dt`, propagating `M_k = e^{Ah} M_{k−1}`.
/// `project` is applied to every propagated state block when given.
pub(crate) fn simpson_energy(
    a: &Matrix,
    c: &Matrix,
    e: &Matrix,
    horizon: f64,
    steps: usize,
    project: Option<&Matrix>,
) -> f64 {
    let panels = steps + steps % 2;
    let h = horizon / panels as f64;
    let step = expm(a, h);
    let mut state = match project {
        Some(pr) => pr * e,
        None => e.clone(),
    };
    let mut sum = 0.0;
    for k in 0..=panels {
        let out = c * &state;
        let f = out.norm_squared();
        let weight = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * f;
        state = &step * &state;
        if let Some(pr) = project {
            state = pr * state;
        }
    }
    sum * h / 3.0
}

/// Finest step is `horizon / 2^(LADDER_TOP + LADDER_DEPTH)`.
const LADDER_TOP: u32 = 8;
const LADDER_DEPTH: u32 = 24;

/// Adaptive Simpson rule for `∫₀^horizon ‖C e^{At} M₀‖_F² dt`.
///
/// Each step of length `H` compares Simpson on `H/2` and `H/4` sub-panels,
/// accepts the Richardson-corrected value when the difference is below the
/// local share of `rtol`, and doubles or halves `H`. Step lengths are powers
/// of two times the finest step, and a step only grows from a point aligned
/// to the larger length, so the last step lands exactly on `horizon`.
pub(crate) fn adaptive_simpson_energy(
    a: &Matrix,
    c: &Matrix,
    e: &Matrix,
    horizon: f64,
    rtol: f64,
    project: Option<&Matrix>,
) -> f64 {
    let finest = horizon / 2f64.powi((LADDER_TOP + LADDER_DEPTH) as i32);
    let total_units: u64 = 1 << (LADDER_TOP + LADDER_DEPTH);
    let apply = |m: Matrix| match project {
        Some(pr) => pr * m,
        None => m,
    };
    let energy = |m: &Matrix| (c * m).norm_squared();
    // quarter-step propagators, indexed by level
    let mut quarter: Vec<Option<Matrix>> = vec![None; (LADDER_TOP + LADDER_DEPTH + 1) as usize];

    // start where h·‖A‖ ≈ 0.1
    let norm = inf_norm(a).max(f64::MIN_POSITIVE);
    let mut level = LADDER_DEPTH;
    while level > 2 && finest * (1u64 << level) as f64 * norm > 0.4 {
        level -= 1;
    }

    let mut state = apply(e.clone());
    let mut f0 = energy(&state);
    let mut units: u64 = 0;
    let mut total = 0.0;
    while units < total_units {
        let span = finest * (1u64 << level) as f64;
        let g: &Matrix = quarter[level as usize].get_or_insert_with(|| expm(a, span / 4.0));
        let mut states = Vec::with_capacity(4);
        let mut cur = state.clone();
        for _ in 0..4 {
            cur = apply(g * &cur);
            states.push(cur.clone());
        }
        let f: Vec<f64> = states.iter().map(energy).collect();
        let coarse = span / 6.0 * (f0 + 4.0 * f[1] + f[3]);
        let fine = span / 12.0 * (f0 + 4.0 * f[0] + 2.0 * f[1] + 4.0 * f[2] + f[3]);
        let err = (fine - coarse).abs() / 15.0;
        let local = rtol * (fine + (total + fine) * span / horizon);
        if err <= local || level == 0 {
            total += fine + (fine - coarse) / 15.0;
            units += 1u64 << level;
            state = states.pop().unwrap_or(state);
            f0 = f[3];
            let wider = 1u64 << (level + 1);
            if err * 32.0 < local && level < LADDER_TOP + LADDER_DEPTH && units.is_multiple_of(wider) && units + wider <= total_units {
                level += 1;
            }
        } else {
            level -= 1;
        }
    }
    total.max(0.0)
}

/// Checks `Āᵀ P + P Ā + C̄ᵀ C̄ < 0` and `tr(Ēᵀ P Ē) < γ` with explicit margins.
///
/// Acceptance proves `Ā` Hurwitz and `J < γ`.
pub fn certify_cost(sys: &PerformanceTriple, p: &Matrix, gamma: f64) -> Result<CostCertificate> {
    let n = sys.state_dim();
    if p.nrows() != n || p.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "certificate must be {n}x{n}, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    let p_eig = sym_eig(p)?;
    if let Some(&min) = p_eig.values.as_slice().first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
    }
    let p = symmetrize(p);
    let weight = sys.output_weight();
    let lyap = sys.a.transpose() * &p + &p * &sys.a + &weight;
    let lyap_margin = sym_eig(&symmetrize(&lyap))?
        .values
        .as_slice()
        .last()
        .copied()
        .unwrap_or(f64::NEG_INFINITY);
    let threshold = -STRICT_MARGIN * max_abs(&weight);
    if lyap_margin >= threshold {
        return Err(Error::RejectedLyapunov {
            margin: lyap_margin,
            threshold,
        });
    }
    let tr = trace(&(sys.e.transpose() * &p * &sys.e));
    let slack = gamma - tr;
    if slack <= STRICT_MARGIN * gamma.abs() || !slack.is_finite() {
        return Err(Error::RejectedTrace { trace: tr, gamma });
    }
    Ok(CostCertificate {
        p,
        gamma,
        slack,
        lyap_margin,
    })
}

/// Verifies `DᵀC = 0` and `DᵀD = I` within [`STANDARD_FORM_TOL`].
pub fn check_standard_form(c: &Matrix, d: &Matrix) -> Result<()> {
    if c.nrows() != d.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "C has {} rows but D has {}",
            c.nrows(),
            d.nrows()
        )));
    }
    let cross = max_abs(&(d.transpose() * c));
    if cross > STANDARD_FORM_TOL {
        return Err(Error::NotStandardForm(format!("max |D'C| = {cross:e}")));
    }
    let m = d.ncols();
    let gram = max_abs(&(d.transpose() * d - Matrix::identity(m, m)));
    if gram > STANDARD_FORM_TOL {
        return Err(Error::NotStandardForm(format!("max |D'D - I| = {gram:e}")));
    }
    Ok(())
}

/// Suboptimal state feedback for a single system in standard form.
///
/// Solves `Aᵀ P + P A − P B Bᵀ P + CᵀC + eps·I = 0` and returns `K = −Bᵀ P`
/// together with the certificate of the closed loop
/// `(A + BK, C + DK, E)` when `tr(Eᵀ P E) < γ`.
pub fn suboptimal_feedback_single(
    a: &Matrix,
    b: &Matrix,
    c: &Matrix,
    d: &Matrix,
    e: &Matrix,
    gamma: f64,
) -> Result<(Matrix, CostCertificate)> {
    let n = a.nrows();
    if b.nrows() != n || d.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(
            "B must be n x m and D must have m columns".into(),
        ));
    }
    check_standard_form(c, d)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let q = c.transpose() * c;
    let eps = default_eps(&q);
    let p = solve_riccati(a, b, &q, eps)?;
    let closed = PerformanceTriple::new(a - b * b.transpose() * &p, c - d * b.transpose() * &p, e.clone())?;
    let achieved = trace(&(e.transpose() * &p * e));
    if achieved >= gamma * (1.0 - STRICT_MARGIN) {
        return Err(Error::GammaInfeasible { gamma, achieved });
    }
    let k = -(b.transpose() * &p);
    let cert = certify_cost(&closed, &p, gamma)?;
    Ok((k, cert))
}
