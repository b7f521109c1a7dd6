//! Multi-agent closed loop under the diffusive protocol `u = (L ⊗ K) x`.
//!
//! The network cost is evaluated modally: after diagonalizing the Laplacian
//! the disagreement dynamics split into `N − 1` systems
//! `(A + λᵢ B K, √λᵢ C + λᵢ√λᵢ D K, E)` whose H2 costs add up to the
//! network cost. Two independent cross-checks are provided, a Lyapunov solve
//! on the consensus-reduced nodal system and Simpson quadrature on the full
//! `(Ã, C̃, Ẽ)` triple.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{connected_spectrum, incidence, laplacian, LaplacianSpectrum, WeightedGraph};
use crate::h2::{self, certify_cost, check_standard_form, exact_cost, CostCertificate, PerformanceTriple};
use crate::matkernel::{
    check_finite, from_rows, is_hurwitz, max_abs, solve_lyapunov, trace, Matrix,
};

/// Identical agent dynamics `ẋ = A x + B u + E d`, `z = C x + D u`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentDynamics {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub e: Matrix,
}

#[derive(Deserialize)]
#[allow(non_snake_case)]
struct AgentDoc {
    A: Vec<Vec<f64>>,
    B: Vec<Vec<f64>>,
    C: Vec<Vec<f64>>,
    D: Vec<Vec<f64>>,
    E: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for AgentDynamics {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = AgentDoc::deserialize(d)?;
        let build = || -> Result<AgentDynamics> {
            AgentDynamics::new(
                from_rows(&doc.A, "A")?,
                from_rows(&doc.B, "B")?,
                from_rows(&doc.C, "C")?,
                from_rows(&doc.D, "D")?,
                from_rows(&doc.E, "E")?,
            )
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl AgentDynamics {
    /// Checks dimensions and finiteness only; the standard-form conditions are
    /// checked by [`AgentDynamics::check_standard_form`] at design time.
    pub fn new(a: Matrix, b: Matrix, c: Matrix, d: Matrix, e: Matrix) -> Result<Self> {
        let n = a.nrows();
        let mismatch = |what: &str| Err(Error::DimensionMismatch(what.to_string()));
        if a.ncols() != n || n == 0 {
            return mismatch("A must be a nonempty square matrix");
        }
        if b.nrows() != n {
            return mismatch("B must have as many rows as A");
        }
        if c.ncols() != n {
            return mismatch("C must have as many columns as A");
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return mismatch("D must be p x m with p = rows(C), m = cols(B)");
        }
        if e.nrows() != n {
            return mismatch("E must have as many rows as A");
        }
        for (m, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D"), (&e, "E")] {
            check_finite(m, name)?;
        }
        Ok(AgentDynamics { a, b, c, d, e })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("agent file: {e}")))
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn disturbance_dim(&self) -> usize {
        self.e.ncols()
    }

    pub fn check_standard_form(&self) -> Result<()> {
        check_standard_form(&self.c, &self.d)
    }

    pub fn check_gain(&self, k: &Matrix) -> Result<()> {
        if k.nrows() != self.input_dim() || k.ncols() != self.state_dim() {
            return Err(Error::DimensionMismatch(format!(
                "gain must be {}x{}, got {}x{}",
                self.input_dim(),
                self.state_dim(),
                k.nrows(),
                k.ncols()
            )));
        }
        check_finite(k, "gain")
    }

    /// Closed-loop synchronization mode for Laplacian eigenvalue `lambda`.
    pub fn modal_system(&self, lambda: f64, k: &Matrix) -> ModalSystem {
        let bk = &self.b * k;
        let dk = &self.d * k;
        let root = lambda.sqrt();
        ModalSystem {
            lambda,
            triple: PerformanceTriple {
                a: &self.a + &bk * lambda,
                c: &self.c * root + dk * (lambda * root),
                e: self.e.clone(),
            },
        }
    }
}

/// `ξ̇ = (A + λ B K) ξ + E δ`, `η = (√λ C + λ√λ D K) ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSystem {
    pub lambda: f64,
    pub triple: PerformanceTriple,
}

/// Closed-loop network `ẋ = Ã x + Ẽ d`, `ζ = C̃ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub atilde: Matrix,
    pub ctilde: Matrix,
    pub etilde: Matrix,
    pub agent: AgentDynamics,
    pub graph: WeightedGraph,
    pub k: Matrix,
}

/// Assembles `Ã = I_N ⊗ A + L ⊗ BK`, `Ẽ = I_N ⊗ E` and
/// `C̃ = W^{1/2}Rᵀ ⊗ C + W^{1/2}RᵀL ⊗ DK`.
pub fn build_closed_loop(
    agent: &AgentDynamics,
    g: &WeightedGraph,
    k: &Matrix,
) -> Result<NetworkRealization> {
    agent.check_gain(k)?;
    if !crate::graph::is_connected(g) {
        return Err(Error::Disconnected);
    }
    let n_nodes = g.node_count();
    let l = laplacian(g);
    let diff = incidence(g).weighted_difference();
    let eye = Matrix::identity(n_nodes, n_nodes);
    let bk = &agent.b * k;
    let dk = &agent.d * k;

    let atilde = eye.kronecker(&agent.a) + l.kronecker(&bk);
    let etilde = eye.kronecker(&agent.e);
    let ctilde = diff.kronecker(&agent.c) + (&diff * &l).kronecker(&dk);
    Ok(NetworkRealization {
        atilde,
        ctilde,
        etilde,
        agent: agent.clone(),
        graph: g.clone(),
        k: k.clone(),
    })
}

impl NetworkRealization {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn state_dim(&self) -> usize {
        self.atilde.nrows()
    }

    pub fn disturbance_channels(&self) -> usize {
        self.etilde.ncols()
    }

    pub fn spectrum(&self) -> Result<LaplacianSpectrum> {
        connected_spectrum(&self.graph)
    }

    /// Orthogonal projector `(I − 𝟙𝟙ᵀ/N) ⊗ I_n` onto the disagreement subspace.
    pub fn disagreement_projector(&self) -> Matrix {
        let nn = self.node_count();
        let centering = Matrix::identity(nn, nn) - Matrix::from_element(nn, nn, 1.0 / nn as f64);
        let n = self.agent.state_dim();
        centering.kronecker(&Matrix::identity(n, n))
    }
}

/// Per-mode stability of the synchronization modes `i = 2..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncCheck {
    pub synchronizing: bool,
    /// `stable_modes[k]` refers to eigenvalue `λ_{k+2}`.
    pub stable_modes: Vec<bool>,
}

/// `true` iff `A + λᵢ B K` is Hurwitz for every `i = 2..N`.
pub fn check_synchronization(
    agent: &AgentDynamics,
    spectrum: &LaplacianSpectrum,
    k: &Matrix,
) -> SyncCheck {
    let bk = &agent.b * k;
    let stable_modes: Vec<bool> = spectrum
        .modes()
        .iter()
        .map(|&lambda| is_hurwitz(&(&agent.a + &bk * lambda)))
        .collect();
    SyncCheck {
        synchronizing: stable_modes.iter().all(|&s| s),
        stable_modes,
    }
}

fn first_unstable(agent: &AgentDynamics, spectrum: &LaplacianSpectrum, k: &Matrix) -> Result<()> {
    let check = check_synchronization(agent, spectrum, k);
    match check.stable_modes.iter().position(|&s| !s) {
        Some(idx) => Err(Error::NotSynchronizing {
            mode: idx + 2,
            lambda: spectrum.modes()[idx],
        }),
        None => Ok(()),
    }
}

fn check_spectrum(spectrum: &LaplacianSpectrum) -> Result<()> {
    if spectrum.node_count() < 2 {
        return Err(Error::InvalidSpectrum(
            "network needs at least two agents".into(),
        ));
    }
    if !spectrum.is_connected() {
        return Err(Error::InvalidSpectrum(
            "lambda_2 is zero; graph is disconnected".into(),
        ));
    }
    Ok(())
}

/// H2 costs `J_i(K)` of the synchronization modes `i = 2..N`.
pub fn modal_costs(
    agent: &AgentDynamics,
    spectrum: &LaplacianSpectrum,
    k: &Matrix,
) -> Result<Vec<f64>> {
    agent.check_gain(k)?;
    check_spectrum(spectrum)?;
    first_unstable(agent, spectrum, k)?;
    spectrum
        .modes()
        .iter()
        .map(|&lambda| exact_cost(&agent.modal_system(lambda, k).triple))
        .collect()
}

/// Network cost `J(K) = Σᵢ J_i(K)`.
pub fn global_cost(net: &NetworkRealization) -> Result<f64> {
    let spectrum = net.spectrum()?;
    Ok(modal_costs(&net.agent, &spectrum, &net.k)?.iter().sum())
}

/// Orthonormal basis of `𝟙^⊥` (Helmert contrasts), `N × (N−1)`.
fn helmert_basis(nodes: usize) -> Matrix {
    let mut v = Matrix::zeros(nodes, nodes.saturating_sub(1));
    for col in 0..nodes.saturating_sub(1) {
        let k = (col + 1) as f64;
        let norm = (k * (k + 1.0)).sqrt();
        for row in 0..=col {
            v[(row, col)] = 1.0 / norm;
        }
        v[(col + 1, col)] = -k / norm;
    }
    v
}

/// Network cost from one Lyapunov solve on the nodal realization restricted
/// to the disagreement subspace `𝟙^⊥ ⊗ ℝⁿ`.
///
/// Uses a Helmert basis rather than Laplacian eigenvectors, so the reduced
/// state matrix is not block diagonal; this keeps it independent of the
/// modal route.
pub fn reduced_global_cost(net: &NetworkRealization) -> Result<f64> {
    let spectrum = net.spectrum()?;
    check_spectrum(&spectrum)?;
    first_unstable(&net.agent, &spectrum, &net.k)?;
    let n = net.agent.state_dim();
    let basis = helmert_basis(net.node_count()).kronecker(&Matrix::identity(n, n));
    let a_red = basis.transpose() * &net.atilde * &basis;
    let c_red = &net.ctilde * &basis;
    let e_red = basis.transpose() * &net.etilde;
    let y = solve_lyapunov(&a_red, &(c_red.transpose() * &c_red))?;
    Ok(trace(&(e_red.transpose() * y * e_red)).max(0.0))
}

/// Horizon covering the slowest synchronization mode (`40 / r`, `r` estimated
/// per mode from `1 / (2‖Y₀‖)`).
pub fn network_horizon(net: &NetworkRealization) -> Result<f64> {
    let spectrum = net.spectrum()?;
    check_spectrum(&spectrum)?;
    first_unstable(&net.agent, &spectrum, &net.k)?;
    spectrum.modes().iter().try_fold(0.0_f64, |acc, &lambda| {
        let mode = net.agent.modal_system(lambda, &net.k);
        Ok(acc.max(h2::default_horizon(&mode.triple)?))
    })
}

/// Panel count keeping `h·‖Ã‖_∞ ≤ 0.1`, clamped to `[2000, 200000]`.
pub fn default_steps(net: &NetworkRealization, horizon: f64) -> usize {
    h2::steps_for(&net.atilde, horizon)
}

/// Simpson quadrature of `‖C̃ e^{Ãt} Ẽ‖_F²` on the full `nN`-dimensional network.
///
/// `Ã` has a consensus eigen-subspace `𝟙 ⊗ ℝⁿ` on which `C̃` vanishes; the
/// propagated impulse response is re-projected onto its complement after every
/// step so that round-off in an unstable consensus direction cannot leak into `ζ`.
pub fn quadrature_global_cost(net: &NetworkRealization, horizon: f64, steps: usize) -> Result<f64> {
    let spectrum = net.spectrum()?;
    check_spectrum(&spectrum)?;
    first_unstable(&net.agent, &spectrum, &net.k)?;
    if !(horizon > 0.0 && horizon.is_finite()) || steps == 0 {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs a positive horizon and step count, got {horizon} and {steps}"
        )));
    }
    let proj = net.disagreement_projector();
    Ok(h2::simpson_energy(
        &net.atilde,
        &net.ctilde,
        &net.etilde,
        horizon,
        steps,
        Some(&proj),
    ))
}

/// Relative tolerance of [`quadrature_global_cost_default`].
pub const ADAPTIVE_RTOL: f64 = 1e-8;

/// Adaptive-step Simpson quadrature of the network cost over [`network_horizon`].
///
/// Closed loops with fast and slow modes would need a very fine uniform grid
/// over the whole horizon; the adaptive rule refines only the fast transient.
pub fn quadrature_global_cost_default(net: &NetworkRealization) -> Result<f64> {
    let horizon = network_horizon(net)?;
    let proj = net.disagreement_projector();
    Ok(h2::adaptive_simpson_energy(
        &net.atilde,
        &net.ctilde,
        &net.etilde,
        horizon,
        ADAPTIVE_RTOL,
        Some(&proj),
    ))
}

/// Outcome of [`certify_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    /// Network cost from a single Lyapunov solve in Laplacian eigen-coordinates.
    pub j_global: f64,
    /// `J_i(K)` for `i = 2..N`.
    pub j_modal: Vec<f64>,
    /// `|J_global − Σ J_modal|`.
    pub decomposition_gap: f64,
    pub certified: bool,
    pub per_mode_certificates: Vec<CostCertificate>,
    pub gamma: f64,
    /// `Σᵢ tr(Eᵀ Pᵢ E)`.
    pub trace_sum: f64,
    /// Strictness shift used for every per-mode Lyapunov solve.
    pub eps: f64,
}

/// Network cost in eigen-coordinates `x̄ = (Uᵀ ⊗ I) x`, as one
/// `(N−1)n`-dimensional Lyapunov solve with
/// `C_oᵀC_o = Λ ⊗ CᵀC + Λ² ⊗ (CᵀDK + KᵀDᵀC) + Λ³ ⊗ KᵀDᵀDK`.
fn eigen_coordinate_cost(agent: &AgentDynamics, spectrum: &LaplacianSpectrum, k: &Matrix) -> Result<f64> {
    let lambdas = spectrum.modes();
    let modes = lambdas.len();
    let lam = Matrix::from_diagonal(&crate::Vector::from_column_slice(lambdas));
    let lam2 = lam.map(|x| x * x);
    let lam3 = lam.map(|x| x * x * x);
    let bk = &agent.b * k;
    let dk = &agent.d * k;
    let ctdk = agent.c.transpose() * &dk;
    let a_o = Matrix::identity(modes, modes).kronecker(&agent.a) + lam.kronecker(&bk);
    let q_o = lam.kronecker(&(agent.c.transpose() * &agent.c))
        + lam2.kronecker(&(&ctdk + ctdk.transpose()))
        + lam3.kronecker(&(dk.transpose() * &dk));
    let u_r = spectrum.u.columns(1, modes).into_owned();
    let e_o = u_r.transpose().kronecker(&agent.e);
    let y = solve_lyapunov(&a_o, &q_o)?;
    Ok(trace(&(e_o.transpose() * y * e_o)).max(0.0))
}

/// Certifies synchronization and `J(K) < γ` through per-mode Lyapunov
/// certificates `Pᵢ` solving `Āᵢᵀ Pᵢ + Pᵢ Āᵢ + C̄ᵢᵀ C̄ᵢ + eps·I = 0` with
/// `Σᵢ tr(Eᵀ Pᵢ E) < γ`.
pub fn certify_network(
    agent: &AgentDynamics,
    spectrum: &LaplacianSpectrum,
    k: &Matrix,
    gamma: f64,
) -> Result<CostReport> {
    agent.check_standard_form()?;
    agent.check_gain(k)?;
    check_spectrum(spectrum)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    first_unstable(agent, spectrum, k)?;

    let modes: Vec<ModalSystem> = spectrum
        .modes()
        .iter()
        .map(|&lambda| agent.modal_system(lambda, k))
        .collect();
    let weights: Vec<Matrix> = modes.iter().map(|m| m.triple.output_weight()).collect();
    let eps = 1e-6 * weights.iter().map(max_abs).fold(1.0, f64::max);
    let n = agent.state_dim();
    let shift = Matrix::identity(n, n) * eps;

    let mut certs_p = Vec::with_capacity(modes.len());
    let mut traces = Vec::with_capacity(modes.len());
    for (mode, weight) in modes.iter().zip(&weights) {
        let p = solve_lyapunov(&mode.triple.a, &(weight + &shift))?;
        traces.push(trace(&(agent.e.transpose() * &p * &agent.e)));
        certs_p.push(p);
    }
    let trace_sum: f64 = traces.iter().sum();
    if trace_sum >= gamma * (1.0 - h2::STRICT_MARGIN) {
        return Err(Error::GammaInfeasible {
            gamma,
            achieved: trace_sum,
        });
    }
    // split the global slack evenly across modes
    let share = (gamma - trace_sum) / modes.len() as f64;
    let per_mode_certificates = modes
        .iter()
        .zip(certs_p.iter().zip(&traces))
        .map(|(mode, (p, tr))| certify_cost(&mode.triple, p, tr + share))
        .collect::<Result<Vec<_>>>()?;

    let j_modal = modes
        .iter()
        .map(|m| exact_cost(&m.triple))
        .collect::<Result<Vec<_>>>()?;
    let j_global = eigen_coordinate_cost(agent, spectrum, k)?;
    let decomposition_gap = (j_global - j_modal.iter().sum::<f64>()).abs();
    Ok(CostReport {
        j_global,
        j_modal,
        decomposition_gap,
        certified: true,
        per_mode_certificates,
        gamma,
        trace_sum,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, data)
    }

    fn scalar_agent(a: f64, e: f64) -> AgentDynamics {
        AgentDynamics::new(
            mat(1, 1, &[a]),
            mat(1, 1, &[1.0]),
            mat(2, 1, &[1.0, 0.0]),
            mat(2, 1, &[0.0, 1.0]),
            mat(1, 1, &[e]),
        )
        .unwrap()
    }

    fn p2() -> WeightedGraph {
        WeightedGraph::unweighted(2, &[(1, 2)]).unwrap()
    }

    fn p3() -> WeightedGraph {
        WeightedGraph::unweighted(3, &[(1, 2), (2, 3)]).unwrap()
    }

    const WORKED_K: f64 = -0.353_553_390_593_273_8; // -sqrt(4.5)/6

    #[test]
    fn closed_loop_examples() {
        let agent = scalar_agent(0.0, 1.0);
        let net = build_closed_loop(&agent, &p2(), &mat(1, 1, &[-0.5])).unwrap();
        assert_eq!(net.atilde, mat(2, 2, &[-0.5, 0.5, 0.5, -0.5]));

        let net = build_closed_loop(&agent, &p2(), &mat(1, 1, &[0.0])).unwrap();
        assert_eq!(net.atilde, Matrix::zeros(2, 2));

        let net = build_closed_loop(&agent, &p3(), &mat(1, 1, &[-1.0])).unwrap();
        assert_eq!(net.etilde, Matrix::identity(3, 3));
        assert_eq!(net.ctilde.nrows(), 2 * 2);
    }

    #[test]
    fn closed_loop_errors() {
        let agent = scalar_agent(0.0, 1.0);
        let err = build_closed_loop(&agent, &p2(), &mat(1, 2, &[1.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        let split = WeightedGraph::unweighted(4, &[(1, 2), (3, 4)]).unwrap();
        let err = build_closed_loop(&agent, &split, &mat(1, 1, &[-1.0])).unwrap_err();
        assert_eq!(err, Error::Disconnected);
    }

    #[test]
    fn kronecker_blocks_match_definition() {
        let agent = AgentDynamics::new(
            mat(2, 2, &[0.0, 1.0, -1.0, 0.3]),
            mat(2, 1, &[0.0, 1.0]),
            mat(2, 2, &[1.0, 0.5, 0.0, 0.0]),
            mat(2, 1, &[0.0, 1.0]),
            mat(2, 1, &[1.0, 0.2]),
        )
        .unwrap();
        let g = WeightedGraph::new(
            3,
            vec![(1, 2, 2.0).into(), (2, 3, 0.5).into(), (1, 3, 1.5).into()],
        )
        .unwrap();
        let k = mat(1, 2, &[-0.7, -1.1]);
        let net = build_closed_loop(&agent, &g, &k).unwrap();
        let l = laplacian(&g);
        let bk = &agent.b * &k;
        for i in 0..3 {
            for j in 0..3 {
                let block = net.atilde.view((2 * i, 2 * j), (2, 2)).into_owned();
                let mut want = &bk * l[(i, j)];
                if i == j {
                    want += &agent.a;
                }
                assert!((block - want).amax() < 1e-15);
            }
        }
    }

    #[test]
    fn worked_global_cost() {
        let agent = scalar_agent(0.0, 1.0);
        let net = build_closed_loop(&agent, &p2(), &mat(1, 1, &[WORKED_K])).unwrap();
        let j = global_cost(&net).unwrap();
        assert!((j - 4.5f64.sqrt()).abs() < 1e-10);
        assert!((reduced_global_cost(&net).unwrap() - j).abs() < 1e-10);
        let quad = quadrature_global_cost_default(&net).unwrap();
        assert!((quad - j).abs() < 1e-5 * j);
    }

    #[test]
    fn zero_disturbance_costs_nothing() {
        let agent = scalar_agent(0.0, 0.0);
        let net = build_closed_loop(&agent, &p3(), &mat(1, 1, &[-1.0])).unwrap();
        assert_eq!(global_cost(&net).unwrap(), 0.0);
        let spectrum = net.spectrum().unwrap();
        let costs = modal_costs(&agent, &spectrum, &net.k).unwrap();
        assert!(costs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn uncoupled_stable_agents() {
        // A = -1, K = 0, P2: modal Abar = -1, Cbar = sqrt(2)(1, 0), Y = 1
        let agent = scalar_agent(-1.0, 1.0);
        let net = build_closed_loop(&agent, &p2(), &mat(1, 1, &[0.0])).unwrap();
        assert!((global_cost(&net).unwrap() - 1.0).abs() < 1e-12);
        let quad = quadrature_global_cost_default(&net).unwrap();
        assert!((quad - 1.0).abs() < 1e-6);
    }

    #[test]
    fn modal_costs_p3() {
        let agent = scalar_agent(0.0, 1.0);
        let spectrum = connected_spectrum(&p3()).unwrap();
        let costs = modal_costs(&agent, &spectrum, &mat(1, 1, &[-1.0])).unwrap();
        assert!((costs[0] - 1.0).abs() < 1e-10);
        assert!((costs[1] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn modal_costs_name_unstable_mode() {
        let agent = scalar_agent(1.0, 1.0);
        let spectrum = connected_spectrum(&p3()).unwrap();
        let err = modal_costs(&agent, &spectrum, &mat(1, 1, &[-1.0])).unwrap_err();
        match err {
            Error::NotSynchronizing { mode, lambda } => {
                assert_eq!(mode, 2);
                assert!((lambda - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn synchronization_examples() {
        let agent = scalar_agent(0.0, 1.0);
        let s2 = connected_spectrum(&p2()).unwrap();
        assert!(check_synchronization(&agent, &s2, &mat(1, 1, &[-0.5])).synchronizing);
        assert!(!check_synchronization(&agent, &s2, &mat(1, 1, &[0.0])).synchronizing);

        let unstable = scalar_agent(1.0, 1.0);
        let s3 = connected_spectrum(&p3()).unwrap();
        let check = check_synchronization(&unstable, &s3, &mat(1, 1, &[-1.0]));
        assert!(!check.synchronizing);
        assert_eq!(check.stable_modes, vec![false, true]);
    }

    #[test]
    fn certify_worked_case() {
        let agent = scalar_agent(0.0, 1.0);
        let spectrum = connected_spectrum(&p2()).unwrap();
        let k = mat(1, 1, &[WORKED_K]);
        let report = certify_network(&agent, &spectrum, &k, 2.5).unwrap();
        assert!(report.certified);
        assert!((report.trace_sum - 4.5f64.sqrt()).abs() < 1e-4);
        assert!(report.trace_sum > report.j_global);
        assert!(report.decomposition_gap < 1e-10);

        let err = certify_network(&agent, &spectrum, &k, 2.0).unwrap_err();
        match err {
            Error::GammaInfeasible { achieved, .. } => assert!((achieved - 2.12132).abs() < 1e-4),
            other => panic!("unexpected {other:?}"),
        }

        let err = certify_network(&agent, &spectrum, &mat(1, 1, &[0.5]), 2.5).unwrap_err();
        assert!(matches!(err, Error::NotSynchronizing { .. }));
    }

    #[test]
    fn certify_rejects_non_standard_form() {
        let mut agent = scalar_agent(0.0, 1.0);
        agent.c = mat(2, 1, &[1.0, 1.0]);
        let spectrum = connected_spectrum(&p2()).unwrap();
        let err = certify_network(&agent, &spectrum, &mat(1, 1, &[-0.5]), 10.0).unwrap_err();
        assert!(matches!(err, Error::NotStandardForm(_)));
    }

    #[test]
    fn consensus_direction_is_unobservable() {
        let agent = scalar_agent(0.3, 1.0);
        let net = build_closed_loop(&agent, &p3(), &mat(1, 1, &[-2.0])).unwrap();
        let ones = crate::Vector::repeat(3, 1.7);
        assert!((&net.ctilde * ones).amax() < 1e-12);
    }

    #[test]
    fn helmert_is_orthonormal_complement() {
        let v = helmert_basis(5);
        assert!((v.transpose() * &v - Matrix::identity(4, 4)).amax() < 1e-15);
        assert!((v.transpose() * crate::Vector::repeat(5, 1.0)).amax() < 1e-15);
    }

    #[test]
    fn agent_json() {
        let agent = AgentDynamics::from_json(
            r#"{"A": [[0]], "B": [[1]], "C": [[1], [0]], "D": [[0], [1]], "E": [[1]]}"#,
        )
        .unwrap();
        assert_eq!(agent, scalar_agent(0.0, 1.0));
        assert!(AgentDynamics::from_json(r#"{"A": [[0, 1]], "B": [[1]], "C": [[1]], "D": [[0]], "E": [[1]]}"#).is_err());
        assert!(AgentDynamics::from_json(r#"{"A": [[0]]}"#).is_err());
    }
}
