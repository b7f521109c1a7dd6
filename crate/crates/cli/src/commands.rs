//! The four commands. Each returns the primary output (JSON report or CSV)
//! together with the exit status; input problems surface as [`CliError`].

use diffh2::design::default_coupling;
use diffh2::graph::{connected_spectrum, laplacian, spectrum};
use diffh2::matkernel::from_rows;
use diffh2::network::{
    check_synchronization, quadrature_global_cost_default, reduced_global_cost, CostReport,
};
use diffh2::sim::{simulate, sync_metrics, write_csv};
use diffh2::{
    build_closed_loop, certify_network, coupling_range, design_protocol, Error, LaplacianSpectrum,
    Matrix,
};
use serde::Deserialize;

use crate::config::ProblemConfig;
use crate::report::*;
use crate::{CliError, Exit};

/// Relative tolerance between the modal cost sum and the full-network quadrature.
pub const QUADRATURE_TOL: f64 = 1e-4;
/// Relative tolerance between the modal sum and the reduced nodal Lyapunov cost.
pub const REDUCED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub exit: Exit,
    /// Report or trajectory, destined for `--out` or stdout.
    pub body: String,
    /// Secondary report printed to stderr (simulate with CSV output).
    pub side: Option<String>,
}

impl CommandOutput {
    fn report(exit: Exit, body: String) -> Self {
        CommandOutput { exit, body, side: None }
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn certificate_report(spectrum: &LaplacianSpectrum, report: &CostReport) -> CertificateReport {
    CertificateReport {
        certified: report.certified,
        trace_sum: report.trace_sum,
        eps: report.eps,
        modes: spectrum
            .modes()
            .iter()
            .zip(&report.per_mode_certificates)
            .map(|(&lambda, cert)| ModeCertificate {
                lambda,
                trace: cert.trace(),
                slack: cert.slack,
                lyap_margin: cert.lyap_margin,
            })
            .collect(),
    }
}

pub fn run_spectrum(cfg: &ProblemConfig) -> Result<CommandOutput, CliError> {
    let g = &cfg.graph;
    let s = spectrum(&laplacian(g))?;
    let connected = s.is_connected();
    let report = SpectrumReport {
        schema_version: SCHEMA_VERSION,
        command: "spectrum",
        nodes: g.node_count(),
        edges: g.edges().len(),
        eigenvalues: s.eigenvalues.clone(),
        lambda2: s.lambda2(),
        lambda_n: s.lambda_max(),
        connected,
    };
    let exit = if connected { Exit::Ok } else { Exit::Disconnected };
    Ok(CommandOutput::report(exit, to_json(&report)))
}

pub fn run_design(cfg: &ProblemConfig) -> Result<CommandOutput, CliError> {
    let agent = cfg.agent()?;
    let gamma = cfg.gamma()?;
    let s = connected_spectrum(&cfg.graph)?;
    agent.check_standard_form()?;
    let range = coupling_range(cfg.method, s.lambda2(), s.lambda_max())?;
    let c = cfg.c.unwrap_or_else(|| default_coupling(cfg.method, &range));
    let mut report = DesignReport {
        schema_version: SCHEMA_VERSION,
        command: "design",
        status: "certified",
        method: cfg.method.as_str(),
        gamma,
        c,
        coupling_range: RangeReport {
            lower: range.lower,
            upper: range.upper,
            upper_inclusive: range.upper_inclusive,
        },
        minimal_gamma: None,
        k: None,
        p: None,
        trace_value: None,
        riccati_eps: None,
        modal_costs: None,
        j_global: None,
        certificate: None,
        message: None,
    };
    let gain = match design_protocol(agent, &s, gamma, cfg.method, Some(c)) {
        Ok(gain) => gain,
        Err(Error::GammaInfeasible { achieved, .. }) => {
            report.status = "infeasible";
            report.minimal_gamma = Some(achieved);
            report.message = Some(format!(
                "trace condition fails at c = {c}; smallest certifiable gamma is {achieved}"
            ));
            return Ok(CommandOutput::report(Exit::Infeasible, to_json(&report)));
        }
        Err(e) => return Err(e.into()),
    };
    report.k = Some(rows(&gain.k));
    report.p = Some(rows(&gain.p));
    report.trace_value = Some(gain.trace_value);
    report.riccati_eps = Some(gain.eps);
    match certify_network(agent, &s, &gain.k, gamma) {
        Ok(cost) => {
            report.modal_costs = Some(cost.j_modal.clone());
            report.j_global = Some(cost.j_global);
            report.certificate = Some(certificate_report(&s, &cost));
            Ok(CommandOutput::report(Exit::Ok, to_json(&report)))
        }
        // the design's own bound must certify; anything else is an internal inconsistency
        Err(e) => {
            report.status = "oracle_disagreement";
            report.message = Some(format!("designed gain failed network certification: {e}"));
            Ok(CommandOutput::report(Exit::OracleDisagreement, to_json(&report)))
        }
    }
}

#[derive(Deserialize)]
struct GainDoc {
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
}

/// Reads `K` from a JSON document with a `"K"` field (a design report qualifies).
pub fn parse_gain(text: &str, origin: &str) -> Result<Matrix, CliError> {
    let doc: GainDoc =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("{origin}: {e}")))?;
    from_rows(&doc.k, "K").map_err(|e| CliError::input(format!("{origin}: {e}")))
}

pub fn run_verify(cfg: &ProblemConfig, k: &Matrix) -> Result<CommandOutput, CliError> {
    let agent = cfg.agent()?;
    let gamma = cfg.gamma()?;
    let s = connected_spectrum(&cfg.graph)?;
    agent.check_gain(k)?;
    agent.check_standard_form()?;
    let sync = check_synchronization(agent, &s, k);
    let mut report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        status: "certified",
        gamma,
        k: rows(k),
        synchronizing: sync.synchronizing,
        stable_modes: sync.stable_modes.clone(),
        modal_costs: None,
        certificate: None,
        oracles: None,
        message: None,
    };
    if !sync.synchronizing {
        report.status = "not_synchronizing";
        let idx = sync.stable_modes.iter().position(|&ok| !ok).unwrap_or(0);
        report.message = Some(format!(
            "mode {} (lambda = {}) is not stable",
            idx + 2,
            s.modes()[idx]
        ));
        return Ok(CommandOutput::report(Exit::Infeasible, to_json(&report)));
    }

    let net = build_closed_loop(agent, &cfg.graph, k)?;
    let modal = diffh2::network::modal_costs(agent, &s, k)?;
    let modal_sum: f64 = modal.iter().sum();
    let reduced = reduced_global_cost(&net)?;
    let quad = quadrature_global_cost_default(&net)?;
    let oracles = OracleReport {
        j_modal_sum: modal_sum,
        j_reduced: reduced,
        j_quadrature: quad,
        reduced_gap: rel_gap(modal_sum, reduced),
        quadrature_gap: rel_gap(modal_sum, quad),
        agree: rel_gap(modal_sum, reduced) <= REDUCED_TOL && rel_gap(modal_sum, quad) <= QUADRATURE_TOL,
    };
    let agree = oracles.agree;
    report.modal_costs = Some(modal);
    report.oracles = Some(oracles);

    let mut exit = Exit::Ok;
    match certify_network(agent, &s, k, gamma) {
        Ok(cost) => report.certificate = Some(certificate_report(&s, &cost)),
        Err(Error::GammaInfeasible { achieved, .. }) => {
            report.status = "infeasible";
            report.message = Some(format!(
                "sum of per-mode certificate traces {achieved} is not below gamma"
            ));
            exit = Exit::Infeasible;
        }
        Err(e) => return Err(e.into()),
    }
    if !agree {
        report.status = "oracle_disagreement";
        report.message = Some("cost oracles disagree beyond tolerance".into());
        exit = Exit::OracleDisagreement;
    }
    Ok(CommandOutput::report(exit, to_json(&report)))
}

/// Simulates the closed loop under `k`, or under the config's design when
/// `k` is `None`.
pub fn run_simulate(cfg: &ProblemConfig, k: Option<&Matrix>, format: Format) -> Result<CommandOutput, CliError> {
    let sim = cfg.simulation()?;
    let agent = cfg.agent()?;
    let s = connected_spectrum(&cfg.graph)?;
    let k = match k {
        Some(k) => k.clone(),
        // the trajectory does not depend on γ, so design without a bound
        None => design_protocol(agent, &s, f64::MAX, cfg.method, cfg.c)?.k,
    };
    let net = build_closed_loop(agent, &cfg.graph, &k)?;
    let x0 = cfg.initial_state(net.state_dim())?;
    let traj = simulate(&net, &x0, &sim.disturbance, sim.t_final, sim.dt)?;
    let (decay_rate, note) = match sync_metrics(&traj) {
        Ok(m) => (Some(m.decay_rate), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = SimulateReport {
        schema_version: SCHEMA_VERSION,
        command: "simulate",
        status: "ok",
        t_final: sim.t_final,
        dt: sim.dt,
        samples: traj.times.len(),
        final_disagreement: *traj.disagreement.last().unwrap_or(&0.0),
        decay_rate,
        note,
    };
    Ok(match format {
        Format::Json => CommandOutput::report(Exit::Ok, to_json(&report)),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&traj, &mut buf).map_err(|e| CliError::input(e.to_string()))?;
            CommandOutput {
                exit: Exit::Ok,
                body: String::from_utf8(buf).expect("CSV is ASCII"),
                side: Some(to_json(&report)),
            }
        }
    })
}
