//! Synthesis and certification of distributed diffusive protocols with a
//! guaranteed H2 bound for networks of identical linear agents.
//!
//! Layers, bottom up: [`matkernel`] (dense eigen, Lyapunov, Riccati and
//! exponential kernels), [`graph`] (Laplacian machinery), [`h2`] (single
//! system cost and certificates), [`network`] (closed-loop assembly and
//! modal cost decomposition), [`design`] (coupling ranges and gain
//! synthesis) and [`sim`] (exact-discretization simulation).

pub mod design;
pub mod error;
pub mod graph;
pub mod h2;
pub mod matkernel;
pub mod network;
pub mod sim;

pub use design::{coupling_range, design_protocol, sweep_feasibility, CouplingRange, Method, ProtocolGain};
pub use error::{Error, Result};
pub use graph::{LaplacianSpectrum, WeightedGraph};
pub use h2::{CostCertificate, PerformanceTriple};
pub use matkernel::{Matrix, Vector};
pub use network::{build_closed_loop, certify_network, AgentDynamics, CostReport, NetworkRealization};
pub use sim::{DisturbanceKind, DisturbanceSpec, Trajectory};
