//! Connected simple undirected weighted graphs: Laplacian, signed incidence
//! factorization `L = R W Rᵀ`, and Laplacian spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{max_abs, sym_eig, Matrix};

/// Relative tolerance used to decide whether a Laplacian eigenvalue is zero.
pub const ZERO_EIGEN_TOL: f64 = 1e-9;

/// Undirected weighted edge between 1-based node indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl From<(usize, usize, f64)> for Edge {
    fn from((i, j, weight): (usize, usize, f64)) -> Self {
        Edge { i, j, weight }
    }
}

impl From<Edge> for (usize, usize, f64) {
    fn from(e: Edge) -> Self {
        (e.i, e.j, e.weight)
    }
}

/// Simple undirected graph with strictly positive edge weights.
///
/// Edge order is preserved and fixes the column order of the incidence matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedGraph {
    #[serde(rename = "nodes")]
    node_count: usize,
    edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct GraphDoc {
    nodes: usize,
    edges: Vec<Edge>,
}

impl<'de> Deserialize<'de> for WeightedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(d)?;
        WeightedGraph::new(doc.nodes, doc.edges).map_err(serde::de::Error::custom)
    }
}

impl WeightedGraph {
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (k, e) in edges.iter().enumerate() {
            let edge_no = k + 1;
            if e.i == 0 || e.j == 0 || e.i > node_count || e.j > node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {edge_no}: node index out of range 1..{node_count}"
                )));
            }
            if e.i == e.j {
                return Err(Error::InvalidGraph(format!(
                    "edge {edge_no}: self-loop on node {}",
                    e.i
                )));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge {edge_no}: weight must be finite and positive, got {}",
                    e.weight
                )));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(Error::InvalidGraph(format!(
                    "edge {edge_no}: duplicate edge {{{}, {}}}",
                    e.i, e.j
                )));
            }
        }
        Ok(WeightedGraph { node_count, edges })
    }

    /// Unit-weight graph from 1-based node pairs.
    pub fn unweighted(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            node_count,
            pairs.iter().map(|&(i, j)| Edge { i, j, weight: 1.0 }).collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Signed incidence matrix `R` (N×M) and diagonal edge-weight matrix `W` (M×M).
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceForm {
    pub r: Matrix,
    pub w: Matrix,
}

impl IncidenceForm {
    /// `W^{1/2} Rᵀ`, the map from node values to weighted edge differences.
    pub fn weighted_difference(&self) -> Matrix {
        let sqrt_w = self.w.map(f64::sqrt);
        sqrt_w * self.r.transpose()
    }
}

/// Laplacian eigenvalues in ascending order with orthogonal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub u: Matrix,
}

impl LaplacianSpectrum {
    pub fn node_count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Smallest nonzero eigenvalue of a connected graph (`λ₂`), or `0` for `N = 1`.
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvalues `λ₂, …, λ_N` that drive the synchronization modes.
    pub fn modes(&self) -> &[f64] {
        self.eigenvalues.get(1..).unwrap_or(&[])
    }

    /// Spectral connectivity test: `λ₂ > 1e-9·max(1, λ_N)`.
    pub fn is_connected(&self) -> bool {
        self.node_count() == 1 || self.lambda2() > ZERO_EIGEN_TOL * self.lambda_max().max(1.0)
    }

    /// Spectrum from user-supplied eigenvalues (identity eigenvectors).
    ///
    /// Useful for modal computations that never touch eigenvectors.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite eigenvalue".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpectrum("eigenvalues must be ascending".into()));
        }
        Ok(LaplacianSpectrum {
            eigenvalues,
            u: Matrix::identity(n, n),
        })
    }
}

/// `L = D − 𝒜`.
pub fn laplacian(g: &WeightedGraph) -> Matrix {
    let n = g.node_count;
    let mut l = Matrix::zeros(n, n);
    for e in &g.edges {
        let (i, j) = (e.i - 1, e.j - 1);
        l[(i, j)] -= e.weight;
        l[(j, i)] -= e.weight;
        l[(i, i)] += e.weight;
        l[(j, j)] += e.weight;
    }
    l
}

/// Incidence factorization. For edge `k = {i, j}` row `max(i, j)` holds `+1` and
/// row `min(i, j)` holds `−1`.
pub fn incidence(g: &WeightedGraph) -> IncidenceForm {
    let n = g.node_count;
    let m = g.edges.len();
    let mut r = Matrix::zeros(n, m);
    let mut w = Matrix::zeros(m, m);
    for (k, e) in g.edges.iter().enumerate() {
        r[(e.i.max(e.j) - 1, k)] = 1.0;
        r[(e.i.min(e.j) - 1, k)] = -1.0;
        w[(k, k)] = e.weight;
    }
    IncidenceForm { r, w }
}

/// Ascending eigen-decomposition of a Laplacian; round-off negatives above
/// `−1e-9·max(1, λ_N)` are clamped to zero.
pub fn spectrum(l: &Matrix) -> Result<LaplacianSpectrum> {
    let eig = sym_eig(l)?;
    let mut eigenvalues: Vec<f64> = eig.values.iter().copied().collect();
    let top = eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    for v in &mut eigenvalues {
        if *v < 0.0 && *v > -ZERO_EIGEN_TOL * top {
            *v = 0.0;
        }
    }
    Ok(LaplacianSpectrum {
        eigenvalues,
        u: eig.vectors,
    })
}

/// Combinatorial connectivity by union-find over the edge list.
pub fn is_connected(g: &WeightedGraph) -> bool {
    let n = g.node_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for e in &g.edges {
        let a = find(&mut parent, e.i - 1);
        let b = find(&mut parent, e.j - 1);
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// Spectrum of a graph, rejecting disconnected inputs.
pub fn connected_spectrum(g: &WeightedGraph) -> Result<LaplacianSpectrum> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    spectrum(&laplacian(g))
}

/// `‖L·1‖_max`, zero for exact Laplacians.
pub fn kernel_residual(l: &Matrix) -> f64 {
    let ones = crate::matkernel::Vector::repeat(l.ncols(), 1.0);
    let v = l * ones;
    max_abs(&Matrix::from_column_slice(v.len(), 1, v.as_slice()))
}
