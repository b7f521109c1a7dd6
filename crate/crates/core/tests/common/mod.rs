#![allow(dead_code)]

use diffh2::graph::{Edge, WeightedGraph};
use diffh2::matkernel::spectral_abscissa;
use diffh2::{AgentDynamics, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..scale))
}

/// Random symmetric positive semidefinite matrix of rank `rank`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> Matrix {
    let f = random_matrix(rng, n, rank, 1.0);
    &f * f.transpose()
}

/// Random matrix shifted so that its spectral abscissa is `-margin`.
pub fn random_with_abscissa(rng: &mut impl Rng, n: usize, margin: f64) -> Matrix {
    let m = random_matrix(rng, n, n, 1.0);
    let alpha = spectral_abscissa(&m).unwrap();
    m - Matrix::identity(n, n) * (alpha + margin)
}

/// Connected graph on `nodes` nodes: random spanning tree plus extra edges,
/// weights in `[0.5, 2)`.
pub fn random_connected_graph(rng: &mut impl Rng, nodes: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 2..=nodes {
        let u = rng.random_range(1..v);
        present.insert((u, v));
        edges.push(Edge {
            i: u,
            j: v,
            weight: rng.random_range(0.5..2.0),
        });
    }
    for i in 1..=nodes {
        for j in (i + 1)..=nodes {
            if !present.contains(&(i, j)) && rng.random_bool(0.3) {
                edges.push(Edge {
                    i,
                    j,
                    weight: rng.random_range(0.5..2.0),
                });
            }
        }
    }
    WeightedGraph::new(nodes, edges).unwrap()
}

/// Erdős-Rényi style graph, possibly disconnected.
pub fn random_graph(rng: &mut impl Rng, nodes: usize, p: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 1..=nodes {
        for j in (i + 1)..=nodes {
            if rng.random_bool(p) {
                edges.push(Edge {
                    i,
                    j,
                    weight: rng.random_range(0.1..3.0),
                });
            }
        }
    }
    WeightedGraph::new(nodes, edges).unwrap()
}

/// Standard-form agent with `m = q = 1`, `p = 2`: `C = [c; 0]`, `D = [0; 1]`.
pub fn standard_agent(rng: &mut impl Rng, a: Matrix) -> AgentDynamics {
    let n = a.nrows();
    let b = random_matrix(rng, n, 1, 1.0);
    let c_row = random_matrix(rng, 1, n, 1.0);
    let mut c = Matrix::zeros(2, n);
    c.row_mut(0).copy_from(&c_row.row(0));
    let d = Matrix::from_row_slice(2, 1, &[0.0, 1.0]);
    let e = random_matrix(rng, n, 1, 1.0);
    AgentDynamics::new(a, b, c, d, e).unwrap()
}

/// Standard-form agent with unrestricted random `A` (entries in `[-1, 1)`).
pub fn random_agent(rng: &mut impl Rng, n: usize) -> AgentDynamics {
    let a = random_matrix(rng, n, n, 1.0);
    standard_agent(rng, a)
}

/// Standard-form agent whose `A` has spectral abscissa in `[-0.3, 0]`, so the
/// consensus motion never grows.
pub fn neutral_agent(rng: &mut impl Rng, n: usize) -> AgentDynamics {
    let margin = rng.random_range(0.0..0.3);
    let a = random_with_abscissa(rng, n, margin);
    standard_agent(rng, a)
}

pub fn scalar_agent(a: f64) -> AgentDynamics {
    AgentDynamics::new(
        Matrix::from_row_slice(1, 1, &[a]),
        Matrix::from_row_slice(1, 1, &[1.0]),
        Matrix::from_row_slice(2, 1, &[1.0, 0.0]),
        Matrix::from_row_slice(2, 1, &[0.0, 1.0]),
        Matrix::from_row_slice(1, 1, &[1.0]),
    )
    .unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Ratio of extreme singular values of `[B, AB, …, Aⁿ⁻¹B]`.
pub fn controllability_margin(a: &Matrix, b: &Matrix) -> f64 {
    let n = a.nrows();
    let m = b.ncols();
    let mut ctrb = Matrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        ctrb.view_mut((0, k * m), (n, m)).copy_from(&block);
        block = a * block;
    }
    let sv = ctrb.singular_values();
    sv.min() / sv.max()
}
