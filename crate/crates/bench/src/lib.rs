//! Fixed problem instances used by the criterion benchmarks.

use diffh2::graph::Edge;
use diffh2::{AgentDynamics, Matrix, WeightedGraph};

/// Chain of `n` integrators with a light damping term, one input, one disturbance.
pub fn integrator_chain(n: usize) -> AgentDynamics {
    let a = Matrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            1.0
        } else if i == n - 1 {
            -0.1 * (j + 1) as f64
        } else {
            0.0
        }
    });
    let b = Matrix::from_fn(n, 1, |i, _| if i == n - 1 { 1.0 } else { 0.0 });
    let mut c = Matrix::zeros(n + 1, n);
    for i in 0..n {
        c[(i, i)] = 1.0;
    }
    let mut d = Matrix::zeros(n + 1, 1);
    d[(n, 0)] = 1.0;
    let e = Matrix::from_fn(n, 1, |_, _| 1.0);
    AgentDynamics::new(a, b, c, d, e).expect("well-formed agent")
}

/// Weighted ring on `nodes` nodes (1-based), weights cycling through 1, 2, 3.
pub fn ring(nodes: usize) -> WeightedGraph {
    let edges = (0..nodes)
        .map(|i| Edge {
            i: i + 1,
            j: (i + 1) % nodes + 1,
            weight: 1.0 + (i % 3) as f64,
        })
        .collect();
    WeightedGraph::new(nodes, edges).expect("ring is valid")
}

/// A Hurwitz matrix with a spread of time scales, for the Lyapunov kernel.
pub fn stable_matrix(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            -1.0 - i as f64
        } else {
            0.3 * (((i * 7 + j * 3) % 5) as f64 - 2.0) / n as f64
        }
    })
}
