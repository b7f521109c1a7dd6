//! Dense matrix kernels shared by the analysis and synthesis layers.
//!
//! Everything here works on small dense `f64` matrices (agent dimension or
//! network dimension at desk scale). The Lyapunov solver vectorizes into an
//! `n² × n²` linear system, so it is only meant for `n` up to a few dozen.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Off-diagonal Frobenius mass below which a Jacobi sweep is considered converged,
/// relative to the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const NEWTON_MAX_ITERS: usize = 100;
/// Relative symmetry tolerance accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Largest absolute entry; zero for empty matrices.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &Matrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn check_finite(m: &Matrix, name: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(name.to_string()))
    }
}

fn check_square(m: &Matrix, name: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

fn asymmetry(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Eigenvalues in ascending order.
    pub values: Vector,
    /// Orthogonal matrix whose column `k` pairs with `values[k]`.
    pub vectors: Matrix,
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius mass drops to
/// [`JACOBI_TOL`] times the Frobenius norm of `s`.
pub fn sym_eig(s: &Matrix) -> Result<SymEig> {
    let n = check_square(s, "symmetric input")?;
    check_finite(s, "symmetric input")?;
    let asym = asymmetry(s);
    if asym > SYMMETRY_TOL * max_abs(s).max(1.0) {
        return Err(Error::NonSymmetric { asymmetry: asym });
    }

    let mut a = symmetrize(s);
    let mut v = Matrix::identity(n, n);
    let target = JACOBI_TOL * a.norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            routine: "Jacobi eigensolver",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = Vector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEig { values, vectors })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

// One Jacobi rotation zeroing a[(p, q)]; a <- J^T a J, v <- v J.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.nrows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Solves `Aᵀ Y + Y A + Q = 0` for `Y`.
///
/// The equation is vectorized into `(I ⊗ Aᵀ + Aᵀ ⊗ I) vec(Y) = −vec(Q)` and
/// solved by LU with partial pivoting, followed by one step of iterative
/// refinement. The returned `Y` is symmetrized.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = check_square(a, "Lyapunov state matrix")?;
    if q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "Lyapunov right-hand side must be {n}x{n}, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    check_finite(a, "Lyapunov state matrix")?;
    check_finite(q, "Lyapunov right-hand side")?;
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }

    let at = a.transpose();
    let eye = Matrix::identity(n, n);
    let op = eye.kronecker(&at) + at.kronecker(&eye);
    let rhs = -Vector::from_column_slice(q.as_slice());

    let lu = op.clone().lu();
    let u = lu.u();
    let pivot_max = u.diagonal().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let pivot_min = u.diagonal().iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let dim = (n * n) as f64;
    if pivot_max == 0.0 || pivot_min <= dim * f64::EPSILON * pivot_max {
        return Err(Error::SingularLyapunov);
    }
    let mut y = lu.solve(&rhs).ok_or(Error::SingularLyapunov)?;
    let resid = &rhs - &op * &y;
    if let Some(dy) = lu.solve(&resid) {
        y += dy;
    }
    if y.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularLyapunov);
    }
    Ok(symmetrize(&Matrix::from_column_slice(n, n, y.as_slice())))
}

/// Residual `Aᵀ Y + Y A + Q`.
pub fn lyapunov_residual(a: &Matrix, y: &Matrix, q: &Matrix) -> Matrix {
    a.transpose() * y + y * a + q
}

/// Default strictness shift for Riccati and Lyapunov inequalities: `1e-6·max(1, ‖Q‖_max)`.
pub fn default_eps(q: &Matrix) -> f64 {
    1e-6 * max_abs(q).max(1.0)
}

/// Residual `Aᵀ P + P A − P Bt Btᵀ P + Q + eps·I`.
pub fn riccati_residual(a: &Matrix, bt: &Matrix, q: &Matrix, eps: f64, p: &Matrix) -> Matrix {
    let n = a.nrows();
    let pb = p * bt;
    a.transpose() * p + p * a - &pb * pb.transpose() + q + Matrix::identity(n, n) * eps
}

/// Stabilizing solution of `Aᵀ P + P A − P Bt Btᵀ P + Q + eps·I = 0`.
///
/// Newton-Kleinman iteration, one Lyapunov solve per step. The initial
/// stabilizing gain is `0` when `A` is already Hurwitz and otherwise comes
/// from the shifted-Lyapunov construction: with `β > ‖A‖_∞`, solve
/// `(A + βI) Z + Z (A + βI)ᵀ = 2 Bt Btᵀ` and take `F₀ = Btᵀ Z⁻¹`.
/// The solution makes `A − Bt Btᵀ P` Hurwitz and, for `eps > 0`, strictly
/// satisfies the inequality `Aᵀ P + P A − P Bt Btᵀ P + Q < 0`.
pub fn solve_riccati(a: &Matrix, bt: &Matrix, q: &Matrix, eps: f64) -> Result<Matrix> {
    let n = check_square(a, "Riccati state matrix")?;
    if bt.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "Riccati input matrix must have {n} rows, got {}",
            bt.nrows()
        )));
    }
    if q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "Riccati weight must be {n}x{n}, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    check_finite(a, "Riccati state matrix")?;
    check_finite(bt, "Riccati input matrix")?;
    check_finite(q, "Riccati weight")?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Riccati shift must be a finite nonnegative number, got {eps}"
        )));
    }

    let q_shift = symmetrize(q) + Matrix::identity(n, n) * eps;
    let scale = (max_abs(q) + eps).max(1.0);
    let mut feedback = initial_feedback(a, bt, &q_shift)?;

    let mut best: Option<(f64, Matrix)> = None;
    let mut stalled = 0;
    for _ in 0..NEWTON_MAX_ITERS {
        let closed = a - bt * &feedback;
        let rhs = &q_shift + feedback.transpose() * &feedback;
        let p = solve_lyapunov(&closed, &rhs).map_err(|_| Error::NoConvergence {
            routine: "Newton-Kleinman",
            iterations: NEWTON_MAX_ITERS,
        })?;
        let resid = max_abs(&riccati_residual(a, bt, q, eps, &p));
        if !resid.is_finite() {
            break;
        }
        feedback = bt.transpose() * &p;
        if resid <= 1e-12 * scale {
            return Ok(p);
        }
        match &best {
            Some((r, _)) if resid >= 0.5 * r => stalled += 1,
            _ => stalled = 0,
        }
        if best.as_ref().is_none_or(|(r, _)| resid < *r) {
            best = Some((resid, p));
        }
        if stalled >= 3 {
            break;
        }
    }
    // Newton stagnates at round-off level on poorly scaled problems; accept that
    // plateau when it already meets the residual contract.
    match best {
        Some((r, p)) if r <= 1e-9 * scale && is_hurwitz(&(a - bt * bt.transpose() * &p)) => Ok(p),
        _ => Err(Error::NoConvergence {
            routine: "Newton-Kleinman",
            iterations: NEWTON_MAX_ITERS,
        }),
    }
}

fn initial_feedback(a: &Matrix, bt: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let m = bt.ncols();
    if is_hurwitz(a) {
        return Ok(Matrix::zeros(m, n));
    }
    let stabilizes = |f: &Matrix| f.iter().all(|x| x.is_finite()) && is_hurwitz(&(a - bt * f));
    if let Some(f) = bass_feedback(a, bt).filter(stabilizes) {
        return Ok(f);
    }
    // Bass's Gramian is too ill-conditioned for long integrator chains and the like
    match sign_riccati(a, bt, q) {
        Some(p) => {
            let f = bt.transpose() * p;
            if stabilizes(&f) {
                Ok(f)
            } else {
                Err(Error::NotStabilizable)
            }
        }
        None => Err(Error::NotStabilizable),
    }
}

fn bass_feedback(a: &Matrix, bt: &Matrix) -> Option<Matrix> {
    let n = a.nrows();
    let beta = inf_norm(a) + 1.0;
    let shifted = a + Matrix::identity(n, n) * beta;
    // −(A + βI) Z − Z (A + βI)ᵀ + 2 Bt Btᵀ = 0
    let z = solve_lyapunov(&(-shifted.transpose()), &(bt * bt.transpose() * 2.0)).ok()?;
    Some(z.cholesky()?.solve(bt).transpose())
}

/// Riccati solution from the matrix sign of the Hamiltonian
/// `H = [A, −Bt Btᵀ; −Q, −Aᵀ]`, by scaled Newton iteration.
fn sign_riccati(a: &Matrix, bt: &Matrix, q: &Matrix) -> Option<Matrix> {
    let n = a.nrows();
    let g = bt * bt.transpose();
    let mut z = Matrix::zeros(2 * n, 2 * n);
    z.view_mut((0, 0), (n, n)).copy_from(a);
    z.view_mut((0, n), (n, n)).copy_from(&(-g));
    z.view_mut((n, 0), (n, n)).copy_from(&(-q));
    z.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));
    for _ in 0..100 {
        let lu = z.clone().lu();
        let det = lu.determinant().abs();
        let inv = lu.try_inverse()?;
        let c = if det.is_finite() && det > 0.0 {
            det.powf(-1.0 / (2 * n) as f64)
        } else {
            1.0
        };
        let next = (&z * c + inv / c) * 0.5;
        let change = (&next - &z).abs().sum();
        let size = next.abs().sum();
        z = next;
        if !size.is_finite() {
            return None;
        }
        if change <= 1e-13 * size {
            break;
        }
    }
    let eye = Matrix::identity(n, n);
    // (W + I) [I; P] = 0
    let mut lhs = Matrix::zeros(2 * n, n);
    lhs.view_mut((0, 0), (n, n)).copy_from(&z.view((0, n), (n, n)));
    lhs.view_mut((n, 0), (n, n)).copy_from(&(z.view((n, n), (n, n)) + &eye));
    let mut rhs = Matrix::zeros(2 * n, n);
    rhs.view_mut((0, 0), (n, n)).copy_from(&(-(z.view((0, 0), (n, n)) + &eye)));
    rhs.view_mut((n, 0), (n, n)).copy_from(&(-z.view((n, 0), (n, n))));
    let p = lhs.svd(true, true).solve(&rhs, 1e-14).ok()?;
    p.iter().all(|x| x.is_finite()).then(|| symmetrize(&p))
}

/// Hurwitz test via the Lyapunov equation `Aᵀ Y + Y A + I = 0`: `A` is Hurwitz
/// iff the equation is solvable and `Y` is positive definite.
pub fn is_hurwitz(a: &Matrix) -> bool {
    if a.nrows() != a.ncols() || a.iter().any(|x| !x.is_finite()) {
        return false;
    }
    let n = a.nrows();
    if n == 0 {
        return true;
    }
    let Ok(y) = solve_lyapunov(a, &Matrix::identity(n, n)) else {
        return false;
    };
    match sym_eig(&y) {
        Ok(eig) => {
            let norm = eig.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            eig.values[0] > 1e-10 * norm
        }
        Err(_) => false,
    }
}

/// Largest real part of the eigenvalues of `A`, located by bisection on the
/// Hurwitz test of `A − sI`.
pub fn spectral_abscissa(a: &Matrix) -> Result<f64> {
    let n = check_square(a, "state matrix")?;
    check_finite(a, "state matrix")?;
    if n == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let bound = inf_norm(a) + 1.0;
    let eye = Matrix::identity(n, n);
    let (mut lo, mut hi) = (-bound, bound);
    let tol = 1e-10 * bound;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_hurwitz(&(a - &eye * mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Matrix exponential `e^{A t}` (scaling and squaring with a Padé approximant).
pub fn expm(a: &Matrix, t: f64) -> Matrix {
    (a * t).exp()
}

/// Builds a matrix from nested row arrays; every row must have the same length.
pub fn from_rows(rows: &[Vec<f64>], name: &str) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(k) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "{name}: row {} has {} entries, expected {ncols}",
            k + 1,
            rows[k].len()
        )));
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    check_finite(&m, name)?;
    Ok(m)
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `Σ` of the diagonal.
pub fn trace(m: &Matrix) -> f64 {
    m.diagonal().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn m(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn sym_eig_diagonal() {
        let e = sym_eig(&m(2, 2, &[3.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 3.0]);
        assert!(close(e.vectors[(1, 0)].abs(), 1.0, 1e-15));
        assert!(close(e.vectors[(0, 1)].abs(), 1.0, 1e-15));
    }

    #[test]
    fn sym_eig_small_known_spectra() {
        let e = sym_eig(&m(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!(close(e.values[0], -1.0, 1e-14) && close(e.values[1], 1.0, 1e-14));
        let e = sym_eig(&m(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!(close(e.values[0], 1.0, 1e-14) && close(e.values[1], 3.0, 1e-14));
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let err = sym_eig(&m(2, 2, &[1.0, 2.0, 0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::NonSymmetric { .. }));
    }

    #[test]
    fn sym_eig_zero_and_empty() {
        let e = sym_eig(&Matrix::zeros(3, 3)).unwrap();
        assert!(e.values.iter().all(|&x| x == 0.0));
        assert_eq!(sym_eig(&Matrix::zeros(0, 0)).unwrap().values.len(), 0);
    }

    #[test]
    fn lyapunov_scalar_and_diagonal() {
        let y = solve_lyapunov(&m(1, 1, &[-1.0]), &m(1, 1, &[1.0])).unwrap();
        assert!(close(y[(0, 0)], 0.5, 1e-15));
        let y = solve_lyapunov(&m(1, 1, &[-1.0]), &m(1, 1, &[2.0])).unwrap();
        assert!(close(y[(0, 0)], 1.0, 1e-15));
        let y = solve_lyapunov(&m(2, 2, &[-1.0, 0.0, 0.0, -2.0]), &Matrix::identity(2, 2)).unwrap();
        assert!(close(y[(0, 0)], 0.5, 1e-15));
        assert!(close(y[(1, 1)], 0.25, 1e-15));
        assert!(close(y[(0, 1)], 0.0, 1e-15));
    }

    #[test]
    fn lyapunov_singular_for_imaginary_axis() {
        let err = solve_lyapunov(&m(2, 2, &[0.0, 1.0, -1.0, 0.0]), &Matrix::identity(2, 2));
        assert_eq!(err.unwrap_err(), Error::SingularLyapunov);
    }

    #[test]
    fn lyapunov_dimension_mismatch() {
        let err = solve_lyapunov(&Matrix::identity(2, 2), &Matrix::identity(3, 3));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn riccati_scalar_integrator() {
        let p = solve_riccati(&m(1, 1, &[0.0]), &m(1, 1, &[1.0]), &m(1, 1, &[1.0]), 0.0).unwrap();
        assert!(close(p[(0, 0)], 1.0, 1e-12));
    }

    #[test]
    fn riccati_scalar_unstable_zero_weight() {
        let p = solve_riccati(&m(1, 1, &[1.0]), &m(1, 1, &[1.0]), &m(1, 1, &[0.0]), 0.0).unwrap();
        assert!(close(p[(0, 0)], 2.0, 1e-12));
        // closed loop 1 - 2 = -1
        assert!(close(1.0 - p[(0, 0)], -1.0, 1e-12));
    }

    #[test]
    fn riccati_scalar_design_instance() {
        // P = sqrt((Q + eps) / Bt²) with Bt = 2/3
        let eps = 1e-9;
        let p = solve_riccati(&m(1, 1, &[0.0]), &m(1, 1, &[2.0 / 3.0]), &m(1, 1, &[2.0]), eps).unwrap();
        let expected = ((2.0 + eps) * 9.0 / 4.0_f64).sqrt();
        assert!(close(p[(0, 0)], expected, 1e-12));
        assert!(close(p[(0, 0)], 2.12132, 1e-5));
    }

    #[test]
    fn riccati_long_integrator_chain() {
        let n = 8;
        let a = Matrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
        let b = Matrix::from_fn(n, 1, |i, _| if i == n - 1 { 1.0 } else { 0.0 });
        let q = Matrix::identity(n, n);
        let p = solve_riccati(&a, &b, &q, 1e-6).unwrap();
        assert!(max_abs(&riccati_residual(&a, &b, &q, 1e-6, &p)) <= 1e-9 * (1.0 + 1e-6));
        assert!(is_hurwitz(&(&a - &b * b.transpose() * &p)));
    }

    #[test]
    fn riccati_not_stabilizable() {
        // unstable mode with no input authority
        let a = m(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let bt = m(2, 1, &[0.0, 1.0]);
        let err = solve_riccati(&a, &bt, &Matrix::identity(2, 2), 1e-6).unwrap_err();
        assert_eq!(err, Error::NotStabilizable);
    }

    #[test]
    fn riccati_rejects_negative_eps() {
        let err = solve_riccati(&m(1, 1, &[0.0]), &m(1, 1, &[1.0]), &m(1, 1, &[1.0]), -1.0);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hurwitz_examples() {
        assert!(is_hurwitz(&m(1, 1, &[-1.0])));
        assert!(!is_hurwitz(&m(2, 2, &[0.0, 1.0, -1.0, 0.0])));
        assert!(is_hurwitz(&m(2, 2, &[0.0, 1.0, -2.0, -3.0])));
        assert!(!is_hurwitz(&m(2, 2, &[1.0, 0.0, 0.0, 2.0])));
        assert!(!is_hurwitz(&m(1, 1, &[0.0])));
    }

    #[test]
    fn abscissa_of_companion() {
        // eigenvalues -1, -2
        let s = spectral_abscissa(&m(2, 2, &[0.0, 1.0, -2.0, -3.0])).unwrap();
        assert!(close(s, -1.0, 1e-7));
    }

    #[test]
    fn expm_examples() {
        let z = expm(&Matrix::zeros(3, 3), 5.0);
        assert_eq!(z, Matrix::identity(3, 3));
        let e = expm(&m(1, 1, &[-1.0]), 1.0);
        assert!(close(e[(0, 0)], (-1.0f64).exp(), 1e-15));
        let e = expm(&m(2, 2, &[0.0, 1.0, 0.0, 0.0]), 2.0);
        assert!((e - m(2, 2, &[1.0, 2.0, 0.0, 1.0])).amax() < 1e-15);
    }
}
