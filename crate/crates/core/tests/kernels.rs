mod common;

use common::*;
use diffh2::matkernel::{
    expm, is_hurwitz, lyapunov_residual, max_abs, riccati_residual, solve_lyapunov, solve_riccati,
    sym_eig, trace,
};
use diffh2::{Matrix, Vector};
use nalgebra::SymmetricEigen;
use rand::Rng;

/// Classic RK4 with step doubling; local error per step kept below `tol`.
fn integrate_linear(a: &Matrix, x0: &Vector, t_final: f64, tol: f64) -> Vector {
    let rk4 = |x: &Vector, h: f64| -> Vector {
        let k1 = a * x;
        let k2 = a * (x + &k1 * (h / 2.0));
        let k3 = a * (x + &k2 * (h / 2.0));
        let k4 = a * (x + &k3 * h);
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    };
    let mut t = 0.0;
    let mut h: f64 = 1e-3;
    let mut x = x0.clone();
    while t < t_final {
        h = h.min(t_final - t);
        let full = rk4(&x, h);
        let half = rk4(&rk4(&x, h / 2.0), h / 2.0);
        let err = (&full - &half).amax() / 15.0;
        let scale = half.amax().max(1.0);
        if err <= tol * scale {
            t += h;
            // Richardson extrapolation of the two estimates
            x = &half + (&half - &full) / 15.0;
            if err < tol * scale / 64.0 {
                h *= 2.0;
            }
        } else {
            h /= 2.0;
        }
    }
    x
}

#[test]
fn sym_eig_random_matches_reference_and_trace() {
    let mut rng = rng(11);
    for n in 1..=12 {
        let m = random_matrix(&mut rng, n, n, 3.0);
        let s = (&m + m.transpose()) * 0.5;
        let eig = sym_eig(&s).unwrap();
        let u = &eig.vectors;
        assert!((u.transpose() * u - Matrix::identity(n, n)).amax() < 1e-10);
        let recon = u * Matrix::from_diagonal(&eig.values) * u.transpose();
        let radius = eig.values.amax().max(1.0);
        assert!((recon - &s).amax() <= 1e-9 * radius);
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - trace(&s)).abs() <= 1e-10 * s.norm().max(1.0));

        let mut reference: Vec<f64> = SymmetricEigen::new(s.clone()).eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in eig.values.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-10 * radius);
        }
    }
}

#[test]
fn lyapunov_random_hurwitz_psd() {
    let mut rng = rng(12);
    for trial in 0..40 {
        let n = 1 + trial % 5;
        let margin = rng.random_range(0.05..1.0);
        let a = random_with_abscissa(&mut rng, n, margin);
        let q = random_psd(&mut rng, n, 1 + trial % n);
        let y = solve_lyapunov(&a, &q).unwrap();
        let resid = max_abs(&lyapunov_residual(&a, &y, &q));
        assert!(resid <= 1e-9 * max_abs(&q).max(1.0), "residual {resid}");
        assert!(sym_eig(&y).unwrap().values[0] >= -1e-10 * max_abs(&y).max(1.0));
    }
}

#[test]
fn riccati_random_stabilizable() {
    let mut rng = rng(13);
    for trial in 0..40 {
        let n = 1 + trial % 4;
        let m = 1 + trial % 2;
        let a = random_matrix(&mut rng, n, n, 1.5);
        let bt = random_matrix(&mut rng, n, m, 1.0);
        let q = random_psd(&mut rng, n, n) + Matrix::identity(n, n) * 0.1;
        let eps = 1e-3;
        let p = solve_riccati(&a, &bt, &q, eps).unwrap();
        let resid = max_abs(&riccati_residual(&a, &bt, &q, eps, &p));
        assert!(resid <= 1e-9 * (max_abs(&q) + eps).max(1.0));
        assert!(is_hurwitz(&(&a - &bt * bt.transpose() * &p)));
        let strict = a.transpose() * &p + &p * &a - &p * &bt * bt.transpose() * &p + &q;
        let top = sym_eig(&((&strict + strict.transpose()) * 0.5)).unwrap().values[n - 1];
        assert!(top <= -eps / 2.0, "largest eigenvalue {top}");
        assert!(sym_eig(&p).unwrap().values[0] > 0.0);
    }
}

#[test]
fn expm_matches_adaptive_integrator() {
    let mut rng = rng(14);
    for _ in 0..10 {
        let a = random_matrix(&mut rng, 4, 4, 1.0);
        let t = rng.random_range(0.5..2.0);
        let e = expm(&a, t);
        for col in 0..4 {
            let x0 = Vector::from_fn(4, |i, _| if i == col { 1.0 } else { 0.0 });
            let x = integrate_linear(&a, &x0, t, 1e-13);
            let scale = x.amax().max(1.0);
            assert!((e.column(col) - &x).amax() <= 1e-8 * scale);
        }
    }
}

#[test]
fn expm_matches_series_for_moderate_norm() {
    let mut rng = rng(15);
    for _ in 0..10 {
        let a = random_matrix(&mut rng, 4, 4, 1.0);
        // truncated Taylor series of A·t/64, then six squarings
        let t = 2.5;
        let scaled = &a * (t / 64.0);
        let mut term = Matrix::identity(4, 4);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled / k as f64;
            sum += &term;
        }
        for _ in 0..6 {
            sum = &sum * &sum;
        }
        let e = expm(&a, t);
        assert!((&e - &sum).amax() <= 1e-10 * sum.amax().max(1.0));
    }
}
