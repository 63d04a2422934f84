mod support;

use compatamg::linalg::{operator_m_norm, realize_norm, NormTag};
use compatamg::transfer::{ideal_z, p_ideal};
use compatamg::{
    air_cpoint_residual, build_pi, conv_factor, iterate, partition, pi_m_norm, relax_propagator,
    two_grid_propagator, CFPartition, IterationHistory, Matrix, ProblemKind, RelaxSpec,
    TransferPair, TwoGridSpec, Vector,
};
use support::*;

fn vector(n: usize, seed: u64) -> Vector {
    gaussian(n, 1, &mut rng(seed)).column(0).into()
}

/// `R = R_ideal(A)`, `W = 0`.
fn air_pair(a: &Matrix, part: &CFPartition) -> TransferPair {
    let z = ideal_z(&partition(a, part).unwrap()).unwrap();
    TransferPair::from_zw(part, &z, &Matrix::zeros(part.n_f(), part.n_c())).unwrap()
}

/// `R = P = P_ideal(A)`.
fn galerkin_ideal(a: &Matrix, part: &CFPartition) -> TransferPair {
    let p = p_ideal(&partition(a, part).unwrap()).unwrap();
    TransferPair::from_full(part, p.clone(), p).unwrap()
}

fn jacobi_cycle(pair: TransferPair) -> TwoGridSpec {
    TwoGridSpec::new(pair, RelaxSpec::jacobi(2.0 / 3.0, 1), RelaxSpec::jacobi(2.0 / 3.0, 1))
}

#[test]
fn iteration_matches_propagator_powers() {
    let n = 24;
    let a = generate_advdiff(n);
    let part = alternate(n);
    let spec = jacobi_cycle(galerkin_ideal(&a, &part));
    let e = two_grid_propagator(&a, &spec).unwrap();
    let x_star = vector(n, 1);
    let b = &a * &x_star;
    let x0 = vector(n, 2);
    let mut ek = &x0 - &x_star;
    for k in 1..=5 {
        ek = &e * ek;
        let x = iterate(&a, &spec, &b, &x0, k).unwrap().x;
        let err = &x - &x_star;
        assert!((&err - &ek).norm() <= 1e-10 * ek.norm().max(1e-300), "k = {k}");
    }
}

fn generate_advdiff(n: usize) -> Matrix {
    compatamg::generate(&compatamg::ProblemSpec::advection_diffusion(n, 0.01)).unwrap()
}

#[test]
fn coarse_correction_annihilates_interpolation_range() {
    for seed in 0..10 {
        let a = random_problem(16, seed);
        let part = alternate(16);
        let pair = random_zw(&part, &mut rng(seed));
        let (pi, _) = build_pi(&a, &pair).unwrap();
        let resid = (Matrix::identity(16, 16) - pi) * pair.p();
        assert!(resid.norm() <= 1e-12, "{}", resid.norm());
    }
}

#[test]
fn random_pair_diverges_in_every_norm() {
    let a = random_problem(20, 42);
    let part = alternate(20);
    let pair = random_zw(&part, &mut rng(42));
    let (pi, _) = build_pi(&a, &pair).unwrap();
    let cgc = Matrix::identity(20, 20) - &pi;
    assert!(pi_m_norm(&pi, &Matrix::identity(20, 20)).unwrap() > 1.0 + 1e-3);
    let mut realized = 0;
    for tag in NormTag::BUILTIN {
        let Ok(m) = realize_norm(&tag.spec().unwrap(), &a) else { continue };
        realized += 1;
        assert!(operator_m_norm(&cgc, &m).unwrap() > 1.0, "{}", tag.expr());
    }
    assert_eq!(realized, 5, "all but the A-norm exist for nonsymmetric A");
    let spec = TwoGridSpec::new(pair, RelaxSpec::NONE, RelaxSpec::NONE);
    let rho = conv_factor(&two_grid_propagator(&a, &spec).unwrap()).unwrap();
    assert!(rho >= 1.0 - 1e-12, "I − Π always has eigenvalue 1: {rho}");
}

#[test]
fn unrelaxed_cycle_norms() {
    let a = random_problem(14, 3);
    let part = alternate(14);
    let pair = random_zw(&part, &mut rng(3));
    let spec = TwoGridSpec::new(pair.clone(), RelaxSpec::NONE, RelaxSpec::NONE);
    let e = two_grid_propagator(&a, &spec).unwrap();
    let (pi, _) = build_pi(&a, &pair).unwrap();
    let rho = conv_factor(&e).unwrap();
    let mut r = rng(4);
    for trial in 0..5 {
        let m = random_spd(14, 0.2 + trial as f64, &mut r);
        let e_norm = operator_m_norm(&e, &m).unwrap();
        assert!((e_norm - pi_m_norm(&pi, &m).unwrap()).abs() <= 1e-10 * e_norm);
        assert!(rho <= e_norm * (1.0 + 1e-12));
    }
}

#[test]
fn ideal_restriction_with_f_relaxation_is_direct() {
    let n = 64;
    let a = problem(ProblemKind::Advection1D, n);
    let part = alternate(n);
    let spec = TwoGridSpec::new(air_pair(&a, &part), RelaxSpec::NONE, RelaxSpec::f_exact());
    let e = two_grid_propagator(&a, &spec).unwrap();
    assert!(conv_factor(&e).unwrap() <= 1e-12);
    let b = vector(n, 5);
    let hist = iterate(&a, &spec, &b, &Vector::zeros(n), 1).unwrap();
    assert!(hist.residuals[1] <= 1e-13 * hist.residuals[0]);
}

#[test]
fn galerkin_ideal_on_laplacian_is_a_orthogonal() {
    let a = problem(ProblemKind::Laplacian1D, 32);
    let part = alternate(32);
    let spec = TwoGridSpec::new(galerkin_ideal(&a, &part), RelaxSpec::NONE, RelaxSpec::NONE);
    let e = two_grid_propagator(&a, &spec).unwrap();
    assert!((operator_m_norm(&e, &a).unwrap() - 1.0).abs() <= 1e-10);
}

#[test]
fn fixed_point_has_zero_history() {
    let a = random_problem(12, 1);
    let part = alternate(12);
    let x = vector(12, 9);
    let spec = jacobi_cycle(random_zw(&part, &mut rng(1)));
    let hist = iterate(&a, &spec, &(&a * &x), &x, 4).unwrap();
    assert!(hist.residuals.iter().all(|&r| r <= 1e-13 * (&a * &x).norm()));
}

#[test]
fn observed_rate_matches_conv_factor() {
    let n = 32;
    let a = problem(ProblemKind::Laplacian1D, n);
    let cases = [
        (alternate(n), Vector::zeros(n)),
        (CFPartition::from_cpoints(n, (2..n).step_by(3).collect()).unwrap(), &a * vector(n, 8)),
    ];
    for (part, b) in cases {
        let spec = jacobi_cycle(galerkin_ideal(&a, &part));
        let rho = conv_factor(&two_grid_propagator(&a, &spec).unwrap()).unwrap();
        let hist = iterate(&a, &spec, &b, &vector(n, 7), 30).unwrap();
        let rate = hist.asymptotic_rate().unwrap();
        assert!((rate - rho).abs() <= 0.1 * rho, "rate {rate} vs ρ {rho}");
        assert!(hist.residuals.windows(2).skip(5).all(|w| w[1] < w[0]));
    }
}

#[test]
fn air_residual_grows_with_perturbation() {
    let n = 32;
    let a = problem(ProblemKind::Advection1D, n);
    let part = alternate(n);
    let base = air_pair(&a, &part);
    let noise = gaussian(part.n_f(), part.n_c(), &mut rng(11));
    let z = base.z().unwrap();
    let w = Matrix::zeros(part.n_f(), part.n_c());
    let e = vector(n, 12);
    let at = |delta: f64| {
        let pair = TransferPair::from_zw(&part, &(&z + &noise * delta), &w).unwrap();
        air_cpoint_residual(&a, &pair, &e).unwrap()
    };
    assert!(at(0.0) <= 1e-12 * e.norm());
    let deltas = [1e-8, 1e-6, 1e-4, 1e-2];
    let vals: Vec<f64> = deltas.iter().map(|&d| at(d)).collect();
    assert!(vals.windows(2).all(|v| v[1] > v[0]), "{vals:?}");
    // Linear onset: residual/δ is roughly constant for small δ.
    let slopes: Vec<f64> = vals.iter().zip(deltas).map(|(v, d)| v / d).collect();
    assert!((slopes[0] / slopes[1] - 1.0).abs() < 0.05, "{slopes:?}");
}

#[test]
fn c_supported_error_is_removed_exactly() {
    let n = 20;
    let a = problem(ProblemKind::Advection1D, n);
    let part = alternate(n);
    let (pi, _) = build_pi(&a, &air_pair(&a, &part)).unwrap();
    let e = vector(n, 13);
    let after = &e - &pi * &e;
    for &i in part.cpoints() {
        assert!(after[i].abs() <= 1e-12 * e.norm());
    }
    for &i in part.fpoints() {
        assert!((after[i] - e[i]).abs() <= 1e-12 * e.norm());
    }
}

#[test]
fn relaxation_sweeps_compose() {
    let a = problem(ProblemKind::Laplacian1D, 10);
    let part = alternate(10);
    let one = relax_propagator(&a, &part, &RelaxSpec::jacobi(0.8, 1)).unwrap();
    let three = relax_propagator(&a, &part, &RelaxSpec::jacobi(0.8, 3)).unwrap();
    assert!((&one * &one * &one - three).norm() <= 1e-13);
}

#[test]
fn history_serializes() {
    let hist = IterationHistory {
        residuals: vec![1.0, 0.5, 0.25],
        x: Vector::zeros(2),
    };
    let json = serde_json::to_string(&hist).unwrap();
    assert_eq!(json, r#"{"residuals":[1.0,0.5,0.25]}"#);
    let csv = hist.to_csv();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(2).unwrap().starts_with("1,5.0"));
}
