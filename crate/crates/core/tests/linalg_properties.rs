mod support;

use compatamg::linalg::{
    assemble, checked_inverse, m_adjoint, m_inner, operator_m_norm, realize_norm, spectral_norm,
};
use compatamg::{partition, schur_c, schur_f, CFPartition, Matrix, NormSpec, Vector};
use proptest::prelude::*;
use support::*;

fn random_partition(n: usize, seed: u64) -> CFPartition {
    let mut r = rng(seed);
    loop {
        let flags: Vec<bool> = (0..n).map(|_| rand::Rng::random::<f64>(&mut r) < 0.4).collect();
        let c: Vec<usize> = (0..n).filter(|&i| flags[i]).collect();
        if let Ok(p) = CFPartition::from_cpoints(n, c) {
            return p;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reassembly_is_exact(n in 2usize..10, seed in any::<u64>()) {
        let part = random_partition(n, seed);
        let a = gaussian(n, n, &mut rng(seed ^ 1));
        let p = partition(&a, &part).unwrap();
        prop_assert_eq!(p.reassemble(), a.clone());
        let again = assemble(&part, p.ff(), p.fc(), p.cf(), p.cc()).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn schur_complements_invert_diagonal_blocks(n in 3usize..10, seed in any::<u64>()) {
        let part = random_partition(n, seed);
        let a = gaussian(n, n, &mut rng(seed)) + Matrix::identity(n, n) * (n as f64).sqrt() * 2.0;
        let inv = checked_inverse(&a, "A").unwrap();
        let ip = partition(&inv, &part).unwrap();
        let ap = partition(&a, &part).unwrap();
        let sc_inv = checked_inverse(&schur_c(&ap).unwrap(), "S_C").unwrap();
        let sf_inv = checked_inverse(&schur_f(&ap).unwrap(), "S_F").unwrap();
        prop_assert!((ip.cc() - &sc_inv).norm() <= 1e-10 * sc_inv.norm());
        prop_assert!((ip.ff() - &sf_inv).norm() <= 1e-10 * sf_inv.norm());
    }

    #[test]
    fn m_adjoint_moves_across_inner_product(n in 2usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gaussian(n, n, &mut r);
        let m = random_spd(n, 0.3, &mut r);
        let x: Vector = gaussian(n, 1, &mut r).column(0).into();
        let y: Vector = gaussian(n, 1, &mut r).column(0).into();
        let lhs = m_inner(&(&t * &x), &y, &m);
        let rhs = m_inner(&x, &(m_adjoint(&t, &m).unwrap() * &y), &m);
        let scale = (m_inner(&(&t * &x), &(&t * &x), &m) * m_inner(&y, &y, &m)).sqrt().max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(lhs.abs()));
    }

    #[test]
    fn operator_norm_consistency(n in 2usize..9, seed in any::<u64>(), c in 0.01f64..100.0) {
        let mut r = rng(seed);
        let t = gaussian(n, n, &mut r);
        let eye = Matrix::identity(n, n);
        let plain = spectral_norm(&t).unwrap();
        prop_assert!((operator_m_norm(&t, &eye).unwrap() - plain).abs() <= 1e-12 * plain.max(1.0));
        let m = random_spd(n, 0.3, &mut r);
        let base = operator_m_norm(&t, &m).unwrap();
        let scaled = operator_m_norm(&t, &(&m * c)).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-10 * base);
    }

    #[test]
    fn sqrt_astar_a_squares(n in 2usize..9, seed in any::<u64>()) {
        let a = gaussian(n, n, &mut rng(seed)) + Matrix::identity(n, n) * 3.0;
        let root = realize_norm(&NormSpec::SqrtAstarA, &a).unwrap();
        let full = realize_norm(&NormSpec::AstarA, &a).unwrap();
        prop_assert!((&root * &root - &full).norm() <= 1e-10 * full.norm());
    }
}
