mod common;

use common::*;
use proptest::prelude::*;
use qcgeo::connection::{bianchi_residuals, contract_torsion, curvature, torsion, ConnectionForm};
use qcgeo::corpus;
use qcgeo::frame::{partial, value_part};
use qcgeo::linalg::dense;
use qcgeo::pipeline::*;
use qcgeo::report::einstein_flat_report;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn bianchi_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut pool = small_pool();
        pool.push(corpus::heisenberg(2));
        let m = random_model(&pool, &mut r);
        prop_assert!(m.validate_jacobi().is_ok());
        let w = random_connection(&m, 12, &mut r);
        let (first, second) = bianchi_residuals(&m, &w);
        prop_assert!(first.is_zero(), "{}: {}", m.name(), first);
        prop_assert!(second.is_zero(), "{}: {}", m.name(), second);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn torsion_is_affine(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&small_pool(), &mut r);
        let w = random_connection(&m, 8, &mut r);
        let x = random_connection(&m, 8, &mut r).horizontal_form();
        let c = nonzero_rational(&mut r);
        let base = torsion(&m, &w);
        let moved = torsion(&m, &w.plus(&x.scale(&c)));
        prop_assert_eq!(&moved - &base, partial(&x).scale(&c).horizontal());
    }

    #[test]
    fn qc_connection_ignores_the_kernel_offset(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&small_pool(), &mut r);
        let offset: Vec<_> = (0..3).map(|_| small_rational(&mut r)).collect();
        let a = qc_connection(&m).unwrap();
        let b = qc_connection_with_offset(&m, &offset).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn qcm_and_canonical_connections(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&small_pool(), &mut r);
        let m = adapt_complement(&m).unwrap().model;
        let qcm = qcm_connection(&m).unwrap();
        prop_assert!(dense::is_symmetric(&qcm.chi_v));

        let b = biquard_from_qcm(&m, &qcm).unwrap();
        prop_assert!(b.offset.bigrade(1, 0).is_zero());
        let omega_b = curvature(&m, &b.connection);
        let omega_qcm = curvature(&m, &qcm.omega_qcm);
        prop_assert_eq!(
            (&omega_b - &omega_qcm).bigrade(2, 0),
            contract_torsion(&qcgeo::frame::theta0(m.n()), &b.offset).bigrade(2, 0)
        );

        let d = duchemin_from_qcm(&m, &qcm).unwrap();
        prop_assert_eq!(d.torsion, &b.torsion - &value_part(&b.parts.t02, false));
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn four_form_criterion_in_rank_two(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pool = [corpus::heisenberg(2), corpus::sphere(2)];
        let m = random_model(&pool, &mut r);
        let m = adapt_complement(&m).unwrap().model;
        let qcm = qcm_connection(&m).unwrap();
        let qc = qc_connection(&m).unwrap();
        let e = einstein_flat_report(&m, &qcm, &qc.connection).unwrap();
        prop_assert!(e.four_form_closed && e.chi_scalar && e.traceless_ricci_zero && e.traceless_chi_zero);
    }
}

#[test]
fn four_form_criterion_on_bundled_models() {
    for m in corpus::bundled().into_iter().filter(|m| m.n() == 2) {
        let qcm = qcm_connection(&m).unwrap();
        let qc = qc_connection(&m).unwrap();
        let e = einstein_flat_report(&m, &qcm, &qc.connection).unwrap();
        let chain = [e.four_form_closed, e.chi_scalar, e.traceless_ricci_zero, e.traceless_chi_zero];
        assert!(chain.iter().all(|&x| x == chain[0]), "{}: {chain:?}", m.name());
    }
}

#[test]
fn adaptation_round_trip() {
    let mut r = rng(7);
    for m in corpus::bundled() {
        let chi = qcm_connection(&m).unwrap().chi_v;
        for _ in 0..10 {
            let shifted = shift_complement(&m, &random_eh_shift(m.n(), &mut r));
            let back = adapt_complement(&shifted).unwrap();
            assert_eq!(qcm_connection(&back.model).unwrap().chi_v, chi, "{}", m.name());
        }
    }
}

#[test]
fn flat_connection_has_zero_bianchi_terms() {
    let m = corpus::heisenberg(1);
    let (a, b) = bianchi_residuals(&m, &ConnectionForm::zero(&m));
    assert!(a.is_zero() && b.is_zero());
}
