mod common;

use common::formulas::*;
use qcgeo::connection::{curvature, tensorial_derivative, torsion, ConnectionForm, Tautological};
use qcgeo::corpus;
use qcgeo::frame::theta0;
use qcgeo::model::CoframeModel;
use qcgeo::pipeline::*;
use qcgeo::report::{curvature_module_membership, scalar_along, trivial_references};
use qcgeo::scalar::{int, Scalar};

/// `(model, sign)` with sign 1 on the sphere and −1 on the hyperbolic model.
fn models() -> Vec<(CoframeModel, i64)> {
    vec![(corpus::sphere(1), 1), (corpus::hyperbolic(1), -1), (corpus::sphere(2), 1)]
}

#[test]
fn projection_connection() {
    for (m, sign) in models() {
        let n = m.n();
        let w = ConnectionForm::isotropy(&m);
        assert_eq!(torsion(&m, &w), projection_torsion(n, sign), "{}", m.name());
        assert_eq!(curvature(&m, &w), projection_curvature(n, sign), "{}", m.name());
        assert_eq!(tensorial_derivative(&m, &w, Tautological::Sigma), projection_d_sigma(n), "{}", m.name());
        let d = torsion_decomposition(&m, &w);
        assert_eq!(d.theta_q, theta0(n));
        assert!(d.theta_minus1.is_zero() && d.theta_1.is_zero() && d.theta_2.is_zero());
    }
}

#[test]
fn qc_connection_is_an_eh_shift() {
    for (m, sign) in models() {
        let n = m.n();
        let qc = qc_connection(&m).unwrap();
        assert_eq!(qc.correction, eh_diagonal(n).scale(&int(sign)), "{}", m.name());
        let om = curvature(&m, &qc.connection);
        assert_eq!(om, &projection_curvature(n, sign) + &eh_curvature_term(n), "{}", m.name());
        assert_eq!(trace_omega_components(&m, &qc.connection), [0, 0, 0].map(int));
    }
}

#[test]
fn printed_eh_sign_breaks_the_torsion() {
    // the printed correction is −e^a⊗EH_a on the sphere and +e^a⊗EH_a on the
    // hyperbolic model, opposite to the computed ones; the printed curvature is
    // that of the printed correction
    for (m, sign) in models() {
        let n = m.n();
        let printed = ConnectionForm::isotropy(&m).plus(&eh_diagonal(n).scale(&int(-sign)));
        assert_ne!(torsion(&m, &printed), theta0(n));
        assert_eq!(curvature(&m, &printed), &projection_curvature(n, sign) - &eh_curvature_term(n));
    }
}

#[test]
fn curvature_in_trivial_isotypes() {
    let mut scalars: Vec<(Scalar, Scalar)> = Vec::new();
    for (m, _) in models().into_iter().take(2) {
        let om = curvature(&m, &qc_connection(&m).unwrap().connection);
        let mem = curvature_module_membership(&om);
        assert!(mem.in_sum && mem.only_trivial(), "{}", m.name());
        let (r1, r3) = trivial_references(m.n());
        scalars.push((scalar_along(&mem.trivial_part(0), &r1), scalar_along(&mem.trivial_part(2), &r3)));
    }
    let [(s1, s3), (h1, h3)] = [scalars[0].clone(), scalars[1].clone()];
    assert_eq!(h1, -s1.clone());
    assert_ne!(s1, int(0));
    assert_eq!(h3, s3);
}

#[test]
fn einstein_flags_and_scalar_curvature() {
    for (m, want) in [(corpus::sphere(1), 36), (corpus::sphere(2), 104), (corpus::hyperbolic(1), -36)] {
        let r = qcgeo::report::geometry_report(&m).unwrap();
        assert_eq!(r.qc_einstein, Some(true));
        assert_eq!(r.flat, Some(false));
        assert_eq!(r.scalar_curvature, Some(want.to_string()), "{}", m.name());
        let qcm = qcm_connection(&m).unwrap();
        assert_eq!(qcm.lambda(), int(if want > 0 { -1 } else { 1 }));
    }
}

#[test]
fn heisenberg_is_flat() {
    for n in 1..=2 {
        let m = corpus::heisenberg(n);
        let qc = qc_connection(&m).unwrap();
        assert!(qc.correction.is_zero());
        assert!(curvature(&m, &qc.connection).is_zero());
        let r = qcgeo::report::geometry_report(&m).unwrap();
        assert_eq!((r.flat, r.qc_einstein, r.scalar_curvature.as_deref()), (Some(true), Some(true), Some("0")));
    }
}
