//! The acceptance gate: one line per criterion.
//!
//! Every criterion is a list of exact checks. A few checks compare against
//! printed closed forms whose signs cannot be reproduced under one consistent
//! convention; those are listed in `KNOWN_FAILURES`, and next to each one there
//! is a passing check of the corrected form. The run fails if the set of
//! failing checks differs from that list in either direction.

mod common;

use common::formulas::*;
use common::*;
use qcgeo::connection::{bianchi_residuals, curvature, tensorial_derivative, torsion, ConnectionForm, Tautological};
use qcgeo::corpus;
use qcgeo::frame::{partial, value_part};
use qcgeo::linalg::dense;
use qcgeo::model::CoframeModel;
use qcgeo::pipeline::*;
use qcgeo::report::{curvature_module_membership, einstein_flat_report, geometry_report, scalar_along, trivial_references};
use qcgeo::scalar::{int, q};
use qcgeo::spaces::split_by_grade;
use qcgeo::{hwv, repdims};
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const KNOWN_FAILURES: &[&str] = &[
    "1: (Θ_B)^{1,1} as printed",
    "1: (Θ_B)^{0,2} as printed",
    "2: sphere_n1 correction with printed sign",
    "2: sphere_n1 Ω_qc as printed",
    "2: hyperbolic_n1 correction with printed sign",
    "2: hyperbolic_n1 Ω_qc as printed",
    "2: sphere_n2 correction with printed sign",
    "2: sphere_n2 Ω_qc as printed",
];

struct Criterion {
    id: u8,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u8, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((format!("{}: {}", self.id, name.into()), ok));
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.check(format!("finished in {:.1?} (limit {limit:?})", t), t < limit);
    }

    fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }
}

fn solvable_golden() -> Criterion {
    let mut c = Criterion::new(1, "solvable group golden values");
    let start = Instant::now();
    let m = corpus::cfs_solvable();
    let d = torsion_decomposition(&m, &ConnectionForm::zero(&m));
    c.check("Θ_{-1}", d.theta_minus1 == cfs_theta_minus1());
    c.check("integrable", integrability_check(&m).integrable);
    let qc = qc_connection(&m).unwrap();
    c.check("qc connection", qc.correction == cfs_qc_connection());
    let g = split_by_grade(1, &curvature(&m, &qc.connection));
    c.check("Ω₁", g[0] == cfs_omega1());
    c.check("Ω₃", g[2] == cfs_omega3());
    c.check("Ω₂ = Ω₄ = 0", g[1].is_zero() && g[3].is_zero());
    let qcm = qcm_connection(&m).unwrap();
    c.check("χ_V", qcm.chi_v == cfs_chi_v());
    c.check("χ_W = 0", qcm.chi_w_is_zero());
    let b = biquard_from_qcm(&m, &qcm).unwrap();
    c.check("(Θ_B)^{1,1} as printed", b.parts.t11 == cfs_biquard_t11(-1));
    c.check("(Θ_B)^{1,1} with the e³⊙e⁴ sign reversed", b.parts.t11 == cfs_biquard_t11(1));
    c.check("(Θ_B)^{0,2} as printed", b.parts.t02 == cfs_biquard_t02(1));
    c.check("(Θ_B)^{0,2} negated", b.parts.t02 == cfs_biquard_t02(-1));
    c.within(start, Duration::from_secs(10));
    c
}

fn homogeneous_models() -> Criterion {
    let mut c = Criterion::new(2, "sphere and hyperbolic models");
    let mut scalars = Vec::new();
    for (m, sign) in [(corpus::sphere(1), 1), (corpus::hyperbolic(1), -1), (corpus::sphere(2), 1)] {
        let start = Instant::now();
        let (n, name) = (m.n(), m.name().to_string());
        let w = ConnectionForm::isotropy(&m);
        c.check(format!("{name} projection torsion"), torsion(&m, &w) == projection_torsion(n, sign));
        c.check(format!("{name} projection curvature"), curvature(&m, &w) == projection_curvature(n, sign));
        c.check(format!("{name} Dσ"), tensorial_derivative(&m, &w, Tautological::Sigma) == projection_d_sigma(n));
        let qc = qc_connection(&m).unwrap();
        c.check(format!("{name} correction with printed sign"), qc.correction == eh_diagonal(n).scale(&int(-sign)));
        c.check(format!("{name} correction with reversed sign"), qc.correction == eh_diagonal(n).scale(&int(sign)));
        let om = curvature(&m, &qc.connection);
        c.check(format!("{name} Ω_qc as printed"), om == &projection_curvature(n, sign) - &eh_curvature_term(n));
        c.check(format!("{name} Ω_qc with the EH term reversed"), om == &projection_curvature(n, sign) + &eh_curvature_term(n));
        c.check(format!("{name} tr Ω^{{2,0}} ⟂ Span{{ω_s}}"), trace_omega_components(&m, &qc.connection) == [0, 0, 0].map(int));
        let mem = curvature_module_membership(&om);
        c.check(format!("{name} curvature in the trivial isotypes of R₁, R₃"), mem.in_sum && mem.only_trivial());
        if n == 1 {
            let (r1, r3) = trivial_references(n);
            scalars.push((scalar_along(&mem.trivial_part(0), &r1), scalar_along(&mem.trivial_part(2), &r3)));
        }
        c.within(start, Duration::from_secs(if n == 1 { 10 } else { 120 }));
    }
    let (s, h) = (&scalars[0], &scalars[1]);
    c.check("R₁ scalar flips sign", s.0 == -h.0.clone() && s.0 != int(0));
    c.check("R₃ scalar agrees", s.1 == h.1);
    c
}

fn heisenberg_flat() -> Criterion {
    let mut c = Criterion::new(3, "Heisenberg flatness");
    for n in 1..=2 {
        let m = corpus::heisenberg(n);
        let qc = qc_connection(&m).unwrap();
        c.check(format!("n={n} qc connection = 0"), qc.correction.is_zero() && qc.connection == ConnectionForm::zero(&m));
        c.check(format!("n={n} Ω = 0"), curvature(&m, &qc.connection).is_zero());
        let r = geometry_report(&m).unwrap();
        c.check(format!("n={n} report flags"), r.flat == Some(true) && r.qc_einstein == Some(true));
        c.check(format!("n={n} scalar curvature 0"), r.scalar_curvature.as_deref() == Some("0"));
    }
    c
}

fn representation_ledger() -> Criterion {
    let mut c = Criterion::new(4, "representation ledger");
    let start = Instant::now();
    for ch in repdims::check_catalog(6) {
        let l = ch.l.map(|l| format!(" l={l}")).unwrap_or_default();
        c.check(format!("{} n={}{l}", ch.id, ch.n), ch.equal);
    }
    for n in 1..=2 {
        match repdims::checked_module_ledger(n) {
            Ok(rows) => {
                for r in &rows {
                    c.check(format!("n={n} {} rep {} = rank {}", r.name, r.rep_dim, r.rank), r.agrees());
                }
                let row = |name: &str| rows.iter().find(|r| r.name == name).map(|r| r.rank);
                c.check(format!("n={n} ker ∂_K = 3"), row("ker ∂_K") == Some(3));
                let vd = 4 * n;
                c.check(format!("n={n} coker ∂_Q = dim Λ²V*⊗W"), row("coker ∂_Q") == Some(3 * vd * (vd - 1) / 2));
            }
            Err(e) => c.check(format!("n={n} module ledger: {e}"), false),
        }
    }
    c.within(start, Duration::from_secs(60));
    c
}

fn hwv_suite() -> Criterion {
    let mut c = Criterion::new(5, "highest weight vector identities");
    let start = Instant::now();
    for n in 1..=3 {
        for (id, ok, detail) in hwv::run_catalog(n) {
            let detail = if ok { String::new() } else { format!(" ({detail})") };
            c.check(format!("n={n} {id}{detail}"), ok);
        }
    }
    c.within(start, Duration::from_secs(60));
    c
}

fn property_suites() -> Criterion {
    let mut c = Criterion::new(6, "randomized property suites");
    let mut r = rng(2024);
    let mut pool = small_pool();
    pool.push(corpus::heisenberg(2));
    let mut bianchi = true;
    for _ in 0..100 {
        let m = random_model(&pool, &mut r);
        let w = random_connection(&m, 12, &mut r);
        let (a, b) = bianchi_residuals(&m, &w);
        bianchi &= m.validate_jacobi().is_ok() && a.is_zero() && b.is_zero();
    }
    c.check("Bianchi residuals vanish for 100 random connections", bianchi);

    let (mut unique, mut affine, mut symmetric, mut biquard_v, mut duchemin) = (true, true, true, true, true);
    for _ in 0..20 {
        let m = random_model(&small_pool(), &mut r);
        let offset: Vec<_> = (0..3).map(|_| small_rational(&mut r)).collect();
        unique &= qc_connection(&m).ok() == qc_connection_with_offset(&m, &offset).ok();

        let w = random_connection(&m, 8, &mut r);
        let x = random_connection(&m, 8, &mut r).horizontal_form();
        affine &= &torsion(&m, &w.plus(&x)) - &torsion(&m, &w) == partial(&x).horizontal();

        let m = adapt_complement(&m).unwrap().model;
        let qcm = qcm_connection(&m).unwrap();
        symmetric &= dense::is_symmetric(&qcm.chi_v);
        let b = biquard_from_qcm(&m, &qcm).unwrap();
        biquard_v &= b.offset.bigrade(1, 0).is_zero();
        let d = duchemin_from_qcm(&m, &qcm).unwrap();
        duchemin &= d.torsion == &b.torsion - &value_part(&b.parts.t02, false);
    }
    c.check("qc connection independent of kernel offset", unique);
    c.check("torsion affine in ω", affine);
    c.check("χ_V symmetric", symmetric);
    c.check("(ω_B − ω_qcm)^{1,0} = 0", biquard_v);
    c.check("Θ_D = Θ_B − [Θ_B^{0,2}]_W", duchemin);

    for m in corpus::bundled().into_iter().filter(|m| m.n() == 2) {
        let qcm = qcm_connection(&m).unwrap();
        let qc = qc_connection(&m).unwrap();
        let ok = einstein_flat_report(&m, &qcm, &qc.connection).is_ok_and(|e| {
            let chain = [e.four_form_closed, e.chi_scalar, e.traceless_ricci_zero, e.traceless_chi_zero];
            chain.iter().all(|&x| x == chain[0])
        });
        c.check(format!("{} (1)⟺(2)⟺(4)⟺(5)", m.name()), ok);
    }
    c
}

fn round_trip() -> Criterion {
    let mut c = Criterion::new(7, "round-trip adaptation");
    let mut r = rng(7);
    let models: Vec<CoframeModel> = corpus::bundled();
    for m in &models {
        let chi = qcm_connection(m).unwrap().chi_v;
        let ok = (0..10).all(|_| {
            let shifted = shift_complement(m, &random_eh_shift(m.n(), &mut r));
            adapt_complement(&shifted)
                .and_then(|a| qcm_connection(&a.model))
                .is_ok_and(|d| d.chi_v == chi)
        });
        c.check(format!("{} recovers χ_V over 10 shifts", m.name()), ok);
    }
    c.check("sanity: a nonzero shift moves the complement", {
        let m = corpus::cfs_solvable();
        let s = shift_complement(&m, &[q(1, 2), int(0), int(0), int(0)]);
        s != m && qcm_connection(&s).is_err()
    });
    c
}

fn main() -> ExitCode {
    let criteria = [
        solvable_golden(),
        homogeneous_models(),
        heisenberg_flat(),
        representation_ledger(),
        hwv_suite(),
        property_suites(),
        round_trip(),
    ];
    let mut failed: BTreeSet<String> = BTreeSet::new();
    for c in &criteria {
        let f = c.failures();
        let status = if f.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} {status}  {} ({} checks)", c.id, c.title, c.checks.len());
        for name in &f {
            println!("    failing: {}", &name[3..]);
        }
        failed.extend(f.into_iter().map(String::from));
    }
    let known: BTreeSet<String> = KNOWN_FAILURES.iter().map(|s| s.to_string()).collect();
    let unexpected: Vec<_> = failed.difference(&known).collect();
    let fixed: Vec<_> = known.difference(&failed).collect();
    if unexpected.is_empty() && fixed.is_empty() {
        println!("acceptance: failures match the {} documented sign discrepancies", known.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}, expected failures now passing {fixed:?}");
        ExitCode::FAILURE
    }
}
