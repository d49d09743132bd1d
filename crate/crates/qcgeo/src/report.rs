//! Curvature module membership, the Einstein and flatness flags, and the
//! aggregated [`GeometryReport`].

use crate::connection::{curvature, ricci, ConnectionForm};
use crate::frame::{form_times_mat, gl_form_shape, omega, sp1, trace_form, w123};
use crate::linalg::dense::Matrix;
use crate::model::CoframeModel;
use crate::pipeline::{
    adapt_complement, biquard_from_qcm, integrability_check, qc_check, qc_connection, qcm_connection,
    trace_omega_components, PipelineError, QcmData,
};
use crate::scalar::{format_scalar, Scalar};
use crate::spaces::{isotypic_component, split_by_grade, Isotype, ModelSpaces};
use crate::tensor::{bits, v_dim, w_index, Slot, Tensor};
use num::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// The irreducible summands of `R₁..R₄` (several copies of one isotype are
/// grouped), restricted to those that exist for `n`.
pub fn module_isotypes(n: usize, grade: usize) -> Vec<Isotype> {
    let all: &[(&[usize], usize)] = match grade {
        0 => &[(&[4], 0), (&[2], 2), (&[2], 0), (&[1, 1], 2), (&[1, 1], 0), (&[], 2), (&[], 0)],
        1 => &[(&[3], 1), (&[1], 3), (&[1], 1)],
        2 => &[(&[2], 2), (&[], 4), (&[], 2), (&[], 0)],
        3 => &[(&[1], 3)],
        _ => panic!("grades are 0..4"),
    };
    all.iter().map(|(e, h)| Isotype::new(e, *h)).filter(|i| i.exists(n)).collect()
}

/// One graded piece of a `k`-valued curvature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponent {
    pub component: Tensor,
    /// Lies in `R_{g+1}`.
    pub in_module: bool,
    /// Lies in the trace-free part `R̃_{g+1}`.
    pub trace_free: bool,
    /// Isotypic components, keyed by isotype.
    pub isotypes: Vec<(Isotype, Tensor)>,
}

/// Where a curvature tensor sits among `R₁..R₄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureMembership {
    pub grades: Vec<GradedComponent>,
    /// The whole tensor lies in `R₁+R₂+R₃+R₄`.
    pub in_sum: bool,
}

impl CurvatureMembership {
    /// Isotypes with a nonzero component in `R_{g+1}`.
    pub fn nonzero_isotypes(&self, g: usize) -> Vec<&Isotype> {
        self.grades[g].isotypes.iter().filter(|(_, t)| !t.is_zero()).map(|(i, _)| i).collect()
    }

    /// Every nonzero component lies in a trivial isotype.
    pub fn only_trivial(&self) -> bool {
        self.grades.iter().all(|g| g.isotypes.iter().all(|(i, t)| i.is_trivial() || t.is_zero()))
    }

    /// The trivial isotypic component of `R_{g+1}`.
    pub fn trivial_part(&self, g: usize) -> Tensor {
        let c = &self.grades[g].component;
        self.grades[g]
            .isotypes
            .iter()
            .find(|(i, _)| i.is_trivial())
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| c.empty_like())
    }
}

/// Reports the graded pieces of `omega` and their membership in the
/// curvature modules and their isotypic parts.
pub fn curvature_module_membership(omega: &Tensor) -> CurvatureMembership {
    let n = omega.n();
    let spaces = ModelSpaces::get(n);
    let modules = spaces.curvature_modules();
    let cas = spaces.casimir_e();
    let grades: Vec<GradedComponent> = split_by_grade(n, omega)
        .into_iter()
        .enumerate()
        .map(|(g, component)| {
            let in_module = modules.modules[g].contains(&component);
            let trace_free = in_module && trace_form(&component).is_zero();
            let candidates = module_isotypes(n, g);
            let isotypes = if in_module {
                candidates
                    .iter()
                    .map(|i| (i.clone(), isotypic_component(cas, &component, i, &candidates)))
                    .collect()
            } else {
                Vec::new()
            };
            GradedComponent { component, in_module, trace_free, isotypes }
        })
        .collect();
    let in_sum = grades.iter().all(|g| g.in_module);
    CurvatureMembership { grades, in_sum }
}

/// `Σ_s ω_s ⊗ ξ_s` and `Σ_s (w_s ⌟ w^{123}) ⊗ ξ_s`: reference generators for
/// the trivial parts of `R₁` and `R₃`.
pub fn trivial_references(n: usize) -> (Tensor, Tensor) {
    let vol = w123(n);
    let mut r1 = gl_form_shape(n, 2);
    let mut r3 = gl_form_shape(n, 2);
    for s in 0..3 {
        r1 += &form_times_mat(&omega(n, s), &sp1(n, s));
        r3 += &form_times_mat(&vol.interior(w_index(n, s)), &sp1(n, s));
    }
    (r1, r3)
}

/// `⟨x, r⟩ / ⟨r, r⟩`.
pub fn scalar_along(x: &Tensor, r: &Tensor) -> Scalar {
    x.dot(r) / r.dot(r)
}

/// Conditions (1), (2), (4), (5) of the four-form criterion, flatness and the
/// Ricci data of the qcm connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EinsteinReport {
    /// `d(Σ_s ω_s∧ω_s) = 0`.
    pub four_form_closed: bool,
    /// `χ_V` is a multiple of the identity and `χ_W = 0`.
    pub chi_scalar: bool,
    /// Traceless horizontal Ricci of the qcm connection vanishes.
    pub traceless_ricci_zero: bool,
    /// Traceless `χ_V` vanishes; this is the qc-Einstein flag.
    pub traceless_chi_zero: bool,
    /// The qc connection is flat.
    pub flat: bool,
    pub ricci: Matrix,
    pub scalar_curvature: Scalar,
}

/// `Σ_s ω_s ∧ ω_s`.
pub fn fundamental_four_form(n: usize) -> Tensor {
    (0..3).fold(Tensor::form(n, 4), |acc, s| {
        let w = omega(n, s);
        &acc + &w.wedge(&w).expect("scalar forms")
    })
}

fn traceless(m: &Matrix) -> Matrix {
    let d = m.len();
    let tr: Scalar = (0..d).map(|i| m[i][i].clone()).sum::<Scalar>() / Scalar::from_integer((d as i64).into());
    let mut r = m.clone();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] -= &tr;
    }
    r
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().flatten().all(Zero::is_zero)
}

pub fn einstein_flat_report(model: &CoframeModel, qcm: &QcmData, qc: &ConnectionForm) -> Result<EinsteinReport, PipelineError> {
    let n = model.n();
    let four_form_closed = model.d(&fundamental_four_form(n)).horizontal().is_zero();
    let traceless_chi_zero = is_zero_matrix(&qcm.traceless_chi_v());
    let chi_scalar = traceless_chi_zero && qcm.chi_w_is_zero();
    let (ric, scalar_curvature) = ricci(&curvature(model, &qcm.omega_qcm));
    let traceless_ricci_zero = is_zero_matrix(&traceless(&ric));
    let flat = curvature(model, qc).is_zero();
    if traceless_ricci_zero != traceless_chi_zero {
        return Err(PipelineError::Invariant("traceless Ricci and traceless χ_V do not vanish together".into()));
    }
    let tr_chi = qcm.lambda();
    if scalar_curvature.is_zero() != tr_chi.is_zero() || (!tr_chi.is_zero() && scalar_curvature.clone() * tr_chi > Scalar::zero()) {
        return Err(PipelineError::Invariant("qc scalar curvature and tr χ_V are not opposite".into()));
    }
    if n > 1 && !(four_form_closed == chi_scalar && chi_scalar == traceless_ricci_zero && traceless_ricci_zero == traceless_chi_zero) {
        return Err(PipelineError::Invariant(format!(
            "four-form criterion violated: (1) {four_form_closed}, (2) {chi_scalar}, (4) {traceless_ricci_zero}, (5) {traceless_chi_zero}"
        )));
    }
    Ok(EinsteinReport { four_form_closed, chi_scalar, traceless_ricci_zero, traceless_chi_zero, flat, ricci: ric, scalar_curvature })
}

/// One coefficient of a tensor, 1-based: form indices, value indices, rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coefficient {
    pub form: Vec<usize>,
    pub value: Vec<usize>,
    pub c: String,
}

/// A tensor as a list of [`Coefficient`]s in key order.
pub fn coefficient_table(t: &Tensor) -> Vec<Coefficient> {
    t.terms()
        .iter()
        .map(|(k, c)| Coefficient {
            form: bits(k.blade).map(|i| i + 1).collect(),
            value: t
                .slots()
                .iter()
                .enumerate()
                .map(|(p, s)| match s {
                    Slot::Kappa => 1,
                    _ => k.vals[p] as usize + 1,
                })
                .collect(),
            c: format_scalar(c),
        })
        .collect()
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(format_scalar).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleComponent {
    pub in_module: bool,
    pub trace_free: bool,
    /// Isotypes with a nonzero component.
    pub isotypes: Vec<String>,
    pub terms: Vec<Coefficient>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiquardTorsion {
    pub t11: Vec<Coefficient>,
    pub t02: Vec<Coefficient>,
}

/// Everything the pipeline decides about one model. Stages that do not apply
/// (invalid input, not adapted, not integrable) leave the later fields empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryReport {
    pub name: String,
    pub n: usize,
    pub valid: bool,
    pub qc_adapted: bool,
    pub qc_orbit: bool,
    pub integrable: bool,
    /// First failed check, when the pipeline stopped early.
    pub note: Option<String>,
    /// Coefficients of `ω_qc − ω_isotropy`.
    pub qc_connection: Option<Vec<Coefficient>>,
    pub curvature_components: Option<BTreeMap<String, ModuleComponent>>,
    /// Shift of the complement applied before the qcm solve, if one was needed.
    pub complement_shift: Option<Vec<String>>,
    #[serde(rename = "chi_V")]
    pub chi_v: Option<Vec<Vec<String>>>,
    #[serde(rename = "chi_W")]
    pub chi_w: Option<Vec<Vec<String>>>,
    pub ricci: Option<Vec<Vec<String>>>,
    pub scalar_curvature: Option<String>,
    pub qc_einstein: Option<bool>,
    pub four_form_closed: Option<bool>,
    pub flat: Option<bool>,
    pub biquard_torsion: Option<BiquardTorsion>,
}

impl GeometryReport {
    fn empty(model: &CoframeModel) -> Self {
        GeometryReport {
            name: model.name().to_string(),
            n: model.n(),
            valid: false,
            qc_adapted: false,
            qc_orbit: false,
            integrable: false,
            note: None,
            qc_connection: None,
            curvature_components: None,
            complement_shift: None,
            chi_v: None,
            chi_w: None,
            ricci: None,
            scalar_curvature: None,
            qc_einstein: None,
            four_form_closed: None,
            flat: None,
            biquard_torsion: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// A short human readable summary.
    pub fn to_text(&self) -> String {
        let flag = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
        let mut s = format!(
            "{} (n = {})\n  valid: {}\n  qc adapted: {}\n  qc orbit: {}\n  integrable: {}\n",
            self.name, self.n, self.valid, self.qc_adapted, self.qc_orbit, self.integrable
        );
        if let Some(note) = &self.note {
            s += &format!("  stopped: {note}\n");
        }
        if let Some(cc) = &self.curvature_components {
            for (k, c) in cc {
                s += &format!("  {k}: {} terms, isotypes [{}]\n", c.terms.len(), c.isotypes.join(", "));
            }
        }
        if let Some(chi) = &self.chi_v {
            let diag: Vec<&str> = (0..chi.len()).map(|i| chi[i][i].as_str()).collect();
            s += &format!("  chi_V diagonal: [{}]\n", diag.join(", "));
        }
        if let Some(sc) = &self.scalar_curvature {
            s += &format!("  scalar curvature: {sc}\n");
        }
        s += &format!(
            "  qc-Einstein: {}\n  four-form closed: {}\n  flat: {}\n",
            flag(self.qc_einstein),
            flag(self.four_form_closed),
            flag(self.flat)
        );
        s
    }
}

fn module_components(m: &CurvatureMembership) -> BTreeMap<String, ModuleComponent> {
    m.grades
        .iter()
        .enumerate()
        .map(|(g, c)| {
            let comp = ModuleComponent {
                in_module: c.in_module,
                trace_free: c.trace_free,
                isotypes: c.isotypes.iter().filter(|(_, t)| !t.is_zero()).map(|(i, _)| i.to_string()).collect(),
                terms: coefficient_table(&c.component),
            };
            (format!("R{}", g + 1), comp)
        })
        .collect()
}

/// Runs the whole pipeline on `model`.
pub fn geometry_report(model: &CoframeModel) -> Result<GeometryReport, PipelineError> {
    let mut r = GeometryReport::empty(model);
    if let Err(f) = model.validate_jacobi() {
        r.note = Some(format!("Jacobi identity fails at e^{}", f[0].index + 1));
        return Ok(r);
    }
    r.valid = true;
    let check = qc_check(model);
    r.qc_adapted = check.adapted;
    r.qc_orbit = check.orbit_compatible;
    if !check.adapted {
        r.note = Some(check.witness.unwrap_or_else(|| "frame is compatible but not adapted".into()));
        return Ok(r);
    }
    let integ = integrability_check(model);
    r.integrable = integ.integrable;
    if !integ.integrable {
        r.note = Some(format!("ES⁵H torsion {}", integ.es5h_part));
        return Ok(r);
    }
    let qc = qc_connection(model)?;
    debug_assert!(trace_omega_components(model, &qc.connection).iter().all(Zero::is_zero));
    r.qc_connection = Some(coefficient_table(&qc.correction));
    let membership = curvature_module_membership(&curvature(model, &qc.connection));
    if !membership.in_sum {
        return Err(PipelineError::Invariant("qc curvature leaves R₁+R₂+R₃+R₄".into()));
    }
    r.curvature_components = Some(module_components(&membership));
    let (qcm_model, qcm) = match qcm_connection(model) {
        Ok(q) => (model.clone(), q),
        Err(PipelineError::NotQcmAdapted { .. }) => {
            let adapted = adapt_complement(model)?;
            r.complement_shift = Some(adapted.shift.iter().map(format_scalar).collect());
            let q = qcm_connection(&adapted.model)?;
            (adapted.model, q)
        }
        Err(e) => return Err(e),
    };
    let qc_for_flat = if r.complement_shift.is_some() { qc_connection(&qcm_model)?.connection } else { qc.connection };
    let e = einstein_flat_report(&qcm_model, &qcm, &qc_for_flat)?;
    let b = biquard_from_qcm(&qcm_model, &qcm)?;
    r.chi_v = Some(matrix_strings(&qcm.chi_v));
    r.chi_w = Some(matrix_strings(&qcm.chi_w));
    r.ricci = Some(matrix_strings(&e.ricci));
    r.scalar_curvature = Some(format_scalar(&e.scalar_curvature));
    r.qc_einstein = Some(e.traceless_chi_zero);
    r.four_form_closed = Some(e.four_form_closed);
    r.flat = Some(e.flat);
    r.biquard_torsion = Some(BiquardTorsion { t11: coefficient_table(&b.parts.t11), t02: coefficient_table(&b.parts.t02) });
    debug_assert_eq!(v_dim(model.n()), qcm.chi_v.len());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn isotype_lists_match_module_dimensions_at_n1() {
        // R₁..R₄ have dimensions 21, 32, 18, 8 at n = 1
        let dims = |g| -> usize {
            module_isotypes(1, g)
                .iter()
                .map(|i| {
                    let e = match i.e.as_slice() {
                        [] => 1,
                        [k] => k + 1,
                        _ => unreachable!(),
                    };
                    e * (i.h + 1)
                })
                .sum()
        };
        // multiplicities: 2ES³H + 2EH in R₂
        assert_eq!(dims(0), 21);
        assert_eq!(dims(1) + 8 + 4, 32);
        assert_eq!(dims(2), 18);
        assert_eq!(dims(3), 8);
    }

    #[test]
    fn heisenberg_report_is_flat() {
        let r = geometry_report(&corpus::heisenberg(1)).unwrap();
        assert_eq!(r.flat, Some(true));
        assert_eq!(r.qc_einstein, Some(true));
        assert_eq!(r.scalar_curvature.as_deref(), Some("0"));
    }

    #[test]
    fn four_form_is_closed_on_heisenberg() {
        let m = corpus::heisenberg(2);
        assert!(m.d(&fundamental_four_form(2)).is_zero());
    }
}
