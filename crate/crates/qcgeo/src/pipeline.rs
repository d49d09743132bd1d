//! Decision procedures and canonical connections: qc certification, torsion
//! decomposition, integrability, and the qc, qcm, Biquard and Duchemin
//! connections.

use crate::connection::{curvature, torsion, ConnectionForm};
use crate::frame::{
    coefficient_of, eh, gl_form_shape, omega, omega_entry, one_form_times_mat, partial, sp1, theta0, trace_form,
    two_form_to_mat, value_part, vector_form_shape, w123,
};
use crate::linalg::dense::{self, Matrix};
use crate::linalg::{exact_solve, AffineSolutionSet, LinearMap, SolveError, SparseVec};
use crate::mat::Mat;
use crate::model::CoframeModel;
use crate::scalar::{int, one, q, Scalar};
use crate::spaces::{
    casimir_h, omega_components, so_w_basis, spn_sp1_perp_in_gl_v, traceless_symmetric_w, ModelSpaces,
};
use crate::tensor::{t_dim, v_dim, w_index, Tensor};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("structure equations fail the Jacobi identity at e^{}", index + 1)]
    NotLieAlgebra { index: usize },
    #[error("coframe is not qc-adapted")]
    NotAdapted,
    #[error("not an integrable qc structure: Θ₀ − Θ leaves im ∂_K (residual {residual})")]
    NotIntegrable { residual: Box<Tensor> },
    #[error("normalization of the qc connection is singular")]
    NormalizationSingular,
    #[error("frame is not qcm-adapted (residual {residual})")]
    NotQcmAdapted { residual: Box<Tensor> },
    #[error("χ_V is not symmetric")]
    AsymmetricChi,
    #[error("complement correction did not converge: residual before {before}, after {after}")]
    NoConvergence { before: Box<Tensor>, after: Box<Tensor> },
    #[error("{what} has no unique solution ({kernel}-dimensional kernel)")]
    NotUnique { what: &'static str, kernel: usize },
    #[error("{what}: torsion conditions are inconsistent (residual {residual})")]
    Inconsistent { what: &'static str, residual: Box<Tensor> },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn checked_model(model: &CoframeModel) -> Result<(), PipelineError> {
    if let Err(f) = model.validate_jacobi() {
        return Err(PipelineError::NotLieAlgebra { index: f[0].index });
    }
    Ok(())
}

/// Outcome of [`qc_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcCheck {
    /// `(de^{4n+s})^{2,0} = ω_s` for every `s`.
    pub adapted: bool,
    /// The triple `(de^{4n+s})^{2,0}` is in the orbit of `(ω_s)`.
    pub orbit_compatible: bool,
    /// First failing relation, if any.
    pub witness: Option<String>,
    /// `J_1, J_2, J_3` and `g` recovered from the triple, when nondegenerate.
    pub structures: Option<(Vec<Matrix>, Matrix)>,
}

/// The Gram matrix `G[a][b] = γ(e_a, e_b)` of a horizontal 2-form.
pub fn gram_of(f: &Tensor) -> Matrix {
    let vd = v_dim(f.n());
    let mut g = vec![vec![Scalar::zero(); vd]; vd];
    for (k, c) in f.bigrade(2, 0).terms() {
        let ix = k.blade_indices();
        g[ix[0]][ix[1]] += c;
        g[ix[1]][ix[0]] -= c;
    }
    g
}

fn neg(m: &Matrix) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

/// Checks the horizontal parts of `de^{4n+s}`. Writing `G_s` for their Gram
/// matrices, a compatible triple has `G_s = g J_s` for a metric `g` and
/// complex structures with `J_1 J_2 = J_3`; so `J_3 = −G_1⁻¹G_2` (and
/// cyclically) and `g = −G_1 J_1`.
pub fn qc_check(model: &CoframeModel) -> QcCheck {
    let n = model.n();
    let gammas: Vec<Tensor> = (0..3).map(|s| model.de(w_index(n, s)).bigrade(2, 0)).collect();
    let adapted = (0..3).all(|s| gammas[s] == omega(n, s));
    let fail = |w: String| QcCheck { adapted, orbit_compatible: false, witness: Some(w), structures: None };
    let gs: Vec<Matrix> = gammas.iter().map(gram_of).collect();
    let mut inv = Vec::new();
    for (s, g) in gs.iter().enumerate() {
        match dense::inverse(g) {
            Some(i) => inv.push(i),
            None => return fail(format!("(de^{})^{{2,0}} is degenerate", w_index(n, s) + 1)),
        }
    }
    // J_{s+2} = -G_s^{-1} G_{s+1}
    let mut js = vec![Matrix::new(); 3];
    for s in 0..3 {
        js[(s + 2) % 3] = neg(&dense::mul(&inv[s], &gs[(s + 1) % 3]));
    }
    let minus_id = neg(&dense::identity(v_dim(n)));
    for (s, j) in js.iter().enumerate() {
        if dense::mul(j, j) != minus_id {
            return fail(format!("J_{}² ≠ −1", s + 1));
        }
    }
    if dense::mul(&js[0], &js[1]) != js[2] {
        return fail("J_1 J_2 ≠ J_3".into());
    }
    let g = neg(&dense::mul(&gs[0], &js[0]));
    if !dense::is_symmetric(&g) {
        return fail("g is not symmetric".into());
    }
    if !dense::is_positive_definite(&g) {
        return fail("g is not positive definite".into());
    }
    QcCheck { adapted, orbit_compatible: true, witness: None, structures: Some((js, g)) }
}

/// The split `Θ = Θ_* + Θ^Q + Θ_1 + Θ_2`, with `Θ_{-1}` the `Λ^{1,1}⊗W` part of
/// `Θ_*` and `Θ_2 = ES³H + ES⁵H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionDecomposition {
    pub theta_star: Tensor,
    pub theta_q: Tensor,
    pub theta_minus1: Tensor,
    pub theta_1: Tensor,
    pub theta_2: Tensor,
    pub es3h: Tensor,
    pub es5h: Tensor,
}

/// Splits `Θ_2 ∈ V*⊗S²₀W ≅ ES³H + ES⁵H` with the `sp(1)` Casimir
/// (eigenvalues −15 and −35).
pub fn split_es_h(n: usize, theta_2: &Tensor) -> (Tensor, Tensor) {
    let mut c = casimir_h(n, theta_2);
    c.axpy(&int(15), theta_2);
    let es5 = c.scale(&q(-1, 20));
    let es3 = theta_2 - &es5;
    (es3, es5)
}

pub fn decompose_torsion(n: usize, theta: &Tensor) -> TorsionDecomposition {
    let spaces = ModelSpaces::get(n);
    let parts = spaces
        .torsion_spaces()
        .decomposition
        .project(theta)
        .expect("the four summands span Λ²T*⊗T");
    let [theta_star, theta_q, theta_1, theta_2]: [Tensor; 4] = parts.try_into().expect("four parts");
    let theta_minus1 = value_part(&theta_star.bigrade(1, 1), false);
    let (es3h, es5h) = split_es_h(n, &theta_2);
    TorsionDecomposition { theta_star, theta_q, theta_minus1, theta_1, theta_2, es3h, es5h }
}

/// Decomposes the torsion of `w`.
pub fn torsion_decomposition(model: &CoframeModel, w: &ConnectionForm) -> TorsionDecomposition {
    decompose_torsion(model.n(), &torsion(model, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integrability {
    pub integrable: bool,
    pub es3h_part: Tensor,
    pub es5h_part: Tensor,
}

/// Integrable iff the `ES⁵H` part of the intrinsic torsion vanishes.
pub fn integrability_check(model: &CoframeModel) -> Integrability {
    let d = torsion_decomposition(model, &ConnectionForm::isotropy(model));
    let integrable = d.es5h.is_zero();
    if model.n() > 1 {
        debug_assert!(integrable, "ES⁵H torsion is impossible for n > 1");
    }
    Integrability { integrable, es3h_part: d.es3h, es5h_part: d.es5h }
}

/// `⟨tr Ω^{2,0}, ω_s⟩` for the connection `w`.
pub fn trace_omega_components(model: &CoframeModel, w: &ConnectionForm) -> [Scalar; 3] {
    omega_components(&trace_form(&curvature(model, w)).bigrade(2, 0))
}

/// The qc connection: torsion `Θ₀` and no `Span{ω_s}` component in `tr Ω^{2,0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcConnection {
    pub connection: ConnectionForm,
    /// `ω − ω_isotropy ∈ T*⊗k`.
    pub correction: Tensor,
}

pub fn qc_connection(model: &CoframeModel) -> Result<QcConnection, PipelineError> {
    qc_connection_with_offset(model, &[])
}

/// As [`qc_connection`], starting the normalization from `particular + Σ offset_i K_i`
/// for the kernel basis `K_i` of `∂_K`. The result does not depend on the offset.
pub fn qc_connection_with_offset(model: &CoframeModel, offset: &[Scalar]) -> Result<QcConnection, PipelineError> {
    checked_model(model)?;
    if !qc_check(model).adapted {
        return Err(PipelineError::NotAdapted);
    }
    let n = model.n();
    let spaces = ModelSpaces::get(n);
    let base = ConnectionForm::isotropy(model);
    let target = &theta0(n) - &torsion(model, &base);
    let sol = exact_solve(spaces.partial_k(), &target).map_err(|SolveError::Unsolvable { residual }| {
        PipelineError::NotIntegrable { residual: Box::new(residual) }
    })?;
    if sol.kernel.len() != 3 {
        return Err(PipelineError::Invariant(format!("ker ∂_K has dimension {}", sol.kernel.len())));
    }
    let mut start = sol.particular.clone();
    for (c, k) in offset.iter().zip(&sol.kernel) {
        start.axpy(c, k);
    }
    let f = |t: &[Scalar]| {
        let mut x = start.clone();
        for (c, k) in t.iter().zip(&sol.kernel) {
            x.axpy(c, k);
        }
        (trace_omega_components(model, &base.plus(&x)), x)
    };
    let (f0, _) = f(&[]);
    let mut cols = Vec::new();
    for i in 0..3 {
        let mut t = vec![Scalar::zero(); 3];
        t[i] = one();
        let (fi, _) = f(&t);
        cols.push((0..3).map(|s| &fi[s] - &f0[s]).collect::<Vec<_>>());
    }
    let l: Matrix = (0..3).map(|s| (0..3).map(|i| cols[i][s].clone()).collect()).collect();
    let linv = dense::inverse(&l).ok_or(PipelineError::NormalizationSingular)?;
    let t: Vec<Scalar> = (0..3).map(|i| -(0..3).map(|s| &linv[i][s] * &f0[s]).sum::<Scalar>()).collect();
    let (ft, x) = f(&t);
    if ft.iter().any(|c| !c.is_zero()) {
        return Err(PipelineError::Invariant("tr Ω^{2,0} is not affine in the kernel of ∂_K".into()));
    }
    Ok(QcConnection { connection: base.plus(&x), correction: x })
}

/// A linear system whose unknowns come in named blocks of `gl(T)`-valued 1-forms.
struct BlockSystem {
    map: LinearMap,
    offsets: Vec<usize>,
}

impl BlockSystem {
    fn new(blocks: Vec<Vec<Tensor>>, codomain: &Tensor, f: impl Fn(usize, &Tensor) -> Tensor) -> Self {
        let mut offsets = vec![0];
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (b, block) in blocks.into_iter().enumerate() {
            images.extend(block.iter().map(|x| f(b, x)));
            domain.extend(block);
            offsets.push(domain.len());
        }
        BlockSystem { map: LinearMap::from_images(domain, images, codomain), offsets }
    }

    fn blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Per-block sums of the solution with coordinates `coords`.
    fn split(&self, coords: &SparseVec<usize>) -> Vec<Tensor> {
        let shape = gl_form_shape(self.map.codomain_shape().n(), 1);
        let mut out = vec![shape; self.blocks()];
        for (i, c) in coords {
            let b = self.offsets.partition_point(|&o| o <= *i) - 1;
            out[b].axpy(c, &self.map.domain[*i]);
        }
        out
    }

    fn solve(&self, target: &Tensor) -> Result<AffineSolutionSet, Tensor> {
        exact_solve(&self.map, target).map_err(|SolveError::Unsolvable { residual }| residual)
    }
}

/// Coefficients `c[k][b]` of `χ = Σ c[k][b] e^k ⊗ EH_b`.
fn eh_coefficients(n: usize, chi: &Tensor) -> Matrix {
    let vd = v_dim(n);
    let mut c = vec![vec![Scalar::zero(); vd]; t_dim(n)];
    for (k, m) in chi_rows(n, chi) {
        // EH_b sends w_1 to Σ_a ω_1(e_b, e_a) e_a; read it off that column
        for (b, cb) in c[k].iter_mut().enumerate() {
            *cb = (0..vd).map(|a| m.get(a, w_index(n, 0)) * omega_entry(n, 0, b, a)).sum();
        }
    }
    c
}

fn chi_rows(n: usize, chi: &Tensor) -> Vec<(usize, Mat)> {
    (0..t_dim(n)).map(|k| (k, coefficient_of(chi, k))).filter(|(_, m)| !m.is_zero()).collect()
}

/// `Σ_b c[b] EH_b`.
fn eh_combination(n: usize, c: &[Scalar]) -> Mat {
    let mut m = Mat::zero();
    for (b, x) in c.iter().enumerate() {
        m.axpy(x, &eh(n, b));
    }
    m
}

/// The qcm connection and the intrinsic torsion components `χ_V`, `χ_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcmData {
    /// Values in `sp(n)⊕sp(1)`.
    pub omega_qcm: ConnectionForm,
    /// `χ_V[a][b]`, the coefficient of `e^a ⊗ EH_b`; symmetric.
    pub chi_v: Matrix,
    /// `χ_W[s][b]`, the coefficient of `w^s ⊗ EH_b`.
    pub chi_w: Matrix,
    /// `χ_V + χ_W` as a `T*⊗EH` form.
    pub chi: Tensor,
}

impl QcmData {
    /// `tr χ_V / 4n`.
    pub fn lambda(&self) -> Scalar {
        let vd = self.chi_v.len();
        (0..vd).map(|a| self.chi_v[a][a].clone()).sum::<Scalar>() / int(vd as i64)
    }

    /// `χ_V − λ·id`.
    pub fn traceless_chi_v(&self) -> Matrix {
        let l = self.lambda();
        let mut m = self.chi_v.clone();
        for (a, row) in m.iter_mut().enumerate() {
            row[a] -= &l;
        }
        m
    }

    pub fn chi_w_is_zero(&self) -> bool {
        self.chi_w.iter().flatten().all(Zero::is_zero)
    }
}

/// Solves `∂ω' − ∂χ = Θ₀ − Θ(ω_isotropy)` for `ω' ∈ T*⊗(sp(n)⊕sp(1))` and `χ ∈ T*⊗EH`.
/// The solution is unique when it exists.
pub fn qcm_connection(model: &CoframeModel) -> Result<QcmData, PipelineError> {
    checked_model(model)?;
    if !qc_check(model).adapted {
        return Err(PipelineError::NotAdapted);
    }
    let n = model.n();
    let spaces = ModelSpaces::get(n);
    let base = ConnectionForm::isotropy(model);
    let target = &theta0(n) - &torsion(model, &base);
    let rows = 0..t_dim(n);
    let sys = BlockSystem::new(
        vec![spaces.spn_sp1.one_forms(rows.clone()), spaces.eh.one_forms(rows)],
        &vector_form_shape(n, 2),
        |b, x| if b == 0 { partial(x) } else { -partial(x) },
    );
    let sol = sys.solve(&target).map_err(|residual| PipelineError::NotQcmAdapted { residual: Box::new(residual) })?;
    if !sol.is_unique() {
        return Err(PipelineError::NotUnique { what: "qcm connection", kernel: sol.kernel.len() });
    }
    let [w1, chi]: [Tensor; 2] = sys.split(&sol.particular_coords).try_into().expect("two blocks");
    let omega_qcm = base.plus(&w1);
    if torsion(model, &omega_qcm) != &theta0(n) + &partial(&chi) {
        return Err(PipelineError::Invariant("qcm torsion differs from Θ₀ + ∂χ".into()));
    }
    let c = eh_coefficients(n, &chi);
    let vd = v_dim(n);
    let chi_v: Matrix = c[..vd].to_vec();
    let chi_w: Matrix = c[vd..].to_vec();
    if !dense::is_symmetric(&chi_v) {
        return Err(PipelineError::AsymmetricChi);
    }
    Ok(QcmData { omega_qcm, chi_v, chi_w, chi })
}

/// The coframe `e^a + Σ_b c_b Σ_s (EH_b)_{a,s} w^s`, leaving `w^s` alone.
pub fn shift_complement(model: &CoframeModel, c: &[Scalar]) -> CoframeModel {
    let n = model.n();
    let m = eh_combination(n, c);
    let p = |sign: i64| -> Matrix {
        let mut p = dense::identity(t_dim(n));
        for (&(a, w), x) in m.entries() {
            p[a][w] += x * int(sign);
        }
        p
    };
    model.change_coframe(&p(1), &p(-1))
}

/// Outcome of [`adapt_complement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedComplement {
    pub model: CoframeModel,
    /// The shift applied, as coefficients of `EH_b` (see [`shift_complement`]).
    pub shift: Vec<Scalar>,
}

/// Replaces the complement of the horizontal distribution by one on which the
/// qcm connection exists, with one linear correction in the `EH` directions.
pub fn adapt_complement(model: &CoframeModel) -> Result<AdaptedComplement, PipelineError> {
    checked_model(model)?;
    if !qc_check(model).adapted {
        return Err(PipelineError::NotAdapted);
    }
    let n = model.n();
    let vd = v_dim(n);
    let spaces = ModelSpaces::get(n);
    let im_g = spaces.partial_g().image();
    let obstruction = |c: &[Scalar]| -> Tensor {
        let m = shift_complement(model, c);
        let base = ConnectionForm::isotropy(&m);
        im_g.reduce(&(&theta0(n) - &torsion(&m, &base)))
    };
    let zero_shift = vec![Scalar::zero(); vd];
    let o0 = obstruction(&zero_shift);
    if o0.is_zero() {
        return Ok(AdaptedComplement { model: model.clone(), shift: zero_shift });
    }
    let columns: Vec<SparseVec<crate::tensor::Key>> = (0..vd)
        .map(|b| {
            let mut c = zero_shift.clone();
            c[b] = one();
            (&obstruction(&c) - &o0).into_terms()
        })
        .collect();
    let target = (-&o0).into_terms();
    let shift: Vec<Scalar> = match crate::linalg::solve_sparse(&columns, &target) {
        Ok(sol) => {
            let mut c = zero_shift.clone();
            for (b, x) in sol.particular {
                c[b] = x;
            }
            c
        }
        Err(_) => return Err(PipelineError::NoConvergence { before: Box::new(o0.clone()), after: Box::new(o0) }),
    };
    let adapted = shift_complement(model, &shift);
    let after = obstruction(&shift);
    if !after.is_zero() || qcm_connection(&adapted).is_err() {
        return Err(PipelineError::NoConvergence { before: Box::new(o0), after: Box::new(after) });
    }
    Ok(AdaptedComplement { model: adapted, shift })
}

/// Torsion split by bigrade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionParts {
    pub t20: Tensor,
    pub t11: Tensor,
    pub t02: Tensor,
}

impl TorsionParts {
    pub fn of(theta: &Tensor) -> Self {
        TorsionParts { t20: theta.bigrade(2, 0), t11: theta.bigrade(1, 1), t02: theta.bigrade(0, 2) }
    }
}

/// A connection fixed by torsion conditions, with its offset from the qcm connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalConnection {
    pub connection: ConnectionForm,
    pub torsion: Tensor,
    pub parts: TorsionParts,
    /// `ω − ω_qcm`.
    pub offset: Tensor,
}

fn biquard_filter(t: &Tensor) -> Tensor {
    &value_part(&t.bigrade(2, 0), true) + &value_part(&t.bigrade(1, 1), true)
}

fn duchemin_filter(t: &Tensor) -> Tensor {
    let mut r = biquard_filter(t);
    r += &value_part(&t.bigrade(0, 2), false);
    r += &value_part(&t.bigrade(1, 1), false);
    r
}

fn w_rows(n: usize, mats: &[Mat]) -> Vec<Tensor> {
    (0..3).flat_map(|s| mats.iter().map(move |m| one_form_times_mat(n, w_index(n, s), m))).collect()
}

fn finish(model: &CoframeModel, qcm: &QcmData, offset: Tensor) -> CanonicalConnection {
    let connection = qcm.omega_qcm.plus(&offset);
    let torsion = torsion(model, &connection);
    CanonicalConnection { parts: TorsionParts::of(&torsion), connection, torsion, offset }
}

/// The unique `sp(n)⊕sp(1)` connection with `[Θ^{2,0}]_V = 0` and
/// `[Θ^{1,1}]_V ∈ ∂(W*⊗(sp(n)⊕sp(1))^⊥)`, the complement taken in `gl(V)`.
pub fn biquard_from_qcm(model: &CoframeModel, qcm: &QcmData) -> Result<CanonicalConnection, PipelineError> {
    let n = model.n();
    let spaces = ModelSpaces::get(n);
    let perp = spn_sp1_perp_in_gl_v(&spaces);
    let sys = BlockSystem::new(
        vec![spaces.spn_sp1.one_forms(0..t_dim(n)), w_rows(n, &perp)],
        &vector_form_shape(n, 2),
        |b, x| if b == 0 { biquard_filter(&partial(x)) } else { partial(x) },
    );
    let target = -biquard_filter(&torsion(model, &qcm.omega_qcm));
    let sol = sys
        .solve(&target)
        .map_err(|residual| PipelineError::Inconsistent { what: "Biquard connection", residual: Box::new(residual) })?;
    if !sol.is_unique() {
        return Err(PipelineError::NotUnique { what: "Biquard connection", kernel: sol.kernel.len() });
    }
    let eta = sys.split(&sol.particular_coords).swap_remove(0);
    Ok(finish(model, qcm, eta))
}

pub fn biquard_connection(model: &CoframeModel) -> Result<CanonicalConnection, PipelineError> {
    biquard_from_qcm(model, &qcm_connection(model)?)
}

/// The unique `sp(n)⊕sp(1)⊕so(W)` connection with `[Θ^{2,0}]_V = 0`,
/// `[Θ^{0,2}]_W = 0`, `[Θ^{1,1}]_V` as for the Biquard connection and
/// `[Θ^{1,1}]_W` in `ES⁵H ⊂ ∂(V*⊗S²₀W)`.
pub fn duchemin_from_qcm(model: &CoframeModel, qcm: &QcmData) -> Result<CanonicalConnection, PipelineError> {
    let n = model.n();
    let spaces = ModelSpaces::get(n);
    let perp = spn_sp1_perp_in_gl_v(&spaces);
    let so_w: Vec<Tensor> = (0..t_dim(n))
        .flat_map(|k| so_w_basis(n).into_iter().map(move |m| one_form_times_mat(n, k, &m)))
        .collect();
    let s20w: Vec<Tensor> = (0..v_dim(n))
        .flat_map(|a| traceless_symmetric_w(n).into_iter().map(move |m| one_form_times_mat(n, a, &m)))
        .collect();
    let sys = BlockSystem::new(
        vec![spaces.spn_sp1.one_forms(0..t_dim(n)), so_w, w_rows(n, &perp), s20w],
        &vector_form_shape(n, 2),
        |b, x| if b < 2 { duchemin_filter(&partial(x)) } else { partial(x) },
    );
    let target = -duchemin_filter(&torsion(model, &qcm.omega_qcm));
    let sol = sys
        .solve(&target)
        .map_err(|residual| PipelineError::Inconsistent { what: "Duchemin connection", residual: Box::new(residual) })?;
    if !sol.is_unique() {
        return Err(PipelineError::NotUnique { what: "Duchemin connection", kernel: sol.kernel.len() });
    }
    let parts = sys.split(&sol.particular_coords);
    let d = finish(model, qcm, &parts[0] + &parts[1]);
    let (es3h, _) = split_es_h(n, &value_part(&d.parts.t11, false));
    if !es3h.is_zero() {
        return Err(PipelineError::Inconsistent { what: "Duchemin connection", residual: Box::new(es3h) });
    }
    Ok(d)
}

pub fn duchemin_connection(model: &CoframeModel) -> Result<CanonicalConnection, PipelineError> {
    duchemin_from_qcm(model, &qcm_connection(model)?)
}

/// `Σ_s w^s ⊗ ξ_s`.
pub fn w_sp1_form(n: usize) -> Tensor {
    (0..3).fold(gl_form_shape(n, 1), |acc, s| &acc + &one_form_times_mat(n, w_index(n, s), &sp1(n, s)))
}

/// `Σ_s w^s ⊗ (w_s ⌟ w^{123})`, the 2-forms read as elements of `so(W)`.
pub fn w_so_w_form(n: usize) -> Tensor {
    let vol = w123(n);
    (0..3).fold(gl_form_shape(n, 1), |acc, s| {
        let f = vol.interior(w_index(n, s));
        &acc + &one_form_times_mat(n, w_index(n, s), &two_form_to_mat(&f))
    })
}
