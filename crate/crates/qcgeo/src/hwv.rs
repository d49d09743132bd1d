//! Highest weight vectors over the Gaussian rationals and the identities
//! relating them.
//!
//! The complex frame `v_j h_1, v_j h_2` (`0 ≤ j < 2n`) is expanded in the real
//! frame by
//!
//! | complex       | real                         |
//! |---------------|------------------------------|
//! | `v_j h_2`     | `e_{4j} − i e_{4j+1}`        |
//! | `v_{n+j} h_1` | `−e_{4j} − i e_{4j+1}`       |
//! | `v_j h_1`     | `e_{4j+2} − i e_{4j+3}`      |
//! | `v_{n+j} h_2` | `e_{4j+2} + i e_{4j+3}`      |
//!
//! (0-based real indices), and vectors are identified with covectors through
//! `e_i ↦ e^i`. Contractions use the complex bilinear extension of the real
//! pairing, so `v_1h_2 ⌟ v_1h_2 = 0` and `v_1h_2 ⌟ v_{n+1}h_1 = −2`.
//!
//! Elements of `V⊗Λ²V` are read as `V*⊗gl(V)` through `e^{ij} ↦ E_{ji} − E_{ij}`;
//! the tilde swaps them into `Λ²V*⊗V`. Elements `v⊗x⊗y` of `V⊗W⊗W` are the
//! endomorphism-valued forms `v ⊗ (x ↦ y)`, and as torsion tensors `v∧x ⊗ y`.

use crate::connection::contract_torsion;
use crate::frame::{gl_form_shape, omega, partial, scalar_r, sp1, theta0, trace_form, two_form_to_mat, vector_form_shape};
use crate::linalg::SubspaceBasis;
use crate::mat::Mat;
use crate::scalar::{q, zero, Gaussian};
use crate::spaces::{tensor_mat, AlgebraBasis, ModelSpaces};
use crate::tensor::{t_dim, v_dim, w_index, Slot, Tensor};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HwvError {
    #[error("unknown highest weight vector {0:?}")]
    UnknownVector(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

/// `a + b i` as a pair of real tensors of the same shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexTensor {
    pub re: Tensor,
    pub im: Tensor,
}

impl ComplexTensor {
    pub fn real(t: Tensor) -> Self {
        let im = t.empty_like();
        ComplexTensor { re: t, im }
    }

    pub fn zero_like(t: &Tensor) -> Self {
        ComplexTensor { re: t.empty_like(), im: t.empty_like() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn coeff(&self, indices: &[usize], vals: &[usize]) -> Gaussian {
        Gaussian::new(self.re.coeff(indices, vals), self.im.coeff(indices, vals))
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        let mut re = self.re.scale(&c.re);
        re.axpy(&-c.im.clone(), &self.im);
        let mut im = self.im.scale(&c.re);
        im.axpy(&c.im, &self.re);
        ComplexTensor { re, im }
    }

    /// Applies a real-linear map to both parts.
    pub fn map(&self, f: impl Fn(&Tensor) -> Tensor) -> Self {
        ComplexTensor { re: f(&self.re), im: f(&self.im) }
    }

    /// Extends a real bilinear product.
    pub fn bilinear(&self, o: &ComplexTensor, f: impl Fn(&Tensor, &Tensor) -> Tensor) -> Self {
        let mut re = f(&self.re, &o.re);
        re -= &f(&self.im, &o.im);
        let mut im = f(&self.re, &o.im);
        im += &f(&self.im, &o.re);
        ComplexTensor { re, im }
    }

    pub fn wedge(&self, o: &ComplexTensor) -> Self {
        self.bilinear(o, |a, b| a.wedge(b).expect("slots fit"))
    }

    /// `∂` on `T*⊗gl(T)`.
    pub fn partial(&self) -> Self {
        self.map(partial)
    }

    /// `Σ ω_s ∧ (w_s ⌟ self)`.
    pub fn theta0_contraction(&self) -> Self {
        let t0 = theta0(self.re.n());
        self.map(|x| contract_torsion(&t0, x))
    }
}

impl std::ops::Add<&ComplexTensor> for &ComplexTensor {
    type Output = ComplexTensor;
    fn add(self, o: &ComplexTensor) -> ComplexTensor {
        ComplexTensor { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl std::ops::Sub<&ComplexTensor> for &ComplexTensor {
    type Output = ComplexTensor;
    fn sub(self, o: &ComplexTensor) -> ComplexTensor {
        ComplexTensor { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl fmt::Display for ComplexTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + i({})", self.re, self.im)
    }
}

/// A vector of the complex frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `v_j h_h` with `0 ≤ j < 2n`, `h ∈ {1, 2}`.
    V { j: usize, h: u8 },
    /// `w_s`, `0 ≤ s < 3`.
    W(usize),
}

/// Real-frame coefficients of a complex frame vector.
pub fn frame_vector(n: usize, f: Frame) -> Vec<(usize, Gaussian)> {
    let g = |a: i64, b: i64| Gaussian::new(q(a, 1), q(b, 1));
    match f {
        Frame::W(s) => vec![(w_index(n, s), g(1, 0))],
        Frame::V { j, h } => {
            let (k, upper) = if j < n { (j, false) } else { (j - n, true) };
            match (upper, h) {
                (false, 2) => vec![(4 * k, g(1, 0)), (4 * k + 1, g(0, -1))],
                (true, 1) => vec![(4 * k, g(-1, 0)), (4 * k + 1, g(0, -1))],
                (false, 1) => vec![(4 * k + 2, g(1, 0)), (4 * k + 3, g(0, -1))],
                (true, 2) => vec![(4 * k + 2, g(1, 0)), (4 * k + 3, g(0, 1))],
                _ => panic!("h is 1 or 2"),
            }
        }
    }
}

/// Inverse of [`frame_vector`] on `V`: `e_i` in the complex frame.
pub fn real_in_frame(n: usize, i: usize) -> Vec<(Frame, Gaussian)> {
    assert!(i < t_dim(n));
    if i >= v_dim(n) {
        return vec![(Frame::W(i - v_dim(n)), Gaussian::real(q(1, 1)))];
    }
    let (k, r) = (i / 4, i % 4);
    let half = |a: i64, b: i64| Gaussian::new(q(a, 2), q(b, 2));
    let (lo, hi) = (|h| Frame::V { j: k, h }, |h| Frame::V { j: n + k, h });
    match r {
        0 => vec![(lo(2), half(1, 0)), (hi(1), half(-1, 0))],
        1 => vec![(lo(2), half(0, 1)), (hi(1), half(0, 1))],
        2 => vec![(lo(1), half(1, 0)), (hi(2), half(1, 0))],
        _ => vec![(lo(1), half(0, 1)), (hi(2), half(0, -1))],
    }
}

/// A complex frame vector with a coefficient, read in one of the three roles.
#[derive(Clone, Copy, Debug)]
struct Vec1 {
    f: Frame,
    c: (i64, i64),
}

fn gauss(c: (i64, i64)) -> Gaussian {
    Gaussian::new(q(c.0, 1), q(c.1, 1))
}

fn covector(n: usize, v: &[Vec1]) -> ComplexTensor {
    let mut t = ComplexTensor::real(Tensor::form(n, 1));
    for x in v {
        for (i, c) in frame_vector(n, x.f) {
            let e = ComplexTensor::real(Tensor::basis_form(n, &[i]));
            t = &t + &e.scale(&(gauss(x.c) * c));
        }
    }
    t
}

fn vector(n: usize, v: &[Vec1]) -> ComplexTensor {
    let shape = Tensor::new(n, 0, &[Slot::Vector]);
    covector(n, v).map(|f| {
        let mut r = shape.clone();
        for (k, c) in f.terms() {
            r.add_term(&[], &[k.blade_indices()[0]], c.clone());
        }
        r
    })
}

/// `x ↦ y` as a degree-0 `gl(T)` tensor.
fn endo(n: usize, x: &[Vec1], y: &[Vec1]) -> ComplexTensor {
    vector(n, y).bilinear(&covector(n, x), |a, b| {
        let mut r = gl_form_shape(n, 0);
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                r.add_term(&[], &[ka.vals[0] as usize, kb.blade_indices()[0]], ca * cb);
            }
        }
        r
    })
}

fn form_times_endo(f: &ComplexTensor, m: &ComplexTensor) -> ComplexTensor {
    f.bilinear(m, |a, b| crate::frame::form_times_mat(a, &tensor_mat(b)))
}

fn two_form_endo(f: &ComplexTensor) -> ComplexTensor {
    let n = f.re.n();
    f.map(|x| crate::spaces::mat_tensor(n, &two_form_to_mat(x)))
}

fn real_endo(n: usize, m: &Mat) -> ComplexTensor {
    ComplexTensor::real(crate::spaces::mat_tensor(n, m))
}

fn one(f: Frame) -> Vec1 {
    Vec1 { f, c: (1, 0) }
}

fn vh(j: usize, h: u8) -> Frame {
    Frame::V { j, h }
}

/// `w_2 + i w_3` (0-based `w_1 + i w_2`).
fn w23() -> [Vec1; 2] {
    [one(Frame::W(1)), Vec1 { f: Frame::W(2), c: (0, 1) }]
}

/// A sum of terms `c · v ⊗ (a ∧ b)` in `V⊗Λ²V`.
#[derive(Clone, Debug, Default)]
struct VL2(Vec<((i64, i64), Frame, Frame, Frame)>);

impl VL2 {
    fn push(&mut self, c: (i64, i64), v: Frame, a: Frame, b: Frame) {
        self.0.push((c, v, a, b));
    }

    /// As `V*⊗gl(V)`.
    fn as_gl(&self, n: usize) -> ComplexTensor {
        let mut t = ComplexTensor::real(gl_form_shape(n, 1));
        for &(c, v, a, b) in &self.0 {
            let ab = covector(n, &[one(a)]).wedge(&covector(n, &[one(b)]));
            let term = form_times_endo(&covector(n, &[one(v)]), &two_form_endo(&ab));
            t = &t + &term.scale(&gauss(c));
        }
        t
    }

    /// The tilde, as `Λ²V*⊗V`.
    fn tilde(&self, n: usize) -> ComplexTensor {
        let mut t = ComplexTensor::real(vector_form_shape(n, 2));
        for &(c, v, a, b) in &self.0 {
            let ab = covector(n, &[one(a)]).wedge(&covector(n, &[one(b)]));
            let term = ab.wedge(&vector(n, &[one(v)]));
            t = &t + &term.scale(&gauss(c));
        }
        t
    }
}

/// A sum of terms `c · v ⊗ x ⊗ y` in `V⊗W⊗W`, with `x, y` combinations of `w_s`.
#[derive(Clone, Debug, Default)]
struct Vww(Vec<VwwTerm>);

type VwwTerm = ((i64, i64), Frame, Vec<Vec1>, Vec<Vec1>);

impl Vww {
    fn push(&mut self, c: (i64, i64), v: Frame, x: &[Vec1], y: &[Vec1]) {
        self.0.push((c, v, x.to_vec(), y.to_vec()));
    }

    fn as_gl(&self, n: usize) -> ComplexTensor {
        let mut t = ComplexTensor::real(gl_form_shape(n, 1));
        for (c, v, x, y) in &self.0 {
            let term = form_times_endo(&covector(n, &[one(*v)]), &endo(n, x, y));
            t = &t + &term.scale(&gauss(*c));
        }
        t
    }

    /// `v∧x ⊗ y`, which is `∂` of [`as_gl`](Self::as_gl).
    fn torsion(&self, n: usize) -> ComplexTensor {
        self.as_gl(n).partial()
    }
}

fn sum_j(n: usize, mut f: impl FnMut(usize, usize)) {
    for j in 0..n {
        f(j, n + j);
    }
}

fn alpha1(n: usize) -> VL2 {
    let mut a = VL2::default();
    sum_j(n, |j, nj| {
        a.push((1, 0), vh(0, 2), vh(nj, 1), vh(j, 2));
        a.push((1, 0), vh(0, 2), vh(nj, 2), vh(j, 1));
        a.push((2, 0), vh(0, 1), vh(j, 2), vh(nj, 2));
    });
    a
}

fn alpha2(n: usize) -> VL2 {
    let mut a = VL2::default();
    sum_j(n, |j, nj| {
        a.push((1, 0), vh(nj, 2), vh(j, 2), vh(0, 1));
        a.push((1, 0), vh(nj, 2), vh(0, 2), vh(j, 1));
        a.push((-1, 0), vh(j, 2), vh(nj, 2), vh(0, 1));
        a.push((-1, 0), vh(j, 2), vh(0, 2), vh(nj, 1));
    });
    a
}

fn alpha3(n: usize) -> VL2 {
    let mut a = VL2::default();
    sum_j(n, |j, nj| {
        a.push((1, 0), vh(nj, 2), vh(0, 1), vh(j, 2));
        a.push((1, 0), vh(nj, 2), vh(0, 2), vh(j, 1));
        a.push((-1, 0), vh(j, 2), vh(0, 1), vh(nj, 2));
        a.push((-1, 0), vh(j, 2), vh(0, 2), vh(nj, 1));
        a.push((-2, 0), vh(nj, 1), vh(0, 2), vh(j, 2));
        a.push((2, 0), vh(j, 1), vh(0, 2), vh(nj, 2));
    });
    a
}

fn beta1(n: usize) -> VL2 {
    let mut b = VL2::default();
    sum_j(n, |j, nj| b.push((1, 0), vh(0, 2), vh(j, 2), vh(nj, 2)));
    b
}

fn beta2(n: usize) -> VL2 {
    let mut b = VL2::default();
    sum_j(n, |j, nj| {
        b.push((1, 0), vh(j, 2), vh(0, 2), vh(nj, 2));
        b.push((-1, 0), vh(nj, 2), vh(0, 2), vh(j, 2));
    });
    b
}

fn w(s: usize) -> Vec1 {
    one(Frame::W(s))
}

fn beta3() -> Vww {
    let mut b = Vww::default();
    b.push((1, 0), vh(0, 2), &[w(0)], &w23());
    b.push((1, 0), vh(0, 2), &w23(), &[w(0)]);
    b.push((0, -2), vh(0, 1), &w23(), &w23());
    b
}

fn beta4() -> Vww {
    let mut b = Vww::default();
    b.push((1, 0), vh(0, 2), &[w(0)], &w23());
    b.push((-1, 0), vh(0, 2), &w23(), &[w(0)]);
    b
}

fn alpha4() -> Vww {
    let mut a = Vww::default();
    for s in 0..3 {
        a.push((1, 0), vh(0, 2), &[w(s)], &[w(s)]);
    }
    a
}

fn alpha5() -> Vww {
    let mut a = Vww::default();
    a.push((1, 0), vh(0, 2), &[w(1)], &[w(2)]);
    a.push((-1, 0), vh(0, 2), &[w(2)], &[w(1)]);
    a.push((1, 0), vh(0, 1), &[w(0)], &w23());
    a.push((-1, 0), vh(0, 1), &w23(), &[w(0)]);
    a
}

/// `ω_2 + iω_3` as a complex 2-form.
fn omega23(n: usize) -> ComplexTensor {
    ComplexTensor { re: omega(n, 1), im: omega(n, 2) }
}

/// The `S²H` vector spanning `ker ∂_K`, in `T*⊗gl(T)`.
fn ker_k(n: usize) -> ComplexTensor {
    let mut t = ComplexTensor::real(gl_form_shape(n, 1));
    let iw1 = [Vec1 { f: Frame::W(0), c: (0, 1) }];
    sum_j(n, |j, nj| {
        for (sign, a, b) in [(1, j, nj), (-1, nj, j)] {
            // v_a h_2 ⊗ ((w^2+iw^3) ⊗ v_b h_1 + i w^1 ⊗ v_b h_2)
            let m = &endo(n, &w23(), &[one(vh(b, 1))]) + &endo(n, &iw1, &[one(vh(b, 2))]);
            let term = form_times_endo(&covector(n, &[one(vh(a, 2))]), &m);
            t = &t + &term.scale(&Gaussian::real(q(sign, 1)));
        }
    });
    let wf = covector(n, &w23());
    let id = crate::frame::id_v(n).add(&crate::frame::id_w(n).scale(&q(2, 1)));
    t = &t - &form_times_endo(&wf, &real_endo(n, &id));
    // i w^1 ⊗ (ξ_2 + iξ_3) − i (w^2+iw^3) ⊗ ξ_1
    let xi23 = ComplexTensor { re: crate::spaces::mat_tensor(n, &sp1(n, 1)), im: crate::spaces::mat_tensor(n, &sp1(n, 2)) };
    t = &t + &form_times_endo(&covector(n, &iw1), &xi23);
    t = &t - &form_times_endo(&wf, &real_endo(n, &sp1(n, 0))).scale(&Gaussian::i());
    t
}

/// Named vectors accepted by [`build_hwv`].
pub const HWV_NAMES: &[&str] = &["alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "beta1", "beta2", "beta3", "beta4", "kerK", "genEH"];

/// The vector `name` at rank `n`: `alpha1..3`, `beta1..2` in `V*⊗gl(V)`;
/// `alpha4..5`, `beta3..4` in `V*⊗gl(W)`; `kerK` in `T*⊗k`; `genEH` in `Λ²T*⊗T`.
/// At `n = 1` the formulas give `alpha3 = alpha1` and `beta2 = beta1`.
pub fn build_hwv(name: &str, n: usize) -> Result<ComplexTensor, HwvError> {
    Ok(match name {
        "alpha1" => alpha1(n).as_gl(n),
        "alpha2" => alpha2(n).as_gl(n),
        "alpha3" => alpha3(n).as_gl(n),
        "alpha4" => alpha4().as_gl(n),
        "alpha5" => alpha5().as_gl(n),
        "beta1" => beta1(n).as_gl(n),
        "beta2" => beta2(n).as_gl(n),
        "beta3" => beta3().as_gl(n),
        "beta4" => beta4().as_gl(n),
        "kerK" => ker_k(n),
        "genEH" => gen_eh(&Vectors::new(n)),
        other => return Err(HwvError::UnknownVector(other.to_string())),
    })
}

/// All the vectors at one rank, with their tilde or torsion forms.
struct Vectors {
    /// `∂α_i`, `α̃_i` for `i = 1, 2, 3`.
    d_alpha: [ComplexTensor; 3],
    ta: [ComplexTensor; 3],
    d_beta: [ComplexTensor; 2],
    tb: [ComplexTensor; 2],
    /// Torsion forms of `α_4, α_5, β_3, β_4`.
    a4: ComplexTensor,
    a5: ComplexTensor,
    b3: ComplexTensor,
    b4: ComplexTensor,
}

impl Vectors {
    fn new(n: usize) -> Self {
        let a = [alpha1(n), alpha2(n), alpha3(n)];
        let b = [beta1(n), beta2(n)];
        Vectors {
            d_alpha: [0, 1, 2].map(|i| a[i].as_gl(n).partial()),
            ta: [0, 1, 2].map(|i| a[i].tilde(n)),
            d_beta: [0, 1].map(|i| b[i].as_gl(n).partial()),
            tb: [0, 1].map(|i| b[i].tilde(n)),
            a4: alpha4().torsion(n),
            a5: alpha5().torsion(n),
            b3: beta3().torsion(n),
            b4: beta4().torsion(n),
        }
    }
}

/// `Σ c_i x_i` with rational `(p, q)` real parts and optional imaginary parts.
fn comb(terms: &[((i64, i64), &ComplexTensor)]) -> ComplexTensor {
    comb_g(&terms.iter().map(|(c, t)| (Gaussian::real(q(c.0, c.1)), *t)).collect::<Vec<_>>())
}

fn comb_g(terms: &[(Gaussian, &ComplexTensor)]) -> ComplexTensor {
    let mut it = terms.iter();
    let (c0, t0) = it.next().expect("nonempty");
    it.fold(t0.scale(c0), |acc, (c, t)| &acc + &t.scale(c))
}

fn gi(a: (i64, i64), b: (i64, i64)) -> Gaussian {
    Gaussian::new(q(a.0, a.1), q(b.0, b.1))
}

/// `½α̃_1 − α_4 + iα_5`.
fn gen_eh(v: &Vectors) -> ComplexTensor {
    comb_g(&[(gi((1, 2), (0, 1)), &v.ta[0]), (gi((-1, 1), (0, 1)), &v.a4), (gi((0, 1), (1, 1)), &v.a5)])
}

/// `ξ ∈ Hom(W, V)`, complexified, acting on `Θ_0`.
fn hom_action_on_theta0(n: usize, xi: &ComplexTensor) -> ComplexTensor {
    let t0 = theta0(n);
    xi.map(|m| t0.act(&tensor_mat(m)))
}

/// Result of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResult {
    pub id: &'static str,
    pub n: usize,
    /// Zero when the identity holds.
    pub residual: ComplexTensor,
    pub note: Option<String>,
}

impl IdentityResult {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.note.as_deref().is_none_or(|s| !s.starts_with("fails"))
    }
}

/// Identity names accepted by [`verify_identity`].
pub const IDENTITIES: &[&str] = &[
    "∂α1", "∂α2", "∂α3", "∂β1", "∂β2", "∂K(kerK)", "Θ0⌟kerK", "EH·Θ0", "ES3H·Θ0",
];

/// `LHS − RHS` of a cataloged identity.
pub fn verify_identity(id: &str, n: usize) -> Result<IdentityResult, HwvError> {
    let v = Vectors::new(n);
    let (ta, tb) = (&v.ta, &v.tb);
    let mut note = None;
    let residual = match id {
        "∂α1" => &v.d_alpha[0] - &comb(&[((1, 2), &ta[2]), ((-3, 2), &ta[1])]),
        "∂α2" => &v.d_alpha[1] - &comb(&[((-1, 1), &ta[0]), ((-1, 2), &ta[2]), ((1, 2), &ta[1])]),
        "∂α3" => &v.d_alpha[2] - &comb(&[((1, 1), &ta[0]), ((-1, 2), &ta[2]), ((-3, 2), &ta[1])]),
        "∂β1" => &v.d_beta[0] + &tb[1],
        "∂β2" => &v.d_beta[1] - &comb(&[((1, 1), &tb[1]), ((-2, 1), &tb[0])]),
        "∂K(kerK)" => ker_k(n).partial(),
        "Θ0⌟kerK" => {
            // tr(Θ_0 ⌟ kerK) is a nonzero multiple of ω_2 + iω_3
            let tr = ker_k(n).theta0_contraction().map(trace_form);
            let (i, j) = (0, 2);
            let c = tr.coeff(&[i, j], &[]);
            let w = omega23(n);
            let wc = w.coeff(&[i, j], &[]);
            if c.is_zero() || wc.is_zero() {
                note = Some("fails: trace has no ω_2 + iω_3 component".into());
                tr
            } else {
                let ratio = gaussian_div(&c, &wc);
                note = Some(format!("tr(Θ0⌟kerK) = ({ratio})(ω2 + iω3)"));
                &tr - &w.scale(&ratio)
            }
        }
        "EH·Θ0" => {
            // (w^2+iw^3) ⊗ v_1h_1 + i w^1 ⊗ v_1h_2
            let xi = &endo(n, &w23(), &[one(vh(0, 1))]) + &endo(n, &[Vec1 { f: Frame::W(0), c: (0, 1) }], &[one(vh(0, 2))]);
            &hom_action_on_theta0(n, &xi) - &gen_eh(&v)
        }
        "ES3H·Θ0" => {
            // (w^2+iw^3) ⊗ v_1h_2, modulo Λ^{0,2}⊗T + Λ^{1,1}⊗V
            let xi = endo(n, &w23(), &[one(vh(0, 2))]);
            let want = comb_g(&[(gi((1, 1), (0, 1)), &tb[0]), (gi((0, 1), (1, 2)), &v.b3), (gi((0, 1), (-1, 2)), &v.b4)]);
            let vd = v_dim(n);
            (&hom_action_on_theta0(n, &xi) - &want).map(|t| {
                t.filter(|k| {
                    let q_deg = crate::tensor::bits(k.blade).filter(|&i| i >= vd).count();
                    !(q_deg == 2 || (q_deg == 1 && (k.vals[0] as usize) < vd))
                })
            })
        }
        other => return Err(HwvError::UnknownIdentity(other.to_string())),
    };
    Ok(IdentityResult { id: IDENTITIES.iter().find(|&&s| s == id).copied().expect("listed"), n, residual, note })
}

fn gaussian_div(a: &Gaussian, b: &Gaussian) -> Gaussian {
    let d = &b.re * &b.re + &b.im * &b.im;
    let num = a.clone() * b.conj();
    Gaussian::new(num.re / &d, num.im / &d)
}

/// Ambient spaces for [`membership_mod_image`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `im ∂_B`.
    ImPartialB,
    /// `∂(V*⊗(sp(n)+sp(1)+ℝ))`.
    ImPartialVH,
    /// `V*⊗b` itself, before `∂`.
    VStarB,
    /// `T*⊗k` itself, before `∂`.
    TStarK,
}

fn v_hq_image(n: usize) -> SubspaceBasis {
    let spaces = ModelSpaces::get(n);
    let mut mats: Vec<Mat> = spaces.sp_n.matrices().to_vec();
    mats.extend(spaces.sp_1.matrices().iter().cloned());
    mats.push(scalar_r(n));
    let gens = (0..v_dim(n)).flat_map(|a| mats.iter().map(move |m| partial(&crate::frame::one_form_times_mat(n, a, m))).collect::<Vec<_>>());
    SubspaceBasis::span(&vector_form_shape(n, 2), gens)
}

fn rows_in(x: &Tensor, alg: &AlgebraBasis, rows: std::ops::Range<usize>) -> bool {
    let c = crate::connection::ConnectionForm::from_form(&crate::model::CoframeModel::new("", x.n(), 0, vec![Tensor::form(x.n(), 2); t_dim(x.n())]), x);
    c.rows().iter().enumerate().all(|(k, m)| m.is_zero() || (rows.contains(&k) && alg.contains(m)))
}

/// Whether `x` lies in the complexification of `target`.
pub fn membership_mod_image(x: &ComplexTensor, target: Target) -> bool {
    let n = x.re.n();
    let spaces = ModelSpaces::get(n);
    match target {
        Target::ImPartialB => {
            let im = &spaces.torsion_spaces().im_partial_b;
            im.contains(&x.re) && im.contains(&x.im)
        }
        Target::ImPartialVH => {
            let im = v_hq_image(n);
            im.contains(&x.re) && im.contains(&x.im)
        }
        Target::VStarB => rows_in(&x.re, &spaces.b, 0..v_dim(n)) && rows_in(&x.im, &spaces.b, 0..v_dim(n)),
        Target::TStarK => rows_in(&x.re, &spaces.k, 0..t_dim(n)) && rows_in(&x.im, &spaces.k, 0..t_dim(n)),
    }
}

/// One cataloged membership relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub id: &'static str,
    pub n: usize,
    pub expected: bool,
    pub member: bool,
}

impl MembershipResult {
    pub fn holds(&self) -> bool {
        self.expected == self.member
    }
}

/// The membership relations among the vectors at rank `n`.
pub fn membership_catalog(n: usize) -> Vec<MembershipResult> {
    let v = Vectors::new(n);
    let ta = &v.ta;
    let d13 = &ta[0] - &ta[2];
    let d12 = &ta[0] - &ta[1].scale(&Gaussian::real(q(3, 1)));
    // x ≡ a(α̃1−α̃3) + b(α̃1−3α̃2) mod im ∂_B
    let equiv = |x: &ComplexTensor, a: Gaussian, b: Gaussian| x - &comb_g(&[(a, &d13), (b, &d12)]);
    let r = |a: i64, b: i64| Gaussian::real(q(a, b));
    let ii = |a: i64, b: i64| Gaussian::new(zero(), q(a, b));
    let gl = |name: &str| build_hwv(name, n).expect("known");
    let items: Vec<(&'static str, ComplexTensor, Target, bool)> = vec![
        ("2α̃1+α̃3−α̃2 ∈ im∂B", comb(&[((2, 1), &ta[0]), ((1, 1), &ta[2]), ((-1, 1), &ta[1])]), Target::ImPartialB, true),
        ("α̃1 ≡ ⅜(α̃1−α̃3)−⅛(α̃1−3α̃2)", equiv(&ta[0], r(3, 8), r(-1, 8)), Target::ImPartialB, true),
        ("α̃2 ≡ ⅛(α̃1−α̃3)−⅜(α̃1−3α̃2)", equiv(&ta[1], r(1, 8), r(-3, 8)), Target::ImPartialB, true),
        ("α̃3 ≡ −⅝(α̃1−α̃3)−⅛(α̃1−3α̃2)", equiv(&ta[2], r(-5, 8), r(-1, 8)), Target::ImPartialB, true),
        ("α4 ≡ (α̃1−α̃3)/16+(α̃1−3α̃2)/16", equiv(&v.a4, r(1, 16), r(1, 16)), Target::ImPartialB, true),
        ("α5 ≡ i(α̃1−α̃3)/8−i(α̃1−3α̃2)/8", equiv(&v.a5, ii(1, 8), ii(-1, 8)), Target::ImPartialB, true),
        ("½α̃1−α4+iα5 ∈ im∂B", gen_eh(&v), Target::ImPartialB, true),
        ("β̃1 ∈ im∂B", v.tb[0].clone(), Target::ImPartialB, false),
        ("α̃1 ∈ im∂B", ta[0].clone(), Target::ImPartialB, false),
        ("∂α2 ∈ ∂(V*⊗(sp(n)+H))", v.d_alpha[1].clone(), Target::ImPartialVH, true),
        (
            "α̃2+α̃3+8α4 ∈ ∂(V*⊗(sp(n)+H))",
            comb(&[((1, 1), &ta[1]), ((1, 1), &ta[2]), ((8, 1), &v.a4)]),
            Target::ImPartialVH,
            true,
        ),
        (
            "8iα5−α̃3+3α̃2 ∈ ∂(V*⊗(sp(n)+H))",
            comb_g(&[(ii(8, 1), &v.a5), (r(-1, 1), &ta[2]), (r(3, 1), &ta[1])]),
            Target::ImPartialVH,
            true,
        ),
        ("β̃2+2iβ4 ∈ ∂(V*⊗(sp(n)+H))", comb_g(&[(r(1, 1), &v.tb[1]), (ii(2, 1), &v.b4)]), Target::ImPartialVH, true),
        ("4iα5−α1 ∈ V*⊗b", comb_g(&[(ii(4, 1), &gl("alpha5")), (r(-1, 1), &gl("alpha1"))]), Target::VStarB, true),
        ("β1−2iβ4 ∈ V*⊗b", comb_g(&[(r(1, 1), &gl("beta1")), (ii(-2, 1), &gl("beta4"))]), Target::VStarB, true),
        ("kerK ∈ T*⊗k", ker_k(n), Target::TStarK, true),
    ];
    items
        .into_iter()
        .map(|(id, x, t, expected)| MembershipResult { id, n, expected, member: membership_mod_image(&x, t) })
        .collect()
}

/// Every identity and membership relation at rank `n`, as `(name, passed, detail)`.
pub fn run_catalog(n: usize) -> Vec<(String, bool, String)> {
    let mut out: Vec<(String, bool, String)> = IDENTITIES
        .iter()
        .map(|id| {
            let r = verify_identity(id, n).expect("listed");
            let detail = if r.residual.is_zero() { r.note.clone().unwrap_or_default() } else { format!("residual {}", r.residual) };
            (id.to_string(), r.holds(), detail)
        })
        .collect();
    out.extend(membership_catalog(n).into_iter().map(|m| {
        let detail = match (m.expected, m.member) {
            (false, false) => "not a member, as expected".to_string(),
            (true, true) => String::new(),
            (e, g) => format!("expected {e}, got {g}"),
        };
        (m.id.to_string(), m.holds(), detail)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        for n in 1..=2 {
            for i in 0..t_dim(n) {
                let mut acc = vec![Gaussian::default(); t_dim(n)];
                for (f, c) in real_in_frame(n, i) {
                    for (k, d) in frame_vector(n, f) {
                        acc[k] = acc[k].clone() + c.clone() * d;
                    }
                }
                for (k, x) in acc.iter().enumerate() {
                    let want = if k == i { Gaussian::real(q(1, 1)) } else { Gaussian::default() };
                    assert_eq!(*x, want, "e_{i} at n = {n}");
                }
            }
        }
    }

    #[test]
    fn contraction_convention() {
        let n = 2;
        let pair = |a: Frame, b: Frame| {
            let (x, y) = (frame_vector(n, a), frame_vector(n, b));
            x.iter().flat_map(|(i, c)| y.iter().filter(move |(j, _)| j == i).map(move |(_, d)| c.clone() * d.clone())).fold(Gaussian::default(), |s, t| s + t)
        };
        assert!(pair(vh(0, 2), vh(0, 2)).is_zero());
        assert_eq!(pair(vh(0, 2), vh(2, 1)), Gaussian::real(q(-2, 1)));
    }

    #[test]
    fn alpha4_shape() {
        let a = build_hwv("alpha4", 1).unwrap();
        // v_1h_2 = e^1 − i e^2, so the e^1 ⊗ (w_1 ↦ w_1) coefficient is 1
        assert_eq!(a.coeff(&[0], &[4, 4]), Gaussian::real(q(1, 1)));
        assert_eq!(a.coeff(&[1], &[5, 5]), Gaussian::new(zero(), q(-1, 1)));
    }

    #[test]
    fn n1_aliases() {
        assert_eq!(build_hwv("alpha3", 1), build_hwv("alpha1", 1));
        assert_eq!(build_hwv("beta2", 1), build_hwv("beta1", 1));
        assert_ne!(build_hwv("alpha3", 2), build_hwv("alpha1", 2));
    }

    #[test]
    fn unknown_names() {
        assert!(build_hwv("gamma", 1).is_err());
        assert!(verify_identity("nope", 1).is_err());
    }
}
