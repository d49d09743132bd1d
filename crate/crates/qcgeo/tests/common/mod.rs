#![allow(dead_code)]

pub mod formulas;

use qcgeo::connection::ConnectionForm;
use qcgeo::corpus;
use qcgeo::linalg::dense::{self, Matrix};
use qcgeo::mat::Mat;
use qcgeo::model::CoframeModel;
use qcgeo::pipeline::shift_complement;
use qcgeo::scalar::{int, q, Scalar};
use qcgeo::spaces::ModelSpaces;
use qcgeo::tensor::{t_dim, v_dim, w_index};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero-denominator rational, zero allowed.
pub fn small_rational(r: &mut impl Rng) -> Scalar {
    q(r.gen_range(-4..=4), r.gen_range(1..=3))
}

pub fn nonzero_rational(r: &mut impl Rng) -> Scalar {
    loop {
        let x = small_rational(r);
        if x != int(0) {
            return x;
        }
    }
}

/// `(I + X)(I − X)^{-1}` for a random `X ∈ sp(n)`, as a `T × T` matrix that fixes `W`.
pub fn random_sp_n(n: usize, r: &mut impl Rng) -> Matrix {
    let spaces = ModelSpaces::get(n);
    let mut x = Mat::zero();
    for m in spaces.sp_n.matrices() {
        if r.gen_bool(0.4) {
            x.axpy(&small_rational(r), m);
        }
    }
    let d = t_dim(n);
    let mut plus = dense::identity(d);
    let mut minus = dense::identity(d);
    for (&(i, j), c) in x.entries() {
        plus[i][j] += c;
        minus[i][j] -= c;
    }
    dense::mul(&plus, &dense::inverse(&minus).expect("I − X is invertible for skew X"))
}

/// `e^a ↦ λ e^a`, `w^s ↦ λ² w^s`.
pub fn scaling(n: usize, lambda: &Scalar) -> Matrix {
    let mut p = dense::identity(t_dim(n));
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = if i < v_dim(n) { lambda.clone() } else { lambda * lambda };
    }
    p
}

pub fn transform(model: &CoframeModel, p: &Matrix) -> CoframeModel {
    let p_inv = dense::inverse(p).expect("invertible");
    model.change_coframe(p, &p_inv)
}

pub fn random_eh_shift(n: usize, r: &mut impl Rng) -> Vec<Scalar> {
    (0..v_dim(n)).map(|_| small_rational(r)).collect()
}

/// A corpus model moved by a random `Sp(n)` rotation, a rescaling and an `EH`
/// shift of the complement. Still a qc structure, no longer in normal form.
pub fn random_model(pool: &[CoframeModel], r: &mut impl Rng) -> CoframeModel {
    let m = &pool[r.gen_range(0..pool.len())];
    let n = m.n();
    let m = transform(m, &random_sp_n(n, r));
    let lambda = if r.gen_bool(0.5) { int(1) } else { q(r.gen_range(1..=3), r.gen_range(1..=3)) };
    let m = transform(&m, &scaling(n, &lambda));
    if r.gen_bool(0.5) {
        shift_complement(&m, &random_eh_shift(n, r))
    } else {
        m
    }
}

/// The Lie group models of rank one; cheap enough for every property case.
pub fn small_pool() -> Vec<CoframeModel> {
    vec![corpus::heisenberg(1), corpus::cfs_solvable(), corpus::sphere(1), corpus::hyperbolic(1)]
}

/// A sparse random `gl(T)`-valued connection, isotropy rows included.
pub fn random_connection(model: &CoframeModel, terms: usize, r: &mut impl Rng) -> ConnectionForm {
    let d = t_dim(model.n());
    let mut form = qcgeo::frame::gl_form_shape(model.n(), 1);
    for _ in 0..terms {
        let k = r.gen_range(0..model.dim());
        let (i, j) = (r.gen_range(0..d), r.gen_range(0..d));
        form += &qcgeo::frame::one_form_times_mat(model.n(), k, &Mat::unit(i, j).scale(&nonzero_rational(r)));
    }
    ConnectionForm::isotropy(model).plus(&form)
}

pub fn w(n: usize, s: usize) -> usize {
    w_index(n, s)
}
