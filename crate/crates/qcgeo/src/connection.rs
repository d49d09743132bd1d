//! Constant-coefficient connections on a coframe model: torsion, curvature,
//! Bianchi residuals, Ricci and covariant derivatives of the tautological
//! forms.
//!
//! A connection is `ω = Σ_k e^k ⊗ A_k` with one matrix per coframe element,
//! isotropy directions included. On a homogeneous model the isotropy rows are
//! the projection connection (see [`ConnectionForm::isotropy`]) and the
//! horizontal rows are free.

use crate::frame::{compose, gl_form_shape, one_form_times_mat, tautological, vector_form_shape};
use crate::linalg::dense::Matrix;
use crate::mat::Mat;
use crate::model::CoframeModel;
use crate::scalar::{int, Scalar};
use crate::spaces::AlgebraBasis;
use crate::tensor::{bits, t_dim, v_dim, w_index, Slot, Tensor};
use num::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionForm {
    n: usize,
    rows: Vec<Mat>,
}

impl ConnectionForm {
    /// The flat connection `ω = 0` of the coframe.
    pub fn zero(model: &CoframeModel) -> Self {
        ConnectionForm { n: model.n(), rows: vec![Mat::zero(); model.dim()] }
    }

    /// Zero on `T`, and on each isotropy direction `e^α` the matrix that
    /// cancels the `e^α ∧ e^j` terms of `de^i`. For a Lie group model this is
    /// [`zero`](Self::zero).
    pub fn isotropy(model: &CoframeModel) -> Self {
        let mut c = Self::zero(model);
        let big_n = t_dim(model.n());
        for alpha in big_n..model.dim() {
            let mut m = Mat::zero();
            for i in 0..big_n {
                let x = model.de(i).interior(alpha);
                for j in 0..big_n {
                    let v = x.coeff(&[j], &[]);
                    if !v.is_zero() {
                        m.add_entry(i, j, -v);
                    }
                }
            }
            c.rows[alpha] = m;
        }
        c
    }

    /// Builds a connection from a `gl(T)`-valued 1-form.
    pub fn from_form(model: &CoframeModel, form: &Tensor) -> Self {
        assert_eq!(form.slots(), &[Slot::Vector, Slot::Covector]);
        assert_eq!(form.degree(), 1);
        let mut c = Self::zero(model);
        for (k, v) in form.terms() {
            let i = k.blade.trailing_zeros() as usize;
            c.rows[i].add_entry(k.vals[0] as usize, k.vals[1] as usize, v.clone());
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Mat] {
        &self.rows
    }

    /// `A_k`.
    pub fn row(&self, k: usize) -> &Mat {
        &self.rows[k]
    }

    /// `ω` as a `gl(T)`-valued 1-form.
    pub fn form(&self) -> Tensor {
        let mut t = gl_form_shape(self.n, 1);
        for (k, m) in self.rows.iter().enumerate() {
            t += &one_form_times_mat(self.n, k, m);
        }
        t
    }

    /// The horizontal rows `k < 4n+3` only.
    pub fn horizontal_form(&self) -> Tensor {
        self.form().horizontal()
    }

    /// `ω + x` for a `gl(T)`-valued 1-form `x`.
    pub fn plus(&self, x: &Tensor) -> Self {
        let mut c = self.clone();
        for (k, v) in x.terms() {
            let i = k.blade.trailing_zeros() as usize;
            c.rows[i].add_entry(k.vals[0] as usize, k.vals[1] as usize, v.clone());
        }
        c
    }

    /// Whether every row lies in `alg`.
    pub fn takes_values_in(&self, alg: &AlgebraBasis) -> bool {
        self.rows.iter().all(|m| m.is_zero() || alg.contains(m))
    }
}

/// `dθ + ω∧θ` on the whole coframe, isotropy terms included.
pub fn torsion_full(model: &CoframeModel, w: &ConnectionForm) -> Tensor {
    let n = model.n();
    let mut t = vector_form_shape(n, 2);
    for i in 0..t_dim(n) {
        for (k, c) in model.de(i).terms() {
            t.add_term(&k.blade_indices(), &[i], c.clone());
        }
    }
    t += &compose(&w.form(), &tautological(n));
    t
}

/// Torsion at the origin: the horizontal part of [`torsion_full`].
pub fn torsion(model: &CoframeModel, w: &ConnectionForm) -> Tensor {
    torsion_full(model, w).horizontal()
}

/// `dω + ω∧ω` on the whole coframe.
pub fn curvature_full(model: &CoframeModel, w: &ConnectionForm) -> Tensor {
    let f = w.form();
    let mut r = model.d(&f);
    r += &compose(&f, &f);
    r
}

/// Curvature at the origin, a `gl(T)`-valued horizontal 2-form.
pub fn curvature(model: &CoframeModel, w: &ConnectionForm) -> Tensor {
    curvature_full(model, w).horizontal()
}

/// `(dΘ + ω∧Θ − Ω∧θ, dΩ + ω∧Ω − Ω∧ω)`; both vanish identically.
pub fn bianchi_residuals(model: &CoframeModel, w: &ConnectionForm) -> (Tensor, Tensor) {
    let n = model.n();
    let f = w.form();
    let th = torsion_full(model, w);
    let om = curvature_full(model, w);
    let mut first = model.d(&th);
    first += &compose(&f, &th);
    first -= &compose(&om, &tautological(n));
    let mut second = model.d(&om);
    second += &compose(&f, &om);
    second -= &compose(&om, &f);
    (first, second)
}

/// Ricci contraction `ric(x, y) = Σ_a ⟨e^a, Ω(e_a, e_x) e_y⟩` over `a < 4n`, as a
/// `4n × 4n` matrix, together with its trace.
pub fn ricci(omega: &Tensor) -> (Matrix, Scalar) {
    let n = omega.n();
    let vd = v_dim(n);
    let mut ric = vec![vec![Scalar::zero(); vd]; vd];
    for (k, c) in omega.terms() {
        let ix: Vec<usize> = bits(k.blade).collect();
        let (p, q) = (ix[0], ix[1]);
        let (a, y) = (k.vals[0] as usize, k.vals[1] as usize);
        if a >= vd || y >= vd {
            continue;
        }
        // Ω(e_p, e_q) = c, Ω(e_q, e_p) = -c
        if a == p && q < vd {
            ric[q][y] += c;
        }
        if a == q && p < vd {
            ric[p][y] -= c;
        }
    }
    let tr = (0..vd).map(|i| ric[i][i].clone()).sum();
    (ric, tr)
}

/// The tautological forms whose covariant derivatives encode the intrinsic torsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tautological {
    /// `σ = w^{123} ⊗ w_{123}`.
    Sigma,
    /// `η = Σ w^s ⊗ w_s`.
    Eta,
    /// `γ = Σ ω_s ∧ w^{123} ⊗ (w_s ⊗ w_{123})`.
    Gamma,
}

impl Tautological {
    pub fn form(self, n: usize) -> Tensor {
        let w = |s| w_index(n, s);
        match self {
            Tautological::Sigma => Tensor::new(n, 3, &[Slot::Kappa]).with_term(&[w(0), w(1), w(2)], &[0], int(1)),
            Tautological::Eta => {
                let mut t = Tensor::new(n, 1, &[Slot::Quotient]);
                for s in 0..3 {
                    t.add_term(&[w(s)], &[s], int(1));
                }
                t
            }
            Tautological::Gamma => {
                let vol = crate::frame::w123(n);
                let mut t = Tensor::new(n, 5, &[Slot::Quotient, Slot::Kappa]);
                for s in 0..3 {
                    let f = crate::frame::omega(n, s).wedge(&vol).expect("scalar forms");
                    for (k, c) in f.terms() {
                        t.add_term(&k.blade_indices(), &[s, 0], c.clone());
                    }
                }
                t
            }
        }
    }
}

/// `Dα = dα + Σ_k e^k ∧ (A_k · α)` at the origin.
pub fn tensorial_derivative(model: &CoframeModel, w: &ConnectionForm, which: Tautological) -> Tensor {
    let a = which.form(model.n());
    let mut r = model.d(&a);
    for (k, m) in w.rows().iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let e = Tensor::basis_form(model.n(), &[k]);
        r += &e.wedge(&a.act_values(m)).expect("slots fit");
    }
    r.horizontal()
}

/// `e_k ⌟ α` summed against a `T`-valued form: `Θ ⌟ α` for `Θ ∈ Λ²T*⊗T` and a
/// form `α`, contracting the value of `Θ` into `α` and wedging the form parts.
pub fn contract_torsion(theta: &Tensor, alpha: &Tensor) -> Tensor {
    assert_eq!(theta.slots(), &[Slot::Vector]);
    let n = theta.n();
    let mut r = Tensor::new(n, theta.degree() + alpha.degree() - 1, alpha.slots());
    for (k, c) in theta.terms() {
        let f = Tensor::from_terms(n, theta.degree(), &[], [(crate::tensor::Key { blade: k.blade, vals: [0; 4] }, c.clone())].into());
        let i = alpha.interior(k.vals[0] as usize);
        if !i.is_zero() {
            r += &f.wedge(&i).expect("slots fit");
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::frame::theta0;

    #[test]
    fn heisenberg_flat_connection() {
        for n in 1..=2 {
            let m = corpus::heisenberg(n);
            let w = ConnectionForm::zero(&m);
            assert_eq!(torsion(&m, &w), theta0(n));
            assert!(curvature(&m, &w).is_zero());
        }
    }

    #[test]
    fn bianchi_on_corpus() {
        for m in corpus::bundled() {
            let w = ConnectionForm::isotropy(&m);
            let (a, b) = bianchi_residuals(&m, &w);
            assert!(a.is_zero() && b.is_zero(), "{}", m.name());
        }
    }

    #[test]
    fn isotropy_connection_kills_vertical_torsion() {
        let m = corpus::sphere(1);
        let w = ConnectionForm::isotropy(&m);
        assert!(torsion_full(&m, &w).is_horizontal());
        assert!(curvature_full(&m, &w).is_horizontal());
    }

    #[test]
    fn ricci_of_a_single_term() {
        // Ω = e^{01} ⊗ E_{0,1}: Ω(e_0, e_1) e_1 = e_0, so ric(1, 1) = 1
        let om = crate::frame::form_times_mat(&Tensor::basis_form(1, &[0, 1]), &Mat::unit(0, 1));
        let (r, s) = ricci(&om);
        assert_eq!(r[1][1], int(1));
        assert_eq!(s, int(1));
    }

    #[test]
    fn eta_derivative_matches_torsion_contraction() {
        let m = corpus::cfs_solvable();
        let w = ConnectionForm::zero(&m);
        let d = tensorial_derivative(&m, &w, Tautological::Eta);
        let t = torsion(&m, &w);
        let c = contract_torsion(&t, &Tautological::Eta.form(1));
        assert_eq!(d.bigrade(2, 0), c.bigrade(2, 0));
        assert_eq!(d.bigrade(1, 1), c.bigrade(1, 1));
    }
}
