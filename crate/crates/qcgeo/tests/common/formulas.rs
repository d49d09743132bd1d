//! The closed-form tensors printed for the example models, built from the frame
//! primitives. Indices in `f` and `vec1` are 1-based to match the printed forms.

use qcgeo::frame::{
    contract_omega, eh, form_times_mat, gl_form_shape, omega, one_form_times_mat, sp1, two_form_to_mat, w123,
};
use qcgeo::scalar::{int, q, Scalar};
use qcgeo::tensor::{v_dim, w_index, Slot, Tensor};

/// `e^{i j …}`, 1-based.
pub fn f(n: usize, ix: &[usize]) -> Tensor {
    Tensor::basis_form(n, &ix.iter().map(|i| i - 1).collect::<Vec<_>>())
}

/// `α ⊗ e_v` for a scalar form `α`, `v` 1-based.
pub fn vec1(alpha: &Tensor, v: usize) -> Tensor {
    let mut t = Tensor::new(alpha.n(), alpha.degree(), &[Slot::Vector]);
    for (k, c) in alpha.terms() {
        t.add_term(&k.blade_indices(), &[v - 1], c.clone());
    }
    t
}

/// `Σ_a e^a ⊗ EH_a`.
pub fn eh_diagonal(n: usize) -> Tensor {
    (0..v_dim(n)).fold(gl_form_shape(n, 1), |acc, a| &acc + &one_form_times_mat(n, a, &eh(n, a)))
}

/// `Σ_{a,r} (e_a ⌟ ω_r) ∧ w^r ⊗ EH_a`.
pub fn eh_curvature_term(n: usize) -> Tensor {
    let mut t = gl_form_shape(n, 2);
    for a in 0..v_dim(n) {
        let mut fm = Tensor::form(n, 2);
        for r in 0..3 {
            fm += &contract_omega(n, a, r).wedge(&Tensor::basis_form(n, &[w_index(n, r)])).unwrap();
        }
        t += &form_times_mat(&fm, &eh(n, a));
    }
    t
}

/// Curvature of the projection connection on the sphere (`sign = 1`) or the
/// hyperbolic model (`sign = −1`).
pub fn projection_curvature(n: usize, sign: i64) -> Tensor {
    let vd = v_dim(n);
    let mut t = gl_form_shape(n, 2);
    for a in 0..vd {
        for b in a + 1..vd {
            let eab = Tensor::basis_form(n, &[a, b]);
            let mut x = two_form_to_mat(&eab);
            for s in 0..3 {
                let wv = contract_omega(n, a, s).wedge(&contract_omega(n, b, s)).unwrap();
                x = x.add(&two_form_to_mat(&wv));
            }
            t.axpy(&int(-sign), &form_times_mat(&eab, &x));
        }
    }
    let vol = w123(n);
    for s in 0..3 {
        let mut fm = omega(n, s);
        fm.axpy(&int(-2 * sign), &vol.interior(w_index(n, s)));
        t.axpy(&int(-sign), &form_times_mat(&fm, &sp1(n, s)));
    }
    t
}

/// Torsion of the projection connection: `±(e_a ⌟ ω_s) ∧ w^s ⊗ e_a + Θ₀`.
pub fn projection_torsion(n: usize, sign: i64) -> Tensor {
    let mut t = qcgeo::frame::theta0(n);
    for a in 0..v_dim(n) {
        for s in 0..3 {
            let fm = contract_omega(n, a, s).wedge(&Tensor::basis_form(n, &[w_index(n, s)])).unwrap();
            t.axpy(&int(sign), &vec1(&fm, a + 1));
        }
    }
    t
}

/// `(ω₁∧w^{23} + ω₂∧w^{31} + ω₃∧w^{12}) ⊗ w_{123}`.
pub fn projection_d_sigma(n: usize) -> Tensor {
    let w = |s| w_index(n, s);
    let mut t = Tensor::new(n, 4, &[Slot::Kappa]);
    for (s, (a, b)) in [(0, (1, 2)), (1, (2, 0)), (2, (0, 1))] {
        let fm = omega(n, s).wedge(&Tensor::basis_form(n, &[w(a), w(b)])).unwrap();
        for (k, c) in fm.terms() {
            t.add_term(&k.blade_indices(), &[0], c.clone());
        }
    }
    t
}

/// `e^{14} + e^{23}` as an element of `sp(1) ⊂ gl(V)` on the first block.
fn e1423() -> Tensor {
    &f(1, &[1, 4]) + &f(1, &[2, 3])
}

pub fn cfs_theta_minus1() -> Tensor {
    &vec1(&f(1, &[4, 6]), 5) - &vec1(&f(1, &[4, 5]), 6)
}

/// The printed qc connection of the solvable example.
pub fn cfs_qc_connection() -> Tensor {
    let mut t = gl_form_shape(1, 1);
    t += &form_times_mat(&f(1, &[5]).scale(&q(1, 4)), &sp1(1, 0));
    t += &form_times_mat(&f(1, &[6]).scale(&q(1, 4)), &sp1(1, 1));
    let c3 = &f(1, &[4]).scale(&q(1, 2)) + &f(1, &[7]).scale(&q(1, 4));
    t -= &form_times_mat(&c3, &sp1(1, 2));
    let c4 = &f(1, &[4]).scale(&q(3, 2)) + &f(1, &[7]).scale(&q(1, 2));
    t -= &form_times_mat(&c4, &two_form_to_mat(&e1423()));
    for (a, c) in [q(-3, 4), q(1, 4), q(1, 4), q(-3, 4)].iter().enumerate() {
        t += &one_form_times_mat(1, a, &eh(1, a)).scale(c);
    }
    t
}

pub fn cfs_omega1() -> Tensor {
    let mut t = gl_form_shape(1, 2);
    for s in 0..3 {
        t.axpy(&q(1, 4), &form_times_mat(&omega(1, s), &sp1(1, s)));
    }
    t.axpy(&q(1, 2), &form_times_mat(&e1423(), &sp1(1, 2)));
    let f5 = &f(1, &[1, 4]).scale(&int(5)) + &f(1, &[2, 3]);
    t.axpy(&q(1, 2), &form_times_mat(&f5, &two_form_to_mat(&e1423())));
    t
}

pub fn cfs_omega3() -> Tensor {
    let mut t = gl_form_shape(1, 2);
    t.axpy(&q(1, 8), &form_times_mat(&f(1, &[6, 7]), &sp1(1, 0)));
    t.axpy(&q(-1, 8), &form_times_mat(&f(1, &[5, 7]), &sp1(1, 1)));
    t.axpy(&q(-3, 8), &form_times_mat(&f(1, &[5, 6]), &sp1(1, 2)));
    t.axpy(&q(-1, 2), &form_times_mat(&f(1, &[5, 6]), &two_form_to_mat(&e1423())));
    t.axpy(&q(1, 16), &eh_curvature_term(1));
    t.axpy(&q(1, 2), &form_times_mat(&f(1, &[4, 7]), &eh(1, 0)));
    t.axpy(&q(1, 2), &form_times_mat(&(&f(1, &[1, 5]) - &f(1, &[4, 6])), &eh(1, 1)));
    t.axpy(&q(1, 2), &form_times_mat(&(&f(1, &[1, 6]) + &f(1, &[4, 5])), &eh(1, 2)));
    t.axpy(&q(-1, 2), &form_times_mat(&f(1, &[1, 7]), &eh(1, 3)));
    t
}

/// `½(e¹e¹ + e⁴e⁴ − e²e² − e³e³) + ¼ id`.
pub fn cfs_chi_v() -> Vec<Vec<Scalar>> {
    let d = [q(3, 4), q(-1, 4), q(-1, 4), q(3, 4)];
    (0..4).map(|i| (0..4).map(|j| if i == j { d[i].clone() } else { int(0) }).collect()).collect()
}

/// `w ∧ (e^i ⊙ e^j)` with `⊙` unnormalized, read in `Λ^{1,1} ⊗ V`.
fn wedge_sym(w: usize, i: usize, j: usize) -> Tensor {
    &vec1(&f(1, &[w, i]), j) + &vec1(&f(1, &[w, j]), i)
}

/// `−½ e⁵∧(e¹⊙e² + σ e³⊙e⁴) − ½ e⁶∧(e¹⊙e³ − e⁴⊙e²)`; the printed form has `σ = −1`.
pub fn cfs_biquard_t11(sigma: i64) -> Tensor {
    let mut t = &wedge_sym(5, 1, 2) + &wedge_sym(5, 3, 4).scale(&int(sigma));
    t += &(&wedge_sym(6, 1, 3) - &wedge_sym(6, 4, 2));
    t.scale(&q(-1, 2))
}

/// `σ Σ_s w_s ⌟ w^{123} ⊗ w_s`; the printed form has `σ = 1`.
pub fn cfs_biquard_t02(sigma: i64) -> Tensor {
    let mut t = Tensor::new(1, 2, &[Slot::Vector]);
    for s in 0..3 {
        let fm = w123(1).interior(w_index(1, s));
        t += &vec1(&fm, w_index(1, s) + 1).scale(&int(sigma));
    }
    t
}
