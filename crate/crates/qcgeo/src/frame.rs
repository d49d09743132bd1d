//! The standard objects of the flat model: the triple `ω_s`, `Θ₀`, and the
//! distinguished elements of `gl(T)` built from them.

use crate::mat::Mat;
use crate::scalar::{int, Scalar};
use crate::tensor::{bits, t_dim, v_dim, w_index, wedge_sign, Key, Slot, Tensor};
use num::Zero;

/// `ω_s` (`s` in `0..3`) as a horizontal 2-form. On each block `b = 4j`:
/// `ω₁ = e^{b,b+1} − e^{b+2,b+3}`, `ω₂ = e^{b,b+2} + e^{b+1,b+3}`,
/// `ω₃ = e^{b,b+3} − e^{b+1,b+2}`.
pub fn omega(n: usize, s: usize) -> Tensor {
    let mut t = Tensor::form(n, 2);
    for j in 0..n {
        let b = 4 * j;
        let (p, q, sign) = match s {
            0 => ((b, b + 1), (b + 2, b + 3), -1),
            1 => ((b, b + 2), (b + 1, b + 3), 1),
            2 => ((b, b + 3), (b + 1, b + 2), -1),
            _ => panic!("s must be 0, 1 or 2"),
        };
        t.add_term(&[p.0, p.1], &[], int(1));
        t.add_term(&[q.0, q.1], &[], int(sign));
    }
    t
}

/// `ω_s(e_a, e_b)`.
pub fn omega_entry(n: usize, s: usize, a: usize, b: usize) -> Scalar {
    omega(n, s).coeff(&[a, b], &[])
}

/// A scalar 2-form as the skew endomorphism `v ↦ (v ⌟ f)^♯`:
/// `e^{ij} ↦ E_{ji} − E_{ij}`.
pub fn two_form_to_mat(f: &Tensor) -> Mat {
    assert!(f.degree() == 2 && f.slots().is_empty());
    let mut m = Mat::zero();
    for (k, c) in f.terms() {
        let ix: Vec<usize> = bits(k.blade).collect();
        let (i, j) = (ix[0], ix[1]);
        m.add_entry(j, i, c.clone());
        m.add_entry(i, j, -c.clone());
    }
    m
}

/// Inverse of [`two_form_to_mat`] on skew matrices.
pub fn skew_mat_to_two_form(n: usize, m: &Mat) -> Tensor {
    let mut f = Tensor::form(n, 2);
    for (&(r, c), v) in m.entries() {
        if c < r {
            f.add_term(&[c, r], &[], v.clone());
        }
    }
    f
}

/// `Θ₀ = Σ_s ω_s ⊗ w_s`.
pub fn theta0(n: usize) -> Tensor {
    let mut t = Tensor::new(n, 2, &[Slot::Vector]);
    for s in 0..3 {
        for (k, c) in omega(n, s).terms() {
            let ix: Vec<usize> = bits(k.blade).collect();
            t.add_term(&ix, &[w_index(n, s)], c.clone());
        }
    }
    t
}

/// `w^{123}`.
pub fn w123(n: usize) -> Tensor {
    Tensor::basis_form(n, &[w_index(n, 0), w_index(n, 1), w_index(n, 2)])
}

/// `e_a ⌟ ω_s` as a 1-form.
pub fn contract_omega(n: usize, a: usize, s: usize) -> Tensor {
    omega(n, s).interior(a)
}

/// `EH_a = Σ_s w^s ⊗ (e_a ⌟ ω_s)`: sends `w_s` to the vector dual to `e_a ⌟ ω_s`.
pub fn eh(n: usize, a: usize) -> Mat {
    let mut m = Mat::zero();
    for s in 0..3 {
        for b in 0..v_dim(n) {
            let c = omega_entry(n, s, a, b);
            if !c.is_zero() {
                m.add_entry(b, w_index(n, s), c);
            }
        }
    }
    m
}

/// The `sp(1)` generator attached to `ω_s`: the skew map of `ω_s` on `V`, and
/// on `W` the rotation `w_a ↦ −2 w_b`, `w_b ↦ 2 w_a` for `(a, b)` the cyclic
/// successors of `s`. These annihilate `Θ₀`.
pub fn sp1(n: usize, s: usize) -> Mat {
    let mut m = two_form_to_mat(&omega(n, s));
    let (a, b) = ((s + 1) % 3, (s + 2) % 3);
    m.add_entry(w_index(n, b), w_index(n, a), int(-2));
    m.add_entry(w_index(n, a), w_index(n, b), int(2));
    m
}

/// `R = −id_V − 2 id_W`, spanning the center of `k`.
pub fn scalar_r(n: usize) -> Mat {
    let mut m = Mat::identity_on(0..v_dim(n), int(-1));
    for s in 0..3 {
        m.add_entry(w_index(n, s), w_index(n, s), int(-2));
    }
    m
}

/// `id_V` and `id_W`.
pub fn id_v(n: usize) -> Mat {
    Mat::identity_on(0..v_dim(n), int(1))
}

pub fn id_w(n: usize) -> Mat {
    Mat::identity_on(v_dim(n)..t_dim(n), int(1))
}

/// `T*⊗gl(T)` shape: 1-forms with values `(Vector, Covector)`, entry `(i, j)`
/// meaning `E_{ij}`.
pub fn gl_form_shape(n: usize, degree: usize) -> Tensor {
    Tensor::new(n, degree, &[Slot::Vector, Slot::Covector])
}

/// `Λ^k T* ⊗ T` shape.
pub fn vector_form_shape(n: usize, degree: usize) -> Tensor {
    Tensor::new(n, degree, &[Slot::Vector])
}

/// `f ⊗ m` for a scalar form `f` and `m ∈ gl(T)`.
pub fn form_times_mat(f: &Tensor, m: &Mat) -> Tensor {
    let mut t = gl_form_shape(f.n(), f.degree());
    for (k, c) in f.terms() {
        for (&(i, j), v) in m.entries() {
            t.add_key(Key { blade: k.blade, vals: [i as u8, j as u8, 0, 0] }, c * v);
        }
    }
    t
}

/// `e^i ⊗ m`.
pub fn one_form_times_mat(n: usize, i: usize, m: &Mat) -> Tensor {
    form_times_mat(&Tensor::basis_form(n, &[i]), m)
}

/// Splits a `gl(T)`-valued form into `(blade, matrix)` pairs.
pub fn gl_form_parts(t: &Tensor) -> std::collections::BTreeMap<u64, Mat> {
    assert_eq!(t.slots(), &[Slot::Vector, Slot::Covector]);
    let mut out: std::collections::BTreeMap<u64, Mat> = Default::default();
    for (k, c) in t.terms() {
        out.entry(k.blade).or_default().add_entry(k.vals[0] as usize, k.vals[1] as usize, c.clone());
    }
    out
}

/// `e_i ⌟` extraction for a `gl`-valued 1-form: the matrix `A_i`.
pub fn coefficient_of(t: &Tensor, i: usize) -> Mat {
    assert_eq!(t.degree(), 1);
    gl_form_parts(t).remove(&(1u64 << i)).unwrap_or_default()
}

/// Vector `e_i` as a degree-0 tensor.
pub fn basis_vector(n: usize, i: usize) -> Tensor {
    Tensor::new(n, 0, &[Slot::Vector]).with_term(&[], &[i], int(1))
}

/// The tautological form `θ = Σ_{i<4n+3} e^i ⊗ e_i`.
pub fn tautological(n: usize) -> Tensor {
    let mut t = vector_form_shape(n, 1);
    for i in 0..t_dim(n) {
        t.add_term(&[i], &[i], int(1));
    }
    t
}

/// `a ∧ b` with the matrix value of `a` applied to the first (vector) slot of `b`.
pub fn compose(a: &Tensor, b: &Tensor) -> Tensor {
    assert_eq!(a.slots(), &[Slot::Vector, Slot::Covector]);
    assert_eq!(b.slots().first(), Some(&Slot::Vector));
    let mut r = Tensor::new(a.n(), a.degree() + b.degree(), b.slots());
    for (ka, va) in a.terms() {
        for (kb, vb) in b.terms() {
            if ka.vals[1] != kb.vals[0] {
                continue;
            }
            let Some(odd) = wedge_sign(ka.blade, kb.blade) else { continue };
            let mut vals = kb.vals;
            vals[0] = ka.vals[0];
            let c = va * vb;
            r.add_key(Key { blade: ka.blade | kb.blade, vals }, if odd { -c } else { c });
        }
    }
    r
}

/// Trace of a `gl(T)`-valued form.
pub fn trace_form(t: &Tensor) -> Tensor {
    assert_eq!(t.slots(), &[Slot::Vector, Slot::Covector]);
    let mut r = Tensor::form(t.n(), t.degree());
    for (k, c) in t.terms() {
        if k.vals[0] == k.vals[1] {
            r.add_key(Key { blade: k.blade, vals: [0; 4] }, c.clone());
        }
    }
    r
}

/// The alternation `∂ : Λ^k T*⊗gl(T) → Λ^{k+1} T*⊗T`, `e^K⊗E_ij ↦ e^K∧e^j⊗e_i`.
pub fn partial(t: &Tensor) -> Tensor {
    compose(t, &tautological(t.n()))
}

/// Keeps the terms whose first value index lies in `V` (`[x]_V`) or in `W` (`[x]_W`).
pub fn value_part(t: &Tensor, in_v: bool) -> Tensor {
    let vd = v_dim(t.n());
    t.filter(|k| ((k.vals[0] as usize) < vd) == in_v)
}

/// Transpose of [`two_form_to_mat`]: `J_s` with `ω_s(x, y) = ⟨x, J_s y⟩`.
pub fn complex_structure(n: usize, s: usize) -> Mat {
    two_form_to_mat(&omega(n, s)).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skew_of(n: usize, s: usize) -> Mat {
        two_form_to_mat(&omega(n, s))
    }

    #[test]
    fn quaternion_relations_hold_for_every_block() {
        for n in 1..=2 {
            let (j1, j2, j3) = (skew_of(n, 0), skew_of(n, 1), skew_of(n, 2));
            let minus_id = Mat::identity_on(0..v_dim(n), int(-1));
            assert_eq!(j1.mul(&j1), minus_id);
            assert_eq!(j2.mul(&j2), minus_id);
            // the matrices of ω_s multiply like i, j, k up to orientation
            assert_eq!(j1.mul(&j2), j3.scale(&int(-1)));
        }
    }

    #[test]
    fn sp1_annihilates_theta0_and_closes() {
        for n in 1..=2 {
            let t0 = theta0(n);
            for s in 0..3 {
                assert!(t0.act(&sp1(n, s)).is_zero(), "sp1 generator {s} moves Θ₀");
            }
            // [ξ1, ξ2] = -2 ξ3
            assert_eq!(sp1(n, 0).bracket(&sp1(n, 1)), sp1(n, 2).scale(&int(-2)));
        }
    }

    #[test]
    fn scalar_r_rescales_theta0() {
        let t0 = theta0(1);
        // R acts on Λ²V*⊗W by +2 + (-2) = 0: it preserves Θ₀
        assert!(t0.act(&scalar_r(1)).is_zero());
    }

    #[test]
    fn eh_matches_contraction() {
        let n = 1;
        // EH_1 sends w_1 to e_2 since e_1 ⌟ ω_1 = e^2
        assert_eq!(eh(n, 0).get(1, 4), int(1));
        assert_eq!(contract_omega(n, 0, 0), Tensor::basis_form(n, &[1]));
    }

    #[test]
    fn complex_structures_are_quaternionic() {
        let n = 2;
        let (j1, j2, j3) = (complex_structure(n, 0), complex_structure(n, 1), complex_structure(n, 2));
        assert_eq!(j1.mul(&j2), j3);
        assert_eq!(j2.mul(&j3), j1);
        assert_eq!(j3.mul(&j1), j2);
    }

    #[test]
    fn partial_of_basis_element() {
        // ∂(e^1 ⊗ E_{2,3}) = e^{13} ⊗ e_2 (0-based)
        let x = one_form_times_mat(1, 1, &Mat::unit(2, 3));
        assert_eq!(partial(&x), vector_form_shape(1, 2).with_term(&[1, 3], &[2], int(1)));
        assert_eq!(trace_form(&one_form_times_mat(1, 0, &id_v(1))), Tensor::basis_form(1, &[0]).scale(&int(4)));
    }

    #[test]
    fn skew_roundtrip() {
        let f = omega(2, 2);
        assert_eq!(skew_mat_to_two_form(2, &two_form_to_mat(&f)), f);
    }
}
