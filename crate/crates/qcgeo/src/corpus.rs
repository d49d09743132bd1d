//! The bundled example models, generated from their defining data.
//!
//! Heisenberg and the solvable group are given by structure equations. The
//! quaternionic sphere `Sp(n+1)Sp(1)/Sp(n)Sp(1)` and its noncompact dual
//! `Sp(n,1)Sp(1)/Sp(n)Sp(1)` are built from quaternionic matrices: the
//! brackets of an explicit basis of `m ⊕ h` are expanded back into the basis,
//! giving the structure constants of the whole group. The `h` block becomes the
//! isotropy block of the [`CoframeModel`].

use crate::frame::omega;
use crate::linalg::{Echelon, SparseVec};
use crate::model::CoframeModel;
use crate::scalar::int;
use crate::tensor::{t_dim, w_index, Tensor};
use std::collections::BTreeMap;

/// Standard structure on the quaternionic Heisenberg group: `de^a = 0`, `de^{4n+s} = ω_s`.
pub fn heisenberg(n: usize) -> CoframeModel {
    let mut d = vec![Tensor::form(n, 2); t_dim(n)];
    for s in 0..3 {
        d[w_index(n, s)] = omega(n, s);
    }
    CoframeModel::new(format!("heisenberg_n{n}"), n, 0, d)
}

/// `(c, j, k)`: the term `c e^{jk}`.
type Term = (i64, usize, usize);

/// The seven-dimensional solvable group with an integrable non-Einstein qc structure.
pub fn cfs_solvable() -> CoframeModel {
    // (i, [(c, j, k)]) with 1-based indices as in the structure equations
    let rows: [(usize, &[Term]); 6] = [
        (2, &[(1, 1, 5), (1, 3, 4), (-1, 4, 6)]),
        (3, &[(-1, 2, 4), (1, 1, 6), (1, 4, 5)]),
        (4, &[(-2, 1, 4)]),
        (5, &[(1, 1, 2), (-1, 3, 4), (1, 4, 6)]),
        (6, &[(1, 1, 3), (-1, 4, 2), (-1, 4, 5)]),
        (7, &[(1, 1, 4), (-1, 2, 3), (1, 5, 6)]),
    ];
    let n = 1;
    let mut d = vec![Tensor::form(n, 2); t_dim(n)];
    for (i, terms) in rows {
        for &(c, j, k) in terms {
            d[i - 1].add_term(&[j - 1, k - 1], &[], int(c));
        }
    }
    CoframeModel::new("cfs_solvable", n, 0, d)
}

/// Quaternions with integer coordinates `(1, i, j, k)`.
type Quat = [i64; 4];

const QZERO: Quat = [0, 0, 0, 0];
const QONE: Quat = [1, 0, 0, 0];
const IMAG: [Quat; 3] = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn qmul(p: Quat, q: Quat) -> Quat {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

fn qadd(p: Quat, q: Quat, c: i64) -> Quat {
    [p[0] + c * q[0], p[1] + c * q[1], p[2] + c * q[2], p[3] + c * q[3]]
}

/// An element of `gl(n+1, H) ⊕ Im H`.
#[derive(Clone, Default)]
struct QElem {
    mat: BTreeMap<(usize, usize), Quat>,
    q: Quat,
}

impl QElem {
    fn unit(i: usize, j: usize, q: Quat) -> Self {
        let mut e = QElem::default();
        e.mat.insert((i, j), q);
        e
    }

    fn plus(mut self, o: &QElem, c: i64) -> Self {
        for (k, v) in &o.mat {
            let e = self.mat.entry(*k).or_insert(QZERO);
            *e = qadd(*e, *v, c);
        }
        self.q = qadd(self.q, o.q, c);
        self
    }

    fn with_q(mut self, q: Quat) -> Self {
        self.q = q;
        self
    }

    fn bracket(&self, o: &QElem) -> QElem {
        let mut r = QElem::default();
        let mut acc = |a: &BTreeMap<(usize, usize), Quat>, b: &BTreeMap<(usize, usize), Quat>, c: i64| {
            for (&(i, j), x) in a {
                for (&(k, l), y) in b {
                    if j == k {
                        let e = r.mat.entry((i, l)).or_insert(QZERO);
                        *e = qadd(*e, qmul(*x, *y), c);
                    }
                }
            }
        };
        acc(&self.mat, &o.mat, 1);
        acc(&o.mat, &self.mat, -1);
        r.q = qadd(qmul(self.q, o.q), qmul(o.q, self.q), -1);
        r
    }

    fn flatten(&self, size: usize) -> SparseVec<usize> {
        let mut v = SparseVec::new();
        for (&(i, j), x) in &self.mat {
            for (c, &xc) in x.iter().enumerate() {
                if xc != 0 {
                    v.insert(4 * (i * size + j) + c, int(xc));
                }
            }
        }
        for (c, &xc) in self.q.iter().enumerate() {
            if xc != 0 {
                v.insert(4 * size * size + c, int(xc));
            }
        }
        v
    }
}

/// Basis of `m` then `h` for the sphere (`sign = 1`) or hyperbolic (`sign = -1`) model.
fn symmetric_basis(n: usize, sign: i64) -> (Vec<QElem>, Vec<QElem>) {
    let last = n;
    let mut m = Vec::new();
    for l in 0..n {
        m.push(QElem::unit(l, last, QONE).plus(&QElem::unit(last, l, QONE), -sign));
        for q in IMAG {
            m.push(QElem::unit(l, last, q).plus(&QElem::unit(last, l, q), sign));
        }
    }
    for q in IMAG {
        let neg = qadd(QZERO, q, -1);
        m.push(if sign == 1 {
            QElem::unit(last, last, q).with_q(neg)
        } else {
            QElem::unit(last, last, neg).with_q(q)
        });
    }
    let mut h = Vec::new();
    for l in 0..n {
        for q in IMAG {
            h.push(QElem::unit(l, l, q));
        }
        for l2 in l + 1..n {
            h.push(QElem::unit(l, l2, QONE).plus(&QElem::unit(l2, l, QONE), -1));
            for q in IMAG {
                h.push(QElem::unit(l, l2, q).plus(&QElem::unit(l2, l, q), 1));
            }
        }
    }
    for q in IMAG {
        h.push(QElem::unit(last, last, q).with_q(q));
    }
    (m, h)
}

fn symmetric_model(name: String, n: usize, sign: i64) -> CoframeModel {
    let (m, h) = symmetric_basis(n, sign);
    let basis: Vec<QElem> = m.iter().chain(&h).cloned().collect();
    let size = n + 1;
    let dim = basis.len();
    let mut ech = Echelon::new(true);
    for b in &basis {
        ech.push(&b.flatten(size));
    }
    assert_eq!(ech.rank(), dim, "basis of m + h is dependent");
    let mut d = vec![Tensor::form(n, 2); dim];
    for a in 0..dim {
        for b in a + 1..dim {
            let br = basis[a].bracket(&basis[b]).flatten(size);
            let coords = ech.express(&br).expect("m + h is closed under brackets");
            for (k, c) in coords {
                // de^k(X_a, X_b) = -e^k([X_a, X_b])
                d[k].add_term(&[a, b], &[], -c);
            }
        }
    }
    CoframeModel::new(name, n, h.len(), d)
}

/// `Sp(n+1)Sp(1)/Sp(n)Sp(1)` at the origin, with its isotropy block.
pub fn sphere(n: usize) -> CoframeModel {
    symmetric_model(format!("sphere_n{n}"), n, 1)
}

/// `Sp(n,1)Sp(1)/Sp(n)Sp(1)` at the origin, with its isotropy block.
pub fn hyperbolic(n: usize) -> CoframeModel {
    symmetric_model(format!("hyperbolic_n{n}"), n, -1)
}

/// The bundled corpus, keyed by file stem.
pub fn bundled() -> Vec<CoframeModel> {
    vec![heisenberg(1), heisenberg(2), sphere(1), sphere(2), hyperbolic(1), cfs_solvable()]
}

/// Looks up a bundled model by stem (`"sphere_n1"`) or file name (`"sphere_n1.json"`).
pub fn by_name(name: &str) -> Option<CoframeModel> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    let parse_n = |p: &str| stem.strip_prefix(p).and_then(|r| r.parse::<usize>().ok()).filter(|&n| (1..=3).contains(&n));
    if stem == "cfs_solvable" {
        return Some(cfs_solvable());
    }
    if let Some(n) = parse_n("heisenberg_n") {
        return Some(heisenberg(n));
    }
    if let Some(n) = parse_n("sphere_n") {
        return Some(sphere(n));
    }
    if let Some(n) = parse_n("hyperbolic_n") {
        return Some(hyperbolic(n));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_models_are_lie_algebras() {
        for m in bundled() {
            assert!(m.validate_jacobi().is_ok(), "{} fails Jacobi", m.name());
        }
    }

    #[test]
    fn sphere_horizontal_differentials() {
        let m = sphere(1);
        assert_eq!(m.isotropy(), 6);
        // de^1 restricted to m: e^{25} + e^{36} + e^{47} (1-based)
        let h = m.de(0).horizontal();
        let mut want = Tensor::form(1, 2);
        for (a, b) in [(1, 4), (2, 5), (3, 6)] {
            want.add_term(&[a, b], &[], int(1));
        }
        assert_eq!(h, want);
        for s in 0..3 {
            assert_eq!(m.de(w_index(1, s)).horizontal(), omega(1, s));
        }
    }

    #[test]
    fn hyperbolic_flips_the_horizontal_rows() {
        let (s, h) = (sphere(1), hyperbolic(1));
        for a in 0..4 {
            assert_eq!(s.de(a).horizontal(), -h.de(a).horizontal());
        }
        for i in 4..7 {
            assert_eq!(s.de(i).horizontal(), h.de(i).horizontal());
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(by_name("sphere_n2.json").unwrap().n(), 2);
        assert!(by_name("torus").is_none());
    }
}
