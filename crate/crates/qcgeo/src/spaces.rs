//! The structure algebras `q ⊃ b ⊃ k ⊃ g ⊃ sp(n)⊕sp(1)` inside `gl(T)`, the
//! alternation maps on them and the fixed subspaces of `Λ²T*⊗T` and
//! `Λ²T*⊗k` used to split torsion and curvature.
//!
//! Everything here depends only on `n`; [`ModelSpaces::get`] caches one
//! instance per `n` for the whole process.

use crate::frame::{
    eh, form_times_mat, gl_form_shape, omega, one_form_times_mat, partial, scalar_r, sp1, tautological, theta0,
    vector_form_shape,
};
use crate::linalg::{solve_sparse, Decomposition, LinearMap, SparseVec, SubspaceBasis};
use crate::mat::Mat;
use crate::scalar::{int, Scalar};
use crate::tensor::{bits, t_dim, v_dim, w_index, Key, Tensor};
use num::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpacesError {
    #[error("unknown algebra name {0:?}")]
    UnknownAlgebra(String),
    #[error("{name} is not closed under brackets: [{i}, {j}] leaves the span")]
    NotClosed { name: AlgebraName, i: usize, j: usize },
}

/// The named subalgebras of `gl(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraName {
    /// `gl(V) ⊕ gl(W) ⊕ Hom(W, V)`.
    Q,
    B,
    K,
    G,
    SpN,
    Sp1,
    ScalarR,
    EH,
    HomWV,
    SpnSp1,
    SpnSp1SoW,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 11] = [
        AlgebraName::Q,
        AlgebraName::B,
        AlgebraName::K,
        AlgebraName::G,
        AlgebraName::SpN,
        AlgebraName::Sp1,
        AlgebraName::ScalarR,
        AlgebraName::EH,
        AlgebraName::HomWV,
        AlgebraName::SpnSp1,
        AlgebraName::SpnSp1SoW,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::Q => "gl_V_gl_W_hom",
            AlgebraName::B => "b",
            AlgebraName::K => "k",
            AlgebraName::G => "g",
            AlgebraName::SpN => "sp_n",
            AlgebraName::Sp1 => "sp_1",
            AlgebraName::ScalarR => "scalar_R",
            AlgebraName::EH => "EH",
            AlgebraName::HomWV => "hom_WV",
            AlgebraName::SpnSp1 => "spn_sp1",
            AlgebraName::SpnSp1SoW => "spn_sp1_soW",
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraName {
    type Err = SpacesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgebraName::ALL
            .into_iter()
            .find(|a| a.as_str() == s || (s == "q" && *a == AlgebraName::Q))
            .ok_or_else(|| SpacesError::UnknownAlgebra(s.to_string()))
    }
}

/// A matrix as a degree-0 tensor in `T⊗T*`.
pub fn mat_tensor(n: usize, m: &Mat) -> Tensor {
    let mut t = gl_form_shape(n, 0);
    for (&(i, j), c) in m.entries() {
        t.add_term(&[], &[i, j], c.clone());
    }
    t
}

/// Inverse of [`mat_tensor`].
pub fn tensor_mat(t: &Tensor) -> Mat {
    assert_eq!(t.degree(), 0);
    Mat::from_entries(t.terms().iter().map(|(k, c)| ((k.vals[0] as usize, k.vals[1] as usize), c.clone())))
}

/// A linear subspace of `gl(T)` with an explicit basis.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    name: AlgebraName,
    n: usize,
    mats: Vec<Mat>,
    span: SubspaceBasis,
}

impl AlgebraBasis {
    /// Builds the named algebra and verifies that it is closed under brackets.
    pub fn new(name: AlgebraName, n: usize) -> Result<Self, SpacesError> {
        let a = Self::from_mats(name, n, generators(name, n));
        a.check_closed()?;
        Ok(a)
    }

    /// Span of the given matrices; dependent ones are dropped.
    pub fn from_mats(name: AlgebraName, n: usize, mats: Vec<Mat>) -> Self {
        let shape = gl_form_shape(n, 0);
        let mut span = SubspaceBasis::span(&shape, []);
        let mut kept = Vec::new();
        for m in mats {
            if span.insert(mat_tensor(n, &m)) {
                kept.push(m);
            }
        }
        AlgebraBasis { name, n, mats: kept, span }
    }

    pub fn name(&self) -> AlgebraName {
        self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.mats
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.span.contains(&mat_tensor(self.n, m))
    }

    /// Coordinates of `m` in [`matrices`](Self::matrices).
    pub fn coordinates(&self, m: &Mat) -> Option<Vec<Scalar>> {
        self.span.coordinates(&mat_tensor(self.n, m))
    }

    pub fn check_closed(&self) -> Result<(), SpacesError> {
        for i in 0..self.mats.len() {
            for j in i + 1..self.mats.len() {
                if !self.contains(&self.mats[i].bracket(&self.mats[j])) {
                    return Err(SpacesError::NotClosed { name: self.name, i, j });
                }
            }
        }
        Ok(())
    }

    /// Whether every basis element of `self` lies in `o`.
    pub fn is_subalgebra_of(&self, o: &AlgebraBasis) -> bool {
        self.mats.iter().all(|m| o.contains(m))
    }

    /// Basis of `T*⊗alg` restricted to the 1-forms `e^k`, `k` in `rows`.
    pub fn one_forms(&self, rows: impl IntoIterator<Item = usize>) -> Vec<Tensor> {
        rows.into_iter().flat_map(|k| self.mats.iter().map(move |m| one_form_times_mat(self.n, k, m))).collect()
    }
}

fn sp_n_basis(n: usize) -> Vec<Mat> {
    // skew A on V with [A, J_s] = 0
    let vd = v_dim(n);
    let js: Vec<Mat> = (0..3).map(|s| crate::frame::complex_structure(n, s)).collect();
    let so: Vec<Mat> = (0..vd)
        .flat_map(|i| (i + 1..vd).map(move |j| (i, j)))
        .map(|(i, j)| Mat::unit(i, j).sub(&Mat::unit(j, i)))
        .collect();
    let images: Vec<SparseVec<(usize, usize, usize)>> = so
        .iter()
        .map(|a| {
            let mut v = SparseVec::new();
            for (s, j) in js.iter().enumerate() {
                for (&(r, c), x) in a.bracket(j).entries() {
                    v.insert((s, r, c), x.clone());
                }
            }
            v
        })
        .collect();
    let sol = solve_sparse(&images, &SparseVec::new()).expect("homogeneous");
    sol.kernel
        .iter()
        .map(|k| {
            let mut m = Mat::zero();
            for (g, c) in k {
                m.axpy(c, &so[*g]);
            }
            m
        })
        .collect()
}

fn hom_wv(n: usize) -> Vec<Mat> {
    (0..3).flat_map(|s| (0..v_dim(n)).map(move |b| Mat::unit(b, w_index(n, s)))).collect()
}

fn so_w(n: usize) -> Vec<Mat> {
    (0..3)
        .map(|s| {
            let (a, b) = (w_index(n, (s + 1) % 3), w_index(n, (s + 2) % 3));
            Mat::unit(a, b).sub(&Mat::unit(b, a))
        })
        .collect()
}

fn gl_block(range: std::ops::Range<usize>) -> Vec<Mat> {
    range.clone().flat_map(|i| range.clone().map(move |j| Mat::unit(i, j))).collect()
}

fn sp1_basis(n: usize) -> Vec<Mat> {
    (0..3).map(|s| sp1(n, s)).collect()
}

fn eh_basis(n: usize) -> Vec<Mat> {
    (0..v_dim(n)).map(|a| eh(n, a)).collect()
}

fn generators(name: AlgebraName, n: usize) -> Vec<Mat> {
    use AlgebraName::*;
    let vd = v_dim(n);
    let parts: Vec<Vec<Mat>> = match name {
        Q => vec![gl_block(0..vd), gl_block(vd..vd + 3), hom_wv(n)],
        B => vec![sp_n_basis(n), sp1_basis(n), vec![scalar_r(n)], hom_wv(n)],
        K => vec![sp_n_basis(n), sp1_basis(n), vec![scalar_r(n)], eh_basis(n)],
        G => vec![sp_n_basis(n), sp1_basis(n), eh_basis(n)],
        SpN => vec![sp_n_basis(n)],
        Sp1 => vec![sp1_basis(n)],
        ScalarR => vec![vec![scalar_r(n)]],
        EH => vec![eh_basis(n)],
        HomWV => vec![hom_wv(n)],
        SpnSp1 => vec![sp_n_basis(n), sp1_basis(n)],
        SpnSp1SoW => vec![sp_n_basis(n), sp1_basis(n), so_w(n)],
    };
    parts.concat()
}

/// Kernel of `x ↦ (tr(x s))_s` on `span(ambient)`: the trace-form complement of `sub`.
pub fn trace_complement(ambient: &[Mat], sub: &[Mat]) -> Vec<Mat> {
    let images: Vec<SparseVec<usize>> = ambient
        .iter()
        .map(|a| sub.iter().enumerate().map(|(i, s)| (i, a.trace_pairing(s))).filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    let sol = solve_sparse(&images, &SparseVec::new()).expect("homogeneous");
    sol.kernel
        .iter()
        .map(|k| {
            let mut m = Mat::zero();
            for (g, c) in k {
                m.axpy(c, &ambient[*g]);
            }
            m
        })
        .collect()
}

/// `∂` restricted to `e^k ⊗ alg` for horizontal `k`.
pub fn partial_map(alg: &AlgebraBasis) -> LinearMap {
    let n = alg.n();
    LinearMap::new(alg.one_forms(0..t_dim(n)), &vector_form_shape(n, 2), partial)
}

/// `span{ξ·Θ₀ : ξ ∈ EH}`.
pub fn etilde_subspace(n: usize) -> SubspaceBasis {
    let t0 = theta0(n);
    SubspaceBasis::span(&vector_form_shape(n, 2), eh_basis(n).iter().map(|x| t0.act(x)))
}

/// Sign-free sp(1) Casimir `Σ ξ_s∘ξ_s`, equal to `−k(k+2)` on `S^k H`.
pub fn casimir_h(n: usize, x: &Tensor) -> Tensor {
    let mut r = x.empty_like();
    for s in 0..3 {
        let m = sp1(n, s);
        r += &x.act(&m).act(&m);
    }
    r
}

/// `−⟨λ, λ+2ρ⟩` for a weight `Σ l_i L_i` of `Sp(n)`: the eigenvalue of [`SpnCasimir`].
pub fn casimir_e_eigenvalue(n: usize, weights: &[usize]) -> Scalar {
    let v: i64 = weights
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let l = l as i64;
            l * (l + 2 * (n as i64 - i as i64))
        })
        .sum();
    int(-v)
}

/// `−k(k+2)`.
pub fn casimir_h_eigenvalue(k: usize) -> Scalar {
    int(-((k * (k + 2)) as i64))
}

/// The `sp(n)` Casimir from a trace-dual pair of bases, scaled to `−(2n+1)` on `E`.
#[derive(Debug, Clone)]
pub struct SpnCasimir {
    n: usize,
    pairs: Vec<(Mat, Mat)>,
}

impl SpnCasimir {
    pub fn new(spn: &AlgebraBasis) -> Self {
        let n = spn.n();
        let xs = spn.matrices();
        let d = xs.len();
        let gram: Vec<Vec<Scalar>> = xs.iter().map(|a| xs.iter().map(|b| a.trace_pairing(b)).collect()).collect();
        let inv = crate::linalg::dense::inverse(&gram).expect("trace form is nondegenerate on sp(n)");
        let duals: Vec<Mat> = (0..d)
            .map(|i| {
                let mut m = Mat::zero();
                for (j, x) in xs.iter().enumerate() {
                    m.axpy(&inv[j][i], x);
                }
                m
            })
            .collect();
        let mut on_v = Mat::zero();
        for (x, y) in xs.iter().zip(&duals) {
            on_v = on_v.add(&x.mul(y));
        }
        let c = on_v.get(0, 0);
        let scale = int(-(2 * n as i64 + 1)) / c;
        let pairs = xs.iter().zip(duals).map(|(x, y)| (x.clone(), y.scale(&scale))).collect();
        SpnCasimir { n, pairs }
    }

    pub fn apply(&self, x: &Tensor) -> Tensor {
        assert_eq!(x.n(), self.n);
        let mut r = x.empty_like();
        for (a, b) in &self.pairs {
            r += &x.act(b).act(a);
        }
        r
    }
}

/// An irreducible `Sp(n)Sp(1)` isotype `V_λ ⊗ S^k H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isotype {
    pub e: Vec<usize>,
    pub h: usize,
}

impl Isotype {
    pub fn new(e: &[usize], h: usize) -> Self {
        Isotype { e: e.to_vec(), h }
    }

    pub fn is_trivial(&self) -> bool {
        self.e.is_empty() && self.h == 0
    }

    /// Present for rank `n` (the `E` weight needs at most `n` rows).
    pub fn exists(&self, n: usize) -> bool {
        self.e.len() <= n
    }
}

impl fmt::Display for Isotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.e.as_slice() {
            [] => String::new(),
            [1] => "E".into(),
            [k] => format!("S{k}E"),
            [1, 1] => "L2E".into(),
            w => format!("V{}", w.iter().map(|x| x.to_string()).collect::<String>()),
        };
        let h = match self.h {
            0 => String::new(),
            1 => "H".into(),
            k => format!("S{k}H"),
        };
        if e.is_empty() && h.is_empty() {
            f.write_str("R")
        } else {
            write!(f, "{e}{h}")
        }
    }
}

/// Projects `x` onto the isotype `target`, assuming `x` lies in a sum of the
/// (multiplicity-free) `candidates`.
pub fn isotypic_component(cas: &SpnCasimir, x: &Tensor, target: &Isotype, candidates: &[Isotype]) -> Tensor {
    let n = cas.n;
    let te = casimir_e_eigenvalue(n, &target.e);
    let th = casimir_h_eigenvalue(target.h);
    let mut es: Vec<Scalar> = candidates.iter().map(|c| casimir_e_eigenvalue(n, &c.e)).collect();
    let mut hs: Vec<Scalar> = candidates.iter().map(|c| casimir_h_eigenvalue(c.h)).collect();
    es.sort();
    es.dedup();
    hs.sort();
    hs.dedup();
    let mut y = x.clone();
    for e in es.iter().filter(|e| **e != te) {
        let mut z = cas.apply(&y);
        z.axpy(&-e.clone(), &y);
        y = z.scale(&(Scalar::one() / (&te - e)));
    }
    for h in hs.iter().filter(|h| **h != th) {
        let mut z = casimir_h(n, &y);
        z.axpy(&-h.clone(), &y);
        y = z.scale(&(Scalar::one() / (&th - h)));
    }
    y
}

/// Degree `g` of an element of `Λ²T*⊗k`: number of `W*` form indices, plus one
/// for values in `EH`.
fn grade_parts(n: usize, g: usize, k0: &[Mat], ehs: &[Mat]) -> Vec<Tensor> {
    let big_n = t_dim(n);
    let vd = v_dim(n);
    let blades: Vec<(usize, usize)> = (0..big_n).flat_map(|i| (i + 1..big_n).map(move |j| (i, j))).collect();
    let q_of = |&(i, j): &(usize, usize)| (i >= vd) as usize + (j >= vd) as usize;
    let mut out = Vec::new();
    for b in &blades {
        let q = q_of(b);
        let f = Tensor::basis_form(n, &[b.0, b.1]);
        if q == g {
            out.extend(k0.iter().map(|m| form_times_mat(&f, m)));
        }
        if q + 1 == g {
            out.extend(ehs.iter().map(|m| form_times_mat(&f, m)));
        }
    }
    out
}

/// The curvature modules `R₁..R₄` (stored 0-based as grades 0..3).
#[derive(Debug, Clone)]
pub struct CurvatureModules {
    /// `D_g`: all of `Λ²T*⊗k` in grade `g`.
    pub domains: Vec<SubspaceBasis>,
    /// `R_g = {x ∈ D_g : δx ∈ S_g}`.
    pub modules: Vec<SubspaceBasis>,
    /// `S_0 = V*∧ẼH`, `S_1 = W*∧ẼH`, `S_2 = S_3 = 0`.
    pub targets: Vec<SubspaceBasis>,
    /// `dim(δ D_g + S_g)`.
    pub joint_ranks: Vec<usize>,
}

/// `δ(x) = x ∧ θ`, the skew-symmetrization `Λ²T*⊗gl(T) → Λ³T*⊗T`.
pub fn delta(x: &Tensor) -> Tensor {
    crate::frame::compose(x, &tautological(x.n()))
}

fn build_curvature_modules(n: usize, k0: &[Mat], ehs: &[Mat]) -> CurvatureModules {
    let vd = v_dim(n);
    let big_n = t_dim(n);
    let et = etilde_subspace(n);
    let shape3 = vector_form_shape(n, 3);
    let wedge_with = |range: std::ops::Range<usize>| -> SubspaceBasis {
        let gens = range.flat_map(|a| {
            let f = Tensor::basis_form(n, &[a]);
            et.basis().iter().map(move |x| f.wedge(x).expect("slots fit")).collect::<Vec<_>>()
        });
        SubspaceBasis::span(&shape3, gens)
    };
    let targets = vec![
        wedge_with(0..vd),
        wedge_with(vd..big_n),
        SubspaceBasis::span(&shape3, []),
        SubspaceBasis::span(&shape3, []),
    ];
    let shape2 = gl_form_shape(n, 2);
    let mut domains = Vec::new();
    let mut modules = Vec::new();
    let mut joint_ranks = Vec::new();
    for (g, target) in targets.iter().enumerate() {
        let dom = grade_parts(n, g, k0, ehs);
        let mut images: Vec<SparseVec<Key>> = dom.iter().map(|x| delta(x).into_terms()).collect();
        let nd = images.len();
        images.extend(target.basis().iter().map(|s| s.scale(&-Scalar::one()).into_terms()));
        joint_ranks.push(crate::linalg::rank_of(images.iter()));
        let sol = solve_sparse(&images, &SparseVec::new()).expect("homogeneous");
        let gens = sol.kernel.iter().map(|k| {
            let mut t = shape2.clone();
            for (i, c) in k.range(..nd) {
                t.axpy(c, &dom[*i]);
            }
            t
        });
        modules.push(SubspaceBasis::span(&shape2, gens));
        domains.push(SubspaceBasis::span(&shape2, dom));
    }
    CurvatureModules { domains, modules, targets, joint_ranks }
}

/// Grade of each term of a `k`-valued 2-form, as used by [`CurvatureModules`].
pub fn split_by_grade(n: usize, x: &Tensor) -> Vec<Tensor> {
    let vd = v_dim(n);
    let mut out = vec![x.empty_like(); 4];
    for (k, c) in x.terms() {
        let q = bits(k.blade).filter(|&i| i >= vd).count();
        let hom = (k.vals[0] as usize) < vd && (k.vals[1] as usize) >= vd;
        out[q + hom as usize].add_key(*k, c.clone());
    }
    out
}

/// The fixed linear data attached to `n`.
#[derive(Debug)]
pub struct ModelSpaces {
    pub n: usize,
    pub q: AlgebraBasis,
    pub b: AlgebraBasis,
    pub k: AlgebraBasis,
    pub g: AlgebraBasis,
    pub sp_n: AlgebraBasis,
    pub sp_1: AlgebraBasis,
    pub spn_sp1: AlgebraBasis,
    pub spn_sp1_so_w: AlgebraBasis,
    pub eh: AlgebraBasis,
    partial_k: OnceLock<LinearMap>,
    partial_g: OnceLock<LinearMap>,
    torsion_split: OnceLock<TorsionSpaces>,
    curvature: OnceLock<CurvatureModules>,
    casimir: OnceLock<SpnCasimir>,
}

/// The four summands of `Λ²T*⊗T`: `im ∂_B`, `Λ²V*⊗W`, `∂(V*⊗sp(n)^⊥)`, `∂(V*⊗S²₀W)`.
#[derive(Debug, Clone)]
pub struct TorsionSpaces {
    pub decomposition: Decomposition,
    pub im_partial_b: SubspaceBasis,
    pub lambda2v_w: SubspaceBasis,
    pub w1_image: SubspaceBasis,
    pub w2_image: SubspaceBasis,
    pub ker_partial_b: usize,
}

impl ModelSpaces {
    /// The shared instance for `n`.
    pub fn get(n: usize) -> Arc<ModelSpaces> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ModelSpaces>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&n) {
            return s.clone();
        }
        let built = Arc::new(ModelSpaces::build(n));
        cache.lock().unwrap().entry(n).or_insert(built).clone()
    }

    fn build(n: usize) -> Self {
        let alg = |name| AlgebraBasis::new(name, n).unwrap_or_else(|e| panic!("{e}"));
        ModelSpaces {
            n,
            q: alg(AlgebraName::Q),
            b: alg(AlgebraName::B),
            k: alg(AlgebraName::K),
            g: alg(AlgebraName::G),
            sp_n: alg(AlgebraName::SpN),
            sp_1: alg(AlgebraName::Sp1),
            spn_sp1: alg(AlgebraName::SpnSp1),
            spn_sp1_so_w: alg(AlgebraName::SpnSp1SoW),
            eh: alg(AlgebraName::EH),
            partial_k: OnceLock::new(),
            partial_g: OnceLock::new(),
            torsion_split: OnceLock::new(),
            curvature: OnceLock::new(),
            casimir: OnceLock::new(),
        }
    }

    pub fn algebra(&self, name: AlgebraName) -> AlgebraBasis {
        match name {
            AlgebraName::Q => self.q.clone(),
            AlgebraName::B => self.b.clone(),
            AlgebraName::K => self.k.clone(),
            AlgebraName::G => self.g.clone(),
            AlgebraName::SpN => self.sp_n.clone(),
            AlgebraName::Sp1 => self.sp_1.clone(),
            AlgebraName::SpnSp1 => self.spn_sp1.clone(),
            AlgebraName::SpnSp1SoW => self.spn_sp1_so_w.clone(),
            AlgebraName::EH => self.eh.clone(),
            other => AlgebraBasis::new(other, self.n).expect("named algebras are closed"),
        }
    }

    pub fn partial_k(&self) -> &LinearMap {
        self.partial_k.get_or_init(|| partial_map(&self.k))
    }

    pub fn partial_g(&self) -> &LinearMap {
        self.partial_g.get_or_init(|| partial_map(&self.g))
    }

    pub fn casimir_e(&self) -> &SpnCasimir {
        self.casimir.get_or_init(|| SpnCasimir::new(&self.sp_n))
    }

    pub fn torsion_spaces(&self) -> &TorsionSpaces {
        self.torsion_split.get_or_init(|| {
            let n = self.n;
            let vd = v_dim(n);
            let shape = vector_form_shape(n, 2);
            let pb = partial_map(&self.b);
            let im_b = pb.image();
            let ker_partial_b = pb.domain.len() - im_b.dim();
            let l2_gens: Vec<Tensor> = (0..vd)
                .flat_map(|a| (a + 1..vd).flat_map(move |b| (0..3).map(move |s| (a, b, s))))
                .map(|(a, b, s)| shape.clone().with_term(&[a, b], &[w_index(n, s)], int(1)))
                .collect();
            let lambda2v_w = SubspaceBasis::span(&shape, l2_gens);
            let so_v: Vec<Mat> = (0..vd)
                .flat_map(|i| (i + 1..vd).map(move |j| Mat::unit(i, j).sub(&Mat::unit(j, i))))
                .collect();
            let perp = trace_complement(&so_v, self.sp_n.matrices());
            let w1_image = SubspaceBasis::span(
                &shape,
                (0..vd).flat_map(|a| perp.iter().map(move |m| partial(&one_form_times_mat(n, a, m)))),
            );
            let s20w = traceless_symmetric_w(n);
            let w2_image = SubspaceBasis::span(
                &shape,
                (0..vd).flat_map(|a| s20w.iter().map(move |m| partial(&one_form_times_mat(n, a, m)))),
            );
            let decomposition = Decomposition::new(vec![
                im_b.clone(),
                lambda2v_w.clone(),
                w1_image.clone(),
                w2_image.clone(),
            ])
            .expect("the four torsion summands are independent");
            TorsionSpaces { decomposition, im_partial_b: im_b, lambda2v_w, w1_image, w2_image, ker_partial_b }
        })
    }

    pub fn curvature_modules(&self) -> &CurvatureModules {
        self.curvature.get_or_init(|| {
            let mut k0 = self.sp_n.matrices().to_vec();
            k0.extend(self.sp_1.matrices().iter().cloned());
            k0.push(scalar_r(self.n));
            build_curvature_modules(self.n, &k0, self.eh.matrices())
        })
    }
}

/// Symmetric traceless endomorphisms of `W`.
pub fn traceless_symmetric_w(n: usize) -> Vec<Mat> {
    let w = |s| w_index(n, s);
    let mut out = Vec::new();
    for s in 0..3 {
        let t = (s + 1) % 3;
        out.push(Mat::unit(w(s), w(t)).add(&Mat::unit(w(t), w(s))));
    }
    out.push(Mat::unit(w(0), w(0)).sub(&Mat::unit(w(1), w(1))));
    out.push(Mat::unit(w(1), w(1)).sub(&Mat::unit(w(2), w(2))));
    out
}

/// `(sp(n)⊕sp(1))^⊥` in `gl(V)`, for the trace form.
pub fn spn_sp1_perp_in_gl_v(spaces: &ModelSpaces) -> Vec<Mat> {
    let vd = v_dim(spaces.n);
    let restricted: Vec<Mat> = spaces.spn_sp1.matrices().iter().map(|m| m.block(0..vd, 0..vd)).collect();
    trace_complement(&gl_block(0..vd), &restricted)
}

/// `so(W)`.
pub fn so_w_basis(n: usize) -> Vec<Mat> {
    so_w(n)
}

/// `Span{ω_s}` component of a scalar 2-form, as the three inner products `⟨f, ω_s⟩`.
pub fn omega_components(f: &Tensor) -> [Scalar; 3] {
    let n = f.n();
    [0, 1, 2].map(|s| f.dot(&omega(n, s)))
}
