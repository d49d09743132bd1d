//! Exact sparse linear algebra over the rationals.
//!
//! Everything rests on [`Echelon`], an incrementally built row echelon form.
//! Rows are reduced in insertion order and the pivot of a new row is its
//! smallest surviving key. Rows can optionally remember which combination of
//! pushed generators produced them, which is what [`exact_solve`] needs.

use crate::scalar::Scalar;
use crate::tensor::{Key, Tensor};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// `y += a * x`
pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Scalar, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let c = a * v;
        match y.get_mut(k) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                y.insert(k.clone(), c);
            }
        }
    }
}

fn scaled<K: Ord + Clone>(x: &SparseVec<K>, a: &Scalar) -> SparseVec<K> {
    x.iter().map(|(k, v)| (k.clone(), v * a)).collect()
}

/// Outcome of [`Echelon::push`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pushed {
    /// New row with this index.
    Independent(usize),
    /// The generator is dependent; the payload is a kernel vector over generator indices.
    Dependent(SparseVec<usize>),
}

#[derive(Debug, Clone)]
pub struct Echelon<K> {
    pivots: Vec<K>,
    rows: Vec<SparseVec<K>>,
    combos: Option<Vec<SparseVec<usize>>>,
    pushed: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    /// `track` keeps generator combinations per row.
    pub fn new(track: bool) -> Self {
        Echelon { pivots: Vec::new(), rows: Vec::new(), combos: track.then(Vec::new), pushed: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators_seen(&self) -> usize {
        self.pushed
    }

    /// Residual of `x` plus the row coefficients that were subtracted.
    fn reduce_with(&self, mut x: SparseVec<K>) -> (SparseVec<K>, Vec<(usize, Scalar)>) {
        let mut used = Vec::new();
        if x.is_empty() {
            return (x, used);
        }
        for (r, (p, row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            if let Some(c) = x.get(p).cloned() {
                axpy(&mut x, &-c.clone(), row);
                used.push((r, c));
            }
        }
        (x, used)
    }

    pub fn reduce(&self, x: &SparseVec<K>) -> SparseVec<K> {
        self.reduce_with(x.clone()).0
    }

    pub fn contains(&self, x: &SparseVec<K>) -> bool {
        self.reduce(x).is_empty()
    }

    fn combo_of(&self, used: &[(usize, Scalar)]) -> SparseVec<usize> {
        let mut acc = SparseVec::new();
        if let Some(combos) = &self.combos {
            for (r, c) in used {
                axpy(&mut acc, c, &combos[*r]);
            }
        }
        acc
    }

    pub fn push(&mut self, x: &SparseVec<K>) -> Pushed {
        let g = self.pushed;
        self.pushed += 1;
        let (res, used) = self.reduce_with(x.clone());
        if res.is_empty() {
            let mut k = SparseVec::new();
            if self.combos.is_some() {
                k = self.combo_of(&used);
                k = scaled(&k, &-Scalar::one());
                k.insert(g, Scalar::one());
            }
            return Pushed::Dependent(k);
        }
        let (pivot, lead) = res.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
        let inv = lead.recip();
        if self.combos.is_some() {
            let mut combo = scaled(&self.combo_of(&used), &-Scalar::one());
            combo.insert(g, Scalar::one());
            let combo = scaled(&combo, &inv);
            if let Some(combos) = self.combos.as_mut() {
                combos.push(combo);
            }
        }
        self.rows.push(scaled(&res, &inv));
        self.pivots.push(pivot);
        Pushed::Independent(self.rows.len() - 1)
    }

    /// Writes `x` as a combination of the generators pushed so far.
    /// Needs tracking; the error carries the nonzero residual.
    pub fn express(&self, x: &SparseVec<K>) -> Result<SparseVec<usize>, SparseVec<K>> {
        assert!(self.combos.is_some(), "express needs a tracking echelon");
        let (res, used) = self.reduce_with(x.clone());
        if res.is_empty() {
            Ok(self.combo_of(&used))
        } else {
            Err(res)
        }
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of<'a, K: Ord + Clone + 'a>(vs: impl IntoIterator<Item = &'a SparseVec<K>>) -> usize {
    let mut e = Echelon::new(false);
    for v in vs {
        e.push(v);
    }
    e.rank()
}

/// Particular solution and kernel basis, both as coefficient vectors over the domain basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSolution {
    pub particular: SparseVec<usize>,
    pub kernel: Vec<SparseVec<usize>>,
}

/// Solves `Σ x_g images[g] = target`. The error is the reduced residual.
pub fn solve_sparse<K: Ord + Clone>(images: &[SparseVec<K>], target: &SparseVec<K>) -> Result<SparseSolution, SparseVec<K>> {
    let mut e = Echelon::new(true);
    let mut kernel = Vec::new();
    for im in images {
        if let Pushed::Dependent(k) = e.push(im) {
            kernel.push(k);
        }
    }
    let particular = e.express(target)?;
    Ok(SparseSolution { particular, kernel })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("inconsistent linear system (residual has {} terms): {residual}", residual.len())]
    Unsolvable { residual: Tensor },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectError {
    #[error("subspaces are not in direct sum (rank {rank} < total {total})")]
    NotDirect { rank: usize, total: usize },
    #[error("vector is not in the sum of the subspaces: residual {residual}")]
    NotInSum { residual: Tensor },
}

/// Span of a family of tensors of one shape.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    shape: Tensor,
    basis: Vec<Tensor>,
    ech: Echelon<Key>,
    // generator number (as seen by `ech`) of each basis element
    gen_of: BTreeMap<usize, usize>,
}

impl SubspaceBasis {
    /// `shape` fixes `n`, degree and slots. Dependent generators are dropped.
    pub fn span(shape: &Tensor, gens: impl IntoIterator<Item = Tensor>) -> Self {
        let mut s = SubspaceBasis {
            shape: shape.empty_like(),
            basis: Vec::new(),
            ech: Echelon::new(true),
            gen_of: BTreeMap::new(),
        };
        for g in gens {
            s.insert(g);
        }
        s
    }

    /// Adds a generator; returns whether it enlarged the span.
    pub fn insert(&mut self, g: Tensor) -> bool {
        assert!(g.same_shape(&self.shape), "generator shape mismatch");
        let g_idx = self.ech.generators_seen();
        match self.ech.push(g.terms()) {
            Pushed::Independent(_) => {
                self.gen_of.insert(g_idx, self.basis.len());
                self.basis.push(g);
                true
            }
            Pushed::Dependent(_) => false,
        }
    }

    pub fn shape(&self) -> &Tensor {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Tensor] {
        &self.basis
    }

    pub fn contains(&self, x: &Tensor) -> bool {
        self.ech.contains(x.terms())
    }

    /// Residual of `x` modulo the subspace (a canonical representative).
    pub fn reduce(&self, x: &Tensor) -> Tensor {
        Tensor::from_terms(x.n(), x.degree(), x.slots(), self.ech.reduce(x.terms()))
    }

    /// Coordinates in [`basis`](Self::basis), or `None` if `x` is outside.
    pub fn coordinates(&self, x: &Tensor) -> Option<Vec<Scalar>> {
        let c = self.ech.express(x.terms()).ok()?;
        let mut out = vec![Scalar::zero(); self.basis.len()];
        for (g, v) in c {
            out[self.gen_of[&g]] = v;
        }
        Some(out)
    }

    pub fn sum(&self, o: &SubspaceBasis) -> SubspaceBasis {
        SubspaceBasis::span(&self.shape, self.basis.iter().chain(&o.basis).cloned())
    }

    /// Whether `o ⊆ self`.
    pub fn contains_all(&self, o: &SubspaceBasis) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    /// `self ∩ o`, computed from the kernel of `(a, b) ↦ a - b`.
    pub fn intersection(&self, o: &SubspaceBasis) -> SubspaceBasis {
        let imgs: Vec<SparseVec<Key>> = self
            .basis
            .iter()
            .map(|b| b.terms().clone())
            .chain(o.basis.iter().map(|b| b.scale(&-Scalar::one()).into_terms()))
            .collect();
        let sol = solve_sparse(&imgs, &SparseVec::new()).expect("zero target is always reachable");
        let d = self.basis.len();
        let gens = sol.kernel.iter().map(|k| {
            let mut t = self.shape.clone();
            for (i, c) in k.range(..d) {
                t.axpy(c, &self.basis[*i]);
            }
            t
        });
        SubspaceBasis::span(&self.shape, gens)
    }
}

/// A linear map given by the images of a domain basis.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub domain: Vec<Tensor>,
    pub images: Vec<Tensor>,
    codomain: Tensor,
}

impl LinearMap {
    pub fn new(domain: Vec<Tensor>, codomain_shape: &Tensor, f: impl Fn(&Tensor) -> Tensor) -> Self {
        let images: Vec<Tensor> = domain.iter().map(&f).collect();
        for im in &images {
            assert!(im.same_shape(codomain_shape), "image shape mismatch");
        }
        LinearMap { domain, images, codomain: codomain_shape.empty_like() }
    }

    pub fn from_images(domain: Vec<Tensor>, images: Vec<Tensor>, codomain_shape: &Tensor) -> Self {
        assert_eq!(domain.len(), images.len());
        LinearMap { domain, images, codomain: codomain_shape.empty_like() }
    }

    pub fn codomain_shape(&self) -> &Tensor {
        &self.codomain
    }

    pub fn image(&self) -> SubspaceBasis {
        SubspaceBasis::span(&self.codomain, self.images.iter().cloned())
    }

    pub fn rank(&self) -> usize {
        rank_of(self.images.iter().map(|t| t.terms()))
    }

    /// Domain tensor with the given coordinates.
    pub fn combine(&self, coords: &SparseVec<usize>) -> Tensor {
        let mut t = self.domain.first().map(|d| d.empty_like()).unwrap_or_else(|| self.codomain.empty_like());
        for (i, c) in coords {
            t.axpy(c, &self.domain[*i]);
        }
        t
    }

    pub fn kernel(&self) -> Vec<Tensor> {
        let imgs: Vec<_> = self.images.iter().map(|t| t.terms().clone()).collect();
        let sol = solve_sparse(&imgs, &SparseVec::new()).expect("homogeneous system");
        sol.kernel.iter().map(|k| self.combine(k)).collect()
    }
}

/// `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSet {
    pub particular: Tensor,
    pub particular_coords: SparseVec<usize>,
    pub kernel: Vec<Tensor>,
    pub kernel_coords: Vec<SparseVec<usize>>,
}

impl AffineSolutionSet {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Solves `map(x) = target` exactly.
pub fn exact_solve(map: &LinearMap, target: &Tensor) -> Result<AffineSolutionSet, SolveError> {
    assert!(target.same_shape(map.codomain_shape()), "target shape mismatch");
    let imgs: Vec<_> = map.images.iter().map(|t| t.terms().clone()).collect();
    match solve_sparse(&imgs, target.terms()) {
        Ok(sol) => Ok(AffineSolutionSet {
            particular: map.combine(&sol.particular),
            kernel: sol.kernel.iter().map(|k| map.combine(k)).collect(),
            particular_coords: sol.particular,
            kernel_coords: sol.kernel,
        }),
        Err(res) => Err(SolveError::Unsolvable {
            residual: Tensor::from_terms(target.n(), target.degree(), target.slots(), res),
        }),
    }
}

/// A fixed direct sum of subspaces, prepared once for repeated projection.
#[derive(Debug, Clone)]
pub struct Decomposition {
    parts: Vec<SubspaceBasis>,
    owner: Vec<usize>,
    ech: Echelon<Key>,
    total: usize,
}

impl Decomposition {
    pub fn new(parts: Vec<SubspaceBasis>) -> Result<Self, ProjectError> {
        let mut ech = Echelon::new(true);
        let mut owner = Vec::new();
        let mut total = 0;
        for (i, p) in parts.iter().enumerate() {
            for b in p.basis() {
                ech.push(b.terms());
                owner.push(i);
                total += 1;
            }
        }
        if ech.rank() < total {
            return Err(ProjectError::NotDirect { rank: ech.rank(), total });
        }
        Ok(Decomposition { parts, owner, ech, total })
    }

    pub fn parts(&self) -> &[SubspaceBasis] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.total
    }

    /// Components of `x`, one per part, summing to `x`.
    pub fn project(&self, x: &Tensor) -> Result<Vec<Tensor>, ProjectError> {
        let coords = self.ech.express(x.terms()).map_err(|res| ProjectError::NotInSum {
            residual: Tensor::from_terms(x.n(), x.degree(), x.slots(), res),
        })?;
        let mut out: Vec<Tensor> = self.parts.iter().map(|p| p.shape().clone()).collect();
        let flat: Vec<&Tensor> = self.parts.iter().flat_map(|p| p.basis()).collect();
        for (g, c) in coords {
            out[self.owner[g]].axpy(&c, flat[g]);
        }
        Ok(out)
    }
}

/// One-shot projection of `x` onto a direct sum of subspaces.
pub fn project_components(x: &Tensor, subspaces: &[SubspaceBasis]) -> Result<Vec<Tensor>, ProjectError> {
    Decomposition::new(subspaces.to_vec())?.project(x)
}

/// Dense square matrix helpers used for small frame computations.
pub mod dense {
    use super::*;

    pub type Matrix = Vec<Vec<Scalar>>;

    pub fn identity(n: usize) -> Matrix {
        (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    }

    pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let m = b.first().map_or(0, |r| r.len());
        let k = b.len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut s = Scalar::zero();
                        for t in 0..k {
                            if !a[i][t].is_zero() && !b[t][j].is_zero() {
                                s += &a[i][t] * &b[t][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    pub fn transpose(a: &Matrix) -> Matrix {
        let m = a.first().map_or(0, |r| r.len());
        (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
    }

    /// Gauss-Jordan inverse, `None` if singular.
    pub fn inverse(a: &Matrix) -> Option<Matrix> {
        let n = a.len();
        let mut m: Vec<Vec<Scalar>> = a
            .iter()
            .zip(identity(n))
            .map(|(r, e)| r.iter().cloned().chain(e).collect())
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, p);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Leading principal minors, for Sylvester's criterion.
    pub fn leading_minors(a: &Matrix) -> Vec<Scalar> {
        (1..=a.len()).map(|k| det(&a[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>())).collect()
    }

    pub fn det(a: &Matrix) -> Scalar {
        let n = a.len();
        let mut m = a.clone();
        let mut d = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Scalar::zero() };
            if p != col {
                m.swap(col, p);
                d = -d;
            }
            d *= &m[col][col];
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if !m[r][col].is_zero() {
                    let f = &m[r][col] * &inv;
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        d
    }

    pub fn is_symmetric(a: &Matrix) -> bool {
        (0..a.len()).all(|i| (0..i).all(|j| a[i][j] == a[j][i]))
    }

    pub fn is_positive_definite(a: &Matrix) -> bool {
        is_symmetric(a) && leading_minors(a).iter().all(|m| *m > Scalar::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, q};
    use crate::tensor::Slot;

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn solve_with_kernel() {
        // x0 (1,1) + x1 (1,-1) + x2 (2,0) = (3,1)
        let imgs = vec![v(&[(0, 1), (1, 1)]), v(&[(0, 1), (1, -1)]), v(&[(0, 2)])];
        let sol = solve_sparse(&imgs, &v(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        let mut acc = SparseVec::new();
        for (g, c) in &sol.particular {
            axpy(&mut acc, c, &imgs[*g]);
        }
        assert_eq!(acc, v(&[(0, 3), (1, 1)]));
        let mut z = SparseVec::new();
        for (g, c) in &sol.kernel[0] {
            axpy(&mut z, c, &imgs[*g]);
        }
        assert!(z.is_empty());
    }

    #[test]
    fn inconsistent_system_reports_residual() {
        let imgs = vec![v(&[(0, 1)])];
        let err = solve_sparse(&imgs, &v(&[(1, 2)])).unwrap_err();
        assert_eq!(err, v(&[(1, 2)]));
    }

    #[test]
    fn subspace_intersection() {
        let shape = Tensor::new(1, 0, &[Slot::Vector]);
        let e = |i: usize| shape.clone().with_term(&[], &[i], int(1));
        let a = SubspaceBasis::span(&shape, [e(0), e(1)]);
        let b = SubspaceBasis::span(&shape, [&e(1) + &e(2), &e(0) + &e(2)]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&(&e(0) - &e(1))));
    }

    #[test]
    fn projection_onto_direct_sum() {
        let shape = Tensor::new(1, 0, &[Slot::Vector]);
        let e = |i: usize| shape.clone().with_term(&[], &[i], int(1));
        let a = SubspaceBasis::span(&shape, [&e(0) + &e(1)]);
        let b = SubspaceBasis::span(&shape, [e(1)]);
        let parts = project_components(&e(0), &[a, b.clone()]).unwrap();
        assert_eq!(parts[0], &e(0) + &e(1));
        assert_eq!(parts[1], -e(1));
        assert!(matches!(Decomposition::new(vec![b.clone(), b]), Err(ProjectError::NotDirect { .. })));
    }

    #[test]
    fn dense_inverse_and_minors() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = dense::inverse(&a).unwrap();
        assert_eq!(dense::mul(&a, &inv), dense::identity(2));
        assert!(dense::is_positive_definite(&a));
        assert_eq!(dense::det(&vec![vec![q(1, 2), int(3)], vec![int(1), int(4)]]), int(-1));
    }
}
