//! Sparse tensor-valued exterior forms with exact coefficients.
//!
//! A [`Tensor`] is a `k`-form in the coframe `e^0, …, e^{D-1}` with values in a
//! tensor product of up to [`MAX_SLOTS`] slots. Indices are 0-based: `0..4n`
//! spans `V`, `4n..4n+3` spans `W`, anything beyond is an isotropy direction of a
//! homogeneous model. Blades are stored as bitmasks with increasing indices.

use crate::mat::Mat;
use crate::scalar::Scalar;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use thiserror::Error;

pub const MAX_SLOTS: usize = 4;
/// Blades are `u64` bitmasks.
pub const MAX_FORM_INDEX: usize = 64;

/// `dim V = 4n`.
pub fn v_dim(n: usize) -> usize {
    4 * n
}

/// `dim T = 4n + 3`.
pub fn t_dim(n: usize) -> usize {
    4 * n + 3
}

/// Index of `w_s` (`s` in `0..3`).
pub fn w_index(n: usize, s: usize) -> usize {
    4 * n + s
}

/// Kind of a value slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// `T`, indices `0..4n+3`.
    Vector,
    /// `T*`, indices `0..4n+3`.
    Covector,
    /// `T/V ≅ W`, indices `0..3`.
    Quotient,
    /// The line `κ* = Λ³W`, the only index is 0.
    Kappa,
}

impl Slot {
    pub fn range(self, n: usize) -> usize {
        match self {
            Slot::Vector | Slot::Covector => t_dim(n),
            Slot::Quotient => 3,
            Slot::Kappa => 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("index {index} out of range {bound} for {what}")]
    IndexOutOfRange { what: &'static str, index: usize, bound: usize },
    #[error("too many slots ({0} > {MAX_SLOTS})")]
    TooManySlots(usize),
}

/// Basis element label: a blade plus one index per slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub blade: u64,
    pub vals: [u8; MAX_SLOTS],
}

impl Key {
    pub fn blade_indices(&self) -> Vec<usize> {
        bits(self.blade).collect()
    }
}

pub(crate) fn bits(mut b: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if b == 0 {
            None
        } else {
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(i)
        }
    })
}

/// Number of blade indices strictly below `k`.
#[inline]
pub(crate) fn below(blade: u64, k: usize) -> u32 {
    (blade & ((1u64 << k) - 1)).count_ones()
}

/// Sign of `e^A ∧ e^B` relative to the sorted blade, or `None` if they overlap.
#[inline]
pub(crate) fn wedge_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in bits(b) {
        swaps += (a >> j).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// Sorts `indices` into a blade, returning the blade and whether the
/// permutation is odd. `None` on a repeated index.
pub fn blade_of(indices: &[usize]) -> Option<(u64, bool)> {
    let mut blade = 0u64;
    let mut odd = false;
    for &i in indices {
        assert!(i < MAX_FORM_INDEX, "form index {i} exceeds {MAX_FORM_INDEX}");
        let bit = 1u64 << i;
        if blade & bit != 0 {
            return None;
        }
        odd ^= (blade >> i).count_ones() % 2 == 1;
        blade |= bit;
    }
    Some((blade, odd))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tensor {
    n: usize,
    degree: usize,
    slots: Vec<Slot>,
    terms: BTreeMap<Key, Scalar>,
}

impl Tensor {
    pub fn new(n: usize, degree: usize, slots: &[Slot]) -> Self {
        assert!(slots.len() <= MAX_SLOTS, "{}", TensorError::TooManySlots(slots.len()));
        Tensor { n, degree, slots: slots.to_vec(), terms: BTreeMap::new() }
    }

    /// Scalar valued `degree`-form.
    pub fn form(n: usize, degree: usize) -> Self {
        Tensor::new(n, degree, &[])
    }

    /// The basis form `e^{i_1} ∧ … ∧ e^{i_k}` (sign from sorting applied).
    pub fn basis_form(n: usize, indices: &[usize]) -> Self {
        let mut t = Tensor::form(n, indices.len());
        t.add_term(indices, &[], Scalar::one());
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn same_shape(&self, o: &Tensor) -> bool {
        self.n == o.n && self.degree == o.degree && self.slots == o.slots
    }

    pub fn empty_like(&self) -> Tensor {
        Tensor::new(self.n, self.degree, &self.slots)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Key, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Key, Scalar> {
        self.terms
    }

    pub fn from_terms(n: usize, degree: usize, slots: &[Slot], terms: BTreeMap<Key, Scalar>) -> Self {
        let mut t = Tensor::new(n, degree, slots);
        t.terms = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        t
    }

    pub fn coeff(&self, indices: &[usize], vals: &[usize]) -> Scalar {
        match blade_of(indices) {
            None => Scalar::zero(),
            Some((blade, odd)) => {
                let c = self.terms.get(&self.key(blade, vals)).cloned().unwrap_or_else(Scalar::zero);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    fn key(&self, blade: u64, vals: &[usize]) -> Key {
        assert_eq!(vals.len(), self.slots.len(), "value arity mismatch");
        let mut v = [0u8; MAX_SLOTS];
        for (p, (&x, slot)) in vals.iter().zip(&self.slots).enumerate() {
            assert!(x < slot.range(self.n), "value index {x} out of range for {slot:?}");
            v[p] = x as u8;
        }
        Key { blade, vals: v }
    }

    /// Adds `c · e^{indices} ⊗ (slot values)`. Indices may be unsorted.
    pub fn add_term(&mut self, indices: &[usize], vals: &[usize], c: Scalar) {
        assert_eq!(indices.len(), self.degree, "form degree mismatch");
        if let Some((blade, odd)) = blade_of(indices) {
            let key = self.key(blade, vals);
            self.add_key(key, if odd { -c } else { c });
        }
    }

    pub fn with_term(mut self, indices: &[usize], vals: &[usize], c: Scalar) -> Self {
        self.add_term(indices, vals, c);
        self
    }

    #[inline]
    pub fn add_key(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, o: &Tensor) {
        assert!(
            self.same_shape(o),
            "{}",
            TensorError::Signature(format!(
                "(n={}, deg={}, {:?}) vs (n={}, deg={}, {:?})",
                self.n, self.degree, self.slots, o.n, o.degree, o.slots
            ))
        );
    }

    /// `self += c * o`.
    pub fn axpy(&mut self, c: &Scalar, o: &Tensor) {
        self.check(o);
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_key(*k, c * v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut r = self.empty_like();
        if !c.is_zero() {
            r.terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        }
        r
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&Key) -> bool) -> Tensor {
        let mut r = self.empty_like();
        r.terms = self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect();
        r
    }

    /// Exterior product; slot lists are concatenated.
    pub fn wedge(&self, o: &Tensor) -> Result<Tensor, TensorError> {
        if self.n != o.n {
            return Err(TensorError::Signature(format!("n = {} vs {}", self.n, o.n)));
        }
        let slots: Vec<Slot> = self.slots.iter().chain(&o.slots).copied().collect();
        if slots.len() > MAX_SLOTS {
            return Err(TensorError::TooManySlots(slots.len()));
        }
        let mut r = Tensor::new(self.n, self.degree + o.degree, &slots);
        let ls = self.slots.len();
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let Some(odd) = wedge_sign(ka.blade, kb.blade) else { continue };
                let mut vals = ka.vals;
                vals[ls..ls + o.slots.len()].copy_from_slice(&kb.vals[..o.slots.len()]);
                let c = va * vb;
                r.add_key(Key { blade: ka.blade | kb.blade, vals }, if odd { -c } else { c });
            }
        }
        Ok(r)
    }

    /// `e_k ⌟ self`.
    pub fn interior(&self, k: usize) -> Tensor {
        assert!(self.degree > 0, "interior product of a 0-form");
        let mut r = Tensor::new(self.n, self.degree - 1, &self.slots);
        let bit = 1u64 << k;
        for (key, v) in &self.terms {
            if key.blade & bit != 0 {
                let odd = below(key.blade, k) % 2 == 1;
                r.add_key(Key { blade: key.blade & !bit, vals: key.vals }, if odd { -v } else { v.clone() });
            }
        }
        r
    }

    /// Part of form bidegree `(p, q)`: `p` indices in `V`, `q` in `W`.
    /// Terms touching isotropy indices are dropped.
    pub fn bigrade(&self, p: usize, q: usize) -> Tensor {
        let vmask = (1u64 << v_dim(self.n)) - 1;
        let wmask = 0b111u64 << v_dim(self.n);
        self.filter(|k| {
            (k.blade & vmask).count_ones() as usize == p
                && (k.blade & wmask).count_ones() as usize == q
                && k.blade & !(vmask | wmask) == 0
        })
    }

    /// Bidegree parts, only nonzero ones.
    pub fn bigrades(&self) -> BTreeMap<(usize, usize), Tensor> {
        let mut out = BTreeMap::new();
        for p in 0..=self.degree {
            let t = self.bigrade(p, self.degree - p);
            if !t.is_zero() {
                out.insert((p, self.degree - p), t);
            }
        }
        out
    }

    /// Drops every term whose blade has an index `≥ 4n+3`.
    pub fn horizontal(&self) -> Tensor {
        let mask = (1u64 << t_dim(self.n)) - 1;
        self.filter(|k| k.blade & !mask == 0)
    }

    pub fn is_horizontal(&self) -> bool {
        let mask = (1u64 << t_dim(self.n)) - 1;
        self.terms.keys().all(|k| k.blade & !mask == 0)
    }

    /// Derivation action of `m ∈ gl(T)` on the value slots only.
    pub fn act_values(&self, m: &Mat) -> Tensor {
        let mut r = self.empty_like();
        if m.is_zero() {
            return r;
        }
        let n = self.n;
        let rows = m.rows();
        let cols = m.cols();
        let w0 = v_dim(n);
        let tr_w = m.trace_on(w0..w0 + 3);
        for (key, v) in &self.terms {
            for (p, slot) in self.slots.iter().enumerate() {
                let x = key.vals[p] as usize;
                match slot {
                    Slot::Vector => {
                        for (i, c) in cols.get(&x).into_iter().flatten() {
                            let mut k2 = *key;
                            k2.vals[p] = *i as u8;
                            r.add_key(k2, v * c);
                        }
                    }
                    Slot::Covector => {
                        for (j, c) in rows.get(&x).into_iter().flatten() {
                            let mut k2 = *key;
                            k2.vals[p] = *j as u8;
                            r.add_key(k2, -(v * c));
                        }
                    }
                    Slot::Quotient => {
                        for (i, c) in cols.get(&(w0 + x)).into_iter().flatten() {
                            if *i >= w0 && *i < w0 + 3 {
                                let mut k2 = *key;
                                k2.vals[p] = (*i - w0) as u8;
                                r.add_key(k2, v * c);
                            }
                        }
                    }
                    Slot::Kappa => r.add_key(*key, v * &tr_w),
                }
            }
        }
        r
    }

    /// Derivation action of `m ∈ gl(T)` on the form part only, through the
    /// horizontal coframe indices. Isotropy indices are left untouched.
    pub fn act_forms(&self, m: &Mat) -> Tensor {
        let mut r = self.empty_like();
        let rows = m.rows();
        let big_n = t_dim(self.n);
        for (key, v) in &self.terms {
            for k in bits(key.blade).take_while(|&k| k < big_n) {
                let Some(row) = rows.get(&k) else { continue };
                let rest = key.blade & !(1u64 << k);
                let s0 = below(key.blade, k);
                for (j, c) in row {
                    if rest & (1u64 << j) != 0 {
                        continue;
                    }
                    let odd = (s0 + below(rest, *j)) % 2 == 1;
                    // m · e^k = -Σ_j m[k][j] e^j
                    let coef = -(v * c);
                    r.add_key(Key { blade: rest | (1u64 << j), vals: key.vals }, if odd { -coef } else { coef });
                }
            }
        }
        r
    }

    /// Full derivation action on forms and values.
    pub fn act(&self, m: &Mat) -> Tensor {
        let mut r = self.act_values(m);
        r += &self.act_forms(m);
        r
    }

    /// Reinterprets the value slots. The caller asserts the relabeling is meaningful.
    pub fn with_slots(mut self, slots: &[Slot]) -> Tensor {
        assert_eq!(slots.len(), self.slots.len());
        self.slots = slots.to_vec();
        self
    }

    /// Euclidean inner product in the basis of sorted blades and slot indices.
    pub fn dot(&self, o: &Tensor) -> Scalar {
        self.check(o);
        self.terms.iter().filter_map(|(k, v)| o.terms.get(k).map(|w| v * w)).sum()
    }

    /// Largest form index used plus one.
    pub fn form_span(&self) -> usize {
        self.terms.keys().map(|k| 64 - k.blade.leading_zeros() as usize).max().unwrap_or(0)
    }
}

impl AddAssign<&Tensor> for Tensor {
    fn add_assign(&mut self, o: &Tensor) {
        self.axpy(&Scalar::one(), o);
    }
}

impl SubAssign<&Tensor> for Tensor {
    fn sub_assign(&mut self, o: &Tensor) {
        self.axpy(&-Scalar::one(), o);
    }
}

impl Add<&Tensor> for &Tensor {
    type Output = Tensor;
    fn add(self, o: &Tensor) -> Tensor {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&Tensor> for &Tensor {
    type Output = Tensor;
    fn sub(self, o: &Tensor) -> Tensor {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(&-Scalar::one())
    }
}

impl Add for Tensor {
    type Output = Tensor;
    fn add(mut self, o: Tensor) -> Tensor {
        self += &o;
        self
    }
}

impl Sub for Tensor {
    type Output = Tensor;
    fn sub(mut self, o: Tensor) -> Tensor {
        self -= &o;
        self
    }
}

impl Neg for Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        -&self
    }
}

fn slot_label(slot: Slot, x: u8, n: usize) -> String {
    let x = x as usize;
    match slot {
        Slot::Vector => format!("e{}", x + 1),
        Slot::Covector => format!("e^{}", x + 1),
        Slot::Quotient => format!("[e{}]", v_dim(n) + x + 1),
        Slot::Kappa => "κ".to_string(),
    }
}

impl fmt::Display for Tensor {
    /// 1-based indices: `3/4 e^{1,6} ⊗ e5 ⊗ e^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (key, v)) in self.terms.iter().enumerate() {
            let sign = if v.is_negative() { "-" } else if idx > 0 { "+" } else { "" };
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}")?;
            let a = v.abs();
            let mut parts = Vec::new();
            if !a.is_one() || (self.degree == 0 && self.slots.is_empty()) {
                write!(f, "{a}")?;
                if self.degree > 0 || !self.slots.is_empty() {
                    write!(f, " ")?;
                }
            }
            if self.degree > 0 {
                let ix: Vec<String> = bits(key.blade).map(|i| (i + 1).to_string()).collect();
                parts.push(format!("e^{{{}}}", ix.join(",")));
            }
            for (p, s) in self.slots.iter().enumerate() {
                parts.push(slot_label(*s, key.vals[p], self.n));
            }
            write!(f, "{}", parts.join("⊗"))?;
        }
        Ok(())
    }
}
