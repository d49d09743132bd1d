//! Sparse endomorphisms of `T = V ⊕ W`, the values of connection forms.

use crate::scalar::{int, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An element of `gl(T)`. Entry `(i, j)` is the coefficient of the
/// elementary map sending `e_j` to `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Mat {
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Mat {
    pub fn zero() -> Self {
        Mat::default()
    }

    /// The elementary matrix `E_{ij}`: `e_j ↦ e_i`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Mat::zero();
        m.add_entry(i, j, Scalar::one());
        m
    }

    pub fn identity_on(range: std::ops::Range<usize>, c: Scalar) -> Self {
        let mut m = Mat::zero();
        for i in range {
            m.add_entry(i, i, c.clone());
        }
        m
    }

    pub fn from_entries<I: IntoIterator<Item = ((usize, usize), Scalar)>>(it: I) -> Self {
        let mut m = Mat::zero();
        for ((i, j), c) in it {
            m.add_entry(i, j, c);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        if c.is_zero() {
            return Mat::zero();
        }
        Mat { entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        let mut r = self.clone();
        r.axpy(&Scalar::one(), o);
        r
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        let mut r = self.clone();
        r.axpy(&-Scalar::one(), o);
        r
    }

    /// `self += c * o`
    pub fn axpy(&mut self, c: &Scalar, o: &Mat) {
        for (&(i, j), v) in &o.entries {
            self.add_entry(i, j, c * v);
        }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let rows = o.rows();
        let mut r = Mat::zero();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rows.get(&k) {
                for (j, b) in row {
                    r.add_entry(i, *j, a * b);
                }
            }
        }
        r
    }

    pub fn bracket(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Mat {
        Mat { entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect() }
    }

    pub fn trace(&self) -> Scalar {
        self.entries.iter().filter(|((i, j), _)| i == j).map(|(_, v)| v.clone()).sum()
    }

    /// Trace of the block on indices `range`.
    pub fn trace_on(&self, range: std::ops::Range<usize>) -> Scalar {
        self.entries
            .iter()
            .filter(|((i, j), _)| i == j && range.contains(i))
            .map(|(_, v)| v.clone())
            .sum()
    }

    /// Entries restricted to rows in `rows` and columns in `cols`.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        Mat {
            entries: self
                .entries
                .iter()
                .filter(|((i, j), _)| rows.contains(i) && cols.contains(j))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Row-major adjacency: row index to `(column, value)` list.
    pub fn rows(&self) -> BTreeMap<usize, Vec<(usize, Scalar)>> {
        let mut r: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            r.entry(i).or_default().push((j, v.clone()));
        }
        r
    }

    pub fn cols(&self) -> BTreeMap<usize, Vec<(usize, Scalar)>> {
        let mut r: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            r.entry(j).or_default().push((i, v.clone()));
        }
        r
    }

    /// Trace form `tr(self^T o)`, the Euclidean inner product on matrices.
    pub fn frobenius(&self, o: &Mat) -> Scalar {
        self.entries
            .iter()
            .filter_map(|(k, v)| o.entries.get(k).map(|w| v * w))
            .sum()
    }

    /// `tr(self o)`.
    pub fn trace_pairing(&self, o: &Mat) -> Scalar {
        self.entries
            .iter()
            .filter_map(|(&(i, j), v)| o.entries.get(&(j, i)).map(|w| v * w))
            .sum()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(&(i, j), v)| {
                if *v == int(1) {
                    format!("E({},{})", i + 1, j + 1)
                } else {
                    format!("{}·E({},{})", v, i + 1, j + 1)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn units_compose() {
        let a = Mat::unit(0, 1);
        let b = Mat::unit(1, 2);
        assert_eq!(a.mul(&b), Mat::unit(0, 2));
        assert!(b.mul(&a).is_zero());
        assert_eq!(a.bracket(&b), Mat::unit(0, 2));
    }

    #[test]
    fn trace_pairings() {
        let a = Mat::from_entries([((0, 1), int(2)), ((1, 0), int(3))]);
        assert_eq!(a.trace_pairing(&a), int(12));
        assert_eq!(a.frobenius(&a), int(13));
        assert_eq!(a.transpose().get(0, 1), int(3));
    }
}
