//! Left-invariant coframe models: parsing, validation and the exterior derivative.

use crate::linalg::dense::Matrix;
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::tensor::{below, bits, t_dim, Key, Tensor, MAX_FORM_INDEX};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
}

fn perr(location: impl Into<String>, message: impl Into<String>) -> ModelError {
    ModelError::Parse { location: location.into(), message: message.into() }
}

/// Structure equations `de^i = Σ c^i_{jk} e^{jk}` of a Lie algebra with a
/// distinguished adapted coframe.
///
/// Indices `0..4n+3` are the coframe of `T`; an optional block of `isotropy`
/// further indices carries the isotropy subalgebra of a homogeneous model
/// `G/H`, in which case the reported geometry is the one at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoframeModel {
    name: String,
    n: usize,
    isotropy: usize,
    d: Vec<Tensor>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    n: i64,
    #[serde(default, skip_serializing_if = "is_zero_usize")]
    isotropy: usize,
    #[serde(default)]
    d: BTreeMap<String, Vec<RawTerm>>,
}

fn is_zero_usize(x: &usize) -> bool {
    *x == 0
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    c: String,
    jk: [i64; 2],
}

/// One failed Jacobi check: `d(de^i) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiFailure {
    /// 0-based coframe index.
    pub index: usize,
    pub residual: Tensor,
}

impl CoframeModel {
    /// Builds a model from the 2-forms `de^i`, `i < 4n+3+isotropy`.
    pub fn new(name: impl Into<String>, n: usize, isotropy: usize, d: Vec<Tensor>) -> Self {
        let dim = t_dim(n) + isotropy;
        assert!(n >= 1, "n must be positive");
        assert!(dim <= MAX_FORM_INDEX, "coframe too large");
        assert_eq!(d.len(), dim, "need one differential per coframe element");
        for t in &d {
            assert!(t.n() == n && t.degree() == 2 && t.slots().is_empty(), "differentials are scalar 2-forms");
            assert!(t.form_span() <= dim, "differential uses an index beyond the coframe");
        }
        CoframeModel { name: name.into(), n, isotropy, d }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the isotropy block (0 for Lie group models).
    pub fn isotropy(&self) -> usize {
        self.isotropy
    }

    /// `4n + 3 + isotropy`.
    pub fn dim(&self) -> usize {
        t_dim(self.n) + self.isotropy
    }

    /// `de^i`.
    pub fn de(&self, i: usize) -> &Tensor {
        &self.d[i]
    }

    pub fn differentials(&self) -> &[Tensor] {
        &self.d
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        if raw.n < 1 {
            return Err(perr("n", format!("must be a positive integer, got {}", raw.n)));
        }
        let n = raw.n as usize;
        let dim = t_dim(n) + raw.isotropy;
        if dim > MAX_FORM_INDEX {
            return Err(perr("n", format!("coframe dimension {dim} exceeds {MAX_FORM_INDEX}")));
        }
        let mut d = vec![Tensor::form(n, 2); dim];
        for (key, terms) in &raw.d {
            let loc = format!("d[\"{key}\"]");
            let i: usize = key.parse().map_err(|_| perr(&loc, "row key must be a positive integer"))?;
            if i < 1 || i > dim {
                return Err(perr(&loc, format!("row index {i} outside 1..={dim}")));
            }
            let mut seen = BTreeMap::new();
            for (t, term) in terms.iter().enumerate() {
                let tloc = format!("{loc}[{t}]");
                let c = parse_scalar(&term.c).map_err(|e| perr(&tloc, e.to_string()))?;
                let [j, k] = term.jk;
                if !(1 <= j && j < k && k as usize <= dim) {
                    return Err(perr(&tloc, format!("need 1 <= j < k <= {dim}, got [{j}, {k}]")));
                }
                if seen.insert((j, k), ()).is_some() {
                    return Err(perr(&tloc, format!("duplicate pair [{j}, {k}]")));
                }
                d[i - 1].add_term(&[j as usize - 1, k as usize - 1], &[], c);
            }
        }
        Ok(CoframeModel { name: raw.name, n, isotropy: raw.isotropy, d })
    }

    /// Canonical JSON: rows in increasing order, pairs sorted, zero rows omitted.
    pub fn to_json(&self) -> String {
        let mut d = BTreeMap::new();
        for (i, t) in self.d.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let terms = t
                .terms()
                .iter()
                .map(|(k, c)| {
                    let ix = k.blade_indices();
                    RawTerm { c: format_scalar(c), jk: [ix[0] as i64 + 1, ix[1] as i64 + 1] }
                })
                .collect();
            d.insert(i + 1, terms);
        }
        // numeric row order, not lexicographic
        let mut out = String::from("{\n");
        out += &format!("  \"name\": {},\n", serde_json::to_string(&self.name).unwrap());
        out += &format!("  \"n\": {},\n", self.n);
        if self.isotropy > 0 {
            out += &format!("  \"isotropy\": {},\n", self.isotropy);
        }
        out += "  \"d\": {";
        let rows: Vec<String> = d
            .iter()
            .map(|(i, terms): (&usize, &Vec<RawTerm>)| {
                let ts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{{\"c\": \"{}\", \"jk\": [{}, {}]}}", t.c, t.jk[0], t.jk[1]))
                    .collect();
                format!("\n    \"{}\": [{}]", i, ts.join(", "))
            })
            .collect();
        out += &rows.join(",");
        if !rows.is_empty() {
            out += "\n  ";
        }
        out += "}\n}\n";
        out
    }

    /// Exterior derivative of a (tensor-valued) form with constant values.
    pub fn d(&self, form: &Tensor) -> Tensor {
        let slots = form.slots().to_vec();
        let mut out = Tensor::new(form.n(), form.degree() + 1, &slots);
        for (key, c) in form.terms() {
            for i in bits(key.blade) {
                let de = &self.d[i];
                if de.is_zero() {
                    continue;
                }
                let rest = key.blade & !(1u64 << i);
                let s_pos = below(key.blade, i) % 2 == 1;
                for (dk, dc) in de.terms() {
                    let Some(odd) = crate::tensor::wedge_sign(dk.blade, rest) else { continue };
                    let coef = c * dc;
                    let neg = s_pos ^ odd;
                    out.add_key(Key { blade: dk.blade | rest, vals: key.vals }, if neg { -coef } else { coef });
                }
            }
        }
        out
    }

    /// `d(de^i)` for every `i`; the model is a Lie algebra iff all vanish.
    pub fn validate_jacobi(&self) -> Result<(), Vec<JacobiFailure>> {
        let fails: Vec<JacobiFailure> = self
            .d
            .iter()
            .enumerate()
            .filter_map(|(i, de)| {
                let r = self.d(de);
                (!r.is_zero()).then_some(JacobiFailure { index: i, residual: r })
            })
            .collect();
        if fails.is_empty() {
            Ok(())
        } else {
            Err(fails)
        }
    }

    /// New coframe `e'^i = Σ_j p[i][j] e^j` on the first `p.len()` indices;
    /// `p_inv` must be the inverse of `p`. Isotropy indices are untouched.
    pub fn change_coframe(&self, p: &Matrix, p_inv: &Matrix) -> CoframeModel {
        let m = p.len();
        assert!(m <= self.dim());
        let sub = |t: &Tensor| -> Tensor {
            // substitute e^j = Σ_k p_inv[j][k] e'^k for j < m
            let mut out = Tensor::form(self.n, 2);
            for (key, c) in t.terms() {
                let ix = key.blade_indices();
                let expand = |j: usize| -> Vec<(usize, Scalar)> {
                    if j < m {
                        (0..m).filter(|&k| !p_inv[j][k].is_zero()).map(|k| (k, p_inv[j][k].clone())).collect()
                    } else {
                        vec![(j, Scalar::one())]
                    }
                };
                for (a, ca) in expand(ix[0]) {
                    for (b, cb) in expand(ix[1]) {
                        out.add_term(&[a, b], &[], c * &ca * &cb);
                    }
                }
            }
            out
        };
        let d = (0..self.dim())
            .map(|i| {
                let de = match p.get(i).filter(|_| i < m) {
                    Some(row) => row.iter().zip(&self.d).fold(Tensor::form(self.n, 2), |mut acc, (pij, dj)| {
                        acc.axpy(pij, dj);
                        acc
                    }),
                    None => self.d[i].clone(),
                };
                sub(&de)
            })
            .collect();
        CoframeModel { name: self.name.clone(), n: self.n, isotropy: self.isotropy, d }
    }

    /// Relabels coframe indices by a permutation `perm[i] = new index of e^i`.
    pub fn permute(&self, perm: &[usize]) -> CoframeModel {
        let dim = self.dim();
        assert_eq!(perm.len(), dim);
        let mut d = vec![Tensor::form(self.n, 2); dim];
        for (i, de) in self.d.iter().enumerate() {
            for (key, c) in de.terms() {
                let ix: Vec<usize> = key.blade_indices().iter().map(|&j| perm[j]).collect();
                d[perm[i]].add_term(&ix, &[], c.clone());
            }
        }
        CoframeModel { name: self.name.clone(), n: self.n, isotropy: self.isotropy, d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    const CFS_LIKE: &str = r#"{"name": "t", "n": 1, "d": {"5": [{"c": "1", "jk": [1, 2]}, {"c": "-1", "jk": [3, 4]}]}}"#;

    #[test]
    fn parse_and_roundtrip() {
        let m = CoframeModel::parse(CFS_LIKE).unwrap();
        assert_eq!(m.de(4).coeff(&[0, 1], &[]), int(1));
        assert!(m.de(0).is_zero());
        let again = CoframeModel::parse(&m.to_json()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn parse_errors_have_locations() {
        let bad = r#"{"name": "t", "n": 1, "d": {"5": [{"c": "1/0", "jk": [1, 2]}]}}"#;
        let e = CoframeModel::parse(bad).unwrap_err();
        assert!(e.to_string().contains("d[\"5\"][0]"), "{e}");
        let bad = r#"{"name": "t", "n": 1, "d": {"5": [{"c": "1", "jk": [2, 1]}]}}"#;
        assert!(CoframeModel::parse(bad).is_err());
        let bad = r#"{"name": "t", "n": 1, "d": {"9": []}}"#;
        assert!(CoframeModel::parse(bad).is_err());
        let bad = r#"{"name": "t", "n": 1, "d": {"5": [{"c": "1", "jk": [1, 2]}, {"c": "2", "jk": [1, 2]}]}}"#;
        assert!(CoframeModel::parse(bad).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn d_of_products_follows_leibniz() {
        let m = CoframeModel::parse(CFS_LIKE).unwrap();
        // d(e^5 ∧ e^1) = de^5 ∧ e^1 = -e^{34} ∧ e^1 = -e^{134}
        let f = Tensor::basis_form(1, &[4, 0]);
        assert_eq!(m.d(&f), Tensor::basis_form(1, &[0, 2, 3]).scale(&int(-1)));
        assert!(m.validate_jacobi().is_ok());
    }
}
