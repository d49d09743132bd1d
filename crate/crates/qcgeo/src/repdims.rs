//! Dimensions of `Sp(n)` and `Sp(n)Sp(1)` representations from the Weyl
//! product formula, the catalog of decomposition identities, and the module
//! ledger comparing representation-theoretic dimensions with ranks.

use crate::frame::trace_form;
use crate::linalg::rank_of;
use crate::scalar::Scalar;
use crate::spaces::{partial_map, ModelSpaces};
use crate::tensor::{t_dim, v_dim};
use num::{BigInt, One, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("weight coefficients must be non-increasing and non-negative: {0:?}")]
    BadWeight(Vec<usize>),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("identity {id} needs n >= {min_n}")]
    OutOfDomain { id: String, min_n: usize },
    #[error("module ledger mismatch for {name}: representation {rep}, rank {rank}")]
    LedgerMismatch { name: String, rep: BigInt, rank: usize },
}

/// `V_{l_1..l_k} ⊗ S^s H`, a weight `Σ l_i L_i` of `Sp(n)` with an optional `Sp(1)` factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    pub n: usize,
    pub coefficients: Vec<usize>,
    pub sp1_degree: Option<usize>,
}

impl HighestWeight {
    pub fn new(n: usize, coefficients: &[usize]) -> Result<Self, RepError> {
        if coefficients.windows(2).any(|w| w[0] < w[1]) {
            return Err(RepError::BadWeight(coefficients.to_vec()));
        }
        let mut c = coefficients.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(HighestWeight { n, coefficients: c, sp1_degree: None })
    }

    pub fn with_h(mut self, s: usize) -> Self {
        self.sp1_degree = Some(s);
        self
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            write!(f, "R")?;
        } else {
            let digits: Vec<String> = self.coefficients.iter().map(|l| l.to_string()).collect();
            write!(f, "V_{}", digits.concat())?;
        }
        match self.sp1_degree {
            Some(s) if s > 0 => write!(f, "S^{s}H"),
            _ => Ok(()),
        }
    }
}

/// Weyl dimension of `V_λ` for `C_n`: `Π_{α>0} ⟨λ+ρ, α⟩ / ⟨ρ, α⟩`, with
/// `ρ = (n, n−1, …, 1)`. Zero when `λ` has more than `n` parts; an `S^sH`
/// factor multiplies by `s+1`.
pub fn weyl_dim(w: &HighestWeight) -> BigInt {
    let n = w.n;
    if w.coefficients.len() > n {
        return BigInt::zero();
    }
    let rho: Vec<i64> = (0..n).map(|i| (n - i) as i64).collect();
    let mu: Vec<i64> = (0..n).map(|i| rho[i] + *w.coefficients.get(i).unwrap_or(&0) as i64).collect();
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for i in 0..n {
        num *= mu[i];
        den *= rho[i];
        for j in i + 1..n {
            num *= (mu[i] - mu[j]) * (mu[i] + mu[j]);
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j]);
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den * (w.sp1_degree.unwrap_or(0) + 1)
}

/// Shorthand for `dim V_λ S^s H` at rank `n`.
pub fn dim(n: usize, l: &[usize], s: usize) -> BigInt {
    weyl_dim(&HighestWeight::new(n, l).expect("catalog weights are dominant").with_h(s))
}

fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < b {
        return BigInt::zero();
    }
    (0..b).fold(BigInt::one(), |acc, i| acc * (a - i) / (i + 1))
}

fn exact(x: Scalar) -> BigInt {
    assert!(x.is_integer(), "closed form is not an integer: {x}");
    x.to_integer()
}

/// `dim V_{211} = ½(n+1)(2n+1)(2n−1)(n−2)`.
pub fn v211_closed_form(n: usize) -> BigInt {
    let n = n as i64;
    exact(Scalar::new(BigInt::from((n + 1) * (2 * n + 1) * (2 * n - 1) * (n - 2)), BigInt::from(2)))
}

/// `dim V_{l,1} = l(2n−2)/(l+2n−1) · C(l+2n, l+1)`.
pub fn vl1_closed_form(n: usize, l: usize) -> BigInt {
    let (n, l) = (n as i64, l as i64);
    exact(Scalar::new(BigInt::from(l * (2 * n - 2)) * binom(l + 2 * n, l + 1), BigInt::from(l + 2 * n - 1)))
}

/// `dim V_{l,2} = (l²+2ln−2n−1)/2 · C(l+2n−2, l+1)`.
pub fn vl2_closed_form(n: usize, l: usize) -> BigInt {
    let (n, l) = (n as i64, l as i64);
    exact(Scalar::new(BigInt::from(l * l + 2 * l * n - 2 * n - 1) * binom(l + 2 * n - 2, l + 1), BigInt::from(2)))
}

/// Result of one identity at one rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub id: String,
    pub n: usize,
    pub l: Option<usize>,
    #[serde(serialize_with = "as_string")]
    pub lhs_dim: BigInt,
    pub rhs_dims: Vec<(String, String)>,
    pub equal: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A cataloged identity. `min_n` is where both sides are meant to agree.
pub struct Identity {
    pub id: &'static str,
    pub min_n: usize,
    /// Whether the identity carries the parameter `l`.
    pub parametric: bool,
    eval: Evaluator,
}

/// `(n, l)` to the left side and the named right-hand terms.
type Evaluator = fn(usize, usize) -> (BigInt, Vec<(String, BigInt)>);

fn named(parts: &[(&str, BigInt)]) -> Vec<(String, BigInt)> {
    parts.iter().map(|(s, d)| (s.to_string(), d.clone())).collect()
}

fn eh(n: usize) -> BigInt {
    BigInt::from(4 * n)
}

pub const CATALOG: &[Identity] = &[
    Identity {
        id: "S2E⊗E",
        min_n: 1,
        parametric: false,
        eval: |n, _| (dim(n, &[2], 0) * dim(n, &[1], 0), named(&[("S3E", dim(n, &[3], 0)), ("E", dim(n, &[1], 0)), ("V21", dim(n, &[2, 1], 0))])),
    },
    Identity {
        id: "Λ2E⊗E",
        min_n: 2,
        parametric: false,
        eval: |n, _| {
            (dim(n, &[1, 1], 0) * dim(n, &[1], 0), named(&[("Λ3E", dim(n, &[1, 1, 1], 0)), ("E", dim(n, &[1], 0)), ("V21", dim(n, &[2, 1], 0))]))
        },
    },
    Identity {
        id: "Λ3(EH)",
        min_n: 1,
        parametric: false,
        eval: |n, _| {
            let lhs = binom(4 * n as i64, 3);
            let rhs = if n == 1 {
                named(&[("EH", eh(1))])
            } else {
                named(&[
                    ("Λ3E S3H", dim(n, &[1, 1, 1], 3)),
                    ("V21 H", dim(n, &[2, 1], 1)),
                    ("E S3H", dim(n, &[1], 3)),
                    ("EH", dim(n, &[1], 1)),
                ])
            };
            (lhs, rhs)
        },
    },
    Identity {
        id: "Λ2E⊗S2E",
        min_n: 2,
        parametric: false,
        eval: |n, _| {
            (
                dim(n, &[1, 1], 0) * dim(n, &[2], 0),
                named(&[
                    ("V31", dim(n, &[3, 1], 0)),
                    ("V211", dim(n, &[2, 1, 1], 0)),
                    ("Λ2E", dim(n, &[1, 1], 0)),
                    ("S2E", dim(n, &[2], 0)),
                ]),
            )
        },
    },
    Identity {
        id: "S2E⊗S2E",
        min_n: 1,
        parametric: false,
        eval: |n, _| {
            (
                dim(n, &[2], 0) * dim(n, &[2], 0),
                named(&[
                    ("S4E", dim(n, &[4], 0)),
                    ("V31", dim(n, &[3, 1], 0)),
                    ("V22", dim(n, &[2, 2], 0)),
                    ("S2E", dim(n, &[2], 0)),
                    ("Λ2E", dim(n, &[1, 1], 0)),
                    ("R", dim(n, &[], 0)),
                ]),
            )
        },
    },
    Identity { id: "V211 closed form", min_n: 2, parametric: false, eval: |n, _| (dim(n, &[2, 1, 1], 0), named(&[("formula", v211_closed_form(n))])) },
    Identity { id: "V_{l,1} closed form", min_n: 1, parametric: true, eval: |n, l| (dim(n, &[l, 1], 0), named(&[("formula", vl1_closed_form(n, l))])) },
    Identity { id: "V_{l,2} closed form", min_n: 1, parametric: true, eval: |n, l| (if l < 2 { BigInt::zero() } else { dim(n, &[l, 2], 0) }, named(&[("formula", vl2_closed_form(n, l))])) },
];

pub fn find_identity(id: &str) -> Result<&'static Identity, RepError> {
    CATALOG.iter().find(|i| i.id == id).ok_or_else(|| RepError::UnknownIdentity(id.to_string()))
}

pub fn identity_check(id: &str, n: usize, l: Option<usize>) -> Result<IdentityCheck, RepError> {
    let ident = find_identity(id)?;
    if n < ident.min_n {
        return Err(RepError::OutOfDomain { id: id.to_string(), min_n: ident.min_n });
    }
    let l = if ident.parametric { Some(l.unwrap_or(1)) } else { None };
    let (lhs, rhs) = (ident.eval)(n, l.unwrap_or(0));
    let total: BigInt = rhs.iter().map(|(_, d)| d).sum();
    Ok(IdentityCheck {
        id: id.to_string(),
        n,
        l,
        equal: total == lhs,
        lhs_dim: lhs,
        rhs_dims: rhs.into_iter().map(|(s, d)| (s, d.to_string())).collect(),
    })
}

/// Every cataloged identity for `1 ≤ n ≤ max_n` inside its domain, and
/// `1 ≤ l ≤ 5` for parametric ones.
pub fn check_catalog(max_n: usize) -> Vec<IdentityCheck> {
    CATALOG
        .iter()
        .flat_map(|ident| {
            let ls: Vec<Option<usize>> = if ident.parametric { (1..=5).map(Some).collect() } else { vec![None] };
            (ident.min_n.max(1)..=max_n)
                .flat_map(move |n| ls.clone().into_iter().map(move |l| identity_check(ident.id, n, l).expect("in domain")))
        })
        .collect()
}

/// One row of [`module_ledger`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub name: String,
    pub decomposition: String,
    #[serde(serialize_with = "as_string")]
    pub rep_dim: BigInt,
    pub rank: usize,
}

impl LedgerRow {
    pub fn agrees(&self) -> bool {
        self.rep_dim.to_usize() == Some(self.rank)
    }
}

fn sum(n: usize, parts: &[(usize, &[usize], usize)]) -> BigInt {
    parts.iter().map(|&(m, l, s)| dim(n, l, s) * m).sum()
}

/// Representation-theoretic dimensions of the torsion and curvature modules
/// next to ranks computed from the linear algebra at rank `n`.
pub fn module_ledger(n: usize) -> Vec<LedgerRow> {
    let spaces = ModelSpaces::get(n);
    let vd = v_dim(n);
    let big_n = t_dim(n);
    let total = big_n * big_n * (big_n - 1) / 2;
    let ts = spaces.torsion_spaces();
    let rank_k = spaces.partial_k().rank();
    let rank_q = partial_map(&spaces.q).rank();
    let l2vw = 3 * vd * (vd - 1) / 2;
    let w1 = ts.w1_image.dim();
    let w2 = ts.w2_image.dim();
    let cm = spaces.curvature_modules();
    let trace_free = |g: usize| {
        let r = &cm.modules[g];
        r.dim() - rank_of(r.basis().iter().map(|x| trace_form(x).into_terms()).collect::<Vec<_>>().iter())
    };
    let big = n > 1;
    let rows = vec![
        ("ker ∂_K", "S2H", dim(n, &[], 2), spaces.partial_k().domain.len() - rank_k),
        ("coker ∂_Q", "Λ2V*⊗W", BigInt::from(l2vw), total - rank_q),
        (
            "ker ∂_B",
            "S2W*⊗V + S2H(S2E+R)",
            BigInt::from(6 * vd) + sum(n, &[(1, &[2], 2), (1, &[], 2)]),
            ts.ker_partial_b,
        ),
        (
            "W1",
            if big { "(V21+Λ3E+2E)(S3H+H)" } else { "ES3H+EH" },
            if big {
                sum(n, &[(1, &[2, 1], 3), (1, &[2, 1], 1), (1, &[1, 1, 1], 3), (1, &[1, 1, 1], 1), (2, &[1], 3), (2, &[1], 1)])
            } else {
                sum(n, &[(1, &[1], 3), (1, &[1], 1)])
            },
            w1,
        ),
        ("W2", "ES3H+ES5H", sum(n, &[(1, &[1], 3), (1, &[1], 5)]), w2),
        (
            "W3",
            if big { "S4H(S2E+Λ2E+R)+S2HΛ2E+S2H" } else { "S4H(S2E+R)+S2H" },
            sum(n, &[(1, &[2], 4), (1, &[1, 1], 4), (1, &[], 4), (1, &[1, 1], 2), (1, &[], 2)]),
            total - rank_k - l2vw - w1 - w2,
        ),
        (
            "four-way split",
            "im ∂_B ⊕ Λ2V*⊗W ⊕ ∂1(W1) ⊕ ∂2(W2)",
            BigInt::from(total),
            ts.im_partial_b.dim() + ts.lambda2v_w.dim() + w1 + w2,
        ),
        (
            "R1",
            "S4E+(S2E+Λ2E+R)(S2H+R)",
            sum(n, &[(1, &[4], 0), (1, &[2], 2), (1, &[2], 0), (1, &[1, 1], 2), (1, &[1, 1], 0), (1, &[], 2), (1, &[], 0)]),
            cm.modules[0].dim(),
        ),
        ("R2", "S3EH+2ES3H+2EH", sum(n, &[(1, &[3], 1), (2, &[1], 3), (2, &[1], 1)]), cm.modules[1].dim()),
        ("R3", "S2ES2H+S4H+S2H+R", sum(n, &[(1, &[2], 2), (1, &[], 4), (1, &[], 2), (1, &[], 0)]), cm.modules[2].dim()),
        ("R4", "ES3H", dim(n, &[1], 3), cm.modules[3].dim()),
        ("R1~", "S4E+S2ES2H+Λ2E+R", sum(n, &[(1, &[4], 0), (1, &[2], 2), (1, &[1, 1], 0), (1, &[], 0)]), trace_free(0)),
        ("R2~", "S3EH+ES3H+EH", sum(n, &[(1, &[3], 1), (1, &[1], 3), (1, &[1], 1)]), trace_free(1)),
        ("R3~", "S2ES2H+S4H+R", sum(n, &[(1, &[2], 2), (1, &[], 4), (1, &[], 0)]), trace_free(2)),
    ];
    rows.into_iter()
        .map(|(name, dec, rep_dim, rank)| LedgerRow { name: name.into(), decomposition: dec.into(), rep_dim, rank })
        .collect()
}

/// [`module_ledger`], failing on the first disagreement.
pub fn checked_module_ledger(n: usize) -> Result<Vec<LedgerRow>, RepError> {
    let rows = module_ledger(n);
    match rows.iter().find(|r| !r.agrees()) {
        Some(r) => Err(RepError::LedgerMismatch { name: r.name.clone(), rep: r.rep_dim.clone(), rank: r.rank }),
        None => Ok(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_weights() {
        assert_eq!(dim(3, &[2, 1, 1], 0), BigInt::from(70));
        assert_eq!(dim(2, &[2, 2], 0), BigInt::from(14));
        assert_eq!(dim(4, &[], 0), BigInt::from(1));
        assert_eq!(dim(1, &[1, 1], 0), BigInt::zero());
        // Λ²₀E = Λ²E minus the symplectic form
        assert_eq!(dim(3, &[1, 1], 0), BigInt::from(15 - 1));
        assert_eq!(dim(2, &[1], 3), BigInt::from(16));
    }

    #[test]
    fn rejects_increasing_weights() {
        assert!(HighestWeight::new(2, &[1, 2]).is_err());
    }

    #[test]
    fn n1_fails_outside_domain() {
        // both sides differ at n = 1, which is why the catalog starts at 2
        let (l, r) = (CATALOG[1].eval)(1, 0);
        assert_ne!(l, r.iter().map(|(_, d)| d).sum::<BigInt>());
        assert_eq!(v211_closed_form(1), BigInt::from(-3));
    }

    #[test]
    fn s2e_squared_at_two() {
        let c = identity_check("S2E⊗S2E", 2, None).unwrap();
        assert_eq!(c.lhs_dim, BigInt::from(100));
        let dims: Vec<&str> = c.rhs_dims.iter().map(|(_, d)| d.as_str()).collect();
        assert_eq!(dims, ["35", "35", "14", "10", "5", "1"]);
    }
}
