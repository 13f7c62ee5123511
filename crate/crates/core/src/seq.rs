//! Truncated sequence spaces `prod_{k<N} b(k)`, threshold dominance, the
//! weight recursion `eta` and the strictly increasing map `phi`.
//!
//! Coordinate 0 of the index-bounded space gets bound 1 (forced value 0),
//! so `b(k) = max(k, 1)` throughout. "For all but finitely many `j`" is
//! modelled as "for all `j >= m`" with the threshold `m` passed explicitly.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("bound at coordinate {0} is zero")]
    EmptyBound(usize),
    #[error("{vals} values for {bounds} bounds")]
    Length { bounds: usize, vals: usize },
    #[error("value {val} at coordinate {k} is not below its bound {bound}")]
    OutOfBounds { k: usize, val: BigUint, bound: BigUint },
    #[error("profile mismatch: {0}")]
    Profile(String),
}

/// Per-coordinate bounds of a truncated product space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundProfile {
    #[serde(with = "crate::bignum::many")]
    bounds: Vec<BigUint>,
}

impl BoundProfile {
    pub fn new(bounds: Vec<BigUint>) -> Result<Self, SeqError> {
        if let Some(k) = bounds.iter().position(Zero::is_zero) {
            return Err(SeqError::EmptyBound(k));
        }
        Ok(BoundProfile { bounds })
    }

    /// `b(k) = max(k, 1)` for `k < n`.
    pub fn index_bounded(n: usize) -> Self {
        BoundProfile {
            bounds: (0..n).map(|k| BigUint::from(k.max(1))).collect(),
        }
    }

    /// `b(k) = eta(k)` for `k < n`.
    pub fn eta_bounded(n: usize) -> Self {
        BoundProfile {
            bounds: EtaTable::up_to(n).vals[..n].to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bound(&self, k: usize) -> &BigUint {
        &self.bounds[k]
    }

    pub fn bounds(&self) -> &[BigUint] {
        &self.bounds
    }

    pub fn is_index_bounded(&self) -> bool {
        *self == Self::index_bounded(self.len())
    }

    /// Number of functions in the space.
    pub fn cardinality(&self) -> BigUint {
        self.bounds.iter().product()
    }
}

/// An element of a truncated product space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeqFunRepr", into = "SeqFunRepr")]
pub struct SeqFun {
    profile: BoundProfile,
    vals: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct SeqFunRepr {
    bounds: BoundProfile,
    #[serde(with = "crate::bignum::many")]
    vals: Vec<BigUint>,
}

impl TryFrom<SeqFunRepr> for SeqFun {
    type Error = SeqError;
    fn try_from(r: SeqFunRepr) -> Result<Self, SeqError> {
        SeqFun::new(r.bounds, r.vals)
    }
}

impl From<SeqFun> for SeqFunRepr {
    fn from(f: SeqFun) -> Self {
        SeqFunRepr {
            bounds: f.profile,
            vals: f.vals,
        }
    }
}

impl SeqFun {
    pub fn new(profile: BoundProfile, vals: Vec<BigUint>) -> Result<Self, SeqError> {
        if vals.len() != profile.len() {
            return Err(SeqError::Length {
                bounds: profile.len(),
                vals: vals.len(),
            });
        }
        for (k, v) in vals.iter().enumerate() {
            if v >= profile.bound(k) {
                return Err(SeqError::OutOfBounds {
                    k,
                    val: v.clone(),
                    bound: profile.bound(k).clone(),
                });
            }
        }
        Ok(SeqFun { profile, vals })
    }

    /// A function in the index-bounded space `prod_k max(k, 1)`.
    pub fn index_bounded(vals: &[u64]) -> Result<Self, SeqError> {
        Self::new(
            BoundProfile::index_bounded(vals.len()),
            vals.iter().map(|&v| BigUint::from(v)).collect(),
        )
    }

    pub fn zero(profile: BoundProfile) -> Self {
        let vals = vec![BigUint::zero(); profile.len()];
        SeqFun { profile, vals }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn get(&self, k: usize) -> &BigUint {
        &self.vals[k]
    }

    pub fn vals(&self) -> &[BigUint] {
        &self.vals
    }

    pub fn profile(&self) -> &BoundProfile {
        &self.profile
    }
}

/// Values of `eta(0..=n)` computed by the defining recursion
/// `eta(0) = 1`, `eta(n+1) = sum_{j<=n} j*eta(j) + 1`.
#[derive(Clone, Debug)]
pub struct EtaTable {
    vals: Vec<BigUint>,
    // weighted[n] = sum_{j<n} j * eta(j)
    weighted: Vec<BigUint>,
}

impl EtaTable {
    pub fn up_to(n: usize) -> Self {
        let mut vals = vec![BigUint::one()];
        let mut weighted = vec![BigUint::zero()];
        for j in 0..n {
            let next_weighted = &weighted[j] + BigUint::from(j) * &vals[j];
            vals.push(&next_weighted + 1u32);
            weighted.push(next_weighted);
        }
        EtaTable { vals, weighted }
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.vals[n]
    }

    /// `sum_{j<n} j * eta(j)`.
    pub fn weighted_sum_below(&self, n: usize) -> &BigUint {
        &self.weighted[n]
    }

    pub fn max_index(&self) -> usize {
        self.vals.len() - 1
    }
}

pub fn eta(n: usize) -> BigUint {
    EtaTable::up_to(n).vals.swap_remove(n)
}

/// `(m + 1) * eta(n) > sum_{j<n} j*eta(j) + m * eta(n)`, for `n >= 1`.
pub fn salient_check(m: &BigUint, n: usize) -> bool {
    salient_check_with(&EtaTable::up_to(n), m, n)
}

pub fn salient_check_with(table: &EtaTable, m: &BigUint, n: usize) -> bool {
    let e = table.get(n);
    (m + 1u32) * e > table.weighted_sum_below(n) + m * e
}

/// `phi(f)(0) = 0`, `phi(f)(n+1) = sum_{j<=n} f(j) * eta(j)`. The input must
/// live in the index-bounded space of length `N`; the output lives in the
/// `eta`-bounded space of length `N + 1`.
pub fn phi(f: &SeqFun) -> Result<SeqFun, SeqError> {
    if !f.profile().is_index_bounded() {
        return Err(SeqError::Profile(
            "phi takes functions bounded by max(k, 1)".into(),
        ));
    }
    let n = f.len();
    let table = EtaTable::up_to(n);
    let mut vals = Vec::with_capacity(n + 1);
    let mut acc = BigUint::zero();
    vals.push(acc.clone());
    for j in 0..n {
        acc += f.get(j) * table.get(j);
        vals.push(acc.clone());
    }
    SeqFun::new(
        BoundProfile {
            bounds: table.vals[..=n].to_vec(),
        },
        vals,
    )
}

fn same_profile(f: &SeqFun, g: &SeqFun) -> Result<(), SeqError> {
    if f.profile() != g.profile() {
        return Err(SeqError::Profile(format!(
            "lengths {} and {} or bounds differ",
            f.len(),
            g.len()
        )));
    }
    Ok(())
}

/// `f(j) <= g(j)` for every `m <= j < N`.
pub fn leq_from(f: &SeqFun, g: &SeqFun, m: usize) -> Result<bool, SeqError> {
    same_profile(f, g)?;
    Ok((m..f.len()).all(|j| f.get(j) <= g.get(j)))
}

/// `f(j) < g(j)` for every `m <= j < N`.
pub fn lt_from(f: &SeqFun, g: &SeqFun, m: usize) -> Result<bool, SeqError> {
    same_profile(f, g)?;
    Ok((m..f.len()).all(|j| f.get(j) < g.get(j)))
}

/// Every function of the given profile, in lexicographic order. Intended for
/// small spaces.
pub fn enumerate_space(profile: &BoundProfile) -> Vec<SeqFun> {
    let mut out = vec![Vec::<BigUint>::new()];
    for b in profile.bounds() {
        let mut next = Vec::new();
        for prefix in &out {
            let mut v = BigUint::zero();
            while &v < b {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
                v += 1u32;
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|vals| SeqFun {
            profile: profile.clone(),
            vals,
        })
        .collect()
}
