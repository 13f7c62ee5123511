//! Composing a generic embedding with `phi` and per-coordinate chains.
//!
//! `Xi(a)(j)` is the `phi(Y(a))(j)`-th element of the chain at coordinate
//! `j`, which must have at least `eta(j)` elements.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{default_schedule, generic_build, verify_generic, ForcingError, GenericEmbedding, GenericReport};
use crate::order::Poset;
use crate::product::{is_op_chain, precedes, FiniteStructure, Formula, StructureJson};
use crate::seq::{phi, EtaTable, SeqFun};

/// The chain used at one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainSpec {
    /// `(η(j), <)` given implicitly: the `i`-th element is `i`.
    Linear,
    /// A chain of tuples for `formula` inside `structure`.
    Explicit {
        structure: FiniteStructure,
        formula: Formula,
        chain: Vec<Vec<usize>>,
    },
}

/// A chain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Xi {
    Index(BigUint),
    Tuple(Vec<usize>),
}

impl Serialize for Xi {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Xi::Index(i) => crate::bignum::to_json(i).serialize(s),
            Xi::Tuple(t) => t.serialize(s),
        }
    }
}

impl ChainSpec {
    fn check(&self, coord: usize, need: &BigUint) -> Result<(), ForcingError> {
        if let ChainSpec::Explicit { structure, formula, chain } = self {
            let ok = is_op_chain(structure, formula, chain).map_err(|err| ForcingError::Chain {
                coord,
                msg: err.to_string(),
            })?;
            if !ok {
                return Err(ForcingError::Chain {
                    coord,
                    msg: "the listed tuples do not form a chain".into(),
                });
            }
            if BigUint::from(chain.len()) < *need {
                return Err(ForcingError::ChainTooShort {
                    coord,
                    len: chain.len().to_string(),
                    need: need.to_string(),
                });
            }
        }
        Ok(())
    }

    fn element(&self, i: &BigUint) -> Xi {
        match self {
            ChainSpec::Linear => Xi::Index(i.clone()),
            ChainSpec::Explicit { chain, .. } => {
                Xi::Tuple(chain[i.to_usize().expect("index below chain length")].clone())
            }
        }
    }

    fn precedes(&self, x: &Xi, y: &Xi) -> bool {
        match (self, x, y) {
            (ChainSpec::Linear, Xi::Index(a), Xi::Index(b)) => a < b,
            (ChainSpec::Explicit { structure, formula, .. }, Xi::Tuple(a), Xi::Tuple(b)) => {
                precedes(structure, formula, a, b).expect("chain was validated")
            }
            _ => unreachable!("element kinds match their chain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorJson {
    Linear,
    Explicit {
        structure: StructureJson,
        formula: Formula,
        chain: Vec<Vec<usize>>,
    },
}

/// `{"factors":[{"kind":"linear"} | {"kind":"explicit",...}], "rest":"linear"}`.
/// Coordinates past the listed factors use `rest`; without it they are
/// missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ChainsJson {
    #[serde(default)]
    pub factors: Vec<FactorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rest: Option<String>,
}

impl ChainsJson {
    pub fn all_linear() -> Self {
        ChainsJson {
            factors: vec![],
            rest: Some("linear".into()),
        }
    }

    /// Chain specs for coordinates `0..count`.
    pub fn resolve(&self, count: usize) -> Result<Vec<ChainSpec>, ForcingError> {
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let spec = match self.factors.get(j) {
                Some(FactorJson::Linear) => ChainSpec::Linear,
                Some(FactorJson::Explicit { structure, formula, chain }) => ChainSpec::Explicit {
                    structure: FiniteStructure::try_from(structure).map_err(|err| ForcingError::Chain {
                        coord: j,
                        msg: err.to_string(),
                    })?,
                    formula: formula.clone(),
                    chain: chain.clone(),
                },
                None => match self.rest.as_deref() {
                    Some("linear") => ChainSpec::Linear,
                    Some(other) => {
                        return Err(ForcingError::Chain {
                            coord: j,
                            msg: format!("unknown rest kind {other:?}"),
                        })
                    }
                    None => {
                        return Err(ForcingError::ChainTooShort {
                            coord: j,
                            len: "0 (no factor given)".into(),
                            need: "a chain".into(),
                        })
                    }
                },
            };
            out.push(spec);
        }
        Ok(out)
    }
}

/// Certificate for an unordered pair `{a, b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub a: usize,
    pub b: usize,
    /// "lt", "gt" or "incomparable" for `a` against `b` in `E`
    pub relation: &'static str,
    pub threshold: usize,
    /// `Xi(a)(j) ≺ Xi(b)(j)` and not the reverse for every `j >= threshold`
    pub forward_beyond: bool,
    /// the same with `a` and `b` swapped
    pub backward_beyond: bool,
    /// a coordinate `>= threshold` refuting each direction that fails
    pub forward_refuted_at: Option<usize>,
    pub backward_refuted_at: Option<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub requested: usize,
    pub depth: usize,
    pub generic: GenericReport,
    pub xi: BTreeMap<String, Vec<Xi>>,
    pub pairs: Vec<PairCertificate>,
    pub ok: bool,
}

/// First coordinate in `from..len` where `x ≺ y` fails (with asymmetry).
fn refute(chains: &[ChainSpec], xa: &[Xi], xb: &[Xi], from: usize) -> Option<usize> {
    (from..xa.len()).find(|&j| !(chains[j].precedes(&xa[j], &xb[j]) && !chains[j].precedes(&xb[j], &xa[j])))
}

/// Builds the generic embedding of `elements` at depth `depth`, maps it
/// through `phi` and the chains, and certifies every pair.
pub fn pipeline_embed(
    e: &Poset,
    elements: &[usize],
    depth: usize,
    chains: &ChainsJson,
) -> Result<PipelineReport, ForcingError> {
    let g = generic_build(e, elements, depth, &default_schedule(e, elements, depth))?;
    pipeline_from_generic(e, &g, chains)
}

pub fn pipeline_from_generic(
    e: &Poset,
    g: &GenericEmbedding,
    chains: &ChainsJson,
) -> Result<PipelineReport, ForcingError> {
    let len = g.depth + 1;
    let specs = chains.resolve(len)?;
    let eta = EtaTable::up_to(len);
    for (j, c) in specs.iter().enumerate() {
        c.check(j, eta.get(j))?;
    }
    let mut xi: BTreeMap<usize, Vec<Xi>> = BTreeMap::new();
    for (&a, ya) in &g.y {
        let f = SeqFun::index_bounded(ya).map_err(|err| ForcingError::Invalid(err.to_string()))?;
        let p = phi(&f).map_err(|err| ForcingError::Invalid(err.to_string()))?;
        xi.insert(a, (0..len).map(|j| specs[j].element(p.get(j))).collect());
    }
    let generic = verify_generic(e, g, g.requested);
    let mut pairs = Vec::new();
    let els = g.elements();
    for (i, &a) in els.iter().enumerate() {
        for &b in &els[i + 1..] {
            let m = g.threshold(a, b).max(1);
            let (relation, threshold) = if e.lt(a, b) {
                ("lt", g.strict_from(a, b, m).map_or(len, |k| k + 1))
            } else if e.lt(b, a) {
                ("gt", g.strict_from(b, a, m).map_or(len, |k| k + 1))
            } else {
                ("incomparable", m + 1)
            };
            let fr = refute(&specs, &xi[&a], &xi[&b], threshold);
            let br = refute(&specs, &xi[&b], &xi[&a], threshold);
            let ok = fr.is_none() == e.lt(a, b) && br.is_none() == e.lt(b, a);
            pairs.push(PairCertificate {
                a,
                b,
                relation,
                threshold,
                forward_beyond: fr.is_none(),
                backward_beyond: br.is_none(),
                forward_refuted_at: fr,
                backward_refuted_at: br,
                ok,
            });
        }
    }
    let ok = generic.ok && pairs.iter().all(|p| p.ok);
    Ok(PipelineReport {
        requested: g.requested,
        depth: g.depth,
        generic,
        xi: xi.into_iter().map(|(a, v)| (a.to_string(), v)).collect(),
        pairs,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_certifies() {
        let e = Poset::chain(2);
        let r = pipeline_embed(&e, &[0, 1], 5, &ChainsJson::all_linear()).unwrap();
        assert!(r.ok, "{r:?}");
        let p = &r.pairs[0];
        assert_eq!(p.relation, "lt");
        assert!(p.threshold <= r.depth);
        assert!(p.forward_beyond && !p.backward_beyond);
    }

    #[test]
    fn antichain_refutes_both_directions() {
        let e = Poset::antichain(3);
        let r = pipeline_embed(&e, &[0, 1, 2], 4, &ChainsJson::all_linear()).unwrap();
        assert!(r.ok);
        for p in &r.pairs {
            assert!(p.forward_refuted_at.is_some() && p.backward_refuted_at.is_some());
        }
    }

    #[test]
    fn depth_one_still_certifies() {
        let e = Poset::chain(2);
        let r = pipeline_embed(&e, &[0, 1], 1, &ChainsJson::all_linear()).unwrap();
        assert!(r.ok);
    }

    #[test]
    fn explicit_chains_must_be_long_enough() {
        let lt: Formula = "(< x0 y0)".parse().unwrap();
        let short = FactorJson::Explicit {
            structure: StructureJson::from(&FiniteStructure::linear_order(1)),
            formula: lt.clone(),
            chain: vec![vec![0]],
        };
        let chains = ChainsJson {
            factors: vec![short.clone(), short.clone(), short],
            rest: Some("linear".into()),
        };
        let err = pipeline_embed(&Poset::chain(2), &[0, 1], 2, &chains).unwrap_err();
        assert!(matches!(err, ForcingError::ChainTooShort { coord: 2, .. }));
        let missing = ChainsJson::default();
        assert!(matches!(
            pipeline_embed(&Poset::chain(2), &[0, 1], 2, &missing),
            Err(ForcingError::ChainTooShort { coord: 0, .. })
        ));
    }

    #[test]
    fn explicit_low_coordinates() {
        let lt: Formula = "(< x0 y0)".parse().unwrap();
        let eta = EtaTable::up_to(5);
        let factors = (0..5)
            .map(|j| {
                let n = eta.get(j).to_usize().unwrap();
                FactorJson::Explicit {
                    structure: StructureJson::from(&FiniteStructure::linear_order(n)),
                    formula: lt.clone(),
                    chain: (0..n).map(|i| vec![i]).collect(),
                }
            })
            .collect();
        let chains = ChainsJson { factors, rest: Some("linear".into()) };
        let r = pipeline_embed(&Poset::chain(3), &[0, 1, 2], 3, &chains).unwrap();
        assert!(r.ok);
    }
}
