//! General finite relational structures and their JSON interchange format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::MAX_DOMAIN;

/// One relation symbol of a finite signature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// A finite structure over a finite relational signature. `order_index`, when
/// set, designates a relation that must be a strict total order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationalStructure {
    n: usize,
    signature: Vec<Relation>,
    relations: Vec<BTreeSet<Vec<usize>>>,
    order_index: Option<usize>,
}

impl RelationalStructure {
    pub fn new(
        n: usize,
        signature: Vec<Relation>,
        relations: Vec<BTreeSet<Vec<usize>>>,
        order_index: Option<usize>,
    ) -> Result<Self> {
        if n > MAX_DOMAIN {
            return Err(Error::BoundExceeded {
                what: "structure domain",
                got: n,
                limit: MAX_DOMAIN,
            });
        }
        if signature.len() != relations.len() {
            return Err(Error::InvalidStructure(format!(
                "signature lists {} relations but {} were given",
                signature.len(),
                relations.len()
            )));
        }
        let mut names = BTreeSet::new();
        for rel in &signature {
            if !names.insert(rel.name.clone()) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate relation name {:?}",
                    rel.name
                )));
            }
        }
        for (rel, tuples) in signature.iter().zip(&relations) {
            for t in tuples {
                if t.len() != rel.arity {
                    return Err(Error::InvalidStructure(format!(
                        "tuple {t:?} does not match arity {} of {:?}",
                        rel.arity, rel.name
                    )));
                }
                for &e in t {
                    if e >= n {
                        return Err(Error::OutOfRange { element: e, n });
                    }
                }
            }
        }
        if let Some(i) = order_index {
            if i >= signature.len() {
                return Err(Error::InvalidStructure(format!(
                    "order index {i} out of signature range"
                )));
            }
            if signature[i].arity != 2 {
                return Err(Error::InvalidStructure(
                    "designated order must be binary".into(),
                ));
            }
        }
        let s = RelationalStructure {
            n,
            signature,
            relations,
            order_index,
        };
        if let Some(i) = s.order_index {
            s.validate_strict_total_order(i)?;
        }
        Ok(s)
    }

    fn validate_strict_total_order(&self, i: usize) -> Result<()> {
        let has = |a: usize, b: usize| self.relations[i].contains(&vec![a, b]);
        for a in 0..self.n {
            if has(a, a) {
                return Err(Error::InvalidStructure(format!(
                    "designated order is not irreflexive at {a}"
                )));
            }
            for b in 0..self.n {
                if a != b && !has(a, b) && !has(b, a) {
                    return Err(Error::InvalidStructure(format!(
                        "designated order is not total at ({a},{b})"
                    )));
                }
                for c in 0..self.n {
                    if has(a, b) && has(b, c) && !has(a, c) {
                        return Err(Error::InvalidStructure(format!(
                            "designated order is not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> &[Relation] {
        &self.signature
    }

    pub fn relation(&self, i: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[i]
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.relations
    }

    pub fn order_index(&self) -> Option<usize> {
        self.order_index
    }

    pub fn has(&self, i: usize, tuple: &[usize]) -> bool {
        self.relations[i].contains(tuple)
    }

    /// Same relation names, arities, and order designation.
    pub fn same_signature(&self, other: &RelationalStructure) -> bool {
        self.signature == other.signature && self.order_index == other.order_index
    }

    /// Position of each element in the designated order, when one is set.
    pub fn order_ranks(&self) -> Result<Vec<usize>> {
        let i = self.order_index.ok_or(Error::NoDesignatedOrder)?;
        let mut rank = vec![0; self.n];
        for a in 0..self.n {
            rank[a] = (0..self.n)
                .filter(|&b| b != a && self.has(i, &[b, a]))
                .count();
        }
        Ok(rank)
    }

    /// Restriction to `subset`, renumbered order-preservingly by element id.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<RelationalStructure> {
        let mut sub: Vec<usize> = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        for &e in &sub {
            if e >= self.n {
                return Err(Error::OutOfRange { element: e, n: self.n });
            }
        }
        let index_of: BTreeMap<usize, usize> =
            sub.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let relations = self
            .relations
            .iter()
            .map(|tuples| {
                tuples
                    .iter()
                    .filter(|t| t.iter().all(|e| index_of.contains_key(e)))
                    .map(|t| t.iter().map(|e| index_of[e]).collect())
                    .collect()
            })
            .collect();
        RelationalStructure::new(sub.len(), self.signature.clone(), relations, self.order_index)
    }

    /// Applies a domain bijection: element `a` becomes `bijection[a]`.
    pub fn relabel(&self, bijection: &[usize]) -> Result<RelationalStructure> {
        if bijection.len() != self.n {
            return Err(Error::DomainMismatch {
                expected: self.n,
                got: bijection.len(),
            });
        }
        let relations = self
            .relations
            .iter()
            .map(|tuples| {
                tuples
                    .iter()
                    .map(|t| t.iter().map(|&e| bijection[e]).collect())
                    .collect()
            })
            .collect();
        RelationalStructure::new(self.n, self.signature.clone(), relations, self.order_index)
    }

    pub fn to_json(&self) -> String {
        let relations: BTreeMap<String, Vec<Vec<usize>>> = self
            .signature
            .iter()
            .zip(&self.relations)
            .map(|(rel, tuples)| (rel.name.clone(), tuples.iter().cloned().collect()))
            .collect();
        let doc = StructureJson {
            n: self.n,
            signature: self
                .signature
                .iter()
                .map(|r| SigJson {
                    name: r.name.clone(),
                    arity: r.arity,
                })
                .collect(),
            relations,
            order: self.order_index.map(|i| self.signature[i].name.clone()),
        };
        serde_json::to_string_pretty(&doc).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<RelationalStructure> {
        let doc: StructureJson = serde_json::from_str(text)?;
        let signature: Vec<Relation> = doc
            .signature
            .iter()
            .map(|s| Relation {
                name: s.name.clone(),
                arity: s.arity,
            })
            .collect();
        let mut relations = Vec::with_capacity(signature.len());
        for rel in &signature {
            let tuples = doc.relations.get(&rel.name).cloned().unwrap_or_default();
            relations.push(tuples.into_iter().collect::<BTreeSet<_>>());
        }
        for name in doc.relations.keys() {
            if !signature.iter().any(|r| &r.name == name) {
                return Err(Error::InvalidStructure(format!(
                    "relation {name:?} not declared in signature"
                )));
            }
        }
        let order_index = match doc.order {
            None => None,
            Some(name) => Some(
                signature
                    .iter()
                    .position(|r| r.name == name)
                    .ok_or_else(|| {
                        Error::InvalidStructure(format!("order relation {name:?} not in signature"))
                    })?,
            ),
        };
        RelationalStructure::new(doc.n, signature, relations, order_index)
    }
}

#[derive(Serialize, Deserialize)]
struct SigJson {
    name: String,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    n: usize,
    signature: Vec<SigJson>,
    relations: BTreeMap<String, Vec<Vec<usize>>>,
    order: Option<String>,
}
