//! Finite relational substrate shared by every other module: linear orders as
//! rank sequences, posets as reflexive boolean relation matrices, general
//! relational structures with an optional designated total order, embeddings,
//! and canonical forms.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function of its inputs; results that are collections come back in a
//! canonical order.

mod canon;
mod embed;
mod structure;

pub use canon::{are_isomorphic, canonical_form, canonical_relabel, CanonicalCode};
pub use embed::{find_embeddings, is_embedding};
pub use structure::{Relation, RelationalStructure};

use itertools::Itertools;

use crate::error::{Error, Result};

/// Hard ceiling on domain sizes; canonical codes store elements as single bytes.
pub const MAX_DOMAIN: usize = 255;

/// A total order on `{0..n-1}`, stored as the rank (position) of each element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearOrder {
    rank: Vec<usize>,
}

impl LinearOrder {
    /// `rank[a]` is the position of `a`, so `rank` must be a bijection of `{0..n-1}`.
    pub fn new(rank: Vec<usize>) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || seen[r] {
                return Err(Error::InvalidStructure(format!(
                    "rank sequence {rank:?} is not a bijection of 0..{n}"
                )));
            }
            seen[r] = true;
        }
        Ok(LinearOrder { rank })
    }

    /// The natural order `0 < 1 < ... < n-1`.
    pub fn identity(n: usize) -> Self {
        LinearOrder {
            rank: (0..n).collect(),
        }
    }

    /// Builds the order whose elements, listed bottom to top, are `seq`.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &e) in seq.iter().enumerate() {
            if e >= n || rank[e] != usize::MAX {
                return Err(Error::InvalidStructure(format!(
                    "sequence {seq:?} is not a permutation of 0..{n}"
                )));
            }
            rank[e] = pos;
        }
        Ok(LinearOrder { rank })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    pub fn rank_of(&self, a: usize) -> usize {
        self.rank[a]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.rank[a] <= self.rank[b]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Elements listed bottom to top.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (e, &r) in self.rank.iter().enumerate() {
            seq[r] = e;
        }
        seq
    }

    /// Every total order on `{0..n-1}`, sorted lexicographically by sequence.
    /// Intended for brute-force oracles at desk scale.
    pub fn all(n: usize) -> Vec<LinearOrder> {
        if n == 0 {
            return vec![LinearOrder { rank: vec![] }];
        }
        (0..n)
            .permutations(n)
            .map(|seq| LinearOrder::from_sequence(&seq).expect("permutation"))
            .collect()
    }
}

/// A reflexive partial order on `{0..n-1}` as a row-major boolean matrix;
/// `leq[a*n + b]` means `a` is below `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>,
}

impl FinitePoset {
    pub fn new(n: usize, leq: Vec<bool>) -> Result<Self> {
        if leq.len() != n * n {
            return Err(Error::InvalidStructure(format!(
                "relation matrix has {} entries, expected {}",
                leq.len(),
                n * n
            )));
        }
        if n > MAX_DOMAIN {
            return Err(Error::BoundExceeded {
                what: "poset domain",
                got: n,
                limit: MAX_DOMAIN,
            });
        }
        let p = FinitePoset { n, leq };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(Error::InvalidStructure(format!("not reflexive at {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(Error::InvalidStructure(format!(
                        "antisymmetry fails at ({a},{b})"
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(Error::InvalidStructure(format!(
                            "transitivity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                leq[a * n + b] = true;
            }
        }
        FinitePoset { n, leq }
    }

    pub fn antichain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        FinitePoset { n, leq }
    }

    /// Reflexive-transitive closure of the given strict pairs; fails if the
    /// closure is not antisymmetric.
    pub fn from_strict_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::OutOfRange {
                    element: a.max(b),
                    n,
                });
            }
            leq[a * n + b] = true;
        }
        transitive_close(&mut leq, n);
        FinitePoset::new(n, leq)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn matrix(&self) -> &[bool] {
        &self.leq
    }

    /// Number of related pairs including the reflexive ones.
    pub fn relation_pair_count(&self) -> usize {
        self.leq.iter().filter(|&&x| x).count()
    }

    pub fn strict_pair_count(&self) -> usize {
        self.relation_pair_count() - self.n
    }

    pub fn is_chain(&self) -> bool {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// All ordered pairs `(a, b)` with `a` and `b` incomparable, `a != b`.
    pub fn incomparable_ordered_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && !self.leq(a, b) && !self.leq(b, a) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cover pairs `(a, b)`: `a` strictly below `b` with nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            'pair: for b in 0..self.n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                for c in 0..self.n {
                    if c != a && c != b && self.leq(a, c) && self.leq(c, b) {
                        continue 'pair;
                    }
                }
                out.push((a, b));
            }
        }
        out
    }

    /// Restriction to `subset`, renumbered order-preservingly by element id.
    pub fn induced(&self, subset: &[usize]) -> Result<FinitePoset> {
        let mut sub: Vec<usize> = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        for &e in &sub {
            if e >= self.n {
                return Err(Error::OutOfRange { element: e, n: self.n });
            }
        }
        let m = sub.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in sub.iter().enumerate() {
            for (j, &b) in sub.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        Ok(FinitePoset { n: m, leq })
    }

    /// Whether `order` is a linear extension of this poset.
    pub fn extended_by(&self, order: &LinearOrder) -> bool {
        if order.n() != self.n {
            return false;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if self.leq(a, b) && !order.le(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Intersection matrix of a family of linear orders over a common domain.
    pub fn intersection_matrix(orders: &[LinearOrder]) -> Result<Vec<bool>> {
        let n = orders.first().map(|o| o.n()).unwrap_or(0);
        for o in orders {
            if o.n() != n {
                return Err(Error::DomainMismatch {
                    expected: n,
                    got: o.n(),
                });
            }
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = orders.iter().all(|o| o.le(a, b));
            }
        }
        Ok(leq)
    }

    /// The intersection of a nonempty family of linear orders is always a poset.
    pub fn from_order_intersection(orders: &[LinearOrder]) -> Result<FinitePoset> {
        if orders.is_empty() {
            return Err(Error::InvalidStructure(
                "order intersection needs at least one order".into(),
            ));
        }
        let n = orders[0].n();
        let leq = Self::intersection_matrix(orders)?;
        Ok(FinitePoset { n, leq })
    }

    pub fn disjoint_union(&self, other: &FinitePoset) -> FinitePoset {
        let n = self.n + other.n;
        let mut leq = vec![false; n * n];
        for a in 0..self.n {
            for b in 0..self.n {
                leq[a * n + b] = self.leq(a, b);
            }
        }
        for a in 0..other.n {
            for b in 0..other.n {
                leq[(self.n + a) * n + (self.n + b)] = other.leq(a, b);
            }
        }
        FinitePoset { n, leq }
    }

    /// Everything in `self` below everything in `other`.
    pub fn ordinal_sum(&self, other: &FinitePoset) -> FinitePoset {
        let mut sum = self.disjoint_union(other);
        let n = sum.n;
        for a in 0..self.n {
            for b in 0..other.n {
                sum.leq[a * n + (self.n + b)] = true;
            }
        }
        sum
    }

    /// As a relational structure with a single binary relation named `leq`.
    pub fn to_structure(&self) -> RelationalStructure {
        let mut tuples = std::collections::BTreeSet::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.leq(a, b) {
                    tuples.insert(vec![a, b]);
                }
            }
        }
        RelationalStructure::new(
            self.n,
            vec![Relation {
                name: "leq".into(),
                arity: 2,
            }],
            vec![tuples],
            None,
        )
        .expect("poset structure is well-formed")
    }

    /// Reads back a structure with the single binary relation `leq`.
    pub fn from_structure(s: &RelationalStructure) -> Result<FinitePoset> {
        if s.signature().len() != 1
            || s.signature()[0].arity != 2
            || s.signature()[0].name != "leq"
        {
            return Err(Error::UnsupportedSignature);
        }
        let n = s.n();
        let mut leq = vec![false; n * n];
        for t in s.relation(0) {
            leq[t[0] * n + t[1]] = true;
        }
        FinitePoset::new(n, leq)
    }
}

pub(crate) fn transitive_close(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for a in 0..n {
            if !leq[a * n + k] {
                continue;
            }
            for b in 0..n {
                if leq[k * n + b] {
                    leq[a * n + b] = true;
                }
            }
        }
    }
}

/// An injective map from a source domain into a target domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmbeddingMap {
    map: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != map.len() {
            return Err(Error::NotAnEmbedding(format!("map {map:?} is not injective")));
        }
        Ok(EmbeddingMap { map })
    }

    pub fn identity(n: usize) -> Self {
        EmbeddingMap {
            map: (0..n).collect(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self: S -> T` followed by `then: T -> U`.
    pub fn compose(&self, then: &EmbeddingMap) -> Result<EmbeddingMap> {
        let map = self
            .map
            .iter()
            .map(|&t| {
                if t < then.source_size() {
                    Ok(then.apply(t))
                } else {
                    Err(Error::DomainMismatch {
                        expected: then.source_size(),
                        got: t + 1,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        EmbeddingMap::new(map)
    }
}
