//! Staged construction of a generic permutation at finite scale, its poset
//! reduct, ages, and extension witnesses.
//!
//! A stage is a finite set carrying two total orders. The builder grows a
//! stage until every permutation pattern of size up to the requested level
//! embeds into it; one-point extension demands that name a position relative
//! to an already-embedded pattern are always realizable by inserting a fresh
//! point, so growth never dead-ends. The extension level is re-verified from
//! scratch after every insertion. A full one-point extension property over
//! all embeddings cannot hold in any finite stage (the top point of either
//! order has no successor), so certified levels speak about realized
//! patterns; the extender below regains the per-embedding property by
//! growing the stage on demand.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::ClassSpec;
use crate::dimension::two_dim_realizer;
use crate::error::{Error, Result};
use crate::products::{
    alex_order, classify_product_embedding, lex_order, product_poset, EmbeddingClass,
    ProductPoset,
};
use crate::relcore::{
    canonical_form, CanonicalCode, EmbeddingMap, FinitePoset, LinearOrder, Relation,
    RelationalStructure,
};

/// A finite set with two total orders; the finite fragments of a generic
/// permutation are exactly these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationStructure {
    ord1: LinearOrder,
    ord2: LinearOrder,
}

impl PermutationStructure {
    pub fn new(ord1: LinearOrder, ord2: LinearOrder) -> Result<Self> {
        if ord1.n() != ord2.n() {
            return Err(Error::DomainMismatch {
                expected: ord1.n(),
                got: ord2.n(),
            });
        }
        Ok(PermutationStructure { ord1, ord2 })
    }

    pub fn empty() -> Self {
        PermutationStructure {
            ord1: LinearOrder::identity(0),
            ord2: LinearOrder::identity(0),
        }
    }

    pub fn n(&self) -> usize {
        self.ord1.n()
    }

    pub fn ord1(&self) -> &LinearOrder {
        &self.ord1
    }

    pub fn ord2(&self) -> &LinearOrder {
        &self.ord2
    }

    /// Inserts a fresh point at the given positions (`0..=n` each); element
    /// ids of existing points are stable, their ranks shift.
    pub fn insert(&mut self, pos1: usize, pos2: usize) -> usize {
        let n = self.n();
        assert!(pos1 <= n && pos2 <= n, "insert position out of range");
        let bump = |ranks: &[usize], pos: usize| -> Vec<usize> {
            let mut out: Vec<usize> = ranks
                .iter()
                .map(|&r| if r >= pos { r + 1 } else { r })
                .collect();
            out.push(pos);
            out
        };
        self.ord1 = LinearOrder::new(bump(self.ord1.ranks(), pos1)).expect("bumped ranks");
        self.ord2 = LinearOrder::new(bump(self.ord2.ranks(), pos2)).expect("bumped ranks");
        n
    }

    /// The intersection order `a <= b iff a <=_1 b and a <=_2 b`.
    pub fn reduct_to_poset(&self) -> FinitePoset {
        FinitePoset::from_order_intersection(&[self.ord1.clone(), self.ord2.clone()])
            .expect("intersection of total orders is a poset")
    }

    /// As a structure with two strict total orders `lt1`, `lt2`; `lt1` is the
    /// designated order.
    pub fn to_structure(&self) -> RelationalStructure {
        let n = self.n();
        let tuples = |o: &LinearOrder| -> BTreeSet<Vec<usize>> {
            let mut set = BTreeSet::new();
            for a in 0..n {
                for b in 0..n {
                    if a != b && o.le(a, b) {
                        set.insert(vec![a, b]);
                    }
                }
            }
            set
        };
        RelationalStructure::new(
            n,
            vec![
                Relation {
                    name: "lt1".into(),
                    arity: 2,
                },
                Relation {
                    name: "lt2".into(),
                    arity: 2,
                },
            ],
            vec![tuples(&self.ord1), tuples(&self.ord2)],
            Some(0),
        )
        .expect("permutation structure is well-formed")
    }

    pub fn from_structure(s: &RelationalStructure) -> Result<PermutationStructure> {
        let sig = s.signature();
        if sig.len() != 2
            || sig[0].name != "lt1"
            || sig[1].name != "lt2"
            || sig[0].arity != 2
            || sig[1].arity != 2
            || s.order_index() != Some(0)
        {
            return Err(Error::UnsupportedSignature);
        }
        let n = s.n();
        let rank_from = |i: usize| -> Result<LinearOrder> {
            let mut rank = vec![0usize; n];
            for a in 0..n {
                rank[a] = (0..n).filter(|&b| b != a && s.has(i, &[b, a])).count();
            }
            let o = LinearOrder::new(rank)?;
            for a in 0..n {
                for b in 0..n {
                    if a != b && s.has(i, &[a, b]) != (o.le(a, b)) {
                        return Err(Error::InvalidStructure(format!(
                            "relation {} is not a strict total order",
                            s.signature()[i].name
                        )));
                    }
                }
            }
            Ok(o)
        };
        PermutationStructure::new(rank_from(0)?, rank_from(1)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StageJson {
            n: self.n(),
            rank1: self.ord1.ranks().to_vec(),
            rank2: self.ord2.ranks().to_vec(),
        })
        .expect("stage serializes")
    }

    pub fn from_json(text: &str) -> Result<PermutationStructure> {
        let doc: StageJson = serde_json::from_str(text)?;
        if doc.rank1.len() != doc.n || doc.rank2.len() != doc.n {
            return Err(Error::InvalidStructure(
                "rank sequences do not match the declared size".into(),
            ));
        }
        PermutationStructure::new(LinearOrder::new(doc.rank1)?, LinearOrder::new(doc.rank2)?)
    }
}

#[derive(Serialize, Deserialize)]
struct StageJson {
    n: usize,
    rank1: Vec<usize>,
    rank2: Vec<usize>,
}

/// One insertion made by the builder: the pattern it was realizing and the
/// chosen global positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthEvent {
    pub pattern: Vec<usize>,
    pub pos1: usize,
    pub pos2: usize,
}

/// Growth history plus the certified extension level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageLog {
    pub events: Vec<GrowthEvent>,
    pub ep_level: usize,
}

/// Canonical codes of all induced substructures of size 1..=m.
pub fn age_upto(s: &RelationalStructure, m: usize) -> Result<BTreeSet<CanonicalCode>> {
    if m > s.n() {
        return Err(Error::BoundExceeded {
            what: "age size",
            got: m,
            limit: s.n(),
        });
    }
    let mut out = BTreeSet::new();
    for k in 1..=m {
        for subset in (0..s.n()).combinations(k) {
            out.insert(canonical_form(&s.induced_substructure(&subset)?));
        }
    }
    Ok(out)
}

/// Largest `k <= cap` such that every permutation pattern of size at most `k`
/// embeds into the stage. Patterns of a fixed size are in bijection with the
/// isomorphism classes of permutation structures of that size, so counting
/// distinct subset patterns suffices.
pub fn ep_level(stage: &PermutationStructure, cap: usize) -> usize {
    for k in 1..=cap {
        if k > stage.n() {
            return k - 1;
        }
        let present: BTreeSet<Vec<usize>> = (0..stage.n())
            .combinations(k)
            .map(|subset| pattern_of(stage, &subset))
            .collect();
        let all: usize = (1..=k).product();
        if present.len() < all {
            return k - 1;
        }
    }
    cap
}

/// Grows a stage until every permutation pattern of size `<= target_ep` is
/// realized, satisfying one missing one-point extension demand per step, the
/// demands taken in canonical pattern order. The seed picks the global slot
/// within the range each demand leaves free.
pub fn build_generic_permutation(
    target_ep: usize,
    max_points: usize,
    seed: u64,
) -> Result<(PermutationStructure, StageLog)> {
    if target_ep == 0 {
        return Err(Error::InvalidStructure("target level must be at least 1".into()));
    }
    let pattern_bound = ClassSpec::Permutations.enum_bound();
    if target_ep > pattern_bound {
        return Err(Error::BoundExceeded {
            what: "extension level",
            got: target_ep,
            limit: pattern_bound,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stage = PermutationStructure::empty();
    let mut events = Vec::new();
    loop {
        let level = ep_level(&stage, target_ep);
        if level >= target_ep {
            return Ok((stage, StageLog { events, ep_level: level }));
        }
        if stage.n() >= max_points {
            return Err(Error::GrowthExhausted {
                points: stage.n(),
                ep_level: level,
            });
        }
        let pattern = least_missing_pattern(&stage, level + 1);
        let (pos1, pos2) = realize_pattern_demand(&mut stage, &pattern, &mut rng);
        events.push(GrowthEvent { pattern, pos1, pos2 });
    }
}

/// Patterns of size m, as the ord2-rank sequence read along ord1, in
/// lexicographic order; returns the first one absent from the stage.
fn least_missing_pattern(stage: &PermutationStructure, m: usize) -> Vec<usize> {
    let present: BTreeSet<Vec<usize>> = (0..stage.n())
        .combinations(m)
        .map(|subset| pattern_of(stage, &subset))
        .collect();
    for sigma in (0..m).permutations(m) {
        if !present.contains(&sigma) {
            return sigma;
        }
    }
    unreachable!("ep_level reported a missing size-{m} pattern");
}

/// The pattern of a subset: ord2 ranks normalized to 0..k, listed in ord1
/// order.
fn pattern_of(stage: &PermutationStructure, subset: &[usize]) -> Vec<usize> {
    let mut by1: Vec<usize> = subset.to_vec();
    by1.sort_by_key(|&v| stage.ord1().rank_of(v));
    let mut by2: Vec<usize> = subset.to_vec();
    by2.sort_by_key(|&v| stage.ord2().rank_of(v));
    by1.iter()
        .map(|&v| by2.iter().position(|&w| w == v).expect("member"))
        .collect()
}

/// Inserts one point completing `sigma`: embeds the prefix of `sigma` without
/// its ord1-last point (its patterns are all present at this point of the
/// build), then inserts the missing point at a compatible slot.
fn realize_pattern_demand(
    stage: &mut PermutationStructure,
    sigma: &[usize],
    rng: &mut ChaCha8Rng,
) -> (usize, usize) {
    let m = sigma.len();
    let target2 = sigma[m - 1];
    let prefix: Vec<usize> = sigma[..m - 1]
        .iter()
        .map(|&v| v - usize::from(v > target2))
        .collect();
    let image = least_pattern_embedding(stage, &prefix);
    let n = stage.n();
    let lo1 = image
        .iter()
        .map(|&v| stage.ord1().rank_of(v) + 1)
        .max()
        .unwrap_or(0);
    let mut by2 = image.clone();
    by2.sort_by_key(|&v| stage.ord2().rank_of(v));
    let lo2 = if target2 == 0 {
        0
    } else {
        stage.ord2().rank_of(by2[target2 - 1]) + 1
    };
    let hi2 = if target2 == m - 1 {
        n
    } else {
        stage.ord2().rank_of(by2[target2])
    };
    let pos1 = rng.gen_range(lo1..=n);
    let pos2 = rng.gen_range(lo2..=hi2);
    stage.insert(pos1, pos2);
    (pos1, pos2)
}

/// First subset (in combination order) whose pattern is `sigma`.
fn least_pattern_embedding(stage: &PermutationStructure, sigma: &[usize]) -> Vec<usize> {
    if sigma.is_empty() {
        return Vec::new();
    }
    for subset in (0..stage.n()).combinations(sigma.len()) {
        if pattern_of(stage, &subset) == sigma {
            let mut by1 = subset;
            by1.sort_by_key(|&v| stage.ord1().rank_of(v));
            return by1;
        }
    }
    unreachable!("prefix patterns are present before larger ones are demanded");
}

/// The data of one weak-injectivity witness: the pulled-back chain pair, the
/// product over it, the diagonal, and a stage the extender may grow.
pub struct WitnessExtender {
    a: FinitePoset,
    abar: ProductPoset,
    e: EmbeddingMap,
    f: EmbeddingMap,
    stage: PermutationStructure,
    allow_growth: bool,
}

/// Builds the witness for an embedding `f` of a poset `a` into the reduct of
/// `stage`: the two chains on `a` are pulled back through `f`, their product
/// hosts `a` diagonally, and the returned extender completes any further
/// embedding of the product back into (a grown copy of) the stage.
pub fn weak_injectivity_witness(
    a: &FinitePoset,
    f: &EmbeddingMap,
    stage: &PermutationStructure,
    allow_growth: bool,
) -> Result<WitnessExtender> {
    if f.source_size() != a.n() {
        return Err(Error::DomainMismatch {
            expected: a.n(),
            got: f.source_size(),
        });
    }
    for &img in f.as_slice() {
        if img >= stage.n() {
            return Err(Error::OutOfRange {
                element: img,
                n: stage.n(),
            });
        }
    }
    let reduct = stage.reduct_to_poset();
    for x in 0..a.n() {
        for y in 0..a.n() {
            if a.leq(x, y) != reduct.leq(f.apply(x), f.apply(y)) {
                return Err(Error::NotAnEmbedding(format!(
                    "pair ({x},{y}) is not carried into the reduct faithfully"
                )));
            }
        }
    }
    let n = a.n();
    let pull = |ord: &LinearOrder| -> LinearOrder {
        let mut rank = vec![0usize; n];
        for x in 0..n {
            rank[x] = (0..n)
                .filter(|&y| y != x && ord.le(f.apply(y), f.apply(x)))
                .count();
        }
        LinearOrder::new(rank).expect("pullback of a total order is total")
    };
    let ord1a = pull(stage.ord1());
    let ord2a = pull(stage.ord2());
    debug_assert!(
        FinitePoset::from_order_intersection(&[ord1a.clone(), ord2a.clone()])
            .map(|meet| meet == *a)
            .unwrap_or(false),
        "pulled-back chains realize the source poset"
    );
    let abar = product_poset(n.max(1), n.max(1))?;
    let e = if n == 0 {
        EmbeddingMap::new(vec![])?
    } else {
        EmbeddingMap::new(
            (0..n)
                .map(|x| abar.index(ord1a.rank_of(x), ord2a.rank_of(x)))
                .collect(),
        )?
    };
    Ok(WitnessExtender {
        a: a.clone(),
        abar,
        e,
        f: f.clone(),
        stage: stage.clone(),
        allow_growth,
    })
}

impl WitnessExtender {
    /// The product of the pulled-back chains.
    pub fn abar(&self) -> &ProductPoset {
        &self.abar
    }

    /// The diagonal embedding of the source poset into the product.
    pub fn e(&self) -> &EmbeddingMap {
        &self.e
    }

    /// The current (possibly grown) stage; `extend` results map into it.
    pub fn stage(&self) -> &PermutationStructure {
        &self.stage
    }

    /// Given an embedding `g` of the product into a two-dimensional poset
    /// `b`, produces `h: b -> stage` with `h . g . e = f`, growing the stage
    /// if permitted. Picks a realizer of `b`, classifies the induced map
    /// between products to orient it, and then embeds the product permutation
    /// of `b` into the stage with the points over the source pinned to `f`.
    pub fn extend(&mut self, b: &FinitePoset, g: &EmbeddingMap) -> Result<EmbeddingMap> {
        if g.source_size() != self.abar.n() {
            return Err(Error::DomainMismatch {
                expected: self.abar.n(),
                got: g.source_size(),
            });
        }
        for x in 0..self.abar.n() {
            for y in 0..self.abar.n() {
                if self.abar.poset().leq(x, y) != b.leq(g.apply(x), g.apply(y)) {
                    return Err(Error::NotAnEmbedding(format!(
                        "pair ({x},{y}) of the product is not carried faithfully"
                    )));
                }
            }
        }
        let (r1, r2) = two_dim_realizer(b)
            .ok_or_else(|| Error::NotInClass("posets-dim-le(2)".into()))?;
        let nb = b.n();
        let bprod = product_poset(nb, nb)?;
        let ell = EmbeddingMap::new(
            (0..nb)
                .map(|x| bprod.index(r1.rank_of(x), r2.rank_of(x)))
                .collect(),
        )?;
        let ellg = g.compose(&ell)?;
        let tag = classify_product_embedding(&ellg, &self.abar, &bprod)?;
        let (pat1, pat2) = match tag {
            EmbeddingClass::LexToLex => (lex_order(&bprod), alex_order(&bprod)),
            EmbeddingClass::LexToAlex => (alex_order(&bprod), lex_order(&bprod)),
        };
        let mut pins = BTreeMap::new();
        for x in 0..self.a.n() {
            pins.insert(ellg.apply(self.e.apply(x)), self.f.apply(x));
        }
        let k_map = embed_two_order_pattern(
            &mut self.stage,
            &pat1,
            &pat2,
            &pins,
            self.allow_growth,
        )?;
        let h = EmbeddingMap::new((0..nb).map(|x| k_map[ell.apply(x)]).collect())?;
        // postconditions: the witness identity and that h lands in the reduct
        for x in 0..self.a.n() {
            assert_eq!(
                h.apply(g.apply(self.e.apply(x))),
                self.f.apply(x),
                "witness identity h.g.e = f must hold pointwise"
            );
        }
        let reduct = self.stage.reduct_to_poset();
        for x in 0..nb {
            for y in 0..nb {
                assert_eq!(
                    b.leq(x, y),
                    reduct.leq(h.apply(x), h.apply(y)),
                    "h must embed b into the reduct"
                );
            }
        }
        Ok(h)
    }
}

/// Embeds a two-order pattern into the stage with some points pinned.
/// With growth allowed this never fails: each unpinned point either reuses a
/// stage point inside its feasible rectangle or a fresh point is inserted at
/// the low end of that rectangle. Without growth it backtracks over existing
/// points only.
pub(crate) fn embed_two_order_pattern(
    stage: &mut PermutationStructure,
    pat1: &LinearOrder,
    pat2: &LinearOrder,
    pins: &BTreeMap<usize, usize>,
    allow_growth: bool,
) -> Result<Vec<usize>> {
    let npat = pat1.n();
    let mut assignment: Vec<Option<usize>> = vec![None; npat];
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for (&p, &img) in pins {
        if p >= npat {
            return Err(Error::OutOfRange {
                element: p,
                n: npat,
            });
        }
        if img >= stage.n() || !used.insert(img) {
            return Err(Error::NotAnEmbedding(format!(
                "pin {p} -> {img} is out of range or duplicated"
            )));
        }
        assignment[p] = Some(img);
    }
    for (&p, &img) in pins {
        for (&q, &other) in pins {
            if p != q
                && (pat1.le(p, q) != stage.ord1().le(img, other)
                    || pat2.le(p, q) != stage.ord2().le(img, other))
            {
                return Err(Error::NotAnEmbedding(format!(
                    "pins {p},{q} contradict the pattern orders"
                )));
            }
        }
    }
    if allow_growth {
        for p in 0..npat {
            if assignment[p].is_some() {
                continue;
            }
            let (lo1, hi1) = feasible(stage, stage.ord1(), pat1, &assignment, p);
            let (lo2, hi2) = feasible(stage, stage.ord2(), pat2, &assignment, p);
            let existing = (0..stage.n()).find(|&z| {
                !used.contains(&z)
                    && stage.ord1().rank_of(z) >= lo1
                    && stage.ord1().rank_of(z) < hi1
                    && stage.ord2().rank_of(z) >= lo2
                    && stage.ord2().rank_of(z) < hi2
            });
            let img = match existing {
                Some(z) => z,
                None => stage.insert(lo1, lo2),
            };
            used.insert(img);
            assignment[p] = Some(img);
        }
    } else {
        let order: Vec<usize> = (0..npat).filter(|&p| assignment[p].is_none()).collect();
        if !assign_without_growth(stage, pat1, pat2, &order, 0, &mut assignment, &mut used) {
            return Err(Error::GrowthDisabled(format!(
                "a {npat}-point pattern does not embed with the given pins"
            )));
        }
    }
    Ok(assignment.into_iter().map(|v| v.expect("assigned")).collect())
}

/// The feasible rank window `[lo, hi)` for pattern point `p` against the
/// already assigned points; inserting at rank `lo` is always legal.
fn feasible(
    stage: &PermutationStructure,
    ord: &LinearOrder,
    pat: &LinearOrder,
    assignment: &[Option<usize>],
    p: usize,
) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = stage.n();
    for (q, img) in assignment.iter().enumerate() {
        let Some(&img) = img.as_ref() else { continue };
        if q == p {
            continue;
        }
        if pat.le(q, p) {
            lo = lo.max(ord.rank_of(img) + 1);
        } else {
            hi = hi.min(ord.rank_of(img));
        }
    }
    (lo, hi)
}

fn assign_without_growth(
    stage: &PermutationStructure,
    pat1: &LinearOrder,
    pat2: &LinearOrder,
    order: &[usize],
    idx: usize,
    assignment: &mut Vec<Option<usize>>,
    used: &mut BTreeSet<usize>,
) -> bool {
    if idx == order.len() {
        return true;
    }
    let p = order[idx];
    let (lo1, hi1) = feasible(stage, stage.ord1(), pat1, assignment, p);
    let (lo2, hi2) = feasible(stage, stage.ord2(), pat2, assignment, p);
    for z in 0..stage.n() {
        if used.contains(&z) {
            continue;
        }
        let r1 = stage.ord1().rank_of(z);
        let r2 = stage.ord2().rank_of(z);
        if r1 < lo1 || r1 >= hi1 || r2 < lo2 || r2 >= hi2 {
            continue;
        }
        assignment[p] = Some(z);
        used.insert(z);
        if assign_without_growth(stage, pat1, pat2, order, idx + 1, assignment, used) {
            return true;
        }
        assignment[p] = None;
        used.remove(&z);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::enumerate_upto_iso;

    fn stage_from(seq1: &[usize], seq2: &[usize]) -> PermutationStructure {
        PermutationStructure::new(
            LinearOrder::from_sequence(seq1).unwrap(),
            LinearOrder::from_sequence(seq2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn reduct_examples() {
        // equal orders give the chain back
        let chain = stage_from(&[0, 1, 2], &[0, 1, 2]);
        assert_eq!(chain.reduct_to_poset(), FinitePoset::chain(3));
        // opposite orders give an antichain
        let anti = stage_from(&[0, 1], &[1, 0]);
        assert_eq!(anti.reduct_to_poset(), FinitePoset::antichain(2));
        // abc / bac: b and c comparable, a and c comparable, a parallel b
        let mixed = stage_from(&[0, 1, 2], &[1, 0, 2]);
        let p = mixed.reduct_to_poset();
        assert!(p.leq(1, 2) && p.leq(0, 2));
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
    }

    #[test]
    fn reduct_orders_form_a_realizer() {
        let stage = stage_from(&[2, 0, 3, 1], &[0, 3, 2, 1]);
        let p = stage.reduct_to_poset();
        assert!(crate::dimension::is_realizer(
            &p,
            &[stage.ord1().clone(), stage.ord2().clone()]
        )
        .unwrap());
    }

    #[test]
    fn insert_keeps_ids_stable() {
        let mut stage = stage_from(&[0, 1], &[1, 0]);
        let id = stage.insert(1, 0);
        assert_eq!(id, 2);
        assert_eq!(stage.ord1().rank_of(2), 1);
        assert_eq!(stage.ord2().rank_of(2), 0);
        // old relative order intact
        assert!(stage.ord1().le(0, 1));
        assert!(stage.ord2().le(1, 0));
    }

    #[test]
    fn build_reaches_level_one_with_a_single_point() {
        let (stage, log) = build_generic_permutation(1, 10, 0).unwrap();
        assert!(stage.n() >= 1);
        assert_eq!(log.ep_level, 1);
    }

    #[test]
    fn build_level_two_realizes_both_patterns() {
        let (stage, log) = build_generic_permutation(2, 50, 0).unwrap();
        assert!(log.ep_level >= 2);
        let age = age_upto(&stage.to_structure(), 2).unwrap();
        let wanted: BTreeSet<_> = enumerate_upto_iso(&ClassSpec::Permutations, 1)
            .unwrap()
            .iter()
            .chain(enumerate_upto_iso(&ClassSpec::Permutations, 2).unwrap().iter())
            .map(canonical_form)
            .collect();
        assert_eq!(age, wanted);
    }

    #[test]
    fn build_level_three_has_all_six_patterns() {
        let (stage, log) = build_generic_permutation(3, 200, 0).unwrap();
        assert!(log.ep_level >= 3);
        let s = stage.to_structure();
        let present: BTreeSet<_> = (0..stage.n())
            .combinations(3)
            .map(|sub| canonical_form(&s.induced_substructure(&sub).unwrap()))
            .collect();
        let wanted: BTreeSet<_> = enumerate_upto_iso(&ClassSpec::Permutations, 3)
            .unwrap()
            .iter()
            .map(canonical_form)
            .collect();
        assert_eq!(present, wanted);
    }

    #[test]
    fn build_is_deterministic_per_seed() {
        let (s1, l1) = build_generic_permutation(3, 200, 7).unwrap();
        let (s2, l2) = build_generic_permutation(3, 200, 7).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(l1, l2);
    }

    #[test]
    fn exhausted_growth_reports_partial_level() {
        match build_generic_permutation(3, 2, 0) {
            Err(Error::GrowthExhausted { points, ep_level }) => {
                assert!(points <= 2);
                assert!(ep_level < 3);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn age_of_any_poset_at_one_is_the_point() {
        let s = FinitePoset::chain(4).to_structure();
        let age = age_upto(&s, 1).unwrap();
        assert_eq!(age.len(), 1);
        assert!(age.contains(&canonical_form(&FinitePoset::chain(1).to_structure())));
    }

    #[test]
    fn age_of_a_chain_contains_only_chains() {
        let s = FinitePoset::chain(6).to_structure();
        let age = age_upto(&s, 3).unwrap();
        let wanted: BTreeSet<_> = (1..=3)
            .map(|k| canonical_form(&FinitePoset::chain(k).to_structure()))
            .collect();
        assert_eq!(age, wanted);
        assert!(age_upto(&s, 7).is_err());
    }

    #[test]
    fn stage_json_round_trip() {
        let stage = stage_from(&[2, 0, 1], &[1, 2, 0]);
        let back = PermutationStructure::from_json(&stage.to_json()).unwrap();
        assert_eq!(stage, back);
    }

    #[test]
    fn witness_for_a_single_point() {
        let stage = stage_from(&[0, 1], &[1, 0]);
        let a = FinitePoset::chain(1);
        let f = EmbeddingMap::new(vec![1]).unwrap();
        let mut w = weak_injectivity_witness(&a, &f, &stage, true).unwrap();
        assert_eq!(w.abar().n(), 1);
        let h = w.extend(&a, &EmbeddingMap::identity(1)).unwrap();
        assert_eq!(h.apply(0), 1);
    }

    #[test]
    fn witness_for_a_chain_with_identity_extension() {
        let stage = stage_from(&[0, 1, 2], &[0, 1, 2]);
        let a = FinitePoset::chain(2);
        let f = EmbeddingMap::new(vec![0, 2]).unwrap();
        let mut w = weak_injectivity_witness(&a, &f, &stage, true).unwrap();
        let abar_poset = w.abar().poset().clone();
        let h = w.extend(&abar_poset, &EmbeddingMap::identity(4)).unwrap();
        // h . g . e = f with g the identity
        assert_eq!(h.apply(w.e().apply(0)), 0);
        assert_eq!(h.apply(w.e().apply(1)), 2);
    }

    #[test]
    fn witness_for_the_antichain_into_a_grown_diamond() {
        let stage = stage_from(&[0, 1], &[1, 0]);
        let a = FinitePoset::antichain(2);
        let f = EmbeddingMap::identity(2);
        let mut w = weak_injectivity_witness(&a, &f, &stage, true).unwrap();
        // diagonal hits the two middle points of the diamond
        assert_eq!(w.e().as_slice(), &[1, 2]);
        // b: the diamond plus one extra maximal point above everything
        let diamond = w.abar().poset().clone();
        let mut pairs = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                if x != y && diamond.leq(x, y) {
                    pairs.push((x, y));
                }
            }
            pairs.push((x, 4));
        }
        let b = FinitePoset::from_strict_pairs(5, &pairs).unwrap();
        let g = EmbeddingMap::new(vec![0, 1, 2, 3]).unwrap();
        let h = w.extend(&b, &g).unwrap();
        for x in 0..2 {
            assert_eq!(h.apply(g.apply(w.e().apply(x))), f.apply(x));
        }
    }

    #[test]
    fn extend_without_growth_fails_on_a_tiny_stage() {
        let stage = stage_from(&[0, 1], &[1, 0]);
        let a = FinitePoset::antichain(2);
        let f = EmbeddingMap::identity(2);
        let mut w = weak_injectivity_witness(&a, &f, &stage, false).unwrap();
        let diamond = w.abar().poset().clone();
        assert!(matches!(
            w.extend(&diamond, &EmbeddingMap::identity(4)),
            Err(Error::GrowthDisabled(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn reduct_realizer_invariant(pick in 0usize..120, n in 1usize..6) {
            let orders = LinearOrder::all(n);
            let ord2 = orders[pick % orders.len()].clone();
            let stage = PermutationStructure::new(LinearOrder::identity(n), ord2).unwrap();
            let p = stage.reduct_to_poset();
            proptest::prop_assert!(crate::dimension::is_realizer(
                &p,
                &[stage.ord1().clone(), stage.ord2().clone()]
            )
            .unwrap());
        }
    }
}
