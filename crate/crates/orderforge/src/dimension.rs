//! Linear extensions, realizers, exact order dimension, and crown posets.
//!
//! Dimension is computed the brute-force way: enumerate the linear extensions
//! and look for the least number of them whose intersection is the poset,
//! pruning with the observation that a family of extensions realizes the
//! poset exactly when every ordered incomparable pair is reversed in some
//! member. For the two-extension case the partner of a fixed extension is
//! fully determined, which collapses the pair search to a single scan.

use crate::error::{Error, Result};
use crate::relcore::{FinitePoset, LinearOrder};

/// Default exact-search ceiling for `dimension`.
pub const DEFAULT_DIMENSION_BOUND: usize = 8;
/// Incomparable-pair masks are `u128`, which caps the domain at 10 elements.
pub const HARD_DIMENSION_CAP: usize = 10;

/// A tuple of linear extensions whose intersection is the target order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer {
    pub target: FinitePoset,
    pub orders: Vec<LinearOrder>,
}

impl Realizer {
    pub fn new(target: FinitePoset, orders: Vec<LinearOrder>) -> Result<Self> {
        if !is_realizer(&target, &orders)? {
            return Err(Error::InvalidStructure(
                "orders do not intersect to the target poset".into(),
            ));
        }
        Ok(Realizer { target, orders })
    }
}

/// All linear extensions of `p`, in lexicographic order of their element
/// sequences, truncated to `limit`.
pub fn linear_extensions(p: &FinitePoset, limit: usize) -> Vec<LinearOrder> {
    let n = p.n();
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut placed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    extend_rec(p, &mut placed, &mut seq, limit, &mut out);
    out
}

fn extend_rec(
    p: &FinitePoset,
    placed: &mut [bool],
    seq: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<LinearOrder>,
) {
    if out.len() >= limit {
        return;
    }
    let n = p.n();
    if seq.len() == n {
        out.push(LinearOrder::from_sequence(seq).expect("topological sequence"));
        return;
    }
    'cand: for e in 0..n {
        if placed[e] {
            continue;
        }
        for below in 0..n {
            if below != e && !placed[below] && p.leq(below, e) {
                continue 'cand;
            }
        }
        placed[e] = true;
        seq.push(e);
        extend_rec(p, placed, seq, limit, out);
        seq.pop();
        placed[e] = false;
        if out.len() >= limit {
            return;
        }
    }
}

/// True iff the intersection of `orders` is exactly the relation of `p`.
pub fn is_realizer(p: &FinitePoset, orders: &[LinearOrder]) -> Result<bool> {
    for o in orders {
        if o.n() != p.n() {
            return Err(Error::DomainMismatch {
                expected: p.n(),
                got: o.n(),
            });
        }
    }
    if orders.is_empty() {
        return Ok(p.n() <= 1);
    }
    let meet = FinitePoset::intersection_matrix(orders)?;
    Ok(meet == p.matrix())
}

/// The partner that a linear extension forces on every incomparable pair;
/// `Some` iff the forced relation is itself a linear order.
fn determined_partner(p: &FinitePoset, l: &LinearOrder) -> Option<LinearOrder> {
    let n = p.n();
    let mut below = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            // partner must keep comparable pairs and reverse the rest of l
            let le = if p.leq(a, b) {
                true
            } else if p.leq(b, a) {
                false
            } else {
                l.le(b, a)
            };
            if le {
                below[b] += 1;
            }
        }
    }
    let order = LinearOrder::new(below).ok()?;
    // totality and antisymmetry hold by construction; transitivity may fail,
    // which shows up as the rank map not being order-consistent
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let expect = if p.leq(a, b) {
                true
            } else if p.leq(b, a) {
                false
            } else {
                l.le(b, a)
            };
            if order.le(a, b) != expect {
                return None;
            }
        }
    }
    Some(order)
}

/// Some pair of linear extensions whose intersection is `p`, or `None` iff
/// the dimension of `p` exceeds 2. Chains get the degenerate pair `(L, L)`.
/// Deterministic: the first component is the lexicographically least
/// extension that admits a partner.
pub fn two_dim_realizer(p: &FinitePoset) -> Option<(LinearOrder, LinearOrder)> {
    if p.is_chain() {
        let l = linear_extensions(p, 1).into_iter().next()?;
        return Some((l.clone(), l));
    }
    for l in linear_extensions(p, usize::MAX) {
        if let Some(partner) = determined_partner(p, &l) {
            return Some((l, partner));
        }
    }
    None
}

/// Least `d` such that some `d`-tuple of linear extensions realizes `p`.
pub fn dimension(p: &FinitePoset) -> Result<usize> {
    minimum_realizer(p).map(|r| r.orders.len())
}

/// A realizer of least size, found by searching `d`-subsets of the linear
/// extensions for growing `d`; deterministic via the extension order.
pub fn minimum_realizer(p: &FinitePoset) -> Result<Realizer> {
    let bound = crate::classes::env_max_n()
        .unwrap_or(DEFAULT_DIMENSION_BOUND)
        .min(HARD_DIMENSION_CAP);
    if p.n() == 0 {
        return Err(Error::InvalidStructure(
            "the empty poset has no dimension".into(),
        ));
    }
    if p.n() > bound {
        return Err(Error::BoundExceeded {
            what: "dimension search domain",
            got: p.n(),
            limit: bound,
        });
    }
    if p.is_chain() {
        let l = linear_extensions(p, 1).remove(0);
        return Realizer::new(p.clone(), vec![l]);
    }
    if let Some((l1, l2)) = two_dim_realizer(p) {
        return Realizer::new(p.clone(), vec![l1, l2]);
    }
    let extensions = linear_extensions(p, usize::MAX);
    let pairs = p.incomparable_ordered_pairs();
    let full: u128 = if pairs.len() == 128 {
        u128::MAX
    } else {
        (1u128 << pairs.len()) - 1
    };
    let masks: Vec<u128> = extensions
        .iter()
        .map(|l| {
            let mut m = 0u128;
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if l.le(b, a) {
                    m |= 1 << i;
                }
            }
            m
        })
        .collect();
    for d in 3..=p.n() {
        let mut chosen = Vec::new();
        if cover_search(&masks, full, 0, d, &mut chosen) {
            let orders = chosen.iter().map(|&i| extensions[i].clone()).collect();
            return Realizer::new(p.clone(), orders);
        }
    }
    // every poset is realized by all of its extensions
    Realizer::new(p.clone(), extensions)
}

/// Set-cover search over reversal masks: branch on the first uncovered
/// incomparable pair; records the chosen extension indices.
fn cover_search(
    masks: &[u128],
    full: u128,
    covered: u128,
    remaining: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if covered == full {
        return true;
    }
    if remaining == 0 {
        return false;
    }
    let missing = (!covered) & full;
    let first = missing.trailing_zeros();
    let bit = 1u128 << first;
    for (i, m) in masks.iter().enumerate() {
        if m & bit != 0 {
            chosen.push(i);
            if cover_search(masks, full, covered | m, remaining - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Cheap membership test for dimension classes; avoids the full search where
/// a fast path exists.
pub fn dimension_at_most(p: &FinitePoset, k: usize) -> Result<bool> {
    if p.n() <= 1 {
        return Ok(k >= 1);
    }
    if k == 0 {
        return Ok(false);
    }
    if p.is_chain() {
        return Ok(true);
    }
    if k == 1 {
        return Ok(false);
    }
    if two_dim_realizer(p).is_some() {
        return Ok(true);
    }
    if k == 2 {
        return Ok(false);
    }
    Ok(dimension(p)? <= k)
}

/// The crown on `2k` elements: minimal `x_0..x_{k-1}`, maximal `y_0..y_{k-1}`,
/// with `x_i` below `y_j` exactly when `i != j`.
pub fn crown(k: usize) -> Result<FinitePoset> {
    if k < 3 {
        return Err(Error::CrownTooSmall(k));
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                pairs.push((i, k + j));
            }
        }
    }
    FinitePoset::from_strict_pairs(2 * k, &pairs)
}

/// Hasse diagram in DOT format, bottom-up.
pub fn hasse_dot(p: &FinitePoset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for v in 0..p.n() {
        out.push_str(&format!("  v{v} [label=\"{v}\"];\n"));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  v{a} -> v{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products;
    use itertools::Itertools;

    /// Independent oracle: smallest d over all d-subsets of extensions,
    /// checked by direct intersection.
    fn oracle_dimension(p: &FinitePoset) -> usize {
        let exts = linear_extensions(p, usize::MAX);
        for d in 1..=p.n() {
            for subset in exts.iter().combinations(d) {
                let orders: Vec<LinearOrder> = subset.into_iter().cloned().collect();
                if is_realizer(p, &orders).unwrap() {
                    return d;
                }
            }
        }
        unreachable!("every poset has a realizer");
    }

    #[test]
    fn chain_has_one_extension() {
        for n in 1..=5 {
            assert_eq!(linear_extensions(&FinitePoset::chain(n), usize::MAX).len(), 1);
        }
    }

    #[test]
    fn two_antichain_has_two_extensions() {
        assert_eq!(
            linear_extensions(&FinitePoset::antichain(2), usize::MAX).len(),
            2
        );
    }

    #[test]
    fn diamond_has_two_extensions() {
        let diamond = products::product_poset(2, 2).unwrap().poset().clone();
        let exts = linear_extensions(&diamond, usize::MAX);
        assert_eq!(exts.len(), 2);
        // oracle: filter all 4! total orders
        let oracle: Vec<LinearOrder> = LinearOrder::all(4)
            .into_iter()
            .filter(|o| diamond.extended_by(o))
            .collect();
        assert_eq!(exts, oracle);
    }

    #[test]
    fn realizer_examples() {
        let anti = FinitePoset::antichain(2);
        let ab = LinearOrder::from_sequence(&[0, 1]).unwrap();
        let ba = LinearOrder::from_sequence(&[1, 0]).unwrap();
        assert!(is_realizer(&anti, &[ab.clone(), ba.clone()]).unwrap());
        let chain = FinitePoset::chain(2);
        assert!(!is_realizer(&chain, &[ab, ba]).unwrap());
    }

    #[test]
    fn no_two_orders_realize_the_crown() {
        let c = crown(3).unwrap();
        // brute force over all 720^2 ordered pairs of total orders
        let all = LinearOrder::all(6);
        for o1 in &all {
            for o2 in &all {
                assert!(!is_realizer(&c, &[o1.clone(), o2.clone()]).unwrap());
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&FinitePoset::chain(4)).unwrap(), 1);
        assert_eq!(dimension(&FinitePoset::antichain(2)).unwrap(), 2);
        assert_eq!(dimension(&crown(3).unwrap()).unwrap(), 3);
    }

    #[test]
    fn crown_minus_any_point_is_two_dimensional() {
        let c = crown(3).unwrap();
        for removed in 0..6 {
            let subset: Vec<usize> = (0..6).filter(|&v| v != removed).collect();
            let sub = c.induced(&subset).unwrap();
            assert_eq!(dimension(&sub).unwrap(), 2);
        }
    }

    #[test]
    fn dimension_matches_subset_oracle_on_small_posets() {
        let samples = vec![
            FinitePoset::chain(4),
            FinitePoset::antichain(3),
            products::product_poset(2, 2).unwrap().poset().clone(),
            products::product_poset(3, 2).unwrap().poset().clone(),
            crown(3).unwrap(),
            FinitePoset::from_strict_pairs(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap(),
        ];
        for p in samples {
            assert_eq!(dimension(&p).unwrap(), oracle_dimension(&p));
        }
    }

    #[test]
    fn two_dim_realizer_of_diamond_is_lex_alex() {
        let prod = products::product_poset(2, 2).unwrap();
        let (l1, l2) = two_dim_realizer(prod.poset()).unwrap();
        assert_eq!(l1, products::lex_order(&prod));
        assert_eq!(l2, products::alex_order(&prod));
        assert!(is_realizer(prod.poset(), &[l1, l2]).unwrap());
    }

    #[test]
    fn two_dim_realizer_edge_cases() {
        assert!(two_dim_realizer(&crown(3).unwrap()).is_none());
        let single = FinitePoset::chain(1);
        let (l1, l2) = two_dim_realizer(&single).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(l1.n(), 1);
    }

    #[test]
    fn crown_shapes() {
        let c3 = crown(3).unwrap();
        assert_eq!(c3.n(), 6);
        assert_eq!(c3.strict_pair_count(), 6);
        let c4 = crown(4).unwrap();
        assert_eq!(c4.n(), 8);
        assert_eq!(c4.strict_pair_count(), 12);
        assert!(crown(2).is_err());
    }

    #[test]
    fn crown_restricted_to_a_comparable_pair_is_a_chain() {
        // minimal x0 with maximal y1 (indices 0 and 4) are comparable
        let c = crown(3).unwrap();
        assert_eq!(c.induced(&[0, 4]).unwrap(), FinitePoset::chain(2));
        // x0 with its own partner y0 (index 3) is an antichain
        assert_eq!(c.induced(&[0, 3]).unwrap(), FinitePoset::antichain(2));
    }

    #[test]
    fn every_small_poset_is_at_most_two_dimensional() {
        for n in 1..=4 {
            for s in crate::classes::enumerate_upto_iso(&crate::classes::ClassSpec::AllPosets, n)
                .unwrap()
            {
                let p = FinitePoset::from_structure(&s).unwrap();
                assert!(dimension(&p).unwrap() <= 2);
            }
        }
    }

    #[test]
    fn pair_realizer_presence_matches_dimension_on_samples() {
        // cover-search route against the determined-partner route
        let mut samples: Vec<FinitePoset> = vec![crown(3).unwrap(), crown(4).unwrap()];
        for removed in 0..6 {
            let subset: Vec<usize> = (0..6).filter(|&v| v != removed).collect();
            samples.push(crown(3).unwrap().induced(&subset).unwrap());
        }
        samples.push(products::product_poset(3, 2).unwrap().poset().clone());
        samples.push(FinitePoset::antichain(6));
        // crown plus an isolated point still needs three extensions
        let mut padded = crown(3).unwrap().disjoint_union(&FinitePoset::chain(1));
        samples.push(padded.clone());
        padded = padded.ordinal_sum(&FinitePoset::chain(1));
        samples.push(padded);
        for p in samples {
            let has_pair = two_dim_realizer(&p).is_some();
            assert_eq!(has_pair, dimension(&p).unwrap() <= 2);
        }
    }

    #[test]
    fn realizers_from_dimension_pass_is_realizer() {
        let p = products::product_poset(3, 2).unwrap().poset().clone();
        let (l1, l2) = two_dim_realizer(&p).unwrap();
        Realizer::new(p, vec![l1, l2]).unwrap();
    }

    #[test]
    fn hasse_dot_lists_cover_edges() {
        let diamond = products::product_poset(2, 2).unwrap().poset().clone();
        let dot = hasse_dot(&diamond);
        assert!(dot.contains("v0 -> v1"));
        assert!(dot.contains("v0 -> v2"));
        assert!(dot.contains("v1 -> v3"));
        assert!(dot.contains("v2 -> v3"));
        assert!(!dot.contains("v0 -> v3"));
    }
}
