//! Products of two finite chains, their lexicographic and antilexicographic
//! realizer, and executable oracles for the uniqueness of that realizer and
//! the two-way classification of embeddings between products.

use crate::dimension::linear_extensions;
use crate::error::{Error, Result};
use crate::relcore::{EmbeddingMap, FinitePoset, LinearOrder};

/// Default ceiling on `a_size * b_size` for the exhaustive pair search.
pub const DEFAULT_PAIR_SEARCH_BOUND: usize = 8;

/// The coordinatewise order on a product of two chains, with the element
/// `(a, b)` stored at index `a * b_size + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoset {
    a_size: usize,
    b_size: usize,
    poset: FinitePoset,
}

impl ProductPoset {
    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    pub fn n(&self) -> usize {
        self.a_size * self.b_size
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.b_size + b
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.b_size, idx % self.b_size)
    }
}

/// `(a1,b1)` below `(a2,b2)` iff both coordinates are.
pub fn product_poset(a_size: usize, b_size: usize) -> Result<ProductPoset> {
    if a_size == 0 || b_size == 0 {
        return Err(Error::ZeroFactor);
    }
    let n = a_size * b_size;
    let mut leq = vec![false; n * n];
    for a1 in 0..a_size {
        for b1 in 0..b_size {
            for a2 in 0..a_size {
                for b2 in 0..b_size {
                    if a1 <= a2 && b1 <= b2 {
                        leq[(a1 * b_size + b1) * n + (a2 * b_size + b2)] = true;
                    }
                }
            }
        }
    }
    Ok(ProductPoset {
        a_size,
        b_size,
        poset: FinitePoset::new(n, leq)?,
    })
}

/// First coordinate dominant; with the chosen indexing this is the identity
/// rank order.
pub fn lex_order(p: &ProductPoset) -> LinearOrder {
    LinearOrder::identity(p.n())
}

/// Second coordinate dominant.
pub fn alex_order(p: &ProductPoset) -> LinearOrder {
    let mut rank = vec![0; p.n()];
    for idx in 0..p.n() {
        let (a, b) = p.coords(idx);
        rank[idx] = b * p.a_size + a;
    }
    LinearOrder::new(rank).expect("alex ranks form a bijection")
}

/// All unordered pairs `{o1, o2}` of linear orders with `o1 ∩ o2` equal to
/// the product order, each pair sorted componentwise, the set sorted.
///
/// Any order participating in such a pair contains the product order, so the
/// scan over pairs of linear extensions is exhaustive over all pairs of
/// linear orders.
pub fn realizer_pair_set(
    p: &ProductPoset,
    max_points: usize,
) -> Result<Vec<(LinearOrder, LinearOrder)>> {
    if p.n() > max_points {
        return Err(Error::BoundExceeded {
            what: "product pair search",
            got: p.n(),
            limit: max_points,
        });
    }
    let extensions = linear_extensions(&p.poset, usize::MAX);
    let mut out = Vec::new();
    for (i, o1) in extensions.iter().enumerate() {
        for o2 in &extensions[i..] {
            let meet = FinitePoset::intersection_matrix(&[o1.clone(), o2.clone()])?;
            if meet == p.poset.matrix() {
                out.push((o1.clone(), o2.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// How an embedding between products carries the two coordinate orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingClass {
    /// lex goes to lex and alex to alex.
    LexToLex,
    /// lex goes to alex and alex to lex.
    LexToAlex,
}

impl std::fmt::Display for EmbeddingClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmbeddingClass::LexToLex => write!(f, "lex->lex"),
            EmbeddingClass::LexToAlex => write!(f, "lex->alex"),
        }
    }
}

fn carries(
    f: &EmbeddingMap,
    src_pair: (&LinearOrder, &LinearOrder),
    dst_pair: (&LinearOrder, &LinearOrder),
) -> bool {
    let n = f.source_size();
    for p in 0..n {
        for q in 0..n {
            if src_pair.0.le(p, q) != dst_pair.0.le(f.apply(p), f.apply(q)) {
                return false;
            }
            if src_pair.1.le(p, q) != dst_pair.1.le(f.apply(p), f.apply(q)) {
                return false;
            }
        }
    }
    true
}

/// Classifies a poset embedding between two products as order-pairing
/// preserving or swapping; when both apply (one-point source) the preserving
/// tag wins.
pub fn classify_product_embedding(
    f: &EmbeddingMap,
    src: &ProductPoset,
    dst: &ProductPoset,
) -> Result<EmbeddingClass> {
    if f.source_size() != src.n() {
        return Err(Error::DomainMismatch {
            expected: src.n(),
            got: f.source_size(),
        });
    }
    for &img in f.as_slice() {
        if img >= dst.n() {
            return Err(Error::OutOfRange {
                element: img,
                n: dst.n(),
            });
        }
    }
    for p in 0..src.n() {
        for q in 0..src.n() {
            if src.poset.leq(p, q) != dst.poset.leq(f.apply(p), f.apply(q)) {
                return Err(Error::NotAnEmbedding(format!(
                    "pair ({p},{q}) is not carried faithfully"
                )));
            }
        }
    }
    let src_lex = lex_order(src);
    let src_alex = alex_order(src);
    let dst_lex = lex_order(dst);
    let dst_alex = alex_order(dst);
    if carries(f, (&src_lex, &src_alex), (&dst_lex, &dst_alex)) {
        return Ok(EmbeddingClass::LexToLex);
    }
    if carries(f, (&src_lex, &src_alex), (&dst_alex, &dst_lex)) {
        return Ok(EmbeddingClass::LexToAlex);
    }
    Err(Error::Unclassifiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::is_realizer;
    use crate::relcore::{canonical_form, find_embeddings};

    #[test]
    fn diamond_shape_and_pair_count() {
        let p = product_poset(2, 2).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.poset().relation_pair_count(), 9);
        let p32 = product_poset(3, 2).unwrap();
        assert_eq!(p32.n(), 6);
        assert_eq!(p32.poset().relation_pair_count(), 18);
        assert!(product_poset(0, 2).is_err());
    }

    #[test]
    fn one_column_product_is_a_chain() {
        for n in 1..=4 {
            let p = product_poset(n, 1).unwrap();
            assert_eq!(
                canonical_form(&p.poset().to_structure()),
                canonical_form(&crate::relcore::FinitePoset::chain(n).to_structure())
            );
        }
    }

    #[test]
    fn lex_and_alex_sequences_on_the_diamond() {
        let p = product_poset(2, 2).unwrap();
        // (0,0) (0,1) (1,0) (1,1)
        assert_eq!(lex_order(&p).sequence(), vec![0, 1, 2, 3]);
        // (0,0) (1,0) (0,1) (1,1)
        assert_eq!(alex_order(&p).sequence(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn lex_alex_realize_every_product() {
        for (a, b) in [(1, 1), (2, 2), (3, 2), (2, 4), (4, 2)] {
            let p = product_poset(a, b).unwrap();
            assert!(p.poset().extended_by(&lex_order(&p)));
            assert!(p.poset().extended_by(&alex_order(&p)));
            assert!(is_realizer(p.poset(), &[lex_order(&p), alex_order(&p)]).unwrap());
        }
    }

    /// Oracle for the 2x2 case: scan all 24*24 ordered pairs of total orders.
    #[test]
    fn diamond_pair_set_matches_full_order_scan() {
        let p = product_poset(2, 2).unwrap();
        let found = realizer_pair_set(&p, DEFAULT_PAIR_SEARCH_BOUND).unwrap();
        let mut oracle = Vec::new();
        let all = LinearOrder::all(4);
        for o1 in &all {
            for o2 in &all {
                if o1 <= o2 && is_realizer(p.poset(), &[o1.clone(), o2.clone()]).unwrap() {
                    oracle.push((o1.clone(), o2.clone()));
                }
            }
        }
        oracle.sort();
        assert_eq!(found, oracle);
        assert_eq!(found, vec![(lex_order(&p), alex_order(&p))]);
    }

    /// Oracle for the 3x2 case: scan all 720*720 ordered pairs of total orders.
    #[test]
    fn three_by_two_pair_set_matches_full_order_scan() {
        let p = product_poset(3, 2).unwrap();
        let found = realizer_pair_set(&p, DEFAULT_PAIR_SEARCH_BOUND).unwrap();
        let mut oracle = Vec::new();
        let all = LinearOrder::all(6);
        for o1 in &all {
            for o2 in &all {
                if o1 <= o2 && is_realizer(p.poset(), &[o1.clone(), o2.clone()]).unwrap() {
                    oracle.push((o1.clone(), o2.clone()));
                }
            }
        }
        oracle.sort();
        assert_eq!(found, oracle);
        assert_eq!(found, vec![(lex_order(&p), alex_order(&p))]);
    }

    #[test]
    fn chain_product_degenerates_to_a_singleton_pair() {
        let p = product_poset(3, 1).unwrap();
        let found = realizer_pair_set(&p, DEFAULT_PAIR_SEARCH_BOUND).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, found[0].1);
        assert_eq!(found[0].0, lex_order(&p));
        assert_eq!(lex_order(&p), alex_order(&p));
    }

    #[test]
    fn pair_search_bound_is_enforced() {
        let p = product_poset(3, 3).unwrap();
        assert!(matches!(
            realizer_pair_set(&p, DEFAULT_PAIR_SEARCH_BOUND),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(realizer_pair_set(&p, 9).is_ok());
    }

    #[test]
    fn inclusion_classifies_as_lex_to_lex() {
        let src = product_poset(2, 2).unwrap();
        let dst = product_poset(3, 3).unwrap();
        let map: Vec<usize> = (0..src.n())
            .map(|idx| {
                let (a, b) = src.coords(idx);
                dst.index(a, b)
            })
            .collect();
        let f = EmbeddingMap::new(map).unwrap();
        assert_eq!(
            classify_product_embedding(&f, &src, &dst).unwrap(),
            EmbeddingClass::LexToLex
        );
    }

    #[test]
    fn coordinate_swap_classifies_as_lex_to_alex() {
        let src = product_poset(2, 3).unwrap();
        let dst = product_poset(3, 2).unwrap();
        let map: Vec<usize> = (0..src.n())
            .map(|idx| {
                let (a, b) = src.coords(idx);
                dst.index(b, a)
            })
            .collect();
        let f = EmbeddingMap::new(map).unwrap();
        assert_eq!(
            classify_product_embedding(&f, &src, &dst).unwrap(),
            EmbeddingClass::LexToAlex
        );
    }

    #[test]
    fn one_point_source_breaks_ties_toward_lex() {
        let src = product_poset(1, 1).unwrap();
        let dst = product_poset(2, 2).unwrap();
        for img in 0..dst.n() {
            let f = EmbeddingMap::new(vec![img]).unwrap();
            assert_eq!(
                classify_product_embedding(&f, &src, &dst).unwrap(),
                EmbeddingClass::LexToLex
            );
        }
    }

    #[test]
    fn non_embedding_is_rejected() {
        let src = product_poset(2, 1).unwrap();
        let dst = product_poset(2, 2).unwrap();
        // send the 2-chain onto an antichain of the diamond
        let f = EmbeddingMap::new(vec![1, 2]).unwrap();
        assert!(matches!(
            classify_product_embedding(&f, &src, &dst),
            Err(Error::NotAnEmbedding(_))
        ));
    }

    #[test]
    fn small_dichotomy_sweep_classifies_everything() {
        let sources = [(1, 2), (2, 2), (2, 1), (1, 4)];
        let targets = [(2, 2), (2, 3), (3, 2), (1, 6)];
        for &(a, b) in &sources {
            let src = product_poset(a, b).unwrap();
            for &(c, d) in &targets {
                let dst = product_poset(c, d).unwrap();
                let embeddings = find_embeddings(
                    &src.poset().to_structure(),
                    &dst.poset().to_structure(),
                    usize::MAX,
                )
                .unwrap();
                for f in embeddings {
                    classify_product_embedding(&f, &src, &dst).unwrap();
                }
            }
        }
    }
}
