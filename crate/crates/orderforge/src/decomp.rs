//! Monomorphic and interval decompositions of finite ordered structures,
//! class profiles, growth classification, and branch extraction through a
//! tower of structures.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::classes::{enumerate_upto_iso, ClassSpec};
use crate::error::{Error, Result};
use crate::relcore::{canonical_form, CanonicalCode, Relation, RelationalStructure};

/// Ceiling on structure sizes for the subset-pair scan.
pub const MONOMORPHIC_CHECK_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    /// Blocks are runs of consecutive elements of the designated order.
    Interval,
    General,
}

/// An ordered partition of a structure's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Vec<usize>>,
    pub kind: DecompositionKind,
}

impl Decomposition {
    /// Validates disjointness, coverage, and (for interval decompositions)
    /// that each block is a run of consecutive positions of the designated
    /// order, with blocks listed bottom-up.
    pub fn new(
        s: &RelationalStructure,
        blocks: Vec<Vec<usize>>,
        kind: DecompositionKind,
    ) -> Result<Self> {
        let mut seen = vec![false; s.n()];
        for block in &blocks {
            for &e in block {
                if e >= s.n() {
                    return Err(Error::OutOfRange { element: e, n: s.n() });
                }
                if seen[e] {
                    return Err(Error::InvalidStructure(format!(
                        "element {e} appears in two blocks"
                    )));
                }
                seen[e] = true;
            }
        }
        if seen.iter().any(|&v| !v) {
            return Err(Error::InvalidStructure(
                "blocks do not cover the domain".into(),
            ));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        if kind == DecompositionKind::Interval {
            let rank = s.order_ranks()?;
            let mut expected = 0usize;
            for block in &blocks {
                let mut positions: Vec<usize> = block.iter().map(|&e| rank[e]).collect();
                positions.sort_unstable();
                for p in positions {
                    if p != expected {
                        return Err(Error::InvalidStructure(
                            "interval blocks must be consecutive runs of the order, bottom-up"
                                .into(),
                        ));
                    }
                    expected += 1;
                }
            }
        }
        Ok(Decomposition { blocks, kind })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn block_of(&self, e: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&e))
            .expect("decomposition covers the domain")
    }

    /// Restriction to a subset of the host's domain, renumbered the way
    /// `induced_substructure` renumbers; empty blocks are dropped.
    pub fn restrict(&self, subset: &[usize]) -> Decomposition {
        let mut sub: Vec<usize> = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        let renumber: BTreeMap<usize, usize> =
            sub.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .filter_map(|e| renumber.get(e).copied())
                    .sorted()
                    .collect::<Vec<_>>()
            })
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        Decomposition {
            blocks,
            kind: self.kind,
        }
    }
}

/// True iff any two subsets of size at most `up_to` with equal per-block
/// trace sizes induce isomorphic substructures. Checked exhaustively by
/// grouping subsets by trace vector and comparing canonical codes.
pub fn is_monomorphic_decomposition(
    s: &RelationalStructure,
    d: &Decomposition,
    up_to: usize,
) -> Result<bool> {
    if s.n() > MONOMORPHIC_CHECK_BOUND {
        return Err(Error::BoundExceeded {
            what: "monomorphic check domain",
            got: s.n(),
            limit: MONOMORPHIC_CHECK_BOUND,
        });
    }
    if up_to > s.n() {
        return Err(Error::BoundExceeded {
            what: "monomorphic check subset size",
            got: up_to,
            limit: s.n(),
        });
    }
    let mut code_by_trace: BTreeMap<Vec<usize>, CanonicalCode> = BTreeMap::new();
    for mask in 0u32..(1 << s.n()) {
        let subset: Vec<usize> = (0..s.n()).filter(|&e| mask & (1 << e) != 0).collect();
        if subset.len() > up_to {
            continue;
        }
        let mut trace = vec![0usize; d.block_count()];
        for &e in &subset {
            trace[d.block_of(e)] += 1;
        }
        let code = canonical_form(&s.induced_substructure(&subset)?);
        match code_by_trace.get(&trace) {
            None => {
                code_by_trace.insert(trace, code);
            }
            Some(existing) => {
                if *existing != code {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The monomorphic interval decomposition with the fewest blocks, provided
/// that count is at most `k_max + 1`; minimality is certified by exhausting
/// every interval partition with fewer blocks first.
pub fn minimal_interval_decomposition(
    s: &RelationalStructure,
    k_max: usize,
) -> Result<Option<Decomposition>> {
    let rank = s.order_ranks()?;
    let n = s.n();
    if n == 0 {
        return Ok(Some(Decomposition {
            blocks: vec![],
            kind: DecompositionKind::Interval,
        }));
    }
    let mut by_position = vec![0usize; n];
    for e in 0..n {
        by_position[rank[e]] = e;
    }
    for count in 1..=(k_max + 1).min(n) {
        for cuts in (1..n).combinations(count - 1) {
            let mut blocks = Vec::with_capacity(count);
            let mut start = 0usize;
            for &cut in cuts.iter().chain(std::iter::once(&n)) {
                blocks.push(by_position[start..cut].to_vec());
                start = cut;
            }
            let d = Decomposition::new(s, blocks, DecompositionKind::Interval)?;
            if is_monomorphic_decomposition(s, &d, n)? {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

/// Exact isomorphism counts per size.
#[derive(Clone, Debug)]
pub struct ProfileTable {
    pub class: ClassSpec,
    pub values: Vec<u64>,
}

/// Counts members of the class of each size `0..=n_max` up to isomorphism.
pub fn profile(class: &ClassSpec, n_max: usize) -> Result<ProfileTable> {
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        values.push(enumerate_upto_iso(class, n)?.len() as u64);
    }
    Ok(ProfileTable {
        class: class.clone(),
        values,
    })
}

/// Desk-scale growth heuristic; never a proof of asymptotic behavior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthTag {
    EventuallyPolynomial { degree: usize },
    ExponentialCandidate,
    Inconclusive,
}

impl std::fmt::Display for GrowthTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthTag::EventuallyPolynomial { degree } => {
                write!(f, "eventually-polynomial(degree {degree})")
            }
            GrowthTag::ExponentialCandidate => write!(f, "exponential-candidate"),
            GrowthTag::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Classifies the trailing `window` of a profile: the least `d` whose `d`-th
/// finite differences are constant wins; otherwise successive ratios all
/// above `ratio_threshold` flag an exponential candidate.
pub fn growth_classify(
    table: &ProfileTable,
    window: usize,
    ratio_threshold: f64,
) -> Result<GrowthTag> {
    if window < 3 {
        return Err(Error::WindowTooSmall(window));
    }
    if table.values.len() < window {
        return Err(Error::BoundExceeded {
            what: "growth window",
            got: window,
            limit: table.values.len(),
        });
    }
    let tail: Vec<i64> = table.values[table.values.len() - window..]
        .iter()
        .map(|&v| v as i64)
        .collect();
    let mut diffs = tail.clone();
    for degree in 0..window - 1 {
        if diffs.iter().all(|&v| v == diffs[0]) {
            if diffs[0] != 0 || degree == 0 {
                return Ok(GrowthTag::EventuallyPolynomial { degree });
            }
            // constant zero differences collapse to a lower degree already
            return Ok(GrowthTag::EventuallyPolynomial { degree: degree - 1 });
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let ratios_exceed = tail
        .windows(2)
        .all(|w| w[0] > 0 && (w[1] as f64) / (w[0] as f64) > ratio_threshold);
    if ratios_exceed {
        return Ok(GrowthTag::ExponentialCandidate);
    }
    Ok(GrowthTag::Inconclusive)
}

/// A tower of structures, each hosting the previous one as the induced
/// substructure on a declared subset.
#[derive(Clone, Debug)]
pub struct ChainOfStructures {
    stages: Vec<RelationalStructure>,
    /// `subsets[i]` locates stage `i` inside stage `i+1`.
    subsets: Vec<Vec<usize>>,
}

impl ChainOfStructures {
    pub fn new(stages: Vec<RelationalStructure>, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidStructure("a tower needs at least one stage".into()));
        }
        if subsets.len() + 1 != stages.len() {
            return Err(Error::InvalidStructure(format!(
                "{} stages need {} inclusion subsets, got {}",
                stages.len(),
                stages.len() - 1,
                subsets.len()
            )));
        }
        for (i, subset) in subsets.iter().enumerate() {
            let induced = stages[i + 1].induced_substructure(subset)?;
            if induced != stages[i] {
                return Err(Error::InvalidStructure(format!(
                    "stage {} is not the induced substructure of stage {} on the declared subset",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(ChainOfStructures { stages, subsets })
    }

    pub fn stages(&self) -> &[RelationalStructure] {
        &self.stages
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

/// All monomorphic interval decompositions of `s` into at most `max_blocks`
/// blocks, in cut-set order.
fn interval_decompositions(s: &RelationalStructure, max_blocks: usize) -> Result<Vec<Decomposition>> {
    let rank = s.order_ranks()?;
    let n = s.n();
    let mut by_position = vec![0usize; n];
    for e in 0..n {
        by_position[rank[e]] = e;
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    for count in 1..=max_blocks.min(n) {
        for cuts in (1..n).combinations(count - 1) {
            let mut blocks = Vec::with_capacity(count);
            let mut start = 0usize;
            for &cut in cuts.iter().chain(std::iter::once(&n)) {
                blocks.push(by_position[start..cut].to_vec());
                start = cut;
            }
            let d = Decomposition::new(s, blocks, DecompositionKind::Interval)?;
            if is_monomorphic_decomposition(s, &d, n)? {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Builds the level sets of interval decompositions along the tower, joined
/// by restriction, and returns the decompositions along one full branch,
/// each the restriction of the next. Fails at the first stage admitting no
/// monomorphic interval decomposition into at most `k + 1` blocks.
pub fn koenig_branch(chain: &ChainOfStructures, k: usize) -> Result<Vec<Decomposition>> {
    let max_blocks = k + 1;
    let mut levels: Vec<Vec<Decomposition>> = Vec::new();
    for (i, stage) in chain.stages().iter().enumerate() {
        let level = interval_decompositions(stage, max_blocks)?;
        if level.is_empty() && stage.n() > 0 {
            return Err(Error::EmptyDecompositionLevel {
                stage: i + 1,
                max_blocks,
            });
        }
        if level.is_empty() {
            levels.push(vec![Decomposition {
                blocks: vec![],
                kind: DecompositionKind::Interval,
            }]);
        } else {
            levels.push(level);
        }
    }
    // walk down from the first decomposition of the top level; restriction of
    // a monomorphic interval decomposition is again one, so the branch exists
    let mut branch = vec![levels
        .last()
        .expect("at least one stage")
        .first()
        .expect("level checked nonempty")
        .clone()];
    for i in (0..chain.subsets().len()).rev() {
        let child = branch.last().expect("branch grows top-down");
        let parent = child.restrict(&chain.subsets()[i]);
        debug_assert!(
            levels[i].contains(&parent),
            "restriction lands on the parent level"
        );
        branch.push(parent);
    }
    branch.reverse();
    Ok(branch)
}

/// An `n`-chain with one marked element: a strict total order plus a unary
/// predicate holding at `mark`.
pub fn marked_chain(n: usize, mark: usize) -> Result<RelationalStructure> {
    if mark >= n {
        return Err(Error::OutOfRange { element: mark, n });
    }
    let lt = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| vec![a, b]))
        .collect();
    RelationalStructure::new(
        n,
        vec![
            Relation {
                name: "lt".into(),
                arity: 2,
            },
            Relation {
                name: "mark".into(),
                arity: 1,
            },
        ],
        vec![lt, [vec![mark]].into_iter().collect()],
        Some(0),
    )
}

/// The tower of centered marked chains of odd sizes `1, 3, ..., 2m+1`; each
/// stage sits in the next one step away from both ends.
pub fn marked_chain_tower(levels: usize) -> Result<ChainOfStructures> {
    let mut stages = Vec::new();
    let mut subsets = Vec::new();
    for i in 0..levels {
        let n = 2 * i + 1;
        stages.push(marked_chain(n, n / 2)?);
        if i > 0 {
            subsets.push((1..n - 1).collect());
        }
    }
    ChainOfStructures::new(stages, subsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::crown;
    use crate::relcore::FinitePoset;

    fn single_block(s: &RelationalStructure) -> Decomposition {
        Decomposition::new(
            s,
            vec![(0..s.n()).collect()],
            if s.order_index().is_some() {
                DecompositionKind::Interval
            } else {
                DecompositionKind::General
            },
        )
        .unwrap()
    }

    #[test]
    fn a_chain_is_monomorphic_in_one_block() {
        let s = marked_chain(6, 2).unwrap();
        // strip the mark: plain chain via poset structure
        let chain = FinitePoset::chain(6).to_structure();
        let d = single_block(&chain);
        assert!(is_monomorphic_decomposition(&chain, &d, 6).unwrap());
        // marked chain in one block is not monomorphic
        let d = single_block(&s);
        assert!(!is_monomorphic_decomposition(&s, &d, 6).unwrap());
    }

    #[test]
    fn blocks_around_the_mark_are_monomorphic() {
        let s = marked_chain(6, 2).unwrap();
        let three = Decomposition::new(
            &s,
            vec![vec![0, 1], vec![2], vec![3, 4, 5]],
            DecompositionKind::Interval,
        )
        .unwrap();
        assert!(is_monomorphic_decomposition(&s, &three, 6).unwrap());
        // no two-block interval partition isolates an interior mark
        for cut in 1..6 {
            let two = Decomposition::new(
                &s,
                vec![(0..cut).collect(), (cut..6).collect()],
                DecompositionKind::Interval,
            )
            .unwrap();
            assert!(!is_monomorphic_decomposition(&s, &two, 6).unwrap());
        }
        // a mark at the end is isolated by two blocks
        let end = marked_chain(4, 0).unwrap();
        let two = Decomposition::new(
            &end,
            vec![vec![0], vec![1, 2, 3]],
            DecompositionKind::Interval,
        )
        .unwrap();
        assert!(is_monomorphic_decomposition(&end, &two, 4).unwrap());
    }

    #[test]
    fn crown_split_into_levels_is_not_monomorphic() {
        let s = crown(3).unwrap().to_structure();
        let d = Decomposition::new(
            &s,
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            DecompositionKind::General,
        )
        .unwrap();
        // one minimal-maximal pair is comparable, another is parallel
        assert!(!is_monomorphic_decomposition(&s, &d, 6).unwrap());
    }

    fn plain_chain(n: usize) -> RelationalStructure {
        let lt = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| vec![a, b]))
            .collect();
        RelationalStructure::new(
            n,
            vec![Relation {
                name: "lt".into(),
                arity: 2,
            }],
            vec![lt],
            Some(0),
        )
        .unwrap()
    }

    #[test]
    fn minimal_decomposition_of_a_chain_is_one_block() {
        let d = minimal_interval_decomposition(&plain_chain(5), 3)
            .unwrap()
            .unwrap();
        assert_eq!(d.block_count(), 1);
    }

    #[test]
    fn minimal_decomposition_of_a_marked_chain_needs_three_blocks() {
        let s = marked_chain(6, 2).unwrap();
        let d = minimal_interval_decomposition(&s, 4).unwrap().unwrap();
        assert_eq!(d.block_count(), 3);
        assert_eq!(d.blocks[1], vec![2]);
        assert!(is_monomorphic_decomposition(&s, &d, 6).unwrap());
    }

    #[test]
    fn alternating_ordered_graph_has_no_small_decomposition() {
        // chain with edges only between even-indexed neighbors
        let n = 6usize;
        let lt = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| vec![a, b]))
            .collect();
        let edges = (0..n - 1)
            .filter(|a| a % 2 == 0)
            .flat_map(|a| [vec![a, a + 1], vec![a + 1, a]])
            .collect();
        let s = RelationalStructure::new(
            n,
            vec![
                Relation {
                    name: "lt".into(),
                    arity: 2,
                },
                Relation {
                    name: "edge".into(),
                    arity: 2,
                },
            ],
            vec![lt, edges],
            Some(0),
        )
        .unwrap();
        assert!(minimal_interval_decomposition(&s, 1).unwrap().is_none());
    }

    #[test]
    fn refinements_of_a_monomorphic_decomposition_stay_monomorphic() {
        let s = marked_chain(6, 2).unwrap();
        let refined = Decomposition::new(
            &s,
            vec![vec![0], vec![1], vec![2], vec![3, 4], vec![5]],
            DecompositionKind::Interval,
        )
        .unwrap();
        assert!(is_monomorphic_decomposition(&s, &refined, 6).unwrap());
    }

    #[test]
    fn profile_examples() {
        let lin = profile(&ClassSpec::LinearOrders, 6).unwrap();
        assert_eq!(lin.values, vec![1; 7]);
        let posets = profile(&ClassSpec::AllPosets, 5).unwrap();
        assert_eq!(posets.values, vec![1, 1, 2, 5, 16, 63]);
        let dim2 = profile(&ClassSpec::PosetsDimLe(2), 5).unwrap();
        assert_eq!(dim2.values, posets.values);
        let perms = profile(&ClassSpec::Permutations, 4).unwrap();
        assert_eq!(perms.values, vec![1, 1, 2, 6, 24]);
    }

    #[test]
    fn growth_classification_examples() {
        let table = |values: Vec<u64>| ProfileTable {
            class: ClassSpec::LinearOrders,
            values,
        };
        assert_eq!(
            growth_classify(&table(vec![1, 1, 1, 1, 1]), 4, 1.4).unwrap(),
            GrowthTag::EventuallyPolynomial { degree: 0 }
        );
        assert_eq!(
            growth_classify(&table(vec![1, 2, 5, 16, 63]), 4, 1.5).unwrap(),
            GrowthTag::ExponentialCandidate
        );
        assert_eq!(
            growth_classify(&table(vec![1, 3, 6, 10, 15]), 5, 1.4).unwrap(),
            GrowthTag::EventuallyPolynomial { degree: 2 }
        );
        assert!(matches!(
            growth_classify(&table(vec![1, 2, 3]), 2, 1.4),
            Err(Error::WindowTooSmall(2))
        ));
    }

    #[test]
    fn koenig_branch_on_a_tower_of_plain_chains() {
        let stages: Vec<RelationalStructure> = (1..=3).map(plain_chain).collect();
        let chain =
            ChainOfStructures::new(stages, vec![vec![0], vec![0, 1]]).unwrap();
        let branch = koenig_branch(&chain, 0).unwrap();
        assert_eq!(branch.len(), 3);
        for d in &branch {
            assert_eq!(d.block_count(), 1);
        }
    }

    #[test]
    fn koenig_branch_is_restriction_coherent_on_marked_chains() {
        let tower = marked_chain_tower(4).unwrap();
        let branch = koenig_branch(&tower, 2).unwrap();
        assert_eq!(branch.len(), 4);
        for i in 0..tower.subsets().len() {
            let restricted = branch[i + 1].restrict(&tower.subsets()[i]);
            assert_eq!(restricted, branch[i]);
        }
        for (stage, d) in tower.stages().iter().zip(&branch) {
            assert!(is_monomorphic_decomposition(stage, d, stage.n()).unwrap());
        }
    }

    #[test]
    fn koenig_reports_the_first_failing_stage() {
        let tower = marked_chain_tower(4).unwrap();
        match koenig_branch(&tower, 1) {
            Err(Error::EmptyDecompositionLevel { stage, max_blocks }) => {
                // the 3-point stage is the first with an interior mark
                assert_eq!(stage, 2);
                assert_eq!(max_blocks, 2);
            }
            other => panic!("expected an empty level, got {other:?}"),
        }
    }

    #[test]
    fn tower_validation_rejects_bad_subsets() {
        let stages = vec![
            marked_chain(1, 0).unwrap(),
            marked_chain(3, 1).unwrap(),
        ];
        assert!(ChainOfStructures::new(stages.clone(), vec![vec![0]]).is_err());
        assert!(ChainOfStructures::new(stages, vec![vec![1]]).is_ok());
    }
}
