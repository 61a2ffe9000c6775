//! Enumerable hereditary classes of finite structures and exhaustive
//! enumeration up to isomorphism.
//!
//! Poset classes are generated incrementally: every `n`-element poset arises
//! from an `(n-1)`-element one by inserting a point with a down-closed set
//! below it and an up-closed set above it, so extending each representative
//! by all such pairs and deduplicating by canonical code covers every
//! isomorphism class.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::dimension::dimension_at_most;
use crate::error::{Error, Result};
use crate::generic::PermutationStructure;
use crate::relcore::{
    are_isomorphic, canonical_form, canonical_relabel, FinitePoset, LinearOrder,
    RelationalStructure,
};

/// Default enumeration ceiling for poset-backed classes.
pub const DEFAULT_POSET_ENUM_BOUND: usize = 7;
/// Permutation classes have n! representatives per size, so they cap earlier.
pub const DEFAULT_PERM_ENUM_BOUND: usize = 6;
/// Chains cost nothing to enumerate: one class per size.
pub const DEFAULT_CHAIN_ENUM_BOUND: usize = 32;

/// `ORDERFORGE_MAX_N`, when set, overrides the default enumeration bounds.
pub fn env_max_n() -> Option<usize> {
    std::env::var("ORDERFORGE_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
}

/// A hereditary class of finite structures that the tool can enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    AllPosets,
    PosetsDimLe(usize),
    LinearOrders,
    Permutations,
    /// An explicit finite list of structures, loaded from a JSON file and
    /// checked for hereditarity on load.
    UserFile {
        path: String,
        by_size: Vec<Vec<RelationalStructure>>,
    },
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::AllPosets => write!(f, "all-posets"),
            ClassSpec::PosetsDimLe(k) => write!(f, "posets-dim-le({k})"),
            ClassSpec::LinearOrders => write!(f, "linear-orders"),
            ClassSpec::Permutations => write!(f, "permutations"),
            ClassSpec::UserFile { path, .. } => write!(f, "user-file:{path}"),
        }
    }
}

impl ClassSpec {
    /// Parses `all-posets`, `posets-dim-le(k)` (or `posets-dim-le-k`),
    /// `linear-orders`, `permutations`, and `user-file:<path>`.
    pub fn parse(spec: &str) -> Result<ClassSpec> {
        match spec {
            "all-posets" => return Ok(ClassSpec::AllPosets),
            "linear-orders" => return Ok(ClassSpec::LinearOrders),
            "permutations" => return Ok(ClassSpec::Permutations),
            _ => {}
        }
        if let Some(rest) = spec.strip_prefix("posets-dim-le") {
            let digits = rest.trim_matches(|c| c == '(' || c == ')' || c == '-');
            if let Ok(k) = digits.parse::<usize>() {
                return Ok(ClassSpec::PosetsDimLe(k));
            }
        }
        if let Some(path) = spec.strip_prefix("user-file:") {
            return ClassSpec::load_user_file(path);
        }
        Err(Error::InvalidStructure(format!("unknown class spec {spec:?}")))
    }

    /// Loads a `{"structures": [...]}` file, deduplicates nothing, and
    /// verifies hereditarity: every one-point deletion of every member must be
    /// isomorphic to a listed member.
    pub fn load_user_file(path: &str) -> Result<ClassSpec> {
        #[derive(serde::Deserialize)]
        struct FileDoc {
            structures: Vec<serde_json::Value>,
        }
        let text = std::fs::read_to_string(path)?;
        let doc: FileDoc = serde_json::from_str(&text)?;
        let mut members = Vec::new();
        for v in doc.structures {
            members.push(RelationalStructure::from_json(&v.to_string())?);
        }
        let max = members.iter().map(|s| s.n()).max().unwrap_or(0);
        let mut by_size: Vec<Vec<RelationalStructure>> = vec![Vec::new(); max + 1];
        for s in members {
            by_size[s.n()].push(canonical_relabel(&s));
        }
        for level in &mut by_size {
            level.sort_by_key(canonical_form);
            level.dedup_by_key(|s| canonical_form(s));
        }
        // one-point deletions closed => closed under all induced substructures
        for level in by_size.iter().rev() {
            for s in level {
                if s.n() == 0 {
                    continue;
                }
                for removed in 0..s.n() {
                    let subset: Vec<usize> = (0..s.n()).filter(|&v| v != removed).collect();
                    let sub = s.induced_substructure(&subset)?;
                    let hosted = by_size
                        .get(sub.n())
                        .map(|lvl| lvl.iter().any(|m| are_isomorphic(m, &sub)))
                        .unwrap_or(false);
                    if !hosted {
                        return Err(Error::NotHereditary(format!(
                            "a {}-point member loses closure when element {removed} is removed",
                            s.n()
                        )));
                    }
                }
            }
        }
        Ok(ClassSpec::UserFile {
            path: path.to_string(),
            by_size,
        })
    }

    pub fn enum_bound(&self) -> usize {
        let default = match self {
            ClassSpec::Permutations => DEFAULT_PERM_ENUM_BOUND,
            ClassSpec::LinearOrders => DEFAULT_CHAIN_ENUM_BOUND,
            ClassSpec::UserFile { by_size, .. } => by_size.len().saturating_sub(1),
            _ => DEFAULT_POSET_ENUM_BOUND,
        };
        match self {
            ClassSpec::UserFile { .. } => default,
            _ => env_max_n().unwrap_or(default),
        }
    }

    /// Exactly one representative per isomorphism class of `n`-element
    /// members, canonically relabeled and sorted by canonical code.
    pub fn enumerate(&self, n: usize) -> Result<Vec<RelationalStructure>> {
        enumerate_upto_iso(self, n)
    }

    /// Membership test for a single structure.
    pub fn contains(&self, s: &RelationalStructure) -> Result<bool> {
        match self {
            ClassSpec::AllPosets => Ok(FinitePoset::from_structure(s).is_ok()),
            ClassSpec::PosetsDimLe(k) => match FinitePoset::from_structure(s) {
                Ok(p) => {
                    if p.n() == 0 {
                        return Ok(true);
                    }
                    dimension_at_most(&p, *k)
                }
                Err(_) => Ok(false),
            },
            ClassSpec::LinearOrders => Ok(FinitePoset::from_structure(s)
                .map(|p| p.is_chain())
                .unwrap_or(false)),
            ClassSpec::Permutations => Ok(PermutationStructure::from_structure(s).is_ok()),
            ClassSpec::UserFile { by_size, .. } => Ok(by_size
                .get(s.n())
                .map(|lvl| lvl.iter().any(|m| are_isomorphic(m, s)))
                .unwrap_or(false)),
        }
    }
}

/// See [`ClassSpec::enumerate`].
pub fn enumerate_upto_iso(class: &ClassSpec, n: usize) -> Result<Vec<RelationalStructure>> {
    let bound = class.enum_bound();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "class enumeration",
            got: n,
            limit: bound,
        });
    }
    let mut out = match class {
        ClassSpec::AllPosets => poset_levels(n)
            .pop()
            .unwrap_or_default()
            .iter()
            .map(|p| p.to_structure())
            .collect(),
        ClassSpec::PosetsDimLe(k) => poset_levels(n)
            .pop()
            .unwrap_or_default()
            .iter()
            .filter(|p| dimension_at_most(p, *k).unwrap_or(false))
            .map(|p| p.to_structure())
            .collect(),
        ClassSpec::LinearOrders => {
            vec![FinitePoset::chain(n).to_structure()]
        }
        ClassSpec::Permutations => (0..n)
            .permutations(n)
            .map(|seq| {
                let ord2 = LinearOrder::from_sequence(&seq).expect("permutation");
                PermutationStructure::new(LinearOrder::identity(n), ord2)
                    .expect("same domain")
                    .to_structure()
            })
            .collect(),
        ClassSpec::UserFile { by_size, .. } => {
            by_size.get(n).cloned().unwrap_or_default()
        }
    };
    out = out.iter().map(canonical_relabel).collect();
    out.sort_by_key(canonical_form);
    Ok(out)
}

/// All poset isomorphism classes by size, `levels[m]` holding size `m`.
fn poset_levels(n: usize) -> Vec<Vec<FinitePoset>> {
    let mut levels: Vec<Vec<FinitePoset>> = vec![vec![FinitePoset::antichain(0)]];
    for m in 1..=n {
        let mut seen: BTreeMap<_, FinitePoset> = BTreeMap::new();
        for base in &levels[m - 1] {
            for ext in one_point_extensions(base) {
                let code = canonical_form(&ext.to_structure());
                seen.entry(code).or_insert(ext);
            }
        }
        levels.push(seen.into_values().collect());
    }
    levels
}

/// Every poset obtained from `base` by adding one point `z` with a down-set
/// strictly below `z` and an up-set strictly above it.
pub(crate) fn one_point_extensions(base: &FinitePoset) -> Vec<FinitePoset> {
    let n = base.n();
    let subsets = 1usize << n;
    let mut downs = Vec::new();
    let mut ups = Vec::new();
    for mask in 0..subsets {
        let members: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let down_closed = members
            .iter()
            .all(|&v| (0..n).all(|u| !base.leq(u, v) || mask & (1 << u) != 0));
        if down_closed {
            downs.push(mask);
        }
        let up_closed = members
            .iter()
            .all(|&v| (0..n).all(|u| !base.leq(v, u) || mask & (1 << u) != 0));
        if up_closed {
            ups.push(mask);
        }
    }
    let mut out = Vec::new();
    for &down in &downs {
        'up: for &up in &ups {
            if down & up != 0 {
                continue;
            }
            // transitivity through the new point
            for d in 0..n {
                if down & (1 << d) == 0 {
                    continue;
                }
                for u in 0..n {
                    if up & (1 << u) != 0 && !base.leq(d, u) {
                        continue 'up;
                    }
                }
            }
            let m = n + 1;
            let mut leq = vec![false; m * m];
            for a in 0..n {
                for b in 0..n {
                    leq[a * m + b] = base.leq(a, b);
                }
            }
            leq[n * m + n] = true;
            for d in 0..n {
                if down & (1 << d) != 0 {
                    leq[d * m + n] = true;
                }
            }
            for u in 0..n {
                if up & (1 << u) != 0 {
                    leq[n * m + u] = true;
                }
            }
            out.push(FinitePoset::new(m, leq).expect("extension is a poset"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumerator: filter every reflexive boolean matrix by the
    /// poset axioms, then deduplicate by pairwise bijection search.
    pub(crate) fn naive_poset_classes(n: usize) -> Vec<FinitePoset> {
        let off_diag: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b)
            .collect();
        let mut found: Vec<FinitePoset> = Vec::new();
        for mask in 0..(1usize << off_diag.len()) {
            let mut leq = vec![false; n * n];
            for a in 0..n {
                leq[a * n + a] = true;
            }
            for (i, &(a, b)) in off_diag.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    leq[a * n + b] = true;
                }
            }
            let Ok(p) = FinitePoset::new(n, leq) else {
                continue;
            };
            let known = found.iter().any(|q| {
                (0..n).permutations(n).any(|perm| {
                    (0..n).all(|a| (0..n).all(|b| p.leq(a, b) == q.leq(perm[a], perm[b])))
                })
            });
            if !known {
                found.push(p);
            }
        }
        found
    }

    #[test]
    fn poset_counts_match_known_values() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| enumerate_upto_iso(&ClassSpec::AllPosets, n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn naive_enumerator_agrees_for_tiny_sizes() {
        for n in 0..=3 {
            let fast = enumerate_upto_iso(&ClassSpec::AllPosets, n).unwrap();
            let naive = naive_poset_classes(n);
            assert_eq!(fast.len(), naive.len(), "count mismatch at n={n}");
            for p in &naive {
                let matches = fast
                    .iter()
                    .filter(|s| are_isomorphic(s, &p.to_structure()))
                    .count();
                assert_eq!(matches, 1);
            }
        }
    }

    #[test]
    fn linear_orders_have_one_class_per_size() {
        for n in 0..=6 {
            assert_eq!(
                enumerate_upto_iso(&ClassSpec::LinearOrders, n).unwrap().len(),
                1
            );
        }
    }

    #[test]
    fn permutation_counts_are_factorials() {
        let counts: Vec<usize> = (0..=4)
            .map(|n| {
                enumerate_upto_iso(&ClassSpec::Permutations, n)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 24]);
    }

    #[test]
    fn dimension_filter_is_vacuous_through_size_five() {
        for n in 0..=5 {
            assert_eq!(
                enumerate_upto_iso(&ClassSpec::PosetsDimLe(2), n).unwrap().len(),
                enumerate_upto_iso(&ClassSpec::AllPosets, n).unwrap().len()
            );
        }
    }

    #[test]
    fn enumeration_is_sorted_and_duplicate_free() {
        let reps = enumerate_upto_iso(&ClassSpec::AllPosets, 4).unwrap();
        let codes: Vec<_> = reps.iter().map(canonical_form).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        std::env::remove_var("ORDERFORGE_MAX_N");
        assert!(matches!(
            enumerate_upto_iso(&ClassSpec::AllPosets, 8),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn class_spec_parsing() {
        assert_eq!(ClassSpec::parse("all-posets").unwrap(), ClassSpec::AllPosets);
        assert_eq!(
            ClassSpec::parse("posets-dim-le(2)").unwrap(),
            ClassSpec::PosetsDimLe(2)
        );
        assert_eq!(
            ClassSpec::parse("posets-dim-le-3").unwrap(),
            ClassSpec::PosetsDimLe(3)
        );
        assert!(ClassSpec::parse("wibble").is_err());
    }

    #[test]
    fn user_file_round_trip_and_hereditarity() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.json");
        // chains of sizes 0..2: hereditary
        let members: Vec<serde_json::Value> = (0..=2)
            .map(|n| {
                serde_json::from_str(&FinitePoset::chain(n).to_structure().to_json()).unwrap()
            })
            .collect();
        std::fs::write(
            &good,
            serde_json::to_string(&serde_json::json!({ "structures": members })).unwrap(),
        )
        .unwrap();
        let class = ClassSpec::load_user_file(good.to_str().unwrap()).unwrap();
        assert_eq!(enumerate_upto_iso(&class, 2).unwrap().len(), 1);
        assert!(class.contains(&FinitePoset::chain(2).to_structure()).unwrap());
        assert!(!class.contains(&FinitePoset::antichain(2).to_structure()).unwrap());

        // a 2-chain without the 1-point structure is not hereditary
        let bad = dir.path().join("bad.json");
        let members = vec![serde_json::from_str::<serde_json::Value>(
            &FinitePoset::chain(2).to_structure().to_json(),
        )
        .unwrap()];
        std::fs::write(
            &bad,
            serde_json::to_string(&serde_json::json!({ "structures": members })).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            ClassSpec::load_user_file(bad.to_str().unwrap()),
            Err(Error::NotHereditary(_))
        ));
    }

    #[test]
    fn contains_checks_the_right_properties() {
        let crown = crate::dimension::crown(3).unwrap().to_structure();
        assert!(ClassSpec::AllPosets.contains(&crown).unwrap());
        assert!(!ClassSpec::PosetsDimLe(2).contains(&crown).unwrap());
        assert!(ClassSpec::PosetsDimLe(3).contains(&crown).unwrap());
        assert!(!ClassSpec::LinearOrders.contains(&crown).unwrap());
        let chain = FinitePoset::chain(3).to_structure();
        assert!(ClassSpec::LinearOrders.contains(&chain).unwrap());
    }
}
