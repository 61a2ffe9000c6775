//! Exhaustive embedding search between structures over a common signature.
//!
//! An embedding preserves and reflects every relation: a tuple holds in the
//! source iff its image holds in the target.

use crate::error::{Error, Result};

use super::structure::RelationalStructure;
use super::EmbeddingMap;

/// Per-relation lookup tables; binary and unary relations get dense grids.
struct RelTables<'a> {
    s: &'a RelationalStructure,
    t: &'a RelationalStructure,
    s_grids: Vec<Option<Vec<bool>>>,
    t_grids: Vec<Option<Vec<bool>>>,
}

impl<'a> RelTables<'a> {
    fn new(s: &'a RelationalStructure, t: &'a RelationalStructure) -> Self {
        let grid = |st: &RelationalStructure, i: usize| -> Option<Vec<bool>> {
            let arity = st.signature()[i].arity;
            if arity == 0 || arity > 2 {
                return None;
            }
            let n = st.n();
            let mut g = vec![false; n.pow(arity as u32)];
            for t in st.relation(i) {
                let idx = if arity == 1 { t[0] } else { t[0] * n + t[1] };
                g[idx] = true;
            }
            Some(g)
        };
        RelTables {
            s,
            t,
            s_grids: (0..s.signature().len()).map(|i| grid(s, i)).collect(),
            t_grids: (0..t.signature().len()).map(|i| grid(t, i)).collect(),
        }
    }

    fn s_has(&self, i: usize, tuple: &[usize]) -> bool {
        match &self.s_grids[i] {
            Some(g) if tuple.len() == 1 => g[tuple[0]],
            Some(g) => g[tuple[0] * self.s.n() + tuple[1]],
            None => self.s.has(i, tuple),
        }
    }

    fn t_has(&self, i: usize, tuple: &[usize]) -> bool {
        match &self.t_grids[i] {
            Some(g) if tuple.len() == 1 => g[tuple[0]],
            Some(g) => g[tuple[0] * self.t.n() + tuple[1]],
            None => self.t.has(i, tuple),
        }
    }
}

/// Checks every tuple of every relation in both directions.
pub fn is_embedding(
    s: &RelationalStructure,
    t: &RelationalStructure,
    map: &EmbeddingMap,
) -> Result<bool> {
    if !s.same_signature(t) {
        return Err(Error::SignatureMismatch);
    }
    if map.source_size() != s.n() {
        return Err(Error::DomainMismatch {
            expected: s.n(),
            got: map.source_size(),
        });
    }
    for &img in map.as_slice() {
        if img >= t.n() {
            return Err(Error::OutOfRange {
                element: img,
                n: t.n(),
            });
        }
    }
    for (i, rel) in s.signature().iter().enumerate() {
        let arity = rel.arity;
        let mut tuple = vec![0usize; arity];
        let cells = s.n().pow(arity as u32);
        for cell in 0..cells {
            let mut rest = cell;
            for slot in (0..arity).rev() {
                tuple[slot] = rest % s.n();
                rest /= s.n();
            }
            let image: Vec<usize> = tuple.iter().map(|&e| map.apply(e)).collect();
            if s.has(i, &tuple) != t.has(i, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All embeddings of `s` into `t`, in lexicographic order of the map vector,
/// truncated to `limit`. Exhaustive when `limit` exceeds the embedding count.
pub fn find_embeddings(
    s: &RelationalStructure,
    t: &RelationalStructure,
    limit: usize,
) -> Result<Vec<EmbeddingMap>> {
    if !s.same_signature(t) {
        return Err(Error::SignatureMismatch);
    }
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    if s.n() > t.n() {
        return Ok(out);
    }
    let tables = RelTables::new(s, t);
    let mut assignment: Vec<usize> = Vec::with_capacity(s.n());
    let mut used = vec![false; t.n()];
    search(s, t, &tables, &mut assignment, &mut used, limit, &mut out);
    Ok(out)
}

fn search(
    s: &RelationalStructure,
    t: &RelationalStructure,
    tables: &RelTables,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    limit: usize,
    out: &mut Vec<EmbeddingMap>,
) {
    if out.len() >= limit {
        return;
    }
    let k = assignment.len();
    if k == s.n() {
        out.push(EmbeddingMap::new(assignment.clone()).expect("assignment injective"));
        return;
    }
    for cand in 0..t.n() {
        if used[cand] {
            continue;
        }
        assignment.push(cand);
        if consistent(s, tables, assignment, k) {
            used[cand] = true;
            search(s, t, tables, assignment, used, limit, out);
            used[cand] = false;
        }
        assignment.pop();
        if out.len() >= limit {
            return;
        }
    }
}

/// Checks every tuple over the assigned prefix that mentions the newest
/// element `k`, in both directions.
fn consistent(
    s: &RelationalStructure,
    tables: &RelTables,
    assignment: &[usize],
    k: usize,
) -> bool {
    let prefix = assignment.len();
    for (i, rel) in s.signature().iter().enumerate() {
        let arity = rel.arity;
        if arity == 0 {
            continue;
        }
        let cells = prefix.pow(arity as u32);
        let mut tuple = vec![0usize; arity];
        let mut image = vec![0usize; arity];
        for cell in 0..cells {
            let mut rest = cell;
            let mut mentions_k = false;
            for slot in (0..arity).rev() {
                tuple[slot] = rest % prefix;
                rest /= prefix;
                mentions_k |= tuple[slot] == k;
            }
            if !mentions_k {
                continue;
            }
            for slot in 0..arity {
                image[slot] = assignment[tuple[slot]];
            }
            if tables.s_has(i, &tuple) != tables.t_has(i, &image) {
                return false;
            }
        }
    }
    true
}
