//! Exact canonical forms: the minimum relation-grid encoding over all domain
//! bijections. Intended for domains up to 8 elements, where the factorial
//! scan is cheap and needs no refinement heuristics.

use itertools::Itertools;

use super::structure::RelationalStructure;

/// A byte sequence that two structures share exactly when they are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Header: domain size, signature, order designation. Shared by all
/// relabelings, so it is excluded from the minimization.
fn header(s: &RelationalStructure) -> Vec<u8> {
    let mut out = Vec::new();
    out.push(s.n() as u8);
    out.push(s.signature().len() as u8);
    for rel in s.signature() {
        out.push(rel.name.len() as u8);
        out.extend_from_slice(rel.name.as_bytes());
        out.push(rel.arity as u8);
    }
    out.push(0xff);
    out.push(match s.order_index() {
        None => 0,
        Some(i) => (i + 1) as u8,
    });
    out
}

/// Relation grids under the relabeling `a -> perm[a]`, one byte per cell,
/// cells in row-major tuple order over the new labels.
fn grid_bytes(s: &RelationalStructure, inverse: &[usize]) -> Vec<u8> {
    let n = s.n();
    let mut out = Vec::new();
    for (i, rel) in s.signature().iter().enumerate() {
        let arity = rel.arity;
        let cells = n.pow(arity as u32);
        let mut tuple = vec![0usize; arity];
        let mut preimage = vec![0usize; arity];
        for cell in 0..cells {
            let mut rest = cell;
            for slot in (0..arity).rev() {
                tuple[slot] = rest % n;
                rest /= n;
            }
            for slot in 0..arity {
                preimage[slot] = inverse[tuple[slot]];
            }
            out.push(u8::from(s.has(i, &preimage)));
        }
    }
    out
}

/// Two structures get equal codes iff they are isomorphic; deterministic
/// across runs.
pub fn canonical_form(s: &RelationalStructure) -> CanonicalCode {
    CanonicalCode(canonical_inner(s).0)
}

/// The structure relabeled into its canonical labeling.
pub fn canonical_relabel(s: &RelationalStructure) -> RelationalStructure {
    let (_, best_perm) = canonical_inner(s);
    s.relabel(&best_perm).expect("canonical relabel is valid")
}

fn canonical_inner(s: &RelationalStructure) -> (Vec<u8>, Vec<usize>) {
    let n = s.n();
    let head = header(s);
    if n == 0 {
        return (head, vec![]);
    }
    let mut best_grid: Option<Vec<u8>> = None;
    let mut best_perm: Vec<usize> = (0..n).collect();
    let mut inverse = vec![0usize; n];
    for perm in (0..n).permutations(n) {
        for (a, &img) in perm.iter().enumerate() {
            inverse[img] = a;
        }
        let grid = grid_bytes(s, &inverse);
        if best_grid.as_ref().is_none_or(|b| grid < *b) {
            best_grid = Some(grid);
            best_perm = perm;
        }
    }
    let mut code = head;
    code.extend_from_slice(&best_grid.expect("at least one bijection"));
    (code, best_perm)
}

pub fn are_isomorphic(s: &RelationalStructure, t: &RelationalStructure) -> bool {
    s.same_signature(t) && s.n() == t.n() && canonical_form(s) == canonical_form(t)
}
