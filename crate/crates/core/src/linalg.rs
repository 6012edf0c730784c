//! Exact sparse Gaussian elimination over [`Scalar`].

use std::collections::{BTreeMap, HashMap};

use crate::fock::{BasisKet, State};
use crate::generators::CompiledOp;
use crate::scalar::Scalar;

pub(crate) type SparseVec = BTreeMap<usize, Scalar>;

/// Incrementally maintained reduced row echelon form.
#[derive(Default)]
struct Echelon {
    rows: Vec<SparseVec>,
    /// pivot column → row index
    pivot_of: HashMap<usize, usize>,
    pivot_col: Vec<usize>,
}

impl Echelon {
    fn reduce(&self, mut r: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let hit = r.range(cursor..).find(|(c, _)| self.pivot_of.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            let Some((col, coef)) = hit else { break };
            let prow = &self.rows[self.pivot_of[&col]];
            for (c, v) in prow {
                let e = r.entry(*c).or_default();
                *e -= &(&coef * v);
                if e.is_zero() {
                    r.remove(c);
                }
            }
            cursor = col + 1;
        }
        r
    }

    /// Insert a row; returns whether it raised the rank.
    fn insert(&mut self, r: SparseVec) -> bool {
        let r = self.reduce(r);
        let Some((&col, lead)) = r.iter().next() else { return false };
        let inv = lead.inv().expect("nonzero pivot");
        let r: SparseVec = r.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        for row in &mut self.rows {
            if let Some(coef) = row.get(&col).cloned() {
                for (c, v) in &r {
                    let e = row.entry(*c).or_default();
                    *e -= &(&coef * v);
                    if e.is_zero() {
                        row.remove(c);
                    }
                }
            }
        }
        self.pivot_of.insert(col, self.rows.len());
        self.pivot_col.push(col);
        self.rows.push(r);
        true
    }
}

/// Basis of `{x : R x = 0}` for rows over `ncols` columns.
pub(crate) fn nullspace(ncols: usize, mut rows: Vec<SparseVec>) -> Vec<SparseVec> {
    rows.sort_by_key(|r| r.len());
    let mut ech = Echelon::default();
    for r in rows {
        if !r.is_empty() {
            ech.insert(r);
        }
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !ech.pivot_of.contains_key(c)) {
        let mut v = SparseVec::new();
        v.insert(f, Scalar::one());
        for (row, &pc) in ech.rows.iter().zip(&ech.pivot_col) {
            if let Some(c) = row.get(&f) {
                v.insert(pc, -c);
            }
        }
        out.push(v);
    }
    out
}

/// Dimension of the span of the given states.
pub fn rank(states: &[State]) -> usize {
    let mut index: HashMap<BasisKet, usize> = HashMap::new();
    let mut ech = Echelon::default();
    let mut r = 0;
    for s in states {
        let row: SparseVec = s
            .terms()
            .map(|(k, c)| {
                let next = index.len();
                (*index.entry(k.clone()).or_insert(next), c.clone())
            })
            .collect();
        if ech.insert(row) {
            r += 1;
        }
    }
    r
}

/// Whether `span(a) == span(b)`.
pub fn same_span(a: &[State], b: &[State]) -> bool {
    let ra = rank(a);
    if ra != rank(b) {
        return false;
    }
    let both: Vec<State> = a.iter().chain(b).cloned().collect();
    rank(&both) == ra
}

/// Basis of `{Σ c_j cols_j : op(Σ c_j cols_j) = 0 for every op}`.
///
/// With independent `cols` the result is a basis of the kernel restricted to
/// their span; each vector is returned with its leading coefficient `+1`.
pub fn kernel_on_span(cols: &[State], ops: &[CompiledOp]) -> Vec<State> {
    let Some(first) = cols.first() else { return Vec::new() };
    let params = *first.params();
    let mut rows: BTreeMap<(usize, BasisKet), SparseVec> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (oi, op) in ops.iter().enumerate() {
            for (k, c) in op.apply(col).terms() {
                rows.entry((oi, k.clone())).or_default().insert(j, c.clone());
            }
        }
    }
    nullspace(cols.len(), rows.into_values().collect())
        .into_iter()
        .map(|coeffs| {
            let mut s = State::zero(params);
            for (j, c) in coeffs {
                s.add_scaled(&cols[j], &c);
            }
            s
        })
        .filter(|s| !s.is_zero())
        .map(|s| s.normalized_leading().expect("nonzero"))
        .collect()
}

/// Kernel over single-ket columns.
pub fn kernel_on_kets(kets: &[BasisKet], params: crate::fock::ModelParams, ops: &[CompiledOp]) -> Vec<State> {
    let cols: Vec<State> = kets.iter().map(|k| State::from_ket(params, k.clone())).collect();
    kernel_on_span(&cols, ops)
}
