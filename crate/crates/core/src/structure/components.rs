use std::collections::{BTreeMap, BTreeSet};

use crate::entry::Entry;
use crate::equivalence::biform::literal_view;
use crate::error::{Error, Result};
use crate::matrix::CodMatrix;
use crate::structure::union_find::DisjointSet;

/// Row sets of the direct summands of a COD, ordered by their first row,
/// together with the variables each summand uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub rows: Vec<Vec<usize>>,
    pub vars: Vec<Vec<u32>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Component `i` of `g` as a matrix of its own, variables renumbered to
    /// `1..=k_i` in increasing order.
    pub fn extract(&self, g: &CodMatrix, i: usize) -> Result<CodMatrix> {
        let rows = self.rows[i].iter().map(|&r| g.row(r).to_vec()).collect();
        Ok(CodMatrix::renumbered(rows)?.0)
    }
}

/// Groups rows connected through shared variables.
pub(crate) fn row_components(rows: &[Vec<Entry>]) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(rows.len());
    let mut first_row: BTreeMap<u32, usize> = BTreeMap::new();
    for (r, row) in rows.iter().enumerate() {
        for v in row.iter().filter_map(|e| e.var()) {
            match first_row.get(&v) {
                Some(&r0) => ds.union(r0, r),
                None => {
                    first_row.insert(v, r);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in 0..rows.len() {
        let root = ds.find(r);
        groups.entry(root).or_default().push(r);
    }
    let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
    parts.sort_by_key(|p| p[0]);
    parts
}

/// Connected components of the row/variable incidence graph.
pub fn components(g: &CodMatrix) -> ComponentPartition {
    let rows = row_components(g.rows());
    let vars = rows
        .iter()
        .map(|part| {
            part.iter()
                .flat_map(|&r| g.row(r).iter().filter_map(|e| e.var()))
                .collect::<BTreeSet<u32>>()
                .into_iter()
                .collect()
        })
        .collect();
    ComponentPartition { rows, vars }
}

pub fn is_indecomposable(g: &CodMatrix) -> bool {
    components(g).len() == 1
}

/// Stacks `g1` above `g2`, shifting the variables of `g2` past those of `g1`.
pub fn direct_sum(g1: &CodMatrix, g2: &CodMatrix) -> Result<CodMatrix> {
    if g1.n() != g2.n() {
        return Err(Error::ColumnMismatch(g1.n(), g2.n()));
    }
    let shift = g1.k();
    let mut rows = g1.rows().to_vec();
    rows.extend(g2.rows().iter().map(|row| {
        row.iter()
            .map(|e| match *e {
                Entry::Zero => Entry::Zero,
                Entry::Term { var, neg, conj } => Entry::Term { var: var + shift, neg, conj },
            })
            .collect()
    }));
    CodMatrix::with_shape(g1.n(), g1.k() + g2.k(), rows)
}

/// Deletes columns `m` and `2m` (1-based) of a BCOD in some `B_i` form and
/// splits what is left into its direct summands.
pub fn remove_middle_columns(g: &CodMatrix) -> Result<(CodMatrix, ComponentPartition)> {
    let n = g.n();
    if !n.is_multiple_of(2) || n < 4 {
        return Err(Error::Precondition(format!("need an even column count of at least 4, got {n}")));
    }
    let m = n / 2;
    let in_form = (1..=g.k()).any(|v| literal_view(g.rows(), n, v).is_some_and(|view| view.split == m));
    if !in_form {
        return Err(Error::Precondition("matrix is not in any B_i form".into()));
    }
    let reduced = g.without_columns(&[m - 1, n - 1])?;
    let parts = components(&reduced);
    Ok((reduced, parts))
}
