use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::entry::Entry;
use crate::error::{Error, Result};

/// A `p x n` grid of [`Entry`] cells over the indeterminates `z1..zk`.
///
/// Construction checks that every variable index lies in `1..=k` and that
/// each of them occurs somewhere. The COD axioms themselves are checked by
/// [`crate::verify_cod`], not here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodMatrix {
    n: usize,
    k: u32,
    rows: Vec<Vec<Entry>>,
}

/// How the nonzero entries of a row are conjugated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowClass {
    Conjugated,
    Nonconjugated,
    Mixed,
    AllZero,
}

impl CodMatrix {
    pub fn new(k: u32, rows: Vec<Vec<Entry>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::with_shape(n, k, rows)
    }

    /// Like [`CodMatrix::new`] but with an explicit column count, so that
    /// matrices without rows keep their width.
    pub fn with_shape(n: usize, k: u32, rows: Vec<Vec<Entry>>) -> Result<Self> {
        let mut used = BTreeSet::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::IndexOutOfRange(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for e in row {
                if let Some(var) = e.var() {
                    if var == 0 || var > k {
                        return Err(Error::VariableOutOfRange { var, k });
                    }
                    used.insert(var);
                }
            }
        }
        if let Some(missing) = (1..=k).find(|v| !used.contains(v)) {
            return Err(Error::UnusedVariable(missing));
        }
        Ok(CodMatrix { n, k, rows })
    }

    /// Builds a matrix taking `k` as the largest variable index present.
    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let k = max_var(&rows);
        Self::new(k, rows)
    }

    /// Relabels the variables present in `rows` to `1..=k'` preserving their
    /// order; returns the matrix and the old index of each new variable.
    pub fn renumbered(rows: Vec<Vec<Entry>>) -> Result<(Self, Vec<u32>)> {
        let n = rows.first().map_or(0, Vec::len);
        let present: BTreeSet<u32> = rows.iter().flatten().filter_map(|e| e.var()).collect();
        let old: Vec<u32> = present.into_iter().collect();
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        Entry::Zero => Entry::Zero,
                        Entry::Term { var, neg, conj } => {
                            let v = old.binary_search(&var).expect("collected above") as u32 + 1;
                            Entry::Term { var: v, neg, conj }
                        }
                    })
                    .collect()
            })
            .collect();
        let k = old.len() as u32;
        Ok((Self::with_shape(n, k, rows)?, old))
    }

    pub(crate) fn from_parts_unchecked(n: usize, k: u32, rows: Vec<Vec<Entry>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n));
        CodMatrix { n, k, rows }
    }

    pub fn p(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Half the column count.
    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn get(&self, r: usize, c: usize) -> Entry {
        self.rows[r][c]
    }

    pub fn row(&self, r: usize) -> &[Entry] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Entry>> {
        self.rows
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = Entry> + '_ {
        self.rows.iter().map(move |row| row[c])
    }

    pub fn row_class(&self, r: usize) -> Result<RowClass> {
        if r >= self.p() {
            return Err(Error::IndexOutOfRange(format!("row {} of {}", r + 1, self.p())));
        }
        Ok(classify_row(&self.rows[r]))
    }

    /// The matrix with the given columns removed; `k` is recomputed from the
    /// variables that remain.
    pub fn without_columns(&self, drop: &[usize]) -> Result<Self> {
        let keep: Vec<usize> = (0..self.n).filter(|c| !drop.contains(c)).collect();
        let rows = self
            .rows
            .iter()
            .map(|row| keep.iter().map(|&c| row[c]).collect())
            .collect::<Vec<Vec<Entry>>>();
        let k = max_var(&rows);
        Self::with_shape(keep.len(), k, rows)
    }
}

pub fn classify_row(row: &[Entry]) -> RowClass {
    let mut conj = false;
    let mut plain = false;
    for e in row {
        match e {
            Entry::Zero => {}
            Entry::Term { conj: true, .. } => conj = true,
            Entry::Term { conj: false, .. } => plain = true,
        }
    }
    match (plain, conj) {
        (false, false) => RowClass::AllZero,
        (true, false) => RowClass::Nonconjugated,
        (false, true) => RowClass::Conjugated,
        (true, true) => RowClass::Mixed,
    }
}

/// Classifies row `r` (0-based) by the conjugation flags of its nonzero cells.
pub fn row_conjugation_class(g: &CodMatrix, r: usize) -> Result<RowClass> {
    g.row_class(r)
}

pub(crate) fn max_var(rows: &[Vec<Entry>]) -> u32 {
    rows.iter().flatten().filter_map(|e| e.var()).max().unwrap_or(0)
}

impl fmt::Display for CodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize_matrix(self))
    }
}
