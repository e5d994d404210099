//! Partially known BCODs and the two-column completion.
//!
//! A [`PartialBcod`] has `n = 2m` columns whose first `2m` rows form the
//! literal `B_1` block
//!
//! ```text
//!   z1 I     0  |  M'_1   alpha
//!   0        z1 | -alpha^T  0
//!   ------------+------------------
//!   -M'^H   a*  |  z1* I    0
//!   -alpha^H 0  |  0        z1*
//! ```
//!
//! and whose lower rows are known outside columns `m` and `2m` (1-based).

use crate::entry::Entry;
use crate::equivalence::biform::literal_view;
use crate::error::{Error, Result};
use crate::format::RawGrid;
use crate::matrix::CodMatrix;
use crate::structure::components::is_indecomposable;
use crate::verify::verify_bcod;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBcod {
    m: usize,
    k: u32,
    cells: Vec<Vec<Option<Entry>>>,
}

impl PartialBcod {
    /// Validates the layout described in the module docs.
    pub fn new(k: u32, cells: Vec<Vec<Option<Entry>>>) -> Result<Self> {
        let p = cells.len();
        let n = cells.first().map_or(0, Vec::len);
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Precondition(format!("{n} columns is not a positive even count")));
        }
        let m = n / 2;
        if p < n {
            return Err(Error::Precondition(format!("{p} rows cannot hold the {n}-row B_1 block")));
        }
        for (r, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition(format!("row {} has {} cells, expected {n}", r + 1, row.len())));
            }
            for (c, cell) in row.iter().enumerate() {
                match cell {
                    None if r < n || (c != m - 1 && c != n - 1) => {
                        return Err(Error::Precondition(format!("cell ({}, {}) may not be unknown", r + 1, c + 1)));
                    }
                    Some(e) => {
                        if let Some(v) = e.var() {
                            if v == 0 || v > k {
                                return Err(Error::VariableOutOfRange { var: v, k });
                            }
                        }
                    }
                    None => {}
                }
            }
        }
        let top: Vec<Vec<Entry>> = cells[..n].iter().map(|row| row.iter().map(|c| c.unwrap()).collect()).collect();
        let view = literal_view(&top, n, 1)
            .filter(|v| v.split == m && v.diag_rows.iter().enumerate().all(|(i, &r)| i == r))
            .ok_or_else(|| Error::Precondition("first 2m rows are not the B_1 block in order".into()))?;
        let part = Self { m, k, cells };
        if m >= 2 {
            let alpha = part.alpha();
            if let Some(c) = alpha.iter().position(|e| e.is_zero()) {
                return Err(Error::Precondition(format!("alpha has a zero in row {}", c + 1)));
            }
            let mut seen: Vec<Entry> = view.block[..m - 1]
                .iter()
                .flat_map(|row| row[..m - 1].iter().copied())
                .filter(|e| !e.is_zero())
                .collect();
            for (c, &a) in alpha.iter().enumerate() {
                if seen.iter().any(|e| e.same_up_to_sign(a)) {
                    return Err(Error::Precondition(format!("alpha entry {a} in row {} repeats", c + 1)));
                }
                seen.push(a);
            }
        }
        Ok(part)
    }

    pub fn from_raw(grid: &RawGrid) -> Result<Self> {
        Self::new(grid.k, grid.cells.clone())
    }

    pub fn to_raw(&self) -> RawGrid {
        RawGrid { p: self.p(), n: self.n(), k: self.k, cells: self.cells.clone() }
    }

    pub fn p(&self) -> usize {
        self.cells.len()
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cell(&self, r: usize, c: usize) -> Option<Entry> {
        self.cells[r][c]
    }

    pub fn unknown_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_none()).count()
    }

    /// Column `m` restricted to rows `1..m-1` of the `M_1` block.
    pub fn alpha(&self) -> Vec<Entry> {
        let m = self.m;
        (0..m.saturating_sub(1)).map(|c| self.cells[c][2 * m - 1].unwrap()).collect()
    }

    /// The leading `(m-1) x (m-1)` part of `M_1`.
    pub fn m_prime(&self) -> Vec<Vec<Entry>> {
        let m = self.m;
        (0..m.saturating_sub(1))
            .map(|r| (m..2 * m - 1).map(|c| self.cells[r][c].unwrap()).collect())
            .collect()
    }

    /// Rows below the block restricted to columns `1..m-1`.
    pub fn lower_left(&self) -> Vec<Vec<Entry>> {
        self.lower(0)
    }

    /// Rows below the block restricted to columns `m+1..2m-1`.
    pub fn lower_right(&self) -> Vec<Vec<Entry>> {
        self.lower(self.m)
    }

    fn lower(&self, start: usize) -> Vec<Vec<Entry>> {
        let n = self.n();
        self.cells[n..]
            .iter()
            .map(|row| row[start..start + self.m - 1].iter().map(|c| c.unwrap()).collect())
            .collect()
    }
}

/// Blanks columns `m` and `2m` below the `B_1` block of `g`.
pub fn strip_to_partial(g: &CodMatrix) -> Result<PartialBcod> {
    let report = verify_bcod(g);
    if !report.passed() {
        return Err(Error::Precondition(format!("input is not a BCOD: {}", report.violations[0].axiom)));
    }
    if !is_indecomposable(g) {
        return Err(Error::Precondition("input is decomposable".into()));
    }
    let (n, m) = (g.n(), g.m());
    let cells = g
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, &e)| if r >= n && (c == m - 1 || c == n - 1) { None } else { Some(e) })
                .collect()
        })
        .collect();
    PartialBcod::new(g.k(), cells)
}

/// Fills columns `m` and `2m` by orthogonality forcing.
///
/// Row `r` with known `x` in column `j` and known `y` in a middle column `t`
/// forces the row `r'` holding `var(y)` in column `j`: orthogonality of
/// columns `j` and `t` on rows `r, r'` makes `G[r', t]` a signed copy of
/// `x*`. A row reaching `m` nonzeros has its remaining unknown cells set to
/// zero.
pub fn complete_columns(part: &PartialBcod) -> Result<CodMatrix> {
    let (p, n, m) = (part.p(), part.n(), part.m());
    let middle = [m - 1, n - 1];
    let mut cells = part.cells.clone();

    // holder[j][v] is the row holding z_v in fixed column j.
    let mut holder = vec![vec![usize::MAX; part.k as usize + 1]; n];
    for (j, col) in holder.iter_mut().enumerate() {
        if middle.contains(&j) {
            continue;
        }
        for (r, row) in cells.iter().enumerate() {
            if let Some(Some(v)) = row[j].map(Entry::var) {
                if col[v as usize] != usize::MAX {
                    return Err(Error::Inconsistent { row: r + 1, col: j + 1 });
                }
                col[v as usize] = r;
            }
        }
    }

    let nonzeros = |row: &[Option<Entry>]| row.iter().filter(|c| matches!(c, Some(e) if !e.is_zero())).count();
    let settle_row = |row: &mut Vec<Option<Entry>>, r: usize| -> Result<()> {
        let count = nonzeros(row);
        if count > m {
            return Err(Error::Inconsistent { row: r + 1, col: middle[0] + 1 });
        }
        if count == m {
            for cell in row.iter_mut().filter(|c| c.is_none()) {
                *cell = Some(Entry::Zero);
            }
        }
        Ok(())
    };
    for (r, row) in cells.iter_mut().enumerate() {
        settle_row(row, r)?;
    }

    loop {
        // (forced var, source row, target row, target column, value)
        let mut best: Option<(u32, usize, usize, usize, Entry)> = None;
        for r in 0..p {
            for &t in &middle {
                let Some(y @ Entry::Term { .. }) = cells[r][t] else { continue };
                let yv = y.var().unwrap();
                for j in (0..n).filter(|j| !middle.contains(j)) {
                    let Some(x @ Entry::Term { .. }) = cells[r][j] else { continue };
                    let xv = x.var().unwrap();
                    let r2 = holder[j][yv as usize];
                    if r2 == usize::MAX {
                        return Err(Error::Inconsistent { row: r + 1, col: t + 1 });
                    }
                    let g = cells[r2][j].unwrap();
                    if g.is_conj() == y.is_conj() {
                        return Err(Error::Inconsistent { row: r2 + 1, col: j + 1 });
                    }
                    let sign = -(x.sign() * y.sign() * g.sign());
                    let value = Entry::term(xv, sign < 0, !x.is_conj());
                    match cells[r2][t] {
                        Some(e) if e != value => return Err(Error::Inconsistent { row: r2 + 1, col: t + 1 }),
                        Some(_) => {}
                        None => {
                            if best.is_none_or(|(bv, br, ..)| (xv, r) < (bv, br)) {
                                best = Some((xv, r, r2, t, value));
                            }
                        }
                    }
                }
            }
        }
        let Some((_, _, r2, t, value)) = best else { break };
        cells[r2][t] = Some(value);
        settle_row(&mut cells[r2], r2)?;
    }

    let unknown = cells.iter().flatten().filter(|c| c.is_none()).count();
    if unknown > 0 {
        return Err(Error::Stuck { unknown });
    }
    let rows: Vec<Vec<Entry>> = cells.into_iter().map(|row| row.into_iter().map(Option::unwrap).collect()).collect();
    let g = CodMatrix::with_shape(n, part.k, rows).map_err(|_| Error::Inconsistent { row: 0, col: 0 })?;
    let report = verify_bcod(&g);
    if let Some(v) = report.violations.first() {
        return Err(Error::Inconsistent {
            row: v.rows.first().copied().unwrap_or(0),
            col: v.columns.first().copied().unwrap_or(0),
        });
    }
    Ok(g)
}
