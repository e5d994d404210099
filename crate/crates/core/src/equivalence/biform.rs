//! `B_i` forms.
//!
//! A matrix is literally in `B_i` form when, for some split `a`, its first `a`
//! columns carry `+z_i` and the remaining ones `+z_i*`, the rows holding
//! those occurrences form the block
//!
//! ```text
//!   z_i I_a   |  M
//!   ----------+----------
//!   -M^H      |  z_i* I_{n-a}
//! ```
//!
//! and `M` is the `a x (n-a)` block to the right of the `z_i` diagonal. For a
//! BCOD the split is always `m = n / 2`.

use crate::entry::Entry;
use crate::equivalence::ops::{apply_op_rows, EquivOp, OpScript};
use crate::error::{Error, Result};
use crate::matrix::{max_var, CodMatrix};
use crate::verify::{verify_cod, VerificationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiFormView {
    pub var: u32,
    /// Number of columns carrying `+z_var`.
    pub split: usize,
    /// `diag_rows[c]` is the row whose diagonal cell sits in column `c`.
    pub diag_rows: Vec<usize>,
    pub block: Vec<Vec<Entry>>,
}

impl BiFormView {
    /// The strictly upper triangular cells of the block, row-major.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, Entry)> + '_ {
        self.block.iter().enumerate().flat_map(|(a, row)| {
            row.iter().enumerate().filter(move |(b, _)| *b > a).map(move |(b, e)| (a, b, *e))
        })
    }
}

/// The single occurrence of `var` in column `c`, if there is exactly one.
fn occurrence(rows: &[Vec<Entry>], c: usize, var: u32) -> Option<(usize, Entry)> {
    let mut found = None;
    for (r, row) in rows.iter().enumerate() {
        if row[c].var() == Some(var) {
            if found.is_some() {
                return None;
            }
            found = Some((r, row[c]));
        }
    }
    found
}

pub(crate) fn literal_view(rows: &[Vec<Entry>], n: usize, var: u32) -> Option<BiFormView> {
    let mut hits = Vec::with_capacity(n);
    for c in 0..n {
        hits.push(occurrence(rows, c, var)?);
    }
    let split = hits.iter().take_while(|(_, e)| !e.is_conj()).count();
    if hits.iter().skip(split).any(|(_, e)| !e.is_conj()) || hits.iter().any(|(_, e)| e.is_neg()) {
        return None;
    }
    let diag_rows: Vec<usize> = hits.iter().map(|(r, _)| *r).collect();
    let mut seen = vec![false; rows.len()];
    for &r in &diag_rows {
        if std::mem::replace(&mut seen[r], true) {
            return None;
        }
    }
    for (c, &r) in diag_rows.iter().enumerate() {
        let range = if c < split { 0..split } else { split..n };
        if range.clone().any(|c2| c2 != c && !rows[r][c2].is_zero()) {
            return None;
        }
    }
    let block: Vec<Vec<Entry>> = (0..split)
        .map(|c0| (split..n).map(|c1| rows[diag_rows[c0]][c1]).collect())
        .collect();
    for c1 in split..n {
        for c0 in 0..split {
            if rows[diag_rows[c1]][c0] != -block[c0][c1 - split].conjugate() {
                return None;
            }
        }
    }
    Some(BiFormView { var, split, diag_rows, block })
}

/// Returns the view when `g` literally contains the `B_var` block (with the
/// block rows in any order).
pub fn is_bi_form(g: &CodMatrix, var: u32) -> Option<BiFormView> {
    literal_view(g.rows(), g.n(), var)
}

/// Moves the row holding `var` in column `c` to position `c`, keeping the
/// other rows in order after them, then negates rows so the diagonal is `+`.
pub(crate) fn place_rows(rows: &mut Vec<Vec<Entry>>, n: usize, k: u32, var: u32, script: &mut OpScript) -> Result<()> {
    let p = rows.len();
    let mut holder = Vec::with_capacity(n);
    for c in 0..n {
        let (r, _) = occurrence(rows, c, var).ok_or(Error::NotReachable { var, columns: vec![c + 1] })?;
        holder.push(r);
    }
    let mut image = vec![usize::MAX; p];
    for (c, &r) in holder.iter().enumerate() {
        if image[r] != usize::MAX {
            return Err(Error::NotReachable { var, columns: vec![image[r] + 1, c + 1] });
        }
        image[r] = c;
    }
    for (next, slot) in (n..).zip(image.iter_mut().filter(|s| **s == usize::MAX)) {
        *slot = next;
    }
    let perm = EquivOp::RowPerm(image);
    apply_op_rows(rows, n, k, &perm)?;
    script.push(perm);
    for c in 0..n {
        if rows[c][c].is_neg() {
            let op = EquivOp::RowNeg(c);
            apply_op_rows(rows, n, k, &op)?;
            script.push(op);
        }
    }
    Ok(())
}

/// Column-restricted transformation to `B_var` form: only transpositions
/// `(c, m + c)`, row permutations and negations, and possibly conjugating
/// `var` itself.
pub(crate) fn restricted_bi_form(
    rows: &[Vec<Entry>],
    n: usize,
    var: u32,
) -> Result<(Vec<Vec<Entry>>, OpScript, BiFormView)> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::Precondition(format!("{n} columns is not a positive even count")));
    }
    let m = n / 2;
    let k = max_var(rows);
    let mut first_obstruction = None;
    for conjugate in [false, true] {
        let mut work = rows.to_vec();
        let mut script = OpScript::new();
        if conjugate {
            let op = EquivOp::InstConj(var);
            apply_op_rows(&mut work, n, k, &op)?;
            script.push(op);
        }
        let mut swaps = Vec::new();
        let mut obstruction = Vec::new();
        for c in 0..m {
            let left = occurrence(&work, c, var);
            let right = occurrence(&work, m + c, var);
            match (left, right) {
                (Some((_, l)), Some((_, r))) if !l.is_conj() && r.is_conj() => {}
                (Some((_, l)), Some((_, r))) if l.is_conj() && !r.is_conj() => swaps.push(c),
                _ => obstruction.extend([c + 1, m + c + 1]),
            }
        }
        if !obstruction.is_empty() {
            first_obstruction.get_or_insert(obstruction);
            continue;
        }
        for c in swaps {
            let op = EquivOp::ColSwap(c);
            apply_op_rows(&mut work, n, k, &op)?;
            script.push(op);
        }
        place_rows(&mut work, n, k, var, &mut script)?;
        return match literal_view(&work, n, var) {
            Some(view) if view.split == m => Ok((work, script, view)),
            _ => Err(Error::NotReachable { var, columns: vec![] }),
        };
    }
    Err(Error::NotReachable { var, columns: first_obstruction.unwrap_or_default() })
}

/// Transformation to `B_var` form with an arbitrary column permutation:
/// columns carrying `z_var` unconjugated go first, in their original order.
pub(crate) fn free_bi_form(
    rows: &[Vec<Entry>],
    n: usize,
    var: u32,
) -> Result<(Vec<Vec<Entry>>, OpScript, BiFormView)> {
    let k = max_var(rows);
    let mut plain = Vec::new();
    let mut conj = Vec::new();
    for c in 0..n {
        let (_, e) = occurrence(rows, c, var).ok_or(Error::NotReachable { var, columns: vec![c + 1] })?;
        if e.is_conj() {
            conj.push(c);
        } else {
            plain.push(c);
        }
    }
    let mut image = vec![0; n];
    for (pos, &c) in plain.iter().chain(conj.iter()).enumerate() {
        image[c] = pos;
    }
    let mut work = rows.to_vec();
    let mut script = OpScript::new();
    let op = EquivOp::ColPerm(image);
    apply_op_rows(&mut work, n, k, &op)?;
    script.push(op);
    place_rows(&mut work, n, k, var, &mut script)?;
    match literal_view(&work, n, var) {
        Some(view) => Ok((work, script, view)),
        None => Err(Error::NotReachable { var, columns: vec![] }),
    }
}

/// Brings `g` into `B_var` form.
///
/// With `allow_restricted_swaps` the only column operations used are the
/// transpositions `(c, m + c)`, which requires `g` to be balanced; otherwise
/// any column permutation may be used. The script never negates columns or
/// renames variables.
pub fn to_bi_form(
    g: &CodMatrix,
    var: u32,
    allow_restricted_swaps: bool,
) -> Result<(CodMatrix, OpScript, BiFormView)> {
    if var == 0 || var > g.k() {
        return Err(Error::VariableOutOfRange { var, k: g.k() });
    }
    if !verify_cod(g).passed() {
        return Err(Error::Precondition("input is not a COD".into()));
    }
    let (rows, script, view) = if allow_restricted_swaps {
        restricted_bi_form(g.rows(), g.n(), var)?
    } else {
        free_bi_form(g.rows(), g.n(), var)?
    };
    Ok((CodMatrix::from_parts_unchecked(g.n(), g.k(), rows), script, view))
}

/// Checks that no two strictly upper triangular nonzero cells of the block
/// agree up to sign.
pub fn check_upper_triangle_distinct(view: &BiFormView) -> VerificationReport {
    let mut report = VerificationReport::default();
    let cells: Vec<(usize, usize, Entry)> = view.upper_triangle().filter(|(_, _, e)| !e.is_zero()).collect();
    'outer: for (i, &(a, b, e)) in cells.iter().enumerate() {
        for &(a2, b2, e2) in &cells[i + 1..] {
            if e.same_up_to_sign(e2) {
                report.violations.push(Violation {
                    axiom: "distinct-upper-triangle",
                    rows: vec![a + 1, a2 + 1],
                    columns: vec![b + 1, b2 + 1],
                    detail: format!("M_{}({},{}) = {e} repeats M_{}({},{}) = {e2}", view.var, a + 1, b + 1, view.var, a2 + 1, b2 + 1),
                });
                break 'outer;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entry::Entry as E;

    #[test]
    fn two_by_two_has_empty_block() {
        let g = CodMatrix::new(1, vec![vec![E::z(1), E::Zero], vec![E::Zero, E::zc(1)]]).unwrap();
        let view = is_bi_form(&g, 1).unwrap();
        assert_eq!(view.split, 1);
        assert_eq!(view.block, vec![vec![E::Zero]]);
    }

    #[test]
    fn alamouti_is_b1_not_b2() {
        let g = CodMatrix::new(2, vec![vec![E::z(1), E::z(2)], vec![-E::zc(2), E::zc(1)]]).unwrap();
        assert!(is_bi_form(&g, 1).is_some());
        assert!(is_bi_form(&g, 2).is_none());
        let (h, script, view) = to_bi_form(&g, 2, false).unwrap();
        assert!(is_bi_form(&h, 2).is_some());
        assert_eq!(view.var, 2);
        assert!(script.iter().all(|op| !matches!(op, EquivOp::ColNeg(_) | EquivOp::Rename(_))));
    }

    #[test]
    fn repeated_upper_entries_fail() {
        let view = BiFormView {
            var: 1,
            split: 3,
            diag_rows: (0..6).collect(),
            block: vec![
                vec![E::Zero, E::z(2), -E::z(2)],
                vec![-E::z(2), E::Zero, E::z(3)],
                vec![E::z(2), -E::z(3), E::Zero],
            ],
        };
        let report = check_upper_triangle_distinct(&view);
        assert!(report.has("distinct-upper-triangle"));
    }

    #[test]
    fn conjugation_does_not_count_as_repeat() {
        let view = BiFormView {
            var: 1,
            split: 3,
            diag_rows: (0..6).collect(),
            block: vec![
                vec![E::Zero, E::z(2), E::zc(2)],
                vec![E::Zero; 3],
                vec![E::Zero; 3],
            ],
        };
        assert!(check_upper_triangle_distinct(&view).passed());
    }
}
