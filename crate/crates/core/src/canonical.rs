//! The canonical `[2^m, 2m, 2^(m-1)]` BCOD and canonicalization.
//!
//! `canonical_bcod(m)` stacks two copies of `canonical_bcod(m-1)` under a
//! `B_1` block whose last column is `alpha = (z_{K+1}, ...)`, where the
//! second copy runs on the shifted variables `z_{K+1}..z_{2K}`, and fills
//! the two middle columns with [`complete_columns`].
//!
//! [`canonicalize`] works in two phases. Alignment restores conjugation
//! separation, fixes one pair of rows and may permute columns once. The
//! recursive phase then uses only row and instance operations: bring both
//! matrices into `B_v` form for the pair's pivot, match `alpha`, recurse into
//! the two summands left after deleting the middle columns, and line up the
//! rows. The middle columns then agree because their completion is unique.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::entry::Entry;
use crate::equivalence::biform::{literal_view, place_rows};
use crate::equivalence::pairs::pair_rows;
use crate::equivalence::ops::{apply_op_rows, invert};
use crate::equivalence::{EquivOp, OpScript};
use crate::error::{Error, Result};
use crate::matrix::{classify_row, CodMatrix, RowClass};
use crate::structure::{complete_columns, components, row_components, PartialBcod};
use crate::verify::verify_cod;

/// Largest `m` accepted by [`canonical_bcod`]; the matrix has `2^m` rows.
pub const MAX_CANONICAL_M: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalCertificate {
    pub m: usize,
    #[serde(skip)]
    pub input: CodMatrix,
    #[serde(skip)]
    pub canonical: CodMatrix,
    #[serde(skip)]
    pub script: OpScript,
    /// Number of leading script operations belonging to the alignment phase.
    pub alignment_len: usize,
    pub used_column_permutation: bool,
}

impl CanonicalCertificate {
    pub fn recursive_phase(&self) -> &[EquivOp] {
        &self.script.ops()[self.alignment_len..]
    }
}

fn cache() -> &'static Mutex<BTreeMap<usize, CodMatrix>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, CodMatrix>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The canonical BCOD with `2m` columns.
pub fn canonical_bcod(m: usize) -> Result<CodMatrix> {
    if m == 0 || m > MAX_CANONICAL_M {
        return Err(Error::Precondition(format!("m must lie in 1..={MAX_CANONICAL_M}, got {m}")));
    }
    if let Some(g) = cache().lock().unwrap().get(&m) {
        return Ok(g.clone());
    }
    let g = if m == 1 {
        CodMatrix::new(1, vec![vec![Entry::z(1), Entry::Zero], vec![Entry::Zero, Entry::zc(1)]])?
    } else {
        build(m, &canonical_bcod(m - 1)?)?
    };
    cache().lock().unwrap().insert(m, g.clone());
    Ok(g)
}

fn build(m: usize, prev: &CodMatrix) -> Result<CodMatrix> {
    let mp = m - 1;
    let shift = prev.k();
    let n = 2 * m;
    let c = prev.rows();

    // Second copy: shifted, negated, first pair of columns swapped so its
    // leading row becomes (0 | -alpha^T).
    let h2: Vec<Vec<Entry>> = c
        .iter()
        .map(|row| {
            let mut out: Vec<Entry> = row
                .iter()
                .map(|&e| match e {
                    Entry::Zero => Entry::Zero,
                    Entry::Term { var, neg, conj } => Entry::Term { var: var + shift, neg: !neg, conj },
                })
                .collect();
            out.swap(0, mp);
            out
        })
        .collect();
    let alpha: Vec<Entry> = (0..mp).map(|b| -h2[0][mp + b]).collect();

    let mut block = vec![vec![Entry::Zero; m]; m];
    for a in 0..mp {
        for b in 0..mp {
            block[a][b] = c[a][mp + b];
        }
        block[a][mp] = alpha[a];
        block[mp][a] = -alpha[a];
    }

    let z1 = Entry::z(1);
    let mut cells: Vec<Vec<Option<Entry>>> = Vec::with_capacity(1 << m);
    for a in 0..m {
        let mut row = vec![Entry::Zero; n];
        row[a] = z1;
        row[m..].copy_from_slice(&block[a]);
        cells.push(row.into_iter().map(Some).collect());
    }
    for a in 0..m {
        let mut row = vec![Entry::Zero; n];
        for b in 0..m {
            row[b] = -block[b][a].conjugate();
        }
        row[m + a] = z1.conjugate();
        cells.push(row.into_iter().map(Some).collect());
    }
    let widen = |row: &[Entry]| -> Vec<Option<Entry>> {
        let mut out = vec![None; n];
        for b in 0..mp {
            out[b] = Some(row[b]);
            out[m + b] = Some(row[mp + b]);
        }
        out
    };
    cells.extend(c[2 * mp..].iter().map(|row| widen(row)));
    cells.extend(h2.iter().enumerate().filter(|&(r, _)| r != 0 && r != mp).map(|(_, row)| widen(row)));

    let part = PartialBcod::new(2 * shift, cells)?;
    complete_columns(&part)
}

fn not_bcod(msg: impl Into<String>) -> Error {
    Error::NotBcod(msg.into())
}

/// Per-variable conjugation toggles that make every row conjugation-separated.
fn separation_toggles(rows: &[Vec<Entry>], k: u32) -> Result<Vec<bool>> {
    let mut occurrences: Vec<Vec<(usize, bool)>> = vec![Vec::new(); k as usize + 1];
    for (r, row) in rows.iter().enumerate() {
        for e in row {
            if let Entry::Term { var, conj, .. } = *e {
                occurrences[var as usize].push((r, conj));
            }
        }
    }
    let mut toggle: Vec<Option<bool>> = vec![None; k as usize + 1];
    let mut row_type: Vec<Option<bool>> = vec![None; rows.len()];
    for start in 1..=k as usize {
        if toggle[start].is_some() {
            continue;
        }
        toggle[start] = Some(false);
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            let tv = toggle[v].unwrap();
            for &(r, conj) in &occurrences[v] {
                let t = conj ^ tv;
                match row_type[r] {
                    Some(existing) if existing != t => return Err(not_bcod("rows cannot be conjugation-separated")),
                    Some(_) => {}
                    None => {
                        row_type[r] = Some(t);
                        for e in &rows[r] {
                            if let Entry::Term { var, conj, .. } = *e {
                                let want = conj ^ t;
                                match toggle[var as usize] {
                                    Some(x) if x != want => {
                                        return Err(not_bcod("rows cannot be conjugation-separated"));
                                    }
                                    Some(_) => {}
                                    None => {
                                        toggle[var as usize] = Some(want);
                                        queue.push(var as usize);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(toggle.into_iter().map(|t| t.unwrap_or(false)).collect())
}

fn run(rows: &mut Vec<Vec<Entry>>, n: usize, k: u32, script: &mut OpScript, op: EquivOp) -> Result<()> {
    apply_op_rows(rows, n, k, &op)?;
    script.push(op);
    Ok(())
}

/// Brings `g` into canonical form.
///
/// Accepts any COD reachable from an indecomposable BCOD by equivalence
/// operations that a column-negation-free script can undo. The script never
/// negates a column, and column permutations occur only within the first
/// `alignment_len` operations.
pub fn canonicalize(g: &CodMatrix) -> Result<CanonicalCertificate> {
    let report = verify_cod(g);
    if let Some(v) = report.violations.first() {
        return Err(not_bcod(format!("{} fails", v.axiom)));
    }
    let (p, n, k) = (g.p(), g.n(), g.k());
    if n == 0 || n % 2 != 0 {
        return Err(not_bcod(format!("{n} columns")));
    }
    let m = n / 2;
    let parts = components(g);
    if parts.len() != 1 {
        return Err(Error::Decomposable(parts.len()));
    }
    if let Some(r) = (0..p).find(|&r| g.row(r).iter().filter(|e| !e.is_zero()).count() != m) {
        return Err(not_bcod(format!("row {} does not have {m} nonzero entries", r + 1)));
    }
    let target = canonical_bcod(m)?;
    if p != target.p() || k != target.k() {
        return Err(not_bcod(format!(
            "parameters [{p}, {n}, {k}] differ from [{}, {n}, {}]",
            target.p(),
            target.k()
        )));
    }
    let t = target.rows();
    let mut rows = g.rows().to_vec();
    let mut script = OpScript::new();

    for (v, flip) in separation_toggles(&rows, k)?.into_iter().enumerate() {
        if flip {
            run(&mut rows, n, k, &mut script, EquivOp::InstConj(v as u32))?;
        }
    }

    let r = (0..p)
        .find(|&r| classify_row(&rows[r]) == RowClass::Nonconjugated)
        .ok_or_else(|| not_bcod("no unconjugated row"))?;
    let support: Vec<usize> = (0..n).filter(|&c| !rows[r][c].is_zero()).collect();
    let mut vars: Vec<u32> = support.iter().map(|&c| rows[r][c].var().unwrap()).collect();
    vars.sort_unstable();
    if vars.windows(2).any(|w| w[0] == w[1]) {
        return Err(not_bcod(format!("row {} repeats a variable", r + 1)));
    }
    let column_image = |r2: usize| -> Vec<usize> {
        let mirror_of = |c: usize| -> usize {
            let v = rows[r][c].var();
            (0..n).find(|&c2| rows[r2][c2].var() == v).unwrap()
        };
        let mut image = vec![0; n];
        image[support[0]] = 0;
        image[mirror_of(support[0])] = m;
        for (i, &c) in support[1..].iter().enumerate() {
            image[c] = m + 1 + i;
            image[mirror_of(c)] = 1 + i;
        }
        image
    };
    // The partner is conjugated, uses the same variables on the complementary
    // support, and induces a column pairing under which every row is paired.
    let (r2, colperm) = (0..p)
        .filter(|&r2| {
            classify_row(&rows[r2]) == RowClass::Conjugated
                && support.iter().all(|&c| rows[r2][c].is_zero())
                && {
                    let mut vs: Vec<u32> = rows[r2].iter().filter_map(|e| e.var()).collect();
                    vs.sort_unstable();
                    vs == vars
                }
        })
        .find_map(|r2| {
            let op = EquivOp::ColPerm(column_image(r2));
            let mut trial = rows.clone();
            apply_op_rows(&mut trial, n, k, &op).ok()?;
            pair_rows(&trial).ok().map(|_| (r2, op))
        })
        .ok_or_else(|| not_bcod(format!("row {} has no partner", r + 1)))?;
    let used_column_permutation = !colperm.is_identity();
    run(&mut rows, n, k, &mut script, colperm)?;

    let mut names = vec![0u32; k as usize];
    let mut used = vec![false; k as usize + 1];
    let pairs = std::iter::once((rows[r][0], t[0][0])).chain((1..m).map(|i| (rows[r][m + i], t[0][m + i])));
    for (cur, want) in pairs {
        let (Some(a), Some(b)) = (cur.var(), want.var()) else {
            return Err(not_bcod("anchor row has an unexpected zero"));
        };
        names[a as usize - 1] = b;
        used[b as usize] = true;
    }
    let mut free = (1..=k).filter(|&b| !used[b as usize]);
    for slot in names.iter_mut().filter(|s| **s == 0) {
        *slot = free.next().unwrap();
    }
    run(&mut rows, n, k, &mut script, EquivOp::Rename(names))?;

    if rows[r][0].is_neg() {
        run(&mut rows, n, k, &mut script, EquivOp::RowNeg(r))?;
    }
    for i in 1..m {
        if rows[r][m + i].is_neg() != t[0][m + i].is_neg() {
            let v = t[0][m + i].var().unwrap();
            run(&mut rows, n, k, &mut script, EquivOp::InstNeg(v))?;
        }
    }
    if rows[r2][m].is_neg() {
        run(&mut rows, n, k, &mut script, EquivOp::RowNeg(r2))?;
    }
    if rows[r] != t[0] || rows[r2] != t[m] {
        return Err(not_bcod("first pair of rows cannot be aligned"));
    }
    let alignment_len = script.len();

    let rest = transform(&rows, t, (r, r2), (0, m), k)?;
    for op in &rest {
        apply_op_rows(&mut rows, n, k, op)?;
    }
    script.extend(rest);
    if rows != t {
        return Err(not_bcod("canonicalization did not reach the canonical matrix"));
    }
    Ok(CanonicalCertificate {
        m,
        input: g.clone(),
        canonical: target,
        script,
        alignment_len,
        used_column_permutation,
    })
}

fn swap_columns(rows: &[Vec<Entry>], m: usize, swaps: &[usize]) -> Vec<Vec<Entry>> {
    let mut out = rows.to_vec();
    for row in &mut out {
        for &c in swaps {
            row.swap(c, m + c);
        }
    }
    out
}

/// Reorders rows so `rows` is literally the `B_var` block in its first `n`
/// rows, using row operations only.
fn row_bi_form(rows: &[Vec<Entry>], k: u32, var: u32) -> Result<(Vec<Vec<Entry>>, OpScript)> {
    let n = rows[0].len();
    let mut work = rows.to_vec();
    let mut script = OpScript::new();
    place_rows(&mut work, n, k, var, &mut script).map_err(|e| not_bcod(e.to_string()))?;
    match literal_view(&work, n, var) {
        Some(view) if view.split == n / 2 && view.diag_rows.iter().enumerate().all(|(i, &r)| i == r) => {
            Ok((work, script))
        }
        _ => Err(not_bcod(format!("z{var} does not give a B form without column operations"))),
    }
}

/// Rewrites a script on the rows `part` of a larger matrix with `p` rows.
fn lift(op: EquivOp, part: &[usize], p: usize) -> Result<EquivOp> {
    Ok(match op {
        EquivOp::RowPerm(a) => {
            let mut image: Vec<usize> = (0..p).collect();
            for (i, &ai) in a.iter().enumerate() {
                image[part[i]] = part[ai];
            }
            EquivOp::RowPerm(image)
        }
        EquivOp::RowNeg(i) => EquivOp::RowNeg(part[i]),
        op if op.is_column_op() => return Err(not_bcod("column operation in the recursive phase")),
        op => op,
    })
}

/// Row and instance operations taking `g` to `t`, given that rows `ga` of
/// `g` equal rows `ta` of `t`, the first of each being unconjugated.
fn transform(
    g: &[Vec<Entry>],
    t: &[Vec<Entry>],
    ga: (usize, usize),
    ta: (usize, usize),
    k: u32,
) -> Result<OpScript> {
    if g == t && ga == ta {
        return Ok(OpScript::new());
    }
    let p = g.len();
    let n = g[0].len();
    let m = n / 2;
    if t.len() != p || t[0].len() != n {
        return Err(not_bcod("summands have different shapes"));
    }
    if g[ga.0] != t[ta.0] || g[ga.1] != t[ta.1] {
        return Err(not_bcod("summands do not share the pair of rows"));
    }

    // Work in coordinates where the pair's unconjugated row has pattern
    // (1, 0, .., 0 | 0, 1, .., 1). Swapping in both matrices commutes with
    // every operation used below, so the scripts are valid unswapped.
    let swaps: Vec<usize> =
        (0..m).filter(|&c| if c == 0 { g[ga.0][0].is_zero() } else { g[ga.0][m + c].is_zero() }).collect();
    let sg = swap_columns(g, m, &swaps);
    let st = swap_columns(t, m, &swaps);
    let v = sg[ga.0][0].var().ok_or_else(|| not_bcod("pair of rows has the wrong support"))?;
    let (mut gb, mut script) = row_bi_form(&sg, k, v)?;
    let (tb, s_t) = row_bi_form(&st, k, v)?;

    if m >= 2 {
        for c in 1..m - 1 {
            let (a, b) = (gb[c][n - 1], tb[c][n - 1]);
            let (Some(av), Some(bv)) = (a.var(), b.var()) else {
                return Err(not_bcod("alpha has a zero entry"));
            };
            if av != bv {
                let mut names: Vec<u32> = (1..=k).collect();
                names.swap(av as usize - 1, bv as usize - 1);
                run(&mut gb, n, k, &mut script, EquivOp::Rename(names))?;
            }
            let a = gb[c][n - 1];
            if a.is_conj() != b.is_conj() {
                run(&mut gb, n, k, &mut script, EquivOp::InstConj(bv))?;
            }
            if gb[c][n - 1].is_neg() != b.is_neg() {
                run(&mut gb, n, k, &mut script, EquivOp::InstNeg(bv))?;
            }
        }

        let kept: Vec<usize> = (0..n).filter(|&c| c != m - 1 && c != n - 1).collect();
        let restrict = |rows: &[Vec<Entry>], part: &[usize]| -> Vec<Vec<Entry>> {
            part.iter().map(|&r| kept.iter().map(|&c| rows[r][c]).collect()).collect()
        };
        let all: Vec<usize> = (0..p).collect();
        let parts_g = row_components(&restrict(&gb, &all));
        let parts_t = row_components(&restrict(&tb, &all));
        if parts_g.len() != 2 || parts_t.len() != 2 {
            return Err(not_bcod(format!(
                "deleting the middle columns leaves {} and {} summands",
                parts_g.len(),
                parts_t.len()
            )));
        }
        let mut image = vec![0; p];
        for anchor in [(0, m), (m - 1, n - 1)] {
            let pick = |parts: &[Vec<usize>]| -> Result<(Vec<usize>, (usize, usize))> {
                let part = parts.iter().find(|q| q.contains(&anchor.0)).unwrap();
                let pos = |r: usize| part.iter().position(|&x| x == r);
                match (pos(anchor.0), pos(anchor.1)) {
                    (Some(a), Some(b)) => Ok((part.clone(), (a, b))),
                    _ => Err(not_bcod("pair of rows split across summands")),
                }
            };
            let (pg, la_g) = pick(&parts_g)?;
            let (pt, la_t) = pick(&parts_t)?;
            if pg.len() != pt.len() {
                return Err(not_bcod("summands have different sizes"));
            }
            let sub = transform(&restrict(&gb, &pg), &restrict(&tb, &pt), la_g, la_t, k)?;
            for op in sub {
                run(&mut gb, n, k, &mut script, lift(op, &pg, p)?)?;
            }
            for (&a, &b) in pg.iter().zip(&pt) {
                image[a] = b;
            }
        }
        run(&mut gb, n, k, &mut script, EquivOp::RowPerm(image))?;
    }

    if gb != tb {
        return Err(not_bcod("middle columns disagree after matching the summands"));
    }
    script.extend(invert(&s_t));
    Ok(script)
}

/// A script taking `g1` to `g2`, or `None` when the canonical forms differ.
/// Differing column counts are a [`Error::ShapeMismatch`].
pub fn are_equivalent(g1: &CodMatrix, g2: &CodMatrix) -> Result<Option<OpScript>> {
    if g1.n() != g2.n() {
        return Err(Error::ShapeMismatch(g1.p(), g1.n(), g2.p(), g2.n()));
    }
    let c1 = canonicalize(g1)?;
    let c2 = canonicalize(g2)?;
    if c1.canonical != c2.canonical {
        return Ok(None);
    }
    Ok(Some(c1.script.concat(&invert(&c2.script))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::apply;
    use crate::structure::is_indecomposable;
    use crate::verify::verify_bcod;

    #[test]
    fn small_canonical_designs() {
        let g1 = canonical_bcod(1).unwrap();
        assert_eq!(g1.to_string(), "2 2 1\nz1 0\n0 z1*\n");
        let g2 = canonical_bcod(2).unwrap();
        assert_eq!(g2.to_string(), "4 4 2\nz1 0 0 z2\n0 z1 -z2 0\n0 z2* z1* 0\n-z2* 0 0 z1*\n");
    }

    #[test]
    fn parameters_up_to_five() {
        for m in 1..=5 {
            let g = canonical_bcod(m).unwrap();
            assert_eq!((g.p(), g.n(), g.k()), (1 << m, 2 * m, 1 << (m - 1)));
            assert!(verify_bcod(&g).passed());
            assert!(is_indecomposable(&g));
        }
    }

    #[test]
    fn zero_columns_rejected() {
        assert!(canonical_bcod(0).is_err());
    }

    #[test]
    fn canonical_is_a_fixed_point() {
        for m in 1..=5 {
            let cert = canonicalize(&canonical_bcod(m).unwrap()).unwrap();
            assert!(cert.script.is_empty(), "m={m}: {:?}", cert.script);
            assert!(!cert.used_column_permutation);
        }
    }

    #[test]
    fn undoes_row_and_instance_scrambles() {
        let g = canonical_bcod(3).unwrap();
        let s = OpScript::from(vec![
            EquivOp::RowPerm(vec![3, 1, 4, 0, 7, 6, 5, 2]),
            EquivOp::InstConj(2),
            EquivOp::RowNeg(5),
            EquivOp::Rename(vec![4, 3, 1, 2]),
            EquivOp::ColPerm(vec![2, 5, 0, 1, 4, 3]),
            EquivOp::InstNeg(1),
        ]);
        let h = apply(&g, &s).unwrap();
        let cert = canonicalize(&h).unwrap();
        assert_eq!(apply(&h, &cert.script).unwrap(), g);
        assert!(cert.recursive_phase().iter().all(|op| !op.is_column_op()));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = canonical_bcod(2).unwrap();
        let b = canonical_bcod(3).unwrap();
        assert!(matches!(are_equivalent(&a, &b), Err(Error::ShapeMismatch(..))));
    }
}
