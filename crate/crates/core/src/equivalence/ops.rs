use std::fmt;

use rand::Rng;

use crate::entry::Entry;
use crate::error::{Error, Result};
use crate::matrix::CodMatrix;

/// One equivalence operation. Row and column indices are 0-based; variable
/// indices are 1-based like everywhere else.
///
/// Permutations are image lists: `RowPerm(a)` moves row `i` to position
/// `a[i]`, and `Rename(c)` renames `z_i` to `z_{c[i-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EquivOp {
    RowPerm(Vec<usize>),
    RowNeg(usize),
    ColPerm(Vec<usize>),
    /// Transposition of columns `c` and `m + c`.
    ColSwap(usize),
    ColNeg(usize),
    Rename(Vec<u32>),
    InstNeg(u32),
    InstConj(u32),
}

impl EquivOp {
    pub fn inverse(&self) -> EquivOp {
        match self {
            EquivOp::RowPerm(a) => EquivOp::RowPerm(invert_perm(a)),
            EquivOp::ColPerm(b) => EquivOp::ColPerm(invert_perm(b)),
            EquivOp::Rename(c) => {
                let zero_based: Vec<usize> = c.iter().map(|&v| (v as usize).wrapping_sub(1)).collect();
                EquivOp::Rename(invert_perm(&zero_based).into_iter().map(|v| v as u32 + 1).collect())
            }
            op => op.clone(),
        }
    }

    pub fn is_column_op(&self) -> bool {
        matches!(self, EquivOp::ColPerm(_) | EquivOp::ColSwap(_) | EquivOp::ColNeg(_))
    }

    /// True for operations that leave every matrix unchanged.
    pub fn is_identity(&self) -> bool {
        match self {
            EquivOp::RowPerm(a) | EquivOp::ColPerm(a) => a.iter().enumerate().all(|(i, &x)| i == x),
            EquivOp::Rename(c) => c.iter().enumerate().all(|(i, &x)| i as u32 + 1 == x),
            _ => false,
        }
    }
}

impl fmt::Display for EquivOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T>(f: &mut fmt::Formatter<'_>, name: &str, xs: &[T], shift: T) -> fmt::Result
        where
            T: fmt::Display + Copy + std::ops::Add<Output = T>,
        {
            f.write_str(name)?;
            for &x in xs {
                write!(f, " {}", x + shift)?;
            }
            Ok(())
        }
        match self {
            EquivOp::RowPerm(a) => list(f, "rowperm", a, 1),
            EquivOp::RowNeg(r) => write!(f, "rowneg {}", r + 1),
            EquivOp::ColPerm(b) => list(f, "colperm", b, 1),
            EquivOp::ColSwap(c) => write!(f, "colswap {}", c + 1),
            EquivOp::ColNeg(c) => write!(f, "colneg {}", c + 1),
            EquivOp::Rename(c) => list(f, "rename", c, 0),
            EquivOp::InstNeg(v) => write!(f, "varneg {v}"),
            EquivOp::InstConj(v) => write!(f, "varconj {v}"),
        }
    }
}

/// An ordered list of equivalence operations, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpScript {
    ops: Vec<EquivOp>,
}

impl OpScript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `op` unless it is a no-op.
    pub fn push(&mut self, op: EquivOp) {
        if !op.is_identity() {
            self.ops.push(op);
        }
    }

    pub fn extend(&mut self, other: OpScript) {
        self.ops.extend(other.ops);
    }

    pub fn ops(&self) -> &[EquivOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EquivOp> {
        self.ops.iter()
    }

    pub fn concat(mut self, other: &OpScript) -> OpScript {
        self.ops.extend(other.ops.iter().cloned());
        self
    }
}

impl From<Vec<EquivOp>> for OpScript {
    fn from(ops: Vec<EquivOp>) -> Self {
        OpScript { ops }
    }
}

impl FromIterator<EquivOp> for OpScript {
    fn from_iter<I: IntoIterator<Item = EquivOp>>(iter: I) -> Self {
        OpScript { ops: iter.into_iter().collect() }
    }
}

impl IntoIterator for OpScript {
    type Item = EquivOp;
    type IntoIter = std::vec::IntoIter<EquivOp>;

    fn into_iter(self) -> Self::IntoIter {
        self.ops.into_iter()
    }
}

impl<'a> IntoIterator for &'a OpScript {
    type Item = &'a EquivOp;
    type IntoIter = std::slice::Iter<'a, EquivOp>;

    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

/// Reverses the script and inverts each operation.
pub fn invert(s: &OpScript) -> OpScript {
    s.ops.iter().rev().map(EquivOp::inverse).collect()
}

/// Applies `s` to `g`, left to right.
pub fn apply(g: &CodMatrix, s: &OpScript) -> Result<CodMatrix> {
    let mut rows = g.rows().to_vec();
    for op in s {
        apply_op_rows(&mut rows, g.n(), g.k(), op)?;
    }
    let out = CodMatrix::from_parts_unchecked(g.n(), g.k(), rows);
    debug_assert!(
        !crate::verify::verify_cod(g).passed() || crate::verify::verify_cod(&out).passed(),
        "equivalence operations must preserve the COD axioms"
    );
    Ok(out)
}

pub(crate) fn apply_op_rows(rows: &mut Vec<Vec<Entry>>, n: usize, k: u32, op: &EquivOp) -> Result<()> {
    let p = rows.len();
    match op {
        EquivOp::RowPerm(a) => {
            check_perm(a, p, "row")?;
            let mut out = vec![Vec::new(); p];
            for (i, row) in rows.drain(..).enumerate() {
                out[a[i]] = row;
            }
            *rows = out;
        }
        EquivOp::RowNeg(r) => {
            check_index(*r, p, "row")?;
            for e in rows[*r].iter_mut() {
                *e = -*e;
            }
        }
        EquivOp::ColPerm(b) => {
            check_perm(b, n, "column")?;
            for row in rows.iter_mut() {
                let mut out = vec![Entry::Zero; n];
                for (j, e) in row.iter().enumerate() {
                    out[b[j]] = *e;
                }
                *row = out;
            }
        }
        EquivOp::ColSwap(c) => {
            if !n.is_multiple_of(2) || *c >= n / 2 {
                return Err(Error::IndexOutOfRange(format!(
                    "colswap {} needs an even column count above {}",
                    c + 1,
                    2 * c + 1
                )));
            }
            let m = n / 2;
            for row in rows.iter_mut() {
                row.swap(*c, m + c);
            }
        }
        EquivOp::ColNeg(c) => {
            check_index(*c, n, "column")?;
            for row in rows.iter_mut() {
                row[*c] = -row[*c];
            }
        }
        EquivOp::Rename(c) => {
            let zero_based: Vec<usize> = c.iter().map(|&v| (v as usize).wrapping_sub(1)).collect();
            check_perm(&zero_based, k as usize, "variable")?;
            map_terms(rows, |var, neg, conj| Entry::Term { var: c[var as usize - 1], neg, conj });
        }
        EquivOp::InstNeg(v) => {
            check_var(*v, k)?;
            map_terms(rows, |var, neg, conj| Entry::Term { var, neg: neg ^ (var == *v), conj });
        }
        EquivOp::InstConj(v) => {
            check_var(*v, k)?;
            map_terms(rows, |var, neg, conj| Entry::Term { var, neg, conj: conj ^ (var == *v) });
        }
    }
    Ok(())
}

fn map_terms(rows: &mut [Vec<Entry>], f: impl Fn(u32, bool, bool) -> Entry) {
    for e in rows.iter_mut().flatten() {
        if let Entry::Term { var, neg, conj } = *e {
            *e = f(var, neg, conj);
        }
    }
}

fn check_index(i: usize, len: usize, what: &str) -> Result<()> {
    if i < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(format!("{what} {} of {len}", i + 1)))
    }
}

fn check_var(v: u32, k: u32) -> Result<()> {
    if v >= 1 && v <= k {
        Ok(())
    } else {
        Err(Error::VariableOutOfRange { var: v, k })
    }
}

pub(crate) fn check_perm(a: &[usize], len: usize, what: &str) -> Result<()> {
    if a.len() != len {
        return Err(Error::InvalidPermutation(format!(
            "{what} permutation has {} images, expected {len}",
            a.len()
        )));
    }
    let mut seen = vec![false; len];
    for &x in a {
        if x >= len || seen[x] {
            return Err(Error::InvalidPermutation(format!("{what} permutation is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

pub(crate) fn invert_perm(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        if x < inv.len() {
            inv[x] = i;
        }
    }
    inv
}

/// A random valid script of `len` operations for a `p x n` matrix on `k`
/// variables. Every operation kind is drawn, including column negations.
pub fn random_script<R: Rng + ?Sized>(rng: &mut R, p: usize, n: usize, k: u32, len: usize) -> OpScript {
    use rand::seq::SliceRandom;
    let mut ops = Vec::with_capacity(len);
    for _ in 0..len {
        let op = match rng.gen_range(0..8) {
            0 => {
                let mut a: Vec<usize> = (0..p).collect();
                a.shuffle(rng);
                EquivOp::RowPerm(a)
            }
            1 => EquivOp::RowNeg(rng.gen_range(0..p)),
            2 => {
                let mut b: Vec<usize> = (0..n).collect();
                b.shuffle(rng);
                EquivOp::ColPerm(b)
            }
            3 if n >= 2 && n.is_multiple_of(2) => EquivOp::ColSwap(rng.gen_range(0..n / 2)),
            3 | 4 => EquivOp::ColNeg(rng.gen_range(0..n)),
            5 => {
                let mut c: Vec<u32> = (1..=k).collect();
                c.shuffle(rng);
                EquivOp::Rename(c)
            }
            6 => EquivOp::InstNeg(rng.gen_range(1..=k)),
            _ => EquivOp::InstConj(rng.gen_range(1..=k)),
        };
        ops.push(op);
    }
    OpScript::from(ops)
}
