use crate::entry::Entry;
use crate::error::{Error, Result};
use crate::matrix::{classify_row, CodMatrix, RowClass};

/// Rows of a BCOD grouped into pairs `(r, r')` where `r = (a | b)` is
/// unconjugated and `r' = (±b* | ±a*)` cellwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn partner(&self, r: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == r {
                Some(b)
            } else if b == r {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Column of `c` in the opposite half.
pub(crate) fn mirror(c: usize, m: usize) -> usize {
    if c < m {
        c + m
    } else {
        c - m
    }
}

/// True when `other` is the pair partner of `row`, signs aside.
pub(crate) fn is_partner(row: &[Entry], other: &[Entry]) -> bool {
    let m = row.len() / 2;
    (0..row.len()).all(|c| other[mirror(c, m)].same_up_to_sign(row[c].conjugate()))
}

pub(crate) fn pair_rows(rows: &[Vec<Entry>]) -> Result<Vec<(usize, usize)>> {
    let n = rows.first().map_or(0, Vec::len);
    if !n.is_multiple_of(2) {
        return Err(Error::NoPairing(format!("{n} columns")));
    }
    let m = n / 2;
    let mut taken = vec![false; rows.len()];
    let mut pairs = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if classify_row(row) != RowClass::Nonconjugated {
            continue;
        }
        let (c, e) = row
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_zero())
            .map(|(c, e)| (c, *e))
            .expect("nonconjugated rows have a nonzero cell");
        let target = mirror(c, m);
        let var = e.var();
        let partner = (0..rows.len())
            .find(|&r2| rows[r2][target].var() == var && !taken[r2] && is_partner(row, &rows[r2]));
        match partner {
            Some(r2) => {
                taken[r] = true;
                taken[r2] = true;
                pairs.push((r, r2));
            }
            None => return Err(Error::NoPairing(format!("row {} has no partner", r + 1))),
        }
    }
    if let Some(r) = taken.iter().position(|t| !t) {
        return Err(Error::NoPairing(format!("row {} is not paired", r + 1)));
    }
    Ok(pairs)
}

/// Pairs up all rows of a BCOD; each pair lists its unconjugated row first.
pub fn find_pairs(g: &CodMatrix) -> Result<Pairing> {
    Ok(Pairing { pairs: pair_rows(g.rows())? })
}

/// One occurrence of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    pub row: usize,
    pub col: usize,
    pub neg: bool,
    pub conj: bool,
}

/// Every occurrence of `var`, sorted by column. In a COD there is exactly one
/// per column.
pub fn locate_variable(g: &CodMatrix, var: u32) -> Vec<Hit> {
    let mut hits = Vec::with_capacity(g.n());
    for c in 0..g.n() {
        for r in 0..g.p() {
            if let Entry::Term { var: v, neg, conj } = g.get(r, c) {
                if v == var {
                    hits.push(Hit { row: r, col: c, neg, conj });
                }
            }
        }
    }
    hits
}
