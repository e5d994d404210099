//! Text formats.
//!
//! `.cod` files hold a matrix: optional `#` comment lines, a header `p n k`,
//! then `p` lines of `n` whitespace-separated tokens `0`, `z<i>`, `-z<i>`,
//! `z<i>*` or `-z<i>*`. Partial matrices additionally allow `?`.
//!
//! `.ops` files hold one equivalence operation per line, with 1-based
//! indices: `rowperm a1 .. ap`, `rowneg r`, `colperm b1 .. bn`, `colswap c`,
//! `colneg c`, `rename c1 .. ck`, `varneg v`, `varconj v`.

use std::fmt::Write as _;

use crate::entry::Entry;
use crate::equivalence::{EquivOp, OpScript};
use crate::error::{Error, Result};
use crate::matrix::CodMatrix;

/// A parsed grid before any matrix invariants are checked. `None` cells are
/// the `?` token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGrid {
    pub p: usize,
    pub n: usize,
    pub k: u32,
    pub cells: Vec<Vec<Option<Entry>>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_token(tok: &str, line: usize, allow_unknown: bool) -> Result<Option<Entry>> {
    if tok == "0" {
        return Ok(Some(Entry::Zero));
    }
    if tok == "?" {
        return if allow_unknown {
            Ok(None)
        } else {
            Err(parse_err(line, "unknown cell '?' is only allowed in partial matrices"))
        };
    }
    let (neg, rest) = match tok.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, tok),
    };
    let (conj, rest) = match rest.strip_suffix('*') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let digits = rest
        .strip_prefix('z')
        .ok_or_else(|| parse_err(line, format!("malformed token '{tok}'")))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("malformed token '{tok}'")));
    }
    let var: u32 = digits
        .parse()
        .map_err(|_| parse_err(line, format!("variable index too large in '{tok}'")))?;
    if var == 0 {
        return Err(parse_err(line, format!("variable index must be at least 1 in '{tok}'")));
    }
    Ok(Some(Entry::Term { var, neg, conj }))
}

/// Parses the grid and header without checking variable usage.
pub fn parse_raw(text: &str, allow_unknown: bool) -> Result<RawGrid> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header 'p n k'"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    if nums.len() != 3 {
        return Err(parse_err(hline, "header must be 'p n k'"));
    }
    let parse_num = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| parse_err(hline, format!("bad header number '{s}'")))
    };
    let p = parse_num(nums[0])?;
    let n = parse_num(nums[1])?;
    let k = u32::try_from(parse_num(nums[2])?).map_err(|_| parse_err(hline, "k too large"))?;
    let mut cells = Vec::with_capacity(p);
    let mut last_line = hline;
    for (line, content) in lines {
        last_line = line;
        if cells.len() == p {
            return Err(parse_err(line, format!("more than {p} rows")));
        }
        let row = content
            .split_whitespace()
            .map(|t| parse_token(t, line, allow_unknown))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(parse_err(line, format!("expected {n} entries, found {}", row.len())));
        }
        cells.push(row);
    }
    if cells.len() != p {
        return Err(parse_err(last_line, format!("expected {p} rows, found {}", cells.len())));
    }
    Ok(RawGrid { p, n, k, cells })
}

/// Parses a `.cod` matrix. Variable indices must be exactly `1..=k`.
pub fn parse_matrix(text: &str) -> Result<CodMatrix> {
    let raw = parse_raw(text, false)?;
    let rows = raw
        .cells
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.expect("no unknowns")).collect())
        .collect();
    CodMatrix::with_shape(raw.n, raw.k, rows)
}

/// Parses a `.cod` matrix whose variable indices may have gaps, and
/// renumbers them to `1..=k'` preserving order.
pub fn parse_renumbered(text: &str) -> Result<CodMatrix> {
    let raw = parse_raw(text, false)?;
    let rows: Vec<Vec<Entry>> = raw
        .cells
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.expect("no unknowns")).collect())
        .collect();
    if rows.is_empty() {
        return CodMatrix::with_shape(raw.n, 0, rows);
    }
    Ok(CodMatrix::renumbered(rows)?.0)
}

fn write_header(out: &mut String, p: usize, n: usize, k: u32) {
    let _ = writeln!(out, "{p} {n} {k}");
}

pub fn serialize_matrix(g: &CodMatrix) -> String {
    let mut out = String::new();
    write_header(&mut out, g.p(), g.n(), g.k());
    for row in g.rows() {
        let toks: Vec<String> = row.iter().map(Entry::to_string).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn serialize_raw(grid: &RawGrid) -> String {
    let mut out = String::new();
    write_header(&mut out, grid.p, grid.n, grid.k);
    for row in &grid.cells {
        let toks: Vec<String> = row
            .iter()
            .map(|c| c.map_or_else(|| "?".to_string(), |e| e.to_string()))
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

fn parse_indices(line: usize, args: &[&str]) -> Result<Vec<usize>> {
    args.iter()
        .map(|a| match a.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(parse_err(line, format!("bad index '{a}'"))),
        })
        .collect()
}

fn single(line: usize, op: &str, args: &[&str]) -> Result<usize> {
    match parse_indices(line, args)?.as_slice() {
        [i] => Ok(*i),
        _ => Err(parse_err(line, format!("'{op}' takes exactly one index"))),
    }
}

/// Parses a `.ops` script. Trailing `#` comments are allowed.
pub fn parse_script(text: &str) -> Result<OpScript> {
    let mut ops = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let content = l.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let name = words.next().expect("non-empty");
        let args: Vec<&str> = words.collect();
        let op = match name {
            "rowperm" => EquivOp::RowPerm(parse_indices(line, &args)?),
            "rowneg" => EquivOp::RowNeg(single(line, name, &args)?),
            "colperm" => EquivOp::ColPerm(parse_indices(line, &args)?),
            "colswap" => EquivOp::ColSwap(single(line, name, &args)?),
            "colneg" => EquivOp::ColNeg(single(line, name, &args)?),
            "rename" => EquivOp::Rename(
                parse_indices(line, &args)?.into_iter().map(|v| v as u32 + 1).collect(),
            ),
            "varneg" => EquivOp::InstNeg(single(line, name, &args)? as u32 + 1),
            "varconj" => EquivOp::InstConj(single(line, name, &args)? as u32 + 1),
            other => return Err(parse_err(line, format!("unknown operation '{other}'"))),
        };
        ops.push(op);
    }
    Ok(OpScript::from(ops))
}

pub fn serialize_script(s: &OpScript) -> String {
    let mut out = String::new();
    for op in s {
        let _ = writeln!(out, "{op}");
    }
    out
}
