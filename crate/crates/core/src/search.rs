//! Brute-force enumeration of small BCODs.
//!
//! Two search spaces are available:
//!
//! * [`Symmetry::None`] fills the grid column by column with no structural
//!   assumption beyond the definition: each variable once per column, `m`
//!   nonzeros per row, exact orthogonality of every completed column pair.
//! * [`Symmetry::FixFirstPair`] adds rows in pairs `(a | b)`, `(±b* | ±a*)`
//!   with the first pair fixed to `(z1, 0.. | 0, z2..zm)`, `(0, z2*..zm* | z1*, 0..)`.
//!   Row negations, permutations of pairs and renaming of the remaining
//!   variables are quotiented out: later pairs appear in strictly increasing
//!   order of their unconjugated row, each row starts with a `+` entry, and
//!   fresh variables are introduced as `z_{max+1}`.
//!
//! For every candidate variable count `k` (so `p = 2k`, forced by counting
//! nonzeros) the search emits the grids that pass [`verify_bcod`] and are
//! indecomposable.

use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::canonicalize;
use crate::entry::Entry;
use crate::equivalence::apply;
use crate::equivalence::pairs::mirror;
use crate::error::{Error, Result};
use crate::hermitian::rows_inner_product;
use crate::matrix::CodMatrix;
use crate::structure::is_indecomposable;
use crate::verify::verify_bcod;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    None,
    FixFirstPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: usize,
    pub cap: Option<usize>,
    pub symmetry: Symmetry,
    /// Subtrees below this depth are searched in parallel.
    pub prefix_depth: usize,
    /// Largest variable count tried; `None` picks the level's default.
    pub max_k: Option<u32>,
}

impl SearchConfig {
    pub fn new(m: usize, symmetry: Symmetry) -> Self {
        Self { m, cap: None, symmetry, prefix_depth: 1, max_k: None }
    }

    /// The default level for `m`: assumption-free at `m = 1`, pairs above.
    pub fn for_m(m: usize) -> Self {
        Self::new(m, if m == 1 { Symmetry::None } else { Symmetry::FixFirstPair })
    }

    pub fn resolved_max_k(&self) -> u32 {
        self.max_k.unwrap_or(match self.symmetry {
            Symmetry::None => 2,
            Symmetry::FixFirstPair => 4,
        })
    }

    fn limit(&self) -> std::result::Result<u32, String> {
        match (self.symmetry, self.m) {
            (_, 0) => Err("m must be at least 1".into()),
            (Symmetry::None, 1) => Ok(3),
            (Symmetry::None, 2) => Ok(2),
            (Symmetry::None, m) => Err(format!("m = {m} is beyond the unreduced search (m <= 2)")),
            (Symmetry::FixFirstPair, 1..=3) => Ok(4),
            (Symmetry::FixFirstPair, m) => Err(format!("m = {m} is beyond the pair search (m <= 3)")),
        }
    }

    pub fn check(&self) -> Result<()> {
        let limit = self.limit().map_err(Error::Infeasible)?;
        let k = self.resolved_max_k();
        if k == 0 || k > limit {
            return Err(Error::Infeasible(format!("max_k = {k} outside 1..={limit} for m = {}", self.m)));
        }
        if self.cap == Some(0) {
            return Err(Error::Infeasible("cap must be at least 1".into()));
        }
        Ok(())
    }
}

trait Space: Sync {
    type State: Clone + Send + Sync;
    fn root(&self) -> Self::State;
    fn is_complete(&self, s: &Self::State) -> bool;
    fn children(&self, s: &Self::State) -> Vec<Self::State>;
    fn finish(&self, s: &Self::State) -> Option<CodMatrix>;
}

fn accept(rows: Vec<Vec<Entry>>, n: usize, k: u32) -> Option<CodMatrix> {
    let g = CodMatrix::with_shape(n, k, rows).ok()?;
    (is_indecomposable(&g) && verify_bcod(&g).passed()).then_some(g)
}

fn dfs<S: Space>(space: &S, state: &S::State, cap: usize, out: &mut Vec<CodMatrix>) {
    if out.len() >= cap {
        return;
    }
    if space.is_complete(state) {
        out.extend(space.finish(state));
        return;
    }
    for child in space.children(state) {
        dfs(space, &child, cap, out);
        if out.len() >= cap {
            return;
        }
    }
}

fn run<S: Space>(space: &S, depth: usize, cap: usize) -> Vec<CodMatrix> {
    let mut frontier = vec![space.root()];
    for _ in 0..depth {
        frontier = frontier
            .into_iter()
            .flat_map(|s| if space.is_complete(&s) { vec![s] } else { space.children(&s) })
            .collect();
    }
    let parts: Vec<Vec<CodMatrix>> = frontier
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            dfs(space, s, cap, &mut out);
            out
        })
        .collect();
    parts.into_iter().flatten().take(cap).collect()
}

#[derive(Clone)]
struct ColState {
    grid: Vec<Vec<Entry>>,
    filled: usize,
}

struct ColumnSpace {
    m: usize,
    k: u32,
}

impl ColumnSpace {
    fn p(&self) -> usize {
        2 * self.k as usize
    }
    fn n(&self) -> usize {
        2 * self.m
    }
}

impl Space for ColumnSpace {
    type State = ColState;

    fn root(&self) -> ColState {
        ColState { grid: vec![vec![Entry::Zero; self.n()]; self.p()], filled: 0 }
    }

    fn is_complete(&self, s: &ColState) -> bool {
        s.filled == self.n()
    }

    fn children(&self, s: &ColState) -> Vec<ColState> {
        let (p, n, m) = (self.p(), self.n(), self.m);
        let j = s.filled;
        let count: Vec<usize> = s.grid.iter().map(|r| r.iter().filter(|e| !e.is_zero()).count()).collect();
        let remaining = n - j;
        // Rows that must receive a nonzero in this column to still reach m.
        let forced: Vec<usize> = (0..p).filter(|&r| count[r] + remaining == m).collect();
        if forced.len() > self.k as usize {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut rows_of = vec![usize::MAX; self.k as usize];
        self.assign(s, j, 0, &count, &forced, &mut rows_of, &mut out);
        out
    }

    fn finish(&self, s: &ColState) -> Option<CodMatrix> {
        if s.grid.iter().any(|r| r.iter().filter(|e| !e.is_zero()).count() != self.m) {
            return None;
        }
        accept(s.grid.clone(), self.n(), self.k)
    }
}

impl ColumnSpace {
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        s: &ColState,
        j: usize,
        v: usize,
        count: &[usize],
        forced: &[usize],
        rows_of: &mut Vec<usize>,
        out: &mut Vec<ColState>,
    ) {
        let k = self.k as usize;
        if v == k {
            if forced.iter().any(|r| !rows_of.contains(r)) {
                return;
            }
            for signs in 0..(1u32 << (2 * k)) {
                let mut grid = s.grid.clone();
                for (i, &r) in rows_of.iter().enumerate() {
                    let bits = signs >> (2 * i);
                    grid[r][j] = Entry::term(i as u32 + 1, bits & 1 == 1, bits & 2 == 2);
                }
                if (0..j).all(|a| rows_inner_product(&grid, a, j).is_zero()) {
                    out.push(ColState { grid, filled: j + 1 });
                }
            }
            return;
        }
        for r in 0..self.p() {
            if count[r] < self.m && !rows_of[..v].contains(&r) {
                rows_of[v] = r;
                self.assign(s, j, v + 1, count, forced, rows_of, out);
            }
        }
        rows_of[v] = usize::MAX;
    }
}

#[derive(Clone)]
struct PairState {
    rows: Vec<Vec<Entry>>,
    /// occupied[c][v]: z_v already placed in column c.
    occupied: Vec<Vec<bool>>,
    max_var: u32,
}

struct PairSpace {
    m: usize,
    k: u32,
}

fn key(row: &[Entry]) -> Vec<u32> {
    row.iter()
        .map(|e| match *e {
            Entry::Zero => 0,
            Entry::Term { var, neg, conj } => 1 + 4 * var + 2 * neg as u32 + conj as u32,
        })
        .collect()
}

impl PairSpace {
    fn n(&self) -> usize {
        2 * self.m
    }

    fn place(&self, s: &mut PairState, row: Vec<Entry>) {
        for (c, e) in row.iter().enumerate() {
            if let Some(v) = e.var() {
                s.occupied[c][v as usize] = true;
                s.max_var = s.max_var.max(v);
            }
        }
        s.rows.push(row);
    }

    /// Whether every monomial left in a column inner product can still be
    /// cancelled by some future row.
    fn cancellable(&self, s: &PairState) -> bool {
        let n = self.n();
        for a in 0..n {
            for b in a + 1..n {
                for (r, row) in s.rows.iter().enumerate() {
                    let (x, y) = (row[a], row[b]);
                    let (Some(xv), Some(yv)) = (x.var(), y.var()) else { continue };
                    match s.rows.iter().position(|r2| r2[a].var() == Some(yv)) {
                        Some(r2) if r2 != r => {
                            if s.rows[r2][b].var() != Some(xv) {
                                return false;
                            }
                        }
                        Some(_) => return false,
                        None => {
                            if s.occupied[b][xv as usize] {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn fill(&self, s: &PairState, support: &[usize], pos: usize, row: &mut Vec<Entry>, max: u32, out: &mut Vec<PairState>) {
        if pos == support.len() {
            if let Some(last) = s.rows.iter().skip(2).step_by(2).next_back() {
                if key(row) <= key(last) {
                    return;
                }
            }
            self.partners(s, row, out);
            return;
        }
        let c = support[pos];
        let top = (max + 1).min(self.k);
        for v in 1..=top {
            if s.occupied[c][v as usize] || row.iter().any(|e| e.var() == Some(v)) {
                continue;
            }
            for neg in [false, true] {
                if pos == 0 && neg {
                    continue;
                }
                row[c] = Entry::term(v, neg, false);
                self.fill(s, support, pos + 1, row, max.max(v), out);
            }
        }
        row[c] = Entry::Zero;
    }

    fn partners(&self, s: &PairState, row: &[Entry], out: &mut Vec<PairState>) {
        let (n, m) = (self.n(), self.m);
        let mut base = vec![Entry::Zero; n];
        let mut cells = Vec::with_capacity(m);
        for (c, &x) in row.iter().enumerate() {
            if !x.is_zero() {
                let t = mirror(c, m);
                let e = x.conjugate();
                if s.occupied[t][e.var().unwrap() as usize] {
                    return;
                }
                base[t] = e;
                cells.push(t);
            }
        }
        cells.sort_unstable();
        for signs in 0..(1u32 << (cells.len() - 1)) {
            let mut partner = base.clone();
            for (i, &t) in cells[1..].iter().enumerate() {
                if signs >> i & 1 == 1 {
                    partner[t] = -partner[t];
                }
            }
            let mut next = s.clone();
            self.place(&mut next, row.to_vec());
            self.place(&mut next, partner);
            if next.max_var <= self.k && self.cancellable(&next) {
                out.push(next);
            }
        }
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

impl Space for PairSpace {
    type State = PairState;

    fn root(&self) -> PairState {
        let (n, m) = (self.n(), self.m);
        let mut s = PairState { rows: Vec::new(), occupied: vec![vec![false; self.k as usize + 1]; n], max_var: 0 };
        let mut first = vec![Entry::Zero; n];
        let mut partner = vec![Entry::Zero; n];
        first[0] = Entry::z(1);
        partner[m] = Entry::zc(1);
        for c in 1..m {
            first[m + c] = Entry::z(c as u32 + 1);
            partner[c] = Entry::zc(c as u32 + 1);
        }
        self.place(&mut s, first);
        self.place(&mut s, partner);
        s
    }

    fn is_complete(&self, s: &PairState) -> bool {
        s.rows.len() == 2 * self.k as usize
    }

    fn children(&self, s: &PairState) -> Vec<PairState> {
        let mut out = Vec::new();
        let mut row = vec![Entry::Zero; self.n()];
        for support in combinations(self.n(), self.m) {
            self.fill(s, &support, 0, &mut row, s.max_var, &mut out);
        }
        out
    }

    fn finish(&self, s: &PairState) -> Option<CodMatrix> {
        if s.max_var != self.k {
            return None;
        }
        accept(s.rows.clone(), self.n(), self.k)
    }
}

/// Every BCOD in the configured search space, in deterministic order.
pub fn enumerate_bcods(cfg: &SearchConfig) -> Result<Vec<CodMatrix>> {
    cfg.check()?;
    let cap = cfg.cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let k_min = match cfg.symmetry {
        Symmetry::None => 1,
        Symmetry::FixFirstPair => cfg.m as u32,
    };
    for k in k_min..=cfg.resolved_max_k() {
        let found = match cfg.symmetry {
            Symmetry::None => run(&ColumnSpace { m: cfg.m, k }, cfg.prefix_depth, cap - out.len()),
            Symmetry::FixFirstPair => run(&PairSpace { m: cfg.m, k }, cfg.prefix_depth, cap - out.len()),
        };
        out.extend(found);
        if out.len() >= cap {
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCount {
    pub m: usize,
    pub matrices: usize,
    pub representatives: Vec<CodMatrix>,
}

impl ClassCount {
    pub fn classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn summary_line(&self) -> String {
        format!("m={} matrices={} classes={}", self.m, self.matrices, self.classes())
    }
}

/// Partitions `matrices` into equivalence classes. Two matrices share a
/// class when canonicalization scripts exist for both and replay exactly.
pub fn partition_classes(m: usize, matrices: &[CodMatrix]) -> ClassCount {
    let canon: Vec<Option<CodMatrix>> = matrices
        .par_iter()
        .map(|g| {
            let cert = canonicalize(g).ok()?;
            (apply(g, &cert.script).ok()? == cert.canonical).then_some(cert.canonical)
        })
        .collect();
    let mut keys: Vec<Option<CodMatrix>> = Vec::new();
    let mut representatives = Vec::new();
    for (g, c) in matrices.iter().zip(canon) {
        let known = c.is_some() && keys.contains(&c);
        if !known {
            keys.push(c);
            representatives.push(g.clone());
        }
    }
    ClassCount { m, matrices: matrices.len(), representatives }
}

pub fn count_classes_in(cfg: &SearchConfig) -> Result<ClassCount> {
    Ok(partition_classes(cfg.m, &enumerate_bcods(cfg)?))
}

/// Class count at the default search level for `m`.
pub fn count_equivalence_classes(m: usize) -> Result<usize> {
    Ok(count_classes_in(&SearchConfig::for_m(m))?.classes())
}

/// Writes `bcod_<i>.cod` per matrix and `summary.txt` into `dir`.
pub fn write_results(dir: &Path, matrices: &[CodMatrix], summary: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (i, g) in matrices.iter().enumerate() {
        fs::write(dir.join(format!("bcod_{:05}.cod", i + 1)), g.to_string())?;
    }
    fs::write(dir.join("summary.txt"), format!("{summary}\n"))
}
