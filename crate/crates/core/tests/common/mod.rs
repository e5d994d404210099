#![allow(dead_code)]

use bcod::format::parse_matrix;
use bcod::{CodMatrix, Entry};

pub const BCOD_4X4: &str = include_str!("../../data/fixtures/bcod_4x4.cod");
pub const BCOD_8X6: &str = include_str!("../../data/fixtures/bcod_8x6.cod");
pub const BCOD_16X8: &str = include_str!("../../data/fixtures/bcod_16x8.cod");
pub const COD_8X5_G1: &str = include_str!("../../data/fixtures/cod_8x5_g1.cod");
pub const COD_8X5_G2: &str = include_str!("../../data/fixtures/cod_8x5_g2.cod");

pub const GOLDEN: [&str; 6] = [
    include_str!("../../data/golden/m1.cod"),
    include_str!("../../data/golden/m2.cod"),
    include_str!("../../data/golden/m3.cod"),
    include_str!("../../data/golden/m4.cod"),
    include_str!("../../data/golden/m5.cod"),
    include_str!("../../data/golden/m6.cod"),
];

pub fn load(text: &str) -> CodMatrix {
    parse_matrix(text).expect("fixture parses")
}

pub fn four() -> CodMatrix {
    load(BCOD_4X4)
}

pub fn eight() -> CodMatrix {
    load(BCOD_8X6)
}

pub fn sixteen() -> CodMatrix {
    load(BCOD_16X8)
}

pub fn g1() -> CodMatrix {
    load(COD_8X5_G1)
}

pub fn g2() -> CodMatrix {
    load(COD_8X5_G2)
}

pub fn tiny() -> CodMatrix {
    CodMatrix::new(1, vec![vec![Entry::z(1), Entry::Zero], vec![Entry::Zero, Entry::zc(1)]]).unwrap()
}

pub fn fixture_bcods() -> Vec<(&'static str, CodMatrix)> {
    vec![("4x4", four()), ("8x6", eight()), ("16x8", sixteen())]
}

pub fn with_cell(g: &CodMatrix, r: usize, c: usize, e: Entry) -> CodMatrix {
    let mut rows = g.rows().to_vec();
    rows[r][c] = e;
    CodMatrix::with_shape(g.n(), g.k(), rows).unwrap()
}

/// Every single-cell mutation of a nonzero entry: sign flip, conjugation
/// toggle, and replacement by each other variable with the same sign and
/// conjugation.
pub fn mutations(g: &CodMatrix) -> Vec<(usize, usize, Entry)> {
    let mut out = Vec::new();
    for r in 0..g.p() {
        for c in 0..g.n() {
            let Entry::Term { var, neg, conj } = g.get(r, c) else { continue };
            out.push((r, c, Entry::Term { var, neg: !neg, conj }));
            out.push((r, c, Entry::Term { var, neg, conj: !conj }));
            for v in (1..=g.k()).filter(|&v| v != var) {
                out.push((r, c, Entry::Term { var: v, neg, conj }));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(a: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for j in i..a.len() {
            a.swap(i, j);
            rec(a, i + 1, out);
            a.swap(i, j);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), 0, &mut out);
    out
}

/// Is there an instance map (rename, negate, conjugate) taking `h` to `t`
/// up to row order and row signs? The image of row 0 fixes the images of
/// its variables, and each fixed variable pins down the image of every row
/// containing it, so trying every image of row 0 is exhaustive for
/// connected matrices.
fn instance_match(h: &[Vec<Entry>], t: &[Vec<Entry>], k: usize) -> bool {
    let (p, n) = (h.len(), h[0].len());
    for t0 in 0..p {
        for sign0 in [false, true] {
            let mut map: Vec<Option<(u32, bool, bool)>> = vec![None; k + 1];
            let mut assigned: Vec<Option<(usize, bool)>> = vec![None; p];
            let mut used = vec![false; p];
            assigned[0] = Some((t0, sign0));
            used[t0] = true;
            let mut queue = vec![0usize];
            let mut ok = true;
            'q: while let Some(r) = queue.pop() {
                let (tr, s) = assigned[r].unwrap();
                for c in 0..n {
                    let (a, b) = (h[r][c], t[tr][c]);
                    if a.is_zero() != b.is_zero() {
                        ok = false;
                        break 'q;
                    }
                    let (Entry::Term { var, neg, conj }, Entry::Term { var: bv, neg: bn, conj: bc }) = (a, b) else {
                        continue;
                    };
                    let want = (bv, neg ^ s ^ bn, conj ^ bc);
                    match map[var as usize] {
                        Some(x) if x != want => {
                            ok = false;
                            break 'q;
                        }
                        Some(_) => {}
                        None => {
                            map[var as usize] = Some(want);
                            for r2 in 0..p {
                                if assigned[r2].is_some() {
                                    continue;
                                }
                                let Some(c2) = (0..n).find(|&c2| h[r2][c2].var() == Some(var)) else { continue };
                                let e = h[r2][c2];
                                let Some(tx) = (0..p).find(|&x| t[x][c2].var() == Some(bv)) else {
                                    ok = false;
                                    break 'q;
                                };
                                if used[tx] {
                                    ok = false;
                                    break 'q;
                                }
                                let te = t[tx][c2];
                                if (e.is_conj() ^ want.2) != te.is_conj() {
                                    ok = false;
                                    break 'q;
                                }
                                assigned[r2] = Some((tx, e.is_neg() ^ want.1 ^ te.is_neg()));
                                used[tx] = true;
                                queue.push(r2);
                            }
                        }
                    }
                }
            }
            if ok && assigned.iter().all(Option::is_some) {
                return true;
            }
        }
    }
    false
}

/// Exhaustive check: can `h` be turned into `t` by equivalence operations
/// without column negations? Tries every column permutation, then
/// [`instance_match`]. Only usable for small `n`.
pub fn reachable_without_colneg(h: &CodMatrix, t: &CodMatrix) -> bool {
    let n = h.n();
    if n != t.n() || h.p() != t.p() || h.k() != t.k() {
        return false;
    }
    permutations(n).iter().any(|cp| {
        let permuted: Vec<Vec<Entry>> = h
            .rows()
            .iter()
            .map(|row| {
                let mut out = vec![Entry::Zero; n];
                for (i, &e) in row.iter().enumerate() {
                    out[cp[i]] = e;
                }
                out
            })
            .collect();
        instance_match(&permuted, t.rows(), t.k() as usize)
    })
}
