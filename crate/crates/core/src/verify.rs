//! Checks of the COD and BCOD axioms.
//!
//! Each axiom is checked in full but reports only its first violation.

use std::fmt;

use serde::Serialize;

use crate::entry::Entry;
use crate::equivalence::biform::restricted_bi_form;
use crate::hermitian::{rows_inner_product, HermitianProduct};
use crate::matrix::{classify_row, CodMatrix, RowClass};

/// One failed axiom. Row and column coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: &'static str, rows: Vec<usize>, columns: Vec<usize>, detail: String) {
        self.violations.push(Violation { axiom, rows, columns, detail });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "pass");
        }
        writeln!(f, "fail")?;
        for v in &self.violations {
            write!(f, "  {}:", v.axiom)?;
            if !v.rows.is_empty() {
                write!(f, " rows {:?}", v.rows)?;
            }
            if !v.columns.is_empty() {
                write!(f, " columns {:?}", v.columns)?;
            }
            writeln!(f, " {}", v.detail)?;
        }
        Ok(())
    }
}

/// Checks that every variable occurs once per column and that
/// `G^H G = (|z_1|^2 + ... + |z_k|^2) I`.
pub fn verify_cod(g: &CodMatrix) -> VerificationReport {
    let mut report = VerificationReport::default();
    check_occurrence(g, &mut report);

    let n = g.n();
    'orth: for a in 0..n {
        for b in a + 1..n {
            let ip = rows_inner_product(g.rows(), a, b);
            if !ip.is_zero() {
                report.push(
                    "orthogonality",
                    vec![],
                    vec![a + 1, b + 1],
                    format!("inner product is {ip}"),
                );
                break 'orth;
            }
        }
    }

    let norm = HermitianProduct::sum_of_norms(g.k());
    for c in 0..n {
        let ip = rows_inner_product(g.rows(), c, c);
        if ip != norm {
            report.push("norm", vec![], vec![c + 1], format!("column norm is {ip}"));
            break;
        }
    }
    report
}

fn occurrence_counts(g: &CodMatrix, c: usize) -> Vec<usize> {
    let mut counts = vec![0usize; g.k() as usize + 1];
    for e in g.column(c) {
        if let Some(v) = e.var() {
            counts[v as usize] += 1;
        }
    }
    counts
}

fn check_occurrence(g: &CodMatrix, report: &mut VerificationReport) {
    for c in 0..g.n() {
        let counts = occurrence_counts(g, c);
        if let Some(v) = (1..=g.k()).find(|&v| counts[v as usize] != 1) {
            report.push(
                "occurrence",
                vec![],
                vec![c + 1],
                format!("z{v} occurs {} times", counts[v as usize]),
            );
            return;
        }
    }
}

/// Checks the BCOD axioms on top of [`verify_cod`]: even width, `m` zeros per
/// row, conjugation separation, power balance, and skew-symmetry of the
/// block `M_j` of every `B_j` form reached by column-restricted operations.
pub fn verify_bcod(g: &CodMatrix) -> VerificationReport {
    let mut report = verify_cod(g);
    let cod_ok = report.passed();
    let n = g.n();
    if !n.is_multiple_of(2) || n == 0 {
        report.push("even-columns", vec![], vec![], format!("{n} columns"));
        return report;
    }
    let m = n / 2;

    if let Some(r) = (0..g.p()).find(|&r| g.row(r).iter().filter(|e| e.is_zero()).count() != m) {
        let zeros = g.row(r).iter().filter(|e| e.is_zero()).count();
        report.push("row-balance", vec![r + 1], vec![], format!("{zeros} zeros, expected {m}"));
    }

    if let Some(r) = (0..g.p()).find(|&r| {
        matches!(classify_row(g.row(r)), RowClass::Mixed | RowClass::AllZero)
    }) {
        report.push(
            "conjugation-separation",
            vec![r + 1],
            vec![],
            format!("row is {:?}", classify_row(g.row(r))),
        );
    }

    let first = occurrence_counts(g, 0);
    if let Some(c) = (1..n).find(|&c| occurrence_counts(g, c) != first) {
        report.push(
            "power-balance",
            vec![],
            vec![1, c + 1],
            "variable counts differ between columns".into(),
        );
    }

    if cod_ok {
        for j in 1..=g.k() {
            match restricted_bi_form(g.rows(), n, j) {
                Err(e) => {
                    report.push("b-form", vec![], vec![], format!("z{j}: {e}"));
                    break;
                }
                Ok((_, _, view)) => {
                    if let Some((a, b)) = skew_violation(&view.block) {
                        report.push(
                            "skew-symmetry",
                            vec![],
                            vec![],
                            format!(
                                "M_{j}({a},{b}) = {} but M_{j}({b},{a}) = {}",
                                view.block[a - 1][b - 1],
                                view.block[b - 1][a - 1]
                            ),
                        );
                        break;
                    }
                }
            }
        }
    }

    if report.passed() {
        debug_assert!(
            m >= 64 || g.p() >= 1usize << m,
            "delay bound p >= 2^m violated by a verified BCOD"
        );
    }
    report
}

/// First `(a, b)` (1-based) with `M(a,b) != -M(b,a)`.
pub(crate) fn skew_violation(block: &[Vec<Entry>]) -> Option<(usize, usize)> {
    let size = block.len();
    for (a, row) in block.iter().enumerate() {
        for b in a..size {
            if row.len() != size || row[b] != -block[b][a] {
                return Some((a + 1, b + 1));
            }
        }
    }
    None
}
