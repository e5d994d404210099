mod common;

use bcod::format::{parse_matrix, serialize_matrix};
use bcod::matrix::row_conjugation_class;
use bcod::{column_inner_product, verify_bcod, verify_cod, Entry, Error, Monomial, RowClass};
use common::*;

#[test]
fn parse_two_by_two() {
    let g = parse_matrix("2 2 1\nz1 0\n0 z1*\n").unwrap();
    assert_eq!(g, tiny());
    assert_eq!(serialize_matrix(&g), "2 2 1\nz1 0\n0 z1*\n");
}

#[test]
fn parse_one_by_one() {
    let g = parse_matrix("1 1 1\nz1\n").unwrap();
    assert_eq!((g.p(), g.n(), g.k()), (1, 1, 1));
    assert_eq!(g.get(0, 0), Entry::z(1));
}

#[test]
fn unused_variable_is_named() {
    assert_eq!(parse_matrix("2 2 2\nz1 0\n0 z1*\n").unwrap_err(), Error::UnusedVariable(2));
}

#[test]
fn fixtures_round_trip() {
    for text in [BCOD_4X4, BCOD_8X6, BCOD_16X8, COD_8X5_G1, COD_8X5_G2] {
        let g = parse_matrix(text).unwrap();
        assert_eq!(serialize_matrix(&g), text);
        assert_eq!(parse_matrix(&serialize_matrix(&g)).unwrap(), g);
    }
}

#[test]
fn whitespace_normalizes() {
    let messy = "# comment\n  2   2 1\n z1\t0 \n\n0    z1*\n";
    let once = serialize_matrix(&parse_matrix(messy).unwrap());
    assert_eq!(once, "2 2 1\nz1 0\n0 z1*\n");
    assert_eq!(serialize_matrix(&parse_matrix(&once).unwrap()), once);
}

#[test]
fn inner_products_of_four_by_four() {
    let g = four();
    assert!(column_inner_product(&g, 2, 3).unwrap().is_zero());
    let diag = column_inner_product(&g, 0, 0).unwrap();
    assert_eq!(diag.len(), 2);
    assert_eq!(diag.coefficient(Monomial::norm(1)), 1);
    assert_eq!(diag.coefficient(Monomial::norm(2)), 1);
}

#[test]
fn repeated_column_doubles() {
    let g = parse_matrix("2 1 1\nz1\nz1\n").unwrap();
    let ip = column_inner_product(&g, 0, 0).unwrap();
    assert_eq!(ip.len(), 1);
    assert_eq!(ip.coefficient(Monomial::norm(1)), 2);
}

#[test]
fn inner_products_on_verified_cods() {
    for (_, g) in fixture_bcods().into_iter().chain([("g1", g1()), ("g2", g2())]) {
        for a in 0..g.n() {
            for b in 0..g.n() {
                let ip = column_inner_product(&g, a, b).unwrap();
                if a == b {
                    assert_eq!(ip.len(), g.k() as usize);
                    assert!((1..=g.k()).all(|v| ip.coefficient(Monomial::norm(v)) == 1));
                } else {
                    assert!(ip.is_empty());
                }
            }
        }
    }
}

#[test]
fn cod_verdicts() {
    assert!(verify_cod(&g1()).passed());
    assert!(verify_cod(&g2()).passed());
    assert!(verify_cod(&tiny()).passed());
}

#[test]
fn sign_flip_breaks_orthogonality() {
    let g = with_cell(&four(), 0, 0, -Entry::z(1));
    let report = verify_cod(&g);
    assert!(!report.passed());
    let v = report.violations.iter().find(|v| v.axiom == "orthogonality").unwrap();
    assert_eq!(v.columns, vec![1, 4]);
}

#[test]
fn bcod_verdicts() {
    assert!(verify_bcod(&eight()).passed());
    let report = verify_bcod(&g1());
    assert!(report.has("even-columns"));
}

#[test]
fn conjugation_mutation_reports_separation() {
    // Only one cell changes, so the COD axioms fail too; the separation
    // check must still name the row.
    let conj = with_cell(&four(), 1, 2, -Entry::zc(2));
    let report = verify_bcod(&conj);
    assert!(report.has("conjugation-separation"));
    let v = report.violations.iter().find(|v| v.axiom == "conjugation-separation").unwrap();
    assert_eq!(v.rows, vec![2]);
}

#[test]
fn row_classes() {
    let g = four();
    assert_eq!(row_conjugation_class(&g, 0).unwrap(), RowClass::Nonconjugated);
    assert_eq!(row_conjugation_class(&g, 2).unwrap(), RowClass::Conjugated);
    let z = parse_matrix("2 2 1\nz1 z1\n0 0\n").unwrap();
    assert_eq!(row_conjugation_class(&z, 1).unwrap(), RowClass::AllZero);
    assert!(row_conjugation_class(&g, 4).is_err());
}

#[test]
fn every_mutation_of_fixtures_fails() {
    for (name, g) in fixture_bcods().into_iter().chain([("g1", g1()), ("g2", g2())]) {
        for (r, c, e) in mutations(&g) {
            let h = with_cell(&g, r, c, e);
            assert!(!verify_cod(&h).passed(), "{name}: mutation at ({r},{c}) to {e} still verifies");
        }
    }
}

#[test]
fn delay_bound_on_fixture_bcods() {
    for (_, g) in fixture_bcods() {
        assert!(g.p() >= 1 << g.m());
    }
}
