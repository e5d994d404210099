//! Formal Hermitian inner products of design columns.
//!
//! A column product `sum_r conj(G[r,a]) * G[r,b]` is a polynomial whose
//! monomials are unordered pairs of [`Atom`]s with integer coefficients. The
//! pair is stored with its atoms sorted, so `z1* z2` and `z2 z1*` are the
//! same key.

use std::collections::BTreeMap;
use std::fmt;

use crate::entry::{Atom, Entry};
use crate::error::{Error, Result};
use crate::matrix::CodMatrix;

/// A degree-2 monomial with its two atoms in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Atom, Atom);

impl Monomial {
    pub fn new(a: Atom, b: Atom) -> Self {
        if a <= b {
            Monomial(a, b)
        } else {
            Monomial(b, a)
        }
    }

    /// `|z_var|^2`, i.e. `z_var z_var*`.
    pub fn norm(var: u32) -> Self {
        Monomial(Atom { var, conj: false }, Atom { var, conj: true })
    }

    pub fn atoms(self) -> (Atom, Atom) {
        (self.0, self.1)
    }
}

/// Integer-coefficient polynomial in the monomials above. Zero coefficients
/// are never stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HermitianProduct {
    terms: BTreeMap<Monomial, i64>,
}

impl HermitianProduct {
    pub fn new() -> Self {
        Self::default()
    }

    /// `|z_1|^2 + ... + |z_k|^2`.
    pub fn sum_of_norms(k: u32) -> Self {
        let terms = (1..=k).map(|v| (Monomial::norm(v), 1)).collect();
        HermitianProduct { terms }
    }

    /// Adds `conj(x) * y`.
    pub fn add_product(&mut self, x: Entry, y: Entry) {
        let (Some(a), Some(b)) = (x.conjugate().atom(), y.atom()) else {
            return;
        };
        self.add(Monomial::new(a, b), x.sign() * y.sign());
    }

    pub fn add(&mut self, mono: Monomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(mono).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: Monomial) -> i64 {
        self.terms.get(&mono).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }
}

impl fmt::Display for HermitianProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let (a, b) = mono.atoms();
            let mag = coeff.abs();
            match (i, *coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            if a.var == b.var && a.conj != b.conj {
                write!(f, "|z{}|^2", a.var)?;
            } else {
                write!(f, "{a}{b}")?;
            }
        }
        Ok(())
    }
}

/// Inner product of columns `a` and `b` (0-based), computed formally.
pub fn column_inner_product(g: &CodMatrix, a: usize, b: usize) -> Result<HermitianProduct> {
    if a >= g.n() || b >= g.n() {
        return Err(Error::IndexOutOfRange(format!(
            "columns ({}, {}) of {}",
            a + 1,
            b + 1,
            g.n()
        )));
    }
    Ok(rows_inner_product(g.rows(), a, b))
}

pub(crate) fn rows_inner_product(rows: &[Vec<Entry>], a: usize, b: usize) -> HermitianProduct {
    let mut acc = HermitianProduct::new();
    for row in rows {
        acc.add_product(row[a], row[b]);
    }
    acc
}
