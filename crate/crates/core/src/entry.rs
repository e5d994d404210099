use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

/// A single cell of a design: zero, or `±z_var` / `±z_var*`.
///
/// Variable indices are 1-based, matching the `z1 z2 ...` naming used in
/// text files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Entry {
    Zero,
    Term { var: u32, neg: bool, conj: bool },
}

/// One factor of a formal monomial: a variable, conjugated or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub var: u32,
    pub conj: bool,
}

impl Entry {
    /// `+z_var`.
    pub const fn z(var: u32) -> Self {
        Entry::Term { var, neg: false, conj: false }
    }

    /// `+z_var*`.
    pub const fn zc(var: u32) -> Self {
        Entry::Term { var, neg: false, conj: true }
    }

    pub const fn term(var: u32, neg: bool, conj: bool) -> Self {
        Entry::Term { var, neg, conj }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Entry::Zero)
    }

    pub fn var(self) -> Option<u32> {
        match self {
            Entry::Zero => None,
            Entry::Term { var, .. } => Some(var),
        }
    }

    pub fn is_neg(self) -> bool {
        matches!(self, Entry::Term { neg: true, .. })
    }

    pub fn is_conj(self) -> bool {
        matches!(self, Entry::Term { conj: true, .. })
    }

    pub fn atom(self) -> Option<Atom> {
        match self {
            Entry::Zero => None,
            Entry::Term { var, conj, .. } => Some(Atom { var, conj }),
        }
    }

    /// Sign as `±1`; zero for [`Entry::Zero`].
    pub fn sign(self) -> i64 {
        match self {
            Entry::Zero => 0,
            Entry::Term { neg: false, .. } => 1,
            Entry::Term { neg: true, .. } => -1,
        }
    }

    /// Complex conjugate: toggles the conjugation flag, keeps the sign.
    pub fn conjugate(self) -> Self {
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Term { var, neg, conj } => Entry::Term { var, neg, conj: !conj },
        }
    }

    /// The same cell with its sign forced to `+`.
    pub fn unsigned(self) -> Self {
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Term { var, conj, .. } => Entry::Term { var, neg: false, conj },
        }
    }

    /// Equal up to sign (same variable and conjugation, or both zero).
    pub fn same_up_to_sign(self, other: Entry) -> bool {
        self.unsigned() == other.unsigned()
    }
}

impl Neg for Entry {
    type Output = Entry;

    fn neg(self) -> Entry {
        match self {
            Entry::Zero => Entry::Zero,
            Entry::Term { var, neg, conj } => Entry::Term { var, neg: !neg, conj },
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Entry::Zero => f.write_str("0"),
            Entry::Term { var, neg, conj } => {
                if neg {
                    f.write_str("-")?;
                }
                write!(f, "z{var}")?;
                if conj {
                    f.write_str("*")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}{}", self.var, if self.conj { "*" } else { "" })
    }
}
