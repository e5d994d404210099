//! Equivalence operations as replayable scripts, `B_i` forms and the pair
//! structure of BCOD rows.

pub mod biform;
pub mod ops;
pub mod pairs;

pub use biform::{check_upper_triangle_distinct, is_bi_form, to_bi_form, BiFormView};
pub use ops::{apply, invert, random_script, EquivOp, OpScript};
pub use pairs::{find_pairs, locate_variable, Hit, Pairing};
