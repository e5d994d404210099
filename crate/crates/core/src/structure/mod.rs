//! Direct sums, middle-column removal and two-column completion.

mod components;
mod partial;
mod union_find;

pub use components::{components, direct_sum, is_indecomposable, remove_middle_columns, ComponentPartition};
pub(crate) use components::row_components;
pub use partial::{complete_columns, strip_to_partial, PartialBcod};
