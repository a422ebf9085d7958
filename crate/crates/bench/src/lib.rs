//! Shared fixtures for the benchmark targets.

use treepaths::{solve_tree_series, FamilyName, PowerSeries, TreeFamily};

/// The general-tree series at the given order, the usual heavy operand.
pub fn catalan_series(order: usize) -> PowerSeries {
    solve_tree_series(&TreeFamily::new(FamilyName::General, 1), order)
}
