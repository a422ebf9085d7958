//! Path-length statistics in rooted tree families.
//!
//! Four simple varieties are built in (general/plane, binary, Motzkin and
//! labeled Cayley trees). For each, the crate produces the tree, vertex and
//! leaf generating series over exact rationals, the k-th-moment series for
//! vertical path statistics, closed-form series for arbitrary and
//! leaf-to-leaf paths in general and binary trees, exact coefficient and
//! expectation formulas with their asymptotic expansions, singular
//! expansions at the dominant singularity, and an exhaustive enumeration
//! oracle everything is cross-validated against.

pub mod bivariate;
pub mod comb;
pub mod error;
pub mod family;
pub mod formulas;
pub mod oracle;
pub mod pathgf;
pub mod series;

pub use bivariate::{binary_bivariate, BivariateSeries};
pub use comb::{Int, Rat};
pub use error::{Error, Result};
pub use family::{
    leaves_series, singular_expand, solve_tree_series, vertices_series, FamilyName, LeavesMethod,
    SingularExpansion, TreeFamily,
};
pub use formulas::{
    all_closed_formulas, all_expansions, asym_eval, closed_eval, closed_formula, expansion,
    expectation_from_closed, moment_asym, moment_exact, moment_exact_in, AsymptoticExpansion,
    ClosedFormula,
};
pub use oracle::{
    census, census_all, enumerate_trees, verify_identities, Caps, CensusRow, CensusTable,
    IdentityCheck, IdentityReport, Slot, Source, Tree,
};
pub use pathgf::{
    binary_closed_gf, corollary_series, dk_series, general_closed_gf, multiset_weight_series,
    pk_polynomial, Measure, PathGf, PkPolynomial, StatKind,
};
pub use series::{arith, rat_parse, rat_string, ArithOp, PowerSeries, SeriesKind};
