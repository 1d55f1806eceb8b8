//! Exact computations on Stern's diatomic array.
//!
//! The row values of the array are continuants of compositions with unit
//! ends, reached through alternating binary expansions. This crate builds
//! each piece of that bridge, the closed form for the largest
//! `ceil(r/2)` distinct values of row `r`, and brute-force routes that check
//! every formula.
//!
//! ```
//! use diatomic::{closed_form_l, brute_force_top};
//!
//! let closed = closed_form_l(7, 3).unwrap();
//! let scanned = brute_force_top(7, 3).unwrap();
//! assert_eq!(closed.value, scanned[2].value);
//! ```

pub mod altbin;
pub mod continuant;
pub mod decimal;
pub mod error;
pub mod extremal;
pub mod fibonacci;
pub mod stern;
pub mod verify;

pub use altbin::{canonical_expansion, evaluate, sibling_expansion, AltBinExpansion};
pub use continuant::{
    continuant, enumerate_shapes, kappa, reduce_step, reverse, rewrite_identities, split, weight,
    Composition, KappaShape, ShapeClass,
};
pub use error::{Error, Result};
pub use extremal::{
    check_conjecture7, check_conjecture9, closed_form_l, extremal_bounds, kappa_closed_forms,
    row_values_via_continuants, stern_continuant_bridge, top_value_set, ClosedFormResult,
    ConjectureWitness, ExtremalBounds, KappaClosedForms,
};
pub use fibonacci::{fib, ordered_products, vajda, OrderedProductEntry};
pub use stern::{brute_force_top, stern, stern_big, stern_row, MemoryCap, RankedValue, SternRow};
pub use verify::{run_suite, Suite, VerdictRecord, VerdictValue};
