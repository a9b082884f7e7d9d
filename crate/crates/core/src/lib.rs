//! Exact decision procedures for the rationals with a `sqrt(d)`-slope
//! predicate, the ordered `Q(sqrt d)`-vector space that completes them,
//! and the dense pair of the two.

pub mod arith;
pub mod cells;
mod context;
pub mod cuts1d;
pub mod error;
pub mod formula;
pub mod pair;
pub mod qe;
pub mod report;

pub use arith::{Config, Quad, Rat};
pub use context::{Context, Limits};
pub use error::{Error, Result};
pub use formula::{parse, Formula, Lang, LinAtom, LinExpr, Structure, StructureKind, Term};
