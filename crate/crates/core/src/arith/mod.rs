//! Exact arithmetic in `Q` and in the real quadratic field `Q(sqrt d)`.

pub mod cf;
mod quad;
mod rat;

pub use quad::{Config, Quad};
pub use rat::Rat;
