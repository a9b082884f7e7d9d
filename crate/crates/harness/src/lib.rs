//! Independent oracles, seeded instance generators and the acceptance
//! criteria for quadcut.

pub mod brute;
pub mod criteria;
pub mod gen;
pub mod oracle;

pub use criteria::{run_all, Outcome, CRITERIA};
