//! First-order syntax for the three languages, with parsing, printing,
//! normalization, substitution and quantifier-free evaluation.

mod ast;
mod eval;
mod normalize;
mod parse;
mod print;
mod term;

use serde::{Deserialize, Serialize};

pub use ast::{fresh_name, Atom, Formula, Lang};
pub use eval::eval_qf;
pub use normalize::{and, normalize, or};
pub use parse::{parse, parse_term};
pub use term::{Canon, LinAtom, LinExpr, Rel, Term, Var};

use crate::arith::Config;

/// Which domain variables range over: `Q`, `F`, or `F` with `P` read as `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureKind {
    M,
    Vstar,
    Pair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub kind: StructureKind,
    pub config: Config,
}

impl Structure {
    pub fn new(kind: StructureKind, config: Config) -> Self {
        Structure { kind, config }
    }

    pub fn m(config: &Config) -> Self {
        Structure::new(StructureKind::M, config.clone())
    }

    pub fn vstar(config: &Config) -> Self {
        Structure::new(StructureKind::Vstar, config.clone())
    }

    pub fn pair(config: &Config) -> Self {
        Structure::new(StructureKind::Pair, config.clone())
    }
}

#[cfg(test)]
mod tests;
