use crate::arith::Config;
use crate::error::{Error, Result};

/// Bounds that keep the exponential parts of the algorithms in check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of DNF branches explored by one elimination.
    pub branch_limit: usize,
    /// Maximum number of variables for cell decomposition (at most 3).
    pub dim_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            branch_limit: 100_000,
            dim_limit: 3,
        }
    }
}

/// The field and the limits shared by every operation of one computation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Context {
    pub config: Config,
    pub limits: Limits,
}

impl Context {
    pub fn new(config: Config) -> Self {
        Context {
            config,
            limits: Limits::default(),
        }
    }

    pub fn with_d(d: u64) -> Result<Self> {
        Ok(Context::new(Config::new(d)?))
    }

    pub fn with_limits(mut self, limits: Limits) -> Result<Self> {
        if limits.branch_limit == 0 {
            return Err(Error::InvalidConfig("branch limit must be positive".into()));
        }
        if limits.dim_limit == 0 || limits.dim_limit > 3 {
            return Err(Error::InvalidConfig(format!(
                "dimension limit {} must be between 1 and 3",
                limits.dim_limit
            )));
        }
        self.limits = limits;
        Ok(self)
    }
}
