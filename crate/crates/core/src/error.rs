use thiserror::Error;

/// Errors raised by model construction, parsing and exhaustive analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}, byte {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },

    /// An exhaustive enumeration would exceed the configured limits.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    /// A model or argument failed a semantic check.
    #[error("validation error: {0}")]
    Validation(String),

    /// A rule set contained a rule that is not applicable to the configuration.
    #[error("rule `{0}` is not applicable to the configuration")]
    NotApplicable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            offset,
            message: message.into(),
        }
    }
}

/// Bounds on exhaustive work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest alphabet whose power set may be enumerated.
    pub vars: usize,
    /// Largest number of trajectories kept by bounded evolution.
    pub breadth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vars: 20,
            breadth: 100_000,
        }
    }
}

impl Limits {
    pub fn check_vars(&self, what: &'static str, needed: usize) -> Result<()> {
        // Enumeration codes are u64, so 63 is a hard ceiling whatever the cap.
        let limit = self.vars.min(63);
        if needed > limit {
            return Err(Error::Capacity {
                what,
                needed,
                limit,
            });
        }
        Ok(())
    }
}
