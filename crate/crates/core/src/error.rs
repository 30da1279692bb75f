use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not found: {0}")]
    NotFound(String),
    /// An internal consistency assertion failed. Never expected to fire.
    #[error("construction bug: {0}")]
    ConstructionBug(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

/// Search budget counted in explored nodes. Exceeding it yields
/// [`Error::ResourceLimit`], never a negative answer.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: std::cell::Cell<u64>,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 20_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { limit, used: std::cell::Cell::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Charge one node.
    #[inline]
    pub fn tick(&self) -> Result<()> {
        let u = self.used.get() + 1;
        self.used.set(u);
        if u > self.limit {
            Err(Error::ResourceLimit(format!("search exceeded {} nodes", self.limit)))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_NODES)
    }
}
