use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("capacity error: {what} has size {size}, cap is {cap}")]
    Capacity { what: String, size: usize, cap: usize },
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("family is not weakly partitive: {0}")]
    NotWeaklyPartitive(String),
    #[error("reconstruction error: {0}")]
    Reconstruction(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn capacity(what: impl Into<String>, size: usize, cap: usize) -> Self {
        Error::Capacity { what: what.into(), size, cap }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Capacity { .. } => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Capacity { .. } => "capacity",
            Error::Precondition(_) => "precondition",
            Error::Validation(_) => "validation",
            Error::NotWeaklyPartitive(_) => "classification",
            Error::Reconstruction(_) => "reconstruction",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::capacity(what, size, cap))
    } else {
        Ok(())
    }
}
