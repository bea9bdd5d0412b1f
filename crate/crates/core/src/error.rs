use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration needs {required} units of work, cap is {cap}")]
    CapExceeded { required: u64, cap: u64 },
    #[error("budget exceeded: {required} units of work needed, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
