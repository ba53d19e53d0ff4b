//! Maple-style input: inert expression trees, rendering and display cosmetics.

mod cosmetic;
mod node;
mod parser;
mod render;

pub use cosmetic::cosmetic;
pub use node::CasNode;
pub use parser::{parse_cas, ParseOptions};
pub use render::{render_cas, RenderError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CasErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected `{0}`")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("`{0}` is never closed")]
    Unclosed(String),
    #[error("empty argument")]
    EmptyArgument,
    #[error("trailing operator `{0}`")]
    TrailingOperator(String),
    #[error("expression sequences are only allowed as function arguments or inside `[ ]`")]
    BareComma,
    #[error("integer literal does not fit in 64 bits")]
    IntegerOverflow,
    #[error("unevaluation quotes are not enabled")]
    QuotesNotAllowed,
    #[error("{0} is not supported")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {pos}")]
pub struct CasError {
    pub kind: CasErrorKind,
    pub pos: usize,
}
