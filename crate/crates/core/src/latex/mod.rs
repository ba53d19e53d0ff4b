//! Semantic LaTeX tokenizer and parser.

mod node;
mod parser;
mod tokenizer;

pub use node::{NodeKind, PomNode};
pub use parser::{parse, parse_str};
pub use tokenizer::{tokenize, Token, TokenClass};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatexError {
    #[error("lone backslash at byte {offset}")]
    LoneBackslash { offset: usize },
    #[error("double superscript at byte {offset}")]
    DoubleSuperscript { offset: usize },
    #[error("double subscript at byte {offset}")]
    DoubleSubscript { offset: usize },
    #[error("unbalanced braces: `{{` at byte {offset} is never closed")]
    UnclosedBrace { offset: usize },
    #[error("unbalanced braces: unexpected `}}` at byte {offset}")]
    UnexpectedBrace { offset: usize },
    #[error("`\\left` at byte {offset} has no matching `\\right`")]
    MissingRight { offset: usize },
    #[error("`\\right` at byte {offset} has no matching `\\left`")]
    UnexpectedRight { offset: usize },
    #[error("missing delimiter after `{command}` at byte {offset}")]
    MissingDelimiter { command: String, offset: usize },
    #[error("`{command}` at byte {offset} is missing an argument")]
    MissingArgument { command: String, offset: usize },
    #[error("unclosed `[` at byte {offset}")]
    UnclosedBracket { offset: usize },
}
