//! Semantic LaTeX to CAS syntax.

mod teo;
mod translator;

pub use teo::{is_atom, is_self_delimiting, strip_outer_parens, Fragment, Role, TeoList};
pub use translator::{MacroConsumption, Trace, Translator};

use serde::Serialize;
use thiserror::Error;

use crate::latex::LatexError;
use crate::lexicon::PatternError;
use crate::target::Target;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Parse(#[from] LatexError),
    #[error("unknown macro `\\{name}`")]
    UnknownMacro { name: String },
    #[error("no variant of `\\{name}` takes {optional} optional argument(s)")]
    NoVariant { name: String, optional: usize },
    #[error("`\\{name}` has no {target} translation")]
    NoPattern { name: String, target: Target },
    #[error("`\\{name}` expects {expected} braced argument(s), found {found}")]
    MissingArgument {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`\\{name}` allows at most {allowed} `@` sign(s), found {found}")]
    AtCount {
        name: String,
        allowed: usize,
        found: usize,
    },
    #[error("mismatched parentheses: `{open}` closed by `{close}`")]
    MismatchedParentheses { open: String, close: String },
    #[error("`{open}` is never closed")]
    UnclosedParenthesis { open: String },
    #[error("`{close}` has no opening partner")]
    UnopenedParenthesis { close: String },
    #[error("`{symbol}` has no operand")]
    MissingOperand { symbol: String },
    #[error("`@` does not follow a semantic macro")]
    StrayAt,
    #[error("unsupported symbol `{symbol}`")]
    UnsupportedSymbol { symbol: String },
    #[error("pattern of `\\{name}`: {source}")]
    Pattern {
        name: String,
        #[source]
        source: PatternError,
    },
}

/// What was done with one semantic macro.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfoRecord {
    pub macro_name: String,
    pub meaning: String,
    pub dlmf_link: String,
    pub target_link: String,
    pub chosen_pattern: String,
    pub alternatives_not_taken: Vec<String>,
    pub branch_cut_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationResult {
    pub output: String,
    pub info_log: Vec<InfoRecord>,
    pub target: Target,
}
