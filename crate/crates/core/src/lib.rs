//! Translation between semantic LaTeX and computer-algebra syntax.
//!
//! The pipeline is: [`latex`] parses semantic LaTeX into a tree whose macro arguments
//! are following siblings, [`forward`] turns that tree into Maple or Mathematica
//! input, [`cas`] parses Maple input into an inert tree, [`backward`] turns that tree
//! back into semantic LaTeX, and [`eval`] / [`verify`] check translations numerically
//! and structurally.

pub mod backward;
pub mod cas;
pub mod eval;
pub mod forward;
pub mod latex;
pub mod lexicon;
pub mod target;
pub mod verify;

pub use backward::{BackwardError, BackwardIndex};
pub use cas::{CasError, CasNode, ParseOptions};
pub use eval::{Convention, Env, EvalError, Evaluator};
pub use forward::{InfoRecord, TranslateError, TranslationResult, Translator};
pub use latex::{LatexError, NodeKind, PomNode};
pub use lexicon::{Lexicon, LexiconError, MacroEntry, TranslationPattern};
pub use target::Target;
