//! Maple syntax back to semantic LaTeX.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cas::{cosmetic, parse_cas, CasError, CasNode, ParseOptions};
use crate::forward::{InfoRecord, TranslationResult};
use crate::lexicon::{Lexicon, MacroEntry, TranslationPattern};
use crate::target::Target;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackwardError {
    #[error(transparent)]
    Parse(#[from] CasError),
    #[error("no backward translation for `{name}` with {args} argument(s)")]
    Untranslatable { name: String, args: usize },
    #[error("`{name}` with {args} argument(s) is claimed by both `\\{first}` and `\\{second}`")]
    Conflict {
        name: String,
        args: usize,
        first: String,
        second: String,
    },
    #[error("{0} has no semantic LaTeX form")]
    Unsupported(String),
    #[error("backward pattern of `\\{name}` needs {needed} argument(s)")]
    Pattern { name: String, needed: usize },
}

/// One indexed CAS function.
#[derive(Debug, Clone)]
pub struct BackwardRule {
    pub entry: Arc<MacroEntry>,
    /// Semantic slot held by each Maple argument position.
    pub order: Vec<usize>,
    pub pattern: TranslationPattern,
}

/// Function name and argument count → macro, plus the reverse symbol table.
#[derive(Debug, Clone, Default)]
pub struct BackwardIndex {
    rules: HashMap<(String, usize), BackwardRule>,
    names: HashMap<String, String>,
}

impl BackwardIndex {
    pub fn build(lexicon: &Lexicon) -> Result<Self, BackwardError> {
        let mut idx = BackwardIndex::default();
        for entry in lexicon.entries() {
            let Some(maple) = entry.forward_pattern(Target::Maple) else {
                continue;
            };
            if entry.is_symbol() {
                let text = maple.to_string();
                if is_name(&text) {
                    idx.names
                        .entry(text)
                        .or_insert_with(|| format!("\\{}", entry.macro_name));
                }
                continue;
            }
            let rule = if let Some(p) = &entry.backward_pattern {
                let (name, args) = maple.head_call().expect("validated at load");
                ((name, args), (0..args).collect(), p.clone())
            } else if let Some((name, order)) = maple.as_simple_call() {
                let n = order.len();
                let p = generated_pattern(entry, &order);
                ((name, n), order, p)
            } else {
                continue;
            };
            let (key, order, pattern) = rule;
            if let Some(prev) = idx.rules.get(&key) {
                return Err(BackwardError::Conflict {
                    name: key.0,
                    args: key.1,
                    first: prev.entry.macro_name.clone(),
                    second: entry.macro_name.clone(),
                });
            }
            idx.rules.insert(
                key,
                BackwardRule {
                    entry: Arc::clone(entry),
                    order,
                    pattern,
                },
            );
        }
        Ok(idx)
    }

    pub fn rule(&self, name: &str, args: usize) -> Option<&BackwardRule> {
        self.rules.get(&(name.to_string(), args))
    }

    /// Semantic slot for each Maple argument position of `name`.
    pub fn permutation(&self, name: &str, args: usize) -> Option<&[usize]> {
        self.rule(name, args).map(|r| r.order.as_slice())
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Parses Maple input, applies the display rewrite and translates.
    pub fn translate_str(&self, maple: &str) -> Result<TranslationResult, BackwardError> {
        let tree = parse_cas(maple, ParseOptions { unevaluated: true })?;
        self.translate(&cosmetic(&tree))
    }

    /// Translates a display tree.
    pub fn translate(&self, node: &CasNode) -> Result<TranslationResult, BackwardError> {
        let mut w = Writer {
            idx: self,
            log: Vec::new(),
        };
        let output = w.node(node)?;
        Ok(TranslationResult {
            output,
            info_log: w.log,
            target: Target::Maple,
        })
    }
}

/// `\name[$p]..{$p}..@{$p}..` with each slot replaced by the Maple position holding it.
fn generated_pattern(entry: &MacroEntry, order: &[usize]) -> TranslationPattern {
    let pos = |slot: usize| order.iter().position(|s| *s == slot).expect("permutation");
    let mut text = format!("\\{}", entry.macro_name);
    let mut slot = 0;
    for _ in 0..entry.num_optional {
        text.push_str(&format!("[${}]", pos(slot)));
        slot += 1;
    }
    for _ in 0..entry.num_params {
        text.push_str(&format!("{{${}}}", pos(slot)));
        slot += 1;
    }
    if entry.num_ats > 0 {
        text.push('@');
    }
    for _ in 0..entry.num_vars {
        text.push_str(&format!("{{${}}}", pos(slot)));
        slot += 1;
    }
    TranslationPattern::parse(&text).expect("generated pattern")
}

fn is_name(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic()) && c.all(|c| c.is_ascii_alphanumeric())
}

struct Writer<'a> {
    idx: &'a BackwardIndex,
    log: Vec<InfoRecord>,
}

impl Writer<'_> {
    fn node(&mut self, n: &CasNode) -> Result<String, BackwardError> {
        Ok(match n {
            CasNode::Sum(terms) => {
                let mut out = String::new();
                for (i, (t, f)) in terms.iter().enumerate() {
                    let text = self.node(t)?;
                    let wrap = matches!(t, CasNode::Sum(_) | CasNode::Complex { re: Some(_), .. })
                        || ((i > 0 || *f != 1) && text.starts_with('-'));
                    let text = paren_if(text, wrap);
                    match *f {
                        1 if i == 0 => out.push_str(&text),
                        1 => out.push_str(&format!("+{text}")),
                        -1 => out.push_str(&format!("-{text}")),
                        k => {
                            if i > 0 || k < 0 {
                                out.push(if k < 0 { '-' } else { '+' });
                            }
                            out.push_str(&join_idot(&[k.unsigned_abs().to_string(), text]));
                        }
                    }
                }
                out
            }
            CasNode::Prod(factors) => {
                let mut sign = "";
                let mut rest = factors.as_slice();
                if factors.len() > 1 && factors[0] == CasNode::IntNeg(-1) {
                    sign = "-";
                    rest = &factors[1..];
                }
                let mut parts = Vec::new();
                for (i, f) in rest.iter().enumerate() {
                    let text = self.node(f)?;
                    let wrap = matches!(f, CasNode::Sum(_) | CasNode::Complex { re: Some(_), .. })
                        || ((i > 0 || !sign.is_empty()) && text.starts_with('-'));
                    parts.push(paren_if(text, wrap));
                }
                format!("{sign}{}", join_idot(&parts))
            }
            CasNode::Power(b, e) if **e == (CasNode::Rational { num: 1, den: 2 }) => {
                format!("\\sqrt{{{}}}", self.node(b)?)
            }
            CasNode::Power(b, e) => {
                let base = self.node(b)?;
                let atomic = match &**b {
                    CasNode::Name(_) | CasNode::IntPos(_) => true,
                    CasNode::Function { name, .. } => !matches!(name.as_str(), "factorial" | "doublefactorial"),
                    CasNode::MyFloat(s) => !s.starts_with('-'),
                    _ => false,
                };
                format!("{}^{{{}}}", paren_if(base, !atomic), self.node(e)?)
            }
            CasNode::Divide(a, b) => format!("\\frac{{{}}}{{{}}}", self.node(a)?, self.node(b)?),
            CasNode::Rational { num, den } if *num < 0 => format!("-\\frac{{{}}}{{{den}}}", -num),
            CasNode::Rational { num, den } => format!("\\frac{{{num}}}{{{den}}}"),
            CasNode::IntPos(v) | CasNode::IntNeg(v) => v.to_string(),
            CasNode::MyFloat(s) => s.clone(),
            CasNode::Float { mantissa, exponent } => format!("{mantissa}\\idot10^{{{exponent}}}"),
            CasNode::Complex { re, im } => {
                let im_text = if **im == CasNode::IntPos(1) {
                    "\\iunit".to_string()
                } else if **im == CasNode::IntNeg(-1) {
                    "-\\iunit".to_string()
                } else {
                    format!("{}\\idot\\iunit", self.node(im)?)
                };
                match re {
                    None => im_text,
                    Some(re) => {
                        let re = self.node(re)?;
                        if im_text.starts_with('-') {
                            format!("{re}{im_text}")
                        } else {
                            format!("{re}+{im_text}")
                        }
                    }
                }
            }
            CasNode::Name(s) => match self.idx.names.get(s) {
                Some(m) => m.clone(),
                None if s == "infinity" => "\\infty".into(),
                None => s.clone(),
            },
            CasNode::ExpSeq(_) => return Err(BackwardError::Unsupported("a list".into())),
            CasNode::Function { name, args } if args.len() == 1 && (name == "factorial" || name == "doublefactorial") => {
                let arg = &args[0];
                let text = self.node(arg)?;
                let atomic = matches!(arg, CasNode::Name(_) | CasNode::IntPos(_));
                let bang = if name == "factorial" { "!" } else { "!!" };
                format!("{}{bang}", paren_if(text, !atomic))
            }
            CasNode::Function { name, args } if name == "binomial" && args.len() == 2 => {
                format!("\\binom{{{}}}{{{}}}", self.node(&args[0])?, self.node(&args[1])?)
            }
            CasNode::Function { name, args } => {
                let Some(rule) = self.idx.rule(name, args.len()) else {
                    return Err(BackwardError::Untranslatable {
                        name: name.clone(),
                        args: args.len(),
                    });
                };
                let texts = args.iter().map(|a| self.node(a)).collect::<Result<Vec<_>, _>>()?;
                let out = rule.pattern.fill(&texts).map_err(|_| BackwardError::Pattern {
                    name: rule.entry.macro_name.clone(),
                    needed: rule.pattern.max_slot().map_or(0, |m| m + 1),
                })?;
                self.log.push(InfoRecord {
                    macro_name: rule.entry.macro_name.clone(),
                    meaning: rule.entry.meaning.clone(),
                    dlmf_link: rule.entry.dlmf_link.clone(),
                    target_link: rule
                        .entry
                        .target(Target::Maple)
                        .map(|t| t.link.clone())
                        .unwrap_or_default(),
                    chosen_pattern: rule.pattern.to_string(),
                    alternatives_not_taken: Vec::new(),
                    branch_cut_note: rule.entry.branch_cut_note(Target::Maple).map(str::to_string),
                });
                out
            }
        })
    }
}

/// Joins with `\idot`, adding a space only where a letter follows.
fn join_idot(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push_str("\\idot");
            if p.starts_with(|c: char| c.is_ascii_alphabetic()) {
                out.push(' ');
            }
        }
        out.push_str(p);
    }
    out
}

fn paren_if(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}
