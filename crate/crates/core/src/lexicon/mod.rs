//! The translation-pattern library.
//!
//! A lexicon is loaded from one or more JSON files, each a top-level array of macro
//! entries. Entries are keyed by macro name and by the number of optional `[...]`
//! arguments the variant takes, so `\LegendreP{\nu}@{x}` and
//! `\LegendreP[\mu]{\nu}@{x}` resolve to different rows.

mod pattern;

pub use pattern::{PatternError, Segment, SlotContext, TranslationPattern};

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::target::Target;

/// Lexicon files compiled into the library.
pub const BUNDLED_FILES: [(&str, &str); 2] = [
    ("dlmf.json", include_str!("../../data/lexicon/dlmf.json")),
    ("symbols.json", include_str!("../../data/lexicon/symbols.json")),
];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}:{column}: {message}")]
    Malformed {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{file}: entry `{entry}`: {message}")]
    Invalid {
        file: String,
        entry: String,
        message: String,
    },
    #[error("{file}: duplicate entry `{entry}` with {optional} optional argument(s)")]
    Duplicate {
        file: String,
        entry: String,
        optional: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(rename = "macro")]
    name: String,
    #[serde(default)]
    optional: usize,
    #[serde(default)]
    params: usize,
    #[serde(default)]
    vars: usize,
    #[serde(default)]
    ats: usize,
    #[serde(default)]
    dlmf: String,
    #[serde(default)]
    dlmf_link: String,
    #[serde(default)]
    meaning: String,
    #[serde(default)]
    targets: BTreeMap<String, RawTarget>,
    #[serde(default)]
    backward: Option<RawBackward>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    pattern: String,
    #[serde(default)]
    link: String,
    #[serde(default)]
    alternatives: Vec<RawAlternative>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlternative {
    pattern: String,
    #[serde(default)]
    note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBackward {
    pattern: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub source: String,
    pub pattern: TranslationPattern,
    pub note: String,
}

/// Forward translation data for one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPattern {
    pub source: String,
    pub pattern: TranslationPattern,
    pub link: String,
    pub alternatives: Vec<Alternative>,
    pub note: Option<String>,
}

/// One row of the lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroEntry {
    pub macro_name: String,
    pub dlmf_snippet: String,
    pub dlmf_link: String,
    pub meaning: String,
    pub num_optional: usize,
    pub num_params: usize,
    pub num_vars: usize,
    pub num_ats: usize,
    pub targets: BTreeMap<String, TargetPattern>,
    pub backward_source: Option<String>,
    pub backward_pattern: Option<TranslationPattern>,
}

impl MacroEntry {
    /// Number of argument slots: optional arguments, then parameters, then variables.
    pub fn arity(&self) -> usize {
        self.num_optional + self.num_params + self.num_vars
    }

    pub fn target(&self, target: Target) -> Option<&TargetPattern> {
        self.targets.get(target.key())
    }

    pub fn forward_pattern(&self, target: Target) -> Option<&TranslationPattern> {
        self.target(target).map(|t| &t.pattern)
    }

    pub fn branch_cut_note(&self, target: Target) -> Option<&str> {
        self.target(target).and_then(|t| t.note.as_deref())
    }

    /// True for argument-free entries such as Greek letters and constants.
    pub fn is_symbol(&self) -> bool {
        self.arity() == 0 && self.num_ats == 0
    }

    fn validate(&self) -> Result<(), String> {
        if self.num_ats >= 1 && self.num_vars == 0 {
            return Err(format!("declares {} `@` sign(s) but no variables", self.num_ats));
        }
        let arity = self.arity();
        for (target, tp) in &self.targets {
            let patterns =
                std::iter::once(&tp.pattern).chain(tp.alternatives.iter().map(|a| &a.pattern));
            for p in patterns {
                if let Some(max) = p.max_slot() {
                    if max >= arity {
                        return Err(format!(
                            "{target} pattern `{p}` uses slot ${max} but the macro takes {arity} argument(s)"
                        ));
                    }
                }
            }
        }
        if let Some(bp) = &self.backward_pattern {
            let maple = self
                .target(Target::Maple)
                .ok_or("backward pattern given without a maple pattern")?;
            let (_, call_args) = maple.pattern.head_call().ok_or_else(|| {
                format!("backward pattern needs a maple pattern of the form `name(...)`, got `{}`", maple.pattern)
            })?;
            if let Some(max) = bp.max_slot() {
                if max >= call_args {
                    return Err(format!(
                        "backward pattern uses slot ${max} but the maple call has {call_args} argument(s)"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// An immutable, cheaply clonable index of macro entries.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<(String, usize), Arc<MacroEntry>>,
}

impl Lexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Loads the lexicon files compiled into the crate.
    pub fn bundled() -> Self {
        let mut lex = Self::empty();
        for (name, text) in BUNDLED_FILES {
            lex.add_json(name, text)
                .unwrap_or_else(|e| panic!("bundled lexicon is invalid: {e}"));
        }
        lex
    }

    pub fn load<P: AsRef<Path>>(paths: &[P]) -> Result<Self, LexiconError> {
        let mut lex = Self::empty();
        for path in paths {
            let path = path.as_ref();
            let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            lex.add_json(&path.display().to_string(), &text)?;
        }
        Ok(lex)
    }

    /// Parses and validates one lexicon file and merges it into `self`.
    pub fn add_json(&mut self, file: &str, text: &str) -> Result<(), LexiconError> {
        let raw: Vec<RawEntry> =
            serde_json::from_str(text).map_err(|e| LexiconError::Malformed {
                file: file.to_string(),
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        for r in raw {
            let entry = convert(r).map_err(|(entry, message)| LexiconError::Invalid {
                file: file.to_string(),
                entry,
                message,
            })?;
            entry.validate().map_err(|message| LexiconError::Invalid {
                file: file.to_string(),
                entry: entry.macro_name.clone(),
                message,
            })?;
            let key = (entry.macro_name.clone(), entry.num_optional);
            if self.entries.contains_key(&key) {
                return Err(LexiconError::Duplicate {
                    file: file.to_string(),
                    entry: key.0,
                    optional: key.1,
                });
            }
            self.entries.insert(key, Arc::new(entry));
        }
        Ok(())
    }

    /// Exact lookup; a missing variant never falls back to the base entry.
    pub fn lookup(&self, name: &str, optional_count: usize) -> Option<&Arc<MacroEntry>> {
        self.entries.get(&(name.to_string(), optional_count))
    }

    /// Any entry registered under `name`, preferring the base (no optional argument)
    /// variant. Used to tag parse-tree leaves before optional arguments are counted.
    pub fn any_variant(&self, name: &str) -> Option<&Arc<MacroEntry>> {
        self.lookup(name, 0).or_else(|| {
            self.entries
                .iter()
                .filter(|((n, _), _)| n == name)
                .min_by_key(|((_, d), _)| *d)
                .map(|(_, e)| e)
        })
    }

    pub fn contains_macro(&self, name: &str) -> bool {
        self.any_variant(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in a stable (name, optional count) order.
    pub fn entries(&self) -> Vec<&Arc<MacroEntry>> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v.into_iter().map(|(_, e)| e).collect()
    }

    /// A copy of this lexicon with the `target` patterns of two base entries exchanged.
    /// This models a pair of mistakenly defined translations.
    pub fn with_swapped_patterns(&self, a: &str, b: &str, target: Target) -> Option<Self> {
        let ea = self.lookup(a, 0)?.clone();
        let eb = self.lookup(b, 0)?.clone();
        let pa = ea.target(target)?.clone();
        let pb = eb.target(target)?.clone();
        let mut out = self.clone();
        let mut na = (*ea).clone();
        let mut nb = (*eb).clone();
        na.targets.insert(target.key().to_string(), pb);
        nb.targets.insert(target.key().to_string(), pa);
        out.entries.insert((a.to_string(), 0), Arc::new(na));
        out.entries.insert((b.to_string(), 0), Arc::new(nb));
        Some(out)
    }
}

fn convert(r: RawEntry) -> Result<MacroEntry, (String, String)> {
    let name = r.name.trim_start_matches('\\').to_string();
    let err = |m: String| (name.clone(), m);
    let mut targets = BTreeMap::new();
    for (key, t) in r.targets {
        let pattern = TranslationPattern::parse(&t.pattern)
            .map_err(|e| err(format!("{key} pattern `{}`: {e}", t.pattern)))?;
        let alternatives = t
            .alternatives
            .into_iter()
            .map(|a| {
                TranslationPattern::parse(&a.pattern)
                    .map(|pattern| Alternative {
                        source: a.pattern.clone(),
                        pattern,
                        note: a.note,
                    })
                    .map_err(|e| err(format!("{key} alternative `{}`: {e}", a.pattern)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        targets.insert(
            key,
            TargetPattern {
                source: t.pattern,
                pattern,
                link: t.link,
                alternatives,
                note: t.note,
            },
        );
    }
    let backward_pattern = match &r.backward {
        Some(b) => Some(
            TranslationPattern::parse(&b.pattern)
                .map_err(|e| err(format!("backward pattern `{}`: {e}", b.pattern)))?,
        ),
        None => None,
    };
    Ok(MacroEntry {
        macro_name: name.clone(),
        dlmf_snippet: r.dlmf,
        dlmf_link: r.dlmf_link,
        meaning: r.meaning,
        num_optional: r.optional,
        num_params: r.params,
        num_vars: r.vars,
        num_ats: r.ats,
        targets,
        backward_source: r.backward.map(|b| b.pattern),
        backward_pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIN: &str = r#"[{"macro": "sin", "params": 0, "vars": 1, "ats": 2,
        "dlmf": "\\sin@@{z}", "dlmf_link": "dlmf.nist.gov/4.14.E1", "meaning": "Sine",
        "targets": {"maple": {"pattern": "sin($0)", "link": "www.maplesoft.com/support/help/maple/view.aspx?path=sin"},
                    "mathematica": {"pattern": "Sin[$0]", "link": "reference.wolfram.com/language/ref/Sin.html"}}}]"#;

    #[test]
    fn sine_entry_loads() {
        let mut lex = Lexicon::empty();
        lex.add_json("sin.json", SIN).unwrap();
        let e = lex.lookup("sin", 0).unwrap();
        assert_eq!(e.num_ats, 2);
        assert_eq!(e.num_vars, 1);
        assert_eq!(e.target(Target::Maple).unwrap().source, "sin($0)");
        assert_eq!(e.target(Target::Mathematica).unwrap().source, "Sin[$0]");
        assert!(lex.lookup("sin", 1).is_none());
    }

    #[test]
    fn empty_lexicon_finds_nothing() {
        let lex = Lexicon::load::<&str>(&[]).unwrap();
        assert!(lex.is_empty());
        assert!(lex.lookup("sin", 0).is_none());
    }

    #[test]
    fn slot_beyond_arity_is_rejected() {
        let text = r#"[{"macro": "bad", "vars": 1, "ats": 1, "targets": {"maple": {"pattern": "f($5)"}}}]"#;
        let err = Lexicon::empty().add_json("bad.json", text).unwrap_err();
        match err {
            LexiconError::Invalid { entry, message, .. } => {
                assert_eq!(entry, "bad");
                assert!(message.contains("$5"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_names_file_and_line() {
        let err = Lexicon::empty()
            .add_json("broken.json", "[\n{\"macro\": \"x\",\n}")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("broken.json:3:"), "{msg}");
    }

    #[test]
    fn duplicate_variant_is_an_error() {
        let text = r#"[{"macro": "a", "targets": {}}, {"macro": "a", "targets": {}}]"#;
        assert!(matches!(
            Lexicon::empty().add_json("dup.json", text),
            Err(LexiconError::Duplicate { .. })
        ));
    }

    #[test]
    fn ats_require_variables() {
        let text = r#"[{"macro": "a", "ats": 1, "targets": {}}]"#;
        assert!(Lexicon::empty().add_json("a.json", text).is_err());
    }

    #[test]
    fn legendre_variants_are_distinct() {
        let lex = Lexicon::bundled();
        let base = lex.lookup("LegendreP", 0).unwrap();
        let assoc = lex.lookup("LegendreP", 1).unwrap();
        assert_eq!(base.target(Target::Maple).unwrap().source, "LegendreP($0, $1)");
        assert_eq!(assoc.target(Target::Maple).unwrap().source, "LegendreP($1, $0, $2)");
        assert!(lex.lookup("NoSuchMacro", 0).is_none());
        assert!(lex.lookup("LegendreP", 2).is_none());
    }

    #[test]
    fn loading_twice_behaves_identically() {
        let a = Lexicon::bundled();
        let b = Lexicon::bundled();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.entries().into_iter().zip(b.entries()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn swapped_patterns() {
        let lex = Lexicon::bundled();
        let m = lex.with_swapped_patterns("sin", "cos", Target::Maple).unwrap();
        assert_eq!(m.lookup("sin", 0).unwrap().target(Target::Maple).unwrap().source, "cos($0)");
        assert_eq!(m.lookup("cos", 0).unwrap().target(Target::Maple).unwrap().source, "sin($0)");
        assert_eq!(lex.lookup("sin", 0).unwrap().target(Target::Maple).unwrap().source, "sin($0)");
    }

    #[test]
    fn bundled_slots_respect_arity_under_mutation() {
        // Bumping any used slot past the declared arity must be caught at load.
        let lex = Lexicon::bundled();
        for e in lex.entries() {
            for (key, tp) in &e.targets {
                let Some(max) = tp.pattern.max_slot() else { continue };
                let bad = tp.source.replace(&format!("${max}"), &format!("${}", e.arity() + max));
                let json = serde_json::json!([{
                    "macro": e.macro_name, "optional": e.num_optional, "params": e.num_params,
                    "vars": e.num_vars, "ats": e.num_ats,
                    "targets": { key: { "pattern": bad } }
                }]);
                let res = Lexicon::empty().add_json("mut.json", &json.to_string());
                assert!(res.is_err(), "mutated {} {key} pattern `{bad}` was accepted", e.macro_name);
            }
        }
    }
}
