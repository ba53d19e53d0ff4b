//! Round-trip, structural and numerical checks of translations.

mod canonical;
mod case;
mod corpus;
mod numeric;
mod roundtrip;

pub use canonical::{canonical, CanonError, CanonOptions, Poly, GQ, Q};
pub use case::{Constraint, RelationCase, VarSpec};
pub use corpus::{load_corpus, parse_corpus, CorpusReport, Summary};
pub use numeric::{CauseHint, NumericConfig, NumericReport, NumericVerdict, PointResidual};
pub use roundtrip::{RoundTripReport, Step, StepError, System};

use serde::Serialize;
use thiserror::Error;

use crate::backward::{BackwardError, BackwardIndex};
use crate::cas::{parse_cas, CasNode, ParseOptions};
use crate::eval::{Evaluator, CONSTANTS};
use crate::forward::Translator;
use crate::lexicon::Lexicon;
use crate::target::Target;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("case `{id}`: {message}")]
    Case { id: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuralVerdict {
    Equal,
    /// Only reported when both sides are distinct exact constants.
    Unequal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub verdict: StructuralVerdict,
    pub note: Option<String>,
}

/// Both sides of a relation in Maple syntax and as inert trees.
#[derive(Debug, Clone)]
pub struct TranslatedCase {
    pub lhs_text: String,
    pub rhs_text: String,
    pub lhs: CasNode,
    pub rhs: CasNode,
}

/// Everything known about one relation after all checks.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub id: String,
    #[serde(rename = "ref")]
    pub dlmf_ref: String,
    pub translated: bool,
    pub error: Option<String>,
    pub maple: Option<[String; 2]>,
    pub structural: StructuralReport,
    pub numeric: NumericReport,
    /// Whether both sides reached a round-trip fixed point; `None` when not checked.
    pub fixed_point: Option<bool>,
}

impl VerdictReport {
    pub fn verified(&self) -> bool {
        self.structural.verdict == StructuralVerdict::Equal || self.numeric.verdict == NumericVerdict::Pass
    }

    /// Structural equality must never coexist with a numeric failure.
    pub fn sound(&self) -> bool {
        !(self.structural.verdict == StructuralVerdict::Equal && self.numeric.verdict == NumericVerdict::Fail)
    }
}

/// A lexicon with its backward index and a numeric evaluator.
#[derive(Debug, Clone)]
pub struct Verifier {
    lexicon: Lexicon,
    index: BackwardIndex,
    evaluator: Evaluator,
}

/// Round-trip cycles run per relation side in [`Verifier::verify_case`].
pub const CASE_ROUND_TRIP_CYCLES: usize = 3;

impl Verifier {
    pub fn new(lexicon: Lexicon) -> Result<Self, BackwardError> {
        let index = BackwardIndex::build(&lexicon)?;
        Ok(Verifier {
            lexicon,
            index,
            evaluator: Evaluator::new(),
        })
    }

    pub fn with_evaluator(mut self, evaluator: Evaluator) -> Self {
        self.evaluator = evaluator;
        self
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn index(&self) -> &BackwardIndex {
        &self.index
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn translator(&self, target: Target) -> Translator<'_> {
        Translator::new(&self.lexicon, target)
    }

    /// Translates both sides to Maple and parses them.
    pub fn translate_case(&self, case: &RelationCase) -> Result<TranslatedCase, String> {
        let t = self.translator(Target::Maple);
        let side = |latex: &str, which: &str| -> Result<(String, CasNode), String> {
            let text = t.translate_str(latex).map_err(|e| format!("{which}: {e}"))?.output;
            let tree = parse_cas(&text, ParseOptions::default()).map_err(|e| format!("{which} `{text}`: {e}"))?;
            Ok((text, tree))
        };
        let (lhs_text, lhs) = side(&case.lhs, "lhs")?;
        let (rhs_text, rhs) = side(&case.rhs, "rhs")?;
        for tree in [&lhs, &rhs] {
            for name in free_names(tree) {
                if !case.vars.iter().any(|v| v.name == name) {
                    return Err(format!("undeclared variable `{name}`"));
                }
            }
        }
        Ok(TranslatedCase {
            lhs_text,
            rhs_text,
            lhs,
            rhs,
        })
    }

    pub fn structural(&self, case: &RelationCase) -> StructuralReport {
        match self.translate_case(case) {
            Ok(t) => self.structural_translated(case, &t),
            Err(e) => StructuralReport {
                verdict: StructuralVerdict::Inconclusive,
                note: Some(e),
            },
        }
    }

    fn structural_translated(&self, case: &RelationCase, t: &TranslatedCase) -> StructuralReport {
        let opts = CanonOptions {
            exp_rewrite: case.exp_rewrite,
        };
        let diff = canonical(&t.lhs, opts)
            .and_then(|l| canonical(&t.rhs, opts).map(|r| (l, r)))
            .and_then(|(l, r)| l.sub(&r).map(|d| (l, r, d)));
        match diff {
            Ok((_, _, d)) if d.is_zero() => StructuralReport {
                verdict: StructuralVerdict::Equal,
                note: None,
            },
            Ok((l, r, _)) if l.as_constant().is_some() && r.as_constant().is_some() => StructuralReport {
                verdict: StructuralVerdict::Unequal,
                note: Some("distinct exact constants".into()),
            },
            Ok((_, _, d)) => StructuralReport {
                verdict: StructuralVerdict::Inconclusive,
                note: Some(format!("canonical difference has {} term(s)", d.len())),
            },
            Err(e) => StructuralReport {
                verdict: StructuralVerdict::Inconclusive,
                note: Some(e.to_string()),
            },
        }
    }

    /// Translation, structural and numeric checks plus a round trip of each side.
    pub fn verify_case(&self, case: &RelationCase, cfg: &NumericConfig) -> VerdictReport {
        let mut report = VerdictReport {
            id: case.id.clone(),
            dlmf_ref: case.dlmf_ref.clone(),
            translated: false,
            error: None,
            maple: None,
            structural: StructuralReport {
                verdict: StructuralVerdict::Inconclusive,
                note: None,
            },
            numeric: NumericReport::skipped("not translated"),
            fixed_point: None,
        };
        let t = match self.translate_case(case) {
            Ok(t) => t,
            Err(e) => {
                report.error = Some(e.clone());
                report.structural.note = Some(e);
                return report;
            }
        };
        report.translated = true;
        report.maple = Some([t.lhs_text.clone(), t.rhs_text.clone()]);
        report.structural = self.structural_translated(case, &t);
        report.numeric = self.numeric_translated(case, &t, cfg);
        if !case.no_fixed_point {
            let fixed = [&case.lhs, &case.rhs].iter().all(|side| {
                self.round_trip(side, System::Latex, CASE_ROUND_TRIP_CYCLES)
                    .fixed_point_found
            });
            report.fixed_point = Some(fixed);
        }
        report
    }
}

/// Free names of a tree, excluding reserved constants.
pub fn free_names(node: &CasNode) -> Vec<String> {
    let mut out = Vec::new();
    node.walk(&mut |n| {
        if let CasNode::Name(s) = n {
            if !CONSTANTS.contains(&s.as_str()) && !out.contains(s) {
                out.push(s.clone());
            }
        }
    });
    out
}
