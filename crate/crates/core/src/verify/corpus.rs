use std::path::Path;

use serde::Serialize;

use super::case::RelationCase;
use super::numeric::{NumericConfig, NumericVerdict};
use super::{StructuralVerdict, VerdictReport, Verifier, VerifyError};

/// Parses JSON lines; blank lines are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<RelationCase>, VerifyError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let case = serde_json::from_str(line).map_err(|e| VerifyError::Corpus {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(case);
    }
    Ok(out)
}

pub fn load_corpus(path: &Path) -> Result<Vec<RelationCase>, VerifyError> {
    let text = std::fs::read_to_string(path).map_err(|e| VerifyError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_corpus(&text)
}

/// Counts in the usual reporting shape: translated share of all cases, structural
/// successes among translated cases, numeric successes among the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub translated: usize,
    pub translated_pct: f64,
    pub structural_equal: usize,
    pub structural_pct: f64,
    pub structural_remainder: usize,
    pub numeric_pass: usize,
    pub numeric_pct: f64,
    pub numeric_fail: usize,
    pub numeric_skipped: usize,
    /// Cases verified by either check.
    pub verified: usize,
    /// Cases where structural equality met a numeric failure.
    pub unsound: usize,
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

impl Summary {
    pub fn from_reports(reports: &[VerdictReport]) -> Self {
        let total = reports.len();
        let translated = reports.iter().filter(|r| r.translated).count();
        let structural_equal = reports
            .iter()
            .filter(|r| r.translated && r.structural.verdict == StructuralVerdict::Equal)
            .count();
        let remainder: Vec<_> = reports
            .iter()
            .filter(|r| r.translated && r.structural.verdict != StructuralVerdict::Equal)
            .collect();
        let count = |v: NumericVerdict| remainder.iter().filter(|r| r.numeric.verdict == v).count();
        let numeric_pass = count(NumericVerdict::Pass);
        Summary {
            total,
            translated,
            translated_pct: pct(translated, total),
            structural_equal,
            structural_pct: pct(structural_equal, translated),
            structural_remainder: remainder.len(),
            numeric_pass,
            numeric_pct: pct(numeric_pass, remainder.len()),
            numeric_fail: count(NumericVerdict::Fail),
            numeric_skipped: count(NumericVerdict::Skipped),
            verified: reports.iter().filter(|r| r.verified()).count(),
            unsound: reports.iter().filter(|r| !r.sound()).count(),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "cases: {}\ntranslated: {} ({:.1}%)\nstructurally equal: {} ({:.1}% of translated)\nnumeric pass: {} ({:.1}% of {} remaining; {} fail, {} skipped)\nverified: {}/{}\n",
            self.total,
            self.translated,
            self.translated_pct,
            self.structural_equal,
            self.structural_pct,
            self.numeric_pass,
            self.numeric_pct,
            self.structural_remainder,
            self.numeric_fail,
            self.numeric_skipped,
            self.verified,
            self.total,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub reports: Vec<VerdictReport>,
    pub summary: Summary,
}

impl CorpusReport {
    /// One JSON object per case followed by `{"summary": ...}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "summary": self.summary }).to_string());
        out.push('\n');
        out
    }
}

impl Verifier {
    /// Runs every case; failures are recorded per case and never abort the run.
    /// Cases run on scoped threads and are reported in input order.
    pub fn run_corpus(&self, cases: &[RelationCase], cfg: &NumericConfig) -> CorpusReport {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        let chunk = cases.len().div_ceil(workers).max(1);
        let reports: Vec<VerdictReport> = std::thread::scope(|s| {
            let handles: Vec<_> = cases
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(|c| self.verify_case(c, cfg)).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("case worker panicked"))
                .collect()
        });
        CorpusReport {
            summary: Summary::from_reports(&reports),
            reports,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use crate::verify::VarSpec;

    #[test]
    fn empty_corpus() {
        let v = Verifier::new(Lexicon::bundled()).unwrap();
        let r = v.run_corpus(&parse_corpus("\n\n").unwrap(), &NumericConfig::default());
        assert_eq!(r.summary, Summary::default());
        assert!(r.to_jsonl().starts_with("{\"summary\""));
    }

    #[test]
    fn unknown_macro_is_isolated() {
        let v = Verifier::new(Lexicon::bundled()).unwrap();
        let cases = vec![
            RelationCase::new("bad", "\\nosuchmacro@{x}", "x").var(VarSpec::complex("x", 1.0)),
            RelationCase::new("good", "\\sin@{x}", "\\sin@{x}").var(VarSpec::complex("x", 1.0)),
        ];
        let r = v.run_corpus(&cases, &NumericConfig::default());
        assert_eq!(r.summary.total, 2);
        assert_eq!(r.summary.translated, 1);
        assert_eq!(r.summary.translated_pct, 50.0);
        assert_eq!(r.reports[0].id, "bad");
        assert!(!r.reports[0].translated);
    }

    #[test]
    fn corpus_errors_name_the_line() {
        let e = parse_corpus("{\"id\":\"a\",\"lhs\":\"x\",\"rhs\":\"x\"}\n{oops").unwrap_err();
        assert!(e.to_string().starts_with("line 2:"));
    }
}
