use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::case::{cut_segments, Constraint, RelationCase};
use super::{TranslatedCase, Verifier};
use crate::cas::CasNode;
use crate::eval::{sample_points, Convention, DomainSpec, Env, EXCLUSION_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericConfig {
    /// Relative tolerance: a point passes when `|lhs - rhs| < tol * max(1, |lhs|)`.
    pub tol: f64,
    pub points: usize,
    pub seed: u64,
    pub convention: Convention,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            tol: 1e-9,
            points: 20,
            seed: 0,
            convention: Convention::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericVerdict {
    Pass,
    Fail,
    Skipped,
}

/// The four usual explanations for a nonzero residual. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CauseHint {
    InvalidCombinationOfValues,
    InappropriateTranslation,
    ErrorInSource,
    ErrorInCas,
}

impl CauseHint {
    pub fn describe(self) -> &'static str {
        match self {
            CauseHint::InvalidCombinationOfValues => "the numerical test used invalid combinations of values",
            CauseHint::InappropriateTranslation => "the translation may be inappropriately defined",
            CauseHint::ErrorInSource => "the source formula may contain an error",
            CauseHint::ErrorInCas => "the computer algebra system may contain an error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResidual {
    pub values: BTreeMap<String, [f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_diff: f64,
    /// `|rhs / lhs|`, absent when `lhs` is zero.
    pub ratio: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub verdict: NumericVerdict,
    pub residuals: Vec<PointResidual>,
    pub max_residual: f64,
    pub cause_hint: Option<CauseHint>,
    pub note: Option<String>,
}

impl NumericReport {
    pub fn skipped(note: &str) -> Self {
        NumericReport {
            verdict: NumericVerdict::Skipped,
            residuals: Vec::new(),
            max_residual: 0.0,
            cause_hint: None,
            note: Some(note.to_string()),
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Verifier {
    pub fn numeric(&self, case: &RelationCase, cfg: &NumericConfig) -> NumericReport {
        match self.translate_case(case) {
            Ok(t) => self.numeric_translated(case, &t, cfg),
            Err(e) => NumericReport::skipped(&e),
        }
    }

    pub(super) fn numeric_translated(&self, case: &RelationCase, t: &TranslatedCase, cfg: &NumericConfig) -> NumericReport {
        let ev = self.evaluator();
        let mut missing = ev.missing_functions(&t.lhs);
        for m in ev.missing_functions(&t.rhs) {
            if !missing.contains(&m) {
                missing.push(m);
            }
        }
        if !missing.is_empty() {
            return NumericReport::skipped(&format!("no numeric implementation of {}", missing.join(", ")));
        }
        let constraints = match case.constraints() {
            Ok(c) => c,
            Err(e) => return NumericReport::skipped(&e),
        };
        let points = match sample_case(case, &constraints, cfg) {
            Ok(p) => p,
            Err(e) => return NumericReport::skipped(&e),
        };
        let ne: Vec<(&CasNode, &CasNode)> = constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::Ne { expr, value } => Some((expr, value)),
                _ => None,
            })
            .collect();
        let mut residuals = Vec::new();
        let mut errors = 0usize;
        let mut last_error = None;
        for env in points {
            let excluded = ne.iter().any(|(e, v)| match (ev.eval(e, &env), ev.eval(v, &env)) {
                (Ok(a), Ok(b)) => (a - b).norm() < EXCLUSION_RADIUS,
                _ => true,
            });
            if excluded {
                continue;
            }
            if residuals.len() >= cfg.points {
                break;
            }
            let (l, r) = match (ev.eval(&t.lhs, &env), ev.eval(&t.rhs, &env)) {
                (Ok(l), Ok(r)) if l.is_finite() && r.is_finite() => (l, r),
                (Err(e), _) | (_, Err(e)) => {
                    errors += 1;
                    last_error = Some(e.to_string());
                    continue;
                }
                _ => {
                    errors += 1;
                    last_error = Some("non-finite value".into());
                    continue;
                }
            };
            let abs_diff = (l - r).norm();
            residuals.push(PointResidual {
                values: env.bindings.iter().map(|(k, v)| (k.clone(), pair(*v))).collect(),
                lhs: pair(l),
                rhs: pair(r),
                abs_diff,
                ratio: (l.norm() != 0.0).then(|| (r / l).norm()),
                pass: abs_diff < cfg.tol * l.norm().max(1.0),
            });
        }
        if residuals.is_empty() {
            return NumericReport::skipped(&match last_error {
                Some(e) => format!("no point could be evaluated: {e}"),
                None => "no admissible points".into(),
            });
        }
        let max_residual = residuals.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
        let failed = residuals.iter().filter(|r| !r.pass).count();
        let note = (errors > 0).then(|| format!("{errors} point(s) could not be evaluated"));
        if failed == 0 {
            return NumericReport {
                verdict: NumericVerdict::Pass,
                residuals,
                max_residual,
                cause_hint: None,
                note,
            };
        }
        let hint = if failed == residuals.len() {
            CauseHint::InappropriateTranslation
        } else {
            CauseHint::InvalidCombinationOfValues
        };
        NumericReport {
            verdict: NumericVerdict::Fail,
            residuals,
            max_residual,
            cause_hint: Some(hint),
            note,
        }
    }
}

/// Draws candidate environments; `ne` constraints are applied by the caller.
fn sample_case(case: &RelationCase, constraints: &[Constraint], cfg: &NumericConfig) -> Result<Vec<Env>, String> {
    let pool = cfg.points * 4 + 4;
    let mut columns = Vec::new();
    for (j, v) in case.vars.iter().enumerate() {
        let seed = cfg.seed.wrapping_add((j as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let col = if v.integer {
            let (lo, hi) = (v.re_min.ceil() as i64, v.re_max.floor() as i64);
            if lo > hi {
                return Err(format!("no integer in the range of `{}`", v.name));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..pool).map(|_| Complex64::new(rng.gen_range(lo..=hi) as f64, 0.0)).collect()
        } else {
            let mut d = DomainSpec::new((v.re_min, v.re_max), (v.im_min, v.im_max));
            for c in constraints {
                if let Constraint::OffCut { function, var } = c {
                    if *var == v.name {
                        for seg in cut_segments(function).expect("validated") {
                            d = d.exclude(seg);
                        }
                    }
                }
            }
            sample_points(&d, pool, seed).map_err(|e| format!("`{}`: {e}", v.name))?
        };
        columns.push(col);
    }
    Ok((0..pool)
        .map(|i| {
            let mut env = Env::new(cfg.convention);
            env.precision_digits = (-cfg.tol.log10()).round().max(1.0) as u32;
            for (v, col) in case.vars.iter().zip(&columns) {
                env.bindings.insert(v.name.clone(), col[i]);
            }
            env
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use crate::target::Target;
    use crate::verify::VarSpec;

    fn sine_addition() -> RelationCase {
        RelationCase::new("4.21.2", "\\sin@{u+v}", "\\sin@@{u}\\cos@@{v}+\\cos@@{u}\\sin@@{v}")
            .var(VarSpec::complex("u", 2.0))
            .var(VarSpec::complex("v", 2.0))
    }

    #[test]
    fn sine_addition_passes() {
        let v = Verifier::new(Lexicon::bundled()).unwrap();
        let r = v.numeric(&sine_addition(), &NumericConfig::default());
        assert_eq!(r.verdict, NumericVerdict::Pass);
        assert_eq!(r.residuals.len(), 20);
    }

    #[test]
    fn swapped_lexicon_fails() {
        let lex = Lexicon::bundled().with_swapped_patterns("sin", "cos", Target::Maple).unwrap();
        let v = Verifier::new(lex).unwrap();
        let r = v.numeric(&sine_addition(), &NumericConfig::default());
        assert_eq!(r.verdict, NumericVerdict::Fail);
        assert!(r.max_residual > 1e-3);
        assert_eq!(r.cause_hint, Some(CauseHint::InappropriateTranslation));
    }

    #[test]
    fn skipped_without_implementation() {
        let v = Verifier::new(Lexicon::bundled()).unwrap();
        let case = RelationCase::new("k", "\\BesselK{\\nu}@{z}", "\\BesselK{-\\nu}@{z}")
            .var(VarSpec::real("nu", 0.1, 2.0))
            .var(VarSpec::complex("z", 2.0));
        let r = v.numeric(&case, &NumericConfig::default());
        assert_eq!(r.verdict, NumericVerdict::Skipped);
        assert!(r.note.unwrap().contains("BesselK"));
    }

    #[test]
    fn constraints_are_honoured() {
        let v = Verifier::new(Lexicon::bundled()).unwrap();
        let case = RelationCase::new("r", "\\frac{z}{z}", "1")
            .var(VarSpec::integer("z", -1, 1))
            .excluding("ne(z,0)");
        let r = v.numeric(&case, &NumericConfig::default());
        assert_eq!(r.verdict, NumericVerdict::Pass);
        assert!(r.residuals.iter().all(|p| p.values["z"] != [0.0, 0.0]));
    }
}
