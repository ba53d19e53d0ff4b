use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cas::{parse_cas, CasNode, ParseOptions};
use crate::eval::Exclusion;

/// Half-length of segments standing in for rays along branch cuts.
const RAY: f64 = 1e6;

/// A variable of a relation with its sampling box. Names use Maple spelling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarSpec {
    pub name: String,
    pub re_min: f64,
    pub re_max: f64,
    #[serde(default)]
    pub im_min: f64,
    #[serde(default)]
    pub im_max: f64,
    /// Sample integers from `[re_min, re_max]` instead of complex values.
    #[serde(default)]
    pub integer: bool,
}

impl VarSpec {
    /// Square box `[-r, r] x [-r, r]`.
    pub fn complex(name: &str, r: f64) -> Self {
        VarSpec {
            name: name.to_string(),
            re_min: -r,
            re_max: r,
            im_min: -r,
            im_max: r,
            integer: false,
        }
    }

    pub fn real(name: &str, lo: f64, hi: f64) -> Self {
        VarSpec {
            name: name.to_string(),
            re_min: lo,
            re_max: hi,
            im_min: 0.0,
            im_max: 0.0,
            integer: false,
        }
    }

    pub fn integer(name: &str, lo: i64, hi: i64) -> Self {
        VarSpec {
            integer: true,
            ..VarSpec::real(name, lo as f64, hi as f64)
        }
    }
}

/// One relation `lhs = rhs` in semantic LaTeX.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationCase {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub vars: Vec<VarSpec>,
    /// Predicates `ne(expr,value)` and `off_cut(fn,var)`.
    #[serde(default)]
    pub exclude: Vec<String>,
    #[serde(rename = "ref", default)]
    pub dlmf_ref: String,
    #[serde(default)]
    pub exp_rewrite: bool,
    /// The round trip is known not to terminate.
    #[serde(default)]
    pub no_fixed_point: bool,
}

impl RelationCase {
    pub fn new(id: &str, lhs: &str, rhs: &str) -> Self {
        RelationCase {
            id: id.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            vars: Vec::new(),
            exclude: Vec::new(),
            dlmf_ref: String::new(),
            exp_rewrite: false,
            no_fixed_point: false,
        }
    }

    pub fn var(mut self, v: VarSpec) -> Self {
        self.vars.push(v);
        self
    }

    pub fn excluding(mut self, predicate: &str) -> Self {
        self.exclude.push(predicate.to_string());
        self
    }

    pub fn constraints(&self) -> Result<Vec<Constraint>, String> {
        self.exclude.iter().map(|s| Constraint::parse(s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// Reject points where `expr` is within the exclusion radius of `value`.
    Ne { expr: CasNode, value: CasNode },
    /// Keep `var` away from the branch cuts of `function`.
    OffCut { function: String, var: String },
}

impl Constraint {
    pub fn parse(s: &str) -> Result<Constraint, String> {
        let s = s.trim();
        let (head, rest) = s.split_once('(').ok_or_else(|| format!("malformed predicate `{s}`"))?;
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("malformed predicate `{s}`"))?;
        let (a, b) = split_top_comma(body).ok_or_else(|| format!("`{s}` needs two arguments"))?;
        match head.trim() {
            "ne" => {
                let p = |t: &str| parse_cas(t.trim(), ParseOptions::default()).map_err(|e| format!("`{t}`: {e}"));
                Ok(Constraint::Ne {
                    expr: p(a)?,
                    value: p(b)?,
                })
            }
            "off_cut" => {
                let function = a.trim().to_string();
                cut_segments(&function).ok_or_else(|| format!("no known cuts for `{function}`"))?;
                Ok(Constraint::OffCut {
                    function,
                    var: b.trim().to_string(),
                })
            }
            other => Err(format!("unknown predicate `{other}`")),
        }
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Branch cuts of `function` in the union of the supported conventions.
pub fn cut_segments(function: &str) -> Option<Vec<Exclusion>> {
    let c = Complex64::new;
    let seg = |a: Complex64, b: Complex64| Exclusion::Segment(a, b);
    Some(match function {
        "ln" | "sqrt" | "power" => vec![seg(c(-RAY, 0.0), c(0.0, 0.0))],
        "arcsin" | "arccos" => vec![seg(c(-RAY, 0.0), c(-1.0, 0.0)), seg(c(1.0, 0.0), c(RAY, 0.0))],
        "arctan" => vec![seg(c(0.0, 1.0), c(0.0, RAY)), seg(c(0.0, -RAY), c(0.0, -1.0))],
        "arccot" => vec![seg(c(0.0, -RAY), c(0.0, RAY))],
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates() {
        assert!(matches!(Constraint::parse("ne(z, 0)"), Ok(Constraint::Ne { .. })));
        assert_eq!(
            Constraint::parse("off_cut(arccot,z)"),
            Ok(Constraint::OffCut {
                function: "arccot".into(),
                var: "z".into()
            })
        );
        assert!(Constraint::parse("off_cut(sin,z)").is_err());
        assert!(Constraint::parse("gt(z,0)").is_err());
        assert!(Constraint::parse("ne(z)").is_err());
    }

    #[test]
    fn json_shape() {
        let line = r#"{"id":"a","lhs":"x","rhs":"x","vars":[{"name":"x","re_min":-1,"re_max":1}],"exclude":[],"ref":"4.1.1"}"#;
        let c: RelationCase = serde_json::from_str(line).unwrap();
        assert_eq!(c.vars[0].im_max, 0.0);
        assert_eq!(c.dlmf_ref, "4.1.1");
        assert!(serde_json::from_str::<RelationCase>(r#"{"id":"a","lhs":"x","rhs":"x","bogus":1}"#).is_err());
    }
}
