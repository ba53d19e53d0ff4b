//! Complex double-precision evaluation of inert trees.

mod functions;
mod orthogonal;
mod sampling;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cas::CasNode;

pub use orthogonal::{jacobi_p, legendre_p, legendre_p_assoc};
pub use sampling::{sample_points, DomainSpec, Exclusion, SampleError, EXCLUSION_RADIUS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("`{0}` is not bound")]
    Unbound(String),
    #[error("no numeric implementation of `{name}` with {arity} argument(s)")]
    UnknownFunction { name: String, arity: usize },
    #[error("`{function}`: {message}")]
    Domain { function: String, message: String },
    #[error("pole: {0}")]
    Pole(String),
    #[error("{0} cannot be evaluated")]
    Unsupported(String),
}

impl EvalError {
    pub(crate) fn domain(function: &str, message: impl Into<String>) -> Self {
        EvalError::Domain {
            function: function.to_string(),
            message: message.into(),
        }
    }
}

/// Branch-cut family for functions whose conventions differ between sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `arccot(z) = arctan(1/z)`, cut on `[-i, i]`.
    Dlmf,
    /// `arccot(z) = pi/2 - arctan(z)`, cuts on `(-i inf, -i]` and `[i, i inf)`.
    #[default]
    Maple,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Dlmf => "dlmf",
            Convention::Maple => "maple",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dlmf" | "mathematica" => Ok(Convention::Dlmf),
            "maple" => Ok(Convention::Maple),
            other => Err(format!("unknown convention `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Env {
    pub bindings: BTreeMap<String, Complex64>,
    pub convention: Convention,
    /// Reporting only; arithmetic is always double precision.
    pub precision_digits: u32,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            bindings: BTreeMap::new(),
            convention: Convention::default(),
            precision_digits: 10,
        }
    }
}

impl Env {
    pub fn new(convention: Convention) -> Self {
        Env {
            convention,
            ..Env::default()
        }
    }

    pub fn bind(mut self, name: &str, value: Complex64) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }
}

pub type FnBody = Arc<dyn Fn(&[Complex64], &Env) -> Result<Complex64, EvalError> + Send + Sync>;

/// A numerically implemented CAS function.
#[derive(Clone)]
pub struct FnImpl {
    pub name: String,
    pub arity: usize,
    /// Where the branch cuts are and which side the cut itself takes.
    pub domain_note: String,
    pub imp: FnBody,
}

impl fmt::Debug for FnImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnImpl")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("domain_note", &self.domain_note)
            .finish()
    }
}

/// Names that evaluate without a binding.
pub const CONSTANTS: [&str; 4] = ["Pi", "pi", "I", "infinity"];

#[derive(Debug, Clone)]
pub struct Evaluator {
    fns: HashMap<(String, usize), FnImpl>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    /// Evaluator with every built-in function registered.
    pub fn new() -> Self {
        let mut e = Evaluator { fns: HashMap::new() };
        for f in functions::builtins() {
            e.register(f);
        }
        e
    }

    pub fn register(&mut self, f: FnImpl) {
        self.fns.insert((f.name.clone(), f.arity), f);
    }

    pub fn function(&self, name: &str, arity: usize) -> Option<&FnImpl> {
        self.fns.get(&(name.to_string(), arity))
    }

    pub fn functions(&self) -> Vec<&FnImpl> {
        let mut v: Vec<_> = self.fns.values().collect();
        v.sort_by(|a, b| (&a.name, a.arity).cmp(&(&b.name, b.arity)));
        v
    }

    /// Every function call in `node` lacking an implementation.
    pub fn missing_functions(&self, node: &CasNode) -> Vec<String> {
        let mut out = Vec::new();
        node.walk(&mut |n| {
            if let CasNode::Function { name, args } = n {
                if self.function(name, args.len()).is_none() && !out.contains(name) {
                    out.push(name.clone());
                }
            }
        });
        out
    }

    pub fn eval(&self, node: &CasNode, env: &Env) -> Result<Complex64, EvalError> {
        let c = |re: f64| Complex64::new(re, 0.0);
        Ok(match node {
            CasNode::Sum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, f) in terms {
                    acc += self.eval(t, env)? * (*f as f64);
                }
                acc
            }
            CasNode::Prod(factors) => {
                let mut acc = c(1.0);
                for f in factors {
                    acc *= self.eval(f, env)?;
                }
                acc
            }
            CasNode::Power(b, e) => power(self.eval(b, env)?, self.eval(e, env)?)?,
            CasNode::Divide(a, b) => {
                let d = self.eval(b, env)?;
                if d == c(0.0) {
                    return Err(EvalError::Pole("division by zero".into()));
                }
                self.eval(a, env)? / d
            }
            CasNode::Function { name, args } => {
                let Some(f) = self.function(name, args.len()) else {
                    return Err(EvalError::UnknownFunction {
                        name: name.clone(),
                        arity: args.len(),
                    });
                };
                let vals = args.iter().map(|a| self.eval(a, env)).collect::<Result<Vec<_>, _>>()?;
                (f.imp)(&vals, env)?
            }
            CasNode::ExpSeq(_) => return Err(EvalError::Unsupported("a list".into())),
            CasNode::IntPos(v) | CasNode::IntNeg(v) => c(*v as f64),
            CasNode::Rational { num, den } => c(*num as f64 / *den as f64),
            CasNode::Float { mantissa, exponent } => c(*mantissa as f64 * 10f64.powi(*exponent)),
            CasNode::MyFloat(s) => c(s
                .parse::<f64>()
                .map_err(|_| EvalError::Unsupported(format!("float `{s}`")))?),
            CasNode::Complex { re, im } => {
                let re = match re {
                    Some(r) => self.eval(r, env)?,
                    None => c(0.0),
                };
                re + self.eval(im, env)? * Complex64::i()
            }
            CasNode::Name(n) => match n.as_str() {
                "Pi" | "pi" => c(std::f64::consts::PI),
                "I" => Complex64::i(),
                "infinity" => return Err(EvalError::Unsupported("infinity".into())),
                _ => *env.bindings.get(n).ok_or_else(|| EvalError::Unbound(n.clone()))?,
            },
        })
    }
}

/// Integer exponents by repeated multiplication, others by `exp(e ln b)`.
pub fn power(b: Complex64, e: Complex64) -> Result<Complex64, EvalError> {
    let zero = Complex64::new(0.0, 0.0);
    if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= i32::MAX as f64 {
        let k = e.re as i32;
        if b == zero && k < 0 {
            return Err(EvalError::Pole("zero to a negative power".into()));
        }
        return Ok(b.powi(k));
    }
    if b == zero {
        return if e.re > 0.0 {
            Ok(zero)
        } else {
            Err(EvalError::Pole("zero to a power with nonpositive real part".into()))
        };
    }
    Ok((e * b.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{parse_cas, ParseOptions};

    fn ev(s: &str, env: &Env) -> Result<Complex64, EvalError> {
        Evaluator::new().eval(&parse_cas(s, ParseOptions::default()).unwrap(), env)
    }

    #[test]
    fn arithmetic_and_constants() {
        let env = Env::default().bind("x", Complex64::new(2.0, 0.0));
        assert_eq!(ev("x^3-1/2", &env).unwrap(), Complex64::new(7.5, 0.0));
        assert!((ev("exp(I*Pi)", &env).unwrap() + 1.0).norm() < 1e-15);
        assert_eq!(ev("(1+2*I)*I", &env).unwrap(), Complex64::new(-2.0, 1.0));
        assert_eq!(ev("2.5e1", &env).unwrap(), Complex64::new(25.0, 0.0));
    }

    #[test]
    fn errors() {
        let env = Env::default();
        assert_eq!(ev("y", &env), Err(EvalError::Unbound("y".into())));
        assert!(matches!(ev("0^(-1)", &env), Err(EvalError::Pole(_))));
        assert!(matches!(ev("foo(1)", &env), Err(EvalError::UnknownFunction { .. })));
        assert!(matches!(ev("(1/2)!", &env), Err(EvalError::Domain { .. })));
        assert!(matches!(ev("infinity", &env), Err(EvalError::Unsupported(_))));
    }

    #[test]
    fn gudermannian_at_zero() {
        let env = Env::default().bind("x", Complex64::new(0.0, 0.0));
        assert_eq!(ev("arctan(sinh(x))", &env).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn divide_and_myfloat() {
        let d = CasNode::Divide(Box::new(CasNode::MyFloat("1.5".into())), Box::new(CasNode::IntPos(3)));
        assert_eq!(Evaluator::new().eval(&d, &Env::default()).unwrap(), Complex64::new(0.5, 0.0));
        let z = CasNode::Divide(Box::new(CasNode::IntPos(1)), Box::new(CasNode::IntPos(0)));
        assert!(matches!(Evaluator::new().eval(&z, &Env::default()), Err(EvalError::Pole(_))));
    }

    #[test]
    fn plugin_point() {
        let mut e = Evaluator::new();
        assert!(e.function("BesselK", 2).is_none());
        e.register(FnImpl {
            name: "twice".into(),
            arity: 1,
            domain_note: "entire".into(),
            imp: Arc::new(|a, _| Ok(a[0] * 2.0)),
        });
        let n = parse_cas("twice(3)", ParseOptions::default()).unwrap();
        assert_eq!(e.eval(&n, &Env::default()).unwrap(), Complex64::new(6.0, 0.0));
        assert!(e.missing_functions(&parse_cas("BesselK(1,x)+twice(x)", ParseOptions::default()).unwrap()) == vec!["BesselK".to_string()]);
    }
}
