use thiserror::Error;

use super::node::CasNode;
use crate::target::Target;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("`{name}` has no {target} rendering")]
    Unsupported { name: String, target: Target },
}

/// Renders a tree in target syntax with minimal parentheses. For Maple, parsing the
/// output yields the same tree for every tree the parser produces.
pub fn render_cas(node: &CasNode, target: Target) -> Result<String, RenderError> {
    let r = Renderer { target };
    r.node(node)
}

struct Renderer {
    target: Target,
}

impl Renderer {
    fn node(&self, n: &CasNode) -> Result<String, RenderError> {
        Ok(match n {
            CasNode::Sum(terms) => {
                let mut out = String::new();
                for (i, (t, f)) in terms.iter().enumerate() {
                    let text = self.node(t)?;
                    let wrap = matches!(t, CasNode::Sum(_))
                        || has_real_and_imag(t)
                        || ((i > 0 || *f != 1) && text.starts_with('-'));
                    let text = paren_if(text, wrap);
                    match *f {
                        1 if i == 0 => out.push_str(&text),
                        1 => {
                            out.push('+');
                            out.push_str(&text);
                        }
                        -1 => {
                            out.push('-');
                            out.push_str(&text);
                        }
                        k => {
                            if i > 0 || k < 0 {
                                out.push(if k < 0 { '-' } else { '+' });
                            }
                            out.push_str(&format!("{}*{text}", k.unsigned_abs()));
                        }
                    }
                }
                out
            }
            CasNode::Prod(factors) => {
                let mut parts = Vec::with_capacity(factors.len());
                let mut start = 0;
                let mut sign = "";
                if factors.len() > 1
                    && factors[0] == CasNode::IntNeg(-1)
                    && !is_numeric(&factors[1])
                {
                    sign = "-";
                    start = 1;
                }
                for (i, f) in factors.iter().enumerate().skip(start) {
                    let text = self.node(f)?;
                    let lead = i == start && sign.is_empty();
                    let wrap = matches!(f, CasNode::Sum(_) | CasNode::Divide(..) | CasNode::Complex { .. })
                        || (!lead && (text.starts_with('-') || matches!(f, CasNode::Rational { .. })));
                    parts.push(paren_if(text, wrap));
                }
                format!("{sign}{}", parts.join("*"))
            }
            CasNode::Power(b, e) => {
                let bt = self.node(b)?;
                let base_atomic = match &**b {
                    CasNode::Name(_) | CasNode::IntPos(_) | CasNode::ExpSeq(_) => true,
                    CasNode::Function { name, .. } => name != "$",
                    CasNode::Float { mantissa, .. } => *mantissa >= 0,
                    CasNode::MyFloat(s) => !s.starts_with('-'),
                    _ => false,
                };
                let et = self.node(e)?;
                let exp_atomic = match &**e {
                    CasNode::Name(_) | CasNode::IntPos(_) => true,
                    CasNode::Function { name, .. } => name != "$",
                    _ => false,
                };
                format!("{}^{}", paren_if(bt, !base_atomic), paren_if(et, !exp_atomic))
            }
            CasNode::Function { name, args } if name == "$" && args.len() == 2 => {
                format!("{}${}", self.node(&args[0])?, self.node(&args[1])?)
            }
            CasNode::Function { name, args } => {
                let args = args.iter().map(|a| self.node(a)).collect::<Result<Vec<_>, _>>()?;
                match self.target {
                    Target::Maple => format!("{name}({})", args.join(",")),
                    Target::Mathematica => {
                        let w = mathematica_name(name).ok_or_else(|| RenderError::Unsupported {
                            name: name.clone(),
                            target: self.target,
                        })?;
                        format!("{w}[{}]", args.join(","))
                    }
                }
            }
            CasNode::ExpSeq(items) => {
                let items = items.iter().map(|a| self.node(a)).collect::<Result<Vec<_>, _>>()?;
                match self.target {
                    Target::Maple => format!("[{}]", items.join(",")),
                    Target::Mathematica => format!("{{{}}}", items.join(",")),
                }
            }
            CasNode::IntPos(v) | CasNode::IntNeg(v) => v.to_string(),
            CasNode::Rational { num, den } => format!("{num}/{den}"),
            CasNode::Float { mantissa, exponent } => match self.target {
                Target::Maple => float_text(*mantissa, *exponent),
                Target::Mathematica if (-6..=0).contains(exponent) => float_text(*mantissa, *exponent),
                Target::Mathematica => format!("{mantissa}*^{exponent}"),
            },
            CasNode::MyFloat(s) => s.clone(),
            CasNode::Complex { re, im } => {
                let unit = "I";
                match re {
                    None => format!("{}*{unit}", self.node(im)?),
                    Some(re) => {
                        let re_text = self.node(re)?;
                        let (sign, mag) = match im.negate_literal() {
                            Some(neg) if im.is_negative_literal() => ("-", neg),
                            _ => ("+", (**im).clone()),
                        };
                        let mag_text = if mag == CasNode::IntPos(1) {
                            unit.to_string()
                        } else {
                            format!("{}*{unit}", self.node(&mag)?)
                        };
                        format!("{re_text}{sign}{mag_text}")
                    }
                }
            }
            CasNode::Name(s) => match self.target {
                Target::Maple => s.clone(),
                Target::Mathematica => match s.as_str() {
                    "infinity" => "Infinity".into(),
                    "pi" => "Pi".into(),
                    _ => s.clone(),
                },
            },
            CasNode::Divide(a, b) => format!("({})/({})", self.node(a)?, self.node(b)?),
        })
    }
}

fn is_numeric(n: &CasNode) -> bool {
    n.is_real_literal() || matches!(n, CasNode::Complex { .. } | CasNode::MyFloat(_))
}

fn has_real_and_imag(n: &CasNode) -> bool {
    matches!(n, CasNode::Complex { re: Some(_), .. })
}

fn paren_if(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

/// `(31, -1)` → `3.1`, `(5, -3)` → `0.005`, `(31, 0)` → `31.`, `(31, 2)` → `31e2`.
pub(crate) fn float_text(mantissa: i64, exponent: i32) -> String {
    let sign = if mantissa < 0 { "-" } else { "" };
    let digits = mantissa.unsigned_abs().to_string();
    if exponent > 0 {
        return format!("{sign}{digits}e{exponent}");
    }
    let frac = exponent.unsigned_abs() as usize;
    if frac == 0 {
        return format!("{sign}{digits}.");
    }
    let padded = if digits.len() <= frac {
        format!("{}{digits}", "0".repeat(frac + 1 - digits.len()))
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - frac);
    format!("{sign}{int_part}.{frac_part}")
}

fn mathematica_name(name: &str) -> Option<&'static str> {
    Some(match name {
        "sin" => "Sin",
        "cos" => "Cos",
        "tan" => "Tan",
        "cot" => "Cot",
        "sec" => "Sec",
        "csc" => "Csc",
        "sinh" => "Sinh",
        "cosh" => "Cosh",
        "tanh" => "Tanh",
        "coth" => "Coth",
        "arcsin" => "ArcSin",
        "arccos" => "ArcCos",
        "arctan" => "ArcTan",
        "arccot" => "ArcCot",
        "exp" => "Exp",
        "ln" => "Log",
        "abs" => "Abs",
        "Re" => "Re",
        "Im" => "Im",
        "factorial" => "Factorial",
        "doublefactorial" => "Factorial2",
        "binomial" => "Binomial",
        "JacobiP" => "JacobiP",
        "LegendreP" => "LegendreP",
        "BesselK" => "BesselK",
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{parse_cas, ParseOptions};

    fn rt(s: &str) -> String {
        render_cas(&parse_cas(s, ParseOptions::default()).unwrap(), Target::Maple).unwrap()
    }

    #[test]
    fn renders_minimal_parentheses() {
        assert_eq!(rt("x^2+x"), "x^2+x");
        assert_eq!(rt("x-y"), "x-y");
        assert_eq!(rt("(x+y)/z"), "(x+y)*z^(-1)");
        assert_eq!(rt("a-(b+c)"), "a-(b+c)");
        assert_eq!(rt("-x"), "-x");
        assert_eq!(rt("a*(-3)"), "a*(-3)");
        assert_eq!(rt("2*(1/2)"), "2*(1/2)");
        assert_eq!(rt("(a^b)^c"), "(a^b)^c");
        assert_eq!(rt("a^(b^c)"), "a^(b^c)");
        assert_eq!(rt("sqrt(x)"), "x^(1/2)");
        assert_eq!(rt("3.1+0.005"), "3.1+0.005");
    }

    #[test]
    fn complex_rendering() {
        let c = CasNode::Complex {
            re: Some(Box::new(CasNode::IntPos(1))),
            im: Box::new(CasNode::IntNeg(-1)),
        };
        assert_eq!(render_cas(&c, Target::Maple).unwrap(), "1-I");
        assert_eq!(rt("1+2*I"), "1+2*I");
        assert_eq!(rt("-2*I"), "-2*I");
        assert_eq!(rt("x*(1+I)"), "x*(1+I)");
    }

    #[test]
    fn divide_display() {
        let d = CasNode::Divide(Box::new(CasNode::IntPos(1)), Box::new(CasNode::IntPos(2)));
        assert_eq!(render_cas(&d, Target::Maple).unwrap(), "(1)/(2)");
    }

    #[test]
    fn mathematica() {
        let n = parse_cas("sin(x)^2+ln(y)", ParseOptions::default()).unwrap();
        assert_eq!(render_cas(&n, Target::Mathematica).unwrap(), "Sin[x]^2+Log[y]");
        let bad = parse_cas("foo(x)", ParseOptions::default()).unwrap();
        assert!(render_cas(&bad, Target::Mathematica).is_err());
    }
}
