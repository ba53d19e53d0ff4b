use super::node::{gcd, CasNode};
use super::parser::product;
use super::render::float_text;

/// Display rewrite: negative powers become `DIVIDE`, numeric factors merge into one
/// leading coefficient, negative terms move their sign into the sum factor and short
/// floats become `MYFLOAT`. Applying it twice changes nothing.
pub fn cosmetic(node: &CasNode) -> CasNode {
    match node {
        CasNode::Sum(terms) => CasNode::Sum(
            terms
                .iter()
                .map(|(t, f)| flip_sign(cosmetic(t), *f))
                .collect(),
        ),
        CasNode::Prod(factors) => prod(factors),
        CasNode::Power(b, e) => match negated_exponent(e) {
            Some(k) => reciprocal(b, k),
            None => CasNode::power(cosmetic(b), cosmetic(e)),
        },
        CasNode::Function { name, args } => CasNode::Function {
            name: name.clone(),
            args: args.iter().map(cosmetic).collect(),
        },
        CasNode::ExpSeq(items) => CasNode::ExpSeq(items.iter().map(cosmetic).collect()),
        CasNode::Complex { re, im } => CasNode::Complex {
            re: re.as_ref().map(|r| Box::new(cosmetic(r))),
            im: Box::new(cosmetic(im)),
        },
        CasNode::Float { mantissa, exponent } if exponent.abs() <= 6 => {
            CasNode::MyFloat(float_text(*mantissa, *exponent))
        }
        CasNode::Divide(a, b) => CasNode::Divide(Box::new(cosmetic(a)), Box::new(cosmetic(b))),
        other => other.clone(),
    }
}

/// Exponent `-k` of a negative power, as `k`.
fn negated_exponent(e: &CasNode) -> Option<CasNode> {
    match e {
        CasNode::IntNeg(_) | CasNode::Rational { .. } if e.is_negative_literal() => e.negate_literal(),
        _ => None,
    }
}

fn raised(b: &CasNode, k: CasNode) -> CasNode {
    if k == CasNode::IntPos(1) {
        cosmetic(b)
    } else {
        CasNode::power(cosmetic(b), k)
    }
}

fn reciprocal(b: &CasNode, k: CasNode) -> CasNode {
    if let (CasNode::IntPos(n), CasNode::IntPos(1)) = (b, &k) {
        if let Some(r) = CasNode::rational(1, *n) {
            return r;
        }
    }
    CasNode::Divide(Box::new(CasNode::IntPos(1)), Box::new(raised(b, k)))
}

/// Exact rational coefficient.
#[derive(Clone, Copy)]
struct Coeff {
    num: i128,
    den: i128,
}

impl Coeff {
    fn mul(self, num: i128, den: i128) -> Option<Coeff> {
        let n = self.num.checked_mul(num)?;
        let d = self.den.checked_mul(den)?;
        let g = gcd(n.unsigned_abs() as u64, d.unsigned_abs() as u64).max(1) as i128;
        let (n, d) = (n / g, d / g);
        if i64::try_from(n).is_err() || i64::try_from(d).is_err() {
            return None;
        }
        Some(if d < 0 { Coeff { num: -n, den: -d } } else { Coeff { num: n, den: d } })
    }
}

fn prod(factors: &[CasNode]) -> CasNode {
    let mut coeff = Coeff { num: 1, den: 1 };
    let mut num = Vec::new();
    let mut den = Vec::new();
    for f in factors {
        let merged = match f {
            CasNode::IntPos(v) | CasNode::IntNeg(v) => coeff.mul(*v as i128, 1),
            CasNode::Rational { num: n, den: d } => coeff.mul(*n as i128, *d as i128),
            CasNode::Power(b, e) if **e == CasNode::IntNeg(-1) => match **b {
                CasNode::IntPos(n) if n > 0 => coeff.mul(1, n as i128),
                _ => None,
            },
            _ => None,
        };
        if let Some(c) = merged {
            coeff = c;
            continue;
        }
        match f {
            CasNode::Power(b, e) if negated_exponent(e).is_some() => {
                den.push(raised(b, negated_exponent(e).expect("checked")));
            }
            CasNode::Divide(a, b) => {
                num.push(cosmetic(a));
                den.push(cosmetic(b));
            }
            other => num.push(cosmetic(other)),
        }
    }
    num.retain(|n| *n != CasNode::IntPos(1));
    let (cn, cd) = (coeff.num as i64, coeff.den as i64);
    if den.is_empty() {
        let lead = CasNode::rational(cn, cd).expect("nonzero denominator");
        if lead != CasNode::IntPos(1) || num.is_empty() {
            num.insert(0, lead);
        }
        return product(num);
    }
    den.retain(|d| *d != CasNode::IntPos(1));
    if cd != 1 {
        den.insert(0, CasNode::IntPos(cd));
    }
    if den.is_empty() {
        num.insert(0, CasNode::int(cn));
        return cosmetic(&product(num));
    }
    if cn != 1 || num.is_empty() {
        num.insert(0, CasNode::int(cn));
    }
    CasNode::Divide(Box::new(cosmetic(&product(num))), Box::new(cosmetic(&product(den))))
}

/// Moves a leading negative literal of a term into the sum factor.
fn flip_sign(t: CasNode, f: i64) -> (CasNode, i64) {
    match t {
        CasNode::IntNeg(_) | CasNode::Rational { .. } | CasNode::MyFloat(_) if t.is_negative_literal() => {
            (t.negate_literal().expect("literal"), -f)
        }
        CasNode::Prod(mut fs) if fs.first().is_some_and(CasNode::is_negative_literal) => {
            let lead = fs[0].negate_literal().expect("literal");
            if lead == CasNode::IntPos(1) {
                fs.remove(0);
            } else {
                fs[0] = lead;
            }
            (product(fs), -f)
        }
        CasNode::Divide(a, b) if a.is_negative_literal() || matches!(&*a, CasNode::Prod(fs) if fs.first().is_some_and(CasNode::is_negative_literal)) => {
            let (a, f) = flip_sign(*a, f);
            (CasNode::Divide(Box::new(a), b), f)
        }
        t => (t, f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{parse_cas, render_cas, ParseOptions};
    use crate::target::Target;

    fn show(s: &str) -> String {
        let n = parse_cas(s, ParseOptions::default()).unwrap();
        render_cas(&cosmetic(&n), Target::Maple).unwrap()
    }

    #[test]
    fn numeric_factors_merge() {
        assert_eq!(show("cos(a*Theta)/2"), "1/2*cos(a*Theta)");
        assert_eq!(show("2*x*3"), "6*x");
        assert_eq!(show("(1/2)*2*x"), "x");
        assert_eq!(show("x/y"), "(x)/(y)");
        assert_eq!(show("3*x/(2*y^2)"), "(3*x)/(2*y^2)");
        assert_eq!(show("x^(-1/2)"), "(1)/(x^(1/2))");
    }

    #[test]
    fn negative_terms_subtract() {
        assert_eq!(show("a+(-1)*b"), "a-b");
        assert_eq!(show("a-3*b"), "a-3*b");
        assert_eq!(show("-x+y"), "-x+y");
    }

    #[test]
    fn floats() {
        assert_eq!(cosmetic(&parse_cas("1.25", ParseOptions::default()).unwrap()), CasNode::MyFloat("1.25".into()));
        assert!(matches!(cosmetic(&parse_cas("1.0e9", ParseOptions::default()).unwrap()), CasNode::Float { .. }));
    }

    #[test]
    fn idempotent_on_examples() {
        for s in ["x/y", "-x*y/3", "a-b/c", "2^(-1)*x", "sin(x)^(-2)", "1.5*x-2.25"] {
            let once = cosmetic(&parse_cas(s, ParseOptions::default()).unwrap());
            assert_eq!(cosmetic(&once), once, "{s}");
        }
    }
}
