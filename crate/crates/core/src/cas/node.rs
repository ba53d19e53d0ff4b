use serde_json::{json, Value};

/// An inert CAS expression. `MyFloat` and `Divide` only occur in display trees
/// produced by [`super::cosmetic`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CasNode {
    /// Terms with integer factors; `x - y` is `[(x, 1), (y, -1)]`.
    Sum(Vec<(CasNode, i64)>),
    Prod(Vec<CasNode>),
    Power(Box<CasNode>, Box<CasNode>),
    Function { name: String, args: Vec<CasNode> },
    /// A bracketed list `[a, b]`.
    ExpSeq(Vec<CasNode>),
    IntPos(i64),
    IntNeg(i64),
    Complex {
        re: Option<Box<CasNode>>,
        im: Box<CasNode>,
    },
    /// `mantissa * 10^exponent`.
    Float { mantissa: i64, exponent: i32 },
    /// Lowest terms, positive denominator.
    Rational { num: i64, den: i64 },
    Name(String),
    MyFloat(String),
    Divide(Box<CasNode>, Box<CasNode>),
}

impl CasNode {
    pub fn int(v: i64) -> Self {
        if v < 0 {
            CasNode::IntNeg(v)
        } else {
            CasNode::IntPos(v)
        }
    }

    pub fn name(s: &str) -> Self {
        CasNode::Name(s.to_string())
    }

    pub fn call(name: &str, args: Vec<CasNode>) -> Self {
        CasNode::Function {
            name: name.to_string(),
            args,
        }
    }

    pub fn power(b: CasNode, e: CasNode) -> Self {
        CasNode::Power(Box::new(b), Box::new(e))
    }

    /// `num/den` reduced; an integer when the denominator divides the numerator.
    /// `None` when `den` is zero or the reduction overflows.
    pub fn rational(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg()?;
            d = d.checked_neg()?;
        }
        Some(if d == 1 {
            CasNode::int(n)
        } else {
            CasNode::Rational { num: n, den: d }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CasNode::Sum(_) => "SUM",
            CasNode::Prod(_) => "PROD",
            CasNode::Power(..) => "POWER",
            CasNode::Function { .. } => "FUNCTION",
            CasNode::ExpSeq(_) => "EXPSEQ",
            CasNode::IntPos(_) => "INTPOS",
            CasNode::IntNeg(_) => "INTNEG",
            CasNode::Complex { .. } => "COMPLEX",
            CasNode::Float { .. } => "FLOAT",
            CasNode::Rational { .. } => "RATIONAL",
            CasNode::Name(_) => "NAME",
            CasNode::MyFloat(_) => "MYFLOAT",
            CasNode::Divide(..) => "DIVIDE",
        }
    }

    /// Integer, rational or float literal (not complex).
    pub fn is_real_literal(&self) -> bool {
        matches!(
            self,
            CasNode::IntPos(_) | CasNode::IntNeg(_) | CasNode::Rational { .. } | CasNode::Float { .. }
        )
    }

    pub fn is_negative_literal(&self) -> bool {
        match self {
            CasNode::IntNeg(_) => true,
            CasNode::Rational { num, .. } => *num < 0,
            CasNode::Float { mantissa, .. } => *mantissa < 0,
            CasNode::MyFloat(s) => s.starts_with('-'),
            _ => false,
        }
    }

    /// Negates a numeric literal; `None` for anything else.
    pub fn negate_literal(&self) -> Option<CasNode> {
        Some(match self {
            CasNode::IntPos(v) | CasNode::IntNeg(v) => CasNode::int(v.checked_neg()?),
            CasNode::Rational { num, den } => CasNode::Rational {
                num: num.checked_neg()?,
                den: *den,
            },
            CasNode::Float { mantissa, exponent } => CasNode::Float {
                mantissa: mantissa.checked_neg()?,
                exponent: *exponent,
            },
            CasNode::Complex { re, im } => CasNode::Complex {
                re: match re {
                    Some(r) => Some(Box::new(r.negate_literal()?)),
                    None => None,
                },
                im: Box::new(im.negate_literal()?),
            },
            CasNode::MyFloat(s) => CasNode::MyFloat(match s.strip_prefix('-') {
                Some(rest) => rest.to_string(),
                None => format!("-{s}"),
            }),
            _ => return None,
        })
    }

    pub fn children(&self) -> Vec<&CasNode> {
        match self {
            CasNode::Sum(t) => t.iter().map(|(n, _)| n).collect(),
            CasNode::Prod(f) | CasNode::ExpSeq(f) => f.iter().collect(),
            CasNode::Function { args, .. } => args.iter().collect(),
            CasNode::Power(a, b) | CasNode::Divide(a, b) => vec![a, b],
            CasNode::Complex { re, im } => re.iter().map(|r| &**r).chain([&**im]).collect(),
            _ => Vec::new(),
        }
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a CasNode)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// True for trees that contain only inert node kinds.
    pub fn is_inert(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |n| {
            if matches!(n, CasNode::MyFloat(_) | CasNode::Divide(..)) {
                ok = false;
            }
        });
        ok
    }

    pub fn to_json(&self) -> Value {
        let kind = self.kind();
        match self {
            CasNode::Sum(t) => json!({
                "kind": kind,
                "terms": t.iter().map(|(n, f)| json!({"term": n.to_json(), "factor": f})).collect::<Vec<_>>(),
            }),
            CasNode::Prod(f) => json!({"kind": kind, "children": f.iter().map(CasNode::to_json).collect::<Vec<_>>()}),
            CasNode::ExpSeq(f) => json!({"kind": kind, "children": f.iter().map(CasNode::to_json).collect::<Vec<_>>()}),
            CasNode::Power(a, b) | CasNode::Divide(a, b) => {
                json!({"kind": kind, "children": [a.to_json(), b.to_json()]})
            }
            CasNode::Function { name, args } => json!({
                "kind": kind,
                "name": name,
                "args": {"kind": "EXPSEQ", "children": args.iter().map(CasNode::to_json).collect::<Vec<_>>()},
            }),
            CasNode::IntPos(v) | CasNode::IntNeg(v) => json!({"kind": kind, "value": v}),
            CasNode::Complex { re, im } => json!({
                "kind": kind,
                "re": re.as_ref().map(|r| r.to_json()),
                "im": im.to_json(),
            }),
            CasNode::Float { mantissa, exponent } => {
                json!({"kind": kind, "mantissa": mantissa, "exponent": exponent})
            }
            CasNode::Rational { num, den } => json!({"kind": kind, "num": num, "den": den}),
            CasNode::Name(s) | CasNode::MyFloat(s) => json!({"kind": kind, "text": s}),
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
