use super::node::CasNode;
use super::{CasError, CasErrorKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept input wrapped in unevaluation quotes `'...'`.
    pub unevaluated: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Float { mantissa: String, exponent: i32 },
    Name(String),
    Op(&'static str),
}

struct Lexed {
    tok: Tok,
    pos: usize,
}

const OPS: &[&str] = &["**", "!!", "+", "-", "*", "/", "^", "!", "(", ")", "[", "]", ",", "$"];

fn lex(input: &str, base: usize) -> Result<Vec<Lexed>, CasError> {
    let b = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let pos = base + i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &input[start..i];
            if i < b.len() && b[i] == b'.' && b.get(i + 1) != Some(&b'.') {
                i += 1;
                let fs = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let frac = &input[fs..i];
                let mut exponent = -(frac.len() as i32);
                if let Some(e) = exponent_suffix(b, &mut i, input) {
                    exponent += e;
                }
                out.push(Lexed {
                    tok: Tok::Float {
                        mantissa: format!("{int_part}{frac}"),
                        exponent,
                    },
                    pos,
                });
            } else if let Some(e) = exponent_suffix(b, &mut i, input) {
                out.push(Lexed {
                    tok: Tok::Float {
                        mantissa: int_part.to_string(),
                        exponent: e,
                    },
                    pos,
                });
            } else {
                out.push(Lexed {
                    tok: Tok::Int(int_part.to_string()),
                    pos,
                });
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Name(input[start..i].to_string()),
                pos,
            });
        } else if let Some(op) = OPS.iter().find(|op| input[i..].starts_with(**op)) {
            i += op.len();
            let op = if *op == "**" { "^" } else { op };
            out.push(Lexed { tok: Tok::Op(op), pos });
        } else {
            let ch = input[i..].chars().next().expect("in bounds");
            return Err(CasError {
                kind: CasErrorKind::UnexpectedChar(ch),
                pos,
            });
        }
    }
    Ok(out)
}

/// Parses `e[+-]digits` after a number, advancing `i` when present.
fn exponent_suffix(b: &[u8], i: &mut usize, input: &str) -> Option<i32> {
    if !matches!(b.get(*i), Some(b'e' | b'E')) {
        return None;
    }
    let mut j = *i + 1;
    if matches!(b.get(j), Some(b'+' | b'-')) {
        j += 1;
    }
    let ds = j;
    while j < b.len() && b[j].is_ascii_digit() {
        j += 1;
    }
    if ds == j {
        return None;
    }
    let e = input[*i + 1..j].parse().ok()?;
    *i = j;
    Some(e)
}

/// Parses Maple 1D syntax into an inert tree. Nothing is evaluated: `sin(Pi)` stays
/// a function call. Only the normalizations the Maple kernel applies on input are
/// performed (see the module documentation of [`CasNode`]).
pub fn parse_cas(input: &str, opts: ParseOptions) -> Result<CasNode, CasError> {
    let trimmed_start = input.len() - input.trim_start().len();
    let t = input.trim();
    let (body, base) = if t.starts_with('\'') {
        if !opts.unevaluated {
            return Err(CasError {
                kind: CasErrorKind::QuotesNotAllowed,
                pos: trimmed_start,
            });
        }
        match t.len() >= 2 && t.ends_with('\'') {
            true => (&t[1..t.len() - 1], trimmed_start + 1),
            false => {
                return Err(CasError {
                    kind: CasErrorKind::Unclosed("'".into()),
                    pos: trimmed_start,
                })
            }
        }
    } else {
        (input, 0)
    };
    let toks = lex(body, base)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: base + body.len(),
    };
    let node = p.expr()?;
    match p.peek() {
        None => Ok(node),
        Some(Tok::Op(",")) => Err(p.error(CasErrorKind::BareComma)),
        Some(Tok::Op(op @ (")" | "]"))) => Err(p.error(CasErrorKind::UnexpectedToken((*op).into()))),
        Some(t) => {
            let text = describe(t);
            Err(p.error(CasErrorKind::UnexpectedToken(text)))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) | Tok::Name(s) => s.clone(),
        Tok::Float { mantissa, exponent } => format!("{mantissa}e{exponent}"),
        Tok::Op(o) => (*o).to_string(),
    }
}

struct Parser {
    toks: Vec<Lexed>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|l| &l.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |l| l.pos)
    }

    fn error(&self, kind: CasErrorKind) -> CasError {
        CasError {
            kind,
            pos: self.pos(),
        }
    }

    fn eat(&mut self, op: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Op(o)) if *o == op) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    /// Error for a missing operand after operator `op` at `pos`.
    fn operand_error(&self, op: &str) -> CasError {
        match self.peek() {
            None => CasError {
                kind: CasErrorKind::TrailingOperator(op.into()),
                pos: self.end,
            },
            Some(t) => self.error(CasErrorKind::UnexpectedToken(describe(t))),
        }
    }

    fn expr(&mut self) -> Result<CasNode, CasError> {
        let first = self.term()?;
        if !matches!(self.peek(), Some(Tok::Op("+" | "-"))) {
            return Ok(first);
        }
        let mut terms = Vec::new();
        push_term(&mut terms, first, 1);
        loop {
            let sign = if self.eat("+") {
                1
            } else if self.eat("-") {
                -1
            } else {
                break;
            };
            let op = if sign == 1 { "+" } else { "-" };
            if self.starts_operand() {
                let t = self.term()?;
                push_term(&mut terms, t, sign);
            } else {
                return Err(self.operand_error(op));
            }
        }
        Ok(fold_complex_sum(terms))
    }

    fn starts_operand(&self) -> bool {
        match self.peek() {
            None => false,
            Some(Tok::Op(o)) => matches!(*o, "(" | "[" | "-" | "+"),
            Some(_) => true,
        }
    }

    fn term(&mut self) -> Result<CasNode, CasError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                if !self.starts_operand() {
                    return Err(self.operand_error("*"));
                }
                let rhs = self.unary()?;
                acc = product(vec![acc, rhs]);
            } else if self.eat("/") {
                if !self.starts_operand() {
                    return Err(self.operand_error("/"));
                }
                let rhs = self.unary()?;
                acc = divide(acc, rhs);
            } else {
                break;
            }
        }
        Ok(fold_complex_prod(acc))
    }

    fn unary(&mut self) -> Result<CasNode, CasError> {
        if self.eat("-") {
            if !self.starts_operand() {
                return Err(self.operand_error("-"));
            }
            let inner = self.unary()?;
            return Ok(negate(inner));
        }
        if self.eat("+") {
            if !self.starts_operand() {
                return Err(self.operand_error("+"));
            }
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<CasNode, CasError> {
        let base = self.postfix()?;
        if self.eat("^") {
            let exp = self.exponent()?;
            return Ok(CasNode::power(base, exp));
        }
        Ok(base)
    }

    /// Right operand of `^`: a power, optionally preceded by signs.
    fn exponent(&mut self) -> Result<CasNode, CasError> {
        if self.eat("-") {
            let inner = self.exponent()?;
            return Ok(negate(inner));
        }
        if self.eat("+") {
            return self.exponent();
        }
        if !self.starts_operand() {
            return Err(self.operand_error("^"));
        }
        self.power()
    }

    fn postfix(&mut self) -> Result<CasNode, CasError> {
        let mut node = self.primary()?;
        loop {
            if self.eat("!!") {
                node = CasNode::call("doublefactorial", vec![node]);
            } else if self.eat("!") {
                node = CasNode::call("factorial", vec![node]);
            } else {
                return Ok(node);
            }
        }
    }

    fn primary(&mut self) -> Result<CasNode, CasError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error(CasErrorKind::UnexpectedEnd));
        };
        self.i += 1;
        match tok {
            Tok::Int(s) => s
                .parse::<i64>()
                .map(CasNode::IntPos)
                .map_err(|_| CasError {
                    kind: CasErrorKind::IntegerOverflow,
                    pos,
                }),
            Tok::Float { mantissa, exponent } => mantissa
                .parse::<i64>()
                .map(|m| CasNode::Float {
                    mantissa: m,
                    exponent,
                })
                .map_err(|_| CasError {
                    kind: CasErrorKind::IntegerOverflow,
                    pos,
                }),
            Tok::Name(name) => {
                if self.eat("(") {
                    let args = self.arguments(")", pos)?;
                    if name == "sqrt" && args.len() == 1 {
                        let arg = args.into_iter().next().expect("one argument");
                        return Ok(CasNode::power(arg, CasNode::Rational { num: 1, den: 2 }));
                    }
                    Ok(CasNode::Function { name, args })
                } else if matches!(self.peek(), Some(Tok::Op("["))) {
                    Err(self.error(CasErrorKind::Unsupported("indexed name".into())))
                } else {
                    Ok(CasNode::Name(name))
                }
            }
            Tok::Op("(") => {
                let inner = self.expr()?;
                if !self.eat(")") {
                    return Err(self.close_error("(", pos));
                }
                Ok(inner)
            }
            Tok::Op("[") => Ok(CasNode::ExpSeq(self.arguments("]", pos)?)),
            Tok::Op(op) => Err(CasError {
                kind: CasErrorKind::UnexpectedToken(op.into()),
                pos,
            }),
        }
    }

    fn close_error(&self, open: &str, open_pos: usize) -> CasError {
        match self.peek() {
            None | Some(Tok::Op(")" | "]")) => CasError {
                kind: CasErrorKind::Unclosed(open.into()),
                pos: open_pos,
            },
            Some(Tok::Op(",")) => self.error(CasErrorKind::BareComma),
            Some(t) => self.error(CasErrorKind::UnexpectedToken(describe(t))),
        }
    }

    /// Comma-separated elements up to `close`; each element may be `a$b`.
    fn arguments(&mut self, close: &'static str, open_pos: usize) -> Result<Vec<CasNode>, CasError> {
        let mut args = Vec::new();
        if self.eat(close) {
            return Ok(args);
        }
        loop {
            if matches!(self.peek(), Some(Tok::Op("," | ")" | "]"))) {
                return Err(self.error(CasErrorKind::EmptyArgument));
            }
            let mut e = self.expr()?;
            if self.eat("$") {
                if !self.starts_operand() {
                    return Err(self.operand_error("$"));
                }
                let count = self.expr()?;
                e = CasNode::call("$", vec![e, count]);
            }
            args.push(e);
            if self.eat(",") {
                continue;
            }
            if self.eat(close) {
                return Ok(args);
            }
            let open = if close == ")" { "(" } else { "[" };
            return Err(match self.peek() {
                None => CasError {
                    kind: CasErrorKind::Unclosed(open.into()),
                    pos: open_pos,
                },
                Some(t) => self.error(CasErrorKind::UnexpectedToken(describe(t))),
            });
        }
    }
}

fn push_term(terms: &mut Vec<(CasNode, i64)>, t: CasNode, sign: i64) {
    match t {
        CasNode::Sum(inner) if sign == 1 => terms.extend(inner),
        t => terms.push((t, sign)),
    }
}

/// Flattening product constructor.
pub(crate) fn product(factors: Vec<CasNode>) -> CasNode {
    let mut out = Vec::new();
    for f in factors {
        match f {
            CasNode::Prod(inner) => out.extend(inner),
            f => out.push(f),
        }
    }
    if out.len() == 1 {
        return out.pop().expect("one factor");
    }
    CasNode::Prod(out)
}

fn divide(a: CasNode, b: CasNode) -> CasNode {
    if let (CasNode::IntPos(n) | CasNode::IntNeg(n), CasNode::IntPos(d)) = (&a, &b) {
        if *d > 0 {
            if let Some(r) = CasNode::rational(*n, *d) {
                return r;
            }
        }
    }
    product(vec![a, CasNode::power(b, CasNode::IntNeg(-1))])
}

fn negate(n: CasNode) -> CasNode {
    match n.negate_literal() {
        Some(v) => v,
        None => fold_complex_prod(product(vec![CasNode::IntNeg(-1), n])),
    }
}

fn is_i(n: &CasNode) -> bool {
    matches!(n, CasNode::Name(s) if s == "I")
}

/// `2*I` → `COMPLEX(2)`.
fn fold_complex_prod(n: CasNode) -> CasNode {
    if let CasNode::Prod(f) = &n {
        if f.len() == 2 {
            let lit = match (&f[0], &f[1]) {
                (a, b) if a.is_real_literal() && is_i(b) => Some(a),
                (a, b) if is_i(a) && b.is_real_literal() => Some(b),
                _ => None,
            };
            if let Some(lit) = lit {
                return CasNode::Complex {
                    re: None,
                    im: Box::new(lit.clone()),
                };
            }
        }
    }
    n
}

/// Imaginary part of an imaginary literal (`I` or `COMPLEX(im)`).
fn imaginary_part(n: &CasNode) -> Option<CasNode> {
    match n {
        n if is_i(n) => Some(CasNode::IntPos(1)),
        CasNode::Complex { re: None, im } => Some((**im).clone()),
        _ => None,
    }
}

fn signed(n: CasNode, sign: i64) -> Option<CasNode> {
    if sign == 1 {
        Some(n)
    } else {
        n.negate_literal()
    }
}

/// `1-2*I` → `COMPLEX(1, -2)`; other sums are returned unchanged.
fn fold_complex_sum(terms: Vec<(CasNode, i64)>) -> CasNode {
    if let [(a, fa), (b, fb)] = terms.as_slice() {
        let pair = if a.is_real_literal() {
            imaginary_part(b).map(|im| (a.clone(), *fa, im, *fb))
        } else if b.is_real_literal() {
            imaginary_part(a).map(|im| (b.clone(), *fb, im, *fa))
        } else {
            None
        };
        if let Some((re, fre, im, fim)) = pair {
            if let (Some(re), Some(im)) = (signed(re, fre), signed(im, fim)) {
                return CasNode::Complex {
                    re: Some(Box::new(re)),
                    im: Box::new(im),
                };
            }
        }
    }
    CasNode::Sum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use CasNode::*;

    fn p(s: &str) -> CasNode {
        parse_cas(s, ParseOptions::default()).unwrap()
    }

    fn err(s: &str) -> CasError {
        parse_cas(s, ParseOptions::default()).unwrap_err()
    }

    fn x() -> CasNode {
        CasNode::name("x")
    }

    #[test]
    fn polynomial_shape() {
        assert_eq!(
            p("x^2+x"),
            Sum(vec![(CasNode::power(x(), IntPos(2)), 1), (x(), 1)])
        );
    }

    #[test]
    fn float_is_mantissa_and_exponent() {
        assert_eq!(p("3.1"), Float { mantissa: 31, exponent: -1 });
        assert_eq!(p("0.005"), Float { mantissa: 5, exponent: -3 });
        assert_eq!(p("31e2"), Float { mantissa: 31, exponent: 2 });
        assert_eq!(p("1.5e-3"), Float { mantissa: 15, exponent: -4 });
        assert_eq!(p("31."), Float { mantissa: 31, exponent: 0 });
    }

    #[test]
    fn subtraction_and_division_normalized() {
        assert_eq!(p("x-y"), Sum(vec![(x(), 1), (CasNode::name("y"), -1)]));
        assert_eq!(
            p("(x+y)/z"),
            Prod(vec![
                Sum(vec![(x(), 1), (CasNode::name("y"), 1)]),
                CasNode::power(CasNode::name("z"), IntNeg(-1))
            ])
        );
        assert_eq!(p("1/2"), Rational { num: 1, den: 2 });
        assert_eq!(p("4/2"), IntPos(2));
        assert_eq!(p("-1/2"), Rational { num: -1, den: 2 });
        assert_eq!(p("sqrt(x)"), CasNode::power(x(), Rational { num: 1, den: 2 }));
    }

    #[test]
    fn precedence() {
        assert_eq!(p("((a-b))"), p("a-b"));
        assert_eq!(p("(((a-b)))*c"), Prod(vec![p("a-b"), CasNode::name("c")]));
        assert_eq!(p("-x^2"), Prod(vec![IntNeg(-1), CasNode::power(x(), IntPos(2))]));
        assert_eq!(p("2^-3"), CasNode::power(IntPos(2), IntNeg(-3)));
        assert_eq!(
            p("a^b^c"),
            CasNode::power(
                CasNode::name("a"),
                CasNode::power(CasNode::name("b"), CasNode::name("c"))
            )
        );
        assert_eq!(p("n!!"), CasNode::call("doublefactorial", vec![CasNode::name("n")]));
        assert_eq!(
            p("n^m!"),
            CasNode::power(CasNode::name("n"), CasNode::call("factorial", vec![CasNode::name("m")]))
        );
    }

    #[test]
    fn complex_literals() {
        assert_eq!(
            p("1-I"),
            Complex {
                re: Some(Box::new(IntPos(1))),
                im: Box::new(IntNeg(-1))
            }
        );
        assert_eq!(p("2*I"), Complex { re: None, im: Box::new(IntPos(2)) });
        assert_eq!(p("I"), CasNode::name("I"));
        assert_eq!(p("I*z"), Prod(vec![CasNode::name("I"), CasNode::name("z")]));
    }

    #[test]
    fn functions_lists_and_quotes() {
        assert_eq!(
            p("diff(x^2, [x$2])"),
            CasNode::call(
                "diff",
                vec![
                    CasNode::power(x(), IntPos(2)),
                    ExpSeq(vec![CasNode::call("$", vec![x(), IntPos(2)])])
                ]
            )
        );
        let q = parse_cas("'sin(Pi)+2-1'", ParseOptions { unevaluated: true }).unwrap();
        assert_eq!(
            q,
            Sum(vec![
                (CasNode::call("sin", vec![CasNode::name("Pi")]), 1),
                (IntPos(2), 1),
                (IntPos(1), -1)
            ])
        );
        assert_eq!(err("'x'").kind, CasErrorKind::QuotesNotAllowed);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(err("(x+1"), CasError { kind: CasErrorKind::Unclosed("(".into()), pos: 0 });
        assert_eq!(err("f(a,,b)"), CasError { kind: CasErrorKind::EmptyArgument, pos: 4 });
        assert_eq!(err("x+"), CasError { kind: CasErrorKind::TrailingOperator("+".into()), pos: 2 });
        assert_eq!(err("a, b").kind, CasErrorKind::BareComma);
        assert_eq!(err("x)").kind, CasErrorKind::UnexpectedToken(")".into()));
        assert_eq!(err("x # y").kind, CasErrorKind::UnexpectedChar('#'));
    }
}
