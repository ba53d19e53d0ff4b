//! Canonical form: sums of monomials with exact Gaussian-rational coefficients.
//!
//! Products are expanded, integer powers are multiplied out, `exp` factors merge their
//! arguments and everything else is an opaque atom ordered structurally. Two trees
//! with the same canonical form are equal as functions wherever both are defined;
//! different forms prove nothing.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cas::CasNode;

/// Largest number of terms an expanded product may reach.
pub const MAX_TERMS: usize = 4096;
/// Largest integer power of a sum that is expanded.
pub const MAX_EXPANDED_POWER: i64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("coefficient overflow")]
    Overflow,
    #[error("expansion exceeds {MAX_TERMS} terms")]
    TooLarge,
    #[error("{0} has no canonical form")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q {
    n: i128,
    d: i128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Q {
    pub const ZERO: Q = Q { n: 0, d: 1 };
    pub const ONE: Q = Q { n: 1, d: 1 };

    pub fn new(n: i128, d: i128) -> Result<Q, CanonError> {
        if d == 0 {
            return Err(CanonError::Unsupported("a zero denominator".into()));
        }
        let g = gcd(n.unsigned_abs(), d.unsigned_abs()).max(1) as i128;
        let (n, d) = (n / g, d / g);
        if d < 0 {
            Ok(Q {
                n: n.checked_neg().ok_or(CanonError::Overflow)?,
                d: d.checked_neg().ok_or(CanonError::Overflow)?,
            })
        } else {
            Ok(Q { n, d })
        }
    }

    fn add(self, o: Q) -> Result<Q, CanonError> {
        let n = self
            .n
            .checked_mul(o.d)
            .and_then(|a| o.n.checked_mul(self.d).and_then(|b| a.checked_add(b)))
            .ok_or(CanonError::Overflow)?;
        Q::new(n, self.d.checked_mul(o.d).ok_or(CanonError::Overflow)?)
    }

    fn mul(self, o: Q) -> Result<Q, CanonError> {
        Q::new(
            self.n.checked_mul(o.n).ok_or(CanonError::Overflow)?,
            self.d.checked_mul(o.d).ok_or(CanonError::Overflow)?,
        )
    }

    fn neg(self) -> Q {
        Q { n: -self.n, d: self.d }
    }

    fn is_zero(self) -> bool {
        self.n == 0
    }
}

/// Gaussian rational `re + im i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GQ {
    pub re: Q,
    pub im: Q,
}

impl GQ {
    pub const ZERO: GQ = GQ { re: Q::ZERO, im: Q::ZERO };
    pub const ONE: GQ = GQ { re: Q::ONE, im: Q::ZERO };
    pub const I: GQ = GQ { re: Q::ZERO, im: Q::ONE };

    pub fn real(q: Q) -> GQ {
        GQ { re: q, im: Q::ZERO }
    }

    fn add(self, o: GQ) -> Result<GQ, CanonError> {
        Ok(GQ {
            re: self.re.add(o.re)?,
            im: self.im.add(o.im)?,
        })
    }

    fn mul(self, o: GQ) -> Result<GQ, CanonError> {
        Ok(GQ {
            re: self.re.mul(o.re)?.add(self.im.mul(o.im)?.neg())?,
            im: self.re.mul(o.im)?.add(self.im.mul(o.re)?)?,
        })
    }

    fn inv(self) -> Result<GQ, CanonError> {
        let norm = self.re.mul(self.re)?.add(self.im.mul(self.im)?)?;
        if norm.is_zero() {
            return Err(CanonError::Unsupported("division by zero".into()));
        }
        let inv = Q::new(norm.d, norm.n)?;
        Ok(GQ {
            re: self.re.mul(inv)?,
            im: self.im.neg().mul(inv)?,
        })
    }

    fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// The value as an integer when it is one.
    fn as_integer(self) -> Option<i64> {
        (self.im.is_zero() && self.re.d == 1)
            .then(|| i64::try_from(self.re.n).ok())
            .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Name(String),
    Float(String),
    Call(String, Vec<Poly>),
    Pow(Poly, Poly),
    List(Vec<Poly>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    factors: BTreeMap<Atom, i64>,
    /// Sum of the arguments of all `exp` factors.
    exp: Poly,
}

impl Monomial {
    fn mul(&self, o: &Monomial) -> Result<Monomial, CanonError> {
        let mut factors = self.factors.clone();
        for (a, k) in &o.factors {
            let e = factors.entry(a.clone()).or_insert(0);
            *e = e.checked_add(*k).ok_or(CanonError::Overflow)?;
            if *e == 0 {
                factors.remove(a);
            }
        }
        let mut exp = self.exp.clone();
        exp.add_assign(&o.exp)?;
        Ok(Monomial { factors, exp })
    }

    fn pow(&self, n: i64) -> Result<Monomial, CanonError> {
        let mut factors = BTreeMap::new();
        for (a, k) in &self.factors {
            factors.insert(a.clone(), k.checked_mul(n).ok_or(CanonError::Overflow)?);
        }
        Ok(Monomial {
            factors,
            exp: self.exp.scale(GQ::real(Q::new(n as i128, 1)?))?,
        })
    }

    fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_zero()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, GQ>,
}

impl Poly {
    pub fn constant(c: GQ) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::default(), c);
        }
        p
    }

    fn atom(a: Atom) -> Poly {
        let mut m = Monomial::default();
        m.factors.insert(a, 1);
        let mut p = Poly::default();
        p.terms.insert(m, GQ::ONE);
        p
    }

    fn exp_of(arg: Poly) -> Poly {
        if arg.is_zero() {
            return Poly::constant(GQ::ONE);
        }
        let mut p = Poly::default();
        p.terms.insert(
            Monomial {
                factors: BTreeMap::new(),
                exp: arg,
            },
            GQ::ONE,
        );
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<GQ> {
        match self.terms.len() {
            0 => Some(GQ::ZERO),
            1 => self.terms.iter().next().filter(|(m, _)| m.is_one()).map(|(_, c)| *c),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: GQ) -> Result<(), CanonError> {
        let slot = self.terms.entry(m.clone()).or_insert(GQ::ZERO);
        *slot = slot.add(c)?;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    fn add_assign(&mut self, o: &Poly) -> Result<(), CanonError> {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), *c)?;
        }
        Ok(())
    }

    fn scale(&self, k: GQ) -> Result<Poly, CanonError> {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(k)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly, CanonError> {
        let mut out = self.clone();
        out.add_assign(&o.scale(GQ::real(Q::ONE.neg()))?)?;
        Ok(out)
    }

    fn mul(&self, o: &Poly) -> Result<Poly, CanonError> {
        if self.terms.len().saturating_mul(o.terms.len()) > MAX_TERMS * 4 {
            return Err(CanonError::TooLarge);
        }
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb)?, ca.mul(*cb)?)?;
            }
        }
        if out.terms.len() > MAX_TERMS {
            return Err(CanonError::TooLarge);
        }
        Ok(out)
    }

    fn single(&self) -> Option<(&Monomial, GQ)> {
        (self.terms.len() == 1)
            .then(|| self.terms.iter().next().map(|(m, c)| (m, *c)))
            .flatten()
    }

    fn pow_int(&self, n: i64) -> Result<Poly, CanonError> {
        if let Some((m, c)) = self.single() {
            let mut coeff = GQ::ONE;
            let base = if n < 0 { c.inv()? } else { c };
            for _ in 0..n.unsigned_abs() {
                coeff = coeff.mul(base)?;
            }
            let mut out = Poly::default();
            out.terms.insert(m.pow(n)?, coeff);
            return Ok(out);
        }
        if self.is_zero() {
            return if n > 0 {
                Ok(Poly::default())
            } else if n == 0 {
                Ok(Poly::constant(GQ::ONE))
            } else {
                Err(CanonError::Unsupported("division by zero".into()))
            };
        }
        if (0..=MAX_EXPANDED_POWER).contains(&n) {
            let mut out = Poly::constant(GQ::ONE);
            for _ in 0..n {
                out = out.mul(self)?;
            }
            return Ok(out);
        }
        let (atom, k) = if n < 0 {
            (Atom::Pow(self.clone(), Poly::constant(GQ::real(Q::ONE.neg()))), n.unsigned_abs())
        } else {
            (Atom::Pow(self.clone(), Poly::constant(GQ::ONE)), n as u64)
        };
        let mut m = Monomial::default();
        m.factors.insert(atom, k as i64);
        let mut out = Poly::default();
        out.terms.insert(m, GQ::ONE);
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonOptions {
    /// Rewrite `sin`, `cos`, `sinh` and `cosh` as exponentials first.
    pub exp_rewrite: bool,
}

pub fn canonical(node: &CasNode, opts: CanonOptions) -> Result<Poly, CanonError> {
    let rec = |n: &CasNode| canonical(n, opts);
    let int = |v: i64| Ok(Poly::constant(GQ::real(Q::new(v as i128, 1)?)));
    match node {
        CasNode::Sum(terms) => {
            let mut out = Poly::default();
            for (t, k) in terms {
                out.add_assign(&rec(t)?.scale(GQ::real(Q::new(*k as i128, 1)?))?)?;
            }
            Ok(out)
        }
        CasNode::Prod(fs) => {
            let mut out = Poly::constant(GQ::ONE);
            for f in fs {
                out = out.mul(&rec(f)?)?;
            }
            Ok(out)
        }
        CasNode::Divide(a, b) => rec(a)?.mul(&rec(b)?.pow_int(-1)?),
        CasNode::Power(b, e) => {
            let base = rec(b)?;
            let exp = rec(e)?;
            match exp.as_constant().and_then(GQ::as_integer) {
                Some(n) => base.pow_int(n),
                None => Ok(Poly::atom(Atom::Pow(base, exp))),
            }
        }
        CasNode::IntPos(v) | CasNode::IntNeg(v) => int(*v),
        CasNode::Rational { num, den } => Ok(Poly::constant(GQ::real(Q::new(*num as i128, *den as i128)?))),
        CasNode::Float { mantissa, exponent } => Ok(float_atom(*mantissa as f64 * 10f64.powi(*exponent))),
        CasNode::MyFloat(s) => s
            .parse::<f64>()
            .map(float_atom)
            .map_err(|_| CanonError::Unsupported(format!("float `{s}`"))),
        CasNode::Complex { re, im } => {
            let mut out = match re {
                Some(r) => rec(r)?,
                None => Poly::default(),
            };
            out.add_assign(&rec(im)?.scale(GQ::I)?)?;
            Ok(out)
        }
        CasNode::Name(n) => Ok(match n.as_str() {
            "I" => Poly::constant(GQ::I),
            "pi" | "Pi" => Poly::atom(Atom::Name("Pi".into())),
            _ => Poly::atom(Atom::Name(n.clone())),
        }),
        CasNode::ExpSeq(items) => Ok(Poly::atom(Atom::List(items.iter().map(rec).collect::<Result<_, _>>()?))),
        CasNode::Function { name, args } => {
            let args: Vec<Poly> = args.iter().map(rec).collect::<Result<_, _>>()?;
            if let [u] = args.as_slice() {
                if name == "exp" {
                    return Ok(Poly::exp_of(u.clone()));
                }
                if opts.exp_rewrite {
                    if let Some(p) = exponential_form(name, u)? {
                        return Ok(p);
                    }
                }
            }
            Ok(Poly::atom(Atom::Call(name.clone(), args)))
        }
    }
}

fn float_atom(v: f64) -> Poly {
    Poly::atom(Atom::Float(format!("{v:e}")))
}

/// `(exp(s u) + sign exp(-s u)) * scale` for the four rewritable functions.
fn exponential_form(name: &str, u: &Poly) -> Result<Option<Poly>, CanonError> {
    let half = GQ::real(Q::new(1, 2)?);
    let minus_half_i = GQ {
        re: Q::ZERO,
        im: Q::new(-1, 2)?,
    };
    let (s, sign, scale) = match name {
        "sin" => (GQ::I, -1, minus_half_i),
        "cos" => (GQ::I, 1, half),
        "sinh" => (GQ::ONE, -1, half),
        "cosh" => (GQ::ONE, 1, half),
        _ => return Ok(None),
    };
    let arg = u.scale(s)?;
    let mut p = Poly::exp_of(arg.clone());
    p.add_assign(&Poly::exp_of(arg.scale(GQ::real(Q::ONE.neg()))?).scale(GQ::real(Q::new(sign, 1)?))?)?;
    Ok(Some(p.scale(scale)?))
}
