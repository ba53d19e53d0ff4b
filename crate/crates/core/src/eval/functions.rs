use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::orthogonal::{jacobi_p, legendre_p, legendre_p_assoc};
use super::{Convention, Env, EvalError, FnImpl};

type C = Complex64;

fn unary(name: &str, note: &str, f: fn(C) -> C) -> FnImpl {
    FnImpl {
        name: name.into(),
        arity: 1,
        domain_note: note.into(),
        imp: Arc::new(move |a, _| Ok(f(a[0]))),
    }
}

fn checked(name: &'static str, arity: usize, note: &str, f: fn(&[C], &Env) -> Result<C, EvalError>) -> FnImpl {
    FnImpl {
        name: name.into(),
        arity,
        domain_note: note.into(),
        imp: Arc::new(f),
    }
}

fn reciprocal(name: &'static str, z: C) -> Result<C, EvalError> {
    if z == C::new(0.0, 0.0) {
        return Err(EvalError::Pole(format!("{name} at a zero of its denominator")));
    }
    Ok(z.inv())
}

/// Nonnegative integer value of a real argument.
pub(crate) fn nonneg_int(function: &str, z: C) -> Result<u64, EvalError> {
    if z.im != 0.0 || z.re < 0.0 || z.re.fract() != 0.0 || z.re > 1e6 {
        return Err(EvalError::domain(function, format!("{z} is not a nonnegative integer")));
    }
    Ok(z.re as u64)
}

pub(crate) fn integer(function: &str, z: C) -> Result<i64, EvalError> {
    if z.im != 0.0 || z.re.fract() != 0.0 || z.re.abs() > 1e6 {
        return Err(EvalError::domain(function, format!("{z} is not an integer")));
    }
    Ok(z.re as i64)
}

/// `arccot` under the selected convention.
pub fn arccot(z: C, convention: Convention) -> Result<C, EvalError> {
    match convention {
        Convention::Maple => Ok(C::new(FRAC_PI_2, 0.0) - z.atan()),
        Convention::Dlmf => Ok(reciprocal("arccot", z)?.atan()),
    }
}

pub(super) fn builtins() -> Vec<FnImpl> {
    let entire = "entire";
    vec![
        unary("exp", entire, C::exp),
        unary("ln", "cut on (-inf, 0], continuous from above", C::ln),
        unary("sqrt", "cut on (-inf, 0), continuous from above", C::sqrt),
        unary("sin", entire, C::sin),
        unary("cos", entire, C::cos),
        unary("tan", "poles at odd multiples of pi/2", C::tan),
        unary("sinh", entire, C::sinh),
        unary("cosh", entire, C::cosh),
        unary("tanh", "poles at odd multiples of i pi/2", C::tanh),
        checked("cot", 1, "poles at multiples of pi", |a, _| reciprocal("cot", a[0].tan())),
        checked("sec", 1, "poles at odd multiples of pi/2", |a, _| reciprocal("sec", a[0].cos())),
        checked("csc", 1, "poles at multiples of pi", |a, _| reciprocal("csc", a[0].sin())),
        checked("coth", 1, "poles at multiples of i pi", |a, _| reciprocal("coth", a[0].tanh())),
        unary("arcsin", "cuts on (-inf, -1] and [1, inf)", C::asin),
        unary("arccos", "cuts on (-inf, -1] and [1, inf)", C::acos),
        unary("arctan", "cuts on (-i inf, -i] and [i, i inf)", C::atan),
        checked(
            "arccot",
            1,
            "maple: pi/2 - arctan(z), cuts on (-i inf, -i] and [i, i inf); dlmf: arctan(1/z), cut on [-i, i]",
            |a, env| arccot(a[0], env.convention),
        ),
        checked("abs", 1, entire, |a, _| Ok(C::new(a[0].norm(), 0.0))),
        checked("Re", 1, entire, |a, _| Ok(C::new(a[0].re, 0.0))),
        checked("Im", 1, entire, |a, _| Ok(C::new(a[0].im, 0.0))),
        checked("factorial", 1, "nonnegative integers only", |a, _| {
            let n = nonneg_int("factorial", a[0])?;
            Ok(C::new((2..=n).map(|k| k as f64).product(), 0.0))
        }),
        checked("doublefactorial", 1, "nonnegative integers only", |a, _| {
            let n = nonneg_int("doublefactorial", a[0])?;
            Ok(C::new((1..=n).rev().step_by(2).map(|k| k as f64).product(), 0.0))
        }),
        checked("binomial", 2, "integer lower index >= 0", |a, _| {
            let k = nonneg_int("binomial", a[1])?;
            let mut acc = C::new(1.0, 0.0);
            for i in 0..k {
                acc = acc * (a[0] - i as f64) / (i + 1) as f64;
            }
            Ok(acc)
        }),
        checked("JacobiP", 4, "polynomial in x; integer degree >= 0", |a, _| {
            let n = nonneg_int("JacobiP", a[0])?;
            jacobi_p(n, a[1], a[2], a[3])
        }),
        checked("LegendreP", 2, "polynomial in x; integer degree", |a, _| {
            let n = integer("LegendreP", a[0])?;
            Ok(legendre_p(n, a[1]))
        }),
        checked(
            "LegendreP",
            3,
            "Ferrers function with Condon-Shortley phase; integer degree, order >= 0; (1-x^2)^(m/2) principal",
            |a, _| {
                let n = integer("LegendreP", a[0])?;
                let m = integer("LegendreP", a[1])?;
                legendre_p_assoc(n, m, a[2])
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arccot_conventions() {
        let z = C::new(2.0, 3.0);
        let eq8 = C::i() / 2.0 * ((z - C::i()) / (z + C::i())).ln();
        assert!((arccot(z, Convention::Dlmf).unwrap() - eq8).norm() < 1e-12);
        let right = C::new(1.5, 0.7);
        assert!((arccot(right, Convention::Dlmf).unwrap() - arccot(right, Convention::Maple).unwrap()).norm() < 1e-12);
        let left = C::new(-1.0, 0.0);
        let gap = arccot(left, Convention::Maple).unwrap() - arccot(left, Convention::Dlmf).unwrap();
        assert!((gap.re - std::f64::consts::PI).abs() < 1e-12);
        assert!(arccot(C::new(0.0, 0.0), Convention::Dlmf).is_err());
    }

    #[test]
    fn factorials() {
        let f = builtins();
        let call = |name: &str, x: f64| {
            let imp = f.iter().find(|i| i.name == name).unwrap();
            (imp.imp)(&[C::new(x, 0.0)], &Env::default())
        };
        assert_eq!(call("factorial", 5.0).unwrap().re, 120.0);
        assert_eq!(call("factorial", 0.0).unwrap().re, 1.0);
        assert_eq!(call("doublefactorial", 7.0).unwrap().re, 105.0);
        assert_eq!(call("doublefactorial", 0.0).unwrap().re, 1.0);
        assert!(call("factorial", -1.0).is_err());
    }
}
