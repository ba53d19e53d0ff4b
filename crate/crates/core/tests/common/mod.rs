//! Test oracles that share no code with the library.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Direct recursive-descent evaluation of `+ - * / ^`, integers, parentheses and one
/// variable `x`. `^` binds tighter than unary minus and is right associative.
pub struct Reference<'a> {
    s: &'a [u8],
    i: usize,
    x: Complex64,
}

impl<'a> Reference<'a> {
    pub fn eval(src: &'a str, x: Complex64) -> Option<Complex64> {
        let mut r = Reference { s: src.as_bytes(), i: 0, x };
        let v = r.expr()?;
        r.skip();
        (r.i == r.s.len()).then_some(v)
    }

    fn skip(&mut self) {
        while self.s.get(self.i) == Some(&b' ') {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Option<Complex64> {
        let mut v = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    v += self.term()?;
                }
                Some(b'-') => {
                    self.i += 1;
                    v -= self.term()?;
                }
                _ => return Some(v),
            }
        }
    }

    fn term(&mut self) -> Option<Complex64> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    v *= self.unary()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    v /= self.unary()?;
                }
                _ => return Some(v),
            }
        }
    }

    fn unary(&mut self) -> Option<Complex64> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Some(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Option<Complex64> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Some(base);
        }
        self.i += 1;
        let neg = if self.peek() == Some(b'-') {
            self.i += 1;
            true
        } else {
            false
        };
        let e = self.power()?;
        let e = if neg { -e } else { e };
        if !base.is_finite() {
            return Some(Complex64::new(f64::NAN, 0.0));
        }
        if e.im == 0.0 && e.re.fract() == 0.0 {
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..(e.re.abs() as u32) {
                acc *= base;
            }
            return Some(if e.re < 0.0 { acc.inv() } else { acc });
        }
        Some(base.powc(e))
    }

    fn atom(&mut self) -> Option<Complex64> {
        match self.peek()? {
            b'(' => {
                self.i += 1;
                let v = self.expr()?;
                (self.peek()? == b')').then(|| self.i += 1)?;
                Some(v)
            }
            b'x' => {
                self.i += 1;
                Some(self.x)
            }
            c if c.is_ascii_digit() => {
                let start = self.i;
                while self.s.get(self.i).is_some_and(u8::is_ascii_digit) {
                    self.i += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.i]).ok()?;
                Some(Complex64::new(text.parse::<f64>().ok()?, 0.0))
            }
            _ => None,
        }
    }
}

/// Random arithmetic expression over small integers and `x`.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.5) {
            "x".to_string()
        } else {
            rng.gen_range(1..=9).to_string()
        };
    }
    match rng.gen_range(0..7) {
        0 => format!("{}+{}", random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        1 => format!("{}-{}", random_expr(rng, depth - 1), wrapped(rng, depth - 1)),
        2 => format!("{}*{}", wrapped(rng, depth - 1), wrapped(rng, depth - 1)),
        3 => format!("{}/{}", wrapped(rng, depth - 1), wrapped(rng, depth - 1)),
        4 => {
            let e = rng.gen_range(0..=3);
            let sign = if rng.gen_bool(0.3) { "-" } else { "" };
            format!("{}^({sign}{e})", wrapped(rng, depth - 1))
        }
        5 => format!("-{}", wrapped(rng, depth - 1)),
        _ => format!("({})", random_expr(rng, depth - 1)),
    }
}

fn wrapped(rng: &mut ChaCha8Rng, depth: u32) -> String {
    format!("({})", random_expr(rng, depth))
}

/// `|a - b| <= tol * max(1, |b|)`.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}
