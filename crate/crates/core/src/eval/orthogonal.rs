use num_complex::Complex64;

use super::EvalError;

type C = Complex64;

/// Jacobi polynomial by the three-term recurrence in the degree.
pub fn jacobi_p(n: u64, a: C, b: C, x: C) -> Result<C, EvalError> {
    let one = C::new(1.0, 0.0);
    let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    if n == 0 {
        return Ok(one);
    }
    let (mut prev, mut cur) = (one, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = a + b + 2.0 * k;
        let denom = 2.0 * k * (k + a + b) * (s - 2.0);
        if denom == C::new(0.0, 0.0) {
            return Err(EvalError::domain("JacobiP", "degenerate recurrence for these parameters"));
        }
        let next = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * cur
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * prev)
            / denom;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial; negative degrees use `P_{-n-1} = P_n`.
pub fn legendre_p(n: i64, x: C) -> C {
    let n = if n < 0 { -n - 1 } else { n } as u64;
    let (mut prev, mut cur) = (C::new(1.0, 0.0), x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Ferrers function of the first kind `P_n^m(x)` with the Condon-Shortley phase.
pub fn legendre_p_assoc(n: i64, m: i64, x: C) -> Result<C, EvalError> {
    if m < 0 {
        return Err(EvalError::domain("LegendreP", "negative order"));
    }
    let n = if n < 0 { -n - 1 } else { n };
    if m > n {
        return Ok(C::new(0.0, 0.0));
    }
    let s = (C::new(1.0, 0.0) - x * x).sqrt();
    let mut pmm = C::new(1.0, 0.0);
    for k in 1..=m {
        pmm *= -(2.0 * k as f64 - 1.0) * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * (2.0 * m as f64 + 1.0) * pmm;
    for l in (m + 1)..n {
        let next = ((2.0 * l as f64 + 1.0) * x * cur - (l + m) as f64 * prev) / (l - m + 1) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
