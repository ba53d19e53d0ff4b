use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Minimum distance kept from excluded points and segments.
pub const EXCLUSION_RADIUS: f64 = 1e-3;

const ATTEMPTS_PER_POINT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exclusion {
    Point(Complex64),
    /// Closed segment; rays are long segments.
    Segment(Complex64, Complex64),
}

impl Exclusion {
    pub fn distance(&self, z: Complex64) -> f64 {
        match *self {
            Exclusion::Point(p) => (z - p).norm(),
            Exclusion::Segment(a, b) => {
                let d = b - a;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - a).norm();
                }
                let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
                (z - (a + d * t)).norm()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub exclusions: Vec<Exclusion>,
}

impl DomainSpec {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        DomainSpec {
            re,
            im,
            exclusions: Vec::new(),
        }
    }

    pub fn exclude(mut self, e: Exclusion) -> Self {
        self.exclusions.push(e);
        self
    }

    fn allowed(&self, z: Complex64) -> bool {
        self.exclusions.iter().all(|e| e.distance(z) >= EXCLUSION_RADIUS)
    }

    fn spans_quadrants(&self) -> bool {
        self.re.0 < 0.0 && self.re.1 > 0.0 && self.im.0 < 0.0 && self.im.1 > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("no admissible point in the domain after {attempts} attempts")]
    Empty { attempts: usize },
    #[error("invalid box: {0}")]
    InvalidBox(String),
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Deterministic sample of `count` points. When the box straddles both axes the first
/// four points fall in quadrants I, II, III, IV in that order.
pub fn sample_points(domain: &DomainSpec, count: usize, seed: u64) -> Result<Vec<Complex64>, SampleError> {
    let (re, im) = (domain.re, domain.im);
    if !(re.0 <= re.1 && im.0 <= im.1) || ![re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite()) {
        return Err(SampleError::InvalidBox(format!("re {re:?}, im {im:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quadrants = [
        ((0.0, re.1), (0.0, im.1)),
        ((re.0, 0.0), (0.0, im.1)),
        ((re.0, 0.0), (im.0, 0.0)),
        ((0.0, re.1), (im.0, 0.0)),
    ];
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (r, m) = match quadrants.get(i) {
            Some(q) if domain.spans_quadrants() => *q,
            _ => (re, im),
        };
        let mut found = None;
        for _ in 0..ATTEMPTS_PER_POINT {
            let z = Complex64::new(draw(&mut rng, r.0, r.1), draw(&mut rng, m.0, m.1));
            if domain.allowed(z) {
                found = Some(z);
                break;
            }
        }
        match found {
            Some(z) => out.push(z),
            None => {
                return Err(SampleError::Empty {
                    attempts: ATTEMPTS_PER_POINT,
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_per_quadrant() {
        let pts = sample_points(&DomainSpec::new((-1.0, 1.0), (-1.0, 1.0)), 4, 3).unwrap();
        let signs: Vec<_> = pts.iter().map(|z| (z.re >= 0.0, z.im >= 0.0)).collect();
        assert_eq!(signs, vec![(true, true), (false, true), (false, false), (true, false)]);
    }

    #[test]
    fn empty_region() {
        let d = DomainSpec::new((0.0, 0.0), (0.0, 0.0)).exclude(Exclusion::Point(Complex64::new(0.0, 0.0)));
        assert!(matches!(sample_points(&d, 1, 0), Err(SampleError::Empty { .. })));
    }

    #[test]
    fn deterministic_and_excluding() {
        let cut = Exclusion::Segment(Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0));
        let d = DomainSpec::new((-0.01, 0.01), (-2.0, 2.0)).exclude(cut);
        let a = sample_points(&d, 30, 11).unwrap();
        assert_eq!(a, sample_points(&d, 30, 11).unwrap());
        assert!(a.iter().all(|z| cut.distance(*z) >= EXCLUSION_RADIUS));
        assert_ne!(a, sample_points(&d, 30, 12).unwrap());
    }
}
