use num_complex::Complex64;
use semcas_core::cas::parse_cas;
use semcas_core::{Convention, Env, Evaluator, ParseOptions};

fn arccot(z: Complex64, convention: Convention) -> Complex64 {
    let n = parse_cas("arccot(z)", ParseOptions::default()).unwrap();
    Evaluator::new().eval(&n, &Env::new(convention).bind("z", z)).unwrap()
}

#[test]
fn dlmf_arccot_matches_log_form() {
    let z = Complex64::new(2.0, 3.0);
    let i = Complex64::i();
    let log_form = i / 2.0 * ((z - i) / (z + i)).ln();
    assert!((arccot(z, Convention::Dlmf) - log_form).norm() < 1e-12);
}

#[test]
fn maple_arccot_of_minus_one() {
    let v = arccot(Complex64::new(-1.0, 0.0), Convention::Maple);
    assert!((v.re - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15 && v.im == 0.0);
    let d = arccot(Complex64::new(-1.0, 0.0), Convention::Dlmf);
    assert!((d.re + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}

#[test]
fn conventions_agree_in_right_half_plane() {
    for (re, im) in [(0.5, 0.5), (2.0, -1.5), (0.2, 2.5), (3.0, 0.0)] {
        let z = Complex64::new(re, im);
        assert!((arccot(z, Convention::Dlmf) - arccot(z, Convention::Maple)).norm() < 1e-12, "{z}");
    }
}
