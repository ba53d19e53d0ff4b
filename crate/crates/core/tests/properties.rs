mod common;

use common::{close, random_expr, Reference};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semcas_core::cas::{cosmetic, parse_cas, render_cas};
use semcas_core::{CasNode, Env, Evaluator, ParseOptions, Target};

fn parse(s: &str) -> CasNode {
    parse_cas(s, ParseOptions::default()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (1u32..20).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("Pi".to_string()),
        (1u32..9, 1u32..99).prop_map(|(a, b)| format!("{a}.{b}")),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}+{b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({a})^{e}")),
            (inner.clone(), 1u32..4).prop_map(|(a, e)| format!("({a})^(-{e})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("JacobiP(2,{a},{b},x)")),
        ]
    })
}

fn env() -> Env {
    Env::default()
        .bind("x", Complex64::new(0.7, -0.3))
        .bind("y", Complex64::new(-1.1, 0.4))
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(s in expr()) {
        let tree = parse(&s);
        prop_assert!(tree.is_inert());
        let text = render_cas(&tree, Target::Maple).unwrap();
        prop_assert_eq!(parse(&text), tree);
    }

    #[test]
    fn cosmetic_is_idempotent(s in expr()) {
        let once = cosmetic(&parse(&s));
        prop_assert_eq!(cosmetic(&once), once);
    }

    #[test]
    fn cosmetic_preserves_value(s in expr()) {
        let tree = parse(&s);
        let ev = Evaluator::new();
        if let Ok(v) = ev.eval(&tree, &env()) {
            if v.is_finite() {
                let w = ev.eval(&cosmetic(&tree), &env()).unwrap();
                prop_assert!(close(w, v, 1e-9), "{} vs {}", w, v);
            }
        }
    }

    #[test]
    fn cosmetic_text_reparses_to_same_value(s in expr()) {
        let tree = parse(&s);
        let shown = render_cas(&cosmetic(&tree), Target::Maple).unwrap();
        let ev = Evaluator::new();
        if let Ok(v) = ev.eval(&tree, &env()) {
            if v.is_finite() && v.norm() < 1e12 {
                let w = ev.eval(&parse(&shown), &env()).unwrap();
                prop_assert!(close(w, v, 1e-9), "{shown}: {} vs {}", w, v);
            }
        }
    }
}

#[test]
fn seeded_expressions_agree_with_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ev = Evaluator::new();
    let x = Complex64::new(0.83, -0.41);
    let mut compared = 0;
    for _ in 0..1000 {
        let s = random_expr(&mut rng, 5);
        let tree = parse(&s);
        assert!(tree.is_inert(), "{s}");
        let text = render_cas(&tree, Target::Maple).unwrap();
        assert_eq!(parse(&text), tree, "{s} -> {text}");
        let Some(want) = Reference::eval(&s, x).filter(|v| v.is_finite()) else {
            continue;
        };
        let got = ev.eval(&tree, &Env::default().bind("x", x)).unwrap_or_else(|e| panic!("{s}: {e} vs {want}"));
        assert!(close(got, want, 1e-12), "{s}: {got} vs {want}");
        compared += 1;
    }
    assert!(compared > 900, "{compared}");
}

#[test]
fn reference_evaluator_sanity() {
    let x = Complex64::new(2.0, 0.0);
    assert_eq!(Reference::eval("-x^2", x), Some(Complex64::new(-4.0, 0.0)));
    assert_eq!(Reference::eval("2^3^2", x), Some(Complex64::new(512.0, 0.0)));
    assert_eq!(Reference::eval("8/2/2", x), Some(Complex64::new(2.0, 0.0)));
    assert_eq!(Reference::eval("x-1-1", x), Some(Complex64::new(0.0, 0.0)));
    assert_eq!(Reference::eval("(x", x), None);
}
