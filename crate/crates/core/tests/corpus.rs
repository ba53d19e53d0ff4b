use std::collections::BTreeSet;
use std::path::Path;

use semcas_core::latex::parse_str;
use semcas_core::verify::{load_corpus, NumericConfig, NumericVerdict, RelationCase, Verifier};
use semcas_core::{Lexicon, NodeKind, Target};

fn corpus() -> Vec<RelationCase> {
    load_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus.jsonl")).unwrap()
}

/// One-argument macros whose Maple form is a registered single-argument call.
fn unary_macros(case: &RelationCase, lex: &Lexicon, v: &Verifier) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for side in [&case.lhs, &case.rhs] {
        let tree = parse_str(side, lex).unwrap();
        tree.walk(&mut |n| {
            if n.kind != NodeKind::SemanticMacro {
                return;
            }
            let Some(e) = n.macro_name().and_then(|m| lex.lookup(m, 0)) else {
                return;
            };
            let simple = e
                .forward_pattern(Target::Maple)
                .and_then(|p| p.as_simple_call())
                .filter(|(name, order)| order.len() == 1 && v.evaluator().function(name, 1).is_some());
            if e.arity() == 1 && simple.is_some() {
                out.insert(e.macro_name.clone());
            }
        });
    }
    out
}

#[test]
fn fifty_distinct_cases() {
    let cases = corpus();
    assert_eq!(cases.len(), 50);
    let ids: BTreeSet<_> = cases.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids.len(), 50);
}

#[test]
fn every_case_is_verified() {
    let v = Verifier::new(Lexicon::bundled()).unwrap();
    let report = v.run_corpus(&corpus(), &NumericConfig::default());
    let bad: Vec<_> = report
        .reports
        .iter()
        .filter(|r| !r.verified() || !r.sound())
        .map(|r| format!("{}: {:?} {:?} {:?} {:?}", r.id, r.error, r.structural, r.numeric.verdict, r.numeric.note))
        .collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert_eq!(report.summary.translated_pct, 100.0);
}

#[test]
fn every_side_reaches_a_fixed_point() {
    let v = Verifier::new(Lexicon::bundled()).unwrap();
    let mut bad = Vec::new();
    for case in corpus().iter().filter(|c| !c.no_fixed_point) {
        for side in [&case.lhs, &case.rhs] {
            let r = v.round_trip(side, semcas_core::verify::System::Latex, 3);
            if !r.fixed_point_found {
                bad.push(format!("{}: {}", case.id, r.table()));
                continue;
            }
            let k = r.fixed_point_step.unwrap();
            let again = v.round_trip(&r.steps[k].text, r.steps[k].system, 3);
            if again.fixed_point_step != Some(0) {
                bad.push(format!("{}: re-entry {}", case.id, again.table()));
            }
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn swapping_any_two_unary_functions_breaks_every_identity() {
    let lex = Lexicon::bundled();
    let v = Verifier::new(lex.clone()).unwrap();
    let cfg = NumericConfig::default();
    let mut bad = Vec::new();
    let mut pairs_checked = 0;
    for case in corpus() {
        let fns: Vec<_> = unary_macros(&case, &lex, &v).into_iter().collect();
        for (i, a) in fns.iter().enumerate() {
            for b in &fns[i + 1..] {
                let mutated = Verifier::new(lex.with_swapped_patterns(a, b, Target::Maple).unwrap()).unwrap();
                let r = mutated.numeric(&case, &cfg);
                pairs_checked += 1;
                if r.verdict != NumericVerdict::Fail {
                    bad.push(format!("{}: {a}<->{b} gave {:?}", case.id, r.verdict));
                }
            }
        }
    }
    assert!(pairs_checked > 20);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn macros_consume_exactly_their_arguments() {
    let lex = Lexicon::bundled();
    let t = semcas_core::Translator::new(&lex, Target::Maple);
    let mut macros = 0;
    for case in corpus() {
        for side in [&case.lhs, &case.rhs] {
            let root = parse_str(side, &lex).unwrap();
            let (_, trace) = t.translate_traced(&root).unwrap();
            root.walk(&mut |n| assert_eq!(trace.visits.get(&n.id), Some(&1), "{}: node {} of {side}", case.id, n.id));
            for m in &trace.macros {
                let e = lex.lookup(&m.macro_name, m.optional_groups).unwrap();
                assert_eq!(m.params, e.num_params, "{side}");
                assert_eq!(m.vars, e.num_vars, "{side}");
                assert!(m.ats <= e.num_ats, "{side}");
                macros += 1;
            }
        }
    }
    assert!(macros > 100, "{macros}");
}
