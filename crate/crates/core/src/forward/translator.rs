use std::collections::{HashMap, VecDeque};

use crate::latex::{parse_str, NodeKind, PomNode};
use crate::lexicon::{Lexicon, MacroEntry};
use crate::target::Target;

use super::teo::{is_atom, is_self_delimiting, strip_outer_parens, Fragment, Role, TeoList};
use super::{InfoRecord, TranslateError, TranslationResult};

type Siblings<'n> = VecDeque<&'n PomNode>;

/// Siblings consumed by one semantic macro.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroConsumption {
    pub node_id: usize,
    pub macro_name: String,
    pub deferred_exponent: bool,
    pub optional_groups: usize,
    pub params: usize,
    pub ats: usize,
    pub vars: usize,
}

impl MacroConsumption {
    pub fn total(&self) -> usize {
        usize::from(self.deferred_exponent) + self.optional_groups + self.params + self.ats + self.vars
    }
}

#[derive(Debug, Clone, Default)]
pub struct Trace {
    /// Node id → number of times the node was translated.
    pub visits: HashMap<usize, usize>,
    pub macros: Vec<MacroConsumption>,
}

#[derive(Default)]
struct State {
    info: Vec<InfoRecord>,
    trace: Trace,
}

impl State {
    fn visit(&mut self, n: &PomNode) {
        *self.trace.visits.entry(n.id).or_default() += 1;
    }
}

pub struct Translator<'a> {
    lexicon: &'a Lexicon,
    target: Target,
}

impl<'a> Translator<'a> {
    pub fn new(lexicon: &'a Lexicon, target: Target) -> Self {
        Self { lexicon, target }
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn translate_str(&self, latex: &str) -> Result<TranslationResult, TranslateError> {
        let root = parse_str(latex, self.lexicon)?;
        self.translate(&root)
    }

    pub fn translate(&self, root: &PomNode) -> Result<TranslationResult, TranslateError> {
        self.translate_traced(root).map(|(r, _)| r)
    }

    /// Like [`Translator::translate`], also reporting how often each node was used
    /// and how many siblings each macro consumed.
    pub fn translate_traced(
        &self,
        root: &PomNode,
    ) -> Result<(TranslationResult, Trace), TranslateError> {
        let mut st = State::default();
        st.visit(root);
        let teo = self.sequence(&root.children, &mut st)?;
        let result = TranslationResult {
            output: teo.render(self.mult()),
            info_log: st.info,
            target: self.target,
        };
        Ok((result, st.trace))
    }

    fn mult(&self) -> &'static str {
        self.target.mult()
    }

    fn maple(&self) -> bool {
        self.target == Target::Maple
    }

    fn sequence(&self, nodes: &[PomNode], st: &mut State) -> Result<TeoList, TranslateError> {
        let mut siblings: Siblings = nodes.iter().collect();
        let mut teo = TeoList::new();
        while let Some(n) = siblings.pop_front() {
            self.node(n, &mut siblings, &mut teo, st)?;
        }
        Ok(teo)
    }

    fn sequence_text(&self, nodes: &[PomNode], st: &mut State) -> Result<String, TranslateError> {
        Ok(self.sequence(nodes, st)?.render(self.mult()))
    }

    /// Translates a group node (visiting it) to text.
    fn group_text(&self, group: &PomNode, st: &mut State) -> Result<String, TranslateError> {
        st.visit(group);
        self.sequence_text(&group.children, st)
    }

    /// A script argument: a braced group or a single leaf.
    fn script_text(&self, child: &PomNode, st: &mut State) -> Result<String, TranslateError> {
        if child.kind == NodeKind::Sequence {
            self.group_text(child, st)
        } else {
            self.sequence_text(std::slice::from_ref(child), st)
        }
    }

    fn node<'n>(
        &self,
        n: &'n PomNode,
        siblings: &mut Siblings<'n>,
        teo: &mut TeoList,
        st: &mut State,
    ) -> Result<(), TranslateError> {
        st.visit(n);
        match n.kind {
            NodeKind::Sequence => {
                let inner = self.sequence(&n.children, st)?;
                if let Some(f) = inner.into_fragment(self.mult(), true) {
                    teo.push(f);
                }
            }
            NodeKind::BalancedExpression => {
                let inner = self.sequence_text(&n.children, st)?;
                let f = match n.text.as_str() {
                    "|" => Fragment::operand(self.call("abs", "Abs", &[inner])),
                    _ => Fragment::parenthesized(&inner),
                };
                teo.push(f);
            }
            NodeKind::Fraction => {
                let num = self.group_text(&n.children[0], st)?;
                let den = self.group_text(&n.children[1], st)?;
                teo.push(Fragment {
                    text: format!("({num})/({den})"),
                    role: Role::Operand,
                    grouped: false,
                    power: None,
                });
            }
            NodeKind::Binomial => {
                let a = self.group_text(&n.children[0], st)?;
                let b = self.group_text(&n.children[1], st)?;
                teo.push(Fragment::operand(self.call("binomial", "Binomial", &[a, b])));
            }
            NodeKind::SquareRoot => {
                let a = self.group_text(&n.children[0], st)?;
                teo.push(Fragment::operand(self.call("sqrt", "Sqrt", &[a])));
            }
            NodeKind::Radical => {
                let k = self.group_text(&n.children[0], st)?;
                let a = self.group_text(&n.children[1], st)?;
                teo.push(Fragment::with_role(format!("({a})^(1/({k}))"), Role::Operand));
            }
            NodeKind::Caret => {
                let base = teo.pop_operand().ok_or_else(|| TranslateError::MissingOperand {
                    symbol: "^".into(),
                })?;
                let exp = self.script_text(&n.children[0], st)?;
                teo.push(power_fragment(base, exp));
            }
            NodeKind::Underscore => {
                let base = teo.pop_operand().ok_or_else(|| TranslateError::MissingOperand {
                    symbol: "_".into(),
                })?;
                let sub = self.script_text(&n.children[0], st)?;
                let text = if self.maple() {
                    format!("{}[{sub}]", wrap_unless(&base.text, base.grouped))
                } else {
                    format!("Subscript[{},{sub}]", base.text)
                };
                teo.push(Fragment::operand(text));
            }
            NodeKind::SemanticMacro => {
                let f = self.semantic_macro(n, siblings, st)?;
                teo.push(f);
            }
            NodeKind::GenericMacro => teo.push(self.generic_macro(n)?),
            NodeKind::Alphanumeric => {
                for run in alphanumeric_runs(&n.text) {
                    teo.push(Fragment::operand(run));
                }
            }
            NodeKind::Number => teo.push(Fragment::operand(n.text.clone())),
            NodeKind::Symbol => self.symbol(n, siblings, teo, st)?,
            NodeKind::At => return Err(TranslateError::StrayAt),
        }
        Ok(())
    }

    fn call(&self, maple: &str, mathematica: &str, args: &[String]) -> String {
        if self.maple() {
            format!("{maple}({})", args.join(","))
        } else {
            format!("{mathematica}[{}]", args.join(","))
        }
    }

    fn generic_macro(&self, n: &PomNode) -> Result<Fragment, TranslateError> {
        let name = n.macro_name().unwrap_or_default();
        let maple = self.maple();
        let rel = |m: &str, w: &str| {
            Fragment::with_role(format!(" {} ", if maple { m } else { w }), Role::Relation)
        };
        Ok(match name {
            "idot" | "cdot" | "times" => Fragment::with_role(self.mult(), Role::Operator),
            "leq" | "le" => rel("<=", "<="),
            "geq" | "ge" => rel(">=", ">="),
            "neq" | "ne" => rel("<>", "!="),
            "infty" => Fragment::operand(if maple { "infinity" } else { "Infinity" }),
            "ldots" | "cdots" | "dots" => Fragment::with_role("...", Role::Ellipsis),
            "{" | "}" => {
                return Err(TranslateError::UnsupportedSymbol {
                    symbol: n.text.clone(),
                })
            }
            _ => {
                return Err(TranslateError::UnknownMacro {
                    name: name.to_string(),
                })
            }
        })
    }

    fn symbol<'n>(
        &self,
        n: &'n PomNode,
        siblings: &mut Siblings<'n>,
        teo: &mut TeoList,
        st: &mut State,
    ) -> Result<(), TranslateError> {
        let s = n.text.as_str();
        match s {
            "(" | "[" => {
                let inner = collect_balanced(s, siblings, st)?;
                let text = self.sequence_text(&inner, st)?;
                teo.push(Fragment::parenthesized(&text));
            }
            ")" | "]" => {
                return Err(TranslateError::UnopenedParenthesis { close: s.into() });
            }
            "|" => {
                let mut inner = Vec::new();
                loop {
                    let Some(m) = siblings.pop_front() else {
                        return Err(TranslateError::UnclosedParenthesis { open: "|".into() });
                    };
                    st.visit(m);
                    if m.is_symbol("|") {
                        break;
                    }
                    inner.push(m.clone());
                }
                // Inner nodes are re-visited through `sequence`; undo the first count.
                for m in &inner {
                    unvisit(m, st);
                }
                let text = self.sequence_text(&inner, st)?;
                teo.push(Fragment::operand(self.call("abs", "Abs", &[text])));
            }
            "!" => {
                let double = siblings.front().is_some_and(|m| m.is_symbol("!"));
                if double {
                    let m = siblings.pop_front().expect("checked");
                    st.visit(m);
                }
                let operand = teo.pop_operand().ok_or_else(|| TranslateError::MissingOperand {
                    symbol: if double { "!!" } else { "!" }.into(),
                })?;
                let arg = match &operand.power {
                    Some((b, e)) => format!("({b})^({e})"),
                    None => strip_outer_parens(&operand.text).to_string(),
                };
                let (m, w) = if double {
                    ("doublefactorial", "Factorial2")
                } else {
                    ("factorial", "Factorial")
                };
                teo.push(Fragment::operand(self.call(m, w, &[arg])));
            }
            "+" | "-" | "/" | "*" => teo.push(Fragment::with_role(s, Role::Operator)),
            "," => teo.push(Fragment::with_role(",", Role::Operator)),
            "=" => teo.push(Fragment::with_role(
                if self.maple() { " = " } else { " == " },
                Role::Relation,
            )),
            "<" | ">" => teo.push(Fragment::with_role(format!(" {s} "), Role::Relation)),
            _ => return Err(TranslateError::UnsupportedSymbol { symbol: s.into() }),
        }
        Ok(())
    }

    fn semantic_macro<'n>(
        &self,
        n: &'n PomNode,
        siblings: &mut Siblings<'n>,
        st: &mut State,
    ) -> Result<Fragment, TranslateError> {
        let name = n.macro_name().unwrap_or_default().to_string();
        let tagged = n.tag.as_ref().expect("semantic macro leaves are tagged");
        if tagged.is_symbol() && tagged.num_optional == 0 {
            let text = self.fill(tagged, &[], &[])?;
            st.trace.macros.push(MacroConsumption {
                node_id: n.id,
                macro_name: name,
                deferred_exponent: false,
                optional_groups: 0,
                params: 0,
                ats: 0,
                vars: 0,
            });
            return Ok(Fragment::operand(text));
        }

        let deferred = match siblings.front() {
            Some(c) if c.kind == NodeKind::Caret => {
                let c = siblings.pop_front().expect("checked");
                st.visit(c);
                Some(self.script_text(&c.children[0], st)?)
            }
            _ => None,
        };

        let mut args = Vec::new();
        while siblings.front().is_some_and(|m| m.is_symbol("[")) {
            let open = siblings.pop_front().expect("checked");
            st.visit(open);
            let inner = collect_balanced("[", siblings, st)?;
            args.push(self.sequence_text(&inner, st)?);
        }
        let optional_groups = args.len();
        let entry = self
            .lexicon
            .lookup(&name, optional_groups)
            .ok_or_else(|| TranslateError::NoVariant {
                name: name.clone(),
                optional: optional_groups,
            })?
            .clone();

        self.braced_args(&entry, entry.num_params, siblings, &mut args, st)?;
        let mut ats = 0;
        while siblings.front().is_some_and(|m| m.kind == NodeKind::At) {
            let at = siblings.pop_front().expect("checked");
            st.visit(at);
            ats += 1;
        }
        if ats > entry.num_ats {
            return Err(TranslateError::AtCount {
                name,
                allowed: entry.num_ats,
                found: ats,
            });
        }
        self.braced_args(&entry, entry.num_vars, siblings, &mut args, st)?;

        let grouped: Vec<bool> = args.iter().map(|a| is_self_delimiting(a)).collect();
        let text = self.fill(&entry, &args, &grouped)?;
        st.trace.macros.push(MacroConsumption {
            node_id: n.id,
            macro_name: name,
            deferred_exponent: deferred.is_some(),
            optional_groups,
            params: entry.num_params,
            ats,
            vars: entry.num_vars,
        });
        self.record(&entry, st);

        Ok(match deferred {
            Some(exp) => Fragment::with_role(format!("({text})^({exp})"), Role::Operand),
            None if is_self_delimiting(&text) => Fragment::operand(text),
            None => Fragment::parenthesized(&text),
        })
    }

    fn braced_args<'n>(
        &self,
        entry: &MacroEntry,
        count: usize,
        siblings: &mut Siblings<'n>,
        args: &mut Vec<String>,
        st: &mut State,
    ) -> Result<(), TranslateError> {
        for found in 0..count {
            match siblings.front() {
                Some(g) if g.kind == NodeKind::Sequence => {
                    let g = siblings.pop_front().expect("checked");
                    args.push(self.group_text(g, st)?);
                }
                _ => {
                    return Err(TranslateError::MissingArgument {
                        name: entry.macro_name.clone(),
                        expected: count,
                        found,
                    })
                }
            }
        }
        Ok(())
    }

    fn fill(
        &self,
        entry: &MacroEntry,
        args: &[String],
        grouped: &[bool],
    ) -> Result<String, TranslateError> {
        let tp = entry
            .target(self.target)
            .ok_or_else(|| TranslateError::NoPattern {
                name: entry.macro_name.clone(),
                target: self.target,
            })?;
        tp.pattern
            .compact()
            .fill_guarded(args, |i| !grouped.get(i).copied().unwrap_or(true))
            .map_err(|source| TranslateError::Pattern {
                name: entry.macro_name.clone(),
                source,
            })
    }

    fn record(&self, entry: &MacroEntry, st: &mut State) {
        let tp = entry.target(self.target).expect("pattern checked by fill");
        st.info.push(InfoRecord {
            macro_name: entry.macro_name.clone(),
            meaning: entry.meaning.clone(),
            dlmf_link: entry.dlmf_link.clone(),
            target_link: tp.link.clone(),
            chosen_pattern: tp.source.clone(),
            alternatives_not_taken: tp.alternatives.iter().map(|a| a.source.clone()).collect(),
            branch_cut_note: tp.note.clone(),
        });
    }
}

fn wrap_unless(text: &str, grouped: bool) -> String {
    if grouped {
        text.to_string()
    } else {
        format!("({text})")
    }
}

fn power_fragment(base: Fragment, exp: String) -> Fragment {
    let exp_text = if is_atom(&exp) { exp.clone() } else { format!("({exp})") };
    Fragment {
        text: format!("{}^{exp_text}", wrap_unless(&base.text, base.grouped)),
        role: Role::Operand,
        grouped: false,
        power: Some((strip_outer_parens(&base.text).to_string(), exp)),
    }
}

/// `b4x12` → `b`, `4`, `x`, `12`.
fn alphanumeric_runs(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in text.chars() {
        match out.last_mut() {
            Some(last) if c.is_ascii_digit() && last.chars().all(|d| d.is_ascii_digit()) => {
                last.push(c)
            }
            _ => out.push(c.to_string()),
        }
    }
    out
}

fn closer_of(open: &str) -> &'static str {
    match open {
        "(" => ")",
        _ => "]",
    }
}

/// Pops siblings up to the bracket matching `open` (already consumed); the closing
/// bracket is consumed and the enclosed nodes returned.
fn collect_balanced<'n>(
    open: &str,
    siblings: &mut Siblings<'n>,
    st: &mut State,
) -> Result<Vec<PomNode>, TranslateError> {
    let mut stack = vec![open.to_string()];
    let mut inner = Vec::new();
    while let Some(m) = siblings.pop_front() {
        if m.kind == NodeKind::Symbol {
            match m.text.as_str() {
                "(" | "[" => stack.push(m.text.clone()),
                c @ (")" | "]") => {
                    let top = stack.pop().expect("non-empty while collecting");
                    if closer_of(&top) != c {
                        return Err(TranslateError::MismatchedParentheses {
                            open: top,
                            close: c.into(),
                        });
                    }
                    if stack.is_empty() {
                        st.visit(m);
                        return Ok(inner);
                    }
                }
                _ => {}
            }
        }
        inner.push(m.clone());
    }
    Err(TranslateError::UnclosedParenthesis { open: open.into() })
}

fn unvisit(n: &PomNode, st: &mut State) {
    if let Some(c) = st.trace.visits.get_mut(&n.id) {
        *c -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(s: &str, t: Target) -> Result<String, TranslateError> {
        let lex = Lexicon::bundled();
        Translator::new(&lex, t).translate_str(s).map(|r| r.output)
    }

    fn maple(s: &str) -> String {
        tr(s, Target::Maple).unwrap()
    }

    #[test]
    fn jacobi_both_targets() {
        let s = "\\JacobiP{\\alpha}{\\beta}{n}@{\\cos@{a\\Theta}}";
        assert_eq!(maple(s), "JacobiP(n,alpha,beta,cos(a*Theta))");
        assert_eq!(
            tr(s, Target::Mathematica).unwrap(),
            "JacobiP[n,\\[Alpha],\\[Beta],Cos[a \\[CapitalTheta]]]"
        );
    }

    #[test]
    fn shifted_exponents() {
        assert_eq!(maple("\\cos^n@{x}^m"), "((cos(x))^(n))^m");
        assert_eq!(maple("\\cos@{x}^2"), "cos(x)^2");
        assert_eq!(maple("\\sin^2@{x}"), "(sin(x))^(2)");
    }

    #[test]
    fn variants_and_at_counts() {
        assert_eq!(maple("\\LegendreP[\\mu]{\\nu}@{x}"), "LegendreP(nu,mu,x)");
        assert_eq!(maple("\\LegendreP{\\nu}@{x}"), "LegendreP(nu,x)");
        assert_eq!(maple("\\sin@@{z}"), "sin(z)");
        assert_eq!(maple("\\sin@{z}"), "sin(z)");
        assert!(matches!(
            tr("\\sin@@@{z}", Target::Maple),
            Err(TranslateError::AtCount { found: 3, .. })
        ));
        assert!(matches!(
            tr("\\LegendreP[a][b]{\\nu}@{x}", Target::Maple),
            Err(TranslateError::NoVariant { optional: 2, .. })
        ));
    }

    #[test]
    fn sequences() {
        assert_eq!(maple("2n\\pi"), "2*n*pi");
        assert_eq!(maple("energy"), "e*n*e*r*g*y");
        assert_eq!(maple("f(x)"), "f*(x)");
        assert_eq!(maple("4b"), "4*b");
        assert_eq!(maple("b4"), "b*4");
        assert_eq!(maple("a\\idot b"), "a*b");
        assert_eq!(maple("a \\cdot b"), "a*b");
        assert_eq!(tr("a\\idot b", Target::Mathematica).unwrap(), "a b");
    }

    #[test]
    fn postfix() {
        assert_eq!(maple("n!"), "factorial(n)");
        assert_eq!(maple("n!!"), "doublefactorial(n)");
        assert_eq!(maple("n!!!"), "factorial(doublefactorial(n))");
        assert_eq!(maple("n^m!"), "factorial((n)^(m))");
        assert_eq!(maple("(n+1)!"), "factorial(n+1)");
        assert!(matches!(tr("!", Target::Maple), Err(TranslateError::MissingOperand { .. })));
    }

    #[test]
    fn parentheses() {
        assert!(matches!(
            tr("(a]", Target::Maple),
            Err(TranslateError::MismatchedParentheses { .. })
        ));
        assert!(matches!(tr("(a", Target::Maple), Err(TranslateError::UnclosedParenthesis { .. })));
        assert!(matches!(tr("a)", Target::Maple), Err(TranslateError::UnopenedParenthesis { .. })));
    }

    #[test]
    fn fractions_and_patterns() {
        assert_eq!(maple("\\frac{\\cos@{a\\Theta}}{2}"), "(cos(a*Theta))/(2)");
        assert_eq!(maple("\\Gudermannian{x}"), "arctan(sinh(x))");
        assert_eq!(maple("\\deriv[2]{x^2}{x}"), "diff(x^2, [x$2])");
        assert_eq!(maple("\\EllIntF@{\\phi}{k}"), "EllipticF(sin(phi),k)");
        assert_eq!(maple("x^{n+1}"), "x^(n+1)");
        assert_eq!(maple("\\sqrt{x}"), "sqrt(x)");
        assert_eq!(maple("\\expe^{x}"), "exp(1)^x");
        assert_eq!(maple("\\left(u+v\\right)^2"), "(u+v)^2");
    }

    #[test]
    fn unknown_macro_is_named() {
        let e = tr("\\NoSuch{x}", Target::Maple).unwrap_err();
        assert_eq!(e, TranslateError::UnknownMacro { name: "NoSuch".into() });
        assert!(e.to_string().contains("\\NoSuch"));
    }

    #[test]
    fn arccot_alternatives_logged() {
        let lex = Lexicon::bundled();
        let r = Translator::new(&lex, Target::Maple).translate_str("\\acot@{z}").unwrap();
        assert_eq!(r.output, "arccot(z)");
        let info = &r.info_log[0];
        assert_eq!(info.chosen_pattern, "arccot($0)");
        assert_eq!(info.alternatives_not_taken, ["arctan(1/$0)", "I/2*ln(($0-I)/($0+I))"]);
        assert!(info.branch_cut_note.is_some());
    }

    #[test]
    fn every_node_translated_once() {
        let lex = Lexicon::bundled();
        let t = Translator::new(&lex, Target::Maple);
        for s in [
            "\\JacobiP{\\alpha}{\\beta}{n}@{\\cos@{a\\Theta}}",
            "\\cos^n@{x}^m + (a+[b])!",
            "\\LegendreP[\\mu]{\\nu}@{x} = \\frac{1}{2}\\sqrt[3]{y_1}",
            "|x|+\\left|y\\right|",
        ] {
            let root = parse_str(s, &lex).unwrap();
            let (_, trace) = t.translate_traced(&root).unwrap();
            let mut ids = Vec::new();
            root.walk(&mut |n| ids.push(n.id));
            for id in ids {
                assert_eq!(trace.visits.get(&id), Some(&1), "node {id} of {s}");
            }
        }
    }
}
