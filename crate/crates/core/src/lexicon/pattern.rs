//! Placeholder patterns such as `JacobiP($2, $0, $1, $3)`.
//!
//! `$i` is a slot with maximal-munch digits, `$(i)` is the same slot written so that
//! digits may follow it. `$(...)` around anything that is not a plain index stands for
//! a literal dollar sign followed by the enclosed pattern text; this is how Maple's
//! sequence operator is written, e.g. `diff($1, [$2$($0)])`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("`$` at byte {0} must be followed by a digit or `(`")]
    BareDollar(usize),
    #[error("unclosed `$(` starting at byte {0}")]
    Unclosed(usize),
    #[error("slot index at byte {0} does not fit in an integer")]
    IndexOverflow(usize),
    #[error("no argument supplied for slot ${slot} ({given} given)")]
    MissingArgument { slot: usize, given: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Literal(String),
    Slot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TranslationPattern {
    segments: Vec<Segment>,
}

/// Whether the text around a slot already separates it from neighbouring operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotContext {
    pub index: usize,
    pub delimited: bool,
}

impl TranslationPattern {
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let mut segments = Vec::new();
        parse_into(text, 0, &mut segments)?;
        Ok(Self::from_segments(segments))
    }

    /// Builds a pattern, merging adjacent literals and dropping empty ones.
    pub fn from_segments(raw: Vec<Segment>) -> Self {
        let mut segments: Vec<Segment> = Vec::with_capacity(raw.len());
        for seg in raw {
            match seg {
                Segment::Literal(s) if s.is_empty() => {}
                Segment::Literal(s) => match segments.last_mut() {
                    Some(Segment::Literal(prev)) => prev.push_str(&s),
                    _ => segments.push(Segment::Literal(s)),
                },
                slot => segments.push(slot),
            }
        }
        Self { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(i) => Some(*i),
            Segment::Literal(_) => None,
        })
    }

    pub fn max_slot(&self) -> Option<usize> {
        self.slots().max()
    }

    /// Replaces every slot with the corresponding argument; literals are copied verbatim.
    pub fn fill<S: AsRef<str>>(&self, args: &[S]) -> Result<String, PatternError> {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Literal(s) => out.push_str(s),
                Segment::Slot(i) => {
                    let arg = args.get(*i).ok_or(PatternError::MissingArgument {
                        slot: *i,
                        given: args.len(),
                    })?;
                    out.push_str(arg.as_ref());
                }
            }
        }
        Ok(out)
    }

    /// The emission form used by the translator: whitespace between a comma and a
    /// following slot is dropped, so `f($0, $1)` emits `f(a,b)`. Other literal text
    /// (e.g. the `, [` in `diff($1, [$2$($0)])`) is untouched.
    pub fn compact(&self) -> Self {
        let mut segments = self.segments.clone();
        for i in 0..segments.len() {
            let next_is_slot = matches!(segments.get(i + 1), Some(Segment::Slot(_)));
            if let Segment::Literal(s) = &mut segments[i] {
                if next_is_slot {
                    let trimmed = s.trim_end_matches([' ', '\t']);
                    if trimmed.ends_with(',') {
                        s.truncate(trimmed.len());
                    }
                }
            }
        }
        Self::from_segments(segments)
    }

    /// For each slot occurrence, whether it sits between argument separators
    /// (`(`, `[`, `{`, `,` on the left and `)`, `]`, `}`, `,` on the right) or at a
    /// pattern boundary.
    pub fn slot_contexts(&self) -> Vec<SlotContext> {
        let mut out = Vec::new();
        for (pos, seg) in self.segments.iter().enumerate() {
            let Segment::Slot(index) = seg else { continue };
            let left = match pos.checked_sub(1).map(|p| &self.segments[p]) {
                None => true,
                Some(Segment::Literal(s)) => {
                    matches!(s.trim_end().chars().last(), Some('(' | '[' | '{' | ','))
                }
                Some(Segment::Slot(_)) => false,
            };
            let right = match self.segments.get(pos + 1) {
                None => true,
                Some(Segment::Literal(s)) => {
                    matches!(s.trim_start().chars().next(), Some(')' | ']' | '}' | ','))
                }
                Some(Segment::Slot(_)) => false,
            };
            out.push(SlotContext {
                index: *index,
                delimited: left && right,
            });
        }
        out
    }

    /// Fills the pattern, wrapping an argument in parentheses when the slot is not
    /// delimited and `needs_parens(i)` says the argument is not self-delimiting.
    pub fn fill_guarded<S: AsRef<str>>(
        &self,
        args: &[S],
        needs_parens: impl Fn(usize) -> bool,
    ) -> Result<String, PatternError> {
        let contexts = self.slot_contexts();
        let mut ctx = contexts.iter();
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Literal(s) => out.push_str(s),
                Segment::Slot(i) => {
                    let delimited = ctx.next().map(|c| c.delimited).unwrap_or(true);
                    let arg = args.get(*i).ok_or(PatternError::MissingArgument {
                        slot: *i,
                        given: args.len(),
                    })?;
                    if !delimited && needs_parens(*i) {
                        out.push('(');
                        out.push_str(arg.as_ref());
                        out.push(')');
                    } else {
                        out.push_str(arg.as_ref());
                    }
                }
            }
        }
        Ok(out)
    }

    /// If the pattern is exactly `name(s0, s1, ...)` with every argument a distinct
    /// bare slot, returns the name and the slot held by each call position.
    pub fn as_simple_call(&self) -> Option<(String, Vec<usize>)> {
        let segs = &self.segments;
        let Some(Segment::Literal(head)) = segs.first() else {
            return None;
        };
        let name = head.strip_suffix('(')?;
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        let mut order = Vec::new();
        let mut i = 1;
        loop {
            match segs.get(i) {
                Some(Segment::Slot(s)) => order.push(*s),
                _ => return None,
            }
            match segs.get(i + 1) {
                Some(Segment::Literal(sep)) if sep.trim() == "," => i += 2,
                Some(Segment::Literal(close)) if close.trim() == ")" && i + 2 == segs.len() => {
                    break;
                }
                _ => return None,
            }
        }
        let mut seen = order.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != order.len() || seen.iter().enumerate().any(|(k, s)| k != *s) {
            return None;
        }
        Some((name.to_string(), order))
    }

    /// Number of top-level arguments if the pattern text has the shape `name(...)`.
    pub fn head_call(&self) -> Option<(String, usize)> {
        let text = self.to_string();
        let open = text.find('(')?;
        let name = &text[..open];
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        let mut depth = 0usize;
        let mut args = 1;
        for (k, c) in text[open..].char_indices() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => {
                    depth -= 1;
                    if depth == 0 {
                        if open + k + 1 != text.len() {
                            return None;
                        }
                        return Some((name.to_string(), args));
                    }
                }
                ',' if depth == 1 => args += 1,
                _ => {}
            }
        }
        None
    }
}

fn parse_into(text: &str, base: usize, out: &mut Vec<Segment>) -> Result<(), PatternError> {
    let bytes = text.as_bytes();
    let mut lit = String::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'$' {
            let ch = text[i..].chars().next().expect("in bounds");
            lit.push(ch);
            i += ch.len_utf8();
            continue;
        }
        let at = base + i;
        match bytes.get(i + 1) {
            Some(b) if b.is_ascii_digit() => {
                let end = i + 1 + bytes[i + 1..].iter().take_while(|b| b.is_ascii_digit()).count();
                let index = text[i + 1..end]
                    .parse()
                    .map_err(|_| PatternError::IndexOverflow(at))?;
                flush(&mut lit, out);
                out.push(Segment::Slot(index));
                i = end;
            }
            Some(b'(') => {
                let close = matching_paren(bytes, i + 1).ok_or(PatternError::Unclosed(at))?;
                let inner = &text[i + 2..close];
                flush(&mut lit, out);
                if !inner.is_empty() && inner.bytes().all(|b| b.is_ascii_digit()) {
                    let index = inner.parse().map_err(|_| PatternError::IndexOverflow(at))?;
                    out.push(Segment::Slot(index));
                } else {
                    out.push(Segment::Literal("$".into()));
                    parse_into(inner, base + i + 2, out)?;
                }
                i = close + 1;
            }
            _ => return Err(PatternError::BareDollar(at)),
        }
    }
    flush(&mut lit, out);
    Ok(())
}

fn flush(lit: &mut String, out: &mut Vec<Segment>) {
    if !lit.is_empty() {
        out.push(Segment::Literal(std::mem::take(lit)));
    }
}

fn matching_paren(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (k, b) in bytes.iter().enumerate().skip(open) {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
            _ => {}
        }
    }
    None
}

impl FromStr for TranslationPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Canonical source text: literal dollars become `$()`, and a slot followed by a
/// digit is written `$(i)`.
impl fmt::Display for TranslationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, seg) in self.segments.iter().enumerate() {
            match seg {
                Segment::Literal(s) => f.write_str(&s.replace('$', "$()"))?,
                Segment::Slot(i) => {
                    let digit_follows = match self.segments.get(k + 1) {
                        Some(Segment::Literal(s)) => {
                            s.starts_with(|c: char| c.is_ascii_digit())
                        }
                        _ => false,
                    };
                    if digit_follows {
                        write!(f, "$({i})")?;
                    } else {
                        write!(f, "${i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lit(s: &str) -> Segment {
        Segment::Literal(s.into())
    }

    #[test]
    fn jacobi_pattern_segments() {
        let p = TranslationPattern::parse("JacobiP($2, $0, $1, $3)").unwrap();
        assert_eq!(
            p.segments(),
            &[
                lit("JacobiP("),
                Segment::Slot(2),
                lit(", "),
                Segment::Slot(0),
                lit(", "),
                Segment::Slot(1),
                lit(", "),
                Segment::Slot(3),
                lit(")"),
            ]
        );
    }

    #[test]
    fn escaped_dollar_in_diff() {
        let p = TranslationPattern::parse("diff($1, [$2$($0)])").unwrap();
        assert_eq!(p.slots().collect::<Vec<_>>(), vec![1, 2, 0]);
        assert_eq!(p.fill(&["2", "x^2", "x"]).unwrap(), "diff(x^2, [x$2])");
    }

    #[test]
    fn parenthesised_index_allows_following_digits() {
        let p = TranslationPattern::parse("a$(1)2").unwrap();
        assert_eq!(p.segments(), &[lit("a"), Segment::Slot(1), lit("2")]);
        let q = TranslationPattern::parse("$2$3").unwrap();
        assert_eq!(q.segments(), &[Segment::Slot(2), Segment::Slot(3)]);
        let munch = TranslationPattern::parse("$12x").unwrap();
        assert_eq!(munch.segments(), &[Segment::Slot(12), lit("x")]);
    }

    #[test]
    fn no_slots() {
        let p = TranslationPattern::parse("abc").unwrap();
        assert_eq!(p.segments(), &[lit("abc")]);
        assert_eq!(p.fill::<&str>(&[]).unwrap(), "abc");
    }

    #[test]
    fn malformed_patterns() {
        assert_eq!(TranslationPattern::parse("a$b"), Err(PatternError::BareDollar(1)));
        assert_eq!(TranslationPattern::parse("x$"), Err(PatternError::BareDollar(1)));
        assert_eq!(TranslationPattern::parse("f($(0, x"), Err(PatternError::Unclosed(2)));
    }

    #[test]
    fn fill_reports_missing_slot() {
        let p = TranslationPattern::parse("sin($0)").unwrap();
        assert_eq!(p.fill(&["z"]).unwrap(), "sin(z)");
        assert_eq!(
            p.fill::<&str>(&[]),
            Err(PatternError::MissingArgument { slot: 0, given: 0 })
        );
    }

    #[test]
    fn compact_only_touches_slot_separators() {
        let p = TranslationPattern::parse("JacobiP($2, $0, $1, $3)").unwrap().compact();
        assert_eq!(p.fill(&["alpha", "beta", "n", "x"]).unwrap(), "JacobiP(n,alpha,beta,x)");
        let d = TranslationPattern::parse("diff($1, [$2$($0)])").unwrap().compact();
        assert_eq!(d.fill(&["2", "x^2", "x"]).unwrap(), "diff(x^2, [x$2])");
    }

    #[test]
    fn slot_contexts_and_guarded_fill() {
        let p = TranslationPattern::parse("arctan(1/$0)").unwrap();
        assert_eq!(p.slot_contexts(), vec![SlotContext { index: 0, delimited: false }]);
        assert_eq!(p.fill_guarded(&["x+1"], |_| true).unwrap(), "arctan(1/(x+1))");
        let q = TranslationPattern::parse("sin($0)").unwrap();
        assert_eq!(q.fill_guarded(&["x+1"], |_| true).unwrap(), "sin(x+1)");
    }

    #[test]
    fn simple_call_shape() {
        let p = TranslationPattern::parse("JacobiP($2, $0, $1, $3)").unwrap();
        assert_eq!(p.as_simple_call(), Some(("JacobiP".into(), vec![2, 0, 1, 3])));
        let g = TranslationPattern::parse("arctan(sinh($0))").unwrap();
        assert_eq!(g.as_simple_call(), None);
        assert_eq!(g.head_call(), Some(("arctan".into(), 1)));
        let e = TranslationPattern::parse("EllipticF(sin($0), $1)").unwrap();
        assert_eq!(e.head_call(), Some(("EllipticF".into(), 2)));
        assert_eq!(TranslationPattern::parse("I/2*ln(($0-I)/($0+I))").unwrap().head_call(), None);
    }

    #[test]
    fn display_escapes_literal_dollar() {
        let p = TranslationPattern::parse("diff($1, [$2$($0)])").unwrap();
        assert_eq!(p.to_string(), "diff($1, [$2$()$0])");
        assert_eq!(TranslationPattern::parse(&p.to_string()).unwrap(), p);
    }

    fn segment() -> impl Strategy<Value = Segment> {
        prop_oneof![
            "[a-z0-9(), $\\[\\]*^+-]{1,6}".prop_map(Segment::Literal),
            (0usize..12).prop_map(Segment::Slot),
        ]
    }

    fn plain_segment() -> impl Strategy<Value = Segment> {
        prop_oneof![
            "[a-z0-9(), \\[\\]*^+-]{1,6}".prop_map(Segment::Literal),
            (0usize..12).prop_map(Segment::Slot),
        ]
    }

    proptest! {
        #[test]
        fn display_then_parse_is_identity(raw in proptest::collection::vec(segment(), 0..8)) {
            let p = TranslationPattern::from_segments(raw);
            let again = TranslationPattern::parse(&p.to_string()).unwrap();
            prop_assert_eq!(again, p);
        }

        #[test]
        fn placeholder_fill_reproduces_source(raw in proptest::collection::vec(plain_segment(), 0..8)) {
            let p = TranslationPattern::from_segments(raw);
            let n = p.max_slot().map_or(0, |m| m + 1);
            let placeholders: Vec<String> = (0..n).map(|i| format!("${i}")).collect();
            let filled = p.fill(&placeholders).unwrap();
            // `$(i)` collapses to `$i` unless a digit follows the slot.
            let ambiguous = p.segments().windows(2).any(|w| {
                matches!(w, [Segment::Slot(_), Segment::Literal(l)] if l.starts_with(|c: char| c.is_ascii_digit()))
            });
            if !ambiguous {
                prop_assert_eq!(&filled, &p.to_string());
                prop_assert_eq!(TranslationPattern::parse(&filled).unwrap(), p);
            }
        }
    }
}
