//! Translated expression objects: the fragment list a sequence is translated into.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Operand,
    Operator,
    Relation,
    Ellipsis,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub text: String,
    pub role: Role,
    /// Self-delimiting: a single atom, a call, or wrapped in parentheses.
    pub grouped: bool,
    /// Base and exponent when the fragment is an inline power `b^e`.
    pub power: Option<(String, String)>,
}

impl Fragment {
    pub fn operand(text: impl Into<String>) -> Self {
        let text = text.into();
        let grouped = is_self_delimiting(&text);
        Self {
            text,
            role: Role::Operand,
            grouped,
            power: None,
        }
    }

    pub fn with_role(text: impl Into<String>, role: Role) -> Self {
        Self {
            text: text.into(),
            role,
            grouped: false,
            power: None,
        }
    }

    /// Wrapped in parentheses and marked grouped.
    pub fn parenthesized(text: &str) -> Self {
        Self {
            text: format!("({text})"),
            role: Role::Operand,
            grouped: true,
            power: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct TeoList {
    frags: Vec<Fragment>,
}

impl TeoList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: Fragment) {
        self.frags.push(f);
    }

    pub fn len(&self) -> usize {
        self.frags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frags.is_empty()
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.frags
    }

    /// Removes the last fragment if it is an operand.
    pub fn pop_operand(&mut self) -> Option<Fragment> {
        match self.frags.last() {
            Some(f) if f.role == Role::Operand => self.frags.pop(),
            _ => None,
        }
    }

    /// Concatenates the fragments, inserting `mult` between two adjacent operands.
    pub fn render(&self, mult: &str) -> String {
        let mut out = String::new();
        for (k, f) in self.frags.iter().enumerate() {
            if k > 0 && f.role == Role::Operand && self.frags[k - 1].role == Role::Operand {
                out.push_str(mult);
            }
            out.push_str(&f.text);
        }
        out
    }

    /// The list as one fragment: a lone fragment is kept as is, longer lists are
    /// rendered and, when `wrap` is set, parenthesized.
    pub fn into_fragment(mut self, mult: &str, wrap: bool) -> Option<Fragment> {
        match self.frags.len() {
            0 => None,
            1 => self.frags.pop(),
            _ => {
                let text = self.render(mult);
                Some(if wrap {
                    Fragment::parenthesized(&text)
                } else {
                    Fragment {
                        grouped: is_self_delimiting(&text),
                        text,
                        role: Role::Operand,
                        power: None,
                    }
                })
            }
        }
    }
}

/// Index of the bracket closing the one opened at byte `open`.
pub(crate) fn matching_close(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (k, c) in s[open..].char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(open + k);
                }
            }
            _ => {}
        }
    }
    None
}

/// A name, an unsigned number, or a Mathematica named character such as `\[Alpha]`.
pub fn is_atom(s: &str) -> bool {
    if let Some(inner) = s.strip_prefix("\\[").and_then(|r| r.strip_suffix(']')) {
        return !inner.is_empty() && inner.chars().all(|c| c.is_ascii_alphanumeric());
    }
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
        && !s.starts_with('.')
}

/// True when `s` needs no parentheses next to any operator.
pub fn is_self_delimiting(s: &str) -> bool {
    if is_atom(s) {
        return true;
    }
    if s.starts_with('(') {
        return matching_close(s, 0) == Some(s.len() - 1);
    }
    let Some(open) = s.find(['(', '[']) else {
        return false;
    };
    let head = &s[..open];
    !head.is_empty()
        && head.chars().all(|c| c.is_alphanumeric() || c == '_')
        && matching_close(s, open) == Some(s.len() - 1)
}

/// `(x)` → `x` when the outer parentheses enclose everything.
pub fn strip_outer_parens(s: &str) -> &str {
    if s.starts_with('(') && matching_close(s, 0) == Some(s.len() - 1) {
        &s[1..s.len() - 1]
    } else {
        s
    }
}
