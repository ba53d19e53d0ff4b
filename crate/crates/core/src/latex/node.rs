use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::lexicon::MacroEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    Sequence,
    BalancedExpression,
    Fraction,
    Binomial,
    SquareRoot,
    Radical,
    Underscore,
    Caret,
    SemanticMacro,
    GenericMacro,
    Alphanumeric,
    Number,
    Symbol,
    At,
}

impl NodeKind {
    pub fn is_leaf(self) -> bool {
        matches!(
            self,
            NodeKind::SemanticMacro
                | NodeKind::GenericMacro
                | NodeKind::Alphanumeric
                | NodeKind::Number
                | NodeKind::Symbol
                | NodeKind::At
        )
    }
}

/// A node of the parse tree. Macro arguments are following siblings of the macro
/// leaf, never its children.
#[derive(Debug, Clone)]
pub struct PomNode {
    pub kind: NodeKind,
    /// Source lexeme for leaves; the opening delimiter for groups (`{`, `(` after
    /// `\left`, or empty for the root).
    pub text: String,
    /// Closing delimiter of a `\left ... \right` pair.
    pub close: String,
    pub children: Vec<PomNode>,
    pub tag: Option<Arc<MacroEntry>>,
    /// Whitespace preceded this node in the source.
    pub space_before: bool,
    /// Unique within one parse, assigned in pre-order.
    pub id: usize,
}

impl PomNode {
    pub(crate) fn new(kind: NodeKind, text: impl Into<String>) -> Self {
        Self {
            kind,
            text: text.into(),
            close: String::new(),
            children: Vec::new(),
            tag: None,
            space_before: false,
            id: 0,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.kind.is_leaf()
    }

    /// Command name without the backslash, for macro leaves.
    pub fn macro_name(&self) -> Option<&str> {
        match self.kind {
            NodeKind::SemanticMacro | NodeKind::GenericMacro => self.text.strip_prefix('\\'),
            _ => None,
        }
    }

    pub fn is_symbol(&self, s: &str) -> bool {
        self.kind == NodeKind::Symbol && self.text == s
    }

    pub fn is_braced(&self) -> bool {
        self.kind == NodeKind::Sequence && self.text == "{"
    }

    /// Number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PomNode::size).sum::<usize>()
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a PomNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub(crate) fn number(&mut self, next: &mut usize) {
        self.id = *next;
        *next += 1;
        for c in &mut self.children {
            c.number(next);
        }
    }

    /// Indented one-node-per-line dump.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let _ = write!(out, "{:width$}{:?}", "", self.kind, width = depth * 2);
        if !self.text.is_empty() {
            let _ = write!(out, " {:?}", self.text);
        }
        if !self.close.is_empty() {
            let _ = write!(out, " .. {:?}", self.close);
        }
        if let Some(tag) = &self.tag {
            let _ = write!(
                out,
                " [params={} ats={} vars={}]",
                tag.num_params, tag.num_ats, tag.num_vars
            );
        }
        out.push('\n');
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind, "text": self.text });
        if !self.close.is_empty() {
            v["close"] = json!(self.close);
        }
        if self.space_before {
            v["space_before"] = json!(true);
        }
        if let Some(tag) = &self.tag {
            v["macro"] = json!({
                "name": tag.macro_name,
                "params": tag.num_params,
                "ats": tag.num_ats,
                "vars": tag.num_vars,
                "meaning": tag.meaning,
            });
        }
        if !self.children.is_empty() {
            v["children"] = Value::Array(self.children.iter().map(PomNode::to_json).collect());
        }
        v
    }
}

/// Structural equality ignoring ids, spacing and lexicon tags.
impl PartialEq for PomNode {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.text == other.text
            && self.close == other.close
            && self.children == other.children
    }
}
