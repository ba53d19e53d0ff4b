use crate::lexicon::Lexicon;

use super::node::{NodeKind, PomNode};
use super::tokenizer::{tokenize, Token, TokenClass};
use super::LatexError;

const SPACING: &[&str] = &["\\,", "\\;", "\\:", "\\!", "\\ ", "\\quad", "\\qquad"];
const FRACTIONS: &[&str] = &["\\frac", "\\dfrac", "\\tfrac", "\\ifrac", "\\cfrac"];
const BINOMIALS: &[&str] = &["\\binom", "\\dbinom", "\\tbinom"];

pub fn parse_str(input: &str, lexicon: &Lexicon) -> Result<PomNode, LatexError> {
    parse(&tokenize(input)?, lexicon)
}

/// Parses tokens into a `Sequence` root. Node ids are assigned in pre-order.
pub fn parse(tokens: &[Token], lexicon: &Lexicon) -> Result<PomNode, LatexError> {
    let mut items = Vec::with_capacity(tokens.len());
    let mut space = false;
    for t in tokens {
        if t.is(TokenClass::Whitespace) || SPACING.contains(&t.lexeme.as_str()) {
            space = true;
            continue;
        }
        items.push(Item {
            tok: t.clone(),
            space_before: std::mem::take(&mut space),
        });
    }
    let mut p = Parser {
        items,
        pos: 0,
        lexicon,
    };
    let children = p.sequence(Until::End)?;
    let mut root = PomNode::new(NodeKind::Sequence, "");
    root.children = children;
    root.number(&mut 0);
    Ok(root)
}

struct Item {
    tok: Token,
    space_before: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Until {
    End,
    Brace(usize),
    Right(usize),
}

struct Parser<'a> {
    items: Vec<Item>,
    pos: usize,
    lexicon: &'a Lexicon,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.items.get(self.pos).map(|i| &i.tok)
    }

    fn end_offset(&self) -> usize {
        self.items.last().map_or(0, |i| i.tok.offset + i.tok.lexeme.len())
    }

    fn sequence(&mut self, until: Until) -> Result<Vec<PomNode>, LatexError> {
        let mut out: Vec<PomNode> = Vec::new();
        loop {
            let Some(tok) = self.peek().cloned() else {
                return match until {
                    Until::End => Ok(out),
                    Until::Brace(offset) => Err(LatexError::UnclosedBrace { offset }),
                    Until::Right(offset) => Err(LatexError::MissingRight { offset }),
                };
            };
            let offset = tok.offset;
            match (tok.class, tok.lexeme.as_str()) {
                (TokenClass::BraceClose, _) => {
                    if let Until::Brace(_) = until {
                        self.pos += 1;
                        return Ok(out);
                    }
                    return Err(LatexError::UnexpectedBrace { offset });
                }
                (TokenClass::Command, "\\right") => {
                    if let Until::Right(_) = until {
                        return Ok(out);
                    }
                    return Err(LatexError::UnexpectedRight { offset });
                }
                (TokenClass::Symbol, s @ ("^" | "_")) => {
                    let caret = s == "^";
                    let kind = if caret { NodeKind::Caret } else { NodeKind::Underscore };
                    let clash = out
                        .iter()
                        .rev()
                        .take_while(|n| matches!(n.kind, NodeKind::Caret | NodeKind::Underscore))
                        .any(|n| n.kind == kind);
                    if clash {
                        return Err(if caret {
                            LatexError::DoubleSuperscript { offset }
                        } else {
                            LatexError::DoubleSubscript { offset }
                        });
                    }
                    let space = self.items[self.pos].space_before;
                    self.pos += 1;
                    let child = self.single_argument(s)?;
                    let mut node = PomNode::new(kind, s);
                    node.space_before = space;
                    node.children.push(child);
                    out.push(node);
                }
                _ => out.push(self.atom()?),
            }
        }
    }

    /// One token (the first character of a letter or digit run) or one braced group.
    fn single_argument(&mut self, command: &str) -> Result<PomNode, LatexError> {
        let missing = || LatexError::MissingArgument {
            command: command.to_string(),
            offset: 0,
        };
        let Some(tok) = self.peek().cloned() else {
            return Err(LatexError::MissingArgument {
                command: command.to_string(),
                offset: self.end_offset(),
            });
        };
        match tok.class {
            TokenClass::LetterRun | TokenClass::DigitRun => {
                let first = tok.lexeme.chars().next().ok_or_else(missing)?;
                let rest = &tok.lexeme[first.len_utf8()..];
                let kind = if first.is_ascii_digit() {
                    NodeKind::Number
                } else {
                    NodeKind::Alphanumeric
                };
                let mut node = PomNode::new(kind, first.to_string());
                node.space_before = self.items[self.pos].space_before;
                if rest.is_empty() {
                    self.pos += 1;
                } else {
                    // The remainder stays in the stream as its own token.
                    let item = &mut self.items[self.pos];
                    item.tok.offset += first.len_utf8();
                    item.tok.class = if rest.starts_with(|c: char| c.is_ascii_digit()) {
                        TokenClass::DigitRun
                    } else {
                        TokenClass::LetterRun
                    };
                    item.tok.lexeme = rest.to_string();
                    item.space_before = false;
                }
                Ok(node)
            }
            TokenClass::BraceClose | TokenClass::Whitespace => Err(LatexError::MissingArgument {
                command: command.to_string(),
                offset: tok.offset,
            }),
            TokenClass::Symbol if matches!(tok.lexeme.as_str(), "^" | "_") => {
                Err(LatexError::MissingArgument {
                    command: command.to_string(),
                    offset: tok.offset,
                })
            }
            _ => self.atom(),
        }
    }

    /// Argument of `\frac`, `\sqrt`, ...; always returned as a `Sequence`.
    fn group_argument(&mut self, command: &str) -> Result<PomNode, LatexError> {
        let node = self.single_argument(command)?;
        if node.kind == NodeKind::Sequence {
            return Ok(node);
        }
        let mut seq = PomNode::new(NodeKind::Sequence, "");
        seq.space_before = node.space_before;
        seq.children.push(node);
        Ok(seq)
    }

    fn atom(&mut self) -> Result<PomNode, LatexError> {
        let item = &self.items[self.pos];
        let tok = item.tok.clone();
        let space = item.space_before;
        self.pos += 1;
        let mut node = match tok.class {
            TokenClass::BraceOpen => {
                let mut seq = PomNode::new(NodeKind::Sequence, "{");
                seq.children = self.sequence(Until::Brace(tok.offset))?;
                seq
            }
            TokenClass::BraceClose => return Err(LatexError::UnexpectedBrace { offset: tok.offset }),
            TokenClass::LetterRun => PomNode::new(NodeKind::Alphanumeric, tok.lexeme),
            TokenClass::DigitRun => PomNode::new(NodeKind::Number, tok.lexeme),
            TokenClass::At => PomNode::new(NodeKind::At, tok.lexeme),
            TokenClass::Command => self.command(&tok)?,
            TokenClass::Symbol
            | TokenClass::BracketOpen
            | TokenClass::BracketClose
            | TokenClass::Whitespace => PomNode::new(NodeKind::Symbol, tok.lexeme),
        };
        node.space_before = space;
        Ok(node)
    }

    fn command(&mut self, tok: &Token) -> Result<PomNode, LatexError> {
        let name = tok.lexeme.as_str();
        if FRACTIONS.contains(&name) || BINOMIALS.contains(&name) {
            let kind = if FRACTIONS.contains(&name) {
                NodeKind::Fraction
            } else {
                NodeKind::Binomial
            };
            let mut node = PomNode::new(kind, name);
            node.children.push(self.group_argument(name)?);
            node.children.push(self.group_argument(name)?);
            return Ok(node);
        }
        if name == "\\sqrt" {
            if self.peek().is_some_and(|t| t.is(TokenClass::BracketOpen)) {
                let open = self.peek().map_or(0, |t| t.offset);
                self.pos += 1;
                let index = self.bracket_group(open)?;
                let mut node = PomNode::new(NodeKind::Radical, name);
                node.children.push(index);
                node.children.push(self.group_argument(name)?);
                return Ok(node);
            }
            let mut node = PomNode::new(NodeKind::SquareRoot, name);
            node.children.push(self.group_argument(name)?);
            return Ok(node);
        }
        if name == "\\left" {
            let open = self.delimiter(name, tok.offset)?;
            let children = self.sequence(Until::Right(tok.offset))?;
            let right_offset = self.peek().map_or(0, |t| t.offset);
            self.pos += 1;
            let close = self.delimiter("\\right", right_offset)?;
            let mut node = PomNode::new(NodeKind::BalancedExpression, open);
            node.close = close;
            node.children = children;
            return Ok(node);
        }
        if name == "\\right" {
            return Err(LatexError::UnexpectedRight { offset: tok.offset });
        }
        let bare = &name[1..];
        match self.lexicon.any_variant(bare) {
            Some(entry) => {
                let mut node = PomNode::new(NodeKind::SemanticMacro, name);
                node.tag = Some(entry.clone());
                Ok(node)
            }
            None => Ok(PomNode::new(NodeKind::GenericMacro, name)),
        }
    }

    fn delimiter(&mut self, command: &str, offset: usize) -> Result<String, LatexError> {
        match self.peek() {
            Some(t)
                if matches!(
                    t.class,
                    TokenClass::Symbol
                        | TokenClass::BracketOpen
                        | TokenClass::BracketClose
                        | TokenClass::Command
                ) =>
            {
                let d = t.lexeme.clone();
                self.pos += 1;
                Ok(d)
            }
            _ => Err(LatexError::MissingDelimiter {
                command: command.to_string(),
                offset,
            }),
        }
    }

    /// Contents of `[...]` after `\sqrt`, up to the matching `]`.
    fn bracket_group(&mut self, open: usize) -> Result<PomNode, LatexError> {
        let start = self.pos;
        let mut depth = 0usize;
        let mut end = None;
        for (k, item) in self.items.iter().enumerate().skip(start) {
            match item.tok.class {
                TokenClass::BracketOpen => depth += 1,
                TokenClass::BracketClose if depth == 0 => {
                    end = Some(k);
                    break;
                }
                TokenClass::BracketClose => depth -= 1,
                _ => {}
            }
        }
        let end = end.ok_or(LatexError::UnclosedBracket { offset: open })?;
        let inner: Vec<Item> = self.items.drain(start..end).collect();
        let mut sub = Parser {
            items: inner,
            pos: 0,
            lexicon: self.lexicon,
        };
        let children = sub.sequence(Until::End)?;
        // Drop the closing bracket.
        self.items.remove(start);
        let mut seq = PomNode::new(NodeKind::Sequence, "[");
        seq.children = children;
        Ok(seq)
    }
}
