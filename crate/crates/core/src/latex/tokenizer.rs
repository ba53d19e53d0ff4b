use serde::Serialize;

use super::LatexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenClass {
    Command,
    LetterRun,
    DigitRun,
    Symbol,
    Whitespace,
    At,
    BraceOpen,
    BraceClose,
    BracketOpen,
    BracketClose,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub lexeme: String,
    pub class: TokenClass,
    /// Byte offset of the lexeme in the input.
    pub offset: usize,
}

impl Token {
    pub fn is(&self, class: TokenClass) -> bool {
        self.class == class
    }
}

/// Splits LaTeX source into tokens; the lexemes concatenate back to the input.
///
/// A letter run is `letter (letter | digit)*`, a digit run is `digit+ ("." digit+)?`,
/// so `4b` gives two tokens and `b4` one.
pub fn tokenize(input: &str) -> Result<Vec<Token>, LatexError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let end_of = |k: usize| chars.get(k).map_or(input.len(), |c| c.0);
    let mut k = 0;
    while k < chars.len() {
        let (start, c) = chars[k];
        let (class, next) = if c == '\\' {
            match chars.get(k + 1) {
                None => return Err(LatexError::LoneBackslash { offset: start }),
                Some((_, n)) if n.is_ascii_alphabetic() => {
                    let mut j = k + 1;
                    while j < chars.len() && chars[j].1.is_ascii_alphabetic() {
                        j += 1;
                    }
                    (TokenClass::Command, j)
                }
                Some(_) => (TokenClass::Command, k + 2),
            }
        } else if c.is_ascii_digit() {
            let mut j = k;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            if j + 1 < chars.len() && chars[j].1 == '.' && chars[j + 1].1.is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
            }
            (TokenClass::DigitRun, j)
        } else if c.is_alphabetic() {
            let mut j = k + 1;
            while j < chars.len() && (chars[j].1.is_alphabetic() || chars[j].1.is_ascii_digit()) {
                j += 1;
            }
            (TokenClass::LetterRun, j)
        } else if c.is_whitespace() {
            let mut j = k + 1;
            while j < chars.len() && chars[j].1.is_whitespace() {
                j += 1;
            }
            (TokenClass::Whitespace, j)
        } else {
            let class = match c {
                '@' => TokenClass::At,
                '{' => TokenClass::BraceOpen,
                '}' => TokenClass::BraceClose,
                '[' => TokenClass::BracketOpen,
                ']' => TokenClass::BracketClose,
                _ => TokenClass::Symbol,
            };
            (class, k + 1)
        };
        out.push(Token {
            lexeme: input[start..end_of(next)].to_string(),
            class,
            offset: start,
        });
        k = next;
    }
    Ok(out)
}
