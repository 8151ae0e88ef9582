//! A small s-expression reader.
//!
//! Symbols are case-insensitive and stored upper-cased. `;` starts a line
//! comment, and a leading quote is dropped, so `'(a b)` reads as the list
//! `(A B)` and `'off` as the symbol `OFF`.

use std::fmt;

use crate::error::{Error, Result};

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed s-expression. Positions are carried along for diagnostics but
/// ignored by equality.
#[derive(Debug, Clone)]
pub enum SExpr {
    Int(i64, Pos),
    Sym(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl PartialEq for SExpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SExpr::Int(a, _), SExpr::Int(b, _)) => a == b,
            (SExpr::Sym(a, _), SExpr::Sym(b, _)) => a == b,
            (SExpr::List(a, _), SExpr::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Eq for SExpr {}

impl SExpr {
    pub fn sym(s: &str) -> SExpr {
        SExpr::Sym(s.to_ascii_uppercase(), Pos::default())
    }

    pub fn int(i: i64) -> SExpr {
        SExpr::Int(i, Pos::default())
    }

    pub fn list(items: Vec<SExpr>) -> SExpr {
        SExpr::List(items, Pos::default())
    }

    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Int(_, p) | SExpr::Sym(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            SExpr::Sym(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(l, _) => Some(l),
            _ => None,
        }
    }

    /// The head symbol of a non-empty list whose first element is a symbol.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExpr::as_sym)
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Int(i, _) => write!(f, "{i}"),
            SExpr::Sym(s, _) => write!(f, "{s}"),
            SExpr::List(items, _) => {
                write!(f, "(")?;
                for (n, item) in items.iter().enumerate() {
                    if n > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>> {
        self.skip_trivia();
        let start = self.pos();
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(Error::Syntax {
                                pos: start,
                                msg: "unbalanced parentheses: list is never closed".into(),
                            })
                        }
                        Some(')') => {
                            self.bump();
                            return Ok(Some(SExpr::List(items, start)));
                        }
                        Some(_) => {
                            // read() only returns None at end of input, handled above
                            if let Some(e) = self.read()? {
                                items.push(e);
                            }
                        }
                    }
                }
            }
            ')' => Err(Error::Syntax {
                pos: start,
                msg: "unbalanced parentheses: unexpected `)`".into(),
            }),
            '\'' => {
                self.bump();
                match self.read()? {
                    Some(e) => Ok(Some(e)),
                    None => Err(Error::Syntax {
                        pos: start,
                        msg: "quote at end of input".into(),
                    }),
                }
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(Error::Syntax {
                                pos: start,
                                msg: "unterminated string".into(),
                            })
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                // strings are only used for file names; keep their case
                Ok(Some(SExpr::Sym(s, start)))
            }
            _ => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '\'' | '"') {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                Ok(Some(atom(&tok, start)))
            }
        }
    }
}

fn atom(tok: &str, pos: Pos) -> SExpr {
    match tok.parse::<i64>() {
        Ok(i) => SExpr::Int(i, pos),
        Err(_) => SExpr::Sym(tok.to_ascii_uppercase(), pos),
    }
}

/// Reads every top-level form of `text` in order.
pub fn read_sexprs(text: &str) -> Result<Vec<SExpr>> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(e) = reader.read()? {
        out.push(e);
    }
    Ok(out)
}
