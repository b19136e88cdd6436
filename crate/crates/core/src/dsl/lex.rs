//! Line-oriented tokenizer shared by the pipeline scripts and the lattice
//! dataset files. `#` starts a comment; strings are double-quoted.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, col {col}: {msg}")]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Caret,
    Plus,
    Minus,
    Star,
    DotDot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Int(v) => write!(f, "{v}"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Eq => write!(f, "="),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Comma => write!(f, ","),
            Tok::Colon => write!(f, ":"),
            Tok::Caret => write!(f, "^"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::DotDot => write!(f, ".."),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Tokenize one source line (1-based line number for diagnostics).
pub fn tokenize_line(line_no: usize, text: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(LexError {
                        line: line_no,
                        col,
                        msg: "unterminated string".into(),
                    });
                }
                out.push(Spanned {
                    tok: Tok::Str(chars[start..j].iter().collect()),
                    line: line_no,
                    col,
                });
                i = j + 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let v = s.parse::<i64>().map_err(|_| LexError {
                    line: line_no,
                    col,
                    msg: format!("integer `{s}` out of range"),
                })?;
                out.push(Spanned { tok: Tok::Int(v), line: line_no, col });
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_')
                {
                    j += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[i..j].iter().collect()),
                    line: line_no,
                    col,
                });
                i = j;
            }
            '.' => {
                if i + 1 < chars.len() && chars[i + 1] == '.' {
                    out.push(Spanned { tok: Tok::DotDot, line: line_no, col });
                    i += 2;
                } else {
                    return Err(LexError {
                        line: line_no,
                        col,
                        msg: "stray `.` (ranges use `..`)".into(),
                    });
                }
            }
            _ => {
                let tok = match c {
                    '=' => Tok::Eq,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '^' => Tok::Caret,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    _ => {
                        return Err(LexError {
                            line: line_no,
                            col,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                };
                out.push(Spanned { tok, line: line_no, col });
                i += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_tokens() {
        let toks = tokenize_line(1, "class B6 = S + F - 2E1..E4 - E5 # tail").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|s| s.tok).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("class".into()),
                Tok::Ident("B6".into()),
                Tok::Eq,
                Tok::Ident("S".into()),
                Tok::Plus,
                Tok::Ident("F".into()),
                Tok::Minus,
                Tok::Int(2),
                Tok::Ident("E1".into()),
                Tok::DotDot,
                Tok::Ident("E4".into()),
                Tok::Minus,
                Tok::Ident("E5".into()),
            ]
        );
    }

    #[test]
    fn strings_and_errors() {
        let toks = tokenize_line(2, "blowup E1 at=\"first double point\"").unwrap();
        assert_eq!(toks.last().unwrap().tok, Tok::Str("first double point".into()));
        assert!(tokenize_line(3, "at=\"open").is_err());
        assert!(tokenize_line(4, "a . b").is_err());
        assert!(tokenize_line(5, "weird;").is_err());
    }

    #[test]
    fn plumbing_tuple() {
        let toks = tokenize_line(1, "(-18, -19, -2^14)").unwrap();
        assert_eq!(toks.len(), 12);
        assert_eq!(toks[1].tok, Tok::Minus);
        assert_eq!(toks[2].tok, Tok::Int(18));
        assert_eq!(toks[10].tok, Tok::Int(14));
    }
}
