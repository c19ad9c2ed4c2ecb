use std::fmt;

use crate::ast::Pos;
use crate::diag::Diagnostic;

/// Words that cannot name variables, registers, oracles or definitions.
pub const KEYWORDS: &[&str] = &[
    "bool", "call", "const", "def", "dist", "div", "else", "false", "if", "inf", "main", "measure", "mod", "not", "ok",
    "oracle", "qreg", "rand", "spec", "then", "tick", "timed", "true", "var",
];

/// Symbols, longest first so that the lexer can match greedily.
const SYMBOLS: &[&str] = &[
    ",..", ":=", "/\\", "\\/", "=>", "<=", ">=", ";", "(", ")", "[", "]", ",", ":", "=", "#", "<", ">", "+", "-", "*",
    "/", "^",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// Identifiers and keywords.
    Ident(String),
    /// `x'`.
    Primed(String),
    /// Digits, kept as written (oracle tables have leading zeros).
    Int(String),
    Real(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Primed(s) => write!(f, "`{s}'`"),
            Tok::Int(s) | Tok::Real(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            if chars.get(i) == Some(&'\'') {
                i += 1;
                col += 1;
                out.push(Token {
                    tok: Tok::Primed(word),
                    pos,
                });
            } else {
                out.push(Token {
                    tok: Tok::Ident(word),
                    pos,
                });
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if matches!(chars.get(i), Some('e' | 'E')) {
                let mut j = i + 1;
                if matches!(chars.get(j), Some('+' | '-')) {
                    j += 1;
                }
                if chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            if chars.get(i).is_some_and(|&d| is_ident_char(d)) {
                return Err(Diagnostic::syntax(
                    Pos {
                        line,
                        col: col + (i - start),
                    },
                    format!("unexpected `{}` after a number", chars[i]),
                    vec!["a digit".into(), "whitespace".into()],
                ));
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if real { Tok::Real(text) } else { Tok::Int(text) };
            out.push(Token { tok, pos });
            continue;
        }
        match SYMBOLS
            .iter()
            .find(|s| s.chars().enumerate().all(|(k, sc)| chars.get(i + k) == Some(&sc)))
        {
            Some(s) => {
                advance(&mut i, &mut line, &mut col, s.chars().count());
                out.push(Token { tok: Tok::Sym(s), pos });
            }
            None => {
                return Err(Diagnostic::syntax(
                    pos,
                    format!("unexpected character `{c}`"),
                    vec!["an identifier".into(), "a number".into(), "an operator".into()],
                ))
            }
        }
    }
    // End of input is reported just past the last token.
    let mut end = Pos { line: 1, col: 1 };
    if let Some(last) = out.last() {
        let len = match &last.tok {
            Tok::Ident(s) | Tok::Int(s) | Tok::Real(s) => s.len(),
            Tok::Primed(s) => s.len() + 1,
            Tok::Sym(s) => s.len(),
            Tok::Eof => 0,
        };
        end = Pos {
            line: last.pos.line,
            col: last.pos.col + len,
        };
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: end,
    });
    Ok(out)
}
