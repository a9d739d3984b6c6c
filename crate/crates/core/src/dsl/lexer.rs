use num_bigint::BigInt;

use super::DslError;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(Rational),
    Ident(String),
    /// `@x1`, `@v2`: a coordinate vector field.
    Frame(String),
    LParen,
    RParen,
    Comma,
    Sep,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Amp,
    Eq,
    Colon,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number `{q}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Frame(s) => format!("`@{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Sep => "end of statement".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits `text` into tokens. Newlines separate statements except inside
/// parentheses; `#` starts a comment.
pub(crate) fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        if c == '\n' {
            if depth == 0 {
                push(&mut out, Tok::Sep);
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut digits: String = chars[s..i].iter().collect();
            let mut scale = 0u32;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let f = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                digits.extend(&chars[f..i]);
                scale = (i - f) as u32;
            }
            col += i - s;
            let n: BigInt = digits.parse().expect("digits");
            push(
                &mut out,
                Tok::Num(Rational::new(n, BigInt::from(10).pow(scale))),
            );
            continue;
        }
        if c.is_alphabetic() || c == '_' || c == '@' {
            let s = i;
            i += 1;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            let word: String = chars[s..i].iter().collect();
            if let Some(rest) = word.strip_prefix('@') {
                if rest.is_empty() {
                    return Err(DslError::Syntax {
                        line: start_line,
                        column: start_col,
                        expected: vec!["a coordinate after `@`".into()],
                        found: "`@`".into(),
                    });
                }
                push(&mut out, Tok::Frame(rest.to_string()));
            } else {
                push(&mut out, Tok::Ident(word));
            }
            continue;
        }
        let tok = match c {
            '(' => {
                depth += 1;
                Tok::LParen
            }
            ')' => {
                depth = depth.saturating_sub(1);
                Tok::RParen
            }
            ',' => Tok::Comma,
            ';' => Tok::Sep,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '&' => Tok::Amp,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            other => {
                return Err(DslError::Syntax {
                    line,
                    column: col,
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        push(&mut out, tok);
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_names() {
        assert_eq!(
            toks("2.5*dx1 + @v2"),
            vec![
                Tok::Num(Rational::new(5.into(), 2.into())),
                Tok::Star,
                Tok::Ident("dx1".into()),
                Tok::Plus,
                Tok::Frame("v2".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn newlines_inside_parentheses_are_whitespace() {
        assert_eq!(
            toks("(1\n+2)\n3")
                .iter()
                .filter(|t| **t == Tok::Sep)
                .count(),
            1
        );
        assert_eq!(
            toks("1 # note\n2")
                .iter()
                .filter(|t| **t == Tok::Sep)
                .count(),
            1
        );
    }

    #[test]
    fn positions() {
        let t = lex("m=2\n  $").unwrap_err();
        assert_eq!(
            t,
            DslError::Syntax {
                line: 2,
                column: 3,
                expected: vec!["a token".into()],
                found: "`$`".into()
            }
        );
    }
}
