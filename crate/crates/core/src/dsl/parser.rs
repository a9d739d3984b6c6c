use std::collections::BTreeMap;

use super::lexer::{lex, Tok, Token};
use super::DslError;
use crate::scalar::{CoordinateId, Dependence, FunctionSymbol, Rational, SymbolPartial};

/// Largest chart dimension the DSL accepts.
pub const MAX_DIMENSION: usize = 8;

/// Built-in operators applied with call syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    D,
    Db,
    Pull,
    Clift,
    Vlift,
    Ins,
    Lie,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "d" => Func::D,
            "db" => Func::Db,
            "pull" => Func::Pull,
            "clift" => Func::Clift,
            "vlift" => Func::Vlift,
            "ins" => Func::Ins,
            "lie" => Func::Lie,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::D => "d",
            Func::Db => "db",
            Func::Pull => "pull",
            Func::Clift => "clift",
            Func::Vlift => "vlift",
            Func::Ins => "ins",
            Func::Lie => "lie",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Func::Ins | Func::Lie => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `^`: a power when the right side is an integer literal and the left
    /// side evaluates to a scalar, a wedge product otherwise.
    Caret,
    /// `&`: form tensor vector field.
    Tensor,
}

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Coord(CoordinateId),
    Differential(CoordinateId),
    Frame(CoordinateId),
    Symbol(SymbolPartial),
    Var(String),
    Tautological,
    Mirror,
    Identity,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>, Pos),
    Call(Func, Vec<Expr>, Pos),
}

/// A parsed document: the chart dimension, declared symbols, `let`
/// bindings in order, and the final expression if any.
#[derive(Clone, Debug, PartialEq)]
pub struct DslDocument {
    pub m: usize,
    pub symbols: Vec<FunctionSymbol>,
    pub bindings: Vec<(String, Expr)>,
    pub result: Option<Expr>,
}

/// Base function symbols available without a declaration.
pub const PRELUDE: [&str; 3] = ["f", "g", "h"];

const RESERVED: [&str; 16] = [
    "d", "db", "pull", "clift", "vlift", "ins", "lie", "xi", "B", "id", "D", "m", "fn", "let",
    "base", "full",
];

/// `x3` → base coordinate 3, `dv1` → (differential, fibre coordinate 1).
fn coordinate_word(word: &str) -> Option<(bool, CoordinateId)> {
    let (diff, rest) = match word.strip_prefix('d') {
        Some(r) if r.starts_with('x') || r.starts_with('v') => (true, r),
        _ => (false, word),
    };
    if rest.is_empty() || !rest.is_ascii() {
        return None;
    }
    let (kind, digits) = rest.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let index: u8 = digits.parse().ok()?;
    match kind {
        "x" => Some((diff, CoordinateId::base(index))),
        "v" => Some((diff, CoordinateId::fiber(index))),
        _ => None,
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    m: Option<usize>,
    symbols: BTreeMap<String, FunctionSymbol>,
    names: Vec<String>,
}

pub fn parse(text: &str) -> Result<DslDocument, DslError> {
    parse_with_dimension(text, None)
}

/// Parses with a fallback dimension used when the document has no `m = N`.
pub fn parse_with_dimension(text: &str, default_m: Option<usize>) -> Result<DslDocument, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        m: default_m,
        symbols: PRELUDE
            .iter()
            .map(|n| (n.to_string(), FunctionSymbol::base(n)))
            .collect(),
        names: Vec::new(),
    };
    p.document()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        let t = self.peek();
        Pos {
            line: t.line,
            column: t.column,
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> DslError {
        let t = self.peek();
        DslError::Syntax {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, DslError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        let pos = self.pos();
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error(&["a name"])),
        }
    }

    fn skip_separators(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.bump();
        }
    }

    fn document(&mut self) -> Result<DslDocument, DslError> {
        let mut bindings = Vec::new();
        let mut declared = Vec::new();
        let mut result = None;
        self.skip_separators();
        while self.peek().tok != Tok::Eof {
            if result.is_some() {
                return Err(self.error(&["end of input after the final expression"]));
            }
            match (&self.peek().tok, self.peek_at(1)) {
                (Tok::Ident(w), Tok::Eq) if w == "m" => {
                    self.bump();
                    self.bump();
                    let pos = self.pos();
                    let n = match &self.peek().tok {
                        Tok::Num(q) if q.is_integer() => {
                            q.to_integer().try_into().unwrap_or(0usize)
                        }
                        _ => return Err(self.error(&["a positive integer"])),
                    };
                    self.bump();
                    if n == 0 || n > MAX_DIMENSION {
                        return Err(DslError::InvalidDimension {
                            value: n,
                            line: pos.line,
                            column: pos.column,
                        });
                    }
                    self.m = Some(n);
                }
                (Tok::Ident(w), _) if w == "fn" => {
                    self.bump();
                    let (name, pos) = self.ident()?;
                    self.check_fresh(&name, pos)?;
                    self.expect(Tok::Colon)?;
                    let dep = match &self.peek().tok {
                        Tok::Ident(s) if s == "base" => Dependence::BaseOnly,
                        Tok::Ident(s) if s == "full" => Dependence::Full,
                        _ => return Err(self.error(&["`base`", "`full`"])),
                    };
                    self.bump();
                    let sym = FunctionSymbol::new(&name, dep);
                    self.symbols.insert(name, sym.clone());
                    declared.push(sym);
                }
                (Tok::Ident(w), _) if w == "let" => {
                    self.bump();
                    let (name, pos) = self.ident()?;
                    self.check_fresh(&name, pos)?;
                    self.expect(Tok::Eq)?;
                    let e = self.expr()?;
                    self.names.push(name.clone());
                    bindings.push((name, e));
                }
                _ => result = Some(self.expr()?),
            }
            match self.peek().tok {
                Tok::Sep => self.skip_separators(),
                Tok::Eof => {}
                _ => return Err(self.error(&["`;`", "newline", "an operator"])),
            }
        }
        let m = self.m.ok_or(DslError::MissingDimension)?;
        Ok(DslDocument {
            m,
            symbols: declared,
            bindings,
            result,
        })
    }

    fn check_fresh(&self, name: &str, pos: Pos) -> Result<(), DslError> {
        if RESERVED.contains(&name) || coordinate_word(name).is_some() {
            return Err(DslError::Syntax {
                line: pos.line,
                column: pos.column,
                expected: vec!["a name that is not reserved".into()],
                found: format!("`{name}`"),
            });
        }
        if self.names.iter().any(|n| n == name)
            || self.symbols.contains_key(name) && !PRELUDE.contains(&name)
        {
            return Err(DslError::Syntax {
                line: pos.line,
                column: pos.column,
                expected: vec!["a fresh name".into()],
                found: format!("`{name}` (already declared)"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.tensor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.tensor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn tensor(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.product()?;
        while self.peek().tok == Tok::Amp {
            let pos = self.pos();
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::Bin(BinOp::Tensor, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), pos);
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.atom()?;
        while self.peek().tok == Tok::Caret {
            let pos = self.pos();
            self.bump();
            let rhs = self.atom()?;
            lhs = Expr::Bin(BinOp::Caret, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn coordinate(&self, c: CoordinateId, pos: Pos) -> Result<CoordinateId, DslError> {
        let m = self.m.ok_or(DslError::MissingDimension)?;
        if c.index as usize > m {
            return Err(DslError::IndexOutOfRange {
                index: c.index as usize,
                m,
                line: pos.line,
                column: pos.column,
            });
        }
        Ok(c)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        let tok = self.peek().tok.clone();
        match tok {
            Tok::Num(q) => {
                self.bump();
                Ok(Expr::Num(q))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Frame(word) => {
                self.bump();
                match coordinate_word(&word) {
                    Some((false, c)) => Ok(Expr::Frame(self.coordinate(c, pos)?)),
                    _ => Err(DslError::Syntax {
                        line: pos.line,
                        column: pos.column,
                        expected: vec!["`@x<i>` or `@v<i>`".into()],
                        found: format!("`@{word}`"),
                    }),
                }
            }
            Tok::Ident(word) => {
                self.bump();
                if let Some((diff, c)) = coordinate_word(&word) {
                    let c = self.coordinate(c, pos)?;
                    return Ok(if diff {
                        Expr::Differential(c)
                    } else {
                        Expr::Coord(c)
                    });
                }
                match word.as_str() {
                    "xi" => return Ok(Expr::Tautological),
                    "B" => return Ok(Expr::Mirror),
                    "id" => return Ok(Expr::Identity),
                    "D" => return self.formal_partial(),
                    _ => {}
                }
                if let Some(f) = Func::from_name(&word) {
                    return self.call(f, pos);
                }
                if self.names.contains(&word) {
                    return Ok(Expr::Var(word));
                }
                if let Some(sym) = self.symbols.get(&word) {
                    return Ok(Expr::Symbol(SymbolPartial::new(sym.clone(), [])));
                }
                Err(DslError::UndeclaredName {
                    name: word,
                    line: pos.line,
                    column: pos.column,
                })
            }
            _ => Err(self.error(&["a number", "a name", "`(`"])),
        }
    }

    fn call(&mut self, f: Func, pos: Pos) -> Result<Expr, DslError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        if args.len() != f.arity() {
            let expected = if args.len() < f.arity() { "`,`" } else { "`)`" };
            return Err(DslError::Syntax {
                line: pos.line,
                column: pos.column,
                expected: vec![
                    format!("{} argument(s) for `{}`", f.arity(), f.name()),
                    expected.into(),
                ],
                found: format!("{} argument(s)", args.len()),
            });
        }
        self.expect(Tok::RParen)?;
        Ok(Expr::Call(f, args, pos))
    }

    /// `D(f, x1, v2, ...)`.
    fn formal_partial(&mut self) -> Result<Expr, DslError> {
        self.expect(Tok::LParen)?;
        let (name, pos) = self.ident()?;
        let sym = self
            .symbols
            .get(&name)
            .cloned()
            .ok_or(DslError::UndeclaredName {
                name,
                line: pos.line,
                column: pos.column,
            })?;
        let mut wrt = Vec::new();
        while self.peek().tok == Tok::Comma {
            self.bump();
            let (w, wpos) = self.ident()?;
            match coordinate_word(&w) {
                Some((false, c)) => wrt.push(self.coordinate(c, wpos)?),
                _ => {
                    return Err(DslError::Syntax {
                        line: wpos.line,
                        column: wpos.column,
                        expected: vec!["a coordinate".into()],
                        found: format!("`{w}`"),
                    })
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Expr::Symbol(SymbolPartial::new(sym, wrt)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements() {
        let doc = parse("m = 2\nfn F: full; let w = F*dx1\nd(w)").unwrap();
        assert_eq!(doc.m, 2);
        assert_eq!(doc.symbols, vec![FunctionSymbol::full("F")]);
        assert_eq!(doc.bindings.len(), 1);
        assert!(matches!(doc.result, Some(Expr::Call(Func::D, _, _))));
    }

    #[test]
    fn precedence() {
        let doc = parse("m=1; -x1^2*dx1 + 1 & @v1").unwrap();
        let Some(Expr::Bin(BinOp::Add, lhs, rhs, _)) = doc.result else {
            panic!()
        };
        assert!(matches!(*lhs, Expr::Bin(BinOp::Mul, _, _, _)));
        assert!(matches!(*rhs, Expr::Bin(BinOp::Tensor, _, _, _)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("m=1; d(x1"),
            Err(DslError::Syntax {
                line: 1,
                column: 10,
                expected: vec!["`)`".into()],
                found: "end of input".into()
            })
        );
        assert_eq!(
            parse("m=1\nq"),
            Err(DslError::UndeclaredName {
                name: "q".into(),
                line: 2,
                column: 1
            })
        );
        assert_eq!(
            parse("m=1; x2"),
            Err(DslError::IndexOutOfRange {
                index: 2,
                m: 1,
                line: 1,
                column: 6
            })
        );
        assert_eq!(parse("x1"), Err(DslError::MissingDimension));
        assert!(matches!(
            parse("m=1; let d = 1"),
            Err(DslError::Syntax { .. })
        ));
        assert!(matches!(parse("m=1; 1 2"), Err(DslError::Syntax { .. })));
    }

    #[test]
    fn formal_partials() {
        let doc = parse("m=2; D(f, x2, x1)").unwrap();
        let expected = SymbolPartial::new(
            FunctionSymbol::base("f"),
            [CoordinateId::base(1), CoordinateId::base(2)],
        );
        assert_eq!(doc.result, Some(Expr::Symbol(expected)));
    }
}
