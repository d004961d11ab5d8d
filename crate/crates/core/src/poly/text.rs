//! Polynomial text: a small recursive-descent parser and the canonical
//! emitter. Grammar: integers, variables, `+ - * ^`, parentheses.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{IntPolynomial, PolyError};

/// Names of the variables of a polynomial, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames(Vec<String>);

impl VarNames {
    pub fn new(names: Vec<String>) -> Self {
        VarNames(names)
    }

    /// `Y, X1, …, Xn`.
    pub fn cover(n: usize) -> Self {
        let mut v = vec!["Y".to_string()];
        v.extend((1..=n).map(|i| format!("X{i}")));
        VarNames(v)
    }

    /// `X0, …, Xn`.
    pub fn projective(n: usize) -> Self {
        VarNames((0..=n).map(|i| format!("X{i}")).collect())
    }

    /// `X1, …, Xn`.
    pub fn affine(n: usize) -> Self {
        VarNames((1..=n).map(|i| format!("X{i}")).collect())
    }

    /// Guesses the naming scheme of `text` for a polynomial in `arity`
    /// variables: `Y` present selects `Y, X1, …`; `X0` present selects
    /// `X0, …`; otherwise the largest `Xi` index decides between
    /// `X1..X{arity}` and the `Y`-less cover naming.
    pub fn infer(text: &str, arity: usize) -> Self {
        let mut has_y = false;
        let mut has_x0 = false;
        let mut max_x = 0usize;
        for tok in Lexer::new(text).flatten() {
            if let Tok::Ident(name) = tok.kind {
                if name == "Y" {
                    has_y = true;
                } else if let Some(i) = name.strip_prefix('X').and_then(|s| s.parse::<usize>().ok()) {
                    if i == 0 {
                        has_x0 = true;
                    }
                    max_x = max_x.max(i);
                }
            }
        }
        if has_y {
            VarNames::cover(arity.saturating_sub(1))
        } else if has_x0 {
            VarNames::projective(arity.saturating_sub(1))
        } else if max_x == arity && arity > 0 {
            VarNames::affine(arity)
        } else {
            VarNames::cover(arity.saturating_sub(1))
        }
    }

    /// The naming after prepending a homogenizing variable.
    pub fn with_homogenizer(&self) -> Self {
        let fresh = if self.0.iter().any(|s| s == "X0") { "T" } else { "X0" };
        let mut v = vec![fresh.to_string()];
        v.extend(self.0.iter().cloned());
        VarNames(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }
}

/// Parses `text` as a polynomial in `arity` variables, inferring the naming
/// scheme with [`VarNames::infer`].
pub fn parse_poly(text: &str, arity: usize) -> Result<IntPolynomial, PolyError> {
    parse_poly_with(text, &VarNames::infer(text, arity))
}

/// Parses `text` with an explicit variable naming.
pub fn parse_poly_with(text: &str, names: &VarNames) -> Result<IntPolynomial, PolyError> {
    let toks: Vec<Token> = Lexer::new(text).collect::<Result<_, _>>()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        names,
        end: text.len(),
    };
    let p = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(PolyError::Syntax {
            pos: t.pos,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    pos: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            src: s.as_bytes(),
            pos: 0,
        }
    }
}

impl Iterator for Lexer<'_> {
    type Item = Result<Token, PolyError>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return None;
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let kind = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Some(Ok(Token {
                    kind: Tok::Num(s.parse().unwrap()),
                    pos: start,
                }));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Some(Ok(Token {
                    kind: Tok::Ident(s.to_string()),
                    pos: start,
                }));
            }
            _ => {
                self.pos = self.src.len();
                return Some(Err(PolyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", c as char),
                }));
            }
        };
        self.pos += 1;
        Some(Ok(Token { kind, pos: start }))
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a VarNames,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat(&mut self, k: &Tok) -> bool {
        if self.peek().map(|t| &t.kind) == Some(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // expr := ['-'|'+'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<IntPolynomial, PolyError> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<IntPolynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    // factor := atom ('^' integer)?   with unary minus allowed on atoms
    fn factor(&mut self) -> Result<IntPolynomial, PolyError> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let pos = self.here();
            match self.peek().map(|t| t.kind.clone()) {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| PolyError::ExponentOverflow { pos })?;
                    Ok(base.pow(k))
                }
                _ => Err(PolyError::Syntax {
                    pos,
                    msg: "expected a non-negative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<IntPolynomial, PolyError> {
        let arity = self.names.len();
        let pos = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(PolyError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok.kind {
            Tok::Num(n) => Ok(IntPolynomial::constant(arity, n)),
            Tok::Ident(name) => match self.names.index_of(&name) {
                Some(i) => Ok(IntPolynomial::var(arity, i)),
                None => Err(PolyError::UnknownVariable { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(PolyError::Syntax {
                        pos: self.here(),
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(PolyError::Syntax {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

pub(super) fn emit(p: &IntPolynomial, names: &VarNames) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names.name(v).to_string()),
                _ => factors.push(format!("{}^{}", names.name(v), e)),
            }
        }
        if factors.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}
