//! Closed-form scalar expressions over chart coordinates.
//!
//! The grammar is whitespace-insensitive with precedence
//! `^` > unary `-` > `*`,`/` > `+`,`-`; `^` is right-associative, the
//! rest left-associative. `^` only admits constant exponents so that
//! jet evaluation stays analytic.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::jet::{Jet, Order};
use crate::scalar::Scalar;

/// Names that cannot be used as chart coordinates.
pub const RESERVED_NAMES: &[&str] = &[
    "pi", "exp", "ln", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sqrt",
];

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Unary function applications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Parsed expression tree; coordinates are resolved to chart indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    Pi,
    /// Coordinate reference by chart index.
    Coord(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Constant zero, convenient for sparse tensor entries.
    pub fn zero() -> Expr {
        Expr::Literal(0.0)
    }

    /// Constant expression from a number.
    pub fn constant(v: f64) -> Expr {
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Literal(-v)))
        } else {
            Expr::Literal(v)
        }
    }

    /// True when the subtree contains no coordinate reference.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Literal(_) | Expr::Pi => true,
            Expr::Coord(_) => false,
            Expr::Neg(e) => e.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
            Expr::Call(_, e) => e.is_constant(),
        }
    }

    /// Evaluate the expression and its partial derivatives at `point`.
    ///
    /// The result carries all partials up to `order`; order 0 agrees with
    /// plain evaluation exactly.
    pub fn eval_jet<T: Scalar>(&self, point: &[T], order: Order) -> Result<Jet<T>> {
        let n = point.len();
        match self {
            Expr::Literal(v) => Ok(Jet::constant(T::from_f64_lossy(*v), n, order)),
            Expr::Pi => Ok(Jet::constant(T::PI(), n, order)),
            Expr::Coord(i) => Ok(Jet::variable(point[*i], *i, n, order)),
            Expr::Neg(e) => Ok(e.eval_jet(point, order)?.neg()),
            Expr::Bin(op, a, b) => {
                let ja = a.eval_jet(point, order)?;
                match op {
                    BinOp::Add => Ok(ja.add(&b.eval_jet(point, order)?)),
                    BinOp::Sub => Ok(ja.sub(&b.eval_jet(point, order)?)),
                    BinOp::Mul => Ok(ja.mul(&b.eval_jet(point, order)?)),
                    BinOp::Div => ja.div(&b.eval_jet(point, order)?),
                    BinOp::Pow => {
                        // Exponent is constant by construction; evaluate it flat.
                        let c = b.eval_jet(point, Order::Zero)?.value();
                        ja.powc(c)
                    }
                }
            }
            Expr::Call(f, e) => {
                let u = e.eval_jet(point, order)?;
                match f {
                    Func::Exp => Ok(u.exp()),
                    Func::Ln => u.ln(),
                    Func::Sin => Ok(u.sin()),
                    Func::Cos => Ok(u.cos()),
                    Func::Tan => Ok(u.tan()),
                    Func::Sinh => Ok(u.sinh()),
                    Func::Cosh => Ok(u.cosh()),
                    Func::Tanh => Ok(u.tanh()),
                    Func::Sqrt => u.sqrt(),
                }
            }
        }
    }

    /// Plain value at a point (order-0 jet).
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T> {
        Ok(self.eval_jet(point, Order::Zero)?.value())
    }

    /// Render back to parseable source using the chart's coordinate names.
    pub fn to_text(&self, chart: &Chart) -> String {
        let mut out = String::new();
        self.write(chart, 0, &mut out);
        out
    }

    // prec: 0 additive, 1 multiplicative, 2 unary, 3 power, 4 atom
    fn write(&self, chart: &Chart, parent: u8, out: &mut String) {
        let prec = match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 0,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 1,
            Expr::Neg(_) => 2,
            Expr::Bin(BinOp::Pow, ..) => 3,
            _ => 4,
        };
        let parens = prec < parent;
        if parens {
            out.push('(');
        }
        match self {
            Expr::Literal(v) => out.push_str(&format!("{v}")),
            Expr::Pi => out.push_str("pi"),
            Expr::Coord(i) => out.push_str(chart.name(*i)),
            Expr::Neg(e) => {
                out.push('-');
                e.write(chart, 3, out);
            }
            Expr::Bin(op, a, b) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => (" + ", 0, 1),
                    BinOp::Sub => (" - ", 0, 1),
                    BinOp::Mul => ("*", 1, 2),
                    BinOp::Div => ("/", 1, 2),
                    // right-associative: parenthesize a nested pow on the left
                    BinOp::Pow => ("^", 4, 3),
                };
                a.write(chart, lp, out);
                out.push_str(sym);
                b.write(chart, rp, out);
            }
            Expr::Call(f, e) => {
                out.push_str(f.name());
                out.push('(');
                e.write(chart, 0, out);
                out.push(')');
            }
        }
        if parens {
            out.push(')');
        }
    }
}

/// Parse `source` against the chart's coordinate names.
pub fn parse(source: &str, chart: &Chart) -> Result<Expr> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0, chart };
    let e = p.expression()?;
    match p.peek() {
        Token::End => Ok(e),
        t => Err(Error::Syntax {
            offset: t.offset(),
            message: format!("unexpected {}", t.describe()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64, usize),
    Ident(String, usize),
    Plus(usize),
    Minus(usize),
    Star(usize),
    Slash(usize),
    Caret(usize),
    LParen(usize),
    RParen(usize),
    End,
}

impl Token {
    fn offset(&self) -> usize {
        match self {
            Token::Number(_, o)
            | Token::Ident(_, o)
            | Token::Plus(o)
            | Token::Minus(o)
            | Token::Star(o)
            | Token::Slash(o)
            | Token::Caret(o)
            | Token::LParen(o)
            | Token::RParen(o) => *o,
            Token::End => usize::MAX,
        }
    }

    fn describe(&self) -> String {
        match self {
            Token::Number(v, _) => format!("number `{v}`"),
            Token::Ident(s, _) => format!("identifier `{s}`"),
            Token::Plus(_) => "`+`".into(),
            Token::Minus(_) => "`-`".into(),
            Token::Star(_) => "`*`".into(),
            Token::Slash(_) => "`/`".into(),
            Token::Caret(_) => "`^`".into(),
            Token::LParen(_) => "`(`".into(),
            Token::RParen(_) => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn lex(source: &str) -> Result<Vec<Token>> {
    if source.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                tokens.push(Token::Plus(i));
                i += 1;
            }
            b'-' => {
                tokens.push(Token::Minus(i));
                i += 1;
            }
            b'*' => {
                tokens.push(Token::Star(i));
                i += 1;
            }
            b'/' => {
                tokens.push(Token::Slash(i));
                i += 1;
            }
            b'^' => {
                tokens.push(Token::Caret(i));
                i += 1;
            }
            b'(' => {
                tokens.push(Token::LParen(i));
                i += 1;
            }
            b')' => {
                tokens.push(Token::RParen(i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent part: e or E, optional sign, digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token::Number(value, start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(source[start..i].to_string(), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{}`", &source[i..].chars().next().unwrap()),
                })
            }
        }
    }
    tokens.push(Token::End);
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    chart: &'a Chart,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expression(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus(_) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Token::Minus(_) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star(_) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Token::Slash(_) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Token::Minus(_) = self.peek() {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Token::Caret(offset) = *self.peek() {
            self.bump();
            // right-associative; allow a signed constant exponent
            let exponent = self.unary()?;
            if !exponent.is_constant() {
                return Err(Error::NonConstantExponent { offset });
            }
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Token::Number(v, _) => Ok(Expr::Literal(v)),
            Token::LParen(offset) => {
                let inner = self.expression()?;
                match self.bump() {
                    Token::RParen(_) => Ok(inner),
                    t => Err(Error::Syntax {
                        offset: if t == Token::End { offset } else { t.offset() },
                        message: "unbalanced parenthesis".into(),
                    }),
                }
            }
            Token::Ident(name, offset) => {
                if let Token::LParen(_) = self.peek() {
                    let func = Func::from_name(&name)
                        .ok_or(Error::UnknownIdentifier { name: name.clone(), offset })?;
                    self.bump();
                    let arg = self.expression()?;
                    match self.bump() {
                        Token::RParen(_) => Ok(Expr::Call(func, Box::new(arg))),
                        t => Err(Error::Syntax {
                            offset: if t == Token::End { offset } else { t.offset() },
                            message: "unbalanced parenthesis".into(),
                        }),
                    }
                } else if name == "pi" {
                    Ok(Expr::Pi)
                } else if let Some(i) = self.chart.index_of(&name) {
                    Ok(Expr::Coord(i))
                } else {
                    Err(Error::UnknownIdentifier { name, offset })
                }
            }
            t => Err(Error::Syntax {
                offset: t.offset().min(usize::MAX - 1),
                message: format!("expected a value, found {}", t.describe()),
            }),
        }
    }
}
