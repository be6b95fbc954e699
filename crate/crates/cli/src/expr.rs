//! Arithmetic expressions in one variable, used for `a(t)` and `f(u)`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | var | func '(' expr ')' | '(' expr ')'
//! func    := sqrt | exp | ln | abs
//! ```

use std::fmt;

use thiserror::Error;

/// Nesting deeper than this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Abs,
}

impl Func {
    const ALL: [Func; 4] = [Func::Sqrt, Func::Exp, Func::Ln, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Where and why parsing stopped.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at byte {offset}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

fn expected_suffix(expected: &[&'static str]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}

/// Evaluation faults, tagged by cause.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Fault {
    #[error("sqrt of negative value {0}")]
    SqrtNegative(f64),
    #[error("ln of non-positive value {0}")]
    LnNonPositive(f64),
    #[error("division by zero")]
    DivisionByZero,
    /// An undefined combination such as `inf - inf`; overflow to ±inf is not a fault.
    #[error("result is not a number")]
    NotANumber,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(usize, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    var: &'a str,
    pos: usize,
    tok: Tok,
    tok_start: usize,
    depth: usize,
}

const OPERAND: &[&str] = &["number", "variable", "function", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.tok_start,
            message: message.into(),
            expected: expected.to_vec(),
        })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        self.tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => return self.number(),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                self.tok = Tok::Ident(start, self.pos);
                return Ok(());
            }
            _ => {
                let ch = self.src[self.pos..].chars().next().unwrap_or('?');
                return self.error(format!("unexpected character {ch:?}"), OPERAND);
            }
        };
        self.pos += 1;
        Ok(())
    }

    fn number(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = self.pos;
        let mut n = digits(&mut p);
        if bytes.get(p) == Some(&b'.') {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            return self.error("malformed number", &["digit"]);
        }
        if matches!(bytes.get(p), Some(b'e' | b'E')) {
            let mut q = p + 1;
            if matches!(bytes.get(q), Some(b'+' | b'-')) {
                q += 1;
            }
            if digits(&mut q) == 0 {
                self.tok_start = q;
                return self.error("malformed exponent", &["digit"]);
            }
            p = q;
        }
        let text = &self.src[start..p];
        let v: f64 = match text.parse() {
            Ok(v) => v,
            Err(_) => return self.error(format!("malformed number {text:?}"), &["number"]),
        };
        if !v.is_finite() {
            return self.error(format!("number {text} is out of range"), &[]);
        }
        self.pos = p;
        self.tok = Tok::Num(v);
        Ok(())
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error(format!("nesting deeper than {MAX_DEPTH}"), &[]);
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.enter()?;
            self.advance()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.enter()?;
        self.advance()?;
        let exp = self.unary()?;
        self.depth -= 1;
        Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.tok {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::Num(v))
            }
            Tok::Ident(s, e) => {
                let name = &self.src[s..e];
                if name == self.var {
                    self.advance()?;
                    return Ok(Expr::Var);
                }
                let Some(func) = Func::lookup(name) else {
                    return self.error(
                        format!("unknown identifier `{name}` (the variable here is `{}`)", self.var),
                        &["variable", "function"],
                    );
                };
                self.advance()?;
                if self.tok != Tok::LParen {
                    return self.error(format!("`{name}` must be called"), &["'('"]);
                }
                self.advance()?;
                let arg = self.expr()?;
                self.close()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.close()?;
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input", OPERAND),
            _ => self.error("unexpected token", OPERAND),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return self.error("unclosed parenthesis", &["')'", "operator"]);
        }
        self.advance()
    }
}

/// Parses `text` with `var` as the only allowed variable name.
pub fn parse_expr(text: &str, var: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text,
        var,
        pos: 0,
        tok: Tok::End,
        tok_start: 0,
        depth: 0,
    };
    p.advance()?;
    if p.tok == Tok::End {
        return p.error("empty expression", OPERAND);
    }
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.error("trailing input", &["operator", "end of input"]);
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, x: f64) -> Result<f64, Fault> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(Fault::DivisionByZero),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let a = e.eval(x)?;
                match f {
                    Func::Sqrt if a < 0.0 => return Err(Fault::SqrtNegative(a)),
                    Func::Sqrt => a.sqrt(),
                    Func::Exp => a.exp(),
                    Func::Ln if a <= 0.0 => return Err(Fault::LnNonPositive(a)),
                    Func::Ln => a.ln(),
                    Func::Abs => a.abs(),
                }
            }
        };
        if v.is_nan() {
            Err(Fault::NotANumber)
        } else {
            Ok(v)
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Num(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }

    /// Prints with the fewest parentheses that still parse back to `self`.
    pub fn display<'a>(&'a self, var: &'a str) -> Display<'a> {
        Display { expr: self, var }
    }
}

pub struct Display<'a> {
    expr: &'a Expr,
    var: &'a str,
}

impl Display<'_> {
    fn sub<'b>(&'b self, e: &'b Expr) -> Display<'b> {
        Display { expr: e, var: self.var }
    }

    fn wrapped(&self, f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self.sub(e))
        } else {
            write!(f, "{}", self.sub(e))
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            // Debug keeps full precision and switches to exponent form at the extremes
            Expr::Num(v) if *v < 0.0 => write!(f, "({v:?})"),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str(self.var),
            Expr::Neg(e) => {
                f.write_str("-")?;
                self.wrapped(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({})", func.name(), self.sub(e)),
            Expr::Bin(BinOp::Pow, l, r) => {
                self.wrapped(f, l, l.precedence() < 5)?;
                f.write_str("^")?;
                self.wrapped(f, r, r.precedence() < 3)
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                self.wrapped(f, l, l.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                self.wrapped(f, r, r.precedence() <= p)
            }
        }
    }
}
