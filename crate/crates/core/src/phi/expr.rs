//! Tiny arithmetic language for user-supplied φ.
//!
//! Atoms: numbers, `pi`, `|s|`, `|t|`, `re_s`, `im_s`, `re_t`, `im_t`.
//! Operators: `+ - * / ^` (right-associative power) and unary minus.
//! Functions: `sqrt abs exp ln` (one argument), `max min pow` (two).

use std::fmt;

use crate::space::Complex;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Var {
    AbsS,
    AbsT,
    ReS,
    ImS,
    ReT,
    ImT,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Func1 {
    Sqrt,
    Abs,
    Exp,
    Ln,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Func2 {
    Max,
    Min,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call1(Func1, Box<Expr>),
    Call2(Func2, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub(crate) fn parse(src: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub(crate) fn eval(&self, s: Complex, t: Complex) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(v) => match v {
                Var::AbsS => s.norm(),
                Var::AbsT => t.norm(),
                Var::ReS => s.re,
                Var::ImS => s.im,
                Var::ReT => t.re,
                Var::ImT => t.im,
            },
            Expr::Neg(e) => -e.eval(s, t),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(s, t), b.eval(s, t));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call1(f, a) => {
                let a = a.eval(s, t);
                match f {
                    Func1::Sqrt => a.sqrt(),
                    Func1::Abs => a.abs(),
                    Func1::Exp => a.exp(),
                    Func1::Ln => a.ln(),
                }
            }
            Expr::Call2(f, a, b) => {
                let (a, b) = (a.eval(s, t), b.eval(s, t));
                match f {
                    Func2::Max => a.max(b),
                    Func2::Min => a.min(b),
                    Func2::Pow => a.powf(b),
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := atom ('^' unary)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('|') => {
                self.pos += 1;
                let name = self.ident();
                let var = match name {
                    "s" => Var::AbsS,
                    "t" => Var::AbsT,
                    _ => return Err(self.err("only |s| and |t| are allowed between bars")),
                };
                self.expect('|')?;
                Ok(Expr::Var(var))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                let var = match name {
                    "re_s" => Some(Var::ReS),
                    "im_s" => Some(Var::ImS),
                    "re_t" => Some(Var::ReT),
                    "im_t" => Some(Var::ImT),
                    _ => None,
                };
                if let Some(v) = var {
                    return Ok(Expr::Var(v));
                }
                if name == "pi" {
                    return Ok(Expr::Num(std::f64::consts::PI));
                }
                let f1 = match name {
                    "sqrt" => Some(Func1::Sqrt),
                    "abs" => Some(Func1::Abs),
                    "exp" => Some(Func1::Exp),
                    "ln" => Some(Func1::Ln),
                    _ => None,
                };
                let f2 = match name {
                    "max" => Some(Func2::Max),
                    "min" => Some(Func2::Min),
                    "pow" => Some(Func2::Pow),
                    _ => None,
                };
                if f1.is_none() && f2.is_none() {
                    self.pos = start;
                    return Err(self.err(format!("unknown identifier `{name}`")));
                }
                self.expect('(')?;
                let a = self.expr()?;
                if let Some(f) = f1 {
                    self.expect(')')?;
                    return Ok(Expr::Call1(f, Box::new(a)));
                }
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call2(f2.unwrap(), Box::new(a), Box::new(b)))
            }
            Some(c) => Err(self.err(format!("unexpected character `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let rest = self.rest();
        let mut len = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '.'))
            .unwrap_or(rest.len());
        // optional exponent
        let tail = &rest[len..];
        if tail.starts_with(['e', 'E']) {
            let after = &tail[1..];
            let sign = usize::from(after.starts_with(['+', '-']));
            let digits = after[sign..]
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(after.len() - sign);
            if digits > 0 {
                len += 1 + sign + digits;
            }
        }
        let text = &rest[..len];
        self.pos += len;
        text.parse::<f64>().map(Expr::Num).map_err(|_| ParseError {
            position: start,
            message: format!("malformed number `{text}`"),
        })
    }
}
