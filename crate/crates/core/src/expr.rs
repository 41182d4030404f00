//! A small arithmetic expression language for user-supplied vector fields
//! on a chart with coordinates `x1, x2, t`.
//!
//! ```text
//! expr  := term (('+' | '-' | '−') term)*
//! term  := unary (('*' | '×' | '/' | '÷') unary)*
//! unary := ('-' | '−' | '+') unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'x1' | 'x2' | 't' | func '(' expr ')' | '(' expr ')'
//! func  := 'sin' | 'cos' | 'sinh' | 'cosh' | 'exp' | 'log'
//! ```

use std::fmt;

use crate::{Error, Result};

/// Maximum nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 64;
/// Maximum source length in bytes.
pub const MAX_SOURCE_LEN: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X1,
    X2,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
}

impl Func {
    const ALL: [(Func, &'static str); 6] = [
        (Func::Sinh, "sinh"),
        (Func::Cosh, "cosh"),
        (Func::Sin, "sin"),
        (Func::Cos, "cos"),
        (Func::Exp, "exp"),
        (Func::Log, "log"),
    ];

    fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(f, _)| *f == self)
            .map(|(_, n)| *n)
            .expect("listed")
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at the chart point `(x1, x2, t)`.
    pub fn eval(&self, p: [f64; 3]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X1) => p[0],
            Expr::Var(Var::X2) => p[1],
            Expr::Var(Var::T) => p[2],
            Expr::Neg(e) => -e.eval(p),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(p), b.eval(p));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(p)),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised; parsing the output gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(Var::X1) => write!(f, "x1"),
            Expr::Var(Var::X2) => write!(f, "x2"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
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

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
    }

    fn eat(&mut self, options: &[char]) -> Option<char> {
        match self.peek() {
            Some(c) if options.contains(&c) => {
                self.bump(c);
                Some(c)
            }
            _ => None,
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(c) = self.eat(&['+', '-', '−']) {
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat(&['*', '×', '/', '÷']) {
            let op = if c == '*' || c == '×' {
                BinOp::Mul
            } else {
                BinOp::Div
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let out = match self.eat(&['-', '−', '+']) {
            Some('+') => self.unary()?,
            Some(_) => Expr::Neg(Box::new(self.unary()?)),
            None => self.power()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&['^']).is_some() {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.bump('(');
                let e = self.expr()?;
                if self.eat(&[')']).is_none() {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = &self.src[start..end];
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("malformed number `{text}`")))?;
        if !value.is_finite() {
            return Err(self.error(format!("number `{text}` is out of range")));
        }
        self.pos = end;
        Ok(Expr::Num(value))
    }

    fn word(&mut self) -> Result<Expr> {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        let word = &self.src[start..start + len];
        let var = match word {
            "x1" => Some(Var::X1),
            "x2" => Some(Var::X2),
            "t" => Some(Var::T),
            _ => None,
        };
        if let Some(v) = var {
            self.pos += len;
            return Ok(Expr::Var(v));
        }
        let func = Func::ALL
            .iter()
            .find(|(_, name)| *name == word)
            .map(|(f, _)| *f)
            .ok_or_else(|| self.error(format!("unknown identifier `{word}`")))?;
        self.pos += len;
        if self.eat(&['(']).is_none() {
            return Err(self.error(format!("expected `(` after `{word}`")));
        }
        let arg = self.expr()?;
        if self.eat(&[')']).is_none() {
            return Err(self.error("expected `)`"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

/// Parses a single expression; the whole input must be consumed.
pub fn parse_expr(src: &str) -> Result<Expr> {
    if src.len() > MAX_SOURCE_LEN {
        return Err(Error::Parse {
            offset: MAX_SOURCE_LEN,
            message: format!("input longer than {MAX_SOURCE_LEN} bytes"),
        });
    }
    let mut p = Parser {
        src,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected trailing `{c}`")));
    }
    Ok(e)
}

/// Parses a field file: either `x1 = …`, `x2 = …`, `t = …` in any order, or
/// three bare expressions in the order `x1, x2, t`. Blank lines and text
/// after `#` are ignored.
pub fn parse_field_file(src: &str) -> Result<[Expr; 3]> {
    if src.len() > MAX_SOURCE_LEN {
        return Err(Error::Parse {
            offset: MAX_SOURCE_LEN,
            message: format!("input longer than {MAX_SOURCE_LEN} bytes"),
        });
    }
    let mut named: [Option<Expr>; 3] = [None, None, None];
    let mut bare: Vec<Expr> = Vec::new();
    let mut line_start = 0;
    for line in src.split_inclusive('\n') {
        let offset = line_start;
        line_start += line.len();
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let shift = |e: Error| match e {
            Error::Parse { offset: o, message } => Error::Parse {
                offset: o + offset,
                message,
            },
            other => other,
        };
        match content.split_once('=') {
            Some((lhs, rhs)) => {
                let slot = match lhs.trim() {
                    "x1" => 0,
                    "x2" => 1,
                    "t" => 2,
                    other => {
                        return Err(Error::Parse {
                            offset,
                            message: format!("unknown component `{other}`"),
                        })
                    }
                };
                if named[slot].is_some() {
                    return Err(Error::Parse {
                        offset,
                        message: format!("component `{}` given twice", lhs.trim()),
                    });
                }
                let e = parse_expr(rhs).map_err(|e| match e {
                    Error::Parse { offset: o, message } => Error::Parse {
                        offset: o + offset + lhs.len() + 1,
                        message,
                    },
                    other => other,
                })?;
                named[slot] = Some(e);
            }
            None => bare.push(parse_expr(content).map_err(shift)?),
        }
    }
    let any_named = named.iter().any(Option::is_some);
    if any_named && !bare.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            message: "mixes named and bare components".into(),
        });
    }
    if any_named {
        let [a, b, c] = named;
        match (a, b, c) {
            (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
            _ => Err(Error::Parse {
                offset: src.len(),
                message: "expected components x1, x2 and t".into(),
            }),
        }
    } else {
        <[Expr; 3]>::try_from(bare).map_err(|v| Error::Parse {
            offset: src.len(),
            message: format!("expected 3 component lines, found {}", v.len()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(s: &str, p: [f64; 3]) -> f64 {
        parse_expr(s).unwrap().eval(p)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3", [0.0; 3]), 7.0);
        assert_eq!(eval("2 ^ 3 ^ 2", [0.0; 3]), 512.0);
        assert_eq!(eval("-2 ^ 2", [0.0; 3]), -4.0);
        assert_eq!(eval("2 ^ -1", [0.0; 3]), 0.5);
        assert_eq!(eval("8 / 4 / 2", [0.0; 3]), 1.0);
        assert_eq!(eval("10 - 4 - 3", [0.0; 3]), 3.0);
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(eval("3 × 4 ÷ 2 − 1", [0.0; 3]), 5.0);
    }

    #[test]
    fn variables_and_functions() {
        let v = eval(
            "x1 + 2*x2 + cosh(t) - exp(0) + log(exp(1)) + sin(0) + cos(0) + sinh(0)",
            [1.0, 2.0, 0.0],
        );
        assert!((v - 7.0).abs() < 1e-15);
        assert!((eval("1.5e-1 * t", [0.0, 0.0, 2.0]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_expr("1 + foo") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("(1 + 2").is_err());
        assert!(parse_expr("1 2").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("sin 1").is_err());
        assert!(parse_expr("1e999").is_err());
    }

    #[test]
    fn depth_limit() {
        let deep = format!("{}1{}", "(".repeat(200), ")".repeat(200));
        assert!(parse_expr(&deep).is_err());
        let minus = "-".repeat(500) + "1";
        assert!(parse_expr(&minus).is_err());
        let ok = format!("{}1{}", "(".repeat(20), ")".repeat(20));
        assert!(parse_expr(&ok).is_ok());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "1 + 2 * x1",
            "-t ^ 2",
            "sin(x1) / (1 + cosh(x2 - t))",
            "0.1 * exp(-x1)",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn field_files() {
        let named = "# comment\nt = 1\n\nx1 = x2 # trailing\nx2 = -x1\n";
        let f = parse_field_file(named).unwrap();
        assert_eq!(f[0].eval([1.0, 2.0, 3.0]), 2.0);
        assert_eq!(f[1].eval([1.0, 2.0, 3.0]), -1.0);
        assert_eq!(f[2].eval([1.0, 2.0, 3.0]), 1.0);
        let bare = parse_field_file("0\n0\nt\n").unwrap();
        assert_eq!(bare[2].eval([0.0, 0.0, 5.0]), 5.0);
        assert!(parse_field_file("x1 = 1\nx1 = 2\nt = 0\n").is_err());
        assert!(parse_field_file("x1 = 1\n0\n0\n").is_err());
        assert!(parse_field_file("0\n0\n").is_err());
        assert!(parse_field_file("y = 1\n").is_err());
        match parse_field_file("x1 = 1\nx2 = 1 +\nt = 0") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 16),
            other => panic!("{other:?}"),
        }
    }
}
