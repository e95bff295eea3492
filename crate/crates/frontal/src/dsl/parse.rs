use std::fmt;

use thiserror::Error;

use super::{Expr, Func, Var};

/// Syntax error. `offset` is the 1-based byte column of the offending
/// token (one past the end for unexpected end of input).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {offset}: expected {}", ExpectedList(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

struct ExpectedList<'a>(&'a [String]);

impl fmt::Display for ExpectedList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let quoted: Vec<String> = self.0.iter().map(|s| format!("`{s}`")).collect();
        f.write_str(&quoted.join(" or "))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(u32),
    Ident(String),
    Sym(char),
    End,
}

/// Parse with all of `u`, `v`, `t` admitted.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    parse_with(source, &[Var::U, Var::V, Var::T])
}

/// Parse admitting only the listed variables.
pub fn parse_with(source: &str, vars: &[Var]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: source.as_bytes(), pos: 0, vars };
    let tree = p.expr()?;
    let (tok, at) = p.peek()?;
    if tok != Tok::End {
        return Err(p.error(at, &["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(tree)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [Var],
}

impl Parser<'_> {
    fn error(&self, at: usize, expected: &[&str]) -> ParseError {
        ParseError { offset: at + 1, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its start, without consuming it.
    fn peek(&mut self) -> Result<(Tok, usize), ParseError> {
        let save = self.pos;
        let out = self.next();
        self.pos = save;
        out
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start).map(|t| (t, start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
            return Ok((Tok::Ident(word.to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Sym(c as char), start));
        }
        Err(self.error(start, &["number", "variable", "function", "("]))
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let int_len = digits(self);
        let mut integral = true;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            integral = false;
            if digits(self) == 0 && int_len == 0 {
                return Err(self.error(start, &["digit"]));
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            } else {
                integral = false;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if integral {
            if let Ok(n) = text.parse::<u32>() {
                return Ok(Tok::Int(n));
            }
        }
        text.parse::<f64>().map(Tok::Num).map_err(|_| self.error(start, &["number"]))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek()?.0 {
                Tok::Sym('+') => {
                    self.next()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.next()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek()?.0 {
                Tok::Sym('*') => {
                    self.next()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.next()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek()?.0 == Tok::Sym('-') {
            self.next()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek()?.0 == Tok::Sym('^') {
            self.next()?;
            let (mut tok, mut at) = self.next()?;
            let negative = tok == Tok::Sym('-');
            if negative {
                (tok, at) = self.next()?;
            }
            let Tok::Int(n) = tok else {
                return Err(self.error(at, &["integer exponent"]));
            };
            let n = i32::try_from(n).map_err(|_| self.error(at, &["integer exponent"]))?;
            base = Expr::Pow(Box::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, at) = self.next()?;
        match tok {
            Tok::Num(x) => Ok(Expr::Num(x)),
            Tok::Int(n) => Ok(Expr::Num(n as f64)),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.close()?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(&name, at),
            _ => Err(self.error(at, &["number", "variable", "function", "("])),
        }
    }

    fn ident(&mut self, name: &str, at: usize) -> Result<Expr, ParseError> {
        if name == "pi" {
            return Ok(Expr::Pi);
        }
        if let Some(var) = [Var::U, Var::V, Var::T].into_iter().find(|v| v.name() == name) {
            if self.vars.contains(&var) {
                return Ok(Expr::Var(var));
            }
            let names: Vec<&str> = self.vars.iter().map(|v| v.name()).collect();
            return Err(self.error(at, &names));
        }
        if let Some(func) = Func::from_name(name) {
            let (tok, open_at) = self.next()?;
            if tok != Tok::Sym('(') {
                return Err(self.error(open_at, &["("]));
            }
            let arg = self.expr()?;
            self.close()?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        let mut names: Vec<&str> = self.vars.iter().map(|v| v.name()).collect();
        names.push("pi");
        names.extend(Func::ALL.iter().map(|f| f.name()));
        Err(self.error(at, &names))
    }

    fn close(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.next()?;
        if tok == Tok::Sym(')') {
            Ok(())
        } else {
            Err(self.error(at, &[")"]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn power_of_variable() {
        assert_eq!(parse("v^2").unwrap(), Expr::Pow(b(Expr::Var(Var::V)), 2));
    }

    #[test]
    fn sum_of_products() {
        let want = Expr::Add(
            b(Expr::Pow(b(Expr::Var(Var::U)), 2)),
            b(Expr::Mul(b(Expr::Var(Var::U)), b(Expr::Pow(b(Expr::Var(Var::V)), 3)))),
        );
        assert_eq!(parse("u^2 + u*v^3").unwrap(), want);
        assert_eq!(parse("  u ^ 2+u *v^3 ").unwrap(), want);
    }

    #[test]
    fn unclosed_call() {
        let err = parse("sin(u").unwrap_err();
        assert_eq!(err.offset, 6);
        assert_eq!(err.expected, vec![")".to_string()]);
    }

    #[test]
    fn minus_binds_looser_than_power() {
        assert_eq!(parse("-u^2").unwrap(), Expr::Neg(b(Expr::Pow(b(Expr::Var(Var::U)), 2))));
    }

    #[test]
    fn left_associative() {
        let want = Expr::Sub(b(Expr::Sub(b(Expr::Var(Var::U)), b(Expr::Var(Var::V)))), b(Expr::Num(1.0)));
        assert_eq!(parse("u - v - 1").unwrap(), want);
    }

    #[test]
    fn fractional_exponent_rejected() {
        let err = parse("u^2.5").unwrap_err();
        assert_eq!(err.offset, 3);
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_with("u + t", &[Var::U, Var::V]).unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn trailing_garbage() {
        assert!(parse("u v").is_err());
        assert!(parse("u )").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse("1e-3").unwrap(), Expr::Num(1e-3));
        assert_eq!(parse("2.5E2").unwrap(), Expr::Num(250.0));
    }
}
