use std::fmt;

use super::Expr;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => SUM,
            Expr::Mul(..) | Expr::Div(..) => PRODUCT,
            Expr::Neg(_) => UNARY,
            Expr::Num(x) if x.is_sign_negative() => UNARY,
            Expr::Pow(..) => POWER,
            _ => ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, UNARY)
            }
            Expr::Add(a, b) => binary(f, a, " + ", b, SUM),
            Expr::Sub(a, b) => binary(f, a, " - ", b, SUM),
            Expr::Mul(a, b) => binary(f, a, "*", b, PRODUCT),
            Expr::Div(a, b) => binary(f, a, "/", b, PRODUCT),
            Expr::Pow(a, n) => {
                a.write_at(f, POWER)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, level: u8) -> fmt::Result {
    a.write_at(f, level)?;
    f.write_str(op)?;
    b.write_at(f, level + 1)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use crate::dsl::parse;

    #[test]
    fn round_trips() {
        for src in ["u^2 + u*v^3", "-(u - v)^2", "(u^2)^3", "u - (v - 1)", "u/(v*t)", "sqrt(1 + 4*u^2)*-v", "(-u)^2", "2*u^-3"] {
            let tree = parse(src).unwrap();
            let printed = tree.to_string();
            assert_eq!(parse(&printed).unwrap(), tree, "{src} -> {printed}");
        }
    }
}
