//! Formula language for surfaces and curves.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? INT)*
//! atom  := NUMBER | u | v | t | pi | func '(' expr ')' | '(' expr ')'
//! ```

mod parse;
mod print;

pub use parse::{parse, parse_with, ParseError};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::jet::{BasePoint, Jet2, JetError};
use crate::policy::NumericPolicy;

/// Free variables of the formula language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    U,
    V,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::V => "v",
            Var::T => "t",
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// Variable values for scalar evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bindings {
    pub u: f64,
    pub v: f64,
    pub t: f64,
}

impl Bindings {
    pub fn uv(u: f64, v: f64) -> Self {
        Self { u, v, t: 0.0 }
    }

    pub fn t(t: f64) -> Self {
        Self { u: 0.0, v: 0.0, t }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("division by zero")]
    DivisionByZero,
}

impl Expr {
    pub fn num(x: f64) -> Self {
        Expr::Num(x)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    /// Variables occurring in the tree.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                out.insert(*v);
            }
        });
        out
    }

    /// Whether any call to `func` occurs.
    pub fn uses(&self, func: Func) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Expr::Call(f, _) = e {
                found |= *f == func;
            }
        });
        found
    }

    fn visit(&self, g: &mut impl FnMut(&Expr)) {
        g(self);
        match self {
            Expr::Num(_) | Expr::Var(_) | Expr::Pi => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.visit(g),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(g);
                b.visit(g);
            }
        }
    }

    /// Scalar evaluation.
    pub fn eval(&self, at: Bindings) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::U) => at.u,
            Expr::Var(Var::V) => at.v,
            Expr::Var(Var::T) => at.t,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(a) => -a.eval(at)?,
            Expr::Add(a, b) => a.eval(at)? + b.eval(at)?,
            Expr::Sub(a, b) => a.eval(at)? - b.eval(at)?,
            Expr::Mul(a, b) => a.eval(at)? * b.eval(at)?,
            Expr::Div(a, b) => {
                let d = b.eval(at)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(at)? / d
            }
            Expr::Pow(a, n) => {
                let x = a.eval(at)?;
                if x == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                x.powi(*n)
            }
            Expr::Call(f, a) => {
                let x = a.eval(at)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Sqrt if x < 0.0 => return Err(EvalError::Domain { function: "sqrt", value: x }),
                    Func::Sqrt => x.sqrt(),
                    Func::Abs => x.abs(),
                }
            }
        })
    }

    /// Jet of the expression at `base`.
    ///
    /// `u` and `v` map to the two jet coordinates. A curve variable `t`
    /// is carried by the first coordinate, so curve jets read off
    /// derivatives with [`Jet2::coeff`]`(k, 0)`.
    pub fn eval_jet(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<Jet2, EvalError> {
        Ok(match self {
            Expr::Num(x) => Jet2::constant(base, order, *x),
            Expr::Var(Var::U) | Expr::Var(Var::T) => Jet2::var_u(base, order),
            Expr::Var(Var::V) => Jet2::var_v(base, order),
            Expr::Pi => Jet2::constant(base, order, std::f64::consts::PI),
            Expr::Neg(a) => -a.eval_jet(base, order, policy)?,
            Expr::Add(a, b) => a.eval_jet(base, order, policy)? + b.eval_jet(base, order, policy)?,
            Expr::Sub(a, b) => a.eval_jet(base, order, policy)? - b.eval_jet(base, order, policy)?,
            Expr::Mul(a, b) => a.eval_jet(base, order, policy)? * b.eval_jet(base, order, policy)?,
            Expr::Div(a, b) => {
                let num = a.eval_jet(base, order, policy)?;
                num.try_div(&b.eval_jet(base, order, policy)?, policy.eps_den)?
            }
            Expr::Pow(a, n) => a.eval_jet(base, order, policy)?.powi(*n, policy.eps_den)?,
            Expr::Call(f, a) => {
                let x = a.eval_jet(base, order, policy)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => x.sqrt()?,
                    Func::Abs => x.abs(policy.eps_abs)?,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_eval() {
        let e = parse("u^2 + u*v^3").unwrap();
        assert_eq!(e.eval(Bindings::uv(2.0, 1.0)).unwrap(), 6.0);
        let e = parse("-2^2").unwrap();
        assert_eq!(e.eval(Bindings::default()).unwrap(), -4.0);
        let e = parse("2*(t - 1)^-1").unwrap();
        assert_eq!(e.eval(Bindings::t(3.0)).unwrap(), 1.0);
    }

    #[test]
    fn jet_at_zero_order_is_scalar() {
        let e = parse("sin(u)*exp(v) + sqrt(2 + u)").unwrap();
        let p = NumericPolicy::default();
        let j = e.eval_jet(BasePoint::new(0.3, -0.2), 0, &p).unwrap();
        let s = e.eval(Bindings::uv(0.3, -0.2)).unwrap();
        assert_eq!(j.value(), s);
    }

    #[test]
    fn abs_at_zero_is_rejected() {
        let e = parse("abs(t)").unwrap();
        let err = e.eval_jet(BasePoint::new(0.0, 0.0), 2, &NumericPolicy::default()).unwrap_err();
        assert!(matches!(err, EvalError::Jet(JetError::DomainError { function: "abs", .. })));
    }

    #[test]
    fn variables_are_collected() {
        let e = parse("u*sin(v) + pi").unwrap();
        assert_eq!(e.variables().into_iter().collect::<Vec<_>>(), vec![Var::U, Var::V]);
        assert!(!e.uses(Func::Abs));
    }
}
