//! Truncated bivariate Taylor jets.
//!
//! A [`Jet2`] of order `D` at `(u0, v0)` stores the coefficients
//! `c_ij = (1/(i! j!)) d^i_u d^j_v g(u0, v0)` for `i + j <= D` in graded
//! lexicographic order: all monomials of degree 0, then degree 1, and so
//! on, with the `v` exponent increasing inside each degree.

mod vec3;

pub use vec3::JetVec3;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by jet arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose constant term {value:e} is below {threshold:e}")]
    DivisionByZeroConstant { value: f64, threshold: f64 },
    #[error("{function} is undefined at constant term {value}")]
    DomainError { function: &'static str, value: f64 },
    #[error("jet is not divisible by v: coefficient of u^{index} is {value:e} (threshold {threshold:e})")]
    NotDivisible { index: usize, value: f64, threshold: f64 },
    #[error("base point mismatch: expected ({expected_u}, {expected_v}), found ({found_u}, {found_v})")]
    BasePointMismatch {
        expected_u: f64,
        expected_v: f64,
        found_u: f64,
        found_v: f64,
    },
    #[error("jet orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("insufficient jet order: needed {needed}, available {available}")]
    InsufficientOrder { needed: usize, available: usize },
}

/// The point a jet is expanded around.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub u: f64,
    pub v: f64,
}

impl BasePoint {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Binary operations accepted by [`jet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary functions accepted by [`jet_elementary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Pow(f64),
}

/// Number of stored coefficients for a jet of `order`.
pub const fn coeff_count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Storage slot of the monomial `u^i v^j`.
pub const fn index(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

/// Truncated bivariate Taylor polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    base: BasePoint,
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet2 {
    /// Jet from raw graded-lex coefficients.
    ///
    /// # Panics
    /// Panics if the coefficient count does not match `order`.
    pub fn from_coeffs(base: BasePoint, order: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), coeff_count(order), "coefficient count");
        Self { base, order, coeffs }
    }

    /// Jet whose coefficients are produced by `g(i, j)`.
    pub fn from_fn(base: BasePoint, order: usize, mut g: impl FnMut(usize, usize) -> f64) -> Self {
        let mut coeffs = vec![0.0; coeff_count(order)];
        for n in 0..=order {
            for j in 0..=n {
                coeffs[index(n - j, j)] = g(n - j, j);
            }
        }
        Self { base, order, coeffs }
    }

    pub fn zero(base: BasePoint, order: usize) -> Self {
        Self { base, order, coeffs: vec![0.0; coeff_count(order)] }
    }

    pub fn constant(base: BasePoint, order: usize, value: f64) -> Self {
        let mut out = Self::zero(base, order);
        out.coeffs[0] = value;
        out
    }

    /// The coordinate function `u` expanded at `base`.
    pub fn var_u(base: BasePoint, order: usize) -> Self {
        let mut out = Self::constant(base, order, base.u);
        if order >= 1 {
            out.coeffs[index(1, 0)] = 1.0;
        }
        out
    }

    /// The coordinate function `v` expanded at `base`.
    pub fn var_v(base: BasePoint, order: usize) -> Self {
        let mut out = Self::constant(base, order, base.v);
        if order >= 1 {
            out.coeffs[index(0, 1)] = 1.0;
        }
        out
    }

    pub fn base(&self) -> BasePoint {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Constant term.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient of `(u-u0)^i (v-v0)^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Result<f64, JetError> {
        if i + j > self.order {
            return Err(JetError::InsufficientOrder { needed: i + j, available: self.order });
        }
        Ok(self.coeffs[index(i, j)])
    }

    /// Partial derivative `d^i_u d^j_v` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> Result<f64, JetError> {
        Ok(self.coeff(i, j)? * factorial(i) * factorial(j))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Copy truncated to `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self {
            base: self.base,
            order,
            coeffs: self.coeffs[..coeff_count(order)].to_vec(),
        }
    }

    fn map(&self, g: impl Fn(f64) -> f64) -> Self {
        Self {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| g(c)).collect(),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|c| c * k)
    }

    pub fn add_scalar(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    fn check_base(&self, other: &Self) {
        assert!(
            self.base == other.base,
            "jets expanded at different base points: {} vs {}",
            self.base,
            other.base
        );
    }

    fn zip(&self, other: &Self, g: impl Fn(f64, f64) -> f64) -> Self {
        self.check_base(other);
        let order = self.order.min(other.order);
        let n = coeff_count(order);
        let coeffs = self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(&a, &b)| g(a, b)).collect();
        Self { base: self.base, order, coeffs }
    }

    fn mul_jet(&self, other: &Self) -> Self {
        self.check_base(other);
        let order = self.order.min(other.order);
        let mut out = vec![0.0; coeff_count(order)];
        for na in 0..=order {
            for ja in 0..=na {
                let a = self.coeffs[index(na - ja, ja)];
                if a == 0.0 {
                    continue;
                }
                let ia = na - ja;
                for nb in 0..=(order - na) {
                    for jb in 0..=nb {
                        let ib = nb - jb;
                        out[index(ia + ib, ja + jb)] += a * other.coeffs[index(ib, jb)];
                    }
                }
            }
        }
        Self { base: self.base, order, coeffs: out }
    }

    /// Quotient `self / other`.
    pub fn try_div(&self, other: &Self, eps_den: f64) -> Result<Self, JetError> {
        self.check_base(other);
        let b0 = other.coeffs[0];
        if b0.abs() < eps_den || b0 == 0.0 {
            return Err(JetError::DivisionByZeroConstant { value: b0, threshold: eps_den });
        }
        let order = self.order.min(other.order);
        let mut q = vec![0.0; coeff_count(order)];
        for n in 0..=order {
            for j in 0..=n {
                let i = n - j;
                let mut acc = self.coeffs[index(i, j)];
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        acc -= other.coeffs[index(k, l)] * q[index(i - k, j - l)];
                    }
                }
                q[index(i, j)] = acc / b0;
            }
        }
        Ok(Self { base: self.base, order, coeffs: q })
    }

    pub fn recip(&self, eps_den: f64) -> Result<Self, JetError> {
        Self::constant(self.base, self.order, 1.0).try_div(self, eps_den)
    }

    /// Evaluate `sum_k t[k] (self - self0)^k` by Horner's rule.
    fn compose_series(&self, series: &[f64]) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let mut acc = Self::constant(self.base, self.order, series[self.order.min(series.len() - 1)]);
        for k in (0..self.order.min(series.len() - 1)).rev() {
            acc = acc.mul_jet(&delta).add_scalar(series[k]);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(JetError::DomainError { function: "sqrt", value: a0 });
        }
        Ok(self.compose_series(&power_series(a0, 0.5, self.order)))
    }

    /// Real power with a positive constant term.
    pub fn powf(&self, p: f64) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(JetError::DomainError { function: "pow", value: a0 });
        }
        Ok(self.compose_series(&power_series(a0, p, self.order)))
    }

    /// Integer power by repeated squaring; negative exponents divide.
    pub fn powi(&self, n: i32, eps_den: f64) -> Result<Self, JetError> {
        let mut result = Self::constant(self.base, self.order, 1.0);
        let mut square = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_jet(&square);
            }
            e >>= 1;
            if e > 0 {
                square = square.mul_jet(&square);
            }
        }
        if n < 0 {
            result.recip(eps_den)
        } else {
            Ok(result)
        }
    }

    pub fn exp(&self) -> Self {
        let e0 = self.value().exp();
        let series: Vec<f64> = (0..=self.order).map(|k| e0 / factorial(k)).collect();
        self.compose_series(&series)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let series: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose_series(&series)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let series: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4] / factorial(k)).collect();
        self.compose_series(&series)
    }

    /// `|self|`, defined only away from a zero constant term.
    pub fn abs(&self, eps: f64) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0.abs() <= eps {
            return Err(JetError::DomainError { function: "abs", value: a0 });
        }
        Ok(if a0 < 0.0 { -self.clone() } else { self.clone() })
    }

    /// Partial derivative in `u`; the order drops by one.
    pub fn d_u(&self) -> Result<Self, JetError> {
        if self.order == 0 {
            return Err(JetError::InsufficientOrder { needed: 1, available: 0 });
        }
        let order = self.order - 1;
        Ok(Self::from_fn(self.base, order, |i, j| {
            (i + 1) as f64 * self.coeffs[index(i + 1, j)]
        }))
    }

    /// Partial derivative in `v`; the order drops by one.
    pub fn d_v(&self) -> Result<Self, JetError> {
        if self.order == 0 {
            return Err(JetError::InsufficientOrder { needed: 1, available: 0 });
        }
        let order = self.order - 1;
        Ok(Self::from_fn(self.base, order, |i, j| {
            (j + 1) as f64 * self.coeffs[index(i, j + 1)]
        }))
    }

    /// Formal division by `v`, valid for jets expanded on the u-axis.
    ///
    /// Returns `b` of order `D - 1` with `self = v * b`. The v-free
    /// coefficients must vanish to `eps_div * max|c|`.
    pub fn divide_by_v(&self, eps_div: f64) -> Result<Self, JetError> {
        if self.order == 0 {
            return Err(JetError::InsufficientOrder { needed: 1, available: 0 });
        }
        if self.base.v != 0.0 {
            return Err(JetError::BasePointMismatch {
                expected_u: self.base.u,
                expected_v: 0.0,
                found_u: self.base.u,
                found_v: self.base.v,
            });
        }
        let threshold = eps_div * self.max_abs();
        for i in 0..=self.order {
            let c = self.coeffs[index(i, 0)];
            if c.abs() > threshold {
                return Err(JetError::NotDivisible { index: i, value: c, threshold });
            }
        }
        Ok(Self::from_fn(self.base, self.order - 1, |i, j| self.coeffs[index(i, j + 1)]))
    }

    /// Whether the v-free coefficients vanish to tolerance.
    pub fn is_divisible_by_v(&self, eps_div: f64) -> bool {
        let threshold = eps_div * self.max_abs();
        (0..=self.order).all(|i| self.coeffs[index(i, 0)].abs() <= threshold)
    }

    /// Multiply by `(v - v0)^k`; the known order rises by `k`.
    pub fn shift_v(&self, k: usize) -> Self {
        let order = self.order + k;
        Self::from_fn(self.base, order, |i, j| {
            if j >= k && i + j - k <= self.order {
                self.coeffs[index(i, j - k)]
            } else {
                0.0
            }
        })
    }

    /// Keep only the coefficients free of `v`.
    pub fn axis_part(&self) -> Self {
        Self::from_fn(self.base, self.order, |i, j| if j == 0 { self.coeffs[index(i, 0)] } else { 0.0 })
    }

    /// Coefficients `c_{k0}` along the u-direction.
    pub fn u_series(&self) -> Vec<f64> {
        (0..=self.order).map(|i| self.coeffs[index(i, 0)]).collect()
    }

    /// Antiderivative in `u` with constant term `c0`; the order rises by one.
    pub fn integrate_u(&self, c0: f64) -> Self {
        let order = self.order + 1;
        Self::from_fn(self.base, order, |i, j| {
            if i == 0 {
                if j == 0 {
                    c0
                } else {
                    0.0
                }
            } else if i + j - 1 <= self.order {
                self.coeffs[index(i - 1, j)] / i as f64
            } else {
                0.0
            }
        })
    }

    /// Evaluate the truncated polynomial at an offset from the base point.
    pub fn eval_offset(&self, du: f64, dv: f64) -> f64 {
        let mut total = 0.0;
        for n in (0..=self.order).rev() {
            let mut row = 0.0;
            for j in 0..=n {
                row += self.coeffs[index(n - j, j)] * du.powi((n - j) as i32) * dv.powi(j as i32);
            }
            total += row;
        }
        total
    }

    /// Substitute a coordinate change `(u(s,w), v(s,w))`.
    ///
    /// The change jets must share a base point and evaluate to this jet's
    /// base point. The result lives at the change's base point.
    pub fn compose(&self, u: &Jet2, v: &Jet2) -> Result<Self, JetError> {
        if u.base != v.base {
            return Err(JetError::BasePointMismatch {
                expected_u: u.base.u,
                expected_v: u.base.v,
                found_u: v.base.u,
                found_v: v.base.v,
            });
        }
        let tol = |a: f64| 1e-12 * (1.0 + a.abs());
        if (u.value() - self.base.u).abs() > tol(self.base.u) || (v.value() - self.base.v).abs() > tol(self.base.v) {
            return Err(JetError::BasePointMismatch {
                expected_u: self.base.u,
                expected_v: self.base.v,
                found_u: u.value(),
                found_v: v.value(),
            });
        }
        let order = self.order.min(u.order).min(v.order);
        let mut du = u.truncate(order);
        du.coeffs[0] = 0.0;
        let mut dv = v.truncate(order);
        dv.coeffs[0] = 0.0;
        let target = u.base;
        let mut dv_pows = vec![Jet2::constant(target, order, 1.0)];
        for j in 1..=order {
            let next = dv_pows[j - 1].mul_jet(&dv);
            dv_pows.push(next);
        }
        let row = |i: usize| {
            let mut acc = Jet2::zero(target, order);
            for j in 0..=(self.order - i).min(order) {
                let c = self.coeffs[index(i, j)];
                if c != 0.0 {
                    acc = &acc + &dv_pows[j].scale(c);
                }
            }
            acc
        };
        let top = self.order.min(order);
        let mut acc = row(top);
        for i in (0..top).rev() {
            acc = &acc.mul_jet(&du) + &row(i);
        }
        Ok(acc)
    }
}

/// Checked binary arithmetic.
pub fn jet_arith(a: &Jet2, b: &Jet2, kind: ArithKind, eps_den: f64) -> Result<Jet2, JetError> {
    if a.base != b.base {
        return Err(JetError::BasePointMismatch {
            expected_u: a.base.u,
            expected_v: a.base.v,
            found_u: b.base.u,
            found_v: b.base.v,
        });
    }
    if a.order != b.order {
        return Err(JetError::OrderMismatch { left: a.order, right: b.order });
    }
    Ok(match kind {
        ArithKind::Add => a + b,
        ArithKind::Sub => a - b,
        ArithKind::Mul => a * b,
        ArithKind::Div => a.try_div(b, eps_den)?,
    })
}

/// Checked elementary function.
pub fn jet_elementary(a: &Jet2, function: Elementary) -> Result<Jet2, JetError> {
    match function {
        Elementary::Sqrt => a.sqrt(),
        Elementary::Sin => Ok(a.sin()),
        Elementary::Cos => Ok(a.cos()),
        Elementary::Exp => Ok(a.exp()),
        Elementary::Pow(p) => a.powf(p),
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Taylor coefficients of `x^p` around `a0`: `binom(p, k) a0^(p-k)`.
fn power_series(a0: f64, p: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut binom = 1.0;
    for k in 0..=order {
        out.push(binom * a0.powf(p - k as f64));
        binom *= (p - k as f64) / (k as f64 + 1.0);
    }
    out
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.mul_jet(rhs)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        &self + &rhs
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        &self - &rhs
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        &self * &rhs
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.map(|c| -c)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.map(|c| -c)
    }
}
