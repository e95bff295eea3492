use nalgebra::Vector3;

use super::{BasePoint, Jet2, JetError};

/// Jet-valued vector in R^3.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVec3 {
    pub x: Jet2,
    pub y: Jet2,
    pub z: Jet2,
}

impl JetVec3 {
    pub fn new(x: Jet2, y: Jet2, z: Jet2) -> Self {
        assert!(x.base() == y.base() && y.base() == z.base(), "components at different base points");
        Self { x, y, z }
    }

    pub fn constant(base: BasePoint, order: usize, value: Vector3<f64>) -> Self {
        Self::new(
            Jet2::constant(base, order, value.x),
            Jet2::constant(base, order, value.y),
            Jet2::constant(base, order, value.z),
        )
    }

    pub fn base(&self) -> BasePoint {
        self.x.base()
    }

    pub fn order(&self) -> usize {
        self.x.order().min(self.y.order()).min(self.z.order())
    }

    pub fn value(&self) -> Vector3<f64> {
        Vector3::new(self.x.value(), self.y.value(), self.z.value())
    }

    /// Coefficient vector of `(u-u0)^i (v-v0)^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Result<Vector3<f64>, JetError> {
        Ok(Vector3::new(self.x.coeff(i, j)?, self.y.coeff(i, j)?, self.z.coeff(i, j)?))
    }

    /// Partial derivative vector `d^i_u d^j_v` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> Result<Vector3<f64>, JetError> {
        Ok(Vector3::new(self.x.partial(i, j)?, self.y.partial(i, j)?, self.z.partial(i, j)?))
    }

    /// Largest coefficient magnitude over all components.
    pub fn max_abs(&self) -> f64 {
        self.x.max_abs().max(self.y.max_abs()).max(self.z.max_abs())
    }

    pub fn components(&self) -> [&Jet2; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn map(&self, g: impl Fn(&Jet2) -> Jet2) -> Self {
        Self::new(g(&self.x), g(&self.y), g(&self.z))
    }

    pub fn try_map(&self, g: impl Fn(&Jet2) -> Result<Jet2, JetError>) -> Result<Self, JetError> {
        Ok(Self::new(g(&self.x)?, g(&self.y)?, g(&self.z)?))
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|c| c.truncate(order))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.x + &other.x, &self.y + &other.y, &self.z + &other.z)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.x - &other.x, &self.y - &other.y, &self.z - &other.z)
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|c| c.scale(k))
    }

    /// Multiply every component by a scalar jet.
    pub fn mul_scalar(&self, s: &Jet2) -> Self {
        self.map(|c| c * s)
    }

    pub fn dot(&self, other: &Self) -> Jet2 {
        &(&(&self.x * &other.x) + &(&self.y * &other.y)) + &(&self.z * &other.z)
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            &(&self.y * &other.z) - &(&self.z * &other.y),
            &(&self.z * &other.x) - &(&self.x * &other.z),
            &(&self.x * &other.y) - &(&self.y * &other.x),
        )
    }

    pub fn norm_squared(&self) -> Jet2 {
        self.dot(self)
    }

    pub fn norm(&self) -> Result<Jet2, JetError> {
        self.norm_squared().sqrt()
    }

    pub fn normalize(&self, eps_den: f64) -> Result<Self, JetError> {
        let inv = self.norm()?.recip(eps_den)?;
        Ok(self.mul_scalar(&inv))
    }

    pub fn d_u(&self) -> Result<Self, JetError> {
        self.try_map(Jet2::d_u)
    }

    pub fn d_v(&self) -> Result<Self, JetError> {
        self.try_map(Jet2::d_v)
    }

    pub fn divide_by_v(&self, eps_div: f64) -> Result<Self, JetError> {
        self.try_map(|c| c.divide_by_v(eps_div))
    }

    pub fn compose(&self, u: &Jet2, v: &Jet2) -> Result<Self, JetError> {
        self.try_map(|c| c.compose(u, v))
    }

    pub fn eval_offset(&self, du: f64, dv: f64) -> Vector3<f64> {
        Vector3::new(self.x.eval_offset(du, dv), self.y.eval_offset(du, dv), self.z.eval_offset(du, dv))
    }
}

impl JetVec3 {
    /// Scalar triple product `det(a, b, c)`.
    pub fn det3(a: &JetVec3, b: &JetVec3, c: &JetVec3) -> Jet2 {
        a.dot(&b.cross(c))
    }
}
