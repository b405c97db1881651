//! Three-component jets, i.e. the Taylor expansion of a vector-valued curve.

use nalgebra::Vector3;

use crate::jet::{Jet, JetError};

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct JetVec3 {
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
}

impl JetVec3 {
    pub fn new(x: Jet, y: Jet, z: Jet) -> Self {
        Self { x, y, z }
    }

    pub fn constant(v: &Vec3, order: usize) -> Self {
        Self::new(
            Jet::constant(v.x, order),
            Jet::constant(v.y, order),
            Jet::constant(v.z, order),
        )
    }

    pub fn order(&self) -> usize {
        self.x.order().min(self.y.order()).min(self.z.order())
    }

    pub fn value(&self) -> Vec3 {
        Vec3::new(self.x.value(), self.y.value(), self.z.value())
    }

    /// `k`-th Taylor coefficient as a vector.
    pub fn coeff(&self, k: usize) -> Vec3 {
        Vec3::new(self.x.coeff(k), self.y.coeff(k), self.z.coeff(k))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.x.derivative(), self.y.derivative(), self.z.derivative())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(
            self.x.truncate(order),
            self.y.truncate(order),
            self.z.truncate(order),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x.scale(s), self.y.scale(s), self.z.scale(s))
    }

    pub fn mul_scalar_jet(&self, s: &Jet) -> Self {
        Self::new(&self.x * s, &self.y * s, &self.z * s)
    }

    pub fn div_scalar_jet(&self, s: &Jet) -> Result<Self, JetError> {
        Ok(Self::new(
            self.x.div_jet(s)?,
            self.y.div_jet(s)?,
            self.z.div_jet(s)?,
        ))
    }

    pub fn dot(&self, o: &Self) -> Jet {
        &(&(&self.x * &o.x) + &(&self.y * &o.y)) + &(&self.z * &o.z)
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            &(&self.y * &o.z) - &(&self.z * &o.y),
            &(&self.z * &o.x) - &(&self.x * &o.z),
            &(&self.x * &o.y) - &(&self.y * &o.x),
        )
    }

    pub fn norm(&self) -> Result<Jet, JetError> {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Result<Self, JetError> {
        let n = self.norm()?;
        self.div_scalar_jet(&n)
    }
}
