//! Truncated Taylor series ("jets") of scalar functions of one variable.
//!
//! A [`Jet`] of order `K` stores the Taylor coefficients `c_0..=c_K` of a
//! function about some base point, so that the `k`-th derivative equals
//! `k! * c_k`. Arithmetic between jets of different orders truncates to the
//! smaller order.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Default ceiling on jet order used by expression evaluation.
pub const DEFAULT_MAX_ORDER: usize = 8;

/// Threshold on `|cos|` below which `tan` reports a pole.
pub const TAN_POLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("requested jet order {requested} exceeds maximum {max}")]
    OrderOverflow { requested: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Jet {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity function `t` expanded about `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = t0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// `k`-th derivative at the base point, `k! * c_k`.
    pub fn derivative_value(&self, k: usize) -> f64 {
        factorial(k) * self.coeff(k)
    }

    /// All derivatives `f, f', f'', ...` at the base point.
    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.coeffs.len())
            .map(|k| self.derivative_value(k))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Jet of the derivative function; one order lower. A constant jet of
    /// order 0 differentiates to the zero jet of order 0.
    pub fn derivative(&self) -> Jet {
        if self.order() == 0 {
            return Jet::constant(0.0, 0);
        }
        let coeffs = (0..self.order())
            .map(|k| (k + 1) as f64 * self.coeffs[k + 1])
            .collect();
        Jet { coeffs }
    }

    /// Antiderivative with the given value at the base point; one order higher.
    pub fn integral(&self, value: f64) -> Jet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(value);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k + 1) as f64),
        );
        Jet { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let n = (order + 1).min(self.coeffs.len());
        Jet {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Evaluates the truncated polynomial at offset `h` from the base point.
    pub fn eval_offset(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn mul_jet(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len().min(other.coeffs.len());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
            .collect();
        Jet { coeffs }
    }

    pub fn div_jet(&self, other: &Jet) -> Result<Jet, JetError> {
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::Domain("division by a jet with zero value".into()));
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc -= other.coeffs[i] * q[k - i];
            }
            q[k] = acc / b0;
        }
        Ok(Jet { coeffs: q })
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, self.order()).div_jet(self)
    }

    pub fn square(&self) -> Jet {
        self.mul_jet(self)
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let n = a.len();
        let mut e = vec![0.0; n];
        e[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet { coeffs: e }
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if a[0] <= 0.0 || a[0].is_nan() {
            return Err(JetError::Domain(format!("log of non-positive value {}", a[0])));
        }
        let n = a.len();
        let mut l = vec![0.0; n];
        l[0] = a[0].ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Ok(Jet { coeffs: l })
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if a[0] < 0.0 || a[0].is_nan() || (a[0] == 0.0 && a.len() > 1) {
            return Err(JetError::Domain(format!("sqrt of value {}", a[0])));
        }
        let n = a.len();
        let mut s = vec![0.0; n];
        s[0] = a[0].sqrt();
        for k in 1..n {
            let acc: f64 = (1..k).map(|j| s[j] * s[k - j]).sum();
            s[k] = (a[k] - acc) / (2.0 * s[0]);
        }
        Ok(Jet { coeffs: s })
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet, JetError> {
        let (s, c) = self.sin_cos();
        if c.value().abs() < TAN_POLE_EPS {
            return Err(JetError::Domain(format!(
                "tan pole at argument {}",
                self.value()
            )));
        }
        s.div_jet(&c)
    }

    /// `self^p` for a constant real exponent.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p == 0.0 {
            return Ok(Jet::constant(1.0, self.order()));
        }
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            return self.powi(p as i32);
        }
        let a = &self.coeffs;
        if a[0] <= 0.0 || a[0].is_nan() {
            return Err(JetError::Domain(format!(
                "non-integer power {p} of non-positive value {}",
                a[0]
            )));
        }
        let n = a.len();
        let mut v = vec![0.0; n];
        v[0] = a[0].powf(p);
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| ((p + 1.0) * j as f64 - k as f64) * a[j] * v[k - j])
                .sum();
            v[k] = s / (k as f64 * a[0]);
        }
        Ok(Jet { coeffs: v })
    }

    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_jet(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    pub fn atan(&self) -> Jet {
        // (atan u)' = u' / (1 + u^2)
        let du = self.derivative();
        let den = self.square().add_scalar(1.0);
        let w = du.div_jet(&den).expect("1 + u^2 is positive");
        let out = w.integral(self.value().atan());
        out.truncate(self.order())
    }

    pub fn asin(&self) -> Result<Jet, JetError> {
        let u0 = self.value();
        if !(u0.abs() < 1.0) {
            return Err(JetError::Domain(format!("asin of value {u0}")));
        }
        // (asin u)' = u' / sqrt(1 - u^2)
        let root = self.square().scale(-1.0).add_scalar(1.0).sqrt()?;
        let w = self.derivative().div_jet(&root)?;
        Ok(w.integral(u0.asin()).truncate(self.order()))
    }

    pub fn acos(&self) -> Result<Jet, JetError> {
        Ok(self.asin()?.scale(-1.0).add_scalar(std::f64::consts::FRAC_PI_2))
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.mul_jet(&rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Panicking division for contexts where the divisor is known to be nonzero.
impl Div for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.div_jet(rhs).expect("jet division by zero value")
    }
}
