//! Space curves: analytic, sampled, generated from a sphere curve, or offset
//! from another curve along one of its Frenet vectors.

mod arclength;
mod frenet;
pub mod quadrature;
mod stencil;

use std::sync::Arc;

use crate::bertrand::{GeneratedCurve, OffsetCurve};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::vec3::{JetVec3, Vec3};

pub use arclength::{arc_length, build_arclength_table, ArcLengthTable};
pub use frenet::{
    frame_at, frame_from_jets, frame_jets, frenet_apparatus, frenet_from_jets,
    slant_geodesic_indicator, FrameData, FrenetData, EPS_REG,
};
pub use stencil::{fd_weights, sampled_jet, Stencil};

/// Minimum number of samples for a sampled curve.
pub const MIN_SAMPLES: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Vec3>,
    stencil: Stencil,
}

impl SampledCurve {
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }
}

#[derive(Debug, Clone)]
pub enum CurveKind {
    Analytic {
        x: Expr,
        y: Expr,
        z: Expr,
        domain: (f64, f64),
    },
    Sampled(SampledCurve),
    Generated(Arc<GeneratedCurve>),
    Offset(Arc<OffsetCurve>),
}

#[derive(Debug, Clone)]
pub struct Curve {
    label: String,
    kind: CurveKind,
}

impl Curve {
    pub fn analytic(label: impl Into<String>, x: Expr, y: Expr, z: Expr, domain: (f64, f64)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidCurve(format!("bad domain [{lo}, {hi}]")));
        }
        Ok(Self {
            label: label.into(),
            kind: CurveKind::Analytic { x, y, z, domain },
        })
    }

    /// Parses the three component expressions.
    pub fn parse(label: impl Into<String>, x: &str, y: &str, z: &str, domain: (f64, f64)) -> Result<Self> {
        Self::analytic(
            label,
            x.parse()?,
            y.parse()?,
            z.parse()?,
            domain,
        )
    }

    pub fn sampled(label: impl Into<String>, params: Vec<f64>, points: Vec<Vec3>, stencil: Stencil) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::GridMismatch(format!(
                "{} parameters for {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: MIN_SAMPLES,
                got: params.len(),
            });
        }
        if params.iter().any(|t| !t.is_finite()) || points.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve("parameters must be strictly increasing".into()));
        }
        Ok(Self {
            label: label.into(),
            kind: CurveKind::Sampled(SampledCurve {
                params,
                points,
                stencil,
            }),
        })
    }

    /// Samples `curve` at `n` uniformly spaced parameters.
    pub fn sample(curve: &Curve, n: usize, stencil: Stencil) -> Result<Self> {
        let grid = curve.grid(n);
        let points = grid.iter().map(|&t| curve.position(t)).collect::<Result<Vec<_>>>()?;
        Self::sampled(format!("{} (sampled)", curve.label), grid, points, stencil)
    }

    pub(crate) fn from_kind(label: impl Into<String>, kind: CurveKind) -> Self {
        Self {
            label: label.into(),
            kind,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            CurveKind::Analytic { domain, .. } => *domain,
            CurveKind::Sampled(s) => (s.params[0], s.params[s.params.len() - 1]),
            CurveKind::Generated(g) => g.domain(),
            CurveKind::Offset(o) => o.base().domain(),
        }
    }

    /// `n` uniformly spaced parameters covering the domain, endpoints
    /// included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.domain(), n)
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo);
        if t >= lo - slack && t <= hi + slack {
            Ok(())
        } else {
            Err(Error::OutOfDomain { t, lo, hi })
        }
    }

    /// Component-wise Taylor jets of the position about `t`.
    pub fn jet(&self, t: f64, order: usize) -> Result<JetVec3> {
        self.check_domain(t)?;
        match &self.kind {
            CurveKind::Analytic { x, y, z, .. } => Ok(JetVec3::new(
                x.eval_jet(t, order)?,
                y.eval_jet(t, order)?,
                z.eval_jet(t, order)?,
            )),
            CurveKind::Sampled(s) => sampled_jet(&s.params, &s.points, s.stencil, t, order),
            CurveKind::Generated(g) => g.jet(t, order),
            CurveKind::Offset(o) => o.jet(t, order),
        }
    }

    pub fn position(&self, t: f64) -> Result<Vec3> {
        self.check_domain(t)?;
        match &self.kind {
            CurveKind::Analytic { x, y, z, .. } => Ok(Vec3::new(x.eval(t)?, y.eval(t)?, z.eval(t)?)),
            CurveKind::Generated(g) => g.position(t),
            _ => Ok(self.jet(t, 0)?.value()),
        }
    }

    /// `|dγ/dt|`.
    pub fn speed(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t, 1)?.coeff(1).norm())
    }
}

pub fn uniform_grid((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests;
