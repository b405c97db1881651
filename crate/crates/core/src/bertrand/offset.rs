//! Curves offset from a base curve along one of its Frenet vectors.

use std::sync::Arc;

use crate::curve::{frame_jets, Curve, CurveKind};
use crate::error::Result;
use crate::expr::Expr;
use crate::vec3::JetVec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameAxis {
    Tangent,
    Normal,
    Binormal,
}

impl FrameAxis {
    pub const ALL: [FrameAxis; 3] = [FrameAxis::Tangent, FrameAxis::Normal, FrameAxis::Binormal];

    pub fn index(self) -> usize {
        match self {
            FrameAxis::Tangent => 0,
            FrameAxis::Normal => 1,
            FrameAxis::Binormal => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameAxis::Tangent => "tangent",
            FrameAxis::Normal => "normal",
            FrameAxis::Binormal => "binormal",
        }
    }
}

/// `base(t) + lambda·E(t) + perturbation(t)` where `E` is a Frenet vector
/// of the base. Jets are exact: the frame is differentiated as a jet.
#[derive(Debug)]
pub struct OffsetCurve {
    base: Curve,
    lambda: f64,
    axis: FrameAxis,
    perturbation: Option<[Expr; 3]>,
}

impl OffsetCurve {
    pub fn base(&self) -> &Curve {
        &self.base
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn axis(&self) -> FrameAxis {
        self.axis
    }

    pub fn perturbation(&self) -> Option<&[Expr; 3]> {
        self.perturbation.as_ref()
    }

    pub fn jet(&self, t: f64, order: usize) -> Result<JetVec3> {
        let mut out = if self.lambda == 0.0 {
            self.base.jet(t, order)?
        } else {
            let pos = self.base.jet(t, order + 2)?;
            let frame = frame_jets(t, &pos, order)?;
            pos.truncate(order).add(&frame[self.axis.index()].scale(self.lambda))
        };
        if let Some([x, y, z]) = &self.perturbation {
            let p = JetVec3::new(x.eval_jet(t, order)?, y.eval_jet(t, order)?, z.eval_jet(t, order)?);
            out = out.add(&p);
        }
        Ok(out)
    }
}

/// Offsets `base` by `lambda` along the chosen Frenet vector.
pub fn offset_curve(base: &Curve, lambda: f64, axis: FrameAxis, perturbation: Option<[Expr; 3]>) -> Curve {
    let label = format!("{}+{}{}", base.label(), lambda, axis.name()[..1].to_uppercase());
    Curve::from_kind(
        label,
        CurveKind::Offset(Arc::new(OffsetCurve {
            base: base.clone(),
            lambda,
            axis,
            perturbation,
        })),
    )
}

/// The curve `γ + λN`. For a Bertrand curve and its own λ this is the
/// Bertrand mate. `λ = 0` returns a copy of the base.
pub fn construct_mate(base: &Curve, lambda: f64) -> Curve {
    if lambda == 0.0 {
        return base.clone().with_label(format!("{} (mate)", base.label()));
    }
    offset_curve(base, lambda, FrameAxis::Normal, None).with_label(format!("{} (mate)", base.label()))
}
