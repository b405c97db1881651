//! Spherical indicatrices (tangent, principal normal and binormal images)
//! of both curves of a Bertrand pair.

mod closed;
mod oracle;
mod relations;

use std::fmt;

use rayon::prelude::*;

use crate::bertrand::{orient_partner, ratio_invariants, BertrandPairModel, FrameAxis};
use crate::curve::{frame_at, frenet_apparatus, Curve, FrenetData, Stencil};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

pub use closed::{Frame, PrintedForms, TangentLengthCandidates};
pub use oracle::{
    compare_with_direct, convergence, jet_indicatrix_frames, jet_indicatrix_frenet, Convergence, DirectComparison, DirectRow,
};
pub use relations::{
    frame_relations_check, indicatrix_arclength_relations, ArcLengthRelations, FrameRelation,
    FrameRelationsReport, TangentLengthChoice,
};

use closed::Partner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Base,
    Mate,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Base => "base",
            Side::Mate => "mate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndicatrixKind {
    pub side: Side,
    pub axis: FrameAxis,
}

impl IndicatrixKind {
    pub const ALL: [IndicatrixKind; 6] = [
        IndicatrixKind::new(Side::Base, FrameAxis::Tangent),
        IndicatrixKind::new(Side::Base, FrameAxis::Normal),
        IndicatrixKind::new(Side::Base, FrameAxis::Binormal),
        IndicatrixKind::new(Side::Mate, FrameAxis::Tangent),
        IndicatrixKind::new(Side::Mate, FrameAxis::Normal),
        IndicatrixKind::new(Side::Mate, FrameAxis::Binormal),
    ];

    pub const fn new(side: Side, axis: FrameAxis) -> Self {
        Self { side, axis }
    }

    /// Short code such as `t-base` or `b-mate`.
    pub fn code(&self) -> String {
        format!("{}-{}", &self.axis.name()[..1], self.side.name())
    }

    pub fn parse(code: &str) -> Option<Self> {
        let (a, s) = code.split_once('-')?;
        let axis = match a {
            "t" => FrameAxis::Tangent,
            "n" => FrameAxis::Normal,
            "b" => FrameAxis::Binormal,
            _ => return None,
        };
        let side = match s {
            "base" => Side::Base,
            "mate" => Side::Mate,
            _ => return None,
        };
        Some(Self { side, axis })
    }
}

impl fmt::Display for IndicatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// The curve traced on the unit sphere by a Frenet vector of `curve`,
/// sampled at `n` uniform parameters. No renormalization is applied.
pub fn indicatrix_curve(curve: &Curve, axis: FrameAxis, n: usize) -> Result<Curve> {
    indicatrix_curve_with(curve, axis, n, Stencil::Compact)
}

pub fn indicatrix_curve_with(curve: &Curve, axis: FrameAxis, n: usize, stencil: Stencil) -> Result<Curve> {
    let grid = curve.grid(n);
    let points = grid
        .par_iter()
        .map(|&t| {
            let fr = frame_at(curve, t)?;
            Ok([fr.tangent, fr.normal, fr.binormal][axis.index()])
        })
        .collect::<Result<Vec<Vec3>>>()?;
    Curve::sampled(format!("{} ({})", curve.label(), axis.name()), grid, points, stencil)
}

/// Closed-form apparatus of one indicatrix at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatrixSample {
    pub kind: IndicatrixKind,
    pub t: f64,
    /// The Frenet vector of the described curve, i.e. the indicatrix point.
    pub point: Vec3,
    pub frame: Frame,
    pub kappa: f64,
    pub tau: f64,
    pub gamma: Option<f64>,
    /// `ρ` for the base normal indicatrix, `σ` for the mate's.
    pub rho_or_sigma: Option<f64>,
    /// Indicatrix arc length per unit arc length of the partner curve.
    pub ds_ratio: f64,
    /// `+1` when the indicatrix arc length grows with the shared parameter.
    pub param_sign: f64,
    pub printed: PrintedForms,
}

pub(crate) struct SideData {
    pub own: FrenetData,
    pub partner: FrenetData,
    /// `−1` when the partner had to be reversed.
    pub flip: f64,
    pub p: Partner,
}

pub(crate) fn side_data(pair: &BertrandPairModel, side: Side, t: f64) -> Result<SideData> {
    let a = frenet_apparatus(pair.base(), t)?;
    let b = frenet_apparatus(pair.mate(), t)?;
    let (own, other) = match side {
        Side::Base => (a, b),
        Side::Mate => (b, a),
    };
    let (partner, flip) = orient_partner(&own, &other);
    let p = Partner::new(&partner, &ratio_invariants(&partner)?, pair.epsilon())?;
    Ok(SideData {
        own,
        partner,
        flip,
        p,
    })
}

pub fn indicatrix_apparatus(pair: &BertrandPairModel, kind: IndicatrixKind, t: f64) -> Result<IndicatrixSample> {
    let d = side_data(pair, kind.side, t)?;
    let ex = closed::exact(&d.p, kind.axis);
    Ok(IndicatrixSample {
        kind,
        t,
        point: [d.own.tangent, d.own.normal, d.own.binormal][kind.axis.index()],
        frame: ex.frame,
        kappa: ex.kappa,
        tau: ex.tau,
        gamma: ex.gamma,
        rho_or_sigma: ex.rho,
        ds_ratio: ex.ds,
        param_sign: (ex.ds * d.flip).signum(),
        printed: closed::printed(&d.p, kind.axis, kind.side),
    })
}

pub fn tangent_indicatrix_apparatus(pair: &BertrandPairModel, side: Side, t: f64) -> Result<IndicatrixSample> {
    indicatrix_apparatus(pair, IndicatrixKind::new(side, FrameAxis::Tangent), t)
}

pub fn normal_indicatrix_apparatus(pair: &BertrandPairModel, side: Side, t: f64) -> Result<IndicatrixSample> {
    indicatrix_apparatus(pair, IndicatrixKind::new(side, FrameAxis::Normal), t)
}

pub fn binormal_indicatrix_apparatus(pair: &BertrandPairModel, side: Side, t: f64) -> Result<IndicatrixSample> {
    indicatrix_apparatus(pair, IndicatrixKind::new(side, FrameAxis::Binormal), t)
}

/// Closed-form samples of one indicatrix over a grid. Points where a ratio
/// of the partner degenerates are listed in `masked` instead.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatrixApparatus {
    pub kind: IndicatrixKind,
    pub samples: Vec<IndicatrixSample>,
    pub masked: Vec<f64>,
}

impl IndicatrixApparatus {
    pub fn masked_fraction(&self) -> f64 {
        self.masked.len() as f64 / (self.masked.len() + self.samples.len()) as f64
    }
}

pub fn sample_indicatrix(pair: &BertrandPairModel, kind: IndicatrixKind, n: usize) -> Result<IndicatrixApparatus> {
    let rows = pair
        .base()
        .grid(n)
        .into_par_iter()
        .map(|t| match indicatrix_apparatus(pair, kind, t) {
            Ok(s) => Ok(Ok(s)),
            Err(Error::DegenerateRatio(_)) => Ok(Err(t)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::with_capacity(rows.len());
    let mut masked = Vec::new();
    for r in rows {
        match r {
            Ok(s) => samples.push(s),
            Err(t) => masked.push(t),
        }
    }
    Ok(IndicatrixApparatus { kind, samples, masked })
}
