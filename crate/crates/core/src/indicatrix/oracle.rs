//! Numerical cross-checks of the closed forms.

use rayon::prelude::*;

use crate::bertrand::{BertrandPairModel, FrameAxis};
use crate::curve::{frame_from_jets, frame_jets, frenet_from_jets, Curve, FrenetData, Stencil};
use crate::error::Result;
use crate::vec3::Vec3;

use super::{indicatrix_apparatus, indicatrix_curve_with, IndicatrixKind, Side};

/// Apparatus of an indicatrix from jets of the Frenet vector itself. Needs
/// a position jet of order 6 from `curve`.
pub fn jet_indicatrix_frenet(curve: &Curve, axis: FrameAxis, t: f64) -> Result<FrenetData> {
    let pos = curve.jet(t, 6)?;
    let frame = frame_jets(t, &pos, 4)?;
    frenet_from_jets(t, &frame[axis.index()])
}

/// [`jet_indicatrix_frenet`] for all three axes at once.
pub fn jet_indicatrix_frames(curve: &Curve, t: f64) -> Result<[FrenetData; 3]> {
    let pos = curve.jet(t, 6)?;
    let [a, b, c] = frame_jets(t, &pos, 4)?;
    Ok([frenet_from_jets(t, &a)?, frenet_from_jets(t, &b)?, frenet_from_jets(t, &c)?])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectRow {
    pub t: f64,
    pub point: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub gamma: Option<f64>,
    pub printed_kappa: f64,
    pub printed_tau: f64,
    pub direct_kappa: f64,
    pub direct_tau: f64,
}

/// Closed forms against the apparatus of the sampled indicatrix curve.
/// Gaps are maxima over the grid divided by the largest closed-form
/// magnitude; curvatures are compared in absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectComparison {
    pub kind: IndicatrixKind,
    pub samples: usize,
    pub rows: Vec<DirectRow>,
    pub kappa_gap: f64,
    pub tau_gap: f64,
    pub printed_kappa_gap: f64,
    pub printed_tau_gap: f64,
    /// Largest `| |x| − 1 |` over the sampled points.
    pub unit_norm_defect: f64,
}

fn gap(rows: &[DirectRow], closed: impl Fn(&DirectRow) -> f64, direct: impl Fn(&DirectRow) -> f64) -> f64 {
    let scale = rows.iter().map(|r| closed(r).abs()).fold(0.0, f64::max);
    let worst = rows.iter().map(|r| (direct(r) - closed(r)).abs()).fold(0.0, f64::max);
    worst / scale
}

pub fn compare_with_direct(pair: &BertrandPairModel, kind: IndicatrixKind, n: usize) -> Result<DirectComparison> {
    let own = match kind.side {
        Side::Base => pair.base(),
        Side::Mate => pair.mate(),
    };
    let sampled = indicatrix_curve_with(own, kind.axis, n, Stencil::Compact)?;
    let rows = sampled
        .grid(n)
        .into_par_iter()
        .map(|t| {
            let s = indicatrix_apparatus(pair, kind, t)?;
            let d = frame_from_jets(t, &sampled.jet(t, 3)?)?;
            Ok(DirectRow {
                t,
                point: s.point,
                kappa: s.kappa,
                tau: s.tau,
                gamma: s.gamma,
                printed_kappa: s.printed.kappa,
                printed_tau: s.printed.tau,
                direct_kappa: d.kappa,
                direct_tau: d.tau,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let unit_norm_defect = rows.iter().map(|r| (r.point.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(DirectComparison {
        kind,
        samples: n,
        kappa_gap: gap(&rows, |r| r.kappa.abs(), |r| r.direct_kappa),
        tau_gap: gap(&rows, |r| r.tau, |r| r.direct_tau),
        printed_kappa_gap: gap(&rows, |r| r.printed_kappa.abs(), |r| r.direct_kappa),
        printed_tau_gap: gap(&rows, |r| r.printed_tau, |r| r.direct_tau),
        unit_norm_defect,
        rows,
    })
}

/// The comparison at `n` samples and again with the sample spacing halved.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub coarse: DirectComparison,
    pub fine: DirectComparison,
}

impl Convergence {
    /// Reduction factor of the larger of the curvature and torsion gaps.
    pub fn ratio(&self) -> f64 {
        let g = |c: &DirectComparison| c.kappa_gap.max(c.tau_gap);
        g(&self.coarse) / g(&self.fine)
    }
}

pub fn convergence(pair: &BertrandPairModel, kind: IndicatrixKind, n: usize) -> Result<Convergence> {
    Ok(Convergence {
        coarse: compare_with_direct(pair, kind, n)?,
        fine: compare_with_direct(pair, kind, 2 * n - 1)?,
    })
}
