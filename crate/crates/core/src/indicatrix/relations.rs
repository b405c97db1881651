//! Relations between the frames and arc lengths of the indicatrices.

use rayon::prelude::*;

use crate::bertrand::{affine_fit, AffineFit, BertrandPairModel, ConstancyStats, FrameAxis};
use crate::curve::quadrature::gk15_array;
use crate::curve::{Curve, Stencil};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

use super::closed::{self, tangent_length_candidates, Frame};
use super::oracle::jet_indicatrix_frames;
use super::{indicatrix_curve_with, side_data, Side};

/// One vector identity `lhs = c·rhs` between indicatrix frames, with its
/// largest deviation under each way of computing the frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRelation {
    pub side: Side,
    pub name: &'static str,
    /// Frames as printed.
    pub printed: f64,
    /// Frames from the corrected closed forms.
    pub exact: f64,
    /// Frames of the indicatrices differentiated as curves in their own right.
    pub direct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRelationsReport {
    pub epsilon: f64,
    pub samples: usize,
    pub relations: Vec<FrameRelation>,
    /// Largest difference between corrected closed-form and direct frames.
    pub exact_vs_direct: f64,
    /// Grid points skipped per side because a ratio was degenerate.
    pub masked: [usize; 2],
}

impl FrameRelationsReport {
    pub fn max_exact(&self) -> f64 {
        self.relations.iter().map(|r| r.exact).fold(0.0, f64::max)
    }

    pub fn max_printed(&self) -> f64 {
        self.relations.iter().map(|r| r.printed).fold(0.0, f64::max)
    }

    pub fn max_direct(&self) -> f64 {
        self.relations.iter().map(|r| r.direct).fold(0.0, f64::max)
    }
}

type Slot = (FrameAxis, usize);

struct Rule {
    name: &'static str,
    lhs: Slot,
    rhs: Slot,
    /// Coefficient is `−ε` when set, `1` otherwise.
    minus_eps: bool,
}

const fn rule(name: &'static str, lhs: Slot, rhs: Slot, minus_eps: bool) -> Rule {
    Rule { name, lhs, rhs, minus_eps }
}

use FrameAxis::{Binormal as B, Normal as N, Tangent as T};

const BASE_RULES: [Rule; 4] = [
    rule("T_t = -eps T_b", (T, 0), (B, 0), true),
    rule("T_n = -eps N_t", (N, 0), (T, 1), true),
    rule("T_n = N_b", (N, 0), (B, 1), false),
    rule("B_t = B_b", (T, 2), (B, 2), false),
];

const MATE_RULES: [Rule; 4] = [
    rule("T_t = -eps T_b", (T, 0), (B, 0), true),
    rule("N_t = -eps T_n", (T, 1), (N, 0), true),
    rule("N_t = -eps N_b", (T, 1), (B, 1), true),
    rule("B_t = B_b", (T, 2), (B, 2), false),
];

fn rule_deviation(r: &Rule, frames: &[Frame; 3], eps: f64) -> f64 {
    let get = |(axis, i): Slot| frames[axis.index()].vector(i);
    let c = if r.minus_eps { -eps } else { 1.0 };
    (get(r.lhs) - c * get(r.rhs)).norm()
}

/// Closed-form, printed and direct frames of the three indicatrices of one
/// side at `t`. Direct frames are oriented to match the closed forms' sense
/// of traversal, which is the one induced by the partner's arc length.
fn side_frames(pair: &BertrandPairModel, side: Side, t: f64) -> Result<[[Frame; 3]; 3]> {
    let d = side_data(pair, side, t)?;
    let own = match side {
        Side::Base => pair.base(),
        Side::Mate => pair.mate(),
    };
    let jets = jet_indicatrix_frames(own, t)?;
    let mut out = [[Frame {
        tangent: Vec3::zeros(),
        normal: Vec3::zeros(),
        binormal: Vec3::zeros(),
    }; 3]; 3];
    for axis in FrameAxis::ALL {
        let i = axis.index();
        let ex = closed::exact(&d.p, axis);
        let j = if ex.ds * d.flip < 0.0 { jets[i].reversed() } else { jets[i] };
        out[0][i] = closed::printed(&d.p, axis, side).frame;
        out[1][i] = ex.frame;
        out[2][i] = Frame {
            tangent: j.tangent,
            normal: j.normal,
            binormal: j.binormal,
        };
    }
    Ok(out)
}

/// Checks the frame identities on both sides over `n` grid points.
pub fn frame_relations_check(pair: &BertrandPairModel, n: usize) -> Result<FrameRelationsReport> {
    let eps = pair.epsilon();
    let grid = pair.base().grid(n);
    let mut relations = Vec::new();
    let mut masked = [0; 2];
    let mut exact_vs_direct: f64 = 0.0;
    for (k, (side, rules)) in [(Side::Base, &BASE_RULES), (Side::Mate, &MATE_RULES)].into_iter().enumerate() {
        let frames = grid
            .par_iter()
            .map(|&t| match side_frames(pair, side, t) {
                Ok(f) => Ok(Some(f)),
                Err(Error::DegenerateRatio(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        masked[k] = frames.iter().filter(|f| f.is_none()).count();
        let frames: Vec<_> = frames.into_iter().flatten().collect();
        for f in &frames {
            for (e, d) in f[1].iter().zip(&f[2]) {
                for j in 0..3 {
                    exact_vs_direct = exact_vs_direct.max((e.vector(j) - d.vector(j)).norm());
                }
            }
        }
        for r in rules {
            let worst = |m: usize| frames.iter().map(|f| rule_deviation(r, &f[m], eps)).fold(0.0, f64::max);
            relations.push(FrameRelation {
                side,
                name: r.name,
                printed: worst(0),
                exact: worst(1),
                direct: worst(2),
            });
        }
    }
    Ok(FrameRelationsReport {
        epsilon: eps,
        samples: n,
        relations,
        exact_vs_direct,
        masked,
    })
}

/// Which tangent-indicatrix arc-length integrand agreed with the direct
/// arc length of the sampled indicatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentLengthChoice {
    Printed,
    SquaredG,
    Exact,
}

impl TangentLengthChoice {
    pub fn name(self) -> &'static str {
        match self {
            TangentLengthChoice::Printed => "printed",
            TangentLengthChoice::SquaredG => "squared-g",
            TangentLengthChoice::Exact => "exact",
        }
    }
}

/// Cumulative arc-length tables of the three indicatrices of one side,
/// all on the same parameter nodes and starting at zero.
///
/// `own_s` and `partner_s` are the arc lengths of the described curve and
/// of its partner; the latter is oriented with the partner's tangent
/// making an obtuse angle with the described curve's tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthRelations {
    pub side: Side,
    pub t: Vec<f64>,
    pub own_s: Vec<f64>,
    pub partner_s: Vec<f64>,
    pub s_t_printed: Vec<f64>,
    pub s_t_squared_g: Vec<f64>,
    pub s_t_exact: Vec<f64>,
    /// `∫ k(f − g)/√G ds̃` as printed for `s_t`; identical to `s_b_partner`.
    pub s_t_partner: Vec<f64>,
    pub s_t_direct: Vec<f64>,
    pub tangent_choice: TangentLengthChoice,
    pub s_n_printed: Vec<f64>,
    /// `∫ k√F ds̃`.
    pub s_n_partner: Vec<f64>,
    pub s_n_direct: Vec<f64>,
    pub s_b_printed: Vec<f64>,
    /// `∫ k(f − g)/√G ds̃`.
    pub s_b_partner: Vec<f64>,
    /// `∫ τ ds` of the described curve.
    pub total_torsion: Vec<f64>,
    pub s_b_direct: Vec<f64>,
    /// `s_b_partner` against `partner_s`.
    pub fit: AffineFit,
    /// The partner quantity `k²f'/(k'√G)`, constant along a pair.
    pub c_stats: ConstancyStats,
    /// `c₁` solved from the mean of `c_stats`.
    pub c1: f64,
    /// `c₁` read off the partner's `g/√G`.
    pub c1_from_ratio: f64,
    /// Slope predicted for `fit` from `c1`.
    pub predicted_slope: f64,
    /// Parameter intervals left out of the tables and the fit.
    pub masked: Vec<(f64, f64)>,
}

impl ArcLengthRelations {
    /// Range of the fitted ordinate.
    pub fn s_b_range(&self) -> f64 {
        let (lo, hi) = self
            .s_b_partner
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        hi - lo
    }

    pub fn fit_relative_rms(&self) -> f64 {
        self.fit.rms_residual / self.s_b_range()
    }

    /// Relative gap between fitted and predicted slopes.
    pub fn signed_slope_gap(&self) -> f64 {
        (self.fit.slope - self.predicted_slope).abs() / self.predicted_slope.abs()
    }

    /// The same gap in absolute values.
    pub fn magnitude_slope_gap(&self) -> f64 {
        (self.fit.slope.abs() - self.predicted_slope.abs()).abs() / self.predicted_slope.abs()
    }

    pub fn tangent_selected(&self) -> &[f64] {
        match self.tangent_choice {
            TangentLengthChoice::Printed => &self.s_t_printed,
            TangentLengthChoice::SquaredG => &self.s_t_squared_g,
            TangentLengthChoice::Exact => &self.s_t_exact,
        }
    }
}

fn cumulative(increments: &[[f64; 10]], j: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(increments.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for inc in increments {
        acc += inc[j];
        out.push(acc);
    }
    out
}

fn direct_lengths(curve: &Curve, grid: &[f64]) -> Result<Vec<f64>> {
    let inc = grid
        .par_windows(2)
        .map(|w| gk15_array(|t| Ok([curve.speed(t)?]), w[0], w[1]).map(|(v, _)| v[0]))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![0.0];
    for v in inc {
        out.push(out.last().unwrap() + v);
    }
    Ok(out)
}

/// Largest gap between `|a|` and `b`, relative to the last entry of `b`.
fn table_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.last().unwrap().abs();
    a.iter().zip(b).map(|(x, y)| (x.abs() - y).abs()).fold(0.0, f64::max) / scale
}

/// Arc-length tables of one side's indicatrices on `n` parameter nodes,
/// integrated segment by segment with one Gauss–Kronrod rule each.
pub fn indicatrix_arclength_relations(pair: &BertrandPairModel, side: Side, n: usize) -> Result<ArcLengthRelations> {
    if n < 17 {
        return Err(Error::TooFewSamples { needed: 17, got: n });
    }
    if pair.degenerate() {
        return Err(Error::DegenerateRatio("self-pair has no indicatrix relations".into()));
    }
    let grid = pair.base().grid(n);
    let integrand = |t: f64| -> Result<[f64; 10]> {
        let d = side_data(pair, side, t)?;
        let p = &d.p;
        let (ff, gg, q, k) = (p.ff(), p.gg(), p.q(), p.k);
        let ds_own = d.own.speed;
        let ds_partner = d.flip * d.partner.speed;
        let cand = tangent_length_candidates(p);
        Ok([
            ds_own,
            ds_partner,
            cand.printed * ds_own,
            cand.squared_g * ds_own,
            cand.exact * ds_own,
            -k * q / gg.sqrt() * ds_partner,
            k * q * ff.sqrt() / (p.f * gg.sqrt()) * ds_own,
            k * ff.sqrt() * ds_partner,
            -k * q * q / (p.f * gg) * ds_own,
            d.own.tau * ds_own,
        ])
    };
    let segs = grid
        .par_windows(2)
        .map(|w| match gk15_array(integrand, w[0], w[1]) {
            Ok((v, _)) => Ok((v, false)),
            Err(Error::DegenerateRatio(_)) => Ok(([0.0; 10], true)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let masked: Vec<(f64, f64)> = segs
        .iter()
        .zip(grid.windows(2))
        .filter(|(s, _)| s.1)
        .map(|(_, w)| (w[0], w[1]))
        .collect();
    let inc: Vec<[f64; 10]> = segs.into_iter().map(|s| s.0).collect();
    let col = |j| cumulative(&inc, j);

    let own = match side {
        Side::Base => pair.base(),
        Side::Mate => pair.mate(),
    };
    let mut direct = Vec::with_capacity(3);
    for axis in FrameAxis::ALL {
        let c = indicatrix_curve_with(own, axis, n, Stencil::Wide)?;
        direct.push(direct_lengths(&c, &grid)?);
    }
    let s_b_direct = direct.pop().unwrap();
    let s_n_direct = direct.pop().unwrap();
    let s_t_direct = direct.pop().unwrap();

    let (s_t_printed, s_t_squared_g, s_t_exact) = (col(2), col(3), col(4));
    let tangent_choice = [
        (TangentLengthChoice::Printed, &s_t_printed),
        (TangentLengthChoice::SquaredG, &s_t_squared_g),
        (TangentLengthChoice::Exact, &s_t_exact),
    ]
    .into_iter()
    .map(|(c, s)| (c, table_gap(s, &s_t_direct)))
    .min_by(|a, b| a.1.total_cmp(&b.1))
    .unwrap()
    .0;

    let partner_s = col(1);
    let s_b_partner = col(5);
    // Nodes bordering a masked segment stay out of the fit.
    let keep: Vec<usize> = (0..grid.len())
        .filter(|&i| !masked.iter().any(|&(a, b)| grid[i] == a || grid[i] == b))
        .collect();
    let fx: Vec<f64> = keep.iter().map(|&i| partner_s[i]).collect();
    let fy: Vec<f64> = keep.iter().map(|&i| s_b_partner[i]).collect();
    let fit = affine_fit(&fx, &fy)?;

    let consts = grid
        .par_iter()
        .map(|&t| match side_data(pair, side, t) {
            Ok(d) => {
                let m = &d.partner;
                let gg = d.p.gg();
                let c = (m.dtau_ds * m.kappa - m.tau * m.dkappa_ds) / (m.dkappa_ds * gg.sqrt());
                Ok((Some(c), Some(d.p.g / gg.sqrt())))
            }
            Err(Error::DegenerateRatio(_)) => Ok((None, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let c_stats = ConstancyStats::from_values(&consts.iter().map(|c| c.0).collect::<Vec<_>>());
    let ratio_stats = ConstancyStats::from_values(&consts.iter().map(|c| c.1).collect::<Vec<_>>());
    let (eps, lambda) = (pair.epsilon(), pair.lambda());
    let (c1, predicted_slope) = match side {
        Side::Base => (-eps * lambda * c_stats.mean, c_stats.mean),
        Side::Mate => (lambda * c_stats.mean, c_stats.mean),
    };

    Ok(ArcLengthRelations {
        side,
        t: grid,
        own_s: col(0),
        partner_s,
        s_t_printed,
        s_t_squared_g,
        s_t_exact,
        s_t_partner: s_b_partner.clone(),
        s_t_direct,
        tangent_choice,
        s_n_printed: col(6),
        s_n_partner: col(7),
        s_n_direct,
        s_b_printed: col(8),
        s_b_partner,
        total_torsion: col(9),
        s_b_direct,
        fit,
        c_stats,
        c1,
        c1_from_ratio: ratio_stats.mean,
        predicted_slope,
        masked,
    })
}
