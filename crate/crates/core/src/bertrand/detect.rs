use rayon::prelude::*;

use crate::curve::{build_arclength_table, frame_at, frenet_apparatus, ArcLengthTable, Curve, FrenetData};
use crate::error::{Error, RejectReason, Result};

use super::ratio::{orient_partner, ratio_invariants, RatioInvariants};

/// Acceptance thresholds for [`detect_bertrand`], all relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectTolerances {
    /// Component of the offset orthogonal to the base normal.
    pub offset: f64,
    /// Allowed `1 − |⟨N, Ñ⟩|`.
    pub align: f64,
    /// Allowed spread of λ.
    pub constancy: f64,
}

impl Default for DetectTolerances {
    fn default() -> Self {
        Self {
            offset: 1e-6,
            align: 1e-6,
            constancy: 1e-6,
        }
    }
}

/// Mean and largest deviation from it over a grid; `masked` counts the
/// points where the quantity was undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstancyStats {
    pub mean: f64,
    pub max_deviation: f64,
    pub masked: usize,
}

impl ConstancyStats {
    pub fn from_values(values: &[Option<f64>]) -> Self {
        let defined: Vec<f64> = values.iter().flatten().copied().collect();
        let masked = values.len() - defined.len();
        if defined.is_empty() {
            return Self {
                mean: f64::NAN,
                max_deviation: f64::NAN,
                masked,
            };
        }
        let mean = defined.iter().sum::<f64>() / defined.len() as f64;
        let max_deviation = defined.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
        Self {
            mean,
            max_deviation,
            masked,
        }
    }

    /// `max_deviation / (1 + |mean|)`.
    pub fn relative(&self) -> f64 {
        self.max_deviation / (1.0 + self.mean.abs())
    }
}

/// Constancy of `p₁ = 1/√(1+g̃²)`, `p₂ = g̃/√(1+g̃²)` and of `q₁`, `q₂`,
/// the same quantities built from `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDiagnostics {
    pub p1: ConstancyStats,
    pub p2: ConstancyStats,
    pub q1: ConstancyStats,
    pub q2: ConstancyStats,
}

/// Both sides of a pair at one parameter value. The mate data is oriented
/// so that its tangent makes an obtuse angle with the base tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPoint {
    pub t: f64,
    pub base: FrenetData,
    pub mate: FrenetData,
    pub base_ratios: RatioInvariants,
    pub mate_ratios: RatioInvariants,
}

#[derive(Debug, Clone)]
pub struct BertrandPairModel {
    base: Curve,
    mate: Curve,
    grid: Vec<f64>,
    lambda: f64,
    lambda_stats: ConstancyStats,
    epsilon: f64,
    orientation: f64,
    degenerate: bool,
    min_alignment: f64,
    max_offset_defect: f64,
    base_table: ArcLengthTable,
    mate_table: ArcLengthTable,
    diagnostics: PairDiagnostics,
}

impl BertrandPairModel {
    pub fn base(&self) -> &Curve {
        &self.base
    }

    pub fn mate(&self) -> &Curve {
        &self.mate
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_stats(&self) -> ConstancyStats {
        self.lambda_stats
    }

    /// Sign with `N = εÑ`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `+1` if the mate's own parameter direction already makes an obtuse
    /// angle with the base tangent, `−1` if it has to be reversed.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Set for the self-pair `λ = 0`.
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn min_alignment(&self) -> f64 {
        self.min_alignment
    }

    pub fn max_offset_defect(&self) -> f64 {
        self.max_offset_defect
    }

    /// Arc length of the base and of the mate as functions of the shared
    /// parameter.
    pub fn tables(&self) -> (&ArcLengthTable, &ArcLengthTable) {
        (&self.base_table, &self.mate_table)
    }

    pub fn diagnostics(&self) -> &PairDiagnostics {
        &self.diagnostics
    }

    pub fn point(&self, t: f64) -> Result<PairPoint> {
        let base = frenet_apparatus(&self.base, t)?;
        let mate = frenet_apparatus(&self.mate, t)?;
        let (mate, _) = orient_partner(&base, &mate);
        Ok(PairPoint {
            t,
            base,
            mate,
            base_ratios: ratio_invariants(&base)?,
            mate_ratios: ratio_invariants(&mate)?,
        })
    }
}

fn reject(reason: RejectReason, detail: String) -> Error {
    Error::NotAPair { reason, detail }
}

/// Tests whether `mate` is a Bertrand mate of `base` under the shared
/// parameter, using `n` grid points.
pub fn detect_bertrand(base: &Curve, mate: &Curve, n: usize) -> Result<BertrandPairModel> {
    detect_bertrand_with(base, mate, n, &DetectTolerances::default())
}

pub fn detect_bertrand_with(base: &Curve, mate: &Curve, n: usize, tol: &DetectTolerances) -> Result<BertrandPairModel> {
    if n < 17 {
        return Err(Error::TooFewSamples { needed: 17, got: n });
    }
    let (lo, hi) = base.domain();
    let (mlo, mhi) = mate.domain();
    let slack = 1e-9 * (hi - lo);
    if (mlo - lo).abs() > slack || (mhi - hi).abs() > slack {
        return Err(Error::GridMismatch(format!(
            "base domain [{lo}, {hi}] and mate domain [{mlo}, {mhi}] differ"
        )));
    }
    let grid = base.grid(n);
    struct Row {
        lambda: f64,
        defect: f64,
        align: f64,
        tangents: f64,
        extent: f64,
    }
    let rows = grid
        .par_iter()
        .map(|&t| {
            let a = frame_at(base, t)?;
            let b = frame_at(mate, t)?;
            let d = b.position - a.position;
            let lambda = d.dot(&a.normal);
            let defect = (d - lambda * a.normal).norm() / (1.0 + d.norm());
            Ok(Row {
                lambda,
                defect,
                align: a.normal.dot(&b.normal),
                tangents: a.tangent.dot(&b.tangent),
                extent: a.position.norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (worst, max_offset_defect) = rows
        .iter()
        .enumerate()
        .fold((0, 0.0), |(wi, wd), (i, r)| if r.defect > wd { (i, r.defect) } else { (wi, wd) });
    if max_offset_defect > tol.offset {
        return Err(reject(
            RejectReason::OffsetNotNormal,
            format!("offset leaves the normal line by {max_offset_defect:e} at t = {}", grid[worst]),
        ));
    }
    let lambdas: Vec<Option<f64>> = rows.iter().map(|r| Some(r.lambda)).collect();
    let lambda_stats = ConstancyStats::from_values(&lambdas);
    if lambda_stats.relative() > tol.constancy {
        return Err(reject(
            RejectReason::LambdaVaries,
            format!(
                "offset {} varies by {:e}",
                lambda_stats.mean, lambda_stats.max_deviation
            ),
        ));
    }
    let min_alignment = rows.iter().map(|r| r.align.abs()).fold(f64::INFINITY, f64::min);
    if min_alignment < 1.0 - tol.align {
        return Err(reject(
            RejectReason::NormalsNotAligned,
            format!("min |<N, N~>| = {min_alignment}"),
        ));
    }
    let mid = rows.len() / 2;
    let epsilon = rows[mid].align.signum();
    if let Some(i) = rows.iter().position(|r| r.align.signum() != epsilon) {
        return Err(reject(
            RejectReason::EpsilonFlip,
            format!("sign of <N, N~> changes at t = {}", grid[i]),
        ));
    }
    let extent = rows.iter().map(|r| r.extent).fold(0.0, f64::max);
    let degenerate = lambda_stats.mean.abs() < 1e-12 * (1.0 + extent);
    let orientation = if rows[mid].tangents > 0.0 { -1.0 } else { 1.0 };

    let diagnostics = pair_diagnostics(base, mate, &grid)?;
    let segments = (n - 1).max(16);
    let (base_table, mate_table) = rayon::join(
        || build_arclength_table(base, segments),
        || build_arclength_table(mate, segments),
    );
    Ok(BertrandPairModel {
        base: base.clone(),
        mate: mate.clone(),
        grid,
        lambda: if degenerate { 0.0 } else { lambda_stats.mean },
        lambda_stats,
        epsilon,
        orientation,
        degenerate,
        min_alignment,
        max_offset_defect,
        base_table: base_table?,
        mate_table: mate_table?,
        diagnostics,
    })
}

fn pair_diagnostics(base: &Curve, mate: &Curve, grid: &[f64]) -> Result<PairDiagnostics> {
    let gs = grid
        .par_iter()
        .map(|&t| {
            let a = ratio_invariants(&frenet_apparatus(base, t)?)?;
            let b = ratio_invariants(&frenet_apparatus(mate, t)?)?;
            Ok((a.g_defined.then_some(a.g), b.g_defined.then_some(b.g)))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = |g: Option<f64>| g.map(|g| 1.0 / (1.0 + g * g).sqrt());
    let slope = |g: Option<f64>| g.map(|g| g / (1.0 + g * g).sqrt());
    let col = |h: &dyn Fn(Option<f64>) -> Option<f64>, mate_side: bool| {
        let v: Vec<Option<f64>> = gs.iter().map(|&(a, b)| h(if mate_side { b } else { a })).collect();
        ConstancyStats::from_values(&v)
    };
    Ok(PairDiagnostics {
        p1: col(&unit, true),
        p2: col(&slope, true),
        q1: col(&unit, false),
        q2: col(&slope, false),
    })
}

/// Left-hand side of `(κ̃ + εκ)gg̃ − εfg̃κ − f̃gκ̃ = 0` and the sum of the
/// magnitudes of its terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResidual {
    pub value: f64,
    pub scale: f64,
}

impl ConstraintResidual {
    pub fn normalized(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

pub fn pair_constraint_residual(pair: &BertrandPairModel, t: f64) -> Result<ConstraintResidual> {
    constraint_residual(&pair.point(t)?, pair.epsilon())
}

pub fn constraint_residual(p: &PairPoint, eps: f64) -> Result<ConstraintResidual> {
    let (f, g, k) = (p.base_ratios.f, p.base_ratios.g_checked()?, p.base.kappa);
    let (ft, gt, kt) = (p.mate_ratios.f, p.mate_ratios.g_checked()?, p.mate.kappa);
    let terms = [kt * g * gt, eps * k * g * gt, -eps * f * gt * k, -ft * g * kt];
    Ok(ConstraintResidual {
        value: terms.iter().sum(),
        scale: terms.iter().map(|v| v.abs()).sum(),
    })
}

/// `εg + g̃` at one point.
pub fn eps_g_relation(p: &PairPoint, eps: f64) -> Result<f64> {
    Ok(eps * p.base_ratios.g_checked()? + p.mate_ratios.g_checked()?)
}
