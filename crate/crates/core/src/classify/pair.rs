use std::fmt;

use rayon::prelude::*;

use crate::bertrand::ConstancyStats;
use crate::curve::{build_arclength_table, frenet_apparatus, uniform_grid, Curve, FrenetData, Stencil};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Threshold for every pair criterion.
pub const PAIR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairVerdict {
    Bertrand,
    Mannheim,
    InvoluteEvolute,
    None,
}

impl PairVerdict {
    pub fn name(self) -> &'static str {
        match self {
            PairVerdict::Bertrand => "bertrand",
            PairVerdict::Mannheim => "mannheim",
            PairVerdict::InvoluteEvolute => "involute_evolute",
            PairVerdict::None => "none",
        }
    }
}

impl fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCriterion {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl PairCriterion {
    pub fn pass(&self) -> bool {
        self.value < self.tolerance
    }
}

/// Outcome of one category test with every criterion kept.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryEvidence {
    pub category: PairVerdict,
    pub criteria: Vec<PairCriterion>,
}

impl CategoryEvidence {
    pub fn pass(&self) -> bool {
        self.criteria.iter().all(PairCriterion::pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairClass {
    pub verdict: PairVerdict,
    /// Bertrand, Mannheim and involute-evolute, in test order.
    pub evidence: Vec<CategoryEvidence>,
    pub samples: usize,
    pub masked: usize,
}

impl PairClass {
    pub fn evidence_for(&self, category: PairVerdict) -> Option<&CategoryEvidence> {
        self.evidence.iter().find(|e| e.category == category)
    }
}

struct Row {
    offset: Vec3,
    a: FrenetData,
    b: FrenetData,
}

/// Component of `d` off the line spanned by the unit vector `u`.
fn off_axis(d: &Vec3, u: &Vec3) -> f64 {
    (d - u * d.dot(u)).norm()
}

fn category(rows: &[Row], scale: f64, axis: impl Fn(&FrenetData) -> Vec3, partner_axis: impl Fn(&FrenetData) -> Vec3) -> Vec<PairCriterion> {
    let offset = rows.iter().map(|r| off_axis(&r.offset, &axis(&r.a))).fold(0.0, f64::max) / scale;
    let align = rows
        .iter()
        .map(|r| 1.0 - axis(&r.a).dot(&partner_axis(&r.b)).abs())
        .fold(0.0, f64::max);
    let lambda = ConstancyStats::from_values(&rows.iter().map(|r| Some(r.offset.dot(&axis(&r.a)))).collect::<Vec<_>>());
    vec![
        PairCriterion {
            name: "offset-along-axis",
            value: offset,
            tolerance: PAIR_TOL,
        },
        PairCriterion {
            name: "axes-parallel",
            value: align,
            tolerance: PAIR_TOL,
        },
        PairCriterion {
            name: "offset-constant",
            value: lambda.relative(),
            tolerance: PAIR_TOL,
        },
    ]
}

/// Classifies `(a, b)` under the shared parameter on `n` grid points.
/// Bertrand is tested first, then Mannheim, then involute-evolute; the
/// first category whose criteria all pass is the verdict.
pub fn pair_classify(a: &Curve, b: &Curve, n: usize) -> Result<PairClass> {
    if n < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: n });
    }
    let (da, db) = (a.domain(), b.domain());
    let span = (da.1 - da.0).abs().max((db.1 - db.0).abs());
    if (da.0 - db.0).abs() > 1e-12 * span || (da.1 - db.1).abs() > 1e-12 * span {
        return Err(Error::GridMismatch(format!(
            "domains [{}, {}] and [{}, {}] differ",
            da.0, da.1, db.0, db.1
        )));
    }
    let rows = a
        .grid(n)
        .into_par_iter()
        .map(|t| {
            let fa = frenet_apparatus(a, t);
            let fb = frenet_apparatus(b, t);
            match (fa, fb) {
                (Ok(fa), Ok(fb)) => Ok(Some(Row {
                    offset: fb.position - fa.position,
                    a: fa,
                    b: fb,
                })),
                (Err(Error::SingularPoint { .. }), _) | (_, Err(Error::SingularPoint { .. })) => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let masked = rows.iter().filter(|r| r.is_none()).count();
    let rows: Vec<Row> = rows.into_iter().flatten().collect();
    if rows.len() < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: rows.len() });
    }
    let scale = rows.iter().map(|r| r.offset.norm()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };

    let bertrand = category(&rows, scale, |f| f.normal, |f| f.normal);
    let mannheim = category(&rows, scale, |f| f.binormal, |f| f.normal);
    let tangent_offset = rows.iter().map(|r| off_axis(&r.offset, &r.a.tangent)).fold(0.0, f64::max) / scale;
    let orthogonal = rows.iter().map(|r| r.a.tangent.dot(&r.b.tangent).abs()).fold(0.0, f64::max);
    let involute = vec![
        PairCriterion {
            name: "offset-along-axis",
            value: tangent_offset,
            tolerance: PAIR_TOL,
        },
        PairCriterion {
            name: "tangents-orthogonal",
            value: orthogonal,
            tolerance: PAIR_TOL,
        },
    ];
    let evidence = vec![
        CategoryEvidence {
            category: PairVerdict::Bertrand,
            criteria: bertrand,
        },
        CategoryEvidence {
            category: PairVerdict::Mannheim,
            criteria: mannheim,
        },
        CategoryEvidence {
            category: PairVerdict::InvoluteEvolute,
            criteria: involute,
        },
    ];
    let verdict = evidence
        .iter()
        .find(|e| e.pass())
        .map(|e| e.category)
        .unwrap_or(PairVerdict::None);
    Ok(PairClass {
        verdict,
        evidence,
        samples: n,
        masked,
    })
}

/// `curve` resampled at `n` points uniformly spaced in normalized arc
/// length `u ∈ [0, 1]`.
pub fn arclength_aligned(curve: &Curve, n: usize) -> Result<Curve> {
    let table = build_arclength_table(curve, n.max(16))?;
    let total = table.total();
    let u = uniform_grid((0.0, 1.0), n);
    let points = u
        .par_iter()
        .map(|&u| {
            let (lo, hi) = curve.domain();
            curve.position(table.inverse(u * total).clamp(lo, hi))
        })
        .collect::<Result<Vec<_>>>()?;
    Curve::sampled(format!("{} (arc length)", curve.label()), u, points, Stencil::Wide)
}

/// [`pair_classify`] after resampling both curves by normalized arc length,
/// so that points are matched by the fraction of length travelled.
pub fn pair_classify_aligned(a: &Curve, b: &Curve, n: usize) -> Result<PairClass> {
    pair_classify(&arclength_aligned(a, n)?, &arclength_aligned(b, n)?, n)
}
