//! Curve and curve-pair classification, and the theorem suite over a
//! Bertrand pair.

mod pair;
mod suite;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bertrand::{ConstancyStats, RatioInvariants};
use crate::curve::{frenet_apparatus, Curve, FrenetData};
use crate::error::{Error, Result};
use crate::indicatrix::IndicatrixApparatus;

pub use pair::{
    arclength_aligned, pair_classify, pair_classify_aligned, CategoryEvidence, PairClass, PairCriterion, PairVerdict,
    PAIR_TOL,
};
pub use suite::{
    indicatrix_pairs, theorem_suite, EntryKind, Flag, SuiteTolerances, TheoremEntry, TheoremReport, CONDITION_TOL,
    THEOREM_IDS,
};

/// Relative thresholds for [`classify_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyTolerances {
    pub planar: f64,
    pub helix: f64,
    pub slant: f64,
    pub sphere: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self {
            planar: 1e-8,
            helix: 1e-6,
            slant: 1e-5,
            sphere: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMetrics {
    /// `max|τ| / max κ`.
    pub tau_max: f64,
    /// Relative spread of `f = τ/κ`.
    pub f_deviation: f64,
    /// Relative spread of the geodesic indicator.
    pub gamma_deviation: f64,
    /// RMS distance to the best-fit sphere, relative to its radius.
    pub sphere_fit_residual: f64,
    pub sphere_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveClass {
    pub planar: bool,
    pub general_helix: bool,
    pub slant_helix: bool,
    pub spherical: bool,
    /// The points do not determine a unique sphere (coplanar or collinear).
    pub degenerate_sphere_fit: bool,
    pub metrics: CurveMetrics,
    pub masked: usize,
}

struct SphereFit {
    radius: f64,
    residual: f64,
    degenerate: bool,
}

/// Least-squares sphere `|x|² = 2⟨c, x⟩ + d`, solved by SVD; a rank-deficient
/// system gets the minimum-norm solution.
fn fit_sphere(points: &[nalgebra::Vector3<f64>]) -> Result<SphereFit> {
    let n = points.len();
    let a = DMatrix::from_fn(n, 4, |i, j| if j < 3 { 2.0 * points[i][j] } else { 1.0 });
    let y = DVector::from_fn(n, |i, _| points[i].norm_squared());
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let degenerate = smin <= 1e-9 * smax;
    let x = svd
        .solve(&y, 1e-9 * smax)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let c = nalgebra::Vector3::new(x[0], x[1], x[2]);
    let r2 = x[3] + c.norm_squared();
    if !(r2 > 0.0) {
        return Ok(SphereFit {
            radius: f64::NAN,
            residual: f64::INFINITY,
            degenerate,
        });
    }
    let radius = r2.sqrt();
    let ss: f64 = points.iter().map(|p| ((p - c).norm() - radius).powi(2)).sum();
    Ok(SphereFit {
        radius,
        residual: (ss / n as f64).sqrt() / radius,
        degenerate,
    })
}

/// Classifies a curve from `n ≥ 64` samples. Points where the Frenet frame
/// is undefined are skipped and counted.
pub fn classify_curve(curve: &Curve, n: usize, tol: &ClassifyTolerances) -> Result<CurveClass> {
    if n < 64 {
        return Err(Error::TooFewSamples { needed: 64, got: n });
    }
    let rows = curve
        .grid(n)
        .into_par_iter()
        .map(|t| match frenet_apparatus(curve, t) {
            Ok(fd) => Ok(Some(fd)),
            Err(Error::SingularPoint { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let masked = rows.iter().filter(|r| r.is_none()).count();
    let fds: Vec<FrenetData> = rows.into_iter().flatten().collect();
    if fds.len() < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: fds.len() });
    }
    let kmax = fds.iter().map(|f| f.kappa).fold(0.0, f64::max);
    let tau_max = fds.iter().map(|f| f.tau.abs()).fold(0.0, f64::max) / kmax;
    let f_dev = ConstancyStats::from_values(&fds.iter().map(|f| Some(f.tau / f.kappa)).collect::<Vec<_>>());
    let gammas: Vec<Option<f64>> = fds
        .iter()
        .map(|f| crate::curve::slant_geodesic_indicator(f).ok())
        .collect();
    let g_dev = ConstancyStats::from_values(&gammas);
    let points: Vec<_> = fds.iter().map(|f| f.position).collect();
    let sphere = fit_sphere(&points)?;
    let metrics = CurveMetrics {
        tau_max,
        f_deviation: f_dev.relative(),
        gamma_deviation: g_dev.relative(),
        sphere_fit_residual: sphere.residual,
        sphere_radius: sphere.radius,
    };
    Ok(CurveClass {
        planar: metrics.tau_max < tol.planar,
        general_helix: metrics.f_deviation < tol.helix,
        slant_helix: metrics.gamma_deviation < tol.slant,
        spherical: metrics.sphere_fit_residual < tol.sphere,
        degenerate_sphere_fit: sphere.degenerate,
        metrics,
        masked: masked + g_dev.masked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalHelixCheck {
    pub is_spherical_helix: bool,
    /// `max|τ/κ − mean| / (1 + |mean|)`.
    pub deviation: f64,
    pub mean: f64,
}

/// Constancy of `τ/κ` over `(κ, τ)` pairs.
pub fn ratio_constancy(kappa_tau: &[(f64, f64)], tol: f64) -> Result<SphericalHelixCheck> {
    let mut ratios = Vec::with_capacity(kappa_tau.len());
    for &(k, t) in kappa_tau {
        if k.abs() < 1e-12 {
            return Err(Error::DegenerateRatio(format!("curvature {k} too small for tau/kappa")));
        }
        ratios.push(Some(t / k));
    }
    let st = ConstancyStats::from_values(&ratios);
    let deviation = st.relative();
    Ok(SphericalHelixCheck {
        is_spherical_helix: deviation < tol,
        deviation,
        mean: st.mean,
    })
}

/// Whether an indicatrix (already on the unit sphere) has constant `τ/κ`.
pub fn spherical_helix_check(app: &IndicatrixApparatus, tol: f64) -> Result<SphericalHelixCheck> {
    let kt: Vec<(f64, f64)> = app.samples.iter().map(|s| (s.kappa, s.tau)).collect();
    ratio_constancy(&kt, tol)
}

/// `max|τ| / max κ` of an indicatrix from its closed forms.
pub fn indicatrix_planarity(app: &IndicatrixApparatus) -> f64 {
    let k = app.samples.iter().map(|s| s.kappa.abs()).fold(0.0, f64::max);
    app.samples.iter().map(|s| s.tau.abs()).fold(0.0, f64::max) / k
}

fn partner_terms(fd: &FrenetData, ri: &RatioInvariants) -> Result<(f64, f64, f64, f64, f64)> {
    let g = ri.g_checked()?;
    Ok((fd.kappa, fd.dkappa_ds, fd.d2kappa_ds2, ri.f, g))
}

/// `κ″κf² − 3κ′²gf + κ″κ − 3κ′²` of the given curve, divided by
/// `|κ″κ(1+f²)| + |3κ′²(1+fg)|`.
pub fn helix_condition_residual(fd: &FrenetData, ri: &RatioInvariants) -> Result<f64> {
    let (k, k1, k2, f, g) = partner_terms(fd, ri)?;
    let value = k2 * k * f * f - 3.0 * k1 * k1 * g * f + k2 * k - 3.0 * k1 * k1;
    let scale = (k2 * k * (1.0 + f * f)).abs() + (3.0 * k1 * k1 * (1.0 + f * g)).abs();
    if scale == 0.0 {
        return Err(Error::SingularPoint {
            t: fd.t,
            what: "curvature is stationary to second order".into(),
        });
    }
    Ok(value / scale)
}

/// `κκ″f² − 3κ′²gf − (3κ′² − κκ″)`, normalized as in
/// [`helix_condition_residual`]. Algebraically the same expression.
pub fn planar_condition_residual(fd: &FrenetData, ri: &RatioInvariants) -> Result<f64> {
    let (k, k1, k2, f, g) = partner_terms(fd, ri)?;
    let value = k * k2 * f * f - 3.0 * k1 * k1 * g * f - (3.0 * k1 * k1 - k * k2);
    let scale = (k2 * k * (1.0 + f * f)).abs() + (3.0 * k1 * k1 * (1.0 + f * g)).abs();
    if scale == 0.0 {
        return Err(Error::SingularPoint {
            t: fd.t,
            what: "curvature is stationary to second order".into(),
        });
    }
    Ok(value / scale)
}

#[cfg(test)]
mod tests;
