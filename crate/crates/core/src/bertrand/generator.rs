//! Bertrand curves built from a curve on the unit sphere.
//!
//! For a sphere curve `c` and `0 < ω < π`, `ω ≠ π/2`, the curve
//! `γ = a ∫ c |c'| dt + a cot ω ∫ c × c' dt` satisfies
//! `sin ω · κ + cos ω · τ = sin ω / a`, so it is a Bertrand curve whose mate
//! sits at distance `a` along the principal normal.

use std::sync::Arc;

use crate::curve::quadrature::integrate_vec3;
use crate::curve::{uniform_grid, Curve, CurveKind, EPS_REG};
use crate::error::{Error, Result, SphereDefect};
use crate::jet::Jet;
use crate::vec3::{JetVec3, Vec3};

pub const DEFAULT_SAMPLES: usize = 4096;
const SPHERE_TOL: f64 = 1e-8;
const NODE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub a: f64,
    pub omega: f64,
    pub samples: usize,
}

impl GeneratorParams {
    pub fn new(a: f64, omega: f64) -> Self {
        Self {
            a,
            omega,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// A generated Bertrand curve. Positions are accumulated by quadrature
/// from a table of nodes; derivatives of every order come from jets of the
/// sphere curve.
#[derive(Debug)]
pub struct GeneratedCurve {
    sphere: Curve,
    params: GeneratorParams,
    nodes: Vec<f64>,
    node_pos: Vec<Vec3>,
    nominal_lambda: f64,
}

impl GeneratedCurve {
    pub fn sphere(&self) -> &Curve {
        &self.sphere
    }

    pub fn params(&self) -> GeneratorParams {
        self.params
    }

    pub fn a(&self) -> f64 {
        self.params.a
    }

    pub fn omega(&self) -> f64 {
        self.params.omega
    }

    pub fn samples(&self) -> usize {
        self.params.samples
    }

    /// Offset along the principal normal at which the Bertrand mate lies.
    pub fn nominal_lambda(&self) -> f64 {
        self.nominal_lambda
    }

    pub fn domain(&self) -> (f64, f64) {
        self.sphere.domain()
    }

    fn velocity_jet(&self, t: f64, order: usize) -> Result<JetVec3> {
        let c = self.sphere.jet(t, order + 1)?;
        let dc = c.derivative();
        let c = c.truncate(order);
        let speed = dc.norm()?;
        let cot = 1.0 / self.params.omega.tan();
        Ok(c.mul_scalar_jet(&speed)
            .add(&c.cross(&dc).scale(cot))
            .scale(self.params.a))
    }

    fn velocity(&self, t: f64) -> Result<Vec3> {
        Ok(self.velocity_jet(t, 0)?.value())
    }

    pub fn position(&self, t: f64) -> Result<Vec3> {
        let i = self.nodes.partition_point(|&x| x <= t).clamp(1, self.nodes.len()) - 1;
        let j = if i + 1 < self.nodes.len() && (self.nodes[i + 1] - t) < (t - self.nodes[i]) {
            i + 1
        } else {
            i
        };
        Ok(self.node_pos[j] + integrate_vec3(|x| self.velocity(x), self.nodes[j], t, NODE_TOL)?)
    }

    pub fn jet(&self, t: f64, order: usize) -> Result<JetVec3> {
        let p = self.position(t)?;
        if order == 0 {
            return Ok(JetVec3::constant(&p, 0));
        }
        let v = self.velocity_jet(t, order - 1)?;
        let lift = |p0: f64, j: &Jet| {
            let mut c = Vec::with_capacity(order + 1);
            c.push(p0);
            c.extend(j.coeffs().iter().enumerate().map(|(k, x)| x / (k + 1) as f64));
            Jet::from_coeffs(c)
        };
        Ok(JetVec3::new(lift(p.x, &v.x), lift(p.y, &v.y), lift(p.z, &v.z)))
    }
}

/// Geodesic curvature of a unit-sphere curve, `⟨c × c', c''⟩ / |c'|³`.
pub fn sphere_geodesic_curvature(sphere: &Curve, t: f64) -> Result<f64> {
    let j = sphere.jet(t, 2)?;
    let (c, d1, d2) = (j.value(), j.coeff(1), 2.0 * j.coeff(2));
    let sp = d1.norm();
    if !(sp > EPS_REG) {
        return Err(Error::DegenerateSphereCurve(SphereDefect::Irregular));
    }
    Ok(c.cross(&d1).dot(&d2) / sp.powi(3))
}

/// Checks the sphere curve and the generator parameters, returning the
/// geodesic curvature at each node.
fn validate(sphere: &Curve, params: &GeneratorParams, nodes: &[f64]) -> Result<Vec<f64>> {
    let GeneratorParams { a, omega, samples } = *params;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidCurve(format!("generator needs a > 0, got {a}")));
    }
    if !(omega > 0.0 && omega < std::f64::consts::PI) || omega.cos().abs() < 1e-12 {
        return Err(Error::InvalidCurve(format!(
            "generator needs 0 < omega < pi, omega != pi/2, got {omega}"
        )));
    }
    if samples < 16 {
        return Err(Error::TooFewSamples {
            needed: 16,
            got: samples,
        });
    }
    let mut worst: f64 = 0.0;
    let mut kg = Vec::with_capacity(nodes.len());
    for &t in nodes {
        worst = worst.max((sphere.position(t)?.norm() - 1.0).abs());
        kg.push(sphere_geodesic_curvature(sphere, t)?);
    }
    if worst > SPHERE_TOL {
        return Err(Error::NotSpherical(worst));
    }
    Ok(kg)
}

fn build(sphere: Curve, params: GeneratorParams, check_shape: bool) -> Result<GeneratedCurve> {
    let nodes = uniform_grid(sphere.domain(), params.samples);
    let kg = validate(&sphere, &params, &nodes)?;
    let (s, c) = params.omega.sin_cos();
    // Principal normal of γ is ±c'/|c'|, with sign of sin ω − K cos ω.
    let side: Vec<f64> = kg.iter().map(|k| s - k * c).collect();
    if check_shape {
        let (lo, hi) = kg
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &k| (l.min(k), h.max(k)));
        if hi - lo < 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
            return Err(Error::DegenerateSphereCurve(SphereDefect::Helical));
        }
        let scale = s.abs() + c.abs() * lo.abs().max(hi.abs());
        let first = side[0].signum();
        if side.iter().any(|&v| v.abs() < 1e-6 * scale || v.signum() != first) {
            return Err(Error::DegenerateSphereCurve(SphereDefect::Inflection));
        }
    }
    let mid = side[side.len() / 2];
    let nominal_lambda = params.a * mid.signum();
    let mut g = GeneratedCurve {
        sphere,
        params,
        nodes,
        node_pos: Vec::new(),
        nominal_lambda,
    };
    let mut pos = Vec::with_capacity(g.nodes.len());
    let mut acc = Vec3::zeros();
    pos.push(acc);
    for w in g.nodes.windows(2) {
        acc += integrate_vec3(|x| g.velocity(x), w[0], w[1], NODE_TOL)?;
        pos.push(acc);
    }
    g.node_pos = pos;
    Ok(g)
}

/// Builds the Bertrand curve of `sphere`. Fails on constant geodesic
/// curvature (the output would be a circular helix) and when the output
/// would have an inflection point.
pub fn generate_bertrand_curve(sphere: &Curve, params: GeneratorParams) -> Result<Curve> {
    let g = build(sphere.clone(), params, true)?;
    Ok(Curve::from_kind(
        format!("bertrand({})", sphere.label()),
        CurveKind::Generated(Arc::new(g)),
    ))
}

/// As [`generate_bertrand_curve`] without the shape checks, so helical
/// outputs can be inspected.
pub fn generate_unchecked(sphere: &Curve, params: GeneratorParams) -> Result<Curve> {
    let g = build(sphere.clone(), params, false)?;
    Ok(Curve::from_kind(
        format!("bertrand({})", sphere.label()),
        CurveKind::Generated(Arc::new(g)),
    ))
}
