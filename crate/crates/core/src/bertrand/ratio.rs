use crate::curve::{slant_geodesic_indicator, FrenetData, EPS_REG};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Below this `|dκ/ds|` the ratio `g` is undefined.
pub const EPS_G: f64 = 1e-10;
/// Minimum `|g − f|` for the offset formula.
pub const EPS_DEN: f64 = 1e-10;

/// `f = τ/κ`, `g = τ'/κ'` and the slant indicator at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioInvariants {
    pub t: f64,
    pub f: f64,
    /// NaN unless `g_defined`.
    pub g: f64,
    pub g_defined: bool,
    pub gamma: f64,
}

impl RatioInvariants {
    pub fn g_checked(&self) -> Result<f64> {
        if self.g_defined {
            Ok(self.g)
        } else {
            Err(Error::DegenerateRatio(format!(
                "g undefined at t = {} (dκ/ds vanishes; helical curves are excluded)",
                self.t
            )))
        }
    }
}

pub fn ratio_invariants(fd: &FrenetData) -> Result<RatioInvariants> {
    if !(fd.kappa > EPS_REG) {
        return Err(Error::singular(fd.t, "curvature below regularity floor"));
    }
    let g_defined = fd.dkappa_ds.abs() >= EPS_G;
    Ok(RatioInvariants {
        t: fd.t,
        f: fd.tau / fd.kappa,
        g: if g_defined { fd.dtau_ds / fd.dkappa_ds } else { f64::NAN },
        g_defined,
        gamma: slant_geodesic_indicator(fd)?,
    })
}

fn ratio_gap(f: f64, g: f64, t: f64) -> Result<f64> {
    let d = g - f;
    if d.abs() <= EPS_DEN {
        return Err(Error::DegenerateRatio(format!(
            "g = f at t = {t} (planar curves are excluded)"
        )));
    }
    Ok(d)
}

/// Offset of the Bertrand mate along the principal normal, `g/(κ(g − f))`.
pub fn bertrand_lambda(ri: &RatioInvariants, kappa: f64) -> Result<f64> {
    let g = ri.g_checked()?;
    let d = ratio_gap(ri.f, g, ri.t)?;
    Ok(g / (kappa * d))
}

/// The same offset seen from the mate, `−εg̃/(κ̃(g̃ − f̃))`.
pub fn bertrand_lambda_from_mate(ri_mate: &RatioInvariants, kappa_mate: f64, eps: f64) -> Result<f64> {
    Ok(-eps * bertrand_lambda(ri_mate, kappa_mate)?)
}

/// Frame, curvature and torsion of the partner curve in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MateApparatus {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
    /// Ratio of the partner's arc-length element to this curve's.
    pub ds_ratio: f64,
}

/// Closed-form apparatus of the partner from one side of a pair:
///
/// `T̃ = −(T − gB)/√(1+g²)`, `Ñ = εN`, `B̃ = −ε(gT + B)/√(1+g²)`,
/// `κ̃ = −εκ(g − f)(1 + fg)/(f(1+g²))`, `τ̃ = κ(g − f)²/(f(1+g²))`,
/// `ds̃/ds = f√(1+g²)/(g − f)`.
///
/// The relations are symmetric, so passing the mate's data yields the base.
pub fn mate_apparatus_from_base(fd: &FrenetData, ri: &RatioInvariants, eps: f64) -> Result<MateApparatus> {
    let g = ri.g_checked()?;
    let f = ri.f;
    if f.abs() <= EPS_DEN {
        return Err(Error::DegenerateRatio(format!("f = 0 at t = {} (planar curve)", ri.t)));
    }
    let d = ratio_gap(f, g, ri.t)?;
    let q = (1.0 + g * g).sqrt();
    let k = fd.kappa;
    Ok(MateApparatus {
        tangent: -(fd.tangent - g * fd.binormal) / q,
        normal: eps * fd.normal,
        binormal: -eps * (g * fd.tangent + fd.binormal) / q,
        kappa: -eps * k * d * (1.0 + f * g) / (f * q * q),
        tau: k * d * d / (f * q * q),
        ds_ratio: f * q / d,
    })
}

/// Slant indicator of one curve from its partner's data:
/// `Γ = −sgn(1 + f̃g̃)·κ̃'(g̃ − f̃)/(κ̃²(1+f̃²)^{3/2})`.
///
/// `fd_partner` must be oriented so that its tangent makes an obtuse
/// angle with this curve's tangent (see [`orient_partner`]). The sign
/// factor is one whenever `1 + f̃g̃ > 0`.
pub fn geodesic_indicator_closed_form(ri_partner: &RatioInvariants, fd_partner: &FrenetData) -> Result<f64> {
    let g = ri_partner.g_checked()?;
    let f = ri_partner.f;
    let k = fd_partner.kappa;
    if !(k > EPS_REG) {
        return Err(Error::singular(fd_partner.t, "curvature below regularity floor"));
    }
    let p = 1.0 + f * g;
    if p.abs() <= EPS_DEN {
        return Err(Error::singular(fd_partner.t, "1 + fg vanishes (inflection of the partner)"));
    }
    let v = -p.signum() * fd_partner.dkappa_ds * (g - f) / (k * k * (1.0 + f * f).powf(1.5));
    if !v.is_finite() {
        return Err(Error::singular(fd_partner.t, "non-finite closed-form indicator"));
    }
    Ok(v)
}

/// Reverses `partner` if its tangent makes an acute angle with `this`.
/// Returns the oriented data and `+1` or `−1` for the flip applied.
pub fn orient_partner(this: &FrenetData, partner: &FrenetData) -> (FrenetData, f64) {
    if this.tangent.dot(&partner.tangent) > 0.0 {
        (partner.reversed(), -1.0)
    } else {
        (*partner, 1.0)
    }
}
