use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::vec3::{JetVec3, Vec3};

use super::Curve;

/// Regularity floor for speed, `|γ' × γ''|` and curvature.
pub const EPS_REG: f64 = 1e-9;

/// Frame, curvature and torsion at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub t: f64,
    pub position: Vec3,
    pub speed: f64,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
}

/// [`FrameData`] plus arc-length derivatives of curvature and torsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetData {
    pub t: f64,
    pub position: Vec3,
    pub speed: f64,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub dkappa_ds: f64,
    pub dtau_ds: f64,
    pub d2kappa_ds2: f64,
}

impl FrenetData {
    pub fn frame(&self) -> FrameData {
        FrameData {
            t: self.t,
            position: self.position,
            speed: self.speed,
            tangent: self.tangent,
            normal: self.normal,
            binormal: self.binormal,
            kappa: self.kappa,
            tau: self.tau,
        }
    }

    /// The same point traversed in the opposite direction: tangent and
    /// binormal flip, and so do odd arc-length derivatives.
    pub fn reversed(&self) -> Self {
        Self {
            tangent: -self.tangent,
            binormal: -self.binormal,
            dkappa_ds: -self.dkappa_ds,
            dtau_ds: -self.dtau_ds,
            ..*self
        }
    }
}

struct Kinematics {
    speed: Jet,
    cross: JetVec3,
    cross_norm: Jet,
    d3: JetVec3,
    d1: JetVec3,
}

/// Speed and `γ' × γ''` as jets of order `order` (needs a position jet of
/// order `order + 2`), plus `γ'''` of order `order - 1`.
fn kinematics(t: f64, pos: &JetVec3, order: usize) -> Result<Kinematics> {
    let d1 = pos.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let d1 = d1.truncate(order);
    let d2 = d2.truncate(order);
    let speed2 = d1.dot(&d1);
    if !(speed2.value().sqrt() > EPS_REG) {
        return Err(Error::singular(t, "speed below regularity floor"));
    }
    let speed = speed2.sqrt()?;
    let cross = d1.cross(&d2);
    let cn2 = cross.dot(&cross);
    if !(cn2.value().sqrt() > EPS_REG) {
        return Err(Error::singular(t, "|γ' × γ''| below regularity floor"));
    }
    let cross_norm = cn2.sqrt()?;
    Ok(Kinematics {
        speed,
        cross,
        cross_norm,
        d3,
        d1,
    })
}

fn frame_values(t: f64, pos: &JetVec3, k: &Kinematics, kappa: f64, tau: f64) -> Result<FrameData> {
    if !(kappa > EPS_REG) {
        return Err(Error::singular(t, "curvature below regularity floor"));
    }
    let speed = k.speed.value();
    let tangent = k.d1.value() / speed;
    let binormal = k.cross.value() / k.cross_norm.value();
    let normal = binormal.cross(&tangent);
    Ok(FrameData {
        t,
        position: pos.value(),
        speed,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
    })
}

/// Frame, κ and τ from a position jet of order at least 3.
pub fn frame_from_jets(t: f64, pos: &JetVec3) -> Result<FrameData> {
    if pos.order() < 3 {
        return Err(Error::InvalidCurve("frame needs a position jet of order 3".into()));
    }
    let k = kinematics(t, pos, 0)?;
    let kappa = k.cross_norm.value() / k.speed.value().powi(3);
    let tau = k.cross.value().dot(&k.d3.value()) / k.cross_norm.value().powi(2);
    frame_values(t, pos, &k, kappa, tau)
}

/// Full apparatus from a position jet of order at least 4. Curvature and
/// torsion are carried as jets so that their arc-length derivatives come
/// from the chain rule rather than differencing.
pub fn frenet_from_jets(t: f64, pos: &JetVec3) -> Result<FrenetData> {
    if pos.order() < 4 {
        return Err(Error::InvalidCurve("apparatus needs a position jet of order 4".into()));
    }
    let k = kinematics(t, pos, 2)?;
    let kappa = k.cross_norm.div_jet(&k.speed.powi(3)?)?;
    let cross1 = k.cross.truncate(1);
    let tau = cross1
        .dot(&k.d3.truncate(1))
        .div_jet(&k.cross_norm.truncate(1).square())?;
    let speed1 = k.speed.truncate(1);
    let dkappa = kappa.derivative().div_jet(&speed1)?;
    let d2kappa = dkappa.derivative().value() / k.speed.value();
    let dtau = tau.derivative().value() / k.speed.value();
    let f = frame_values(t, pos, &k, kappa.value(), tau.value())?;
    Ok(FrenetData {
        t,
        position: f.position,
        speed: f.speed,
        tangent: f.tangent,
        normal: f.normal,
        binormal: f.binormal,
        kappa: f.kappa,
        tau: f.tau,
        dkappa_ds: dkappa.value(),
        dtau_ds: dtau,
        d2kappa_ds2: d2kappa,
    })
}

/// Frenet frame as vector jets of order `order`; needs a position jet of
/// order `order + 2`.
pub fn frame_jets(t: f64, pos: &JetVec3, order: usize) -> Result<[JetVec3; 3]> {
    if pos.order() < order + 2 {
        return Err(Error::InvalidCurve(format!(
            "frame jets of order {order} need a position jet of order {}",
            order + 2
        )));
    }
    let k = kinematics(t, pos, order)?;
    let tangent = k.d1.div_scalar_jet(&k.speed)?;
    let binormal = k.cross.div_scalar_jet(&k.cross_norm)?;
    let normal = binormal.cross(&tangent);
    Ok([tangent, normal, binormal])
}

pub fn frenet_apparatus(curve: &Curve, t: f64) -> Result<FrenetData> {
    let pos = curve.jet(t, 4)?;
    frenet_from_jets(t, &pos)
}

pub fn frame_at(curve: &Curve, t: f64) -> Result<FrameData> {
    let pos = curve.jet(t, 3)?;
    frame_from_jets(t, &pos)
}

/// Geodesic curvature of the principal image of the principal normal
/// indicatrix, `κ²/(κ²+τ²)^{3/2} · (τ/κ)'`.
pub fn slant_geodesic_indicator(fd: &FrenetData) -> Result<f64> {
    if !(fd.kappa > EPS_REG) {
        return Err(Error::singular(fd.t, "curvature below regularity floor"));
    }
    let k2 = fd.kappa * fd.kappa;
    let ratio_ds = (fd.dtau_ds * fd.kappa - fd.tau * fd.dkappa_ds) / k2;
    let g = k2 / (k2 + fd.tau * fd.tau).powf(1.5) * ratio_ds;
    if !g.is_finite() {
        return Err(Error::singular(fd.t, "non-finite geodesic indicator"));
    }
    Ok(g)
}
