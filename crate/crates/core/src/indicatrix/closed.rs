//! Closed-form apparatus of the spherical indicatrices of one curve of a
//! Bertrand pair, written in terms of the other curve ("partner").
//!
//! Notation: `k, k1, k2` are the partner's curvature and its first two
//! arc-length derivatives, `F = 1+f²`, `G = 1+g²`, `P = 1+fg`, `Q = g−f`
//! with the partner's ratios, and `ρ = √(k1²Q² + k⁴F³)`. The partner is
//! oriented so that its tangent makes an obtuse angle with the tangent of
//! the curve whose indicatrices are described.

use crate::bertrand::{FrameAxis, RatioInvariants};
use crate::curve::FrenetData;
use crate::error::{Error, Result};
use crate::vec3::Vec3;

use super::Side;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
}

impl Frame {
    pub fn vector(&self, i: usize) -> Vec3 {
        [self.tangent, self.normal, self.binormal][i]
    }

    /// Largest deviation from an orthonormal right-handed frame.
    pub fn orthonormality_defect(&self) -> f64 {
        let (t, n, b) = (self.tangent, self.normal, self.binormal);
        [
            t.dot(&n).abs(),
            t.dot(&b).abs(),
            n.dot(&b).abs(),
            (t.norm() - 1.0).abs(),
            (n.norm() - 1.0).abs(),
            (b.norm() - 1.0).abs(),
            (t.cross(&n) - b).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Apparatus values as printed in the source formulas, kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedForms {
    pub frame: Frame,
    pub kappa: f64,
    pub tau: f64,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Partner {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub f: f64,
    pub g: f64,
    pub eps: f64,
}

impl Partner {
    pub fn new(fd: &FrenetData, ri: &RatioInvariants, eps: f64) -> Result<Self> {
        let g = ri.g_checked()?;
        let p = Self {
            t: fd.tangent,
            n: fd.normal,
            b: fd.binormal,
            k: fd.kappa,
            k1: fd.dkappa_ds,
            k2: fd.d2kappa_ds2,
            f: ri.f,
            g,
            eps,
        };
        if p.f.abs() < 1e-12 || p.q().abs() < 1e-12 || p.p().abs() < 1e-12 {
            return Err(Error::DegenerateRatio(format!(
                "partner ratios f = {}, g = {} at t = {} leave a vanishing denominator",
                p.f, g, fd.t
            )));
        }
        Ok(p)
    }

    pub fn ff(&self) -> f64 {
        1.0 + self.f * self.f
    }
    pub fn gg(&self) -> f64 {
        1.0 + self.g * self.g
    }
    pub fn p(&self) -> f64 {
        1.0 + self.f * self.g
    }
    pub fn q(&self) -> f64 {
        self.g - self.f
    }
    pub fn rho(&self) -> f64 {
        (self.k1 * self.k1 * self.q() * self.q() + self.k.powi(4) * self.ff().powi(3)).sqrt()
    }
    /// `k·k2·F − 3·k1²·P`; vanishes exactly where the normal indicatrix
    /// has zero torsion.
    pub fn w(&self) -> f64 {
        self.k * self.k2 * self.ff() - 3.0 * self.k1 * self.k1 * self.p()
    }
    /// `(T̃ − fB̃)/√F`
    fn u(&self) -> Vec3 {
        (self.t - self.f * self.b) / self.ff().sqrt()
    }
    /// `(fT̃ + B̃)/√F`
    fn v(&self) -> Vec3 {
        (self.f * self.t + self.b) / self.ff().sqrt()
    }

    /// Curvature and torsion of the described curve.
    pub fn curve_kappa_tau(&self) -> (f64, f64) {
        let d = self.f * self.gg();
        (
            -self.eps * self.k * self.p() * self.q() / d,
            self.k * self.q() * self.q() / d,
        )
    }
}

/// Exact apparatus of one indicatrix; `ds` is its arc-length element per
/// unit partner arc length, `rho` is set for the normal indicatrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Exact {
    pub frame: Frame,
    pub kappa: f64,
    pub tau: f64,
    pub gamma: Option<f64>,
    pub ds: f64,
    pub rho: Option<f64>,
}

fn tangent_gamma(p: &Partner) -> f64 {
    let (ff, rho) = (p.ff(), p.rho());
    p.eps * p.q() * p.k * p.k * ff.powf(1.5) * p.w() / rho.powi(3)
}

pub(crate) fn exact(p: &Partner, axis: FrameAxis) -> Exact {
    let (e, sp, sq, sf) = (p.eps, p.p().signum(), p.q().signum(), p.f.signum());
    let (ff, gg, pp, q, k) = (p.ff(), p.gg(), p.p(), p.q(), p.k);
    let (u, v) = (p.u(), p.v());
    match axis {
        FrameAxis::Tangent => Exact {
            frame: Frame {
                tangent: e * p.n,
                normal: sp * u,
                binormal: -e * sp * v,
            },
            kappa: (ff * gg).sqrt() / pp.abs(),
            tau: -gg.sqrt() * p.k1 * q / (k * k * ff * pp),
            gamma: Some(tangent_gamma(p)),
            ds: -e * k * pp / gg.sqrt(),
            rho: None,
        },
        FrameAxis::Normal => {
            let rho = p.rho();
            let a = p.k1 * q;
            Exact {
                frame: Frame {
                    tangent: sp * u,
                    normal: e / (rho * ff.sqrt()) * (p.f * a * p.t - k * k * ff * ff * p.n + a * p.b),
                    binormal: -e * sp / rho * (k * k * ff * ff.sqrt() * v + a * p.n),
                },
                kappa: rho / (k * k * ff.powf(1.5)),
                tau: e * q * p.w() / (rho * rho),
                gamma: None,
                ds: -e * sp * k * ff.sqrt(),
                rho: Some(rho),
            }
        }
        FrameAxis::Binormal => Exact {
            frame: Frame {
                tangent: sq * sp * p.n,
                normal: e * sq * u,
                binormal: -e * sp * v,
            },
            kappa: (ff * gg).sqrt() / q.abs(),
            tau: -e * gg.sqrt() * p.k1 / (k * k * ff),
            gamma: Some(-sf * tangent_gamma(p)),
            ds: sf * k * q / gg.sqrt(),
            rho: None,
        },
    }
}

/// The formulas exactly as printed: the base side reads the mate's
/// quantities, the mate side the base's.
pub(crate) fn printed(p: &Partner, axis: FrameAxis, side: Side) -> PrintedForms {
    let e = p.eps;
    let (ff, gg, q, k) = (p.ff(), p.gg(), p.q(), p.k);
    let (u, v) = (p.u(), p.v());
    let braces = p.w();
    let rho = p.rho();
    // Both sides print the indicatrix arc-length element as
    // k(f − g)/√G per unit partner arc length.
    let ds_printed = -k * q / gg.sqrt();
    let gamma = || {
        let core = k.powi(3) * ff.powf(1.5) * q * q * braces / (gg.sqrt() * rho.powi(3));
        match side {
            Side::Base => -core / ds_printed,
            Side::Mate => core / ds_printed,
        }
    };
    let kappa_tb = (ff * gg).sqrt() / (p.f - p.g);
    match axis {
        FrameAxis::Tangent => PrintedForms {
            frame: Frame {
                tangent: -p.n,
                normal: u,
                binormal: v,
            },
            kappa: kappa_tb,
            tau: match side {
                Side::Base => -p.k1 * gg.sqrt() / (k * k * ff),
                Side::Mate => p.k1 * gg.sqrt() / (k * k * ff),
            },
            gamma: Some(gamma()),
        },
        FrameAxis::Normal => {
            let a = p.k1 * q;
            PrintedForms {
                frame: Frame {
                    tangent: -e * u,
                    normal: e / (rho * ff.sqrt()) * (p.f * a * p.t - k * k * ff * ff * p.n + a * p.b),
                    binormal: (k * k * p.f * ff * p.t + a * p.n + k * k * ff * p.b) / rho,
                },
                kappa: rho / (k * k * ff.powf(1.5)),
                tau: -e * q / (rho * rho)
                    * ((3.0 * p.k1 * p.k1 - k * p.k2) * ff + 3.0 * p.f * p.k1 * p.k1 * q),
                gamma: None,
            }
        }
        FrameAxis::Binormal => PrintedForms {
            frame: Frame {
                tangent: e * p.n,
                normal: -e * u,
                binormal: v,
            },
            kappa: kappa_tb,
            tau: -e * p.k1 * gg.sqrt() / (k * k * ff),
            gamma: Some(gamma()),
        },
    }
}

/// Candidate integrands for the tangent-indicatrix arc length per unit
/// arc length of the described curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentLengthCandidates {
    /// `−k(g−f)²/(f(1+g)²)` as printed.
    pub printed: f64,
    /// `−k(g−f)²/(f(1+g²))`, the printed form with `(1+g²)`.
    pub squared_g: f64,
    /// The curvature of the described curve, which is the exact value.
    pub exact: f64,
}

pub(crate) fn tangent_length_candidates(p: &Partner) -> TangentLengthCandidates {
    let (q, k) = (p.q(), p.k);
    TangentLengthCandidates {
        printed: -k * q * q / (p.f * (1.0 + p.g).powi(2)),
        squared_g: -k * q * q / (p.f * p.gg()),
        exact: p.curve_kappa_tau().0,
    }
}
