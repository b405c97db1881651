//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::vec3::Vec3;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_LEVELS: u32 = 20;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes, then the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Kronrod estimate and its difference from the embedded Gauss rule.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, (k - g).abs() * h.abs()))
}

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`, bisecting up
/// to [`MAX_LEVELS`] times.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    recurse(&mut f, a, b, tol, 0)
}

fn recurse<F>(f: &mut F, a: f64, b: f64, tol: f64, level: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (v, err) = gk15(f, a, b)?;
    if err <= tol {
        return Ok(v);
    }
    if level >= MAX_LEVELS {
        return Err(Error::NonConvergent { a, b });
    }
    let m = 0.5 * (a + b);
    Ok(recurse(f, a, m, 0.5 * tol, level + 1)? + recurse(f, m, b, 0.5 * tol, level + 1)?)
}

/// [`integrate`] for vector-valued integrands; the error estimate is the
/// Euclidean norm of the Kronrod–Gauss difference.
pub fn integrate_vec3<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Vec3>
where
    F: FnMut(f64) -> Result<Vec3>,
{
    if a == b {
        return Ok(Vec3::zeros());
    }
    recurse_vec3(&mut f, a, b, tol, 0)
}

fn gk15_vec3<F>(f: &mut F, a: f64, b: f64) -> Result<(Vec3, f64)>
where
    F: FnMut(f64) -> Result<Vec3>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Ok((k * h, (k - g).norm() * h.abs()))
}

fn recurse_vec3<F>(f: &mut F, a: f64, b: f64, tol: f64, level: u32) -> Result<Vec3>
where
    F: FnMut(f64) -> Result<Vec3>,
{
    let (v, err) = gk15_vec3(f, a, b)?;
    if err <= tol {
        return Ok(v);
    }
    if level >= MAX_LEVELS {
        return Err(Error::NonConvergent { a, b });
    }
    let m = 0.5 * (a + b);
    Ok(recurse_vec3(f, a, m, 0.5 * tol, level + 1)? + recurse_vec3(f, m, b, 0.5 * tol, level + 1)?)
}


/// One Kronrod estimate for several integrands sharing their evaluation
/// points, with the largest Kronrod–Gauss difference.
pub fn gk15_array<const N: usize, F>(mut f: F, a: f64, b: f64) -> Result<([f64; N], f64)>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc.map(|v| WGK[7] * v);
    let mut g = fc.map(|v| WG[3] * v);
    for i in 0..7 {
        let dx = h * XGK[i];
        let (lo, hi) = (f(c - dx)?, f(c + dx)?);
        for j in 0..N {
            let s = lo[j] + hi[j];
            k[j] += WGK[i] * s;
            if i % 2 == 1 {
                g[j] += WG[i / 2] * s;
            }
        }
    }
    let err = (0..N).map(|j| (k[j] - g[j]).abs() * h.abs()).fold(0.0, f64::max);
    Ok((k.map(|v| v * h), err))
}
