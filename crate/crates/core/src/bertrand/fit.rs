use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::curve::{frame_at, Curve};
use crate::error::{Error, Result};

/// Smallest singular value, relative to the largest, below which a fit
/// is reported as ill-conditioned.
const RCOND: f64 = 1e-9;

/// `a·κ + b·τ = 1` fitted over samples of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRelation {
    pub a: f64,
    pub b: f64,
    /// RMS of `aκᵢ + bτᵢ − 1`.
    pub residual: f64,
}

/// `y = slope·x + intercept` by least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

fn least_squares(a: DMatrix<f64>, y: DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > RCOND * smax) {
        return Err(Error::IllConditioned(format!(
            "singular values {smax:e} and {smin:e}"
        )));
    }
    let x = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let r = &a * &x - y;
    let rms = (r.norm_squared() / r.len() as f64).sqrt();
    Ok((x, rms))
}

/// Fits `a·κ + b·τ = 1` over `n` uniform samples. Curves whose curvature
/// and torsion are proportional (general helices, including circular ones)
/// have no unique fit and are reported as ill-conditioned.
pub fn linear_relation_fit(curve: &Curve, n: usize) -> Result<LinearRelation> {
    if n < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: n });
    }
    let rows = curve
        .grid(n)
        .into_par_iter()
        .map(|t| frame_at(curve, t).map(|fd| (fd.kappa, fd.tau)))
        .collect::<Result<Vec<_>>>()?;
    let a = DMatrix::from_fn(n, 2, |i, j| if j == 0 { rows[i].0 } else { rows[i].1 });
    let (x, residual) = least_squares(a, DVector::from_element(n, 1.0))?;
    Ok(LinearRelation {
        a: x[0],
        b: x[1],
        residual,
    })
}

pub fn affine_fit(x: &[f64], y: &[f64]) -> Result<AffineFit> {
    if x.len() != y.len() {
        return Err(Error::GridMismatch(format!("{} abscissae for {} values", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: x.len() });
    }
    let a = DMatrix::from_fn(x.len(), 2, |i, j| if j == 0 { x[i] } else { 1.0 });
    let (c, rms_residual) = least_squares(a, DVector::from_column_slice(y))?;
    Ok(AffineFit {
        slope: c[0],
        intercept: c[1],
        rms_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_is_ill_conditioned() {
        let helix = Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0)).unwrap();
        assert!(matches!(linear_relation_fit(&helix, 32), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn generic_curve_has_no_linear_relation() {
        let c = Curve::parse("c", "t", "t^2", "t^4", (0.2, 1.5)).unwrap();
        assert!(linear_relation_fit(&c, 64).unwrap().residual > 1e-2);
    }

    #[test]
    fn affine_exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let fit = affine_fit(&x, &y).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-13 && (fit.intercept + 1.0).abs() < 1e-13);
        assert!(fit.rms_residual < 1e-13);
    }
}
