//! Finite-difference jets for sampled curves.

use crate::error::{Error, Result};
use crate::jet::{Jet, JetError};
use crate::vec3::{JetVec3, Vec3};

/// How derivatives of a sampled curve are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Seven nearest nodes for every derivative order (up to 6).
    #[default]
    Wide,
    /// Smallest window giving second-order accuracy for each derivative
    /// (up to 3): three nodes for first and second derivatives, five for the
    /// third, widened by one node where the window cannot be centred.
    Compact,
}

impl Stencil {
    pub fn max_order(self) -> usize {
        match self {
            Stencil::Wide => 6,
            Stencil::Compact => 3,
        }
    }
}

/// Fornberg's recursion: `w[k][j]` is the weight of node `j` in the `k`-th
/// derivative at `x0`, for `k <= m`.
pub fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut w = vec![vec![0.0; n]; m + 1];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

fn window(center: usize, size: usize, n: usize) -> usize {
    let half = (size - 1) / 2;
    center.saturating_sub(half).min(n - size)
}

fn nearest(params: &[f64], t: f64) -> usize {
    let i = params.partition_point(|&p| p < t);
    if i == 0 {
        0
    } else if i == params.len() {
        params.len() - 1
    } else if (params[i] - t).abs() < (t - params[i - 1]).abs() {
        i
    } else {
        i - 1
    }
}

fn apply(weights: &[f64], points: &[Vec3], start: usize) -> Vec3 {
    weights
        .iter()
        .enumerate()
        .fold(Vec3::zeros(), |acc, (j, w)| acc + points[start + j] * *w)
}

/// Jet of a sampled curve at `t`. Derivative `k` is divided by `k!` to give
/// Taylor coefficients.
pub fn sampled_jet(
    params: &[f64],
    points: &[Vec3],
    stencil: Stencil,
    t: f64,
    order: usize,
) -> Result<JetVec3> {
    if order > stencil.max_order() {
        return Err(Error::Jet(JetError::OrderOverflow {
            requested: order,
            max: stencil.max_order(),
        }));
    }
    let n = params.len();
    let i = nearest(params, t);
    let mut derivs = Vec::with_capacity(order + 1);
    match stencil {
        Stencil::Wide => {
            let size = 7.min(n);
            let start = window(i, size, n);
            let w = fd_weights(t, &params[start..start + size], order);
            for wk in w.iter().take(order + 1) {
                derivs.push(apply(wk, points, start));
            }
        }
        Stencil::Compact => {
            for k in 0..=order {
                let centred = 2 * k.div_ceil(2) + 1;
                let centred = if k == 0 { 1 } else { centred };
                let half = (centred - 1) / 2;
                let size = if i >= half && i + half < n { centred } else { k + 2 };
                let start = window(i, size, n);
                let w = fd_weights(t, &params[start..start + size], k);
                derivs.push(apply(&w[k], points, start));
            }
        }
    }
    let mut fact = 1.0;
    let mut cx = Vec::with_capacity(order + 1);
    let mut cy = Vec::with_capacity(order + 1);
    let mut cz = Vec::with_capacity(order + 1);
    for (k, d) in derivs.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        cx.push(d.x / fact);
        cy.push(d.y / fact);
        cz.push(d.z / fact);
    }
    Ok(JetVec3::new(
        Jet::from_coeffs(cx),
        Jet::from_coeffs(cy),
        Jet::from_coeffs(cz),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_of_central_second_difference() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn wide_is_exact_on_cubics() {
        let params: Vec<f64> = (0..12).map(|i| 0.3 * i as f64).collect();
        let f = |t: f64| Vec3::new(t.powi(3), 2.0 * t * t - t, 1.0);
        let points: Vec<Vec3> = params.iter().map(|&t| f(t)).collect();
        for &t in &[0.0, 0.45, 1.2, 3.3] {
            let j = sampled_jet(&params, &points, Stencil::Wide, t, 3).unwrap();
            assert!((j.x.coeff(1) - 3.0 * t * t).abs() < 1e-9, "{t}");
            assert!((j.x.coeff(3) - 1.0).abs() < 1e-9);
            assert!((j.y.coeff(2) - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn compact_is_exact_on_quadratics_at_nodes() {
        let params: Vec<f64> = (0..12).map(|i| 0.3 * i as f64).collect();
        let f = |t: f64| Vec3::new(t * t, 2.0 * t * t - t, 1.0);
        let points: Vec<Vec3> = params.iter().map(|&t| f(t)).collect();
        for &i in &[0usize, 1, 4, 10, 11] {
            let t = params[i];
            let j = sampled_jet(&params, &points, Stencil::Compact, t, 3).unwrap();
            assert!((j.x.coeff(1) - 2.0 * t).abs() < 1e-9, "{t}");
            assert!((j.y.coeff(2) - 2.0).abs() < 1e-9);
            assert!(j.x.coeff(3).abs() < 1e-8);
        }
        assert!(sampled_jet(&params, &points, Stencil::Compact, 0.0, 4).is_err());
    }
}
