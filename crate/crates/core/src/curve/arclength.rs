use crate::error::{Error, Result};

use super::quadrature::{integrate, DEFAULT_TOL};
use super::Curve;

/// Arc length of `curve` between `t0` and `t1` (negative when `t1 < t0`).
pub fn arc_length(curve: &Curve, t0: f64, t1: f64) -> Result<f64> {
    curve.check_domain(t0)?;
    curve.check_domain(t1)?;
    integrate(|t| curve.speed(t), t0, t1, DEFAULT_TOL)
}

/// Monotone table `t -> s` with cubic Hermite interpolation in both
/// directions. Slopes are the exact speeds, limited where they would break
/// monotonicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthTable {
    t: Vec<f64>,
    s: Vec<f64>,
    slope: Vec<f64>,
}

impl ArcLengthTable {
    /// Builds a table from strictly increasing `t`, `s` columns and `ds/dt`
    /// at each row.
    pub fn from_rows(t: Vec<f64>, s: Vec<f64>, speed: Vec<f64>) -> Result<Self> {
        if t.len() != s.len() || t.len() != speed.len() || t.len() < 2 {
            return Err(Error::GridMismatch("arc-length table columns".into()));
        }
        for i in 1..t.len() {
            if !(t[i] > t[i - 1]) || !(s[i] > s[i - 1]) {
                return Err(Error::InvalidCurve(format!(
                    "arc-length table not strictly increasing at row {i}"
                )));
            }
        }
        let mut slope = speed;
        for i in 0..t.len() - 1 {
            let d = (s[i + 1] - s[i]) / (t[i + 1] - t[i]);
            let a = slope[i] / d;
            let b = slope[i + 1] / d;
            let r = a * a + b * b;
            if r > 9.0 {
                let k = 3.0 / r.sqrt();
                slope[i] = slope[i].min(k * a * d);
                slope[i + 1] = slope[i + 1].min(k * b * d);
            }
        }
        Ok(Self { t, s, slope })
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.s.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_column(&self) -> &[f64] {
        &self.t
    }

    pub fn s_column(&self) -> &[f64] {
        &self.s
    }

    pub fn total(&self) -> f64 {
        self.s[self.s.len() - 1]
    }

    fn segment(col: &[f64], x: f64) -> usize {
        col.partition_point(|&v| v <= x).clamp(1, col.len() - 1) - 1
    }

    fn hermite(&self, i: usize, u: f64) -> f64 {
        let h = self.t[i + 1] - self.t[i];
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.s[i] + h10 * h * self.slope[i] + h01 * self.s[i + 1] + h11 * h * self.slope[i + 1]
    }

    /// `s(t)`; extrapolates linearly outside the table.
    pub fn forward(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.s[0] + (t - self.t[0]) * self.slope[0];
        }
        if t >= self.t[n - 1] {
            return self.s[n - 1] + (t - self.t[n - 1]) * self.slope[n - 1];
        }
        let i = Self::segment(&self.t, t);
        self.hermite(i, (t - self.t[i]) / (self.t[i + 1] - self.t[i]))
    }

    /// `t(s)`, inverting the same cubic segments by safeguarded Newton.
    pub fn inverse(&self, s: f64) -> f64 {
        let n = self.s.len();
        if s <= self.s[0] {
            return self.t[0] + (s - self.s[0]) / self.slope[0];
        }
        if s >= self.s[n - 1] {
            return self.t[n - 1] + (s - self.s[n - 1]) / self.slope[n - 1];
        }
        let i = Self::segment(&self.s, s);
        let h = self.t[i + 1] - self.t[i];
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut u = (s - self.s[i]) / (self.s[i + 1] - self.s[i]);
        for _ in 0..100 {
            let r = self.hermite(i, u) - s;
            if r == 0.0 {
                break;
            }
            if r > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let (u2, h) = (u * u, h);
            let d = (6.0 * u2 - 6.0 * u) * self.s[i]
                + (3.0 * u2 - 4.0 * u + 1.0) * h * self.slope[i]
                + (-6.0 * u2 + 6.0 * u) * self.s[i + 1]
                + (3.0 * u2 - 2.0 * u) * h * self.slope[i + 1];
            let mut next = u - r / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() < 1e-16 {
                u = next;
                break;
            }
            u = next;
        }
        self.t[i] + u * h
    }
}

/// Table with `n + 1` uniformly spaced rows over the curve's domain.
pub fn build_arclength_table(curve: &Curve, n: usize) -> Result<ArcLengthTable> {
    if n < 16 {
        return Err(Error::TooFewSamples { needed: 16, got: n });
    }
    let (lo, hi) = curve.domain();
    let t: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
        .collect();
    let mut s = vec![0.0; n + 1];
    for i in 0..n {
        s[i + 1] = s[i] + integrate(|x| curve.speed(x), t[i], t[i + 1], DEFAULT_TOL / n as f64)?;
    }
    let speed = t.iter().map(|&x| curve.speed(x)).collect::<Result<Vec<_>>>()?;
    ArcLengthTable::from_rows(t, s, speed)
}
