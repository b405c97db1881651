use std::f64::consts::PI;

use super::*;

fn helix() -> Curve {
    Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 2.0 * PI)).unwrap()
}

fn twisted_cubic() -> Curve {
    Curve::parse("cubic", "t", "t^2", "t^3", (-1.0, 1.0)).unwrap()
}

fn circle(r: f64) -> Curve {
    Curve::parse(
        "circle",
        &format!("{r}*cos(t)"),
        &format!("{r}*sin(t)"),
        "0",
        (0.0, 2.0 * PI),
    )
    .unwrap()
}

#[test]
fn helix_jets() {
    let j = helix().jet(0.0, 2).unwrap();
    assert_eq!(j.x.coeffs(), &[3.0, 0.0, -1.5]);
    assert_eq!(j.y.coeffs(), &[0.0, 3.0, 0.0]);
    assert_eq!(j.z.coeffs(), &[0.0, 4.0, 0.0]);
}

#[test]
fn line_has_no_curvature_terms() {
    let line = Curve::parse("line", "t", "2*t", "3*t", (-5.0, 5.0)).unwrap();
    for t in [-2.0, 0.3, 4.0] {
        let j = line.jet(t, 3).unwrap();
        for k in 2..=3 {
            assert_eq!(j.coeff(k), Vec3::zeros());
        }
    }
    assert!(matches!(frenet_apparatus(&line, 0.0), Err(Error::SingularPoint { .. })));
}

#[test]
fn out_of_domain() {
    assert!(matches!(helix().jet(7.0, 1), Err(Error::OutOfDomain { .. })));
}

#[test]
fn sampled_circle_matches_analytic() {
    let c = circle(1.0);
    let s = Curve::sample(&c, 721, Stencil::Wide).unwrap();
    let a = c.jet(1.0, 2).unwrap();
    let b = s.jet(1.0, 2).unwrap();
    for k in 0..=2 {
        assert!((a.coeff(k) - b.coeff(k)).norm() < 1e-5, "order {k}");
    }
}

#[test]
fn sampled_needs_seven_points() {
    let params: Vec<f64> = (0..6).map(f64::from).collect();
    let points = vec![Vec3::zeros(); 6];
    assert!(matches!(
        Curve::sampled("x", params, points, Stencil::Wide),
        Err(Error::TooFewSamples { needed: 7, got: 6 })
    ));
}

#[test]
fn helix_apparatus() {
    let fd = frenet_apparatus(&helix(), 1.0).unwrap();
    assert!((fd.speed - 5.0).abs() < 1e-14);
    assert!((fd.kappa - 3.0 / 25.0).abs() < 1e-15);
    assert!((fd.tau - 4.0 / 25.0).abs() < 1e-15);
    assert!(fd.dkappa_ds.abs() < 1e-15);
    assert!(fd.dtau_ds.abs() < 1e-15);
    assert!(fd.d2kappa_ds2.abs() < 1e-15);
    assert!(slant_geodesic_indicator(&fd).unwrap().abs() < 1e-15);
}

#[test]
fn twisted_cubic_at_origin() {
    let fd = frenet_apparatus(&twisted_cubic(), 0.0).unwrap();
    assert!((fd.kappa - 2.0).abs() < 1e-15);
    assert!((fd.tau - 3.0).abs() < 1e-15);
    assert!((fd.tangent - Vec3::x()).norm() < 1e-15);
    assert!((fd.normal - Vec3::y()).norm() < 1e-15);
    assert!((fd.binormal - Vec3::z()).norm() < 1e-15);
}

#[test]
fn planar_curve_has_zero_indicator() {
    let ellipse = Curve::parse("ellipse", "2*cos(t)", "sin(t)", "0", (0.0, 6.0)).unwrap();
    for t in [0.3, 1.0, 2.5] {
        let fd = frenet_apparatus(&ellipse, t).unwrap();
        assert!(fd.dkappa_ds.abs() > 1e-3);
        assert_eq!(fd.tau, 0.0);
        assert!(slant_geodesic_indicator(&fd).unwrap().abs() < 1e-15);
    }
}

#[test]
fn frames_are_orthonormal_and_right_handed() {
    let c = Curve::parse("c", "t + 0.2*sin(3*t)", "cos(t)^2", "exp(0.3*t)", (0.0, 3.0)).unwrap();
    for t in c.grid(50) {
        let fd = frenet_apparatus(&c, t).unwrap();
        let (tt, n, b) = (fd.tangent, fd.normal, fd.binormal);
        for (u, v) in [(tt, n), (tt, b), (n, b)] {
            assert!(u.dot(&v).abs() < 1e-12);
        }
        for u in [tt, n, b] {
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
        assert!((tt.cross(&n) - b).norm() < 1e-12);
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let c = Curve::parse("c", "t + 0.2*sin(3*t)", "cos(t)^2", "exp(0.3*t)", (0.0, 3.0)).unwrap();
    let fd = |t: f64| frenet_apparatus(&c, t).unwrap();
    let t = 1.3;
    let s = fd(t).speed;
    // Richardson-extrapolated central differences.
    let diff = |q: &dyn Fn(&FrenetData) -> f64| {
        let d = |h: f64| (q(&fd(t + h)) - q(&fd(t - h))) / (2.0 * h);
        (4.0 * d(5e-4) - d(1e-3)) / 3.0 / s
    };
    let z = fd(t);
    assert!((diff(&|f| f.kappa) - z.dkappa_ds).abs() < 1e-6);
    assert!((diff(&|f| f.tau) - z.dtau_ds).abs() < 1e-6);
    assert!((diff(&|f| f.dkappa_ds) - z.d2kappa_ds2).abs() < 1e-6);
}

#[test]
fn frenet_equations_residual_is_second_order() {
    let c = Curve::parse("c", "cos(t)", "sin(2*t)", "0.5*t^2", (0.0, 2.0)).unwrap();
    let table = build_arclength_table(&c, 256).unwrap();
    let residual = |h: f64| {
        let s0 = table.forward(1.0);
        let at = |s: f64| frenet_apparatus(&c, table.inverse(s)).unwrap();
        let (m, p, z) = (at(s0 - h), at(s0 + h), at(s0));
        let dt = (p.tangent - m.tangent) / (2.0 * h) - z.kappa * z.normal;
        let dn = (p.normal - m.normal) / (2.0 * h) + z.kappa * z.tangent - z.tau * z.binormal;
        let db = (p.binormal - m.binormal) / (2.0 * h) + z.tau * z.normal;
        dt.norm().max(dn.norm()).max(db.norm())
    };
    let (r1, r2) = (residual(1e-2), residual(5e-3));
    assert!(r1 / r2 > 3.5, "{r1} {r2}");
}

#[test]
fn arc_lengths() {
    let l = arc_length(&circle(1.0), 0.0, 2.0 * PI).unwrap();
    assert!((l - 2.0 * PI).abs() < 1e-9);
    let l = arc_length(&helix(), 0.0, 1.0).unwrap();
    assert!((l - 5.0).abs() < 1e-12);
}

#[test]
fn arc_length_of_twisted_cubic_matches_trapezoid() {
    let c = twisted_cubic();
    let n = 1_000_000;
    let h = 1.0 / n as f64;
    let speed = |t: f64| (1.0 + 4.0 * t * t + 9.0 * t.powi(4)).sqrt();
    let mut trap = 0.5 * (speed(0.0) + speed(1.0));
    for i in 1..n {
        trap += speed(i as f64 * h);
    }
    trap *= h;
    let l = arc_length(&c, 0.0, 1.0).unwrap();
    assert!((l - trap).abs() < 1e-8);
    let (a, b) = (arc_length(&c, 0.0, 0.37).unwrap(), arc_length(&c, 0.37, 1.0).unwrap());
    assert!((a + b - l).abs() < 1e-9);
}

#[test]
fn tables() {
    let t = build_arclength_table(&helix(), 16).unwrap();
    assert_eq!(t.len(), 17);
    for (ti, si) in t.rows() {
        assert!((si - 5.0 * ti).abs() < 1e-9);
    }
    let t = build_arclength_table(&circle(2.0), 32).unwrap();
    assert!((t.total() - 4.0 * PI).abs() < 1e-9);
    assert!(build_arclength_table(&helix(), 15).is_err());
}

#[test]
fn table_round_trip() {
    let c = Curve::parse("c", "t + 0.3*sin(2*t)", "cos(t)", "0.2*t^2", (0.0, 4.0)).unwrap();
    let table = build_arclength_table(&c, 64).unwrap();
    for i in 0..100 {
        let t = 4.0 * (i as f64 + 0.5) / 100.0;
        assert!((table.inverse(table.forward(t)) - t).abs() < 1e-7);
    }
}
