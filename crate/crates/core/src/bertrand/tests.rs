use std::f64::consts::PI;

use super::*;
use crate::curve::{frenet_apparatus, Curve, CurveKind};
use crate::error::{Error, RejectReason, SphereDefect};

fn generated(name: &str) -> Curve {
    let sphere = sphere_preset(name).unwrap();
    generate_bertrand_curve(&sphere, GeneratorParams { a: 1.0, omega: PI / 3.0, samples: 512 }).unwrap()
}

fn nominal(c: &Curve) -> f64 {
    match c.kind() {
        CurveKind::Generated(g) => g.nominal_lambda(),
        _ => panic!("not generated"),
    }
}

fn pair(name: &str) -> BertrandPairModel {
    let base = generated(name);
    let mate = construct_mate(&base, nominal(&base));
    detect_bertrand(&base, &mate, 64).unwrap()
}

#[test]
fn helix_ratios() {
    let helix = Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0)).unwrap();
    let ri = ratio_invariants(&frenet_apparatus(&helix, 1.0).unwrap()).unwrap();
    assert!((ri.f - 4.0 / 3.0).abs() < 1e-14);
    assert!(!ri.g_defined && ri.g.is_nan());
}

#[test]
fn planar_ratios() {
    let c = Curve::parse("ellipse", "2*cos(t)", "sin(t)", "0", (0.0, 6.0)).unwrap();
    let ri = ratio_invariants(&frenet_apparatus(&c, 0.7).unwrap()).unwrap();
    assert_eq!((ri.f, ri.g, ri.g_defined), (0.0, 0.0, true));
    let fd = frenet_apparatus(&c, 0.7).unwrap();
    assert!(matches!(bertrand_lambda(&ri, fd.kappa), Err(Error::DegenerateRatio(_))));
}

#[test]
fn generated_curve_has_constant_g_and_nominal_lambda() {
    let c = generated("wobble");
    let lambda = nominal(&c);
    for t in c.grid(40) {
        let fd = frenet_apparatus(&c, t).unwrap();
        let ri = ratio_invariants(&fd).unwrap();
        assert!((ri.g + 3f64.sqrt()).abs() < 1e-9, "g = {}", ri.g);
        assert!((bertrand_lambda(&ri, fd.kappa).unwrap() - lambda).abs() < 1e-9);
    }
    let fit = linear_relation_fit(&c, 64).unwrap();
    assert!(fit.residual < 1e-6);
}

#[test]
fn generator_positions_follow_velocity() {
    let c = generated("spiral");
    let (lo, hi) = c.domain();
    let t = lo + 0.3137 * (hi - lo);
    let h = 1e-4;
    let d = (c.position(t + h).unwrap() - c.position(t - h).unwrap()) / (2.0 * h);
    assert!((d - c.jet(t, 1).unwrap().coeff(1)).norm() < 1e-7);
}

#[test]
fn generator_rejections() {
    let params = GeneratorParams::new(1.0, PI / 3.0);
    for name in ["latitude", "great-circle"] {
        let r = generate_bertrand_curve(&sphere_preset(name).unwrap(), params);
        assert!(matches!(r, Err(Error::DegenerateSphereCurve(SphereDefect::Helical))), "{name}");
    }
    let off = Curve::parse("off", "cos(t)", "sin(t)", "0.1", (0.0, 1.0)).unwrap();
    assert!(matches!(generate_bertrand_curve(&off, params), Err(Error::NotSpherical(_))));
    let sphere = sphere_preset("wobble").unwrap();
    assert!(generate_bertrand_curve(&sphere, GeneratorParams::new(0.0, 1.0)).is_err());
    assert!(generate_bertrand_curve(&sphere, GeneratorParams::new(1.0, PI / 2.0)).is_err());
}

#[test]
fn zero_offset_copies_base() {
    let c = generated("wobble");
    let m = construct_mate(&c, 0.0);
    for t in c.grid(9) {
        assert_eq!(c.position(t).unwrap(), m.position(t).unwrap());
    }
}

#[test]
fn circle_offset_is_concentric() {
    let c = Curve::parse("circle", "2*cos(t)", "2*sin(t)", "0", (0.0, 6.0)).unwrap();
    let m = construct_mate(&c, 1.0);
    for t in c.grid(13) {
        assert!((m.position(t).unwrap().norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn generated_pair_is_detected() {
    let p = pair("wobble");
    assert_eq!(p.epsilon(), -1.0);
    assert_eq!(p.orientation(), 1.0);
    assert!((p.lambda() - 1.0).abs() < 1e-9);
    assert!(!p.degenerate());
    let d = p.diagnostics();
    for s in [d.p1, d.p2, d.q1, d.q2] {
        assert!(s.max_deviation < 1e-8);
    }
    assert!((d.p1.mean.powi(2) + d.p2.mean.powi(2) - 1.0).abs() < 1e-12);
}

#[test]
fn translated_helix_is_rejected() {
    let h = Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0)).unwrap();
    let up = Curve::parse("helix+z", "3*cos(t)", "3*sin(t)", "4*t + 1", (0.0, 6.0)).unwrap();
    match detect_bertrand(&h, &up, 32) {
        Err(Error::NotAPair { reason, .. }) => assert_eq!(reason, RejectReason::OffsetNotNormal),
        other => panic!("{other:?}"),
    }
}

#[test]
fn self_pair_is_degenerate() {
    let c = generated("ellipse");
    let p = detect_bertrand(&c, &c, 32).unwrap();
    assert_eq!((p.lambda(), p.epsilon()), (0.0, 1.0));
    assert!(p.degenerate());
}

#[test]
fn closed_form_mate_matches_direct() {
    let p = pair("ellipse");
    for &t in p.grid() {
        let pt = p.point(t).unwrap();
        let m = mate_apparatus_from_base(&pt.base, &pt.base_ratios, p.epsilon()).unwrap();
        assert!((m.kappa - pt.mate.kappa).abs() < 1e-4 * pt.mate.kappa);
        assert!((m.tau - pt.mate.tau).abs() < 1e-4 * pt.mate.tau.abs());
        assert!((m.tangent - pt.mate.tangent).norm() < 1e-4);
        assert!((m.normal - pt.mate.normal).norm() < 1e-4);
        // Same relations read from the mate give the base back.
        let b = mate_apparatus_from_base(&pt.mate, &pt.mate_ratios, p.epsilon()).unwrap();
        assert!((b.kappa - pt.base.kappa).abs() < 1e-4 * pt.base.kappa);
        assert!((b.binormal - pt.base.binormal).norm() < 1e-4);
    }
}

#[test]
fn slant_indicator_identities() {
    for name in ["wobble", "spiral", "slant"] {
        let p = pair(name);
        for &t in p.grid() {
            let pt = p.point(t).unwrap();
            let closed = geodesic_indicator_closed_form(&pt.mate_ratios, &pt.mate).unwrap();
            let g = pt.base_ratios.gamma;
            assert!((closed - g).abs() < 1e-5 * (1.0 + g.abs()), "{name}");
            assert!((g + pt.mate_ratios.gamma).abs() < 1e-5 * (1.0 + g.abs()), "{name}");
        }
    }
}

#[test]
fn constraint_and_g_relation() {
    let p = pair("spiral");
    let lambda_mate = |t: f64| {
        let pt = p.point(t).unwrap();
        bertrand_lambda_from_mate(&pt.mate_ratios, pt.mate.kappa, p.epsilon()).unwrap()
    };
    for &t in p.grid().iter().step_by(2) {
        assert!(pair_constraint_residual(&p, t).unwrap().normalized() < 1e-6);
        let pt = p.point(t).unwrap();
        assert!(eps_g_relation(&pt, p.epsilon()).unwrap().abs() < 1e-8);
        assert!((lambda_mate(t) - p.lambda()).abs() < 1e-6);
    }
}

#[test]
fn perturbed_mate_breaks_constraint() {
    let base = generated("spiral");
    let bump = ["1e-3*sin(3*t)", "1e-3*cos(2*t)", "1e-3*sin(t)"].map(|s| s.parse().unwrap());
    let mate = offset_curve(&base, nominal(&base), FrameAxis::Normal, Some(bump));
    assert!(detect_bertrand(&base, &mate, 64).is_err());
    let loose = DetectTolerances {
        offset: 1e-2,
        align: 1e-2,
        constancy: 1e-2,
    };
    let p = detect_bertrand_with(&base, &mate, 64, &loose).unwrap();
    let worst = p
        .grid()
        .iter()
        .map(|&t| pair_constraint_residual(&p, t).unwrap().normalized())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst}");
}
