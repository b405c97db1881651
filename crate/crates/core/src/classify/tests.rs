use std::f64::consts::PI;

use super::*;
use crate::bertrand::{
    construct_mate, detect_bertrand, detect_bertrand_with, generate_bertrand_curve, offset_curve, ratio_invariants,
    sphere_preset, BertrandPairModel, DetectTolerances, FrameAxis, GeneratorParams,
};
use crate::curve::{CurveKind, Stencil};
use crate::indicatrix::{indicatrix_curve, sample_indicatrix, IndicatrixKind, Side};
use crate::vec3::Vec3;

fn generated(name: &str) -> Curve {
    let sphere = sphere_preset(name).unwrap();
    generate_bertrand_curve(&sphere, GeneratorParams::new(1.0, PI / 3.0)).unwrap()
}

fn nominal(c: &Curve) -> f64 {
    match c.kind() {
        CurveKind::Generated(g) => g.nominal_lambda(),
        _ => unreachable!(),
    }
}

fn pair(name: &str) -> BertrandPairModel {
    let base = generated(name);
    let mate = construct_mate(&base, nominal(&base));
    detect_bertrand(&base, &mate, 33).unwrap()
}

fn fd(kappa: f64, k1: f64, k2: f64, tau: f64) -> FrenetData {
    let e = Vec3::zeros();
    FrenetData {
        t: 0.0,
        position: e,
        speed: 1.0,
        tangent: Vec3::x(),
        normal: Vec3::y(),
        binormal: Vec3::z(),
        kappa,
        tau,
        dkappa_ds: k1,
        dtau_ds: 0.0,
        d2kappa_ds2: k2,
    }
}

fn ri(f: f64, g: f64) -> RatioInvariants {
    RatioInvariants {
        t: 0.0,
        f,
        g,
        g_defined: true,
        gamma: 0.0,
    }
}

#[test]
fn helix_is_general_and_slant() {
    let h = Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0)).unwrap();
    let c = classify_curve(&h, 64, &ClassifyTolerances::default()).unwrap();
    assert!(c.general_helix && c.slant_helix);
    assert!(!c.planar && !c.spherical);
    assert_eq!(c.masked, 0);
}

#[test]
fn plane_circle_is_planar_and_spherical() {
    let c = Curve::parse("circle", "2*cos(t)", "2*sin(t)", "0", (0.0, 5.0)).unwrap();
    let k = classify_curve(&c, 64, &ClassifyTolerances::default()).unwrap();
    assert!(k.planar && k.spherical && k.degenerate_sphere_fit);
    assert!((k.metrics.sphere_radius - 2.0).abs() < 1e-9);
}

#[test]
fn sphere_curve_fit() {
    let c = sphere_preset("wobble").unwrap();
    let k = classify_curve(&c, 64, &ClassifyTolerances::default()).unwrap();
    assert!(k.spherical && !k.degenerate_sphere_fit && !k.planar);
    assert!((k.metrics.sphere_radius - 1.0).abs() < 1e-9);
}

#[test]
fn generated_curve_is_none_of_the_four() {
    let k = classify_curve(&generated("wobble"), 64, &ClassifyTolerances::default()).unwrap();
    assert!(!k.planar && !k.general_helix && !k.slant_helix && !k.spherical, "{k:?}");
    assert!(k.metrics.f_deviation > 1e-2 && k.metrics.gamma_deviation > 1e-2);
    assert!(k.metrics.sphere_fit_residual > 1e-7);
    assert!(classify_curve(&generated("wobble"), 63, &ClassifyTolerances::default()).is_err());
}

#[test]
fn ratio_constancy_exact() {
    let c = ratio_constancy(&[(1.0, 2.0), (0.5, 1.0), (3.0, 6.0)], 1e-6).unwrap();
    assert_eq!(c.deviation, 0.0);
    assert!(c.is_spherical_helix);
    assert_eq!(c.mean, 2.0);
    assert!(matches!(ratio_constancy(&[(0.0, 1.0)], 1e-6), Err(Error::DegenerateRatio(_))));
}

#[test]
fn condition_residual_specializations() {
    let (k, k1, k2) = (2.0, 0.5, 0.3);
    let r = helix_condition_residual(&fd(k, k1, k2, 0.0), &ri(0.0, 1.7)).unwrap();
    let expected = k2 * k - 3.0 * k1 * k1;
    assert!((r - expected / ((k2 * k).abs() + 3.0 * k1 * k1)).abs() < 1e-15);
    // g = f.
    let f = 0.4;
    let p = planar_condition_residual(&fd(k, k1, k2, f * k), &ri(f, f)).unwrap();
    let value = (k * k2 - 3.0 * k1 * k1) * (1.0 + f * f);
    let scale = (k * k2 * (1.0 + f * f)).abs() + (3.0 * k1 * k1 * (1.0 + f * f)).abs();
    assert!((p - value / scale).abs() < 1e-15);
    for (f, g) in [(0.3, -1.2), (-2.0, 0.7)] {
        let a = helix_condition_residual(&fd(k, k1, k2, f * k), &ri(f, g)).unwrap();
        let b = planar_condition_residual(&fd(k, k1, k2, f * k), &ri(f, g)).unwrap();
        assert!((a - b).abs() < 1e-15);
    }
    assert!(helix_condition_residual(&fd(k, 0.0, 0.0, 0.0), &ri(0.0, 1.0)).is_err());
}

#[test]
fn spherical_helix_on_slant_and_generic_pairs() {
    let tol = ClassifyTolerances::default().helix;
    let slant = pair("slant");
    let generic = pair("wobble");
    for axis in [FrameAxis::Tangent, FrameAxis::Binormal] {
        for side in [Side::Base, Side::Mate] {
            let kind = IndicatrixKind::new(side, axis);
            let a = spherical_helix_check(&sample_indicatrix(&slant, kind, 64).unwrap(), tol).unwrap();
            assert!(a.is_spherical_helix, "{kind} {}", a.deviation);
            let b = spherical_helix_check(&sample_indicatrix(&generic, kind, 64).unwrap(), tol).unwrap();
            assert!(!b.is_spherical_helix && b.deviation > 1e-2, "{kind}");
        }
    }
    let n = sample_indicatrix(&slant, IndicatrixKind::new(Side::Base, FrameAxis::Normal), 64).unwrap();
    assert!(indicatrix_planarity(&n) < 1e-9);
}

#[test]
fn condition_residual_tracks_the_slant_pair() {
    for (name, small) in [("slant", true), ("wobble", false), ("spiral", false)] {
        let p = pair(name);
        let worst = p
            .grid()
            .iter()
            .map(|&t| {
                let pt = p.point(t).unwrap();
                helix_condition_residual(&pt.mate, &pt.mate_ratios).unwrap().abs()
            })
            .fold(0.0, f64::max);
        assert_eq!(worst < 1e-3, small, "{name}: {worst}");
        if !small {
            assert!(worst > 1e-2, "{name}: {worst}");
        }
    }
}

#[test]
fn pair_classify_bertrand_and_none() {
    let p = pair("wobble");
    let c = pair_classify(p.base(), p.mate(), 64).unwrap();
    assert_eq!(c.verdict, PairVerdict::Bertrand);
    assert_eq!(c.evidence.len(), 3);
    assert!(!c.evidence_for(PairVerdict::Mannheim).unwrap().pass());
    let t = indicatrix_curve(p.base(), FrameAxis::Tangent, 64).unwrap();
    let b = indicatrix_curve(p.base(), FrameAxis::Binormal, 64).unwrap();
    let c = pair_classify_aligned(&t, &b, 64).unwrap();
    assert_eq!(c.verdict, PairVerdict::None);
    assert!(c.evidence.iter().all(|e| !e.pass()));
}

#[test]
fn pair_classify_rejects_mismatched_domains() {
    let a = Curve::parse("a", "t", "t^2", "t^3", (0.0, 1.0)).unwrap();
    let b = Curve::parse("b", "t", "t^2", "t^3", (0.0, 2.0)).unwrap();
    assert!(matches!(pair_classify(&a, &b, 16), Err(Error::GridMismatch(_))));
}

#[test]
fn circle_and_its_involute() {
    let circle = Curve::parse("circle", "cos(t)", "sin(t)", "0", (0.5, 3.0)).unwrap();
    let inv = Curve::parse("involute", "cos(t) + t*sin(t)", "sin(t) - t*cos(t)", "0", (0.5, 3.0)).unwrap();
    let c = pair_classify(&circle, &inv, 64).unwrap();
    assert_eq!(c.verdict, PairVerdict::InvoluteEvolute);
    assert!(!c.evidence_for(PairVerdict::Bertrand).unwrap().pass());
}

/// Curve with `κ = 1`, `τ = tan s` by RK4 on the Frenet equations; it
/// satisfies `τ' = κ(1 + τ²)`, so its offset by its binormal has principal
/// normal along that binormal.
fn mannheim_fixture() -> (Curve, Curve) {
    type State = [Vec3; 4];
    let rhs = |s: f64, y: &State| -> State {
        let (k, t) = (1.0, s.tan());
        [y[1], k * y[2], -k * y[1] + t * y[3], -t * y[2]]
    };
    let add = |y: &State, d: &State, h: f64| -> State { [0, 1, 2, 3].map(|i| y[i] + d[i] * h) };
    let (steps, keep, h) = (20_000, 10, 1.0 / 20_000.0);
    let mut y: State = [Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
    let (mut s, mut params, mut a, mut b) = (0.0, vec![0.0], vec![y[0]], vec![y[0] + y[3]]);
    for i in 1..=steps {
        let k1 = rhs(s, &y);
        let k2 = rhs(s + h / 2.0, &add(&y, &k1, h / 2.0));
        let k3 = rhs(s + h / 2.0, &add(&y, &k2, h / 2.0));
        let k4 = rhs(s + h, &add(&y, &k3, h));
        y = [0, 1, 2, 3].map(|j| y[j] + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0));
        s = i as f64 * h;
        if i % keep == 0 {
            params.push(s);
            a.push(y[0]);
            b.push(y[0] + y[3]);
        }
    }
    (
        Curve::sampled("mannheim partner", params.clone(), a, Stencil::Wide).unwrap(),
        Curve::sampled("mannheim curve", params, b, Stencil::Wide).unwrap(),
    )
}

#[test]
fn mannheim_pair() {
    let (a, b) = mannheim_fixture();
    let c = pair_classify(&a, &b, 64).unwrap();
    assert_eq!(c.verdict, PairVerdict::Mannheim, "{:?}", c.evidence);
    assert!(!c.evidence_for(PairVerdict::Bertrand).unwrap().pass());
    // The generic binormal offset of a Bertrand curve is not a Mannheim pair.
    let base = generated("spiral");
    let off = offset_curve(&base, 0.5, FrameAxis::Binormal, None);
    assert_eq!(pair_classify(&base, &off, 64).unwrap().verdict, PairVerdict::None);
}

#[test]
fn aligned_resampling_preserves_the_curve() {
    let c = Curve::parse("parabola", "t", "t^2", "0", (0.0, 2.0)).unwrap();
    let a = arclength_aligned(&c, 129).unwrap();
    assert_eq!(a.domain(), (0.0, 1.0));
    let speeds: Vec<f64> = a.grid(129).iter().map(|&u| a.speed(u).unwrap()).collect();
    let total = crate::curve::arc_length(&c, 0.0, 2.0).unwrap();
    for s in speeds {
        assert!((s - total).abs() < 1e-6 * total);
    }
}

#[test]
fn suite_on_generic_pair() {
    let p = pair("wobble");
    let r = theorem_suite(&p, 256, &SuiteTolerances::default()).unwrap();
    assert_eq!(r.entries.len(), THEOREM_IDS.len());
    for (e, id) in r.entries.iter().zip(THEOREM_IDS) {
        assert_eq!(e.id, id);
        match e.kind {
            EntryKind::Identity => assert!(e.pass, "{id}: {e:?}"),
            EntryKind::Equivalence => {
                assert!(e.pass && !e.ambiguous, "{id}: {e:?}");
                assert!(e.flags.iter().all(|f| !f.value), "{id}");
            }
            EntryKind::Informational => {}
        }
    }
    assert!(r.identities_pass());
    // The affine law holds in magnitude with the opposite sign.
    let a = r.entry("affine-law").unwrap();
    assert!(!a.pass);
    let get = |k: &str| a.evidence.iter().find(|e| e.0 == k).unwrap().1;
    assert!(get("base_magnitude_slope_gap") < 1e-5 && get("mate_magnitude_slope_gap") < 1e-5);
    assert!(theorem_suite(&p, 255, &SuiteTolerances::default()).is_err());
}

#[test]
fn suite_on_slant_pair() {
    let p = pair("slant");
    let r = theorem_suite(&p, 256, &SuiteTolerances::default()).unwrap();
    assert!(r.identities_pass(), "{:?}", r.failed_identities());
    for id in ["th6", "th8", "th11", "teo15", "th17", "cr18", "th25", "teo33"] {
        let e = r.entry(id).unwrap();
        assert!(e.pass && !e.ambiguous, "{id}: {e:?}");
        assert!(e.flags.iter().all(|f| f.value), "{id}: {e:?}");
    }
}

#[test]
fn suite_flags_perturbed_mate() {
    let base = generated("spiral");
    let bump = ["1e-3*sin(3*t)", "1e-3*cos(2*t)", "1e-3*sin(t)"].map(|s| s.parse().unwrap());
    let mate = offset_curve(&base, nominal(&base), FrameAxis::Normal, Some(bump));
    let loose = DetectTolerances {
        offset: 1e-2,
        align: 1e-2,
        constancy: 1e-2,
    };
    let p = detect_bertrand_with(&base, &mate, 64, &loose).unwrap();
    let r = theorem_suite(&p, 256, &SuiteTolerances::default()).unwrap();
    assert_eq!(r.failed_identities().first(), Some(&"th3"));
    // Base quantities alone are unaffected.
    assert!(r.entry("th22").unwrap().pass);
    let _ = ratio_invariants;
}

#[test]
fn tolerance_overrides() {
    let t = SuiteTolerances::default().with_override("th2", 1e-9).unwrap();
    assert_eq!(t.tolerance("th2"), 1e-9);
    assert_eq!(t.tolerance("th3"), 1e-6);
    assert!(SuiteTolerances::default().with_override("th99", 1.0).is_err());
}
