//! Named curves on the unit sphere for the generator.
//!
//! The non-degenerate presets are restricted to arcs on which the geodesic
//! curvature is monotone and stays below `−cot(π/3)`, so that with the
//! default `ω = π/3` both the generated curve and its mate are regular.

use crate::curve::Curve;
use crate::error::Result;

pub const PRESET_NAMES: [&str; 6] = ["wobble", "ellipse", "spiral", "slant", "latitude", "great-circle"];

fn normalized(label: &str, x: &str, y: &str, z: &str, domain: (f64, f64)) -> Result<Curve> {
    let n = format!("sqrt(({x})^2 + ({y})^2 + ({z})^2)");
    Curve::parse(
        label,
        &format!("({x})/{n}"),
        &format!("({y})/{n}"),
        &format!("({z})/{n}"),
        domain,
    )
}

/// Looks up a preset by name.
pub fn sphere_preset(name: &str) -> Option<Curve> {
    let c = match name {
        "wobble" => normalized(name, "cos(t)", "sin(t)", "0.3*sin(2*t)", (0.5, 0.75)),
        "ellipse" => normalized(name, "cos(t)", "-0.7*sin(t)", "0.8", (0.15, 1.3)),
        "spiral" => normalized(name, "cos(t)", "sin(t)", "0.4*t", (-10.0, -3.0)),
        // Tangent indicatrix of a slant helix with unit curvature; the
        // generated curve is a slant helix as well.
        "slant" => Curve::parse(
            name,
            "-0.5*sin(0.5*t)*cos(t) + cos(0.5*t)*sin(t)",
            "-0.5*sin(0.5*t)*sin(t) - cos(0.5*t)*cos(t)",
            "sin(pi/3)*sin(0.5*t)",
            (-2.4, -1.1),
        ),
        "latitude" => Curve::parse(name, "0.6*cos(t)", "0.6*sin(t)", "0.8", (0.0, 6.0)),
        "great-circle" => Curve::parse(name, "cos(t)", "sin(t)", "0", (0.0, 6.0)),
        _ => return None,
    };
    Some(c.expect("preset expressions parse"))
}
