//! Curve files, run reports and CSV tables.

mod curve_file;
mod report;

pub use curve_file::{
    read_curve_file, sphere_source, write_curve_file, AnalyticSpec, CurveFile, FileKind, GeneratedSpec, OffsetSpec,
    SampledSpec, StencilName, SCHEMA_VERSION,
};
pub use report::{
    csv_table, fmt_real, masked_from_list, masked_intervals, real, reals, sha256_hex, InputHash, RunReport,
};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::bertrand::{construct_mate, generate_bertrand_curve, offset_curve, sphere_preset, FrameAxis, GeneratorParams};
    use crate::curve::{Curve, Stencil};
    use crate::error::Error;

    fn round_trip(c: &Curve) {
        let a = CurveFile::from_curve(c).to_json();
        let back = CurveFile::from_json(&a).unwrap().to_curve().unwrap();
        let b = CurveFile::from_curve(&back).to_json();
        assert_eq!(a, b);
        let t = 0.5 * (c.domain().0 + c.domain().1);
        assert_eq!(c.position(t).unwrap(), back.position(t).unwrap());
    }

    #[test]
    fn round_trips_are_byte_identical() {
        let helix = Curve::parse("helix", "3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0)).unwrap();
        round_trip(&helix);
        round_trip(&Curve::sample(&helix, 17, Stencil::Compact).unwrap());
        let g = generate_bertrand_curve(&sphere_preset("ellipse").unwrap(), GeneratorParams::new(1.0, PI / 3.0)).unwrap();
        round_trip(&g);
        round_trip(&construct_mate(&g, 1.0));
        let bump = ["1e-3*sin(3*t)", "0", "0"].map(|s| s.parse().unwrap());
        round_trip(&offset_curve(&helix, 0.5, FrameAxis::Binormal, Some(bump)));
    }

    #[test]
    fn rejects_malformed_files() {
        let bad = [
            r#"{"schema_version":1,"label":"x","type":"analytic"}"#,
            r#"{"schema_version":2,"label":"x","type":"analytic","analytic":{"x":"t","y":"0","z":"0","domain":[0,1]}}"#,
            r#"{"schema_version":1,"label":"x","type":"sampled","analytic":{"x":"t","y":"0","z":"0","domain":[0,1]}}"#,
            r#"{"schema_version":1,"label":"x","type":"analytic","analytic":{"x":"t","y":"0","z":"0","domain":[0,1]},"extra":1}"#,
            r#"not json"#,
        ];
        for b in bad {
            assert!(matches!(CurveFile::from_json(b), Err(Error::InvalidCurve(_))), "{b}");
        }
        let unequal = r#"{"schema_version":1,"label":"x","type":"sampled","sampled":{"t":[0,1],"points":[[0,0,0]]}}"#;
        assert!(matches!(
            CurveFile::from_json(unequal).unwrap().to_curve(),
            Err(Error::GridMismatch(_))
        ));
        let expr = r#"{"schema_version":1,"label":"x","type":"analytic","analytic":{"x":"t+","y":"0","z":"0","domain":[0,1]}}"#;
        assert!(matches!(CurveFile::from_json(expr).unwrap().to_curve(), Err(Error::Expr(_))));
    }
}
