use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bertrand::{generate_bertrand_curve, offset_curve, sphere_preset, FrameAxis, GeneratorParams};
use crate::curve::{Curve, CurveKind, Stencil};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::vec3::Vec3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Analytic,
    Sampled,
    Generated,
    Offset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticSpec {
    pub x: String,
    pub y: String,
    pub z: String,
    pub domain: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledSpec {
    pub t: Vec<f64>,
    pub points: Vec<[f64; 3]>,
    #[serde(default)]
    pub stencil: StencilName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StencilName {
    #[default]
    Wide,
    Compact,
}

/// Bertrand curve built from a sphere curve. `nominal_lambda` is written
/// for reference and recomputed on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedSpec {
    pub sphere: Box<CurveFile>,
    pub a: f64,
    pub omega: f64,
    pub samples: usize,
    pub nominal_lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetSpec {
    pub base: Box<CurveFile>,
    pub lambda: f64,
    /// `tangent`, `normal` or `binormal`.
    pub axis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<[String; 3]>,
}

/// On-disk curve description. Exactly one of the payload fields is set,
/// the one named by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub schema_version: u32,
    pub label: String,
    #[serde(rename = "type")]
    pub kind: FileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled: Option<SampledSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<GeneratedSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<OffsetSpec>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCurve(msg.into())
}

fn axis_from_name(name: &str) -> Result<FrameAxis> {
    FrameAxis::ALL
        .into_iter()
        .find(|a| a.name() == name)
        .ok_or_else(|| invalid(format!("unknown axis '{name}'")))
}

fn parse_expr(s: &str) -> Result<Expr> {
    Ok(s.parse::<Expr>()?)
}

impl CurveFile {
    fn empty(label: &str, kind: FileKind) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            label: label.to_string(),
            kind,
            analytic: None,
            sampled: None,
            generated: None,
            offset: None,
        }
    }

    pub fn from_curve(curve: &Curve) -> Self {
        match curve.kind() {
            CurveKind::Analytic { x, y, z, domain } => Self {
                analytic: Some(AnalyticSpec {
                    x: x.to_string(),
                    y: y.to_string(),
                    z: z.to_string(),
                    domain: [domain.0, domain.1],
                }),
                ..Self::empty(curve.label(), FileKind::Analytic)
            },
            CurveKind::Sampled(s) => Self {
                sampled: Some(SampledSpec {
                    t: s.params().to_vec(),
                    points: s.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
                    stencil: match s.stencil() {
                        Stencil::Wide => StencilName::Wide,
                        Stencil::Compact => StencilName::Compact,
                    },
                }),
                ..Self::empty(curve.label(), FileKind::Sampled)
            },
            CurveKind::Generated(g) => Self {
                generated: Some(GeneratedSpec {
                    sphere: Box::new(Self::from_curve(g.sphere())),
                    a: g.a(),
                    omega: g.omega(),
                    samples: g.samples(),
                    nominal_lambda: g.nominal_lambda(),
                }),
                ..Self::empty(curve.label(), FileKind::Generated)
            },
            CurveKind::Offset(o) => Self {
                offset: Some(OffsetSpec {
                    base: Box::new(Self::from_curve(o.base())),
                    lambda: o.lambda(),
                    axis: o.axis().name().to_string(),
                    perturbation: o.perturbation().map(|p| p.clone().map(|e| e.to_string())),
                }),
                ..Self::empty(curve.label(), FileKind::Offset)
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!("unsupported schema_version {}", self.schema_version)));
        }
        let present = [
            (FileKind::Analytic, self.analytic.is_some()),
            (FileKind::Sampled, self.sampled.is_some()),
            (FileKind::Generated, self.generated.is_some()),
            (FileKind::Offset, self.offset.is_some()),
        ];
        for (kind, set) in present {
            if set != (kind == self.kind) {
                return Err(invalid(format!(
                    "type {:?} requires exactly the matching payload",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    pub fn to_curve(&self) -> Result<Curve> {
        self.validate()?;
        let curve = match self.kind {
            FileKind::Analytic => {
                let a = self.analytic.as_ref().unwrap();
                if !a.domain.iter().all(|v| v.is_finite()) {
                    return Err(invalid("domain must be finite"));
                }
                Curve::analytic(
                    self.label.clone(),
                    parse_expr(&a.x)?,
                    parse_expr(&a.y)?,
                    parse_expr(&a.z)?,
                    (a.domain[0], a.domain[1]),
                )?
            }
            FileKind::Sampled => {
                let s = self.sampled.as_ref().unwrap();
                if s.t.len() != s.points.len() {
                    return Err(Error::GridMismatch(format!("{} parameters for {} points", s.t.len(), s.points.len())));
                }
                let stencil = match s.stencil {
                    StencilName::Wide => Stencil::Wide,
                    StencilName::Compact => Stencil::Compact,
                };
                let points = s.points.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect();
                Curve::sampled(self.label.clone(), s.t.clone(), points, stencil)?
            }
            FileKind::Generated => {
                let g = self.generated.as_ref().unwrap();
                let sphere = g.sphere.to_curve()?;
                let params = GeneratorParams {
                    a: g.a,
                    omega: g.omega,
                    samples: g.samples,
                };
                generate_bertrand_curve(&sphere, params)?.with_label(self.label.clone())
            }
            FileKind::Offset => {
                let o = self.offset.as_ref().unwrap();
                let base = o.base.to_curve()?;
                let perturbation = match &o.perturbation {
                    Some([x, y, z]) => Some([parse_expr(x)?, parse_expr(y)?, parse_expr(z)?]),
                    None => None,
                };
                offset_curve(&base, o.lambda, axis_from_name(&o.axis)?, perturbation).with_label(self.label.clone())
            }
        };
        Ok(curve)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| invalid(format!("curve file: {e}")))?;
        file.validate()?;
        Ok(file)
    }
}

pub fn read_curve_file(path: &Path) -> Result<(CurveFile, Vec<u8>)> {
    let bytes = fs::read(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok((CurveFile::from_json(text)?, bytes))
}

pub fn write_curve_file(path: &Path, file: &CurveFile) -> Result<()> {
    fs::write(path, file.to_json()).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// A sphere curve from a preset name or a curve file path.
pub fn sphere_source(spec: &str) -> Result<(Curve, Option<Vec<u8>>)> {
    if let Some(c) = sphere_preset(spec) {
        return Ok((c, None));
    }
    let (file, bytes) = read_curve_file(Path::new(spec))?;
    Ok((file.to_curve()?, Some(bytes)))
}
