use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{CliError, FrenetArgs, GenerateArgs, IndicatrixArgs, MateArgs, Output, VerifyArgs, ClassifyArgs};
use crate::bertrand::{
    bertrand_lambda, construct_mate, detect_bertrand, detect_bertrand_with, generate_bertrand_curve, ratio_invariants,
    BertrandPairModel, ConstancyStats, DetectTolerances, FrameAxis, GeneratorParams,
};
use crate::classify::{
    classify_curve, pair_classify, pair_classify_aligned, theorem_suite, ClassifyTolerances, CurveClass, EntryKind,
    PairClass, SuiteTolerances, TheoremReport,
};
use crate::curve::{arc_length, frenet_apparatus, slant_geodesic_indicator, Curve, FrenetData, Stencil};
use crate::error::Error;
use crate::indicatrix::{compare_with_direct, indicatrix_arclength_relations, indicatrix_curve};
use crate::io::{
    csv_table, masked_from_list, masked_intervals, read_curve_file, real, reals, sha256_hex, sphere_source,
    write_curve_file, CurveFile, InputHash, RunReport,
};

type CliResult<T> = Result<T, CliError>;

fn load(path: &Path, report: &mut RunReport) -> CliResult<Curve> {
    let (file, bytes) = read_curve_file(path)?;
    report.inputs.push(InputHash::new(path.display().to_string(), &bytes));
    Ok(file.to_curve()?)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::new(2, format!("{}: {e}", path.display())))
}

fn write_curve(path: &Path, curve: &Curve) -> CliResult<String> {
    let file = CurveFile::from_curve(curve);
    write_curve_file(path, &file)?;
    Ok(sha256_hex(file.to_json().as_bytes()))
}

fn pairs(entries: &[(&str, f64)]) -> Value {
    let mut m = Map::new();
    for &(k, v) in entries {
        m.insert(k.to_string(), real(v));
    }
    Value::Object(m)
}

fn stats(s: &ConstancyStats) -> Value {
    let mut v = pairs(&[("mean", s.mean), ("max_deviation", s.max_deviation), ("relative", s.relative())]);
    v["masked"] = json!(s.masked);
    v
}

fn pair_summary(pair: &BertrandPairModel) -> Value {
    let d = pair.diagnostics();
    json!({
        "lambda": real(pair.lambda()),
        "lambda_stats": stats(&pair.lambda_stats()),
        "epsilon": real(pair.epsilon()),
        "orientation": real(pair.orientation()),
        "degenerate": pair.degenerate(),
        "min_alignment": real(pair.min_alignment()),
        "max_offset_defect": real(pair.max_offset_defect()),
        "p1": stats(&d.p1),
        "p2": stats(&d.p2),
        "q1": stats(&d.q1),
        "q2": stats(&d.q2),
    })
}

const FRENET_COLUMNS: [&str; 17] = [
    "t", "s", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau", "dkappa_ds", "dtau_ds",
    "d2kappa_ds2", "Gamma",
];

/// Number of leading [`FRENET_COLUMNS`] reported at a given `--order`.
/// Order 0 stops at torsion; order 1 adds first derivatives and the
/// geodesic indicator, which needs them; order 2 adds `d²κ/ds²`.
fn frenet_columns(order: u8) -> Vec<&'static str> {
    match order {
        0 => FRENET_COLUMNS[..13].to_vec(),
        1 => FRENET_COLUMNS[..15].iter().chain(&FRENET_COLUMNS[16..]).copied().collect(),
        _ => FRENET_COLUMNS.to_vec(),
    }
}

fn frenet_row(fd: &FrenetData, s: f64, order: u8) -> Result<Vec<f64>, Error> {
    let mut row = vec![
        fd.t,
        s,
        fd.tangent.x,
        fd.tangent.y,
        fd.tangent.z,
        fd.normal.x,
        fd.normal.y,
        fd.normal.z,
        fd.binormal.x,
        fd.binormal.y,
        fd.binormal.z,
        fd.kappa,
        fd.tau,
    ];
    if order >= 1 {
        row.extend([fd.dkappa_ds, fd.dtau_ds]);
        if order >= 2 {
            row.push(fd.d2kappa_ds2);
        }
        row.push(slant_geodesic_indicator(fd)?);
    }
    Ok(row)
}

fn table_value(columns: &[&str], rows: &[Vec<f64>]) -> Value {
    json!({
        "columns": columns,
        "rows": rows.iter().map(|r| reals(r)).collect::<Vec<_>>(),
    })
}

pub fn frenet(args: FrenetArgs) -> CliResult<Output> {
    let mut report = RunReport::new("frenet");
    let curve = load(&args.curve, &mut report)?;
    let lo = curve.domain().0;
    let grid = match (args.at, args.grid) {
        (Some(t), _) => {
            report.param("at", real(t));
            vec![t]
        }
        (None, Some(n)) => {
            if n < 2 {
                return Err(CliError::new(2, "--grid needs at least 2 points"));
            }
            report.param("grid", json!(n));
            curve.grid(n)
        }
        (None, None) => unreachable!("clap requires --at or --grid"),
    };
    report.param("order", json!(args.order));
    report.param("mask", json!(args.mask));

    // Cumulative arc length from the start of the domain.
    let pieces = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let from = if i == 0 { lo } else { grid[i - 1] };
            arc_length(&curve, from, grid[i])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let s: Vec<f64> = pieces
        .iter()
        .scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .collect();

    let order = args.order;
    let results = grid
        .par_iter()
        .zip(&s)
        .map(|(&t, &s)| frenet_apparatus(&curve, t).and_then(|fd| frenet_row(&fd, s, order)))
        .collect::<Vec<_>>();
    let mut rows = Vec::with_capacity(results.len());
    let mut masked = vec![false; grid.len()];
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(e @ Error::SingularPoint { .. }) => {
                if !args.mask {
                    return Err(CliError::new(4, format!("{e} (pass --mask to skip)")));
                }
                masked[i] = true;
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.masked_intervals = masked_intervals(&grid, &masked);

    let columns = frenet_columns(order);
    report.results = table_value(&columns, &rows);
    if let Some(path) = &args.csv {
        write_text(path, &csv_table(&columns, &rows))?;
    }
    Ok(Output::ok(report.to_json()))
}

/// Mean over the grid of the offset at which the curve has a Bertrand
/// mate, with its spread.
fn auto_lambda(curve: &Curve, n: usize) -> Result<ConstancyStats, Error> {
    let values = curve
        .grid(n)
        .into_par_iter()
        .map(|t| {
            let fd = frenet_apparatus(curve, t)?;
            let ri = ratio_invariants(&fd)?;
            bertrand_lambda(&ri, fd.kappa).map(Some)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ConstancyStats::from_values(&values))
}

pub fn mate(args: MateArgs) -> CliResult<Output> {
    let mut report = RunReport::new("mate");
    let curve = load(&args.curve, &mut report)?;
    report.param("n", json!(args.n));
    let mut results = Map::new();
    let lambda = match args.lambda {
        Some(l) => {
            report.param("lambda", real(l));
            l
        }
        None => {
            report.param("auto", json!(true));
            let st = auto_lambda(&curve, args.n)?;
            results.insert("lambda_stats".into(), stats(&st));
            st.mean
        }
    };
    results.insert("lambda".into(), real(lambda));

    let exact = construct_mate(&curve, lambda);
    let mate = match args.sampled {
        Some(m) => {
            report.param("sampled", json!(m));
            Curve::sample(&exact, m, Stencil::Wide)?
        }
        None => exact,
    };
    let mate = mate.with_label(format!("mate of {}", curve.label()));
    let hash = write_curve(&args.out, &mate)?;
    results.insert("output".into(), json!({ "path": args.out.display().to_string(), "sha256": hash }));

    let detection = match detect_bertrand(&curve, &mate, args.n) {
        Ok(pair) => {
            let mut v = pair_summary(&pair);
            v["accepted"] = json!(true);
            v
        }
        Err(Error::NotAPair { reason, detail }) => {
            json!({ "accepted": false, "reason": reason.to_string(), "detail": detail })
        }
        Err(e) => json!({ "accepted": false, "reason": "error", "detail": e.to_string() }),
    };
    results.insert("detection".into(), detection);
    report.results = Value::Object(results);
    Ok(Output::ok(report.to_json()))
}

const INDICATRIX_COLUMNS: [&str; 14] = [
    "t",
    "x",
    "y",
    "z",
    "unit_norm_defect",
    "kappa",
    "tau",
    "gamma",
    "printed_kappa",
    "printed_tau",
    "direct_kappa",
    "direct_tau",
    "kappa_gap",
    "tau_gap",
];

pub fn indicatrix(args: IndicatrixArgs) -> CliResult<Output> {
    let mut report = RunReport::new("indicatrix");
    let base = load(&args.base, &mut report)?;
    let mate = load(&args.mate, &mut report)?;
    report.param("kind", json!(args.kind.code()));
    report.param("n", json!(args.n));
    let pair = detect_bertrand(&base, &mate, args.n)?;
    let cmp = compare_with_direct(&pair, args.kind, args.n)?;

    let kappa_scale = cmp.rows.iter().map(|r| r.kappa.abs()).fold(0.0, f64::max);
    let tau_scale = cmp.rows.iter().map(|r| r.tau.abs()).fold(0.0, f64::max);
    let rows: Vec<Vec<f64>> = cmp
        .rows
        .iter()
        .map(|r| {
            vec![
                r.t,
                r.point.x,
                r.point.y,
                r.point.z,
                (r.point.norm() - 1.0).abs(),
                r.kappa,
                r.tau,
                r.gamma.unwrap_or(f64::NAN),
                r.printed_kappa,
                r.printed_tau,
                r.direct_kappa,
                r.direct_tau,
                (r.direct_kappa - r.kappa.abs()).abs() / kappa_scale,
                (r.direct_tau - r.tau).abs() / tau_scale,
            ]
        })
        .collect();
    if let Some(path) = &args.csv {
        write_text(path, &csv_table(&INDICATRIX_COLUMNS, &rows))?;
    }

    let mut results = Map::new();
    results.insert("pair".into(), pair_summary(&pair));
    results.insert(
        "gaps".into(),
        pairs(&[
            ("kappa", cmp.kappa_gap),
            ("tau", cmp.tau_gap),
            ("printed_kappa", cmp.printed_kappa_gap),
            ("printed_tau", cmp.printed_tau_gap),
            ("unit_norm_defect", cmp.unit_norm_defect),
        ]),
    );
    if args.kind.axis == FrameAxis::Binormal {
        let rel = indicatrix_arclength_relations(&pair, args.kind.side, args.n)?;
        let mut affine = pairs(&[
            ("slope", rel.fit.slope),
            ("intercept", rel.fit.intercept),
            ("rms_residual", rel.fit.rms_residual),
            ("relative_rms", rel.fit_relative_rms()),
            ("c1", rel.c1),
            ("c1_from_ratio", rel.c1_from_ratio),
            ("predicted_slope", rel.predicted_slope),
            ("signed_slope_gap", rel.signed_slope_gap()),
            ("magnitude_slope_gap", rel.magnitude_slope_gap()),
        ]);
        affine["c_stats"] = stats(&rel.c_stats);
        results.insert("affine".into(), affine);
        report.masked_intervals = rel.masked.clone();
    }
    if let Some(path) = &args.curve_out {
        let own = match args.kind.side {
            crate::indicatrix::Side::Base => pair.base(),
            crate::indicatrix::Side::Mate => pair.mate(),
        };
        let curve = indicatrix_curve(own, args.kind.axis, args.n)?.with_label(format!("{} indicatrix", args.kind));
        let hash = write_curve(path, &curve)?;
        results.insert("curve_out".into(), json!({ "path": path.display().to_string(), "sha256": hash }));
    }
    results.insert("table".into(), table_value(&INDICATRIX_COLUMNS, &rows));
    report.results = Value::Object(results);
    Ok(Output::ok(report.to_json()))
}

fn suite_value(r: &TheoremReport) -> Value {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            let mut evidence = Map::new();
            for (k, v) in &e.evidence {
                evidence.insert(k.clone(), real(*v));
            }
            let flags: Vec<Value> = e
                .flags
                .iter()
                .map(|f| {
                    json!({
                        "name": f.name,
                        "value": f.value,
                        "metric": real(f.metric),
                        "threshold": real(f.threshold),
                        "ambiguous": f.ambiguous(),
                    })
                })
                .collect();
            json!({
                "id": e.id,
                "kind": e.kind.name(),
                "pass": e.pass,
                "max_residual": real(e.max_residual),
                "tolerance": real(e.tolerance),
                "masked_fraction": real(e.masked_fraction),
                "ambiguous": e.ambiguous,
                "evidence": evidence,
                "flags": flags,
            })
        })
        .collect();
    json!({
        "samples": r.samples,
        "epsilon": real(r.epsilon),
        "lambda": real(r.lambda),
        "identities_pass": r.identities_pass(),
        "failed_identities": r.failed_identities(),
        "entries": entries,
    })
}

pub fn verify(args: VerifyArgs) -> CliResult<Output> {
    let mut report = RunReport::new("verify");
    let base = load(&args.base, &mut report)?;
    let mate = load(&args.mate, &mut report)?;
    report.param("n", json!(args.n));
    report.param("screen", real(args.screen));
    let mut tols = SuiteTolerances::default();
    let mut overrides = Map::new();
    for (id, v) in &args.tol {
        tols = tols.with_override(id, *v)?;
        overrides.insert(id.clone(), real(*v));
    }
    report.param("tol", Value::Object(overrides));

    let screen = DetectTolerances {
        offset: args.screen,
        align: args.screen,
        constancy: args.screen,
    };
    let pair = detect_bertrand_with(&base, &mate, args.n, &screen)?;
    let suite = theorem_suite(&pair, args.n, &tols)?;
    report.masked_intervals = masked_from_list(&pair.base().grid(args.n), &suite.masked);
    report.results = json!({ "pair": pair_summary(&pair), "suite": suite_value(&suite) });

    let mut text = String::new();
    for e in &suite.entries {
        let status = match (e.kind, e.pass) {
            (_, true) => "PASS",
            (EntryKind::Informational, false) => "NOTE",
            (_, false) => "FAIL",
        };
        text.push_str(&format!(
            "{status} {:<17} residual {} tolerance {} [{}]\n",
            e.id,
            crate::io::fmt_real(e.max_residual),
            crate::io::fmt_real(e.tolerance),
            e.kind.name()
        ));
    }
    text.push_str(&report.to_json());
    let failed = suite.failed_identities();
    Ok(match failed.first() {
        None => Output::ok(text),
        Some(first) => Output {
            stdout: text,
            stderr: Some(format!("identity check failed: {first} (all failures: {})", failed.join(", "))),
            code: 7,
        },
    })
}

pub fn generate(args: GenerateArgs) -> CliResult<Output> {
    let mut report = RunReport::new("generate");
    let (sphere, bytes) = sphere_source(&args.sphere_curve)?;
    if let Some(b) = bytes {
        report.inputs.push(InputHash::new(args.sphere_curve.clone(), &b));
    }
    report.param("sphere_curve", json!(args.sphere_curve));
    report.param("a", real(args.a));
    report.param("omega", real(args.omega));
    report.param("n", json!(args.n));
    let params = GeneratorParams {
        a: args.a,
        omega: args.omega,
        samples: args.n,
    };
    let curve = generate_bertrand_curve(&sphere, params)?.with_label(format!("bertrand curve from {}", sphere.label()));
    let file = CurveFile::from_curve(&curve);
    write_curve_file(&args.out, &file)?;
    let g = file.generated.as_ref().expect("generator output is a generated file");
    report.results = json!({
        "nominal_lambda": real(g.nominal_lambda),
        "a": real(g.a),
        "omega": real(g.omega),
        "samples": g.samples,
        "domain": reals(&[curve.domain().0, curve.domain().1]),
        "output": { "path": args.out.display().to_string(), "sha256": sha256_hex(file.to_json().as_bytes()) },
    });
    Ok(Output::ok(report.to_json()))
}

fn curve_class_value(c: &CurveClass) -> Value {
    let m = &c.metrics;
    json!({
        "planar": c.planar,
        "general_helix": c.general_helix,
        "slant_helix": c.slant_helix,
        "spherical": c.spherical,
        "degenerate_sphere_fit": c.degenerate_sphere_fit,
        "masked": c.masked,
        "metrics": pairs(&[
            ("tau_max", m.tau_max),
            ("f_deviation", m.f_deviation),
            ("gamma_deviation", m.gamma_deviation),
            ("sphere_fit_residual", m.sphere_fit_residual),
            ("sphere_radius", m.sphere_radius),
        ]),
    })
}

fn pair_class_value(c: &PairClass) -> Value {
    let evidence: Vec<Value> = c
        .evidence
        .iter()
        .map(|ev| {
            let criteria: Vec<Value> = ev
                .criteria
                .iter()
                .map(|k| {
                    json!({
                        "name": k.name,
                        "value": real(k.value),
                        "tolerance": real(k.tolerance),
                        "pass": k.pass(),
                    })
                })
                .collect();
            json!({ "category": ev.category.name(), "pass": ev.pass(), "criteria": criteria })
        })
        .collect();
    json!({
        "verdict": c.verdict.name(),
        "samples": c.samples,
        "masked": c.masked,
        "evidence": evidence,
    })
}

pub fn classify(args: ClassifyArgs) -> CliResult<Output> {
    let mut report = RunReport::new("classify");
    report.param("n", json!(args.n));
    let curves = args
        .curves
        .iter()
        .map(|p| load(p, &mut report))
        .collect::<CliResult<Vec<_>>>()?;
    report.results = match curves.as_slice() {
        [c] => json!({ "curve": curve_class_value(&classify_curve(c, args.n, &ClassifyTolerances::default())?) }),
        [a, b] => {
            report.param("align", json!(args.align));
            let pc = if args.align {
                pair_classify_aligned(a, b, args.n)?
            } else {
                pair_classify(a, b, args.n)?
            };
            json!({ "pair": pair_class_value(&pc) })
        }
        _ => unreachable!("clap takes one or two files"),
    };
    Ok(Output::ok(report.to_json()))
}
