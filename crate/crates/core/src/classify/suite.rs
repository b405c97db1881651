use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bertrand::{constraint_residual, eps_g_relation, BertrandPairModel, ConstancyStats, FrameAxis, PairPoint};
use crate::error::{Error, Result};
use crate::indicatrix::{
    frame_relations_check, indicatrix_arclength_relations, indicatrix_curve, sample_indicatrix, IndicatrixApparatus,
    IndicatrixKind, Side,
};

use super::pair::{pair_classify_aligned, PairVerdict};
use super::{helix_condition_residual, indicatrix_planarity, spherical_helix_check, ClassifyTolerances};

/// Entry ids in report order.
pub const THEOREM_IDS: [&str; 19] = [
    "th2",
    "th3",
    "th6",
    "th8",
    "th11",
    "elf-corollaries",
    "cr14",
    "cr33",
    "teo15",
    "th17",
    "cr18",
    "th22",
    "th25",
    "teo33",
    "constraint-eq",
    "eps-g-relation",
    "frame-relations",
    "negative-result",
    "affine-law",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// Holds on every Bertrand pair; decides the verify exit status.
    Identity,
    /// Agreement of boolean classifications; the residual counts the
    /// disagreeing pairs of flags.
    Equivalence,
    /// Reported for reference only.
    Informational,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Identity => "identity",
            EntryKind::Equivalence => "equivalence",
            EntryKind::Informational => "informational",
        }
    }
}

/// One boolean classification that feeds an equivalence entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub name: String,
    pub value: bool,
    pub metric: f64,
    pub threshold: f64,
}

impl Flag {
    fn new(name: &str, metric: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value: metric < threshold,
            metric,
            threshold,
        }
    }

    /// Within a factor of ten of the threshold, where the flag may flicker.
    pub fn ambiguous(&self) -> bool {
        !(self.metric < self.threshold / 10.0 || self.metric > self.threshold * 10.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremEntry {
    pub id: &'static str,
    pub kind: EntryKind,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub masked_fraction: f64,
    /// Named sub-measurements behind the residual.
    pub evidence: Vec<(String, f64)>,
    pub flags: Vec<Flag>,
    /// Some flag sits inside the hysteresis band.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub samples: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub entries: Vec<TheoremEntry>,
    /// Grid parameters where the pair quantities were undefined.
    pub masked: Vec<f64>,
}

impl TheoremReport {
    pub fn entry(&self, id: &str) -> Option<&TheoremEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn identities_pass(&self) -> bool {
        self.failed_identities().is_empty()
    }

    /// Failing identity entries. The constancy of `g̃` and `g` characterizes
    /// a Bertrand pair, so those two come first; the rest follow in report
    /// order.
    pub fn failed_identities(&self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self
            .entries
            .iter()
            .filter(|e| e.kind == EntryKind::Identity && !e.pass)
            .map(|e| e.id)
            .collect();
        ids.sort_by_key(|id| !matches!(*id, "th3" | "th22"));
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteTolerances {
    pub classify: ClassifyTolerances,
    /// Per-entry replacements of the default tolerance.
    pub overrides: BTreeMap<String, f64>,
}

impl SuiteTolerances {
    pub fn default_tolerance(id: &str) -> f64 {
        match id {
            "th2" | "elf-corollaries" | "cr14" | "cr33" | "affine-law" => 1e-5,
            "th3" | "th22" | "constraint-eq" => 1e-6,
            "eps-g-relation" | "frame-relations" => 1e-8,
            _ => 0.5,
        }
    }

    pub fn tolerance(&self, id: &str) -> f64 {
        self.overrides
            .get(id)
            .copied()
            .unwrap_or_else(|| Self::default_tolerance(id))
    }

    pub fn with_override(mut self, id: &str, tol: f64) -> Result<Self> {
        if !THEOREM_IDS.contains(&id) {
            return Err(Error::InvalidCurve(format!("unknown theorem id '{id}'")));
        }
        self.overrides.insert(id.to_string(), tol);
        Ok(self)
    }
}

/// Condition residual threshold for th8, th11 and th17.
pub const CONDITION_TOL: f64 = 1e-3;

struct Builder<'a> {
    tols: &'a SuiteTolerances,
    entries: Vec<TheoremEntry>,
}

impl Builder<'_> {
    fn measured(&mut self, id: &'static str, kind: EntryKind, evidence: Vec<(String, f64)>, masked_fraction: f64) {
        // NaN propagates so that an undefined measurement fails.
        let max_residual = evidence.iter().map(|e| e.1).fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) });
        let tolerance = self.tols.tolerance(id);
        self.entries.push(TheoremEntry {
            id,
            kind,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
            masked_fraction,
            evidence,
            flags: Vec::new(),
            ambiguous: false,
        });
    }

    fn equivalence(&mut self, id: &'static str, flags: Vec<Flag>, masked_fraction: f64) {
        let mut disagreements = 0usize;
        for i in 0..flags.len() {
            for j in i + 1..flags.len() {
                let (a, b) = (&flags[i], &flags[j]);
                if !a.ambiguous() && !b.ambiguous() && a.value != b.value {
                    disagreements += 1;
                }
            }
        }
        let tolerance = self.tols.tolerance(id);
        let max_residual = disagreements as f64;
        self.entries.push(TheoremEntry {
            id,
            kind: EntryKind::Equivalence,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
            masked_fraction,
            evidence: flags.iter().map(|f| (f.name.clone(), f.metric)).collect(),
            ambiguous: flags.iter().any(Flag::ambiguous),
            flags,
        });
    }
}

fn ev(name: &str, v: f64) -> (String, f64) {
    (name.to_string(), v)
}

fn max_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, f64::max)
}

/// Pair data at one grid point, with the condition residual of each side
/// (computed from the partner's quantities).
struct Point {
    pp: PairPoint,
    residual_base: Option<f64>,
    residual_mate: Option<f64>,
}

/// Runs every theorem check over `n ≥ 256` grid points. Failures become
/// report entries; only setup errors are returned.
pub fn theorem_suite(pair: &BertrandPairModel, n: usize, tols: &SuiteTolerances) -> Result<TheoremReport> {
    if n < 256 {
        return Err(Error::TooFewSamples { needed: 256, got: n });
    }
    if pair.degenerate() {
        return Err(Error::DegenerateRatio("the self-pair has no ratio invariants".into()));
    }
    let eps = pair.epsilon();
    let grid = pair.base().grid(n);
    let rows = grid
        .par_iter()
        .map(|&t| match pair.point(t) {
            Ok(pp) => Ok(Some(Point {
                residual_base: helix_condition_residual(&pp.mate, &pp.mate_ratios).ok(),
                residual_mate: helix_condition_residual(&pp.base, &pp.base_ratios).ok(),
                pp,
            })),
            Err(Error::SingularPoint { .. } | Error::DegenerateRatio(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let masked: Vec<f64> = grid.iter().zip(&rows).filter(|(_, r)| r.is_none()).map(|(t, _)| *t).collect();
    let point_masked = masked.len() as f64 / n as f64;
    let pts: Vec<Point> = rows.into_iter().flatten().collect();
    if pts.len() < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: pts.len() });
    }
    let apps = IndicatrixKind::ALL
        .par_iter()
        .map(|&k| sample_indicatrix(pair, k, n))
        .collect::<Result<Vec<IndicatrixApparatus>>>()?;
    let app = |side: Side, axis: FrameAxis| &apps[IndicatrixKind::ALL.iter().position(|k| *k == IndicatrixKind::new(side, axis)).unwrap()];
    let app_masked = max_of(apps.iter().map(IndicatrixApparatus::masked_fraction));

    let mut b = Builder { tols, entries: Vec::new() };

    // Slant helix pair.
    let th2 = max_of(pts.iter().map(|p| {
        let g = p.pp.base_ratios.gamma;
        (g + p.pp.mate_ratios.gamma).abs() / (1.0 + g.abs())
    }));
    b.measured("th2", EntryKind::Identity, vec![ev("gamma_sum", th2)], point_masked);

    let g_stats = |f: &dyn Fn(&PairPoint) -> f64| {
        ConstancyStats::from_values(&pts.iter().map(|p| Some(f(&p.pp)).filter(|v| v.is_finite())).collect::<Vec<_>>())
    };
    let g_mate = g_stats(&|p| p.mate_ratios.g);
    let g_base = g_stats(&|p| p.base_ratios.g);
    let p2 = pair.diagnostics().p2;
    b.measured(
        "th3",
        EntryKind::Identity,
        vec![ev("g_mate_deviation", g_mate.relative()), ev("p2_deviation", p2.relative())],
        point_masked.max(g_mate.masked as f64 / n as f64),
    );

    // Classification flags.
    let tol = &tols.classify;
    let gamma_base = g_stats(&|p| p.base_ratios.gamma);
    let gamma_mate = g_stats(&|p| p.mate_ratios.gamma);
    let slant_base = Flag::new("base_slant_helix", gamma_base.relative(), tol.slant);
    let slant_mate = Flag::new("mate_slant_helix", gamma_mate.relative(), tol.slant);
    let sph = |side: Side, axis: FrameAxis, name: &str| -> Flag {
        let dev = spherical_helix_check(app(side, axis), tol.helix).map_or(f64::INFINITY, |c| c.deviation);
        Flag::new(name, dev, tol.helix)
    };
    let t_base = sph(Side::Base, FrameAxis::Tangent, "t_base_spherical_helix");
    let b_base = sph(Side::Base, FrameAxis::Binormal, "b_base_spherical_helix");
    let t_mate = sph(Side::Mate, FrameAxis::Tangent, "t_mate_spherical_helix");
    let b_mate = sph(Side::Mate, FrameAxis::Binormal, "b_mate_spherical_helix");
    let n_base = Flag::new("n_base_planar", indicatrix_planarity(app(Side::Base, FrameAxis::Normal)), tol.planar);
    let n_mate = Flag::new("n_mate_planar", indicatrix_planarity(app(Side::Mate, FrameAxis::Normal)), tol.planar);
    let worst = |f: &dyn Fn(&Point) -> Option<f64>| max_of(pts.iter().map(|p| f(p).map_or(f64::INFINITY, f64::abs)));
    let cond_base = Flag::new("condition_base", worst(&|p| p.residual_base), CONDITION_TOL);
    let cond_mate = Flag::new("condition_mate", worst(&|p| p.residual_mate), CONDITION_TOL);

    b.equivalence("th6", vec![slant_base.clone(), slant_mate.clone(), t_base.clone()], app_masked);
    b.equivalence("th8", vec![t_base.clone(), cond_base.clone(), t_mate.clone(), cond_mate.clone()], app_masked);
    b.equivalence("th11", vec![n_base.clone(), cond_base.clone(), n_mate.clone(), cond_mate.clone()], app_masked);

    // Corollary chain: Γ = τ_t/κ_t = τ_b/κ_b and Γ_t = Γ_b on both sides.
    let mut chain = Vec::new();
    for side in [Side::Base, Side::Mate] {
        let (t, bb) = (app(side, FrameAxis::Tangent), app(side, FrameAxis::Binormal));
        let mut ratio_t: f64 = 0.0;
        let mut ratio_b: f64 = 0.0;
        let mut gammas: f64 = 0.0;
        for (st, sb) in t.samples.iter().zip(&bb.samples) {
            if st.t != sb.t {
                continue;
            }
            let Some(p) = pts.iter().find(|p| p.pp.t == st.t) else { continue };
            let g = match side {
                Side::Base => p.pp.base_ratios.gamma,
                Side::Mate => p.pp.mate_ratios.gamma * pair.orientation(),
            };
            let scale = 1.0 + g.abs();
            ratio_t = ratio_t.max((st.tau / st.kappa - g).abs() / scale);
            ratio_b = ratio_b.max((sb.tau / sb.kappa - g).abs() / scale);
            if let (Some(a), Some(c)) = (st.gamma, sb.gamma) {
                gammas = gammas.max((a - c).abs() / (1.0 + a.abs()));
            }
        }
        let s = side.name();
        chain.push(ev(&format!("{s}_gamma_vs_tau_t_over_kappa_t"), ratio_t));
        chain.push(ev(&format!("{s}_gamma_vs_tau_b_over_kappa_b"), ratio_b));
        chain.push(ev(&format!("{s}_gamma_t_vs_gamma_b"), gammas));
    }
    b.measured("elf-corollaries", EntryKind::Identity, chain, app_masked);

    // Arc-length relations of the binormal images.
    let arcs = [Side::Base, Side::Mate]
        .par_iter()
        .map(|&s| indicatrix_arclength_relations(pair, s, n))
        .collect::<Vec<_>>();
    let mut affine = Vec::new();
    for (id, arc) in ["cr14", "cr33"].into_iter().zip(&arcs) {
        match arc {
            Ok(a) => {
                let last = |v: &[f64]| *v.last().unwrap();
                let direct = last(&a.s_b_direct);
                b.measured(
                    id,
                    EntryKind::Identity,
                    vec![
                        ev("length_vs_direct", (last(&a.s_b_partner).abs() - direct).abs() / direct),
                        ev("length_vs_total_torsion", (last(&a.s_b_partner).abs() - last(&a.total_torsion).abs()).abs() / direct),
                        ev("fit_relative_rms", a.fit_relative_rms()),
                        ev("c_deviation", a.c_stats.relative()),
                    ],
                    a.masked.len() as f64 / n as f64,
                );
                let s = a.side.name();
                affine.push(ev(&format!("{s}_signed_slope_gap"), a.signed_slope_gap()));
                affine.push(ev(&format!("{s}_magnitude_slope_gap"), a.magnitude_slope_gap()));
                affine.push(ev(&format!("{s}_fit_slope"), a.fit.slope));
                affine.push(ev(&format!("{s}_predicted_slope"), a.predicted_slope));
            }
            Err(_) => b.measured(id, EntryKind::Identity, vec![ev("quadrature_failed", f64::INFINITY)], 1.0),
        }
    }

    b.equivalence("teo15", vec![slant_mate.clone(), b_base.clone()], app_masked);
    b.equivalence("th17", vec![b_base.clone(), cond_base.clone(), b_mate.clone(), cond_mate.clone()], app_masked);
    b.equivalence(
        "cr18",
        vec![t_base.clone(), n_base.clone(), b_base.clone(), t_mate.clone(), n_mate.clone(), b_mate.clone()],
        app_masked,
    );
    b.measured(
        "th22",
        EntryKind::Identity,
        vec![ev("g_base_deviation", g_base.relative()), ev("q2_deviation", pair.diagnostics().q2.relative())],
        point_masked.max(g_base.masked as f64 / n as f64),
    );
    b.equivalence("th25", vec![slant_mate.clone(), t_mate.clone(), slant_base.clone(), t_base.clone()], app_masked);
    b.equivalence("teo33", vec![slant_base.clone(), b_mate.clone()], app_masked);

    let constraint = max_of(pts.iter().map(|p| constraint_residual(&p.pp, eps).map_or(f64::INFINITY, |c| c.normalized())));
    b.measured("constraint-eq", EntryKind::Identity, vec![ev("normalized_residual", constraint)], point_masked);
    let relation = max_of(pts.iter().map(|p| eps_g_relation(&p.pp, eps).map_or(f64::INFINITY, f64::abs)));
    b.measured("eps-g-relation", EntryKind::Identity, vec![ev("eps_g_plus_g_mate", relation)], point_masked);

    let frames = frame_relations_check(pair, n)?;
    let mut fr: Vec<(String, f64)> = frames
        .relations
        .iter()
        .map(|r| (format!("{}_{}", r.side.name(), r.name), r.exact))
        .collect();
    fr.push(ev("sampled_frames", frames.max_direct()));
    b.measured(
        "frame-relations",
        EntryKind::Identity,
        fr,
        (frames.masked[0] + frames.masked[1]) as f64 / (2 * n) as f64,
    );

    // Closing statement: no two indicatrices form a classical pair.
    let mut curves = Vec::new();
    for side in [Side::Base, Side::Mate] {
        let own = match side {
            Side::Base => pair.base(),
            Side::Mate => pair.mate(),
        };
        for axis in FrameAxis::ALL {
            curves.push(indicatrix_curve(own, axis, n)?);
        }
    }
    let pairs = indicatrix_pairs();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j, _)| pair_classify_aligned(&curves[i], &curves[j], n).map(|c| c.verdict))
        .collect::<Vec<_>>();
    let mut neg = Vec::new();
    for ((_, _, name), v) in pairs.iter().zip(&verdicts) {
        let hit = match v {
            Ok(PairVerdict::None) => 0.0,
            _ => 1.0,
        };
        neg.push(ev(name, hit));
    }
    b.measured("negative-result", EntryKind::Equivalence, neg, 0.0);

    b.measured("affine-law", EntryKind::Informational, affine, 0.0);

    let mut entries = b.entries;
    entries.sort_by_key(|e| THEOREM_IDS.iter().position(|id| *id == e.id));
    Ok(TheoremReport {
        samples: n,
        epsilon: eps,
        lambda: pair.lambda(),
        entries,
        masked,
    })
}

/// The nine indicatrix pairs compared: within each side (t, b), (t, n),
/// (n, b), and each axis against its counterpart on the mate. Indices
/// address base t, n, b then mate t, n, b.
pub fn indicatrix_pairs() -> [(usize, usize, &'static str); 9] {
    [
        (0, 2, "t_base-b_base"),
        (0, 1, "t_base-n_base"),
        (1, 2, "n_base-b_base"),
        (3, 5, "t_mate-b_mate"),
        (3, 4, "t_mate-n_mate"),
        (4, 5, "n_mate-b_mate"),
        (0, 3, "t_base-t_mate"),
        (1, 4, "n_base-n_mate"),
        (2, 5, "b_base-b_mate"),
    ]
}
