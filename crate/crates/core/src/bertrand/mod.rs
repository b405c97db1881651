//! Bertrand pairs: construction, detection, ratio invariants and the
//! closed-form apparatus of the mate.

mod detect;
mod fit;
mod generator;
mod offset;
mod presets;
mod ratio;

pub use detect::{
    constraint_residual, detect_bertrand, detect_bertrand_with, eps_g_relation, pair_constraint_residual,
    BertrandPairModel, ConstancyStats, ConstraintResidual, DetectTolerances, PairDiagnostics, PairPoint,
};
pub use fit::{affine_fit, linear_relation_fit, AffineFit, LinearRelation};
pub use generator::{
    generate_bertrand_curve, generate_unchecked, sphere_geodesic_curvature, GeneratedCurve, GeneratorParams,
    DEFAULT_SAMPLES,
};
pub use presets::{sphere_preset, PRESET_NAMES};
pub use offset::{construct_mate, offset_curve, FrameAxis, OffsetCurve};
pub use ratio::{
    bertrand_lambda, bertrand_lambda_from_mate, geodesic_indicator_closed_form, mate_apparatus_from_base,
    orient_partner, ratio_invariants, MateApparatus, RatioInvariants, EPS_DEN, EPS_G,
};

#[cfg(test)]
mod tests;
