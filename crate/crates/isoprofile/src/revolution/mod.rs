//! Surfaces of revolution and their isoperimetric profiles: profile
//! storage and closed forms ([`profile`]), the metric ↔ profile
//! dictionary with curvature and stability of circles ([`surface`]),
//! prescribed-curvature caps ([`cap`]), and merge / shape / comparison
//! predicates ([`predicates`]).

pub mod cap;
pub mod predicates;
pub mod profile;
pub mod surface;

pub use cap::{build_cap, CapBuild, CapFlags};
pub use predicates::{
    eta_threshold, j_k, merge_profiles, rho_ultrahyperbolic, shape_predicates, MergeOutcome,
    ShapeReport,
};
pub use profile::{CapData, GridProfile, Jet, MergedProfile, Profile};
pub use surface::{
    circle_q, curve_length, enclosed_area, geodesic_curvature, metric_from_profile,
    profile_from_metric, resonance_margin, stability_scan, ClosedMetric, RadialMetricFns,
    RevolutionSurface, StabilityScan,
};
