//! Workbench for isoperimetric profiles of surfaces.
//!
//! The crate builds surfaces with prescribed isoperimetric behavior and
//! verifies every quantitative claim against independent oracles:
//!
//! - [`level_graph`]: trivalent level graphs with exact dyadic edge
//!   weights and the 16-power level renormalization.
//! - [`cusp_assembly`]: constant-curvature −1 annuli glued into singular
//!   surfaces; exact sublevel areas; the local double-cover model at a
//!   singular point.
//! - [`calibration`]: calibration and rearrangement lower bounds, and the
//!   area-exchange ("pipe clearing") coverage check around critical
//!   levels.
//! - [`revolution`]: profile ↔ metric ODEs for surfaces of revolution,
//!   curvature identities, geodesic curvature, stability margins, cap
//!   construction and profile merging, and comparison floors.
//! - [`conformal`]: the blow-up level equation for prescribed convex
//!   profiles, its asymptotic diagnostics, and the vanishing-profile band
//!   construction.
//! - [`oracle`]: brute-force variational competitor search and singular
//!   flux bookkeeping.
//! - [`suite`]: the cross-module property suite behind `verify`.

pub mod calibration;
pub mod cli;
pub mod conformal;
pub mod cusp_assembly;
pub mod error;
pub mod exact;
pub mod level_graph;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod revolution;
pub mod suite;

pub use error::{Error, Result};
