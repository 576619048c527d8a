//! Set-valued dynamics with bounded noise in the plane: box-covering minimal
//! invariant sets, boundary-map front propagation on the unit tangent
//! bundle, normal hyperbolicity spectra and persistence experiments.

pub mod boundary;
pub mod error;
pub mod front;
pub mod geometry;
pub mod hyperbolicity;
pub mod persistence;
pub mod raster;
pub mod setvalued;
pub mod systems;

pub use error::{Error, Result};
pub use geometry::{
    contact_residual, hausdorff_distance, normalize, t1_hausdorff_distance, Direction, Point,
    TangentPoint,
};
pub use systems::{
    validate_scenario, CatalogMap, DiffeoSpec, FamilyKind, PerturbationFamily, Scenario,
    ScenarioConfig, SmoothMap, ValidationReport, Window,
};
pub use setvalued::{
    dual_image, image_boxset, is_attractor, minimal_invariant_set, omega_limit, BoxSet, Grid,
    MinimalityCertificate,
};
pub use boundary::{
    boundary_map, boundary_map_differential, boundary_map_inverse, liouville_eval, BoundaryJet,
};
pub use front::{
    detect_projection_singularities, equidistant_front, front_projection, lift_closed_curve,
    propagate_loop, propagate_step, rasterized_minkowski_boundary, relax_to_invariant_loop,
    relax_to_invariant_loop_observed, relax_to_invariant_loop_report, ClosedCurve,
    LegendrianLoop, SingularityReport,
};
pub use hyperbolicity::{
    classify, estimate_spectrum, estimate_spectrum_seeded, Classification, SpectrumExport,
    SpectrumReport, Verdict,
};
pub use persistence::{
    attracting_boundary_check, run_persistence_experiment, verify_equivalence, BoundaryAttraction,
    EquivalenceReport, PersistenceRow, PersistenceTable,
};
