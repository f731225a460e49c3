//! Singularity diagnostics for edge restrictions of harmonic functions,
//! and energy and Kusuoka measures on SG.

mod edge;
mod kusuoka;
mod spline;

pub use edge::{
    dyadic_approximant, l1_difference, refinement_consistent, restrict_harmonic, singularity_report,
    DyadicApproximant, EdgeRestriction, SingularityReport, SAMPLE_LEVEL_CAP,
};
pub use kusuoka::{
    delta2_prime_approx, delta2_prime_sum, delta2_prime_unit_sequence, edge_masses, edge_masses_by_matrices,
    energy_measure, growth_base, kusuoka_growth, kusuoka_measure, ratio_error, GrowthRow, GROWTH_DEPTH_CAP,
};
pub use spline::{delta1_prime, nu_vertex_weights, SPLINE_DEPTH};
