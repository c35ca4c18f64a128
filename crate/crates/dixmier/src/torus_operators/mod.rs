//! Compressions of M_f·G(Δ)^s on the torus T^n.

pub mod battery;
pub mod compress;
pub mod function;
pub mod inequalities;
pub mod routes;

pub use compress::{
    compress, edge_effect_check, hs_norm_formula, hs_norm_matrix, schatten_norm, singular_spectrum,
    trace_identity_check, CompressedOperator, EdgeEffect, OperatorKind, OperatorMatrix,
    SingularSpectrum, TraceIdentity,
};
pub use function::{
    fourier_coefficients, l2_refinement, lp_norm, FourierTable, GridSamples, L2Refinement,
    L2Verdict, LpNorm, TorusFunction, TrigPoly,
};
pub use inequalities::{
    reliable_s_grid, schatten_bound_curve, z1_comparison, BoundCheck, Z1Comparison,
};
pub use routes::{
    bracket_from_spectrum, dixmier_bracket, residue_route, spectrum_brackets, BracketMethod,
    BracketOptions, DixmierBracket, ResidueRoute,
};
