//! Entanglement between two atoms that cross a lossless single-mode cavity one
//! after the other, for coherent and squeezed coherent cavity fields.
//!
//! The pipeline runs photon statistics ([`field`]) into the reduced two-atom
//! state ([`dynamics`]) and then into concurrence and entanglement of formation
//! ([`entanglement`]). [`oracle`] rebuilds the same state from the explicit
//! atom-atom-field amplitudes as an independent check, and [`sweep`] drives
//! Rabi-angle scans and produces CSV.

#![allow(clippy::needless_range_loop)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod field;
pub mod linalg;
mod numeric;
pub mod oracle;
pub mod sweep;

pub use dynamics::{
    assemble_rho, gamma_coefficients, two_atom_state, GammaCoefficients, RabiAngle,
    TwoAtomDensityMatrix,
};
pub use entanglement::{
    binary_entropy, concurrence, entanglement_of_formation, eof_from_concurrence, spin_flipped,
    EntanglementResult,
};
pub use error::{Error, Result};
pub use field::{
    coherent_distribution, mean_photon, quadrature_variances, solve_alpha_for_mean,
    squeezed_distribution, CoherentParams, FieldParams, PhotonDistribution, QuadratureVariances,
    SqueezedParams, DEFAULT_TAIL_TOL,
};
pub use linalg::{symmetric_eigen, Mat4, Spectrum4, SymmetricEigen};
pub use oracle::{
    quartic_eigenvalues, spin_flip_product_eigenvalues, trace_out_field, tripartite_state,
    TripartiteState,
};
pub use sweep::{
    oracle_check_distribution, peak, run_compare, run_oracle_check, run_sweep, sweep_distribution,
    Comparison, FieldKind, GtGrid, OracleReport, Peak, Strength, SweepConfig, SweepRow,
};
