//! Quantum side: Bell operators on the symmetric subspace, their minimum
//! over the measurement angle, and Dicke and LMG states.

mod dicke;
mod eigen;
mod lmg;
mod operator;
mod optimize;

pub use dicke::{
    collective_to_pairwise, dicke_expectation_closed_form, dicke_reduced_two_qubit, dicke_violation_analytic,
    reduced_bell_operator, reduced_two_qubit, DickeState, DickeViolation, PairwiseCorrelators,
};
pub use eigen::{min_eigenvalue, min_eigenvalue_dense, spectrum_dense, BISECTION_BUDGET};
pub use lmg::{
    lmg_ground_full, lmg_ground_state, lmg_hamiltonian_full, lmg_hamiltonian_sym, LmgGroundState, LmgParams,
};
pub use operator::{
    bell_operator_full, bell_operator_sym, dicke_state_full, BellExpression, MeasurementSettings, SymmetricOperator,
    FULL_SPACE_LIMIT,
};
pub use optimize::{optimize_theta, theta_scan, Objective, ViolationReport, THETA_GRID_POINTS};
