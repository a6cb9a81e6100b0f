//! Approximate eigenvectors for the doubling operator `D`, the exact `ℚ₀`
//! apparatus with `D_2`, `D_3`, and the shift-operator machinery for `T_λ`.

mod doubling;
mod q0;
mod shift;

pub use doubling::{
    doubling_witness_vn, parse_grid, residual_scan, ScanConfig, ScanRow, VectorStats, WitnessReport, DENSE_CAP,
};
pub use q0::{
    apply_q0, dilation_support_disjointness, q0_witness_un, ExactRational, DisjointnessReport, Q0Key, Q0Op, QSeq, UnReport, UN_MAX_N,
};
pub use shift::{moment_functional, shift_witness_identity, solve_t_lambda, ShiftIdentityReport};
