//! One-dimensional Schrödinger pictures of `su_q(2)` at `q = exp(is)`.

pub mod coupled;
pub mod eigen;
pub mod ladder;
pub mod potential;
pub mod realization;

pub use coupled::{coupled_solve, disjoint_support_pair, CoupledSolution};
pub use eigen::{eigensolve, eigensolve_cells, self_residual, EigenResult};
pub use ladder::{ladder_apply, ladder_step, LadderCheck};
pub use potential::{
    build_potential, build_potential_with, liouville_factor, LiouvilleMode, PotentialForm, PotentialParams,
    PotentialProfile, Regime,
};
pub use realization::{
    solve_f1, solve_f2, Constants, F1Branch, F2Branch, RadialProfile, RealizationFns,
};
