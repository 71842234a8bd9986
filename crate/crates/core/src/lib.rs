//! Superintegrable Hamiltonian families in the plane and the numerical
//! machinery that verifies their constants of motion.
//!
//! Five potential families are covered, all deformations of the harmonic
//! oscillator or the Kepler potential: two Cartesian-separable oscillators
//! (`VaN`, `VbN`) and three polar-separable systems (`Vak`, `Vck`, `VckRot`)
//! that include the TTW and Post-Winternitz potentials after a coefficient
//! map. Each family carries, beyond the two quadratic separation integrals,
//! a higher-order constant of motion built as a product of integer powers of
//! complex factor functions whose time evolution is a pure phase rotation.
//!
//! The crate evaluates every one of these constants as a genuine phase-space
//! function and checks the claims four independent ways:
//!
//! - **drift**: relative deviation along adaptively integrated trajectories,
//! - **brackets**: normalized Poisson-bracket residuals `{I, H}` at seeded
//!   random points,
//! - **phase rotation**: the factor laws `dM/dt = i c lambda M`,
//!   `dN/dt = i k lambda N` along sampled runs,
//! - **independence**: numerical rank of gradient matrices (superintegrability
//!   means rank 3 with two degrees of freedom).

pub mod complex;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod invariants;
pub mod phase;
pub mod potentials;
pub mod presets;
pub mod rational;
pub mod sampling;
pub mod verify;

pub use complex::{complex_pow_int, ComplexValue};
pub use dynamics::{
    integrate, integrate_fixed_symplectic, guard_distance, IntegratorOptions, Scheme,
    Termination, Trajectory, GUARD_BAND,
};
pub use error::{CoreError, Result};
pub use hamiltonians::{eval_h, grad_h, hamilton_rhs, PhaseGradient};
pub use invariants::{
    eval_invariant, invariant_gradient, InvariantKind, InvariantSpec,
};
pub use phase::{to_cartesian, to_polar, Chart, PhaseState};
pub use potentials::{
    eval_fk, eval_gk, eval_potential, grad_potential, map_pw_to_ck, map_ttw_to_ak, SystemSpec,
    SINGULARITY_BAND,
};
pub use presets::{preset, Preset, PRESET_NAMES};
pub use rational::RationalK;
pub use verify::{
    bracket_residual, drift_report, identity_suite, independence_rank, phase_rotation_check,
    BracketStats, DriftStats, Identity, IdentityOutcome, RotationStats, RotationTarget,
};
