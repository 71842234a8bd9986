//! Shared fixtures for the kernel benchmarks.

use superint_core::{PhaseState, RationalK, SystemSpec};

pub fn deformed_kepler() -> (SystemSpec, PhaseState) {
    (
        SystemSpec::Vck {
            g: 1.0,
            k: RationalK::new(5, 3).unwrap(),
            ka: 0.2,
            kb: 0.1,
        },
        PhaseState::polar(1.1, 0.7, 0.2, 1.0).unwrap(),
    )
}

pub fn deformed_oscillator() -> (SystemSpec, PhaseState) {
    (
        SystemSpec::Vak {
            omega0: 1.0,
            k: RationalK::new(3, 2).unwrap(),
            ka: 1.0,
            kb: 0.4,
        },
        PhaseState::polar(1.2, 0.9, 0.3, 1.1).unwrap(),
    )
}

pub fn anisotropic_oscillator() -> (SystemSpec, PhaseState) {
    (
        SystemSpec::VaN {
            n_x: 2,
            n_y: 3,
            omega0: 1.0,
            k1: 0.5,
            k2: 0.3,
        },
        PhaseState::cartesian(1.0, 1.1, 0.4, -0.2).unwrap(),
    )
}
