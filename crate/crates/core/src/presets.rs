//! Named run configurations used by the CLI and the verification suites.
//!
//! Every preset is a regular, confined initial condition well away from the
//! singular sets and (for the Kepler families) on a bound orbit, so the long
//! conservation runs are deterministic and fast.

use crate::dynamics::IntegratorOptions;
use crate::invariants::InvariantKind;
use crate::phase::PhaseState;
use crate::potentials::SystemSpec;
use crate::rational::RationalK;

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub system: SystemSpec,
    pub initial_state: PhaseState,
    pub options: IntegratorOptions,
    pub invariants: Vec<InvariantKind>,
}

pub const PRESET_NAMES: [&str; 5] = [
    "sw-isotropic",
    "ttw-k2",
    "pw-k1",
    "kepler-circular",
    "vb-12",
];

/// Look up a preset by name.
pub fn preset(name: &str) -> Option<Preset> {
    use InvariantKind::*;
    let k = |p, q| RationalK::new(p, q).unwrap();
    let opts = IntegratorOptions::default();
    match name {
        // isotropic oscillator with both inverse-square barriers
        "sw-isotropic" => Some(Preset {
            name: "sw-isotropic",
            system: SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.5, k2: 0.5 },
            initial_state: PhaseState::cartesian(1.0, 1.2, 0.4, -0.3).unwrap(),
            options: opts,
            invariants: vec![H, Ex, Ey, ReBxy, ImBxy],
        }),
        // deformed radial oscillator, k = 2 (the TTW k = 1 barrier)
        "ttw-k2" => Some(Preset {
            name: "ttw-k2",
            system: SystemSpec::Vak { omega0: 1.0, k: k(2, 1), ka: 1.0, kb: 0.5 },
            initial_state: PhaseState::polar(1.2, std::f64::consts::FRAC_PI_4, 0.3, 1.1)
                .unwrap(),
            options: opts,
            invariants: vec![H, J2, ReKk, ImKk],
        }),
        // deformed Kepler on a bound orbit (H < 0)
        "pw-k1" => Some(Preset {
            name: "pw-k1",
            system: SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 },
            initial_state: PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 0.1, 1.05)
                .unwrap(),
            options: opts,
            invariants: vec![H, J2, ReKk, ImKk],
        }),
        // exactly circular pure-Kepler orbit; M (and hence K) vanishes
        // identically there, so only the quadratic constants are tracked
        "kepler-circular" => Some(Preset {
            name: "kepler-circular",
            system: SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 },
            initial_state: PhaseState::polar(1.0, 0.5, 0.0, 1.0).unwrap(),
            options: opts,
            invariants: vec![H, J2],
        }),
        // VbN(1,2): the case whose Im C reduces to the quadratic I3
        "vb-12" => Some(Preset {
            name: "vb-12",
            system: SystemSpec::VbN { n_x: 1, n_y: 2, omega0: 1.0, k1: 0.4, k2: 0.7 },
            initial_state: PhaseState::cartesian(1.1, 0.6, 0.2, -0.4).unwrap(),
            options: opts,
            invariants: vec![H, Ex, Ey, ReCxy, ImCxy, I3_12],
        }),
        _ => None,
    }
}
