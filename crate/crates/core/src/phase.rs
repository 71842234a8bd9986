//! Phase-space states and the canonical point transformation between the
//! Cartesian chart `(x, y, p_x, p_y)` and the polar chart `(r, phi, p_r, p_phi)`.
//!
//! Momenta transform as `p_r = (x p_x + y p_y)/r` and `p_phi = x p_y - y p_x`,
//! which keeps the kinetic form invariant:
//! `p_x^2 + p_y^2 = p_r^2 + p_phi^2/r^2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Coordinate chart a [`PhaseState`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Cartesian,
    Polar,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Cartesian => write!(f, "cartesian"),
            Chart::Polar => write!(f, "polar"),
        }
    }
}

/// A point of the four-dimensional phase space, tagged with its chart.
///
/// In the polar chart `q1 = r > 0` and `q2 = phi` is kept *unwrapped* (never
/// reduced mod 2 pi): drift metrics need continuous sampling, and the trig
/// functions wrap on their own when the angle is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
    pub chart: Chart,
}

impl PhaseState {
    /// Build a state, enforcing finiteness and `r > 0` in the polar chart.
    pub fn new(q1: f64, q2: f64, p1: f64, p2: f64, chart: Chart) -> Result<Self> {
        if !(q1.is_finite() && q2.is_finite() && p1.is_finite() && p2.is_finite()) {
            return Err(CoreError::NonFinite);
        }
        if chart == Chart::Polar && q1 <= 0.0 {
            return Err(CoreError::NonpositiveRadius(q1));
        }
        Ok(Self { q1, q2, p1, p2, chart })
    }

    pub fn cartesian(x: f64, y: f64, px: f64, py: f64) -> Result<Self> {
        Self::new(x, y, px, py, Chart::Cartesian)
    }

    pub fn polar(r: f64, phi: f64, pr: f64, pphi: f64) -> Result<Self> {
        Self::new(r, phi, pr, pphi, Chart::Polar)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    /// Replace the coordinates, keeping the chart tag. Used on integrator
    /// internals where validity is maintained by the step guards.
    pub(crate) fn with_array(&self, a: [f64; 4]) -> Self {
        Self {
            q1: a[0],
            q2: a[1],
            p1: a[2],
            p2: a[3],
            chart: self.chart,
        }
    }

    /// Kinetic energy of a unit-mass particle at this state.
    pub fn kinetic_energy(&self) -> f64 {
        match self.chart {
            Chart::Cartesian => 0.5 * (self.p1 * self.p1 + self.p2 * self.p2),
            Chart::Polar => {
                0.5 * (self.p1 * self.p1 + self.p2 * self.p2 / (self.q1 * self.q1))
            }
        }
    }

    pub(crate) fn expect_chart(&self, expected: Chart) -> Result<()> {
        if self.chart == expected {
            Ok(())
        } else {
            Err(CoreError::WrongChart {
                expected,
                got: self.chart,
            })
        }
    }
}

/// Canonical transform Cartesian -> polar. Fails at the coordinate origin.
pub fn to_polar(s: &PhaseState) -> Result<PhaseState> {
    s.expect_chart(Chart::Cartesian)?;
    let (x, y, px, py) = (s.q1, s.q2, s.p1, s.p2);
    let r = x.hypot(y);
    if r == 0.0 {
        return Err(CoreError::OriginPoint);
    }
    let phi = y.atan2(x);
    let pr = (x * px + y * py) / r;
    let pphi = x * py - y * px;
    PhaseState::polar(r, phi, pr, pphi)
}

/// Canonical transform polar -> Cartesian, inverse of [`to_polar`].
pub fn to_cartesian(s: &PhaseState) -> Result<PhaseState> {
    s.expect_chart(Chart::Polar)?;
    let (r, phi, pr, pphi) = (s.q1, s.q2, s.p1, s.p2);
    if r <= 0.0 {
        return Err(CoreError::NonpositiveRadius(r));
    }
    let (sin, cos) = phi.sin_cos();
    let x = r * cos;
    let y = r * sin;
    let px = pr * cos - (pphi / r) * sin;
    let py = pr * sin + (pphi / r) * cos;
    PhaseState::cartesian(x, y, px, py)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn unit_circle_tangent() {
        let s = PhaseState::cartesian(1.0, 0.0, 0.0, 1.0).unwrap();
        let p = to_polar(&s).unwrap();
        assert_relative_eq!(p.q1, 1.0);
        assert_relative_eq!(p.q2, 0.0);
        assert_relative_eq!(p.p1, 0.0);
        assert_relative_eq!(p.p2, 1.0);
    }

    #[test]
    fn momentum_map_on_y_axis() {
        // p_phi = x p_y - y p_x = -2 at (0, 2) with p_x = 1
        let s = PhaseState::cartesian(0.0, 2.0, 1.0, 0.0).unwrap();
        let p = to_polar(&s).unwrap();
        assert_relative_eq!(p.q1, 2.0);
        assert_relative_eq!(p.q2, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(p.p1, 0.0);
        assert_relative_eq!(p.p2, -2.0);
    }

    #[test]
    fn radial_motion_along_y_axis() {
        let s = PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 1.0, 0.0).unwrap();
        let c = to_cartesian(&s).unwrap();
        assert_relative_eq!(c.q1, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.q2, 1.0);
        assert_relative_eq!(c.p1, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.p2, 1.0);
    }

    #[test]
    fn tangential_momentum_on_x_axis() {
        // p_y = p_phi / r on the positive x-axis
        let s = PhaseState::polar(2.0, 0.0, 0.0, 2.0).unwrap();
        let c = to_cartesian(&s).unwrap();
        assert_relative_eq!(c.q1, 2.0);
        assert_relative_eq!(c.q2, 0.0);
        assert_relative_eq!(c.p1, 0.0);
        assert_relative_eq!(c.p2, 1.0);
    }

    #[test]
    fn origin_rejected() {
        let s = PhaseState::cartesian(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(to_polar(&s), Err(CoreError::OriginPoint));
    }

    #[test]
    fn nonpositive_radius_rejected() {
        assert!(matches!(
            PhaseState::polar(0.0, 1.0, 0.0, 0.0),
            Err(CoreError::NonpositiveRadius(_))
        ));
        assert!(matches!(
            PhaseState::polar(-1.0, 1.0, 0.0, 0.0),
            Err(CoreError::NonpositiveRadius(_))
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            PhaseState::cartesian(f64::NAN, 0.0, 0.0, 0.0),
            Err(CoreError::NonFinite)
        );
    }

    #[test]
    fn wrong_chart_rejected() {
        let s = PhaseState::polar(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(to_polar(&s), Err(CoreError::WrongChart { .. })));
    }

    #[test]
    fn round_trip_many_random_states() {
        // 1e4 seeded states, 1e-13 relative tolerance on the round trip and
        // on kinetic-form invariance.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31_415);
        for _ in 0..10_000 {
            let s = PhaseState::cartesian(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            )
            .unwrap();
            if s.q1.hypot(s.q2) < 1e-3 {
                continue;
            }
            let p = to_polar(&s).unwrap();
            let back = to_cartesian(&p).unwrap();
            let scale = s.as_array().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in s.as_array().iter().zip(back.as_array()) {
                assert!((a - b).abs() <= 1e-13 * scale, "{a} vs {b}");
            }
            assert_relative_eq!(s.kinetic_energy(), p.kinetic_energy(), max_relative = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn round_trip_property(
            x in -5.0f64..5.0, y in -5.0f64..5.0,
            px in -3.0f64..3.0, py in -3.0f64..3.0,
        ) {
            prop_assume!(x.hypot(y) > 1e-3);
            let s = PhaseState::cartesian(x, y, px, py).unwrap();
            let back = to_cartesian(&to_polar(&s).unwrap()).unwrap();
            let scale = s.as_array().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in s.as_array().iter().zip(back.as_array()) {
                prop_assert!((a - b).abs() <= 1e-13 * scale);
            }
        }
    }
}
