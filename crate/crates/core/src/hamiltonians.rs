//! Hamiltonians, their phase-space gradients, and Hamilton's equations.
//!
//! Every family is handled in its natural chart: `H = T + V` with
//! `T = (p1^2 + p2^2)/2` in Cartesian coordinates and
//! `T = (p_r^2 + p_phi^2/r^2)/2` in polar coordinates. The equations of
//! motion come from the canonical pairing applied to the analytic gradient,
//! so `hamilton_rhs` and `grad_h` cannot disagree.

use crate::error::Result;
use crate::phase::{Chart, PhaseState};
use crate::potentials::{eval_potential, grad_potential, SystemSpec};

/// Partials of a scalar with respect to `(q1, q2, p1, p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGradient {
    pub dq1: f64,
    pub dq2: f64,
    pub dp1: f64,
    pub dp2: f64,
}

impl PhaseGradient {
    pub fn as_array(&self) -> [f64; 4] {
        [self.dq1, self.dq2, self.dp1, self.dp2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { dq1: a[0], dq2: a[1], dp1: a[2], dp2: a[3] }
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_array(self.as_array().map(|v| v * factor))
    }
}

/// Total energy `T + V` at `s`.
pub fn eval_h(spec: &SystemSpec, s: &PhaseState) -> Result<f64> {
    Ok(s.kinetic_energy() + eval_potential(spec, s)?)
}

/// Analytic 4-gradient of [`eval_h`].
pub fn grad_h(spec: &SystemSpec, s: &PhaseState) -> Result<PhaseGradient> {
    let (vq1, vq2) = grad_potential(spec, s)?;
    match s.chart {
        Chart::Cartesian => Ok(PhaseGradient {
            dq1: vq1,
            dq2: vq2,
            dp1: s.p1,
            dp2: s.p2,
        }),
        Chart::Polar => {
            let r = s.q1;
            Ok(PhaseGradient {
                // d/dr of p_phi^2/(2 r^2) is the centrifugal term
                dq1: vq1 - s.p2 * s.p2 / (r * r * r),
                dq2: vq2,
                dp1: s.p1,
                dp2: s.p2 / (r * r),
            })
        }
    }
}

/// Right-hand side of Hamilton's equations, `(q1., q2., p1., p2.)`.
///
/// Computed as the symplectic pairing `J grad H` on the same gradient code
/// path: `q. = dH/dp`, `p. = -dH/dq`.
pub fn hamilton_rhs(spec: &SystemSpec, s: &PhaseState) -> Result<[f64; 4]> {
    let g = grad_h(spec, s)?;
    Ok([g.dp1, g.dp2, -g.dq1, -g.dq2])
}
