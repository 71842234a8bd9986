//! The potential families and their closed-form gradients.
//!
//! Two Cartesian-separable oscillator families
//!
//! ```text
//! VaN: V = (1/2) w0^2 (nx^2 x^2 + ny^2 y^2) + k1/(2 x^2) + k2/(2 y^2)
//! VbN: V = (1/2) w0^2 (nx^2 x^2 + ny^2 y^2) + k1/(2 x^2) + k2 y
//! ```
//!
//! and two polar-separable families built on the angular barrier
//!
//! ```text
//! F_k(phi) = (ka + kb cos(k phi)) / sin^2(k phi)
//!
//! Vak:    V = (1/2) w0^2 r^2 + F_k(phi)/(2 r^2)        (deformed oscillator)
//! Vck:    V = -g/r          + F_k(phi)/(2 r^2)         (deformed Kepler)
//! VckRot: V = -g/r          + G_k(phi)/(2 r^2)
//! ```
//!
//! where `G_k` swaps cos and sin in `F_k`; it is the same potential rotated
//! by `pi/(2k)`: `G_k(phi) = F_k(phi - pi/(2k))`.
//!
//! With `ka = 2(alpha + beta)`, `kb = 2(beta - alpha)` and `k` doubled, `F_k`
//! reproduces the `alpha/cos^2(k phi) + beta/sin^2(k phi)` barrier, so `Vak`
//! covers the TTW oscillator and `Vck` the Post-Winternitz Kepler deformation.
//! All quantities are dimensionless with unit mass.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::phase::{Chart, PhaseState};
use crate::rational::RationalK;

/// Half-width of the exclusion band around every singular set
/// (`|sin(k phi)|`, `|cos(k phi)|`, `|x|`, `|y|`, `r`). Evaluation inside the
/// band is an error, not a huge number.
pub const SINGULARITY_BAND: f64 = 1e-10;

/// One potential family together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum SystemSpec {
    /// Oscillator with integer frequency ratio and two inverse-square barriers;
    /// separable in Cartesian coordinates.
    VaN {
        n_x: u32,
        n_y: u32,
        omega0: f64,
        k1: f64,
        k2: f64,
    },
    /// Oscillator with an inverse-square barrier in x and a linear term in y;
    /// separable in Cartesian coordinates.
    VbN {
        n_x: u32,
        n_y: u32,
        omega0: f64,
        k1: f64,
        k2: f64,
    },
    /// k-deformed radial oscillator with angular barrier `F_k`; separable in
    /// polar coordinates.
    Vak {
        omega0: f64,
        k: RationalK,
        ka: f64,
        kb: f64,
    },
    /// k-deformed Kepler potential `-g/r` with angular barrier `F_k`.
    Vck {
        g: f64,
        k: RationalK,
        ka: f64,
        kb: f64,
    },
    /// `Vck` with the angular barrier rotated by `pi/(2k)` (cos/sin swapped).
    VckRot {
        g: f64,
        k: RationalK,
        ka: f64,
        kb: f64,
    },
}

impl SystemSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            SystemSpec::VaN { .. } => "VaN",
            SystemSpec::VbN { .. } => "VbN",
            SystemSpec::Vak { .. } => "Vak",
            SystemSpec::Vck { .. } => "Vck",
            SystemSpec::VckRot { .. } => "VckRot",
        }
    }

    /// Chart the family is naturally expressed (and integrated) in.
    pub fn chart(&self) -> Chart {
        match self {
            SystemSpec::VaN { .. } | SystemSpec::VbN { .. } => Chart::Cartesian,
            _ => Chart::Polar,
        }
    }

    /// Deformation parameter of the polar families.
    pub fn k(&self) -> Option<RationalK> {
        match self {
            SystemSpec::Vak { k, .. } | SystemSpec::Vck { k, .. } | SystemSpec::VckRot { k, .. } => {
                Some(*k)
            }
            _ => None,
        }
    }

    /// Angular barrier coefficients `(ka, kb)` of the polar families.
    pub fn angular_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            SystemSpec::Vak { ka, kb, .. }
            | SystemSpec::Vck { ka, kb, .. }
            | SystemSpec::VckRot { ka, kb, .. } => Some((*ka, *kb)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CoreError::BadParameter(format!("{name} must be finite")))
            }
        };
        match *self {
            SystemSpec::VaN { n_x, n_y, omega0, k1, k2 }
            | SystemSpec::VbN { n_x, n_y, omega0, k1, k2 } => {
                if n_x < 1 || n_y < 1 {
                    return Err(CoreError::BadParameter("n_x and n_y must be >= 1".into()));
                }
                if !(omega0 > 0.0 && omega0.is_finite()) {
                    return Err(CoreError::BadParameter(format!(
                        "omega0 must be > 0, got {omega0}"
                    )));
                }
                finite(k1, "k1")?;
                finite(k2, "k2")
            }
            SystemSpec::Vak { omega0, ka, kb, .. } => {
                if !(omega0 > 0.0 && omega0.is_finite()) {
                    return Err(CoreError::BadParameter(format!(
                        "omega0 must be > 0, got {omega0}"
                    )));
                }
                finite(ka, "ka")?;
                finite(kb, "kb")
            }
            SystemSpec::Vck { g, ka, kb, .. } | SystemSpec::VckRot { g, ka, kb, .. } => {
                finite(g, "g")?;
                finite(ka, "ka")?;
                finite(kb, "kb")
            }
        }
    }
}

fn guard(value: f64, what: &'static str) -> Result<f64> {
    if value.abs() < SINGULARITY_BAND {
        Err(CoreError::NearSingularity {
            what,
            band: SINGULARITY_BAND,
        })
    } else {
        Ok(value)
    }
}

/// Angular barrier `F_k(phi) = ka/sin^2(k phi) + kb cos(k phi)/sin^2(k phi)`.
pub fn eval_fk(k: RationalK, ka: f64, kb: f64, phi: f64) -> Result<f64> {
    let (s, c) = (k.as_f64() * phi).sin_cos();
    let s = guard(s, "sin(k phi)")?;
    Ok((ka + kb * c) / (s * s))
}

/// `G_k(phi) = ka/cos^2(k phi) + kb sin(k phi)/cos^2(k phi)`, i.e. `F_k`
/// rotated by `pi/(2k)`.
pub fn eval_gk(k: RationalK, ka: f64, kb: f64, phi: f64) -> Result<f64> {
    let (s, c) = (k.as_f64() * phi).sin_cos();
    let c = guard(c, "cos(k phi)")?;
    Ok((ka + kb * s) / (c * c))
}

/// `dF_k/dphi = -k (2 ka cos(k phi) + kb (1 + cos^2(k phi))) / sin^3(k phi)`.
pub fn fk_dphi(k: RationalK, ka: f64, kb: f64, phi: f64) -> Result<f64> {
    let kf = k.as_f64();
    let (s, c) = (kf * phi).sin_cos();
    let s = guard(s, "sin(k phi)")?;
    Ok(-kf * (2.0 * ka * c + kb * (1.0 + c * c)) / (s * s * s))
}

/// `dG_k/dphi = k (2 ka sin(k phi) + kb (1 + sin^2(k phi))) / cos^3(k phi)`.
pub fn gk_dphi(k: RationalK, ka: f64, kb: f64, phi: f64) -> Result<f64> {
    let kf = k.as_f64();
    let (s, c) = (kf * phi).sin_cos();
    let c = guard(c, "cos(k phi)")?;
    Ok(kf * (2.0 * ka * s + kb * (1.0 + s * s)) / (c * c * c))
}

/// Angular barrier of a polar-family spec, zero when both coefficients vanish.
pub(crate) fn angular_barrier(spec: &SystemSpec, phi: f64) -> Result<f64> {
    match *spec {
        SystemSpec::Vak { k, ka, kb, .. } | SystemSpec::Vck { k, ka, kb, .. } => {
            if ka == 0.0 && kb == 0.0 {
                Ok(0.0)
            } else {
                eval_fk(k, ka, kb, phi)
            }
        }
        SystemSpec::VckRot { k, ka, kb, .. } => {
            if ka == 0.0 && kb == 0.0 {
                Ok(0.0)
            } else {
                eval_gk(k, ka, kb, phi)
            }
        }
        _ => unreachable!("angular barrier requested for a Cartesian family"),
    }
}

pub(crate) fn angular_barrier_dphi(spec: &SystemSpec, phi: f64) -> Result<f64> {
    match *spec {
        SystemSpec::Vak { k, ka, kb, .. } | SystemSpec::Vck { k, ka, kb, .. } => {
            if ka == 0.0 && kb == 0.0 {
                Ok(0.0)
            } else {
                fk_dphi(k, ka, kb, phi)
            }
        }
        SystemSpec::VckRot { k, ka, kb, .. } => {
            if ka == 0.0 && kb == 0.0 {
                Ok(0.0)
            } else {
                gk_dphi(k, ka, kb, phi)
            }
        }
        _ => unreachable!(),
    }
}

/// Potential energy at the position of `s` (momenta are ignored).
///
/// The state must be in the family's natural chart and away from the singular
/// sets of the active barrier terms.
pub fn eval_potential(spec: &SystemSpec, s: &PhaseState) -> Result<f64> {
    s.expect_chart(spec.chart())?;
    match *spec {
        SystemSpec::VaN { n_x, n_y, omega0, k1, k2 } => {
            let (x, y) = (s.q1, s.q2);
            let mut v = 0.5
                * omega0
                * omega0
                * (f64::from(n_x * n_x) * x * x + f64::from(n_y * n_y) * y * y);
            if k1 != 0.0 {
                let x = guard(x, "x")?;
                v += k1 / (2.0 * x * x);
            }
            if k2 != 0.0 {
                let y = guard(y, "y")?;
                v += k2 / (2.0 * y * y);
            }
            Ok(v)
        }
        SystemSpec::VbN { n_x, n_y, omega0, k1, k2 } => {
            let (x, y) = (s.q1, s.q2);
            let mut v = 0.5
                * omega0
                * omega0
                * (f64::from(n_x * n_x) * x * x + f64::from(n_y * n_y) * y * y)
                + k2 * y;
            if k1 != 0.0 {
                let x = guard(x, "x")?;
                v += k1 / (2.0 * x * x);
            }
            Ok(v)
        }
        SystemSpec::Vak { omega0, .. } => {
            let r = guard(s.q1, "r")?;
            Ok(0.5 * omega0 * omega0 * r * r + angular_barrier(spec, s.q2)? / (2.0 * r * r))
        }
        SystemSpec::Vck { g, .. } | SystemSpec::VckRot { g, .. } => {
            let r = guard(s.q1, "r")?;
            Ok(-g / r + angular_barrier(spec, s.q2)? / (2.0 * r * r))
        }
    }
}

/// Analytic gradient `(dV/dq1, dV/dq2)` of [`eval_potential`].
pub fn grad_potential(spec: &SystemSpec, s: &PhaseState) -> Result<(f64, f64)> {
    s.expect_chart(spec.chart())?;
    match *spec {
        SystemSpec::VaN { n_x, n_y, omega0, k1, k2 } => {
            let (x, y) = (s.q1, s.q2);
            let w2 = omega0 * omega0;
            let mut vx = w2 * f64::from(n_x * n_x) * x;
            let mut vy = w2 * f64::from(n_y * n_y) * y;
            if k1 != 0.0 {
                let x = guard(x, "x")?;
                vx -= k1 / (x * x * x);
            }
            if k2 != 0.0 {
                let y = guard(y, "y")?;
                vy -= k2 / (y * y * y);
            }
            Ok((vx, vy))
        }
        SystemSpec::VbN { n_x, n_y, omega0, k1, k2 } => {
            let (x, y) = (s.q1, s.q2);
            let w2 = omega0 * omega0;
            let mut vx = w2 * f64::from(n_x * n_x) * x;
            let vy = w2 * f64::from(n_y * n_y) * y + k2;
            if k1 != 0.0 {
                let x = guard(x, "x")?;
                vx -= k1 / (x * x * x);
            }
            Ok((vx, vy))
        }
        SystemSpec::Vak { omega0, .. } => {
            let r = guard(s.q1, "r")?;
            let f = angular_barrier(spec, s.q2)?;
            let df = angular_barrier_dphi(spec, s.q2)?;
            let dr = omega0 * omega0 * r - f / (r * r * r);
            Ok((dr, df / (2.0 * r * r)))
        }
        SystemSpec::Vck { g, .. } | SystemSpec::VckRot { g, .. } => {
            let r = guard(s.q1, "r")?;
            let f = angular_barrier(spec, s.q2)?;
            let df = angular_barrier_dphi(spec, s.q2)?;
            let dr = g / (r * r) - f / (r * r * r);
            Ok((dr, df / (2.0 * r * r)))
        }
    }
}

/// Map TTW barrier coefficients `(alpha, beta, k)` to the `F_k` form:
/// `(ka, kb, k') = (2(alpha+beta), 2(beta-alpha), 2k)`.
///
/// Evaluating `Vak` at `k'` with the returned coefficients reproduces the TTW
/// potential at `k` pointwise.
pub fn map_ttw_to_ak(alpha: f64, beta: f64, k: RationalK) -> (f64, f64, RationalK) {
    (2.0 * (alpha + beta), 2.0 * (beta - alpha), k.doubled())
}

/// Same coefficient map for the Kepler-related pair: `Vck` at `2k` equals the
/// Post-Winternitz potential at `k`.
pub fn map_pw_to_ck(alpha: f64, beta: f64, k: RationalK) -> (f64, f64, RationalK) {
    map_ttw_to_ak(alpha, beta, k)
}
