//! Constants of motion: the quadratic separation integrals, the complex
//! factor functions, and the composite higher-order constants built from
//! integer powers of them.
//!
//! For the Cartesian oscillator families the building blocks are
//!
//! ```text
//! A_x = p_x + i nx w0 x            B_x = A_x^2 + k1/x^2
//! A_y = p_y + i ny w0 y            B_y = A_y^2 + k2/y^2
//! ```
//!
//! with `dB_x/dt = 2 i nx w0 B_x`, so `B_xy = B_x^ny (B_y^*)^nx` is conserved.
//! The `VbN` family replaces `B_y` by `Atil_y = p_y + i(ny w0 y + k2/(ny w0))`
//! and conserves `C_xy = B_x^ny (Atil_y^*)^(2 nx)`.
//!
//! For the polar families the radial/angular factors are
//!
//! ```text
//! oscillator: M = (2/r) p_r sqrt(J2) + i (p_r^2 + w0^2 r^2 - J2/r^2)
//! Kepler:     M = p_r sqrt(J2)       + i (g - J2/r)
//! both:       N = (kb/2 + J2 cos(k phi)) + i sqrt(J2) p_phi sin(k phi)
//! ```
//!
//! with `J2 = p_phi^2 + F_k(phi)` and phase-rotation evolution
//! `dM/dt = i c lambda M` (c = 2 oscillator, c = 1 Kepler),
//! `dN/dt = i k lambda N`, `lambda = sqrt(J2)/r^2`. Clearing the denominator
//! of `k = p/q` gives the conserved products
//!
//! ```text
//! oscillator: K = M^p (N^*)^(2q)         Kepler: K = M^p (N^*)^q
//! ```
//!
//! which reduce to `M^k (N^*)^2` and `M^k N^*` for integer k. The rotated
//! Kepler family swaps cos/sin inside `N` (with `N_2 = -sqrt(J2) p_phi cos`),
//! matching its barrier `G_k`.
//!
//! `J2` (and everything built on it) is evaluated as a genuine phase-space
//! function, never frozen at t = 0, so Poisson brackets are well defined.
//! States with `J2 <= 0` are rejected rather than continued to complex
//! `sqrt(J2)`.

use serde::{Deserialize, Serialize};

use crate::complex::{complex_pow_int, ComplexValue};
use crate::error::{CoreError, Result};
use crate::hamiltonians::{grad_h, PhaseGradient};
use crate::phase::PhaseState;
use crate::potentials::{
    angular_barrier, angular_barrier_dphi, SystemSpec, SINGULARITY_BAND,
};

/// Which constant of motion to evaluate. `Re`/`Im` variants are the real and
/// imaginary parts of the complex composites; `Mr`/`Nphi` are the (non-conserved)
/// factor functions themselves, trackable for the phase-rotation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantKind {
    H,
    J1,
    J2,
    Ex,
    Ey,
    Bxx,
    Byy,
    ReBxy,
    ImBxy,
    ReCxy,
    ImCxy,
    #[serde(rename = "I3_12")]
    I3_12,
    ReKk,
    ImKk,
    ReMr,
    ImMr,
    ReNphi,
    ImNphi,
}

impl InvariantKind {
    pub const ALL: [InvariantKind; 18] = [
        InvariantKind::H,
        InvariantKind::J1,
        InvariantKind::J2,
        InvariantKind::Ex,
        InvariantKind::Ey,
        InvariantKind::Bxx,
        InvariantKind::Byy,
        InvariantKind::ReBxy,
        InvariantKind::ImBxy,
        InvariantKind::ReCxy,
        InvariantKind::ImCxy,
        InvariantKind::I3_12,
        InvariantKind::ReKk,
        InvariantKind::ImKk,
        InvariantKind::ReMr,
        InvariantKind::ImMr,
        InvariantKind::ReNphi,
        InvariantKind::ImNphi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InvariantKind::H => "H",
            InvariantKind::J1 => "J1",
            InvariantKind::J2 => "J2",
            InvariantKind::Ex => "Ex",
            InvariantKind::Ey => "Ey",
            InvariantKind::Bxx => "Bxx",
            InvariantKind::Byy => "Byy",
            InvariantKind::ReBxy => "ReBxy",
            InvariantKind::ImBxy => "ImBxy",
            InvariantKind::ReCxy => "ReCxy",
            InvariantKind::ImCxy => "ImCxy",
            InvariantKind::I3_12 => "I3_12",
            InvariantKind::ReKk => "ReKk",
            InvariantKind::ImKk => "ImKk",
            InvariantKind::ReMr => "ReMr",
            InvariantKind::ImMr => "ImMr",
            InvariantKind::ReNphi => "ReNphi",
            InvariantKind::ImNphi => "ImNphi",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Whether this invariant is defined for the given family.
    pub fn applies_to(&self, system: &SystemSpec) -> bool {
        use InvariantKind::*;
        let polar = matches!(
            system,
            SystemSpec::Vak { .. } | SystemSpec::Vck { .. } | SystemSpec::VckRot { .. }
        );
        match self {
            H => true,
            J1 | J2 | ReKk | ImKk | ReMr | ImMr | ReNphi | ImNphi => polar,
            Ex | Ey => matches!(system, SystemSpec::VaN { .. } | SystemSpec::VbN { .. }),
            Bxx | Byy | ReBxy | ImBxy => matches!(system, SystemSpec::VaN { .. }),
            ReCxy | ImCxy => matches!(system, SystemSpec::VbN { .. }),
            I3_12 => matches!(system, SystemSpec::VbN { n_x: 1, n_y: 2, .. }),
        }
    }

    /// True for the kinds whose gradient is finite-differenced rather than
    /// written in closed form.
    pub fn uses_fd_gradient(&self) -> bool {
        use InvariantKind::*;
        matches!(
            self,
            Bxx | Byy | ReBxy | ImBxy | ReCxy | ImCxy | ReKk | ImKk | ReMr | ImMr | ReNphi
                | ImNphi
        )
    }
}

impl std::fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An invariant bound to the system it is an invariant *of*.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSpec {
    kind: InvariantKind,
    system: SystemSpec,
}

impl InvariantSpec {
    pub fn new(kind: InvariantKind, system: SystemSpec) -> Result<Self> {
        if !kind.applies_to(&system) {
            return Err(CoreError::Inapplicable {
                kind: kind.name(),
                family: system.family_name(),
            });
        }
        Ok(Self { kind, system })
    }

    pub fn kind(&self) -> InvariantKind {
        self.kind
    }

    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn eval(&self, s: &PhaseState) -> Result<f64> {
        eval_invariant(self.kind, &self.system, s)
    }

    pub fn gradient(&self, s: &PhaseState) -> Result<PhaseGradient> {
        invariant_gradient(self.kind, &self.system, s)
    }
}

fn guard(value: f64, what: &'static str) -> Result<f64> {
    if value.abs() < SINGULARITY_BAND {
        Err(CoreError::NearSingularity { what, band: SINGULARITY_BAND })
    } else {
        Ok(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// `B_x` or `B_y` for the Cartesian oscillator families
/// (`B = A^2 + coupling/coord^2`, `A = p + i n w0 q`).
///
/// For `VbN` only the x-axis factor exists (the y barrier is linear).
pub fn eval_b_axis(system: &SystemSpec, s: &PhaseState, axis: Axis) -> Result<ComplexValue> {
    s.expect_chart(crate::phase::Chart::Cartesian)?;
    let (n, coupling, q, p) = match (system, axis) {
        (SystemSpec::VaN { n_x, k1, .. }, Axis::X) => (*n_x, *k1, s.q1, s.p1),
        (SystemSpec::VaN { n_y, k2, .. }, Axis::Y) => (*n_y, *k2, s.q2, s.p2),
        (SystemSpec::VbN { n_x, k1, .. }, Axis::X) => (*n_x, *k1, s.q1, s.p1),
        _ => {
            return Err(CoreError::Inapplicable {
                kind: "B_axis",
                family: system.family_name(),
            })
        }
    };
    let omega0 = match system {
        SystemSpec::VaN { omega0, .. } | SystemSpec::VbN { omega0, .. } => *omega0,
        _ => unreachable!(),
    };
    let a = ComplexValue::new(p, f64::from(n) * omega0 * q);
    let mut b = a * a;
    if coupling != 0.0 {
        let q = guard(q, "axis coordinate")?;
        b += coupling / (q * q);
    }
    Ok(b)
}

/// The composite oscillator constant `B_xy = B_x^ny (B_y^*)^nx` (VaN only).
pub fn eval_bij(system: &SystemSpec, s: &PhaseState) -> Result<ComplexValue> {
    let (n_x, n_y) = match system {
        SystemSpec::VaN { n_x, n_y, .. } => (*n_x, *n_y),
        _ => {
            return Err(CoreError::Inapplicable {
                kind: "Bxy",
                family: system.family_name(),
            })
        }
    };
    let bx = eval_b_axis(system, s, Axis::X)?;
    let by = eval_b_axis(system, s, Axis::Y)?;
    Ok(complex_pow_int(bx, n_y) * complex_pow_int(by.conj(), n_x))
}

/// The composite constant of the `VbN` family,
/// `C_xy = B_x^ny (Atil_y^*)^(2 nx)` with `Atil_y = p_y + i (ny w0 y + k2/(ny w0))`.
pub fn eval_cxy(system: &SystemSpec, s: &PhaseState) -> Result<ComplexValue> {
    let (n_x, n_y, omega0, k2) = match system {
        SystemSpec::VbN { n_x, n_y, omega0, k2, .. } => (*n_x, *n_y, *omega0, *k2),
        _ => {
            return Err(CoreError::Inapplicable {
                kind: "Cxy",
                family: system.family_name(),
            })
        }
    };
    let bx = eval_b_axis(system, s, Axis::X)?;
    let k2p = k2 / (f64::from(n_y) * omega0);
    let atil = ComplexValue::new(s.p2, f64::from(n_y) * omega0 * s.q2 + k2p);
    Ok(complex_pow_int(bx, n_y) * complex_pow_int(atil.conj(), 2 * n_x))
}

/// Quadratic constant of `VbN(1,2)` coming from its parabolic separability:
///
/// ```text
/// I3 = (x p_y - y p_x) p_x + w0^2 x^2 y - k1 y/x^2 + k2 x^2/2
/// ```
///
/// The `k2 x^2/2` term is required for dI3/dt = 0 when the linear coupling is
/// on (without it dI3/dt = -k2 x p_x); it is the image of the pure-quadratic
/// integral under the y-translation that absorbs the linear term.
pub fn eval_i3_12(system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    let (omega0, k1, k2) = match system {
        SystemSpec::VbN { n_x: 1, n_y: 2, omega0, k1, k2 } => (*omega0, *k1, *k2),
        _ => {
            return Err(CoreError::Inapplicable {
                kind: "I3_12",
                family: system.family_name(),
            })
        }
    };
    s.expect_chart(crate::phase::Chart::Cartesian)?;
    let (x, y, px, py) = (s.q1, s.q2, s.p1, s.p2);
    let mut v = (x * py - y * px) * px + omega0 * omega0 * x * x * y + 0.5 * k2 * x * x;
    if k1 != 0.0 {
        let x = guard(x, "x")?;
        v -= k1 * y / (x * x);
    }
    Ok(v)
}

/// One-dimensional separation energy along x (VaN and VbN share the form).
pub fn eval_ex(system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    let (n_x, omega0, k1) = match system {
        SystemSpec::VaN { n_x, omega0, k1, .. } | SystemSpec::VbN { n_x, omega0, k1, .. } => {
            (*n_x, *omega0, *k1)
        }
        _ => {
            return Err(CoreError::Inapplicable {
                kind: "Ex",
                family: system.family_name(),
            })
        }
    };
    s.expect_chart(crate::phase::Chart::Cartesian)?;
    let (x, px) = (s.q1, s.p1);
    let nw = f64::from(n_x) * omega0;
    let mut v = 0.5 * px * px + 0.5 * nw * nw * x * x;
    if k1 != 0.0 {
        let x = guard(x, "x")?;
        v += k1 / (2.0 * x * x);
    }
    Ok(v)
}

/// One-dimensional separation energy along y: inverse-square barrier for VaN,
/// linear term for VbN.
pub fn eval_ey(system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    s.expect_chart(crate::phase::Chart::Cartesian)?;
    let (y, py) = (s.q2, s.p2);
    match system {
        SystemSpec::VaN { n_y, omega0, k2, .. } => {
            let nw = f64::from(*n_y) * omega0;
            let mut v = 0.5 * py * py + 0.5 * nw * nw * y * y;
            if *k2 != 0.0 {
                let y = guard(y, "y")?;
                v += k2 / (2.0 * y * y);
            }
            Ok(v)
        }
        SystemSpec::VbN { n_y, omega0, k2, .. } => {
            let nw = f64::from(*n_y) * omega0;
            Ok(0.5 * py * py + 0.5 * nw * nw * y * y + k2 * y)
        }
        _ => Err(CoreError::Inapplicable {
            kind: "Ey",
            family: system.family_name(),
        }),
    }
}

/// Angular separation constant `J2 = p_phi^2 + F_k(phi)` (polar families;
/// `G_k` for the rotated one).
pub fn eval_j2(system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    s.expect_chart(crate::phase::Chart::Polar)?;
    match system {
        SystemSpec::Vak { .. } | SystemSpec::Vck { .. } | SystemSpec::VckRot { .. } => {
            Ok(s.p2 * s.p2 + angular_barrier(system, s.q2)?)
        }
        _ => Err(CoreError::Inapplicable {
            kind: "J2",
            family: system.family_name(),
        }),
    }
}

/// Radial separation constant; identically `2H` for both polar families.
pub fn eval_j1(system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    match system {
        SystemSpec::Vak { .. } | SystemSpec::Vck { .. } | SystemSpec::VckRot { .. } => {
            Ok(2.0 * crate::hamiltonians::eval_h(system, s)?)
        }
        _ => Err(CoreError::Inapplicable {
            kind: "J1",
            family: system.family_name(),
        }),
    }
}

/// The factor functions `(M, N, lambda)` of a polar family at `s`.
///
/// Requires `J2 > 0` at the state; the positive root of `sqrt(J2)` is taken
/// (the conjugate choice flips Im M and Im N consistently and conserves the
/// conjugate composite instead).
pub fn eval_mr_nphi(
    system: &SystemSpec,
    s: &PhaseState,
) -> Result<(ComplexValue, ComplexValue, f64)> {
    s.expect_chart(crate::phase::Chart::Polar)?;
    let (r, phi, pr, pphi) = (s.q1, s.q2, s.p1, s.p2);
    let j2 = eval_j2(system, s)?;
    if j2 <= 0.0 {
        return Err(CoreError::NonpositiveJ2(j2));
    }
    let sq = j2.sqrt();
    let r_g = guard(r, "r")?;
    let lambda = sq / (r_g * r_g);
    let (kf, kb) = match system {
        SystemSpec::Vak { k, kb, .. }
        | SystemSpec::Vck { k, kb, .. }
        | SystemSpec::VckRot { k, kb, .. } => (k.as_f64(), *kb),
        _ => unreachable!("eval_j2 already rejected non-polar families"),
    };
    let m = match system {
        SystemSpec::Vak { omega0, .. } => ComplexValue::new(
            (2.0 / r_g) * pr * sq,
            pr * pr + omega0 * omega0 * r_g * r_g - j2 / (r_g * r_g),
        ),
        SystemSpec::Vck { g, .. } | SystemSpec::VckRot { g, .. } => {
            ComplexValue::new(pr * sq, g - j2 / r_g)
        }
        _ => unreachable!(),
    };
    let (sin, cos) = (kf * phi).sin_cos();
    let n = match system {
        // cos/sin interchanged consistently with the rotated barrier G_k
        SystemSpec::VckRot { .. } => {
            ComplexValue::new(kb / 2.0 + j2 * sin, -sq * pphi * cos)
        }
        _ => ComplexValue::new(kb / 2.0 + j2 * cos, sq * pphi * sin),
    };
    Ok((m, n, lambda))
}

/// Phase-rotation rate multiplier of `M`: `dM/dt = i c lambda M` with `c = 2`
/// for the oscillator family and `c = 1` for the Kepler ones.
pub fn rotation_rate_c(system: &SystemSpec) -> Option<f64> {
    match system {
        SystemSpec::Vak { .. } => Some(2.0),
        SystemSpec::Vck { .. } | SystemSpec::VckRot { .. } => Some(1.0),
        _ => None,
    }
}

/// The composite higher-order constant `K_k` with cleared denominators:
/// `M^p (N^*)^(2q)` for the oscillator, `M^p (N^*)^q` for Kepler, `k = p/q`.
pub fn eval_kk(system: &SystemSpec, s: &PhaseState) -> Result<ComplexValue> {
    let (m, n, _) = eval_mr_nphi(system, s)?;
    let k = system.k().expect("polar family");
    let (p, q) = (k.numer(), k.denom());
    let n_exp = match system {
        SystemSpec::Vak { .. } => 2 * q,
        _ => q,
    };
    Ok(complex_pow_int(m, p) * complex_pow_int(n.conj(), n_exp))
}

/// Evaluate any invariant kind on any applicable system.
pub fn eval_invariant(kind: InvariantKind, system: &SystemSpec, s: &PhaseState) -> Result<f64> {
    use InvariantKind::*;
    match kind {
        H => crate::hamiltonians::eval_h(system, s),
        J1 => eval_j1(system, s),
        J2 => eval_j2(system, s),
        Ex => eval_ex(system, s),
        Ey => eval_ey(system, s),
        Bxx => match system {
            SystemSpec::VaN { n_x, .. } => {
                let b = eval_b_axis(system, s, Axis::X)?;
                Ok(b.norm_sqr().powi(*n_x as i32))
            }
            _ => Err(CoreError::Inapplicable { kind: "Bxx", family: system.family_name() }),
        },
        Byy => match system {
            SystemSpec::VaN { n_y, .. } => {
                let b = eval_b_axis(system, s, Axis::Y)?;
                Ok(b.norm_sqr().powi(*n_y as i32))
            }
            _ => Err(CoreError::Inapplicable { kind: "Byy", family: system.family_name() }),
        },
        ReBxy => Ok(eval_bij(system, s)?.re),
        ImBxy => Ok(eval_bij(system, s)?.im),
        ReCxy => Ok(eval_cxy(system, s)?.re),
        ImCxy => Ok(eval_cxy(system, s)?.im),
        I3_12 => eval_i3_12(system, s),
        ReKk => Ok(eval_kk(system, s)?.re),
        ImKk => Ok(eval_kk(system, s)?.im),
        ReMr => Ok(eval_mr_nphi(system, s)?.0.re),
        ImMr => Ok(eval_mr_nphi(system, s)?.0.im),
        ReNphi => Ok(eval_mr_nphi(system, s)?.1.re),
        ImNphi => Ok(eval_mr_nphi(system, s)?.1.im),
    }
}

/// Richardson-extrapolated central-difference 4-gradient; base step
/// `1e-4 * max(1, |component|)` halved once, so the truncation error is
/// O(h^4) while the rounding error stays ~1e-12 relative.
fn fd_gradient<F>(f: F, s: &PhaseState) -> Result<PhaseGradient>
where
    F: Fn(&PhaseState) -> Result<f64>,
{
    let arr = s.as_array();
    let mut g = [0.0; 4];
    for i in 0..4 {
        let h = 1e-4 * arr[i].abs().max(1.0);
        let diff = |hh: f64| -> Result<f64> {
            let mut ap = arr;
            let mut am = arr;
            ap[i] += hh;
            am[i] -= hh;
            Ok((f(&s.with_array(ap))? - f(&s.with_array(am))?) / (2.0 * hh))
        };
        let d_h = diff(h)?;
        let d_h2 = diff(h / 2.0)?;
        g[i] = (4.0 * d_h2 - d_h) / 3.0;
    }
    Ok(PhaseGradient::from_array(g))
}

/// 4-gradient of an invariant: closed-form for the quadratic kinds, Richardson
/// finite differences for the composite complex ones.
pub fn invariant_gradient(
    kind: InvariantKind,
    system: &SystemSpec,
    s: &PhaseState,
) -> Result<PhaseGradient> {
    use InvariantKind::*;
    match kind {
        H => grad_h(system, s),
        J1 => Ok(grad_h(system, s)?.scale(2.0)),
        J2 => {
            eval_j2(system, s)?; // applicability + singularity checks
            Ok(PhaseGradient {
                dq1: 0.0,
                dq2: angular_barrier_dphi(system, s.q2)?,
                dp1: 0.0,
                dp2: 2.0 * s.p2,
            })
        }
        Ex => {
            eval_ex(system, s)?;
            let (n_x, omega0, k1) = match system {
                SystemSpec::VaN { n_x, omega0, k1, .. }
                | SystemSpec::VbN { n_x, omega0, k1, .. } => (*n_x, *omega0, *k1),
                _ => unreachable!(),
            };
            let nw = f64::from(n_x) * omega0;
            let x = s.q1;
            let mut dx = nw * nw * x;
            if k1 != 0.0 {
                dx -= k1 / (x * x * x);
            }
            Ok(PhaseGradient { dq1: dx, dq2: 0.0, dp1: s.p1, dp2: 0.0 })
        }
        Ey => {
            eval_ey(system, s)?;
            let y = s.q2;
            let dy = match system {
                SystemSpec::VaN { n_y, omega0, k2, .. } => {
                    let nw = f64::from(*n_y) * omega0;
                    let mut d = nw * nw * y;
                    if *k2 != 0.0 {
                        d -= k2 / (y * y * y);
                    }
                    d
                }
                SystemSpec::VbN { n_y, omega0, k2, .. } => {
                    let nw = f64::from(*n_y) * omega0;
                    nw * nw * y + k2
                }
                _ => unreachable!(),
            };
            Ok(PhaseGradient { dq1: 0.0, dq2: dy, dp1: 0.0, dp2: s.p2 })
        }
        I3_12 => {
            eval_i3_12(system, s)?;
            let (omega0, k1, k2) = match system {
                SystemSpec::VbN { omega0, k1, k2, .. } => (*omega0, *k1, *k2),
                _ => unreachable!(),
            };
            let (x, y, px, py) = (s.q1, s.q2, s.p1, s.p2);
            let w2 = omega0 * omega0;
            Ok(PhaseGradient {
                dq1: px * py + 2.0 * w2 * x * y + 2.0 * k1 * y / (x * x * x) + k2 * x,
                dq2: -px * px + w2 * x * x - k1 / (x * x),
                dp1: x * py - 2.0 * y * px,
                dp2: x * px,
            })
        }
        _ => fd_gradient(|state| eval_invariant(kind, system, state), s),
    }
}
