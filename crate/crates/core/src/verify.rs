//! The claim-checking engine: drift reports, numerical Poisson brackets,
//! phase-rotation residuals, functional-independence rank tests, and the
//! algebraic identity suite.
//!
//! All residuals are *normalized* (invariant magnitudes span many orders of
//! magnitude across parameter space), and every random draw is seeded so a
//! report is reproducible byte for byte.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{CoreError, Result};
use crate::hamiltonians::grad_h;
use crate::invariants::{eval_mr_nphi, rotation_rate_c, InvariantKind, InvariantSpec};
use crate::phase::PhaseState;
use crate::potentials::{eval_fk, eval_gk, eval_potential, map_pw_to_ck, map_ttw_to_ak, SystemSpec};
use crate::rational::RationalK;
use crate::sampling::{rng_from_seed, sample_regular_point, standard_k_values};
use rand::Rng;

/// Absolute floor in the relative-drift denominator, for invariants whose
/// initial value sits at zero.
pub const DRIFT_EPS_ABS: f64 = 1e-10;
/// Regularizer in bracket and phase-rotation denominators.
pub const RESIDUAL_EPS: f64 = 1e-12;
/// Singular values below `RANK_THRESHOLD * sigma_max` do not count towards
/// the numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// A tracked complex factor whose magnitude never exceeds this is treated as
/// the zero function by the phase-rotation check (e.g. M on a circular
/// orbit); its residual is exactly zero rather than noise over noise.
pub const ZERO_TRACK_BAND: f64 = 1e-8;

/// Relative drift of one tracked invariant along a trajectory:
/// `max_t |I(t) - I(0)| / max(|I(0)|, 1e-10)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DriftStats {
    pub kind: InvariantKind,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub samples: usize,
}

pub fn drift_report(traj: &Trajectory) -> Result<Vec<DriftStats>> {
    let mut out = Vec::with_capacity(traj.tracks.len());
    for (kind, values) in &traj.tracks {
        if values.is_empty() {
            return Err(CoreError::EmptyTrack);
        }
        if values.len() < 2 {
            return Err(CoreError::TooFewSamples { needed: 2, got: values.len() });
        }
        let i0 = values[0];
        let denom = i0.abs().max(DRIFT_EPS_ABS);
        let mut max_rel = 0.0f64;
        let mut sum = 0.0f64;
        for v in values {
            let rel = (v - i0).abs() / denom;
            max_rel = max_rel.max(rel);
            sum += rel;
        }
        out.push(DriftStats {
            kind: *kind,
            max_rel,
            mean_rel: sum / values.len() as f64,
            samples: values.len(),
        });
    }
    Ok(out)
}

/// Normalized Poisson-bracket residual of an invariant against its
/// Hamiltonian over a point set:
/// `|{I, H}| / (||grad I|| ||grad H|| + eps)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketStats {
    pub kind: InvariantKind,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub points_used: usize,
    pub points_skipped: usize,
}

pub fn bracket_residual(inv: &InvariantSpec, points: &[PhaseState]) -> Result<BracketStats> {
    let mut max_residual = 0.0f64;
    let mut sum = 0.0f64;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for p in points {
        let (gi, gh) = match (inv.gradient(p), grad_h(inv.system(), p)) {
            (Ok(a), Ok(b)) => (a, b),
            // singular point: skipped and counted
            _ => {
                skipped += 1;
                continue;
            }
        };
        let bracket = gi.dq1 * gh.dp1 - gi.dp1 * gh.dq1 + gi.dq2 * gh.dp2 - gi.dp2 * gh.dq2;
        let residual = bracket.abs() / (gi.norm() * gh.norm() + RESIDUAL_EPS);
        max_residual = max_residual.max(residual);
        sum += residual;
        used += 1;
    }
    if used == 0 {
        return Err(CoreError::EmptyTrack);
    }
    Ok(BracketStats {
        kind: inv.kind(),
        max_residual,
        mean_residual: sum / used as f64,
        points_used: used,
        points_skipped: skipped,
    })
}

/// Which complex factor a phase-rotation check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationTarget {
    M,
    N,
}

impl std::fmt::Display for RotationTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RotationTarget::M => f.write_str("M"),
            RotationTarget::N => f.write_str("N"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationStats {
    pub target: RotationTarget,
    pub max_residual: f64,
    pub samples: usize,
    /// True when the factor was numerically the zero function along the run.
    pub degenerate: bool,
}

/// Check the phase-rotation law `dZ/dt = i c lambda Z` along a trajectory
/// sampled at a uniform interval (`c = 2` oscillator / `1` Kepler for M,
/// `c = k` for N).
///
/// The derivative is a central difference of the sampled factor; the
/// residual at each interior sample is
/// `|dZ/dt - i c lambda Z| / (|lambda| |Z| + eps)`.
pub fn phase_rotation_check(
    system: &SystemSpec,
    traj: &Trajectory,
    target: RotationTarget,
) -> Result<RotationStats> {
    let c = match target {
        RotationTarget::M => rotation_rate_c(system).ok_or(CoreError::Inapplicable {
            kind: "Mr",
            family: system.family_name(),
        })?,
        RotationTarget::N => system
            .k()
            .ok_or(CoreError::Inapplicable {
                kind: "Nphi",
                family: system.family_name(),
            })?
            .as_f64(),
    };
    if traj.samples.len() < 3 {
        return Err(CoreError::TooFewSamples { needed: 3, got: traj.samples.len() });
    }

    let mut factors = Vec::with_capacity(traj.samples.len());
    for (_, s) in &traj.samples {
        let (m, n, lambda) = eval_mr_nphi(system, s)?;
        let z = match target {
            RotationTarget::M => m,
            RotationTarget::N => n,
        };
        factors.push((z, lambda));
    }

    let peak = factors.iter().map(|(z, _)| z.norm()).fold(0.0f64, f64::max);
    if peak <= ZERO_TRACK_BAND {
        return Ok(RotationStats {
            target,
            max_residual: 0.0,
            samples: traj.samples.len(),
            degenerate: true,
        });
    }

    let mut max_residual = 0.0f64;
    for i in 1..factors.len() - 1 {
        let dt = traj.samples[i + 1].0 - traj.samples[i - 1].0;
        let dz = (factors[i + 1].0 - factors[i - 1].0) / dt;
        let (z, lambda) = factors[i];
        let expected = crate::complex::ComplexValue::new(0.0, c * lambda) * z;
        let residual = (dz - expected).norm() / (lambda.abs() * z.norm() + RESIDUAL_EPS);
        max_residual = max_residual.max(residual);
    }
    Ok(RotationStats {
        target,
        max_residual,
        samples: traj.samples.len(),
        degenerate: false,
    })
}

/// Numerical rank of the gradient matrix of a set of invariants at a point,
/// together with the singular values (descending) the decision was made on.
///
/// Rows are normalized to unit length first (row space, and hence rank, is
/// unchanged): gradient norms span many orders of magnitude across the
/// composite constants, and a raw threshold of `1e-8 * sigma_max` would be
/// dominated by the largest row alone.
pub fn independence_rank(
    invs: &[InvariantSpec],
    point: &PhaseState,
) -> Result<(usize, Vec<f64>)> {
    let mut rows = Vec::with_capacity(invs.len());
    for inv in invs {
        let g = inv.gradient(point)?;
        let norm = g.norm();
        if norm > 0.0 {
            rows.push(g.as_array().map(|v| v / norm));
        } else {
            rows.push([0.0; 4]);
        }
    }
    let m = DMatrix::from_fn(rows.len(), 4, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > RANK_THRESHOLD * smax).count();
    Ok((rank, sv))
}

/// The algebraic identities checked by `identity_suite`, labeled (a)-(f).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// (a) the two-angle barrier identity:
    /// `F_2k(phi; 2(a+b), 2(b-a)) = a/cos^2(k phi) + b/sin^2(k phi)`.
    AngularReparam,
    /// (b) `Vak` at `2k` with mapped coefficients equals the TTW potential at `k`.
    VakTtw,
    /// (c) `Vck` at `2k` equals the Post-Winternitz potential at `k`.
    VckPw,
    /// (d) the Cartesian closed forms of `F_k` for k = 1, 2, 3.
    FkCartesian,
    /// (e) `G_k(phi) = F_k(phi - pi/(2k))`: the swapped barrier is a rotation.
    GkRotation,
    /// (f) for `VbN(1,2)`: span{grad H, grad Ex, grad Im Cxy} equals
    /// span{grad H, grad Ex, grad I3}, both of rank 3 (rank test, not algebra).
    Vb12Span,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::AngularReparam,
        Identity::VakTtw,
        Identity::VckPw,
        Identity::FkCartesian,
        Identity::GkRotation,
        Identity::Vb12Span,
    ];

    pub fn letter(&self) -> char {
        match self {
            Identity::AngularReparam => 'a',
            Identity::VakTtw => 'b',
            Identity::VckPw => 'c',
            Identity::FkCartesian => 'd',
            Identity::GkRotation => 'e',
            Identity::Vb12Span => 'f',
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Identity::AngularReparam => "angular_reparam",
            Identity::VakTtw => "vak_ttw",
            Identity::VckPw => "vck_pw",
            Identity::FkCartesian => "fk_cartesian",
            Identity::GkRotation => "gk_rotation",
            Identity::Vb12Span => "vb12_span",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityOutcome {
    pub letter: char,
    pub name: String,
    pub points: usize,
    /// Max relative discrepancy for (a)-(e); absent for the rank identity (f).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rel_discrepancy: Option<f64>,
    /// Fraction of points with the expected rank pattern, identity (f) only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_agreement: Option<f64>,
    pub pass: bool,
}

/// Tolerances used by [`identity_suite`]: (a)-(e) are exact identities and
/// must agree to 1e-11 relative; (f) must hold at 95% of generic points.
pub const IDENTITY_TOL: f64 = 1e-11;
pub const SPAN_AGREEMENT: f64 = 0.95;

fn rel_disc(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

/// Reference TTW / PW barrier, evaluated directly from `(alpha, beta, k)` —
/// an independent route from `eval_fk`.
fn barrier_reference(alpha: f64, beta: f64, kf: f64, phi: f64) -> f64 {
    alpha / (kf * phi).cos().powi(2) + beta / (kf * phi).sin().powi(2)
}

/// Run the named identities at `samples` seeded random points each.
/// Singular draws are resampled, never skipped silently.
pub fn identity_suite(ids: &[Identity], samples: usize, seed: u64) -> Vec<IdentityOutcome> {
    let mut rng = rng_from_seed(seed);
    let ks = standard_k_values();
    ids.iter()
        .map(|id| match id {
            Identity::AngularReparam => {
                let mut max = 0.0f64;
                for i in 0..samples {
                    let k = ks[i % ks.len()];
                    let kf = k.as_f64();
                    let (alpha, beta) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                    let phi = loop {
                        let phi: f64 = rng.gen_range(0.05..3.0);
                        if (kf * phi).sin().abs() > 0.1
                            && (kf * phi).cos().abs() > 0.1
                            && (2.0 * kf * phi).sin().abs() > 0.1
                        {
                            break phi;
                        }
                    };
                    let (ka, kb, k2) = map_ttw_to_ak(alpha, beta, k);
                    let lhs = eval_fk(k2, ka, kb, phi).expect("resampled away from poles");
                    let rhs = barrier_reference(alpha, beta, kf, phi);
                    max = max.max(rel_disc(lhs, rhs));
                }
                IdentityOutcome {
                    letter: id.letter(),
                    name: id.name().into(),
                    points: samples,
                    max_rel_discrepancy: Some(max),
                    rank_agreement: None,
                    pass: max < IDENTITY_TOL,
                }
            }
            Identity::VakTtw | Identity::VckPw => {
                let mut max = 0.0f64;
                for i in 0..samples {
                    let k = ks[i % ks.len()];
                    let kf = k.as_f64();
                    let (alpha, beta) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                    let (r, phi) = loop {
                        let r: f64 = rng.gen_range(0.3..3.0);
                        let phi: f64 = rng.gen_range(0.05..3.0);
                        if (kf * phi).sin().abs() > 0.1
                            && (kf * phi).cos().abs() > 0.1
                            && (2.0 * kf * phi).sin().abs() > 0.1
                        {
                            break (r, phi);
                        }
                    };
                    let s = PhaseState::polar(r, phi, 0.0, 0.0).expect("finite");
                    let (lhs, radial) = if *id == Identity::VakTtw {
                        let omega0 = rng.gen_range(0.5..1.5);
                        let (ka, kb, k2) = map_ttw_to_ak(alpha, beta, k);
                        let spec = SystemSpec::Vak { omega0, k: k2, ka, kb };
                        (
                            eval_potential(&spec, &s).expect("regular"),
                            0.5 * omega0 * omega0 * r * r,
                        )
                    } else {
                        let g = rng.gen_range(0.5..1.5);
                        let (ka, kb, k2) = map_pw_to_ck(alpha, beta, k);
                        let spec = SystemSpec::Vck { g, k: k2, ka, kb };
                        (eval_potential(&spec, &s).expect("regular"), -g / r)
                    };
                    let rhs = radial + barrier_reference(alpha, beta, kf, phi) / (2.0 * r * r);
                    max = max.max(rel_disc(lhs, rhs));
                }
                IdentityOutcome {
                    letter: id.letter(),
                    name: id.name().into(),
                    points: samples,
                    max_rel_discrepancy: Some(max),
                    rank_agreement: None,
                    pass: max < IDENTITY_TOL,
                }
            }
            Identity::FkCartesian => {
                let mut max = 0.0f64;
                for i in 0..samples {
                    let kk = 1 + (i % 3) as u32;
                    let k = RationalK::integer(kk).unwrap();
                    let (ka, kb) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                    let (x, y) = loop {
                        let x: f64 = rng.gen_range(0.3..3.0);
                        let y: f64 = rng.gen_range(0.3..3.0);
                        let phi = y.atan2(x);
                        if (k.as_f64() * phi).sin().abs() > 0.1
                            && (kk != 3 || (3.0 * x * x - y * y).abs() > 0.1)
                        {
                            break (x, y);
                        }
                    };
                    let r2 = x * x + y * y;
                    let phi = y.atan2(x);
                    let lhs = eval_fk(k, ka, kb, phi).expect("resampled") / r2;
                    let rhs = match kk {
                        1 => ka / (y * y) + kb * x / (y * y * r2.sqrt()),
                        2 => (ka - kb) / (4.0 * x * x) + (ka + kb) / (4.0 * y * y),
                        3 => {
                            (ka * r2 * r2 + kb * (x * x - 3.0 * y * y) * x * r2.sqrt())
                                / ((3.0 * x * x - y * y).powi(2) * y * y)
                        }
                        _ => unreachable!(),
                    };
                    max = max.max(rel_disc(lhs, rhs));
                }
                IdentityOutcome {
                    letter: id.letter(),
                    name: id.name().into(),
                    points: samples,
                    max_rel_discrepancy: Some(max),
                    rank_agreement: None,
                    pass: max < IDENTITY_TOL,
                }
            }
            Identity::GkRotation => {
                let mut max = 0.0f64;
                for i in 0..samples {
                    let k = ks[i % ks.len()];
                    let kf = k.as_f64();
                    let shift = std::f64::consts::PI / (2.0 * kf);
                    let (ka, kb) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                    let phi = loop {
                        let phi: f64 = rng.gen_range(-1.5..1.5);
                        if (kf * phi).cos().abs() > 0.1 && (kf * (phi - shift)).sin().abs() > 0.1 {
                            break phi;
                        }
                    };
                    let lhs = eval_gk(k, ka, kb, phi).expect("resampled");
                    let rhs = eval_fk(k, ka, kb, phi - shift).expect("resampled");
                    max = max.max(rel_disc(lhs, rhs));
                }
                IdentityOutcome {
                    letter: id.letter(),
                    name: id.name().into(),
                    points: samples,
                    max_rel_discrepancy: Some(max),
                    rank_agreement: None,
                    pass: max < IDENTITY_TOL,
                }
            }
            Identity::Vb12Span => {
                // rank-span equality at generic points; 100 points regardless
                // of the sample budget (each point costs four FD gradients)
                let points = samples.min(100).max(10);
                let spec = SystemSpec::VbN {
                    n_x: 1,
                    n_y: 2,
                    omega0: rng.gen_range(0.7..1.3),
                    k1: rng.gen_range(0.2..0.7),
                    k2: rng.gen_range(0.2..0.7),
                };
                let h = InvariantSpec::new(InvariantKind::H, spec.clone()).unwrap();
                let ex = InvariantSpec::new(InvariantKind::Ex, spec.clone()).unwrap();
                let imc = InvariantSpec::new(InvariantKind::ImCxy, spec.clone()).unwrap();
                let i3 = InvariantSpec::new(InvariantKind::I3_12, spec.clone()).unwrap();
                let mut agree = 0usize;
                for _ in 0..points {
                    let p = sample_regular_point(&spec, &mut rng);
                    let set_a = [h.clone(), ex.clone(), imc.clone()];
                    let set_b = [h.clone(), ex.clone(), i3.clone()];
                    let all = [h.clone(), ex.clone(), imc.clone(), i3.clone()];
                    let ra = independence_rank(&set_a, &p).map(|(r, _)| r);
                    let rb = independence_rank(&set_b, &p).map(|(r, _)| r);
                    let ru = independence_rank(&all, &p).map(|(r, _)| r);
                    if let (Ok(3), Ok(3), Ok(3)) = (ra, rb, ru) {
                        agree += 1;
                    }
                }
                let fraction = agree as f64 / points as f64;
                IdentityOutcome {
                    letter: id.letter(),
                    name: id.name().into(),
                    points,
                    max_rel_discrepancy: None,
                    rank_agreement: Some(fraction),
                    pass: fraction >= SPAN_AGREEMENT,
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, IntegratorOptions, Termination};
    use crate::sampling::sample_regular_points;
    use approx::assert_relative_eq;

    fn k(p: u32, q: u32) -> RationalK {
        RationalK::new(p, q).unwrap()
    }

    #[test]
    fn drift_of_constant_track_is_zero() {
        let traj = Trajectory {
            samples: vec![
                (0.0, PhaseState::cartesian(1.0, 1.0, 0.0, 0.0).unwrap()),
                (1.0, PhaseState::cartesian(1.0, 1.0, 0.0, 0.0).unwrap()),
            ],
            tracks: vec![(InvariantKind::H, vec![2.5, 2.5, 2.5])],
            termination: Termination::Completed,
        };
        let report = drift_report(&traj).unwrap();
        assert_eq!(report[0].max_rel, 0.0);
    }

    #[test]
    fn drift_of_empty_track_is_an_error() {
        let traj = Trajectory {
            samples: vec![],
            tracks: vec![(InvariantKind::H, vec![])],
            termination: Termination::Completed,
        };
        assert!(matches!(drift_report(&traj), Err(CoreError::EmptyTrack)));
    }

    #[test]
    fn bracket_of_h_with_itself_vanishes() {
        let sys = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 };
        let inv = InvariantSpec::new(InvariantKind::H, sys.clone()).unwrap();
        let pts = sample_regular_points(&sys, 50, 3);
        let stats = bracket_residual(&inv, &pts).unwrap();
        assert_eq!(stats.max_residual, 0.0);
    }

    #[test]
    fn j2_bracket_small_on_random_points() {
        let sys = SystemSpec::Vak { omega0: 1.0, k: k(3, 2), ka: 0.8, kb: 0.3 };
        let inv = InvariantSpec::new(InvariantKind::J2, sys.clone()).unwrap();
        let pts = sample_regular_points(&sys, 1000, 17);
        let stats = bracket_residual(&inv, &pts).unwrap();
        assert!(stats.max_residual < 1e-6, "{}", stats.max_residual);
    }

    #[test]
    fn imkk_bracket_small_with_fd_gradients() {
        let sys = SystemSpec::Vck { g: 1.0, k: k(2, 1), ka: 0.25, kb: 0.1 };
        let inv = InvariantSpec::new(InvariantKind::ImKk, sys.clone()).unwrap();
        let pts = sample_regular_points(&sys, 1000, 19);
        let stats = bracket_residual(&inv, &pts).unwrap();
        assert!(stats.max_residual < 1e-5, "{}", stats.max_residual);
    }

    #[test]
    fn rank_results() {
        let sys = SystemSpec::Vak { omega0: 1.0, k: k(2, 1), ka: 0.6, kb: 0.2 };
        let pts = sample_regular_points(&sys, 100, 23);
        let h = InvariantSpec::new(InvariantKind::H, sys.clone()).unwrap();
        let j2 = InvariantSpec::new(InvariantKind::J2, sys.clone()).unwrap();
        let j1 = InvariantSpec::new(InvariantKind::J1, sys.clone()).unwrap();
        let imk = InvariantSpec::new(InvariantKind::ImKk, sys.clone()).unwrap();

        let mut ok2 = 0;
        let mut ok3 = 0;
        for p in &pts {
            if independence_rank(&[h.clone(), j2.clone()], p).unwrap().0 == 2 {
                ok2 += 1;
            }
            if independence_rank(&[h.clone(), j2.clone(), imk.clone()], p).unwrap().0 == 3 {
                ok3 += 1;
            }
            // H and 2H are proportional
            assert_eq!(independence_rank(&[h.clone(), j1.clone()], p).unwrap().0, 1);
        }
        assert!(ok2 >= 95, "rank-2 control at {ok2}/100");
        assert!(ok3 >= 95, "superintegrable rank 3 at {ok3}/100");
    }

    #[test]
    fn phase_rotation_zero_function_is_degenerate() {
        let sys = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
        let s0 = PhaseState::polar(1.0, 0.4, 0.0, 1.0).unwrap();
        let opts = IntegratorOptions {
            t_end: 2.0,
            sample_interval: 1e-3,
            ..Default::default()
        };
        let traj = integrate(&sys, &s0, &opts, &[]).unwrap();
        let stats = phase_rotation_check(&sys, &traj, RotationTarget::M).unwrap();
        assert!(stats.degenerate);
        assert_eq!(stats.max_residual, 0.0);
    }

    #[test]
    fn identity_suite_all_pass() {
        for outcome in identity_suite(&Identity::ALL, 200, 7) {
            assert!(outcome.pass, "{}: {:?}", outcome.name, outcome);
        }
    }

    #[test]
    fn identity_e_half_k_rotation_angle_is_pi() {
        // k = 1/2 rotates by pi/(2k) = pi
        let lhs = eval_gk(k(1, 2), 0.7, 0.4, 0.9).unwrap();
        let rhs = eval_fk(k(1, 2), 0.7, 0.4, 0.9 - std::f64::consts::PI).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }
}
