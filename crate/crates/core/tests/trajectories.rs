//! Trajectory-level checks: closed-form motion oracles, invariant
//! conservation along long runs, phase-rotation laws, time reversal, and the
//! leapfrog cross-checks.

use superint_core::{
    drift_report, eval_h, eval_invariant, integrate, integrate_fixed_symplectic,
    phase_rotation_check, to_cartesian, dynamics::Trajectory, InvariantKind, IntegratorOptions,
    PhaseState, RationalK, RotationTarget, SystemSpec, Termination,
};

fn k(p: u32, q: u32) -> RationalK {
    RationalK::new(p, q).unwrap()
}

fn opts(t_end: f64, sample_interval: f64) -> IntegratorOptions {
    IntegratorOptions {
        t_end,
        sample_interval,
        ..Default::default()
    }
}

fn max_drift(traj: &Trajectory) -> f64 {
    drift_report(traj)
        .unwrap()
        .iter()
        .map(|d| d.max_rel)
        .fold(0.0, f64::max)
}

#[test]
fn free_motion_in_polar_chart_matches_closed_form() {
    // Vck with g = ka = kb = 0 is a free particle expressed in polar
    // coordinates; compare against the straight line x(t) = x0 + p t.
    let spec = SystemSpec::Vck { g: 0.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, 0.3, 0.5, 0.6).unwrap();
    let c0 = to_cartesian(&s0).unwrap();
    let traj = integrate(&spec, &s0, &opts(10.0, 0.1), &[InvariantKind::H]).unwrap();
    assert_eq!(traj.termination, Termination::Completed);

    for (t, s) in &traj.samples {
        let c = to_cartesian(s).unwrap();
        let expect = [
            c0.q1 + c0.p1 * t,
            c0.q2 + c0.p2 * t,
            c0.p1,
            c0.p2,
        ];
        for (v, e) in c.as_array().iter().zip(expect) {
            assert!((v - e).abs() < 1e-9, "t={t}: {v} vs {e}");
        }
    }
    assert!(max_drift(&traj) < 1e-10);
}

#[test]
fn circular_kepler_orbit_keeps_radius() {
    // g/r^2 = p_phi^2/r^3 at r = p_phi = g = 1
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, 0.0, 0.0, 1.0).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(10.0 * std::f64::consts::PI, 0.05),
        &[InvariantKind::H, InvariantKind::J2],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    for (_, s) in &traj.samples {
        assert!((s.q1 - 1.0).abs() < 1e-9, "r drifted to {}", s.q1);
    }
    // K vanishes identically on the circular orbit (M = 0): check it stays
    // below an absolute band rather than in the relative-drift metric.
    for (_, s) in &traj.samples {
        let re = eval_invariant(InvariantKind::ReKk, &spec, s).unwrap();
        let im = eval_invariant(InvariantKind::ImKk, &spec, s).unwrap();
        assert!(re.hypot(im) < 1e-9, "K should vanish, got {re}+i{im}");
    }
}

#[test]
fn harmonic_oscillator_closes_after_one_period() {
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.0, k2: 0.0 };
    let s0 = PhaseState::cartesian(1.0, 0.0, 0.0, 1.0).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    let traj = integrate(&spec, &s0, &opts(two_pi, two_pi / 64.0), &[]).unwrap();
    let end = traj.final_state().unwrap();
    let dist: f64 = end
        .as_array()
        .iter()
        .zip(s0.as_array())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(dist < 1e-8, "period closure missed by {dist}");
}

#[test]
fn time_reversal_returns_to_start() {
    let spec = SystemSpec::Vak { omega0: 1.0, k: k(3, 2), ka: 0.8, kb: 0.3 };
    let s0 = PhaseState::polar(1.2, 0.7, 0.3, 1.1).unwrap();
    let fwd = integrate(&spec, &s0, &opts(10.0, 0.5), &[]).unwrap();
    let end = fwd.final_state().unwrap();
    let reversed = PhaseState::polar(end.q1, end.q2, -end.p1, -end.p2).unwrap();
    let back = integrate(&spec, &reversed, &opts(10.0, 0.5), &[]).unwrap();
    let ret = back.final_state().unwrap();
    let expect = [s0.q1, s0.q2, -s0.p1, -s0.p2];
    for (v, e) in ret.as_array().iter().zip(expect) {
        assert!((v - e).abs() < 1e-7, "{v} vs {e}");
    }
}

#[test]
fn halving_tolerance_does_not_worsen_final_state() {
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 };
    let s0 = PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 0.1, 1.05).unwrap();
    let reference = {
        let o = IntegratorOptions {
            rel_tol: 1e-14,
            abs_tol: 1e-14,
            t_end: 10.0,
            sample_interval: 10.0,
            ..Default::default()
        };
        integrate(&spec, &s0, &o, &[]).unwrap().final_state().unwrap().as_array()
    };
    let err_at = |tol: f64| {
        let o = IntegratorOptions {
            rel_tol: tol,
            abs_tol: tol,
            t_end: 10.0,
            sample_interval: 10.0,
            ..Default::default()
        };
        let end = integrate(&spec, &s0, &o, &[]).unwrap().final_state().unwrap().as_array();
        end.iter()
            .zip(reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut tol = 1e-6;
    let mut prev = err_at(tol);
    for _ in 0..5 {
        tol /= 2.0;
        let next = err_at(tol);
        assert!(
            next <= prev,
            "error grew from {prev:.3e} to {next:.3e} at rel_tol {tol:.1e}"
        );
        prev = next;
    }
}

#[test]
fn tracked_series_have_no_nan_and_repeat_bitwise() {
    let spec = SystemSpec::Vak { omega0: 1.0, k: k(2, 1), ka: 1.0, kb: 0.5 };
    let s0 = PhaseState::polar(1.2, std::f64::consts::FRAC_PI_4, 0.3, 1.1).unwrap();
    let track = [
        InvariantKind::H,
        InvariantKind::J1,
        InvariantKind::J2,
        InvariantKind::ReKk,
        InvariantKind::ImKk,
    ];
    let a = integrate(&spec, &s0, &opts(20.0, 0.05), &track).unwrap();
    let b = integrate(&spec, &s0, &opts(20.0, 0.05), &track).unwrap();
    assert_eq!(a.termination, Termination::Completed);
    for ((ka_, va), (kb_, vb)) in a.tracks.iter().zip(&b.tracks) {
        assert_eq!(ka_, kb_);
        assert!(va.iter().all(|v| v.is_finite()));
        assert_eq!(va, vb, "same input must reproduce bitwise");
    }
}

#[test]
fn near_radial_kepler_orbit_hits_the_guard_band() {
    // J2 = 1e-6 puts the perihelion at ~5e-7, inside the r guard band, while
    // the steps there stay far above the underflow floor
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, 0.3, -1.0, 1e-3).unwrap();
    let traj = integrate(&spec, &s0, &opts(5.0, 0.01), &[InvariantKind::H]).unwrap();
    assert_eq!(traj.termination, Termination::SingularityAbort);
    for (_, s) in &traj.samples {
        assert!(s.as_array().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn attractive_inverse_square_infall_terminates_cleanly() {
    // k1 < 0 makes the x-barrier attractive: the orbit collapses onto x = 0
    // in finite time with diverging speed. Depending on which floor is hit
    // first this ends as a guard abort or a step underflow - never a panic,
    // never a NaN sample.
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: -0.5, k2: 0.0 };
    let s0 = PhaseState::cartesian(1.0, 1.0, -1.0, 0.0).unwrap();
    let traj = integrate(&spec, &s0, &opts(20.0, 0.01), &[InvariantKind::H]).unwrap();
    assert_ne!(traj.termination, Termination::Completed);
    for (_, s) in &traj.samples {
        assert!(s.as_array().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn absurd_horizon_underflows_step_floor() {
    // with t_end = 1e12 the step floor 1e-14 * t_end = 1e-2 sits above the
    // step the controller needs, so the run must stop with StepUnderflow
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.5, k2: 0.5 };
    let s0 = PhaseState::cartesian(1.0, 1.2, 0.4, -0.3).unwrap();
    let o = IntegratorOptions {
        t_end: 1e12,
        sample_interval: 1e10,
        ..Default::default()
    };
    let traj = integrate(&spec, &s0, &o, &[]).unwrap();
    assert_eq!(traj.termination, Termination::StepUnderflow);
}

// ---------------------------------------------------------------------------
// conservation of the composite constants along long runs
// ---------------------------------------------------------------------------

#[test]
fn bxy_conserved_for_two_three() {
    let spec = SystemSpec::VaN { n_x: 2, n_y: 3, omega0: 1.0, k1: 0.5, k2: 0.3 };
    let s0 = PhaseState::cartesian(1.0, 1.1, 0.4, -0.2).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[
            InvariantKind::H,
            InvariantKind::Ex,
            InvariantKind::Ey,
            InvariantKind::ReBxy,
            InvariantKind::ImBxy,
            InvariantKind::Bxx,
            InvariantKind::Byy,
        ],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!(max_drift(&traj) < 1e-8, "drift {}", max_drift(&traj));
}

#[test]
fn cxy_conserved_and_i3_for_one_two() {
    let spec = SystemSpec::VbN { n_x: 1, n_y: 2, omega0: 1.0, k1: 0.4, k2: 0.7 };
    let s0 = PhaseState::cartesian(1.1, 0.6, 0.2, -0.4).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[
            InvariantKind::H,
            InvariantKind::Ex,
            InvariantKind::Ey,
            InvariantKind::ReCxy,
            InvariantKind::ImCxy,
            InvariantKind::I3_12,
        ],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    let report = drift_report(&traj).unwrap();
    for d in &report {
        let bound = if d.kind == InvariantKind::I3_12 { 1e-9 } else { 1e-8 };
        assert!(d.max_rel < bound, "{}: {}", d.kind, d.max_rel);
    }
}

#[test]
fn cxy_conserved_for_two_three() {
    let spec = SystemSpec::VbN { n_x: 2, n_y: 3, omega0: 1.0, k1: 0.4, k2: 0.5 };
    let s0 = PhaseState::cartesian(0.9, 0.4, 0.3, -0.5).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[InvariantKind::H, InvariantKind::ReCxy, InvariantKind::ImCxy],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!(max_drift(&traj) < 1e-8, "drift {}", max_drift(&traj));
}

#[test]
fn kk_conserved_for_deformed_kepler_k1() {
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 };
    let s0 = PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 0.1, 1.05).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[
            InvariantKind::H,
            InvariantKind::J2,
            InvariantKind::ReKk,
            InvariantKind::ImKk,
        ],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!(max_drift(&traj) < 1e-8, "drift {}", max_drift(&traj));
}

#[test]
fn kk_conserved_for_rational_k_oscillator() {
    // k = 3/2: K = M^3 (N*)^4
    let spec = SystemSpec::Vak { omega0: 1.0, k: k(3, 2), ka: 1.0, kb: 0.4 };
    let s0 = PhaseState::polar(1.2, 0.9, 0.3, 1.1).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[
            InvariantKind::H,
            InvariantKind::J2,
            InvariantKind::ReKk,
            InvariantKind::ImKk,
        ],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!(max_drift(&traj) < 1e-8, "drift {}", max_drift(&traj));
}

#[test]
fn kk_conserved_for_rotated_kepler() {
    let spec = SystemSpec::VckRot { g: 1.0, k: k(2, 1), ka: 0.25, kb: 0.1 };
    let s0 = PhaseState::polar(1.1, 0.1, 0.1, 1.0).unwrap();
    let traj = integrate(
        &spec,
        &s0,
        &opts(50.0, 0.05),
        &[
            InvariantKind::H,
            InvariantKind::J2,
            InvariantKind::ReKk,
            InvariantKind::ImKk,
        ],
    )
    .unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!(max_drift(&traj) < 1e-8, "drift {}", max_drift(&traj));
}

#[test]
fn wrong_system_invariant_drifts_badly() {
    // negative control: evaluate the J2 of a different parameter set along a
    // trajectory of the true system - with the couplings zeroed this is the
    // bare p_phi^2, which is not conserved when ka != 0
    let truth = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 };
    let fake = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 0.1, 1.05).unwrap();
    let traj = integrate(&truth, &s0, &opts(50.0, 0.05), &[]).unwrap();
    let fake_track: Vec<f64> = traj
        .samples
        .iter()
        .map(|(_, s)| eval_invariant(InvariantKind::J2, &fake, s).unwrap())
        .collect();
    let synthetic = Trajectory {
        samples: traj.samples.clone(),
        tracks: vec![(InvariantKind::J2, fake_track)],
        termination: Termination::Completed,
    };
    let drift = max_drift(&synthetic);
    assert!(drift > 1e-3, "fake invariant should drift, got {drift}");
}

// ---------------------------------------------------------------------------
// phase-rotation laws along trajectories
// ---------------------------------------------------------------------------

#[test]
fn rotation_law_free_angular_case() {
    // g = ka = kb = 0: the N law holds for any radial potential
    let spec = SystemSpec::Vck { g: 0.0, k: k(2, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, 0.4, 0.2, 0.9).unwrap();
    let o = IntegratorOptions { t_end: 5.0, sample_interval: 1e-3, ..Default::default() };
    let traj = integrate(&spec, &s0, &o, &[]).unwrap();
    let stats = phase_rotation_check(&spec, &traj, RotationTarget::N).unwrap();
    assert!(stats.max_residual < 1e-5, "{}", stats.max_residual);
}

#[test]
fn rotation_laws_generic_oscillator_orbit() {
    let spec = SystemSpec::Vak { omega0: 1.0, k: k(2, 1), ka: 1.0, kb: 0.5 };
    let s0 = PhaseState::polar(1.2, std::f64::consts::FRAC_PI_4, 0.3, 1.1).unwrap();
    let o = IntegratorOptions { t_end: 10.0, sample_interval: 1e-3, ..Default::default() };
    let traj = integrate(&spec, &s0, &o, &[]).unwrap();
    for target in [RotationTarget::M, RotationTarget::N] {
        let stats = phase_rotation_check(&spec, &traj, target).unwrap();
        assert!(!stats.degenerate);
        assert!(stats.max_residual < 1e-5, "{target}: {}", stats.max_residual);
    }
}

#[test]
fn rotation_rate_tight_at_fine_sampling() {
    // c = 1 for the Kepler family; at dt = 5e-4 the central-difference
    // truncation sits below 1e-6
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.2, kb: 0.1 };
    let s0 = PhaseState::polar(1.0, std::f64::consts::FRAC_PI_2, 0.1, 1.05).unwrap();
    let o = IntegratorOptions { t_end: 2.0, sample_interval: 5e-4, ..Default::default() };
    let traj = integrate(&spec, &s0, &o, &[]).unwrap();
    for target in [RotationTarget::M, RotationTarget::N] {
        let stats = phase_rotation_check(&spec, &traj, target).unwrap();
        assert!(stats.max_residual < 1e-6, "{target}: {}", stats.max_residual);
    }
}

// ---------------------------------------------------------------------------
// fixed-step symplectic cross-checks
// ---------------------------------------------------------------------------

#[test]
fn leapfrog_energy_band_shrinks_fourfold_when_halving_h() {
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.0, k2: 0.0 };
    let s0 = PhaseState::cartesian(1.0, 0.3, 0.2, 0.9).unwrap();
    let band = |h: f64| {
        let o = IntegratorOptions {
            max_step: h,
            t_end: 1000.0,
            sample_interval: h,
            ..Default::default()
        };
        let traj =
            integrate_fixed_symplectic(&spec, &s0, &o, &[InvariantKind::H]).unwrap();
        let e = traj.track(InvariantKind::H).unwrap();
        e.iter().map(|v| (v - e[0]).abs()).fold(0.0, f64::max)
    };
    let b1 = band(0.01);
    let b2 = band(0.005);
    let ratio = b1 / b2;
    // O(h^2) band, no secular growth: halving h cuts it by ~4
    assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}, bands {b1:.3e}/{b2:.3e}");
}

#[test]
fn leapfrog_observed_order_is_two() {
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.5, k2: 0.5 };
    let s0 = PhaseState::cartesian(1.0, 1.2, 0.4, -0.3).unwrap();
    let reference = {
        let o = IntegratorOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-13,
            t_end: 10.0,
            sample_interval: 10.0,
            ..Default::default()
        };
        integrate(&spec, &s0, &o, &[]).unwrap().final_state().unwrap().as_array()
    };
    let err = |h: f64| {
        let o = IntegratorOptions {
            max_step: h,
            t_end: 10.0,
            sample_interval: 10.0,
            ..Default::default()
        };
        let end = integrate_fixed_symplectic(&spec, &s0, &o, &[])
            .unwrap()
            .final_state()
            .unwrap()
            .as_array();
        end.iter()
            .zip(reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let order = (err(0.02) / err(0.01)).log2();
    assert!((1.8..=2.2).contains(&order), "observed order {order}");
}

#[test]
fn leapfrog_agrees_with_adaptive_at_fine_step() {
    let spec = SystemSpec::VaN { n_x: 1, n_y: 1, omega0: 1.0, k1: 0.5, k2: 0.5 };
    let s0 = PhaseState::cartesian(1.0, 1.2, 0.4, -0.3).unwrap();
    let o_fixed = IntegratorOptions {
        max_step: 1e-4,
        t_end: 10.0,
        sample_interval: 10.0,
        ..Default::default()
    };
    let fixed = integrate_fixed_symplectic(&spec, &s0, &o_fixed, &[])
        .unwrap()
        .final_state()
        .unwrap()
        .as_array();
    let adaptive = integrate(&spec, &s0, &opts(10.0, 10.0), &[])
        .unwrap()
        .final_state()
        .unwrap()
        .as_array();
    let dist: f64 = fixed
        .iter()
        .zip(adaptive)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(dist < 1e-6, "cross-integrator disagreement {dist}");
}

#[test]
fn leapfrog_rejects_polar_families() {
    let spec = SystemSpec::Vck { g: 1.0, k: k(1, 1), ka: 0.0, kb: 0.0 };
    let s0 = PhaseState::polar(1.0, 0.0, 0.0, 1.0).unwrap();
    assert!(integrate_fixed_symplectic(&spec, &s0, &IntegratorOptions::default(), &[]).is_err());
}

#[test]
fn energy_drift_small_on_preset_runs() {
    for name in superint_core::PRESET_NAMES {
        let p = superint_core::preset(name).unwrap();
        let traj = integrate(&p.system, &p.initial_state, &p.options, &p.invariants).unwrap();
        assert_eq!(traj.termination, Termination::Completed, "{name}");
        let report = drift_report(&traj).unwrap();
        for d in &report {
            assert!(d.max_rel < 1e-7, "{name}/{}: {}", d.kind, d.max_rel);
        }
        // H certainly stays put
        let h0 = eval_h(&p.system, &p.initial_state).unwrap();
        let h_end = eval_h(&p.system, traj.final_state().unwrap()).unwrap();
        assert!((h_end - h0).abs() / h0.abs().max(1.0) < 1e-9, "{name}");
    }
}
