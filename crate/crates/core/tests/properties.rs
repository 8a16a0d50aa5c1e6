use std::path::PathBuf;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use shift_core::atoms::{AtomSpec, AtomicState, DipoleElement};
use shift_core::constants::{BOLTZMANN, HBAR, RAD_PER_S_PER_INV_CM};
use shift_core::greens::GreenMode;
use shift_core::material::{MaterialModel, Oscillator, PolaritonMode};
use shift_core::potentials::{
    matsubara_xi, nonresonant_shift, nonresonant_shift_zero_temperature, resonant_shift, total_shift, u_eff,
    u_eff_nonretarded_direct, Environment, MatsubaraConfig, NonresonantMode, ResonanceConfig, ShiftOptions,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn toy() -> (AtomSpec, MaterialModel) {
    (
        AtomSpec::load(fixture("toy_two_level.json")).unwrap(),
        MaterialModel::load(fixture("toy_single_oscillator.json")).unwrap(),
    )
}

fn rb_setup() -> (AtomSpec, MaterialModel) {
    (
        AtomSpec::load(fixture("rb_27s_26s.json")).unwrap(),
        MaterialModel::load(fixture("two_mode_surface_g003.json")).unwrap(),
    )
}

fn surface_modes() -> (PolaritonMode, PolaritonMode) {
    let cm = RAD_PER_S_PER_INV_CM;
    (PolaritonMode::new(90.0 * cm, 2.7 * cm).unwrap(), PolaritonMode::new(73.0 * cm, 2.19 * cm).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nonretarded_shifts_scale_as_inverse_cube(z in 1e-8f64..1e-5, t in 50.0f64..800.0) {
        let (atom, m) = rb_setup();
        let cfg = MatsubaraConfig::default();
        for n in ["27S1/2", "26S1/2", "26P3/2"] {
            let a = nonresonant_shift(&atom, n, &m, &Environment::new(z, t).unwrap(), &cfg, NonresonantMode::Nonretarded).unwrap();
            let b = nonresonant_shift(&atom, n, &m, &Environment::new(2.0 * z, t).unwrap(), &cfg, NonresonantMode::Nonretarded).unwrap();
            prop_assert!((a.matsubara / b.matsubara / 8.0 - 1.0).abs() < 1e-12);
            prop_assert!((a.resonant_photon / b.resonant_photon / 8.0 - 1.0).abs() < 1e-12);
        }
        let opts = ShiftOptions::default();
        let a = total_shift(&atom, "27S1/2", "26S1/2", &m, &Environment::new(z, t).unwrap(), &opts).unwrap();
        let b = total_shift(&atom, "27S1/2", "26S1/2", &m, &Environment::new(2.0 * z, t).unwrap(), &opts).unwrap();
        prop_assert!((a.u_eff / b.u_eff / 8.0 - 1.0).abs() < 1e-12);
        prop_assert!((a.r_shift / b.r_shift / 8.0 - 1.0).abs() < 1e-12);
        prop_assert!((a.total / b.total / 8.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_eff_paths_agree(z in 1e-8f64..1e-5) {
        let (atom, m) = rb_setup();
        let (m1, m2) = surface_modes();
        let env = Environment::new(z, 500.0).unwrap();
        let a = u_eff(&atom, "27S1/2", "26S1/2", &m1, &m2, &m, &env, GreenMode::Nonretarded, &ResonanceConfig::default()).unwrap();
        let b = u_eff_nonretarded_direct(&atom.channels("27S1/2", "26S1/2").unwrap(), &m1, &m2, &m, z).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn imaginary_axis_permittivity_decreases(
        wp in 1e12f64..1e14, wt in 1e12f64..1e14, g in 0.0f64..1e13, xi in 0.0f64..1e15, dxi in 1e9f64..1e15
    ) {
        let m = MaterialModel::new("p", vec![Oscillator::new(wp, wt, g).unwrap()]).unwrap();
        let a = m.permittivity_imag_axis(xi);
        let b = m.permittivity_imag_axis(xi + dxi);
        prop_assert!(a >= b);
        prop_assert!(b >= 1.0);
    }

    #[test]
    fn absorption_is_positive(wp in 1e12f64..1e14, wt in 1e12f64..1e14, g in 1e9f64..1e13, w in 1e10f64..1e15) {
        let m = MaterialModel::new("p", vec![Oscillator::new(wp, wt, g).unwrap()]).unwrap();
        prop_assert!(m.permittivity(Complex64::new(w, 0.0)).unwrap().im > 0.0);
    }

    #[test]
    fn resonant_shift_grows_with_temperature(t in 1.0f64..2000.0, dt in 0.0f64..500.0) {
        let (m1, m2) = surface_modes();
        let a = resonant_shift(-1.0, &m1, &m2, t).abs();
        let b = resonant_shift(-1.0, &m1, &m2, t + dt).abs();
        prop_assert!(b >= a);
    }

    #[test]
    fn ground_state_polarizability_positive_decreasing(xi in 0.0f64..1e16, dxi in 1e10f64..1e16) {
        let (atom, _) = rb_setup();
        // 26S1/2 lies below every P state in the fixture.
        let a = atom.polarizability_iso("26S1/2", xi).unwrap();
        let b = atom.polarizability_iso("26S1/2", xi + dxi).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && a >= b);
    }

    #[test]
    fn atom_json_round_trip(energies in prop::collection::vec(-1e15f64..1e15, 2..6), d in 1e-31f64..1e-26) {
        let states: Vec<_> = energies.iter().enumerate()
            .map(|(i, &e)| AtomicState { label: format!("s{i}"), energy: e }).collect();
        let dipoles: Vec<_> = (1..states.len())
            .map(|i| DipoleElement { from: "s0".into(), to: format!("s{i}"), magnitude: d * i as f64, components: None })
            .collect();
        let atom = AtomSpec::new("rt", states, dipoles).unwrap();
        prop_assert_eq!(AtomSpec::from_json(&atom.to_json()).unwrap(), atom);
    }
}

#[test]
fn channels_are_symmetric() {
    let (atom, _) = rb_setup();
    let down: Vec<_> = atom.channels("27S1/2", "26S1/2").unwrap().into_iter().map(|c| c.k_label).collect();
    let up: Vec<_> = atom.channels("26S1/2", "27S1/2").unwrap().into_iter().map(|c| c.k_label).collect();
    assert_eq!(down, up);
    assert_eq!(down, ["26P1/2", "26P3/2", "27P1/2", "27P3/2"]);
}

#[test]
fn rb_channels_led_by_26p() {
    let (atom, _) = rb_setup();
    let ch = atom.channels("27S1/2", "26S1/2").unwrap();
    let weight = |c: &shift_core::atoms::TransitionChannel| c.d_0k * c.d_k1;
    let best = ch.iter().max_by(|a, b| weight(a).total_cmp(&weight(b))).unwrap();
    assert_eq!(best.k_label, "26P3/2");
    // 26P lies roughly halfway between 26S and 27S.
    let frac = -best.omega_0k / (atom.transition_frequency("27S1/2", "26S1/2").unwrap());
    assert!((0.3..0.7).contains(&frac), "{frac}");
}

#[test]
fn matsubara_sum_converged_at_default_cutoff() {
    let (atom, m) = toy();
    let env = Environment::new(1e-6, 400.0).unwrap();
    let n = MatsubaraConfig::default();
    let a = nonresonant_shift(&atom, "g", &m, &env, &n, NonresonantMode::Nonretarded).unwrap();
    let b = nonresonant_shift(&atom, "g", &m, &env, &MatsubaraConfig { cutoff: 2 * n.cutoff, ..n }, NonresonantMode::Nonretarded)
        .unwrap();
    assert!(((a.matsubara - b.matsubara) / a.matsubara).abs() < 1e-6);
}

#[test]
fn low_temperature_sum_approaches_integral() {
    let (atom, m) = toy();
    let t = 1.0;
    let env = Environment::new(1e-6, t).unwrap();
    let cfg = MatsubaraConfig::new(200_000, 1e-4).unwrap();
    let sum = nonresonant_shift(&atom, "g", &m, &env, &cfg, NonresonantMode::Nonretarded).unwrap();
    let integral = nonresonant_shift_zero_temperature(&atom, "g", &m, 1e-6).unwrap();
    assert_relative_eq!(sum.matsubara, integral.matsubara, max_relative = 1e-2);
    // The spacing of the sum is the thermal frequency.
    assert_relative_eq!(matsubara_xi(t, 1).unwrap(), 2.0 * std::f64::consts::PI * BOLTZMANN * t / HBAR);
}

#[test]
fn resonant_shift_vanishes_at_zero_temperature() {
    let (m1, m2) = surface_modes();
    assert_eq!(resonant_shift(-3.0, &m1, &m2, 0.0), 0.0);
}

#[test]
fn sequential_and_parallel_scans_match() {
    use shift_core::parallel::Execution;
    use shift_core::run::{scan_csv, scan_inputs, Inputs, RunConfig};

    let (atom, material) = rb_setup();
    let mut cfg = RunConfig::new(
        fixture("two_mode_surface_g003.json"),
        fixture("rb_27s_26s.json"),
        "27S1/2",
        "26S1/2",
    );
    cfg.z_values = vec![5e-8, 1e-7, 3e-7, 1e-6];
    cfg.t_values = vec![0.0, 300.0, 500.0];
    let inputs = Inputs { material, atom };
    let seq = scan_csv(&scan_inputs(&inputs, &cfg, Execution::Sequential));
    let par = scan_csv(&scan_inputs(&inputs, &cfg, Execution::Parallel));
    assert_eq!(seq, par);
}
