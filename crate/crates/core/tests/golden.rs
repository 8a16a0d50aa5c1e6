//! Library values against the arbitrary-precision references printed by
//! tools/golden.py.

// Oracle digits are kept as printed.
#![allow(clippy::excessive_precision)]

use std::path::PathBuf;

use approx::assert_relative_eq;
use shift_core::atoms::AtomSpec;
use shift_core::constants::RAD_PER_S_PER_INV_CM;
use shift_core::greens::{im_trace_green, GreenMode};
use shift_core::material::{MaterialModel, Oscillator, PolaritonMode};
use shift_core::potentials::{
    matsubara_xi, nonresonant_shift, thermal_factor, thermal_occupation, u_eff, Environment, MatsubaraConfig,
    NonresonantMode, ResonanceConfig,
};

const TOL: f64 = 1e-8;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn toy_nonresonant_shift() {
    let atom = AtomSpec::load(fixture("toy_two_level.json")).unwrap();
    let m = MaterialModel::load(fixture("toy_single_oscillator.json")).unwrap();
    let env = Environment::new(1e-6, 400.0).unwrap();
    // 200 terms: j = 0..=199
    let cfg = MatsubaraConfig::new(199, 1e-6).unwrap();
    let cases = [
        ("g", -7.931_050_268_158_752_5e-33, -8.616_518_426_317_501_8e-37),
        ("e", 7.931_050_268_158_752_5e-33, 8.427_081_192_898_609_8e-35),
    ];
    for mode in [NonresonantMode::Nonretarded, NonresonantMode::General(GreenMode::Nonretarded)] {
        for (n, matsubara, photon) in cases {
            let s = nonresonant_shift(&atom, n, &m, &env, &cfg, mode).unwrap();
            assert_relative_eq!(s.matsubara, matsubara, max_relative = TOL);
            assert_relative_eq!(s.resonant_photon, photon, max_relative = TOL);
        }
    }
}

#[test]
fn single_channel_u_eff() {
    let atom = AtomSpec::load(fixture("toy_single_channel.json")).unwrap();
    let m = MaterialModel::load(fixture("two_mode_surface_g003.json")).unwrap();
    let cm = RAD_PER_S_PER_INV_CM;
    let m1 = PolaritonMode::new(90.0 * cm, 0.03 * 90.0 * cm).unwrap();
    let m2 = PolaritonMode::new(73.0 * cm, 0.03 * 73.0 * cm).unwrap();
    let env = Environment::new(1e-6, 500.0).unwrap();
    let u = u_eff(&atom, "1", "0", &m1, &m2, &m, &env, GreenMode::Nonretarded, &ResonanceConfig::default()).unwrap();
    assert_relative_eq!(u, 3.818_809_119_993_908_6e-30, max_relative = TOL);
}

#[test]
fn thermal_quantities() {
    let cm = RAD_PER_S_PER_INV_CM;
    assert_relative_eq!(thermal_factor(90.0 * cm, 73.0 * cm, 500.0), 4.330_115_912_405_430_6, max_relative = TOL);
    assert_relative_eq!(thermal_occupation(73.0 * cm, 500.0), 4.278_004_590_493_562_4, max_relative = TOL);
    assert_relative_eq!(matsubara_xi(300.0, 1).unwrap(), 2.467_790_253_640_998_1e14, max_relative = TOL);
}

#[test]
fn im_trace_green_at_isolated_mode() {
    let osc = Oscillator::new(1.5e13, 1.884e13, 0.02 * 1.884e13).unwrap();
    let omega = osc.isolated_mode_frequency();
    let m = MaterialModel::new("single", vec![osc]).unwrap();
    let v = im_trace_green(&m, 1e-6, omega, GreenMode::Nonretarded).unwrap();
    assert_relative_eq!(v, 1.056_444_192_931_146_7e8, max_relative = TOL);
}
