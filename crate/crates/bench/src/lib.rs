//! Fixtures shared by the benchmarks: each example at one of its critical points.

use momap_core::examples::galilean::{GalileanParams, GalileanSpec};
use momap_core::examples::unitary::{build_unitary_linear, UnitarySpec};
use momap_core::examples::virasoro::{build_virasoro, VirasoroModel};
use momap_core::Vector;

pub fn galilean() -> (GalileanSpec, Vector) {
    let spec = GalileanSpec::new(GalileanParams::new(1.0, 1.0).expect("valid parameters"));
    (spec, GalileanSpec::first_family_point([0.0, 0.0, 1.0]))
}

pub fn unitary(n: usize) -> (UnitarySpec, Vector) {
    let spec = build_unitary_linear(n, 1.0).expect("valid dimension");
    let m = spec.critical_point();
    (spec, m)
}

/// The truncated Virasoro model at the class [0].
pub fn virasoro(modes: usize) -> (VirasoroModel, Vector) {
    let model = build_virasoro(modes, 8 * modes.next_power_of_two()).expect("valid truncation");
    let m = Vector::zeros(2 * modes);
    (model, m)
}
