use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use momap_core::action::{momentum_defect, sigma_two_cocycle};
use momap_core::affine::cocycle_identity_defect_real;
use momap_core::examples::galilean::{bargmann_cocycle, galilean_algebra, GalileanGroup, GalileanParams, GalileanSpec};
use momap_core::{Derivative, GroupLaw, HamiltonianAction, Vector};

fn vec10() -> impl Strategy<Value = Vector> {
    prop::collection::vec(-2.0f64..2.0, 10).prop_map(Vector::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn galilean_bracket_is_a_lie_bracket(x in vec10(), y in vec10(), z in vec10()) {
        let alg = galilean_algebra();
        let skew = alg.bracket(&x, &y) + alg.bracket(&y, &x);
        prop_assert!(skew.amax() < 1e-12);
        let j = alg.bracket(&x, &alg.bracket(&y, &z)) + alg.bracket(&y, &alg.bracket(&z, &x)) + alg.bracket(&z, &alg.bracket(&x, &y));
        prop_assert!(j.amax() < 1e-11);
    }

    #[test]
    fn galilean_momentum_identity_and_constant_sigma(mass in 0.2f64..3.0, spin in 0.05f64..3.0, seed in any::<u64>()) {
        let spec = GalileanSpec::new(GalileanParams::new(mass, spin).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (spec.sample_point(&mut rng), spec.sample_point(&mut rng));
        prop_assert!(momentum_defect(&spec, &a, 5, Derivative::Native, &mut rng).unwrap() < 1e-9);
        let (x, y) = (spec.sample_algebra(&mut rng), spec.sample_algebra(&mut rng));
        let (sa, sb) = (sigma_two_cocycle(&spec, &x, &y, &a), sigma_two_cocycle(&spec, &x, &y, &b));
        prop_assert!((sa - sb).abs() < 1e-9 * (1.0 + sa.abs()));
    }

    #[test]
    fn bargmann_is_a_group_cocycle(mass in 0.2f64..3.0, seed in any::<u64>()) {
        let params = GalileanParams::new(mass, 1.0).unwrap();
        let group = GalileanGroup::new(params);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<_> = (0..3).map(|_| group.sample(&mut rng)).collect();
        let d = cocycle_identity_defect_real(&group, |a, b| bargmann_cocycle(params, a, b), &g[0], &g[1], &g[2]);
        prop_assert!(d < 1e-9, "defect {}", d);
    }
}
