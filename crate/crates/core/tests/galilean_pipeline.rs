use momap_core::decompose::{complex_stabilizer, grading_defect};
use momap_core::examples::galilean::*;
use momap_core::normsq::{criticality_residual, hessian_fd, hessian_quadratic, ComplexOrbitHessian};
use momap_core::*;

fn first_family() -> (GalileanParams, GalileanSpec, Vector) {
    let params = GalileanParams::new(1.0, 2.0).unwrap();
    (params, GalileanSpec::new(params), GalileanSpec::first_family_point([0.0, 0.6, 0.8]))
}

#[test]
fn first_family_operators() {
    let (_, spec, m) = first_family();
    assert!(criticality_residual(&spec, &m) < 1e-12);
    let ops = build_operators(&spec, &m).unwrap();
    assert!(ops.diagnostics.violations(1e-9).is_empty(), "{:?}", ops.diagnostics);
    assert!(ops.factorization_defect(&spec) < 1e-8);
    assert!(ops.imaginary_part_defect(&spec) < 1e-8);
    let stab = complex_stabilizer(&spec, &m, &Tolerances::default()).unwrap();
    assert_eq!(stab.dim(), 6);
    assert_eq!(stab.upsilon_real_dim, 12);
    assert!(stab.angle < 1e-6);
}

#[test]
fn first_family_decomposition() {
    let (params, spec, m) = first_family();
    let s = params.spin;
    let x = [0.0, 0.6, 0.8];
    let mu = spec.momentum(&m);
    let d = eigendecompose_stabilizer(&spec, &m, &mu, DecompositionMode::Hermitian, &Tolerances::default()).unwrap();
    let mult = d.multiplicities();
    assert_eq!(mult.len(), 3);
    for ((v, k), (ev, ek)) in mult.iter().zip([(-s / 2.0, 2), (0.0, 3), (s / 2.0, 1)]) {
        assert!((v - ev).abs() < 1e-8, "{mult:?}");
        assert_eq!(*k, ek);
    }
    let center = stabilizer_center_element(params, x, (0.3, -1.0), (0.2, 0.5), (1.1, 0.4));
    // α, β ⊥ x.
    let plus = stabilizer_plus_element(params, x, [0.2, 0.4, -0.3], [1.0, -0.24, 0.18]);
    let minus = stabilizer_minus_element(params, x, [0.5, 0.56, -0.42]);
    assert!(d.distance_to(d.zero_cluster(), &center.to_complex()) < 1e-8);
    assert!(d.distance_to(d.cluster_near(-s / 2.0), &plus.to_complex()) < 1e-8);
    assert!(d.distance_to(d.cluster_near(s / 2.0), &minus.to_complex()) < 1e-8);
    // c_m is not closed under the bracket: the third slot picks up θ₂b₁x − θ₁b₂x.
    let other = stabilizer_center_element(params, x, (0.0, 0.0), (-0.7, 0.1), (0.2, -0.9));
    let br = spec.algebra().complexify().bracket(&center, &other);
    assert!(br.re.rows(6, 3).norm() + br.im.rows(6, 3).norm() > 1e-2);
    assert!(d.distance_to(None, &br.to_complex()) > 1e-2);
    assert!(grading_defect(&d, spec.algebra(), -s / 2.0, s / 2.0) < 1e-8);
}

#[test]
fn first_family_hessian() {
    let (_, spec, m) = first_family();
    let basis = spec.tangent_basis(&m);
    for c in 0..basis.ncols() {
        let x = basis.column(c).into_owned();
        let exact = hessian_quadratic(&spec, &m, &x).unwrap();
        let fd = hessian_fd(&spec, &m, &x, 1e-4);
        assert!((exact - fd).abs() <= 1e-4 * (1.0 + exact.abs()), "{exact} vs {fd}");
    }
    let ops = build_operators(&spec, &m).unwrap();
    let h = ComplexOrbitHessian::new(&spec, &ops, &Tolerances::default()).unwrap();
    assert!(h.symmetry_defect() < 1e-8);
}

#[test]
fn descent_reaches_both_families() {
    let params = GalileanParams::new(1.0, 10.0).unwrap();
    let spec = GalileanSpec::new(params);
    let target = galilean_second_critical_family(params, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
    let kick = Vector::from_fn(9, |k, _| 0.02 * (1.7 * k as f64).sin());
    let start = spec.retract(&target, &spec.project_tangent(&target, &kick));
    let r = descend(&spec, &start, &DescentOptions::default()).unwrap();
    assert!(r.converged);
    let p2 = r.point.rows(3, 3).norm_squared();
    let expected = second_family_p_squared(params);
    assert!((p2 - expected).abs() <= 1e-5 * expected);

    let spec = GalileanSpec::new(GalileanParams::new(1.0, 1.0).unwrap());
    let m = GalileanSpec::first_family_point([0.0, 0.0, 1.0]);
    let kick = Vector::from_vec(vec![0.05, -0.03, 0.02, 0.04, 0.01, -0.02, 0.1, 0.05, 0.0]);
    let start = spec.retract(&m, &spec.project_tangent(&m, &kick));
    let r = descend(&spec, &start, &DescentOptions::default()).unwrap();
    assert!(r.converged);
    assert!((r.value - 0.5).abs() < 1e-8);
    // each accepted value lies below the largest of the previous `memory` values
    let mem = DescentOptions::default().memory;
    for (k, step) in r.trajectory.iter().enumerate().skip(1) {
        let window = &r.trajectory[k.saturating_sub(mem)..k];
        assert!(step.value <= window.iter().map(|s| s.value).fold(f64::MIN, f64::max) + 1e-12);
    }
    let mono = descend(&spec, &start, &DescentOptions { memory: 1, ..DescentOptions::default() }).unwrap();
    assert!(mono.converged);
    assert!(mono.trajectory.windows(2).all(|w| w[1].value <= w[0].value + 1e-12));
}
