//! U(n) acting linearly on ℂⁿ = ℝ²ⁿ, an equivariant test bed.
//!
//! Points are v = (x, y) with z = x + iy. Algebra elements are skew-Hermitian
//! matrices realified as [[X, −Y], [Y, X]], paired by κ(A, B) = −Re tr(AB).
//! The momentum map is J(v) = (i/2)(vv^H − tI), shifted by the central element
//! −(it/2)I so that the sphere ‖v‖² = t is critical.

use rand::RngCore;

use crate::action::{gaussian, GroupAction, GroupLaw, HamiltonianAction};
use crate::affine::AffineActionSpec;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{expm, flatten, CompatibleStructure, Mat, SymplecticSpace, Vector};

/// Realification of X + iY.
pub fn realify(re: &Mat, im: &Mat) -> Mat {
    let n = re.nrows();
    let mut m = Mat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(re);
    m.view_mut((0, n), (n, n)).copy_from(&(-im));
    m.view_mut((n, 0), (n, n)).copy_from(im);
    m.view_mut((n, n), (n, n)).copy_from(re);
    m
}

fn unitary_basis(n: usize) -> (Vec<Mat>, Vec<String>) {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let z = Mat::zeros(n, n);
    for a in 0..n {
        let mut im = Mat::zeros(n, n);
        im[(a, a)] = 1.0;
        basis.push(realify(&z, &im));
        labels.push(format!("i{a}{a}"));
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut re = Mat::zeros(n, n);
            re[(a, b)] = 1.0;
            re[(b, a)] = -1.0;
            basis.push(realify(&re, &z));
            labels.push(format!("r{a}{b}"));
            let mut im = Mat::zeros(n, n);
            im[(a, b)] = 1.0;
            im[(b, a)] = 1.0;
            basis.push(realify(&z, &im));
            labels.push(format!("s{a}{b}"));
        }
    }
    (basis, labels)
}

/// u(n) linear action with momentum level t.
#[derive(Clone, Debug)]
pub struct UnitarySpec {
    n: usize,
    level: f64,
    linear: AffineActionSpec,
    basis: Vec<Mat>,
    /// Pseudo-inverse of the flattened basis, for coordinates of realified matrices.
    coords: Mat,
    shift: Vector,
}

impl UnitarySpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn linear(&self) -> &AffineActionSpec {
        &self.linear
    }

    /// Realified matrix of an algebra vector.
    pub fn algebra_matrix(&self, xi: &Vector) -> Mat {
        let d = 2 * self.n;
        let mut m = Mat::zeros(d, d);
        for (k, b) in self.basis.iter().enumerate() {
            m += b * xi[k];
        }
        m
    }

    /// Coordinates of a realified skew-Hermitian matrix.
    pub fn coordinates(&self, m: &Mat) -> Vector {
        &self.coords * flatten(m)
    }

    /// A critical point √t·e₁ (the origin when t ≤ 0).
    pub fn critical_point(&self) -> Vector {
        let mut v = Vector::zeros(2 * self.n);
        if self.level > 0.0 {
            v[0] = self.level.sqrt();
        }
        v
    }
}

/// u(n) on ℝ²ⁿ with level t; κ = −Re tr is Ad-invariant and the action is equivariant.
pub fn build_unitary_linear(n: usize, level: f64) -> Result<UnitarySpec> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let (basis, labels) = unitary_basis(n);
    let d = basis.len();
    let gram = Mat::from_fn(d, d, |a, b| -0.5 * (&basis[a] * &basis[b]).trace());
    let algebra = LieAlgebraSpec::from_matrix_basis(&basis, gram, labels)?;
    let space = SymplecticSpace::standard(n)?;
    let j = CompatibleStructure::standard(&space)?;
    let linear = AffineActionSpec::new(space, algebra, j, basis.clone(), Mat::zeros(2 * n, d), None)?;
    let flat = Mat::from_columns(&basis.iter().map(flatten).collect::<Vec<_>>());
    let coords = flat
        .pseudo_inverse(1e-12)
        .map_err(|e| Error::Numerical(format!("basis pseudo-inverse failed: {e}")))?;
    let mut spec = UnitarySpec { n, level, linear, basis, coords, shift: Vector::zeros(d) };
    let mut im = Mat::zeros(n, n);
    im.fill_diagonal(-level / 2.0);
    spec.shift = spec.coordinates(&realify(&Mat::zeros(n, n), &im));
    Ok(spec)
}

impl HamiltonianAction for UnitarySpec {
    fn algebra(&self) -> &LieAlgebraSpec {
        self.linear.algebra()
    }

    fn point_dim(&self) -> usize {
        2 * self.n
    }

    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        self.linear.inf_action(xi, m)
    }

    fn momentum(&self, m: &Vector) -> Vector {
        self.linear.momentum(m) + &self.shift
    }

    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64 {
        self.linear.omega_at(m, x, y)
    }

    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector {
        self.linear.acs_at(m, x)
    }

    fn has_analytic_tangent(&self) -> bool {
        true
    }

    fn momentum_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        self.linear.momentum_tangent(m, x)
    }

    fn linearize_isotropy(&self, sigma: &Vector, m: &Vector, x: &Vector) -> Vector {
        self.linear.linearize_isotropy(sigma, m, x)
    }

    fn tangent_basis(&self, m: &Vector) -> Mat {
        self.linear.tangent_basis(m)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        gaussian(rng, 2 * self.n)
    }
}

/// U(n) as realified unitary matrices.
#[derive(Clone, Debug)]
pub struct UnitaryGroup {
    spec: UnitarySpec,
}

impl UnitaryGroup {
    pub fn new(spec: UnitarySpec) -> Self {
        Self { spec }
    }
}

impl GroupLaw for UnitaryGroup {
    type Element = Mat;

    fn identity(&self) -> Mat {
        let d = 2 * self.spec.n;
        Mat::identity(d, d)
    }

    fn compose(&self, g: &Mat, h: &Mat) -> Mat {
        g * h
    }

    fn inverse(&self, g: &Mat) -> Mat {
        g.transpose()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Mat {
        let xi = gaussian(rng, self.spec.algebra().dim());
        self.exp(&xi)
    }
}

impl GroupAction for UnitaryGroup {
    type Action = UnitarySpec;

    fn action(&self) -> &UnitarySpec {
        &self.spec
    }

    fn act(&self, g: &Mat, m: &Vector) -> Vector {
        g * m
    }

    fn adjoint(&self, g: &Mat) -> Mat {
        let gt = g.transpose();
        let cols: Vec<Vector> = self
            .spec
            .basis
            .iter()
            .map(|b| self.spec.coordinates(&(g * b * &gt)))
            .collect();
        Mat::from_columns(&cols)
    }

    fn exp(&self, xi: &Vector) -> Mat {
        expm(&self.spec.algebra_matrix(xi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{momentum_defect, sigma_kappa_map, sigma_one_cocycle, Derivative};
    use crate::normsq::criticality_residual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn momentum_is_half_i_vvh_shifted() {
        let spec = build_unitary_linear(2, 1.5).unwrap();
        let v = Vector::from_vec(vec![0.3, -0.4, 1.1, 0.2]);
        let z = nalgebra::DVector::from_fn(2, |k, _| num_complex::Complex64::new(v[k], v[k + 2]));
        let j = &z * z.adjoint() * num_complex::Complex64::new(0.0, 0.5)
            - nalgebra::DMatrix::<num_complex::Complex64>::identity(2, 2) * num_complex::Complex64::new(0.0, 0.75);
        let expected = realify(&j.map(|c| c.re), &j.map(|c| c.im));
        let got = spec.algebra_matrix(&spec.momentum(&v));
        assert!((got - expected).amax() < 1e-12);
    }

    #[test]
    fn equivariant_and_momentum_identity() {
        let spec = build_unitary_linear(3, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = spec.sample_point(&mut rng);
        assert!(momentum_defect(&spec, &m, 20, Derivative::Native, &mut rng).unwrap() < 1e-12);
        assert!(sigma_kappa_map(&spec, &m).amax() < 1e-12);
        let group = UnitaryGroup::new(spec);
        for _ in 0..5 {
            let g = group.sample(&mut rng);
            assert!(sigma_one_cocycle(&group, &g, &m).amax() < 1e-10);
            assert!((g.transpose() * &g - Mat::identity(6, 6)).amax() < 1e-12);
        }
    }

    #[test]
    fn critical_sphere_and_origin() {
        let spec = build_unitary_linear(2, 2.0).unwrap();
        assert!(criticality_residual(&spec, &spec.critical_point()) < 1e-14);
        assert_eq!(criticality_residual(&spec, &Vector::zeros(4)), 0.0);
        let generic = Vector::from_vec(vec![1.0, 0.5, 0.0, 0.3]);
        assert!(criticality_residual(&spec, &generic) > 1e-3);
        assert!(build_unitary_linear(0, 1.0).is_err());
    }
}
