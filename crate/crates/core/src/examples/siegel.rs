//! Sp(V, ω) acting by conjugation on the compatible complex structures of (V, ω).
//!
//! Points are j flattened row-major. Tangent vectors A satisfy jA + Aj = 0 with
//! ωA symmetric; Ω_j(A, B) = ¼tr(AjB) and the complex structure is A ↦ −jA.
//! Algebra elements are ω⁻¹S with S symmetric, paired by κ(α, ξ) = ½tr(αξ).

use rand::RngCore;

use crate::action::{gaussian, GroupAction, GroupLaw, HamiltonianAction};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{expm, flatten, unflatten, CompatibleStructure, Mat, SymplecticSpace, Vector};

#[derive(Clone, Debug)]
pub struct SiegelSpec {
    space: SymplecticSpace,
    j0: Mat,
    algebra: LieAlgebraSpec,
    basis: Vec<Mat>,
    /// Scale of the random sp elements used to sample points.
    pub sample_scale: f64,
}

fn symmetric_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            out.push((a, b));
        }
    }
    out
}

/// The Siegel example on (V, ω) with base point j₀; J(j) = j − j₀.
pub fn build_siegel(space: &SymplecticSpace, j0: &CompatibleStructure) -> Result<SiegelSpec> {
    let d = space.dim();
    let omega_inv = -space.poisson();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for (a, b) in symmetric_pairs(d) {
        let mut s = Mat::zeros(d, d);
        s[(a, b)] = 1.0;
        s[(b, a)] = 1.0;
        basis.push(&omega_inv * s);
        labels.push(format!("s{a}{b}"));
    }
    let k = basis.len();
    let gram = Mat::from_fn(k, k, |a, b| 0.5 * (&basis[a] * &basis[b]).trace());
    let algebra = LieAlgebraSpec::from_matrix_basis(&basis, gram, labels)?;
    Ok(SiegelSpec { space: space.clone(), j0: j0.matrix().clone(), algebra, basis, sample_scale: 0.4 })
}

impl SiegelSpec {
    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn j0(&self) -> &Mat {
        &self.j0
    }

    pub fn base(&self) -> Vector {
        flatten(&self.j0)
    }

    pub fn algebra_matrix(&self, xi: &Vector) -> Mat {
        let d = self.space.dim();
        let mut m = Mat::zeros(d, d);
        for (k, b) in self.basis.iter().enumerate() {
            m += b * xi[k];
        }
        m
    }

    /// Coordinates of α ∈ sp: the entries of the symmetric matrix ωα.
    pub fn coordinates(&self, alpha: &Mat) -> Vector {
        let s = self.space.omega() * alpha;
        let pairs = symmetric_pairs(self.space.dim());
        Vector::from_iterator(pairs.len(), pairs.iter().map(|&(a, b)| 0.5 * (s[(a, b)] + s[(b, a)])))
    }

    pub fn point(&self, m: &Vector) -> Mat {
        unflatten(m, self.space.dim())
    }

    /// S j₀ S⁻¹ with S = exp(ξ) for a random ξ ∈ sp of the given scale.
    pub fn random_structure(&self, rng: &mut dyn RngCore, scale: f64) -> Mat {
        let xi = gaussian(rng, self.algebra.dim()) * scale;
        let s = expm(&self.algebra_matrix(&xi));
        let si = s.clone().try_inverse().expect("exp of sp is invertible");
        &s * &self.j0 * si
    }

    /// Defect of j as a compatible structure: max(‖j² + I‖, ‖ωj − (ωj)ᵀ‖).
    pub fn compatibility_defect(&self, j: &Mat) -> f64 {
        let d = self.space.dim();
        let sq = (j * j + Mat::identity(d, d)).amax();
        let g = self.space.omega() * j;
        sq.max((&g - g.transpose()).amax())
    }
}

impl HamiltonianAction for SiegelSpec {
    fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    fn point_dim(&self) -> usize {
        let d = self.space.dim();
        d * d
    }

    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        let x = self.algebra_matrix(xi);
        let j = self.point(m);
        flatten(&(&x * &j - &j * &x))
    }

    fn momentum(&self, m: &Vector) -> Vector {
        self.coordinates(&(self.point(m) - &self.j0))
    }

    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64 {
        let d = self.space.dim();
        0.25 * (unflatten(x, d) * self.point(m) * unflatten(y, d)).trace()
    }

    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector {
        flatten(&-(self.point(m) * unflatten(x, self.space.dim())))
    }

    fn base_point(&self) -> Option<Vector> {
        Some(self.base())
    }

    fn has_analytic_tangent(&self) -> bool {
        true
    }

    fn momentum_tangent(&self, _m: &Vector, x: &Vector) -> Vector {
        self.coordinates(&unflatten(x, self.space.dim()))
    }

    /// ½(B + jBj) with B the sp part of A.
    fn project_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        let d = self.space.dim();
        let a = unflatten(x, d);
        let s = self.space.omega() * &a;
        let b = -self.space.poisson() * (&s + s.transpose()) * 0.5;
        let j = self.point(m);
        flatten(&((&b + &j * &b * &j) * 0.5))
    }

    /// e^X j e^{−X} with X = ½jA.
    fn retract(&self, m: &Vector, x: &Vector) -> Vector {
        let d = self.space.dim();
        let j = self.point(m);
        let xm = &j * unflatten(x, d) * 0.5;
        flatten(&(expm(&xm) * &j * expm(&-xm)))
    }

    fn linearize_isotropy(&self, sigma: &Vector, m: &Vector, x: &Vector) -> Vector {
        let s = self.algebra_matrix(sigma);
        let a = unflatten(x, self.space.dim());
        self.project_tangent(m, &flatten(&(&s * &a - &a * &s)))
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        flatten(&self.random_structure(rng, self.sample_scale))
    }
}

/// φ_{j₀}(j) = (j + j₀)⁻¹(j − j₀).
pub fn cayley(j0: &Mat, j: &Mat) -> Result<Mat> {
    let sum = (j + j0).lu();
    sum.solve(&(j - j0))
        .ok_or_else(|| Error::Numerical("Cayley transform: j + j0 is singular".into()))
}

/// φ_{j₀}⁻¹(S) = j₀(I + S)(I − S)⁻¹.
pub fn cayley_inverse(j0: &Mat, s: &Mat) -> Result<Mat> {
    let d = s.nrows();
    let id = Mat::identity(d, d);
    // X(I − S) = j₀(I + S)  ⇔  (I − S)ᵀXᵀ = (j₀(I + S))ᵀ
    let rhs = (j0 * (&id + s)).transpose();
    (&id - s)
        .transpose()
        .lu()
        .solve(&rhs)
        .map(|x| x.transpose())
        .ok_or_else(|| Error::Numerical("inverse Cayley transform: I - S is singular".into()))
}

/// Λ(j₀, j, t) = φ_{j₀}⁻¹(tφ_{j₀}(j)) on flattened structures.
#[derive(Clone, Copy, Debug)]
pub struct CayleyContraction {
    pub dim: usize,
}

impl Contraction for CayleyContraction {
    fn lambda(&self, m0: &Vector, m: &Vector, t: f64) -> Vector {
        let j0 = unflatten(m0, self.dim);
        let j = unflatten(m, self.dim);
        let s = cayley(&j0, &j).expect("compatible structures have invertible j + j0");
        flatten(&cayley_inverse(&j0, &(s * t)).expect("t·S stays in the unit ball"))
    }
}

/// ¼tr(φ_{j₀}(j)A), the closed form of both contraction integrals.
pub fn cayley_pairing(j0: &Mat, j: &Mat, a: &Mat) -> Result<f64> {
    Ok(0.25 * (cayley(j0, j)? * a).trace())
}

/// Sp(V, ω) as matrices acting by conjugation.
#[derive(Clone, Debug)]
pub struct SymplecticGroup {
    spec: SiegelSpec,
    /// Scale of the random algebra elements exponentiated by `sample`.
    pub sample_scale: f64,
}

impl SymplecticGroup {
    pub fn new(spec: SiegelSpec) -> Self {
        Self { spec, sample_scale: 0.3 }
    }
}

impl GroupLaw for SymplecticGroup {
    type Element = Mat;

    fn identity(&self) -> Mat {
        let d = self.spec.space.dim();
        Mat::identity(d, d)
    }

    fn compose(&self, g: &Mat, h: &Mat) -> Mat {
        g * h
    }

    /// g⁻¹ = ω⁻¹gᵀω, with ω⁻¹ = −ϖ.
    fn inverse(&self, g: &Mat) -> Mat {
        let omega = self.spec.space.omega();
        -self.spec.space.poisson() * g.transpose() * omega
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Mat {
        let xi = gaussian(rng, self.spec.algebra.dim()) * self.sample_scale;
        self.exp(&xi)
    }
}

impl GroupAction for SymplecticGroup {
    type Action = SiegelSpec;

    fn action(&self) -> &SiegelSpec {
        &self.spec
    }

    fn act(&self, g: &Mat, m: &Vector) -> Vector {
        let j = self.spec.point(m);
        flatten(&(g * j * self.inverse(g)))
    }

    fn adjoint(&self, g: &Mat) -> Mat {
        let gi = self.inverse(g);
        let cols: Vec<Vector> = self.spec.basis.iter().map(|b| self.spec.coordinates(&(g * b * &gi))).collect();
        Mat::from_columns(&cols)
    }

    fn exp(&self, xi: &Vector) -> Mat {
        expm(&self.spec.algebra_matrix(xi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{acs_defects, momentum_defect, sigma_one_cocycle, Derivative};
    use crate::contraction::ContractionSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize) -> SiegelSpec {
        let space = SymplecticSpace::standard(n).unwrap();
        let j0 = CompatibleStructure::standard(&space).unwrap();
        build_siegel(&space, &j0).unwrap()
    }

    #[test]
    fn random_structures_are_compatible() {
        let s = spec(2);
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..10 {
            let j = s.random_structure(&mut rng, 0.5);
            assert!(s.compatibility_defect(&j) < 1e-10);
            assert!(CompatibleStructure::new(s.space(), j).is_ok());
        }
    }

    #[test]
    fn momentum_identity_and_structure() {
        let s = spec(2);
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        assert!(s.momentum(&s.base()).amax() == 0.0);
        for _ in 0..5 {
            let m = s.sample_point(&mut rng);
            assert!(momentum_defect(&s, &m, 20, Derivative::Native, &mut rng).unwrap() < 1e-12);
            assert!(momentum_defect(&s, &m, 20, Derivative::FiniteDifference(1e-5), &mut rng).unwrap() < 1e-7);
            let (sq, compat, pos) = acs_defects(&s, &m, 10, &mut rng);
            assert!(sq < 1e-10 && compat < 1e-10 && pos > 0.0, "{sq} {compat} {pos}");
        }
    }

    #[test]
    fn group_action_and_equivariance() {
        let s = spec(1);
        let group = SymplecticGroup::new(s.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let m = s.sample_point(&mut rng);
        let g = group.sample(&mut rng);
        assert!((group.compose(&g, &group.inverse(&g)) - Mat::identity(2, 2)).amax() < 1e-12);
        // σ(g) = J(g·j₀), independent of the point
        let expected = s.momentum(&group.act(&g, &s.base()));
        assert!((sigma_one_cocycle(&group, &g, &m) - &expected).amax() < 1e-10);
        let m2 = s.sample_point(&mut rng);
        assert!((sigma_one_cocycle(&group, &g, &m2) - &expected).amax() < 1e-10);
        let xi = gaussian(&mut rng, 3);
        let h = 1e-6;
        let fd = (group.act(&group.exp(&(&xi * h)), &m) - group.act(&group.exp(&(&xi * -h)), &m)) / (2.0 * h);
        assert!((fd - s.inf_action(&xi, &m)).amax() < 1e-8);
    }

    #[test]
    fn cayley_endpoints_and_lemma() {
        let s = spec(2);
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let j = s.random_structure(&mut rng, 0.5);
        assert!(cayley(s.j0(), s.j0()).unwrap().amax() == 0.0);
        let c = ContractionSpec::new(CayleyContraction { dim: 4 });
        let (m0, m) = (s.base(), flatten(&j));
        assert!(c.endpoint_defect(&m0, &m, 0.3) < 1e-12);
        let a = s.sample_tangent(&m, &mut rng);
        let first = c.pullback_integral(&s, &m0, &m, Some(&a), None, 32);
        let expect = cayley_pairing(s.j0(), &j, &unflatten(&a, 4)).unwrap();
        assert!((first - expect).abs() < 1e-7, "{first} {expect}");
        let a0 = s.sample_tangent(&m0, &mut rng);
        let second = c.pullback_integral(&s, &m0, &m, None, Some(&a0), 32);
        let expect = cayley_pairing(s.j0(), &j, &unflatten(&a0, 4)).unwrap();
        assert!((second - expect).abs() < 1e-7, "{second} {expect}");
    }
}
