//! Affine symplectic actions g·v = ρ(g)v + τ(g) on a vector space.

use rand::RngCore;

use crate::action::{gaussian, GroupAction, GroupLaw, HamiltonianAction};
use crate::error::{check_len, Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{CompatibleStructure, Mat, SymplecticSpace, Vector};

/// Infinitesimal data of an affine action: ρ′ and τ′ on a basis of the algebra.
///
/// Both are linear in ξ, so storing their values on basis vectors is enough.
#[derive(Clone, Debug)]
pub struct AffineActionSpec {
    space: SymplecticSpace,
    algebra: LieAlgebraSpec,
    structure: CompatibleStructure,
    rho_prime: Vec<Mat>,
    tau_prime: Mat,
    base_point: Vector,
}

impl AffineActionSpec {
    pub fn new(
        space: SymplecticSpace,
        algebra: LieAlgebraSpec,
        structure: CompatibleStructure,
        rho_prime: Vec<Mat>,
        tau_prime: Mat,
        base_point: Option<Vector>,
    ) -> Result<Self> {
        let n = space.dim();
        check_len(algebra.dim(), rho_prime.len())?;
        check_len(algebra.dim(), tau_prime.ncols())?;
        check_len(n, tau_prime.nrows())?;
        for (a, r) in rho_prime.iter().enumerate() {
            if r.nrows() != n || r.ncols() != n {
                return Err(Error::Dimension { expected: n, got: r.nrows() });
            }
            let d = space.sp_defect(r);
            if d > 1e-10 * (1.0 + r.amax()) {
                return Err(Error::Invalid(format!("ρ′(e{a}) is not in sp(V, ω) (defect {d:.3e})")));
            }
        }
        let base_point = base_point.unwrap_or_else(|| Vector::zeros(n));
        check_len(n, base_point.len())?;
        Ok(Self { space, algebra, structure, rho_prime, tau_prime, base_point })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn structure(&self) -> &CompatibleStructure {
        &self.structure
    }

    pub fn origin(&self) -> &Vector {
        &self.base_point
    }

    pub fn rho_prime(&self, xi: &Vector) -> Mat {
        let n = self.space.dim();
        self.rho_prime
            .iter()
            .zip(xi.iter())
            .fold(Mat::zeros(n, n), |acc, (r, &c)| if c == 0.0 { acc } else { acc + r * c })
    }

    pub fn tau_prime(&self, xi: &Vector) -> Vector {
        &self.tau_prime * xi
    }

    /// J(v) with κ(J(v), ξ) = ω(w, ξ·x₀) + ½ ω(w, ρ′(ξ) w), w = v − x₀; J(x₀) = 0.
    pub fn affine_momentum(&self, v: &Vector) -> Result<Vector> {
        check_len(self.space.dim(), v.len())?;
        Ok(self.momentum_unchecked(v))
    }

    fn momentum_unchecked(&self, v: &Vector) -> Vector {
        let w = v - &self.base_point;
        let f = Vector::from_fn(self.algebra.dim(), |a, _| {
            let at_base = &self.rho_prime[a] * &self.base_point + self.tau_prime.column(a);
            self.space.form(&w, &at_base) + 0.5 * self.space.form(&w, &(&self.rho_prime[a] * &w))
        });
        self.algebra.gram_inv() * f
    }

    /// Σ(ξ, η) = ω(τ′ξ, τ′η), the closed form for an origin-based affine action.
    pub fn sigma_closed_form(&self, xi: &Vector, eta: &Vector) -> f64 {
        self.space.form(&self.tau_prime(xi), &self.tau_prime(eta))
    }
}

impl HamiltonianAction for AffineActionSpec {
    fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    fn point_dim(&self) -> usize {
        self.space.dim()
    }

    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        self.rho_prime(xi) * m + self.tau_prime(xi)
    }

    fn momentum(&self, m: &Vector) -> Vector {
        self.momentum_unchecked(m)
    }

    fn omega_at(&self, _m: &Vector, x: &Vector, y: &Vector) -> f64 {
        self.space.form(x, y)
    }

    fn acs_at(&self, _m: &Vector, x: &Vector) -> Vector {
        self.structure.apply(x)
    }

    fn base_point(&self) -> Option<Vector> {
        Some(self.base_point.clone())
    }

    fn has_analytic_tangent(&self) -> bool {
        true
    }

    /// κ(dJ(X), ξ) = ω(X, ξ·v).
    fn momentum_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        let f = Vector::from_fn(self.algebra.dim(), |a, _| {
            let orbit = &self.rho_prime[a] * m + self.tau_prime.column(a);
            self.space.form(x, &orbit)
        });
        self.algebra.gram_inv() * f
    }

    fn linearize_isotropy(&self, sigma: &Vector, _m: &Vector, x: &Vector) -> Vector {
        self.rho_prime(sigma) * x
    }

    fn tangent_basis(&self, _m: &Vector) -> Mat {
        Mat::identity(self.space.dim(), self.space.dim())
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        &self.base_point + gaussian(rng, self.space.dim())
    }
}

/// Group-level data of an affine action.
pub trait AffineGroup: GroupAction<Action = AffineActionSpec> {
    fn rho(&self, g: &Self::Element) -> Mat;
    fn tau(&self, g: &Self::Element) -> Vector;

    fn affine_act(&self, g: &Self::Element, v: &Vector) -> Vector {
        self.rho(g) * v + self.tau(g)
    }
}

/// c(g₁, g₂) = ½ ω(τ(g₁), τ(g₁g₂)).
pub fn group_cocycle_c<G: AffineGroup>(group: &G, g1: &G::Element, g2: &G::Element) -> f64 {
    let space = group.action().space();
    0.5 * space.form(&group.tau(g1), &group.tau(&group.compose(g1, g2)))
}

/// ½ ω(x₀ − g₁⁻¹x₀, g₂x₀ − x₀), the base-point form of the same cocycle.
///
/// Agrees with [`group_cocycle_c`] at x₀ = 0 and differs by a coboundary otherwise.
pub fn group_cocycle_at<G: AffineGroup>(group: &G, g1: &G::Element, g2: &G::Element, x0: &Vector) -> f64 {
    let space = group.action().space();
    let a = x0 - group.affine_act(&group.inverse(g1), x0);
    let b = group.affine_act(g2, x0) - x0;
    0.5 * space.form(&a, &b)
}

/// Reduce to [0, 1).
pub fn mod1(z: f64) -> f64 {
    let r = z - z.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on ℝ/ℤ.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = mod1(a - b);
    d.min(1.0 - d)
}

/// (g₁, z₁)(g₂, z₂) = (g₁g₂, z₁ + z₂ + c(g₁, g₂) mod 1).
pub fn extension_multiply<L: GroupLaw>(
    group: &L,
    cocycle: impl Fn(&L::Element, &L::Element) -> f64,
    a: &(L::Element, f64),
    b: &(L::Element, f64),
) -> (L::Element, f64) {
    (group.compose(&a.0, &b.0), mod1(a.1 + b.1 + cocycle(&a.0, &b.0)))
}

/// |c(g₁,g₂) + c(g₁g₂,g₃) − c(g₂,g₃) − c(g₁,g₂g₃)| as a distance on ℝ/ℤ.
pub fn cocycle_identity_defect<L: GroupLaw>(
    group: &L,
    cocycle: impl Fn(&L::Element, &L::Element) -> f64,
    g1: &L::Element,
    g2: &L::Element,
    g3: &L::Element,
) -> f64 {
    let lhs = cocycle(g1, g2) + cocycle(&group.compose(g1, g2), g3);
    let rhs = cocycle(g2, g3) + cocycle(g1, &group.compose(g2, g3));
    circle_distance(lhs, rhs)
}

/// Same as [`cocycle_identity_defect`] but on ℝ rather than ℝ/ℤ.
pub fn cocycle_identity_defect_real<L: GroupLaw>(
    group: &L,
    cocycle: impl Fn(&L::Element, &L::Element) -> f64,
    g1: &L::Element,
    g2: &L::Element,
    g3: &L::Element,
) -> f64 {
    let lhs = cocycle(g1, g2) + cocycle(&group.compose(g1, g2), g3);
    let rhs = cocycle(g2, g3) + cocycle(g1, &group.compose(g2, g3));
    (lhs - rhs).abs()
}

/// Max ρᵀΩρ − Ω and max τ-cocycle-law defect over the given pairs.
pub fn affine_group_defects<G: AffineGroup>(group: &G, pairs: &[(G::Element, G::Element)]) -> (f64, f64) {
    let space = group.action().space();
    let mut sym = 0.0f64;
    let mut law = 0.0f64;
    for (g1, g2) in pairs {
        sym = sym.max(space.symplectic_defect(&group.rho(g1)));
        let lhs = group.tau(&group.compose(g1, g2));
        let rhs = group.tau(g1) + group.rho(g1) * group.tau(g2);
        law = law.max((lhs - rhs).amax());
    }
    (sym, law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::heisenberg::{build_heisenberg, Translations};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group() -> Translations {
        let space = SymplecticSpace::standard(2).unwrap();
        let j = CompatibleStructure::standard(&space).unwrap();
        Translations::new(build_heisenberg(&space, &j).unwrap())
    }

    #[test]
    fn momentum_vanishes_at_origin() {
        let g = group();
        assert_eq!(g.action().affine_momentum(&Vector::zeros(4)).unwrap(), Vector::zeros(4));
        assert!(g.action().affine_momentum(&Vector::zeros(3)).is_err());
    }

    #[test]
    fn heisenberg_cocycle_is_half_omega() {
        let g = group();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (a, b) = (g.sample(&mut rng), g.sample(&mut rng));
            let expected = 0.5 * g.action().space().form(&a, &b);
            assert!((group_cocycle_c(&g, &a, &b) - expected).abs() < 1e-12);
            assert!((group_cocycle_at(&g, &a, &b, &Vector::zeros(4)) - expected).abs() < 1e-12);
            assert_eq!(group_cocycle_c(&g, &g.identity(), &b), 0.0);
        }
    }

    #[test]
    fn extension_identity_and_center() {
        let g = group();
        let c = |a: &Vector, b: &Vector| group_cocycle_c(&g, a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = (g.sample(&mut rng), 0.25);
        let e = (g.identity(), 0.0);
        let y = extension_multiply(&g, c, &e, &x);
        assert_eq!(y.0, x.0);
        assert!(circle_distance(y.1, x.1) < 1e-15);
        let z = extension_multiply(&g, c, &(g.identity(), 0.7), &(g.identity(), 0.6));
        assert!(circle_distance(z.1, 0.3) < 1e-12);
    }

    #[test]
    fn mod1_range() {
        assert_eq!(mod1(-0.25), 0.75);
        assert_eq!(mod1(3.0), 0.0);
        assert!(circle_distance(0.99, 0.01) - 0.02 < 1e-12);
    }
}
