//! A symplectic vector space acting on itself by translations.

use rand::RngCore;

use crate::action::{gaussian, GroupAction, GroupLaw};
use crate::affine::{AffineActionSpec, AffineGroup};
use crate::error::Result;
use crate::lie::LieAlgebraSpec;
use crate::linalg::{CompatibleStructure, Mat, SymplecticSpace, Vector};

/// Translations of (V, ω) with κ = g; ρ = id and τ = id.
pub fn build_heisenberg(space: &SymplecticSpace, j: &CompatibleStructure) -> Result<AffineActionSpec> {
    let n = space.dim();
    let algebra = LieAlgebraSpec::abelian(n, j.metric().clone())?;
    AffineActionSpec::new(
        space.clone(),
        algebra,
        j.clone(),
        vec![Mat::zeros(n, n); n],
        Mat::identity(n, n),
        None,
    )
}

/// The translation group V.
#[derive(Clone, Debug)]
pub struct Translations {
    spec: AffineActionSpec,
}

impl Translations {
    pub fn new(spec: AffineActionSpec) -> Self {
        Self { spec }
    }
}

impl GroupLaw for Translations {
    type Element = Vector;

    fn identity(&self) -> Vector {
        Vector::zeros(self.spec.space().dim())
    }

    fn compose(&self, g: &Vector, h: &Vector) -> Vector {
        g + h
    }

    fn inverse(&self, g: &Vector) -> Vector {
        -g
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vector {
        gaussian(rng, self.spec.space().dim())
    }
}

impl GroupAction for Translations {
    type Action = AffineActionSpec;

    fn action(&self) -> &AffineActionSpec {
        &self.spec
    }

    fn act(&self, g: &Vector, m: &Vector) -> Vector {
        m + g
    }

    fn adjoint(&self, _g: &Vector) -> Mat {
        let n = self.spec.space().dim();
        Mat::identity(n, n)
    }

    fn exp(&self, xi: &Vector) -> Vector {
        xi.clone()
    }
}

impl AffineGroup for Translations {
    fn rho(&self, _g: &Vector) -> Mat {
        let n = self.spec.space().dim();
        Mat::identity(n, n)
    }

    fn tau(&self, g: &Vector) -> Vector {
        g.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{sigma_kappa_map, HamiltonianAction};
    use crate::normsq::{build_operators, NormSquared};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize) -> AffineActionSpec {
        let space = SymplecticSpace::standard(n).unwrap();
        // a non-standard compatible structure: conjugate by a symplectic shear
        let mut s = Mat::identity(2 * n, 2 * n);
        s[(0, n)] = 0.7;
        let j0 = CompatibleStructure::standard(&space).unwrap();
        let jm = &s * j0.matrix() * s.clone().try_inverse().unwrap();
        let j = CompatibleStructure::new(&space, jm).unwrap();
        build_heisenberg(&space, &j).unwrap()
    }

    #[test]
    fn sigma_kappa_is_j() {
        let spec = spec(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = spec.sample_point(&mut rng);
        let s = sigma_kappa_map(&spec, &m);
        assert!((s - spec.structure().matrix()).amax() < 1e-12);
    }

    #[test]
    fn lichnerowicz_is_minus_identity() {
        let spec = spec(2);
        let m = Vector::from_vec(vec![0.3, -1.0, 2.0, 0.5]);
        let ops = build_operators(&spec, &m).unwrap();
        assert!((ops.l + Mat::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn norm_squared_is_metric_and_zero_is_critical() {
        let spec = spec(1);
        let v = Vector::from_vec(vec![0.4, -1.3]);
        let f = NormSquared::new(&spec).value(&v);
        let g = v.dot(&(spec.structure().metric() * &v));
        assert!((f - g).abs() < 1e-12);
        let (_, grad) = NormSquared::new(&spec).value_and_gradient(&Vector::zeros(2)).unwrap();
        assert_eq!(grad.norm(), 0.0);
    }
}
