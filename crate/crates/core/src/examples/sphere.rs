//! SO(3) acting on the coadjoint orbit S² with ω = s·vol and J(x) = −s x.

use rand::RngCore;

use crate::action::{gaussian, unit_gaussian, GroupAction, GroupLaw, HamiltonianAction};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{cross, expm, hat, Mat, Vector};

#[derive(Clone, Debug)]
pub struct SphereSpec {
    radius: f64,
    algebra: LieAlgebraSpec,
}

/// so(3) with κ = Euclidean (a multiple of the Killing form) acting by rotations.
pub fn build_sphere(radius: f64) -> Result<SphereSpec> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    Ok(SphereSpec { radius, algebra: LieAlgebraSpec::so3(Mat::identity(3, 3))? })
}

impl SphereSpec {
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn arr(v: &Vector) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

impl HamiltonianAction for SphereSpec {
    fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    fn point_dim(&self) -> usize {
        3
    }

    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        Vector::from_row_slice(&cross(&arr(xi), &arr(m)))
    }

    fn momentum(&self, m: &Vector) -> Vector {
        m * -self.radius
    }

    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64 {
        self.radius * m.dot(&Vector::from_row_slice(&cross(&arr(x), &arr(y))))
    }

    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector {
        Vector::from_row_slice(&cross(&arr(m), &arr(x)))
    }

    fn has_analytic_tangent(&self) -> bool {
        true
    }

    fn momentum_tangent(&self, _m: &Vector, x: &Vector) -> Vector {
        x * -self.radius
    }

    fn project_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        x - m * m.dot(x)
    }

    fn retract(&self, m: &Vector, x: &Vector) -> Vector {
        (m + x).normalize()
    }

    fn linearize_isotropy(&self, sigma: &Vector, m: &Vector, x: &Vector) -> Vector {
        self.project_tangent(m, &self.inf_action(sigma, x))
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        unit_gaussian(rng, 3)
    }
}

/// SO(3) as rotation matrices.
#[derive(Clone, Debug)]
pub struct Rotations {
    spec: SphereSpec,
}

impl Rotations {
    pub fn new(spec: SphereSpec) -> Self {
        Self { spec }
    }
}

impl GroupLaw for Rotations {
    type Element = Mat;

    fn identity(&self) -> Mat {
        Mat::identity(3, 3)
    }

    fn compose(&self, g: &Mat, h: &Mat) -> Mat {
        g * h
    }

    fn inverse(&self, g: &Mat) -> Mat {
        g.transpose()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Mat {
        self.exp(&gaussian(rng, 3))
    }
}

impl GroupAction for Rotations {
    type Action = SphereSpec;

    fn action(&self) -> &SphereSpec {
        &self.spec
    }

    fn act(&self, g: &Mat, m: &Vector) -> Vector {
        g * m
    }

    fn adjoint(&self, g: &Mat) -> Mat {
        g.clone()
    }

    fn exp(&self, xi: &Vector) -> Mat {
        expm(&hat(xi.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{momentum_defect, sigma_one_cocycle, Derivative};
    use crate::normsq::criticality_residual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn momentum_identity_and_equivariance() {
        let spec = build_sphere(1.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let m = spec.sample_point(&mut rng);
        assert!(momentum_defect(&spec, &m, 20, Derivative::Native, &mut rng).unwrap() < 1e-12);
        assert!(momentum_defect(&spec, &m, 20, Derivative::FiniteDifference(1e-5), &mut rng).unwrap() < 1e-8);
        assert!(criticality_residual(&spec, &m) < 1e-14);
        let group = Rotations::new(spec);
        let g = group.sample(&mut rng);
        assert!(sigma_one_cocycle(&group, &g, &m).amax() < 1e-12);
        let xi = gaussian(&mut rng, 3);
        let h = 1e-6;
        let fd = (group.act(&group.exp(&(&xi * h)), &m) - group.act(&group.exp(&(&xi * -h)), &m)) / (2.0 * h);
        assert!((fd - group.action().inf_action(&xi, &m)).amax() < 1e-8);
    }
}
