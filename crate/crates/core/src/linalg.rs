//! Constant symplectic linear algebra, compatible complex structures and the
//! Hermitian extension of a real pairing.
//!
//! Complex data is stored as `(re, im)` pairs; an ℝ-linear operator on a
//! complexification is stored as four real blocks acting by
//! `(t11 ξ₁ + t12 ξ₂) + i (t21 ξ₁ + t22 ξ₂)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Numerical tolerances shared by all checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for algebraic identities.
    pub algebraic: f64,
    /// Absolute floor added to relative tolerances.
    pub absolute: f64,
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
    /// Base finite-difference step, scaled by the point norm.
    pub fd_step: f64,
    /// Eigenvalue clusters merge when closer than `cluster * spectral radius`.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-9,
            absolute: 1e-12,
            rank: 1e-8,
            fd_step: 1e-5,
            cluster: 1e-6,
        }
    }
}

impl Tolerances {
    /// Tolerance for a quantity of size `scale`.
    pub fn scaled(&self, scale: f64) -> f64 {
        self.algebraic * scale + self.absolute
    }
}

/// A real vector space with a constant symplectic form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace {
    omega: Mat,
    poisson: Mat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Musical {
    Flat,
    Sharp,
}

impl SymplecticSpace {
    /// Build from a skew invertible matrix; the Poisson tensor is `-ω⁻¹`.
    pub fn new(omega: Mat) -> Result<Self> {
        let n = omega.nrows();
        if n == 0 || n % 2 != 0 || omega.ncols() != n {
            return Err(Error::Invalid(format!(
                "symplectic form must be square of even size, got {}x{}",
                n,
                omega.ncols()
            )));
        }
        let skew = (&omega + omega.transpose()).amax();
        if skew > 1e-12 * (1.0 + omega.amax()) {
            return Err(Error::Invalid(format!("form is not antisymmetric (defect {skew:.3e})")));
        }
        let inv = omega
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("symplectic form is degenerate".into()))?;
        let poisson = -inv;
        Ok(Self { omega, poisson })
    }

    /// Darboux form `[[0, I], [-I, 0]]`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("standard symplectic space needs n >= 1".into()));
        }
        let mut omega = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            omega[(i, n + i)] = 1.0;
            omega[(n + i, i)] = -1.0;
        }
        Self::new(omega)
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    pub fn poisson(&self) -> &Mat {
        &self.poisson
    }

    /// ω(x, y) = xᵀ Ω y.
    pub fn form(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.omega * y))
    }

    /// Lower or raise an index: flat(v)_i = ω_{ji} v^j, sharp(α)^j = ϖ^{ji} α_i.
    pub fn musical(&self, v: &Vector, direction: Musical) -> Result<Vector> {
        check_len(self.dim(), v.len())?;
        Ok(match direction {
            Musical::Flat => self.omega.tr_mul(v),
            Musical::Sharp => &self.poisson * v,
        })
    }

    pub fn flat(&self, v: &Vector) -> Result<Vector> {
        self.musical(v, Musical::Flat)
    }

    pub fn sharp(&self, a: &Vector) -> Result<Vector> {
        self.musical(a, Musical::Sharp)
    }

    /// max entry of ϖω + I.
    pub fn poisson_defect(&self) -> f64 {
        (&self.poisson * &self.omega + Mat::identity(self.dim(), self.dim())).amax()
    }

    /// ρᵀ Ω ρ − Ω, for testing whether ρ is symplectic.
    pub fn symplectic_defect(&self, rho: &Mat) -> f64 {
        (rho.transpose() * &self.omega * rho - &self.omega).amax()
    }

    /// Ω A + Aᵀ Ω, zero iff A ∈ sp(V, ω).
    pub fn sp_defect(&self, a: &Mat) -> f64 {
        (&self.omega * a + a.transpose() * &self.omega).amax()
    }
}

/// A complex structure j with ω(j·, j·) = ω and g = ω(·, j·) positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibleStructure {
    j: Mat,
    metric: Mat,
}

impl CompatibleStructure {
    pub fn new(space: &SymplecticSpace, j: Mat) -> Result<Self> {
        let n = space.dim();
        if j.nrows() != n || j.ncols() != n {
            return Err(Error::Dimension { expected: n, got: j.nrows() });
        }
        let square = (&j * &j + Mat::identity(n, n)).amax();
        if square > 1e-10 {
            return Err(Error::Invalid(format!("j² ≠ -I (defect {square:.3e})")));
        }
        let compat = (j.transpose() * space.omega() * &j - space.omega()).amax();
        if compat > 1e-10 * (1.0 + space.omega().amax()) {
            return Err(Error::Invalid(format!("j does not preserve ω (defect {compat:.3e})")));
        }
        let metric = space.omega() * &j;
        let asym = (&metric - metric.transpose()).amax();
        if asym > 1e-10 * (1.0 + metric.amax()) {
            return Err(Error::Invalid("ω(·, j·) is not symmetric".into()));
        }
        let min = SymmetricEigen::new(symmetrize(&metric)).eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::Invalid(format!("ω(·, j·) not positive definite (min eigenvalue {min:.3e})")));
        }
        Ok(Self { j, metric })
    }

    /// The structure `-Ω`, compatible with any form satisfying Ω² = −I.
    pub fn standard(space: &SymplecticSpace) -> Result<Self> {
        Self::new(space, -space.omega().clone())
    }

    pub fn matrix(&self) -> &Mat {
        &self.j
    }

    /// Gram matrix of g(X, Y) = ω(X, jY).
    pub fn metric(&self) -> &Mat {
        &self.metric
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.j * v
    }

    /// h(X, Y) = g(X, Y) − i ω(X, Y).
    pub fn hermitian(&self, space: &SymplecticSpace, x: &Vector, y: &Vector) -> Complex64 {
        Complex64::new(x.dot(&(&self.metric * y)), -space.form(x, y))
    }
}

/// ξ₁ + iξ₂ stored as two real vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    pub re: Vector,
    pub im: Vector,
}

impl ComplexVector {
    pub fn new(re: Vector, im: Vector) -> Result<Self> {
        check_len(re.len(), im.len())?;
        Ok(Self { re, im })
    }

    pub fn real(re: Vector) -> Self {
        let im = Vector::zeros(re.len());
        Self { re, im }
    }

    pub fn imaginary(im: Vector) -> Self {
        let re = Vector::zeros(im.len());
        Self { re, im }
    }

    pub fn zeros(n: usize) -> Self {
        Self::real(Vector::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Self {
        Self { re: -&self.im, im: self.re.clone() }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            re: &self.re * z.re - &self.im * z.im,
            im: &self.re * z.im + &self.im * z.re,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    /// Euclidean norm of the stacked real coordinates.
    pub fn norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }

    pub fn to_complex(&self) -> CVector {
        CVector::from_fn(self.len(), |i, _| Complex64::new(self.re[i], self.im[i]))
    }

    pub fn from_complex(v: &CVector) -> Self {
        Self {
            re: v.map(|z| z.re),
            im: v.map(|z| z.im),
        }
    }

    /// Stacked `(re, im)` real vector of twice the length.
    pub fn stacked(&self) -> Vector {
        let n = self.len();
        Vector::from_fn(2 * n, |i, _| if i < n { self.re[i] } else { self.im[i - n] })
    }

    pub fn from_stacked(v: &Vector) -> Self {
        let n = v.len() / 2;
        Self {
            re: v.rows(0, n).into_owned(),
            im: v.rows(n, n).into_owned(),
        }
    }
}

/// κ_C(ζ, γ) = κ(ξ₁,η₁) + κ(ξ₂,η₂) + i(κ(ξ₂,η₁) − κ(ξ₁,η₂)).
pub fn kappa_c(gram: &Mat, zeta: &ComplexVector, gamma: &ComplexVector) -> Result<Complex64> {
    let n = gram.nrows();
    check_len(n, gram.ncols())?;
    check_len(n, zeta.len())?;
    check_len(n, gamma.len())?;
    if (gram - gram.transpose()).amax() > 1e-12 * (1.0 + gram.amax()) {
        return Err(Error::Invalid("pairing matrix is not symmetric".into()));
    }
    Ok(kappa_c_unchecked(gram, zeta, gamma))
}

pub(crate) fn kappa_c_unchecked(gram: &Mat, zeta: &ComplexVector, gamma: &ComplexVector) -> Complex64 {
    let k = |a: &Vector, b: &Vector| a.dot(&(gram * b));
    Complex64::new(
        k(&zeta.re, &gamma.re) + k(&zeta.im, &gamma.im),
        k(&zeta.im, &gamma.re) - k(&zeta.re, &gamma.im),
    )
}

/// An ℝ-linear operator on a complexification, as four real blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    pub t11: Mat,
    pub t12: Mat,
    pub t21: Mat,
    pub t22: Mat,
}

impl BlockOperator {
    pub fn new(t11: Mat, t12: Mat, t21: Mat, t22: Mat) -> Result<Self> {
        let n = t11.nrows();
        for b in [&t11, &t12, &t21, &t22] {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Dimension { expected: n, got: b.nrows().max(b.ncols()) });
            }
        }
        Ok(Self { t11, t12, t21, t22 })
    }

    pub fn dim(&self) -> usize {
        self.t11.nrows()
    }

    pub fn identity(n: usize) -> Self {
        Self::from_complex_parts(&Mat::identity(n, n), &Mat::zeros(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_complex_parts(&Mat::zeros(n, n), &Mat::zeros(n, n))
    }

    /// Multiplication by i: blocks [[0, −I], [I, 0]].
    pub fn i_blocks(n: usize) -> Self {
        Self::from_complex_parts(&Mat::zeros(n, n), &Mat::identity(n, n))
    }

    /// S + iT as [[S, −T], [T, S]].
    pub fn from_complex_parts(s: &Mat, t: &Mat) -> Self {
        Self {
            t11: s.clone(),
            t12: -t,
            t21: t.clone(),
            t22: s.clone(),
        }
    }

    pub fn from_complex_matrix(m: &CMat) -> Self {
        Self::from_complex_parts(&m.map(|z| z.re), &m.map(|z| z.im))
    }

    /// The block matrix acting on stacked `(re, im)` coordinates.
    pub fn to_real(&self) -> Mat {
        let n = self.dim();
        let mut out = Mat::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&self.t11);
        out.view_mut((0, n), (n, n)).copy_from(&self.t12);
        out.view_mut((n, 0), (n, n)).copy_from(&self.t21);
        out.view_mut((n, n), (n, n)).copy_from(&self.t22);
        out
    }

    pub fn from_real(m: &Mat) -> Self {
        let n = m.nrows() / 2;
        Self {
            t11: m.view((0, 0), (n, n)).into_owned(),
            t12: m.view((0, n), (n, n)).into_owned(),
            t21: m.view((n, 0), (n, n)).into_owned(),
            t22: m.view((n, n), (n, n)).into_owned(),
        }
    }

    /// Max entry of the commutator with the i-blocks; zero iff complex-linear.
    pub fn complex_linearity_defect(&self) -> f64 {
        (&self.t11 - &self.t22).amax().max((&self.t12 + &self.t21).amax())
    }

    /// t11 + i t21, meaningful when the operator is complex-linear.
    pub fn to_complex_matrix(&self) -> CMat {
        let n = self.dim();
        CMat::from_fn(n, n, |i, j| Complex64::new(self.t11[(i, j)], self.t21[(i, j)]))
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_len(self.dim(), v.len())?;
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector {
            re: &self.t11 * &v.re + &self.t12 * &v.im,
            im: &self.t21 * &v.re + &self.t22 * &v.im,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::from_real(&(self.to_real() * other.to_real()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            t11: &self.t11 + &other.t11,
            t12: &self.t12 + &other.t12,
            t21: &self.t21 + &other.t21,
            t22: &self.t22 + &other.t22,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            t11: &self.t11 - &other.t11,
            t12: &self.t12 - &other.t12,
            t21: &self.t21 - &other.t21,
            t22: &self.t22 - &other.t22,
        }
    }

    pub fn amax(&self) -> f64 {
        self.t11
            .amax()
            .max(self.t12.amax())
            .max(self.t21.amax())
            .max(self.t22.amax())
    }

    /// Adjoint with respect to Re κ_C, i.e. the block matrix K̂⁻¹ Tᵀ K̂ with K̂ = diag(K, K).
    ///
    /// For complex-linear operators this is also the κ_C-Hermitian adjoint.
    pub fn kappa_adjoint(&self, gram: &Mat, gram_inv: &Mat) -> Self {
        let k = block_diag(gram);
        let kinv = block_diag(gram_inv);
        Self::from_real(&(kinv * self.to_real().transpose() * k))
    }
}

pub fn block_apply(op: &BlockOperator, v: &ComplexVector) -> Result<ComplexVector> {
    op.apply(v)
}

/// diag(K, K).
pub fn block_diag(k: &Mat) -> Mat {
    let n = k.nrows();
    let mut out = Mat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(k);
    out.view_mut((n, n), (n, n)).copy_from(k);
    out
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Largest singular value.
pub fn op_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn op_norm_c(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Result of a numerical kernel computation.
#[derive(Clone, Debug)]
pub struct Kernel<T: nalgebra::Scalar> {
    /// Orthonormal basis of the kernel, one column per vector.
    pub basis: DMatrix<T>,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// Ratio between the smallest kept and the largest dropped singular value.
    pub gap: f64,
}

impl<T: nalgebra::Scalar> Kernel<T> {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn split_singular(values: &[f64], rel: f64) -> (usize, f64) {
    let smax = values.first().copied().unwrap_or(0.0);
    let thresh = rel * smax;
    let rank = values.iter().filter(|&&s| s > thresh && s > 0.0).count();
    let kept = if rank == 0 { f64::INFINITY } else { values[rank - 1] };
    let dropped = values.get(rank).copied().unwrap_or(0.0);
    let gap = if dropped == 0.0 { f64::INFINITY } else { kept / dropped };
    (rank, gap)
}

/// Kernel of a real matrix by SVD with relative threshold.
pub fn kernel(a: &Mat, rel: f64) -> Kernel<f64> {
    let c = a.ncols();
    let mut padded = Mat::zeros(a.nrows().max(c), c);
    padded.view_mut((0, 0), (a.nrows(), c)).copy_from(a);
    let svd = SVD::new(padded, false, true);
    let vt = svd.v_t.expect("requested V");
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (rank, gap) = split_singular(&values, rel);
    let basis = vt.rows(rank, c - rank).transpose();
    Kernel { basis, singular_values: values, gap }
}

/// Kernel of a complex matrix by SVD with relative threshold.
pub fn kernel_c(a: &CMat, rel: f64) -> Kernel<Complex64> {
    let c = a.ncols();
    let mut padded = CMat::zeros(a.nrows().max(c), c);
    padded.view_mut((0, 0), (a.nrows(), c)).copy_from(a);
    let svd = SVD::new(padded, false, true);
    let vt = svd.v_t.expect("requested V");
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (rank, gap) = split_singular(&values, rel);
    let basis = vt.rows(rank, c - rank).adjoint();
    Kernel { basis, singular_values: values, gap }
}

/// Orthonormal basis of the column span.
pub fn range(a: &Mat, rel: f64) -> Mat {
    if a.ncols() == 0 {
        return Mat::zeros(a.nrows(), 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("requested U");
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (rank, _) = split_singular(&values, rel);
    u.columns(0, rank).into_owned()
}

/// Largest principal angle between two column spans (bases need not be orthonormal).
///
/// Returns π/2 when the dimensions differ.
pub fn max_principal_angle(a: &Mat, b: &Mat) -> f64 {
    let qa = range(a, 1e-12);
    let qb = range(b, 1e-12);
    if qa.ncols() != qb.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let resid = &qa - &qb * (qb.transpose() * &qa);
    op_norm(&resid).min(1.0).asin()
}

/// Distance of a vector from a column span with orthonormal basis `q`.
pub fn distance_to_span(q: &Mat, v: &Vector) -> f64 {
    if q.ncols() == 0 {
        return v.norm();
    }
    (v - q * (q.transpose() * v)).norm()
}

/// Real span of a family of complex columns: each column z contributes z and iz in stacked coordinates.
pub fn realify_columns(z: &CMat) -> Mat {
    let n = z.nrows();
    let k = z.ncols();
    let mut out = Mat::zeros(2 * n, 2 * k);
    for c in 0..k {
        for r in 0..n {
            let v = z[(r, c)];
            out[(r, 2 * c)] = v.re;
            out[(n + r, 2 * c)] = v.im;
            out[(r, 2 * c + 1)] = -v.im;
            out[(n + r, 2 * c + 1)] = v.re;
        }
    }
    out
}

/// Cross product as a skew matrix: hat(a) b = a × b.
pub fn hat(a: &[f64]) -> Mat {
    Mat::from_row_slice(3, 3, &[0.0, -a[2], a[1], a[2], 0.0, -a[0], -a[1], a[0], 0.0])
}

pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Matrix exponential.
pub fn expm(a: &Mat) -> Mat {
    a.clone().exp()
}

/// Row-major flattening of a square matrix.
pub fn flatten(m: &Mat) -> Vector {
    let n = m.nrows();
    Vector::from_fn(n * m.ncols(), |k, _| m[(k / n, k % n)])
}

pub fn unflatten(v: &Vector, n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| v[i * n + j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_form_n1() {
        let s = SymplecticSpace::standard(1).unwrap();
        assert_eq!(s.omega(), &Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert!(s.poisson_defect() < 1e-15);
    }

    #[test]
    fn standard_form_rejects_zero() {
        assert!(SymplecticSpace::standard(0).is_err());
    }

    #[test]
    fn poisson_equals_omega_for_darboux_n3() {
        let s = SymplecticSpace::standard(3).unwrap();
        // independent inverse by LU
        let inv = s.omega().clone().lu().try_inverse().unwrap();
        assert_relative_eq!(s.poisson(), &(-inv), epsilon = 1e-14);
        assert_relative_eq!(s.poisson(), s.omega(), epsilon = 1e-14);
        assert!((s.omega() + s.omega().transpose()).amax() == 0.0);
    }

    #[test]
    fn flat_by_index_formula() {
        let s = SymplecticSpace::standard(1).unwrap();
        let v = Vector::from_vec(vec![1.0, 0.0]);
        // flat(v)_i = ω_{ji} v^j = ω_{0i}: (ω_00, ω_01) = (0, 1)
        let f = s.flat(&v).unwrap();
        assert_eq!(f, Vector::from_vec(vec![0.0, 1.0]));
        assert_relative_eq!(s.sharp(&f).unwrap(), v, epsilon = 1e-15);
        assert_eq!(s.flat(&Vector::zeros(2)).unwrap(), Vector::zeros(2));
        assert!(s.flat(&Vector::zeros(3)).is_err());
    }

    #[test]
    fn kappa_c_cases() {
        let k = Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let eta = Vector::from_vec(vec![1.0, -2.0]);
        let r = kappa_c(&k, &ComplexVector::real(eta.clone()), &ComplexVector::real(eta.clone())).unwrap();
        assert_relative_eq!(r.re, eta.dot(&(&k * &eta)));
        assert_eq!(r.im, 0.0);
        let z = kappa_c(&k, &ComplexVector::imaginary(eta.clone()), &ComplexVector::real(eta.clone())).unwrap();
        assert_relative_eq!(z.re, 0.0);
        assert_relative_eq!(z.im, eta.dot(&(&k * &eta)));
        let bad = Mat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(kappa_c(&bad, &ComplexVector::zeros(2), &ComplexVector::zeros(2)).is_err());
    }

    #[test]
    fn block_conventions() {
        let v = ComplexVector::new(Vector::from_vec(vec![1.0, 2.0]), Vector::from_vec(vec![3.0, 4.0])).unwrap();
        assert_eq!(BlockOperator::identity(2).apply(&v).unwrap(), v);
        let iv = BlockOperator::i_blocks(2).apply(&v).unwrap();
        assert_eq!(iv.re, -&v.im);
        assert_eq!(iv.im, v.re);
        let s = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let t = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 5.0]);
        let x = Vector::from_vec(vec![0.3, -0.7]);
        let out = BlockOperator::from_complex_parts(&s, &t).apply(&ComplexVector::real(x.clone())).unwrap();
        assert_relative_eq!(out.re, &s * &x);
        assert_relative_eq!(out.im, &t * &x);
    }

    #[test]
    fn standard_structure_is_compatible() {
        for n in 1..4 {
            let s = SymplecticSpace::standard(n).unwrap();
            let j = CompatibleStructure::standard(&s).unwrap();
            assert_relative_eq!(j.metric(), &Mat::identity(2 * n, 2 * n), epsilon = 1e-15);
        }
        let s = SymplecticSpace::standard(1).unwrap();
        assert!(CompatibleStructure::new(&s, s.omega().clone()).is_err());
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let a = Mat::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = kernel(&a, 1e-8);
        assert_eq!(k.dim(), 2);
        assert!((&a * &k.basis).amax() < 1e-14);
    }

    #[test]
    fn principal_angle_of_equal_spans() {
        let a = Mat::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let b = Mat::from_row_slice(3, 2, &[1.0, 1.0, 1.0, -1.0, 0.0, 0.0]);
        assert!(max_principal_angle(&a, &b) < 1e-12);
        let c = Mat::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!((max_principal_angle(&a, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
