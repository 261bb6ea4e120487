//! Lie algebras given by structure constants together with a pairing κ.

use std::path::Path;

use crate::error::{check_len, Error, Result};
use crate::linalg::{op_norm, BlockOperator, ComplexVector, Mat, Vector};

/// A finite-dimensional real Lie algebra with a nondegenerate symmetric pairing.
///
/// The pairing is never assumed to be ad-invariant.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    dim: usize,
    /// c[i][j][k] flattened, with [e_i, e_j] = Σ_k c[i][j][k] e_k.
    structure: Vec<f64>,
    gram: Mat,
    gram_inv: Mat,
    labels: Vec<String>,
}

/// Largest Jacobi defect over basis triples and where it occurs.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub max_defect: f64,
    pub triple: Option<(usize, usize, usize)>,
}

impl LieAlgebraSpec {
    pub fn new(dim: usize, structure: Vec<f64>, gram: Mat, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("algebra dimension must be positive".into()));
        }
        check_len(dim * dim * dim, structure.len())?;
        if gram.nrows() != dim || gram.ncols() != dim {
            return Err(Error::Dimension { expected: dim, got: gram.nrows() });
        }
        let scale = 1.0 + gram.amax();
        if (&gram - gram.transpose()).amax() > 1e-12 * scale {
            return Err(Error::Invalid("pairing matrix is not symmetric".into()));
        }
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("pairing matrix is singular".into()))?;
        let labels = if labels.is_empty() {
            (0..dim).map(|i| format!("e{i}")).collect()
        } else {
            check_len(dim, labels.len())?;
            labels
        };
        let alg = Self { dim, structure, gram, gram_inv, labels };
        let cmax = alg.structure.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let d = alg.c(i, j, k) + alg.c(j, i, k);
                    if d.abs() > 1e-12 * (1.0 + cmax) {
                        return Err(Error::Invalid(format!(
                            "structure constants not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Build from entries [e_i, e_j] = c e_k; the antisymmetric partners are filled in.
    ///
    /// Listing both (i, j) and (j, i) is allowed only when the values are consistent.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, f64)], gram: Mat, labels: Vec<String>) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        let mut seen = vec![false; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Invalid(format!("bracket index ({i},{j},{k}) out of range")));
            }
            if i == j && v != 0.0 {
                return Err(Error::Invalid(format!("[e{i}, e{i}] must vanish")));
            }
            let a = (i * dim + j) * dim + k;
            let b = (j * dim + i) * dim + k;
            if seen[a] && (c[a] - v).abs() > 1e-12 {
                return Err(Error::Invalid(format!("conflicting entries for [e{i}, e{j}]")));
            }
            c[a] = v;
            c[b] = -v;
            seen[a] = true;
            seen[b] = true;
        }
        Self::new(dim, c, gram, labels)
    }

    /// Structure constants of a matrix Lie algebra spanned by `basis`.
    ///
    /// Fails if the span is not closed under commutators.
    pub fn from_matrix_basis(basis: &[Mat], gram: Mat, labels: Vec<String>) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::Invalid("empty basis".into()));
        }
        let n = basis[0].nrows();
        let coords = Mat::from_fn(n * n, d, |r, c| basis[c][(r / n, r % n)]);
        let svd = coords.clone().svd(true, true);
        let mut c = vec![0.0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let rhs = Vector::from_fn(n * n, |r, _| comm[(r / n, r % n)]);
                let x = svd
                    .solve(&rhs, 1e-12)
                    .map_err(|e| Error::Numerical(e.to_string()))?;
                let resid = (&coords * &x - &rhs).amax();
                if resid > 1e-9 * (1.0 + rhs.amax()) {
                    return Err(Error::Invalid(format!("basis not closed under bracket at ({i},{j})")));
                }
                for k in 0..d {
                    c[(i * d + j) * d + k] = if x[k].abs() < 1e-14 { 0.0 } else { x[k] };
                }
            }
        }
        Self::new(d, c, gram, labels)
    }

    pub fn abelian(dim: usize, gram: Mat) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim * dim], gram, Vec::new())
    }

    /// so(3) with [e_i, e_j] = ε_{ijk} e_k.
    pub fn so3(gram: Mat) -> Result<Self> {
        Self::from_brackets(
            3,
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
            gram,
            vec!["e1".into(), "e2".into(), "e3".into()],
        )
    }

    /// Load from a TOML file with keys `dim`, `gram`, `brackets` (rows `[i, j, k, c]`), optional `labels`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let value: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let root = match value.get("algebra") {
            Some(toml::Value::Table(t)) => t.clone(),
            _ => value,
        };
        let dim = root
            .get("dim")
            .and_then(|v| v.as_integer())
            .ok_or_else(|| Error::Parse("missing integer `dim`".into()))?;
        if dim <= 0 {
            return Err(Error::Parse("`dim` must be positive".into()));
        }
        let dim = dim as usize;
        let num = |v: &toml::Value| -> Result<f64> {
            v.as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .ok_or_else(|| Error::Parse(format!("expected a number, got {v}")))
        };
        let gram_rows = root
            .get("gram")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Parse("missing `gram` matrix".into()))?;
        if gram_rows.len() != dim {
            return Err(Error::Parse(format!("`gram` has {} rows, expected {dim}", gram_rows.len())));
        }
        let mut gram = Mat::zeros(dim, dim);
        for (i, row) in gram_rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse("`gram` rows must be arrays".into()))?;
            if row.len() != dim {
                return Err(Error::Parse(format!("`gram` row {i} has {} entries", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                gram[(i, j)] = num(v)?;
            }
        }
        let mut entries = Vec::new();
        if let Some(list) = root.get("brackets") {
            let list = list.as_array().ok_or_else(|| Error::Parse("`brackets` must be an array".into()))?;
            for item in list {
                let item = item.as_array().filter(|a| a.len() == 4).ok_or_else(|| {
                    Error::Parse(format!("bracket entry {item} must be [i, j, k, c]"))
                })?;
                let idx = |v: &toml::Value| -> Result<usize> {
                    v.as_integer()
                        .filter(|&i| i >= 0)
                        .map(|i| i as usize)
                        .ok_or_else(|| Error::Parse(format!("bad index {v}")))
                };
                entries.push((idx(&item[0])?, idx(&item[1])?, idx(&item[2])?, num(&item[3])?));
            }
        }
        let labels = match root.get("labels") {
            Some(toml::Value::Array(a)) => a
                .iter()
                .map(|v| v.as_str().map(String::from).ok_or_else(|| Error::Parse("labels must be strings".into())))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("`labels` must be an array".into())),
            None => Vec::new(),
        };
        Self::from_brackets(dim, &entries, gram, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Mat {
        &self.gram_inv
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = Vector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    pub fn kappa(&self, a: &Vector, b: &Vector) -> f64 {
        a.dot(&(&self.gram * b))
    }

    pub fn kappa_norm(&self, a: &Vector) -> f64 {
        self.kappa(a, a).abs().sqrt()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        self.ad_matrix(x) * y
    }

    /// Matrix of η ↦ [ξ, η].
    pub fn ad_matrix(&self, xi: &Vector) -> Mat {
        let d = self.dim;
        assert_eq!(xi.len(), d, "algebra vector has wrong length");
        let mut m = Mat::zeros(d, d);
        for i in 0..d {
            let x = xi[i];
            if x == 0.0 {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    m[(k, j)] += x * self.c(i, j, k);
                }
            }
        }
        m
    }

    /// κ-adjoint of an operator: K⁻¹ Aᵀ K.
    pub fn kappa_adjoint(&self, a: &Mat) -> Mat {
        &self.gram_inv * a.transpose() * &self.gram
    }

    /// The matrix with κ(ad_ξ a, b) = κ(a, ad*_ξ b).
    pub fn ad_star_matrix(&self, xi: &Vector) -> Mat {
        self.kappa_adjoint(&self.ad_matrix(xi))
    }

    /// ‖ad*_ξ + ad_ξ‖; zero iff κ is ad_ξ-invariant.
    pub fn invariance_defect(&self, xi: &Vector) -> f64 {
        let ad = self.ad_matrix(xi);
        op_norm(&(self.kappa_adjoint(&ad) + ad))
    }

    /// Jacobi defect over all basis triples i < j < k.
    pub fn jacobi_defect(&self) -> JacobiReport {
        let d = self.dim;
        let mut report = JacobiReport { max_defect: 0.0, triple: None };
        let ads: Vec<Mat> = (0..d).map(|i| self.ad_matrix(&self.basis_vector(i))).collect();
        for i in 0..d {
            for j in (i + 1)..d {
                let ij = &ads[i].column(j).into_owned();
                for k in (j + 1)..d {
                    let jk = ads[j].column(k).into_owned();
                    let ki = ads[k].column(i).into_owned();
                    let s = self.ad_matrix(ij).column(k).into_owned()
                        + self.ad_matrix(&jk).column(i)
                        + self.ad_matrix(&ki).column(j);
                    let defect = s.amax();
                    if defect > report.max_defect {
                        report = JacobiReport { max_defect: defect, triple: Some((i, j, k)) };
                    }
                }
            }
        }
        report
    }

    pub fn complexify(&self) -> ComplexifiedAlgebra<'_> {
        ComplexifiedAlgebra { alg: self }
    }
}

/// Bracket and Hermitian pairing extended to g_C.
#[derive(Clone, Copy, Debug)]
pub struct ComplexifiedAlgebra<'a> {
    alg: &'a LieAlgebraSpec,
}

impl<'a> ComplexifiedAlgebra<'a> {
    pub fn real(&self) -> &'a LieAlgebraSpec {
        self.alg
    }

    pub fn bracket(&self, z: &ComplexVector, w: &ComplexVector) -> ComplexVector {
        let b = |x: &Vector, y: &Vector| self.alg.bracket(x, y);
        ComplexVector {
            re: b(&z.re, &w.re) - b(&z.im, &w.im),
            im: b(&z.re, &w.im) + b(&z.im, &w.re),
        }
    }

    pub fn kappa_c(&self, z: &ComplexVector, w: &ComplexVector) -> num_complex::Complex64 {
        crate::linalg::kappa_c_unchecked(self.alg.gram(), z, w)
    }

    /// ad_ξ for real ξ, as blocks [[ad, 0], [0, ad]].
    pub fn ad_block(&self, xi: &Vector) -> BlockOperator {
        let ad = self.alg.ad_matrix(xi);
        let n = ad.nrows();
        BlockOperator::from_complex_parts(&ad, &Mat::zeros(n, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vector {
        Vector::from_fn(n, |_, _| StandardNormal.sample(rng))
    }

    #[test]
    fn abelian_ad_is_zero() {
        let a = LieAlgebraSpec::abelian(4, Mat::identity(4, 4)).unwrap();
        let x = Vector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.ad_matrix(&x), Mat::zeros(4, 4));
        assert_eq!(a.invariance_defect(&x), 0.0);
    }

    #[test]
    fn so3_ad_is_hat() {
        let a = LieAlgebraSpec::so3(Mat::identity(3, 3)).unwrap();
        let e1 = a.basis_vector(0);
        assert_eq!(a.ad_matrix(&e1), crate::linalg::hat(&[1.0, 0.0, 0.0]));
        assert_eq!(a.ad_matrix(&Vector::zeros(3)), Mat::zeros(3, 3));
        let k = Mat::identity(3, 3) * 2.5;
        let b = LieAlgebraSpec::so3(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(b.invariance_defect(&random_vec(&mut rng, 3)) < 1e-14);
        assert!(b.jacobi_defect().max_defect < 1e-15);
    }

    #[test]
    fn ad_star_defining_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_vec(&mut rng, 9);
        let q = Mat::from_fn(3, 3, |i, j| g[3 * i + j]);
        let gram = q.transpose() * &q + Mat::identity(3, 3);
        let alg = LieAlgebraSpec::so3(gram).unwrap();
        for _ in 0..100 {
            let (x, a, b) = (random_vec(&mut rng, 3), random_vec(&mut rng, 3), random_vec(&mut rng, 3));
            let lhs = alg.kappa(&(alg.ad_matrix(&x) * &a), &b);
            let rhs = alg.kappa(&a, &(alg.ad_star_matrix(&x) * &b));
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn complexified_bracket_is_bilinear() {
        let alg = LieAlgebraSpec::so3(Mat::identity(3, 3)).unwrap();
        let c = alg.complexify();
        let x = Vector::from_vec(vec![1.0, 0.5, -2.0]);
        let y = Vector::from_vec(vec![0.0, 3.0, 1.0]);
        let real = c.bracket(&ComplexVector::real(x.clone()), &ComplexVector::real(y.clone()));
        assert_eq!(real.re, alg.bracket(&x, &y));
        assert_eq!(real.im, Vector::zeros(3));
        let ix = c.bracket(&ComplexVector::imaginary(x.clone()), &ComplexVector::real(y.clone()));
        assert_eq!(ix, ComplexVector::real(alg.bracket(&x, &y)).times_i());
        let k = c.kappa_c(&ComplexVector::real(x.clone()), &ComplexVector::real(y.clone()));
        assert_relative_eq!(k.re, alg.kappa(&x, &y));
        assert_eq!(k.im, 0.0);
    }

    #[test]
    fn matrix_basis_reproduces_so3() {
        let basis: Vec<Mat> = (0..3)
            .map(|i| {
                let mut e = [0.0; 3];
                e[i] = 1.0;
                crate::linalg::hat(&e)
            })
            .collect();
        let alg = LieAlgebraSpec::from_matrix_basis(&basis, Mat::identity(3, 3), Vec::new()).unwrap();
        let so3 = LieAlgebraSpec::so3(Mat::identity(3, 3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_relative_eq!(alg.c(i, j, k), so3.c(i, j, k), epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn toml_loading_and_broken_jacobi() {
        let text = r#"
            dim = 3
            gram = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            brackets = [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 2.0], [0, 2, 0, 1.0]]
        "#;
        let alg = LieAlgebraSpec::from_toml_str(text);
        // [e0,e2] listed twice with different targets is allowed (different k), so this parses
        let alg = alg.unwrap();
        let report = alg.jacobi_defect();
        assert!(report.max_defect > 0.1);
        assert_eq!(report.triple, Some((0, 1, 2)));
        assert!(LieAlgebraSpec::from_toml_str("dim = 2\ngram = [[1,0],[0,1]]\nbrackets = [[0,1,0,1.0],[1,0,0,1.0]]").is_err());
        assert!(LieAlgebraSpec::from_toml_str("dim = 2").is_err());
    }
}
