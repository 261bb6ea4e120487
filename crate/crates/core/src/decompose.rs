//! The complexified stabilizer (g_C)_m and its eigenspace decomposition under i·ad_μ.

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::action::{sigma_kappa_map, HamiltonianAction};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{
    kernel, kernel_c, max_principal_angle, op_norm, op_norm_c, realify_columns, CMat, CVector, ComplexVector, Mat,
    Tolerances, Vector,
};
use crate::normsq::{build_operators, j_invariance_defect, upsilon_matrix};

fn complexify(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// κ_C Gram matrix of the columns of `b`: (B^H K B).
fn kappa_gram(gram: &CMat, b: &CMat) -> CMat {
    b.adjoint() * gram * b
}

/// κ_C-orthonormalise the columns of `b`; requires K positive definite on their span.
fn kappa_orthonormalize(gram: &CMat, b: &CMat) -> Result<CMat> {
    if b.ncols() == 0 {
        return Ok(b.clone());
    }
    let g = kappa_gram(gram, b);
    let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::precondition("κ_C is not positive definite on the stabilizer", 1.0, 0.0))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular κ_C Gram matrix".into()))?;
    Ok(b * linv.adjoint())
}

/// A κ_C-orthonormal basis of (g_C)_m with its cross-checks.
#[derive(Clone, Debug)]
pub struct StabilizerBasis {
    /// Columns are ξ₁ + iξ₂ in algebra coordinates.
    pub basis: CMat,
    /// Complex dimension of ker C⁺.
    pub cplus_dim: usize,
    /// Real dimension of ker Υ_m.
    pub upsilon_real_dim: usize,
    /// Largest principal angle between the two kernels (as real subspaces).
    pub angle: f64,
    /// Singular-value gap at the rank cut of C⁺.
    pub gap: f64,
    /// max ‖Υ_m ζ‖ over basis vectors.
    pub membership: f64,
}

impl StabilizerBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// (g_C)_m = ker C⁺, cross-checked against ker Υ_m.
pub fn complex_stabilizer<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, tol: &Tolerances) -> Result<StabilizerBasis> {
    let alg = spec.algebra();
    let ops = build_operators(spec, m)?;
    let ker = kernel_c(&ops.cplus_complex(), tol.rank);
    if ker.gap < 1e2 {
        return Err(Error::Numerical(format!(
            "ill-separated singular values of C+ at the rank cut (gap ratio {:.3e})",
            ker.gap
        )));
    }
    let ups = upsilon_matrix(spec, m);
    let uker = kernel(&ups, tol.rank);
    let angle = if uker.dim() == 2 * ker.dim() {
        max_principal_angle(&realify_columns(&ker.basis), &uker.basis)
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let gram = complexify(alg.gram());
    let basis = kappa_orthonormalize(&gram, &ker.basis)?;
    let mut membership = 0.0f64;
    for c in 0..basis.ncols() {
        let z = ComplexVector::from_complex(&basis.column(c).into_owned());
        membership = membership.max((&ups * z.stacked()).norm());
    }
    Ok(StabilizerBasis {
        basis,
        cplus_dim: ker.dim(),
        upsilon_real_dim: uker.dim(),
        angle,
        gap: ker.gap,
        membership,
    })
}

/// How the restricted i·ad_μ is diagonalised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionMode {
    /// Hermitian eigensolve; refuses unless κ and j_m are μ-invariant.
    Hermitian,
    /// Generalized eigenspaces from a Schur form; no invariance required.
    Generalized,
}

#[derive(Clone, Debug)]
pub struct Cluster {
    pub value: f64,
    /// Imaginary part of the cluster centre; zero in Hermitian mode.
    pub imag: f64,
    pub basis: CMat,
}

impl Cluster {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

#[derive(Clone, Debug, Default)]
pub struct DecompositionDiagnostics {
    /// ‖μ·m‖.
    pub mu_residual: f64,
    /// ‖ad*_μ + ad_μ‖.
    pub kappa_invariance: f64,
    /// j_m μ-invariance defect.
    pub j_invariance: f64,
    /// Part of ad_μ(stabilizer) outside the stabilizer.
    pub ad_preservation: f64,
    /// ‖M − M^H‖ for the restricted operator.
    pub hermitian: f64,
    /// max |κ_C(u, v)| across distinct clusters.
    pub orthogonality: f64,
    /// Distance from J(m) to the zero cluster, when μ = J(m).
    pub jm_in_zero_cluster: Option<f64>,
    /// max ‖Υ_m ζ‖ over the basis.
    pub membership: f64,
}

#[derive(Clone, Debug)]
pub struct StabilizerDecomposition {
    pub m: Vector,
    pub mu: Vector,
    pub basis: CMat,
    /// Eigenvalues with multiplicity, ascending.
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub diagnostics: DecompositionDiagnostics,
    pub spectral_radius: f64,
    cluster_tol: f64,
    gram: CMat,
}

impl StabilizerDecomposition {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// (value, complex dimension) per cluster.
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        self.clusters.iter().map(|c| (c.value, c.dim())).collect()
    }

    fn snap(&self) -> f64 {
        self.cluster_tol * self.spectral_radius.max(1.0)
    }

    pub fn cluster_near(&self, value: f64) -> Option<&Cluster> {
        let tol = self.snap().max(1e-9);
        self.clusters.iter().find(|c| (c.value - value).abs() <= tol)
    }

    /// The zero cluster c_m, possibly empty.
    pub fn zero_cluster(&self) -> Option<&Cluster> {
        self.cluster_near(0.0)
    }

    /// κ_C-distance from `v` to the span of cluster `c` (or of the whole stabilizer when `c` is None).
    pub fn distance_to(&self, c: Option<&Cluster>, v: &CVector) -> f64 {
        let q = match c {
            Some(c) => &c.basis,
            None => &self.basis,
        };
        let r = v - q * (q.adjoint() * &self.gram * v);
        (r.adjoint() * &self.gram * &r)[(0, 0)].re.abs().sqrt()
    }

    /// κ_C-orthogonal projection onto the stabilizer.
    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * &self.gram * v)
    }
}

fn to_cvector(z: &ComplexVector) -> CVector {
    z.to_complex()
}

fn cluster_values(values: &[(f64, f64)], rel: f64) -> Vec<Vec<usize>> {
    let radius = values.iter().map(|(r, i)| r.hypot(*i)).fold(0.0, f64::max);
    let gap = rel * radius.max(1e-300);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].0.partial_cmp(&values[b].0).unwrap().then(values[a].1.partial_cmp(&values[b].1).unwrap()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        let v = values[idx];
        match groups.iter_mut().find(|g| g.iter().any(|&j| {
            let w = values[j];
            (v.0 - w.0).hypot(v.1 - w.1) < gap
        })) {
            Some(g) => g.push(idx),
            None => groups.push(vec![idx]),
        }
    }
    groups
}

/// Eigenspaces of i·ad_μ on (g_C)_m.
pub fn eigendecompose_stabilizer<S: HamiltonianAction + ?Sized>(
    spec: &S,
    m: &Vector,
    mu: &Vector,
    mode: DecompositionMode,
    tol: &Tolerances,
) -> Result<StabilizerDecomposition> {
    let alg = spec.algebra();
    let stab = complex_stabilizer(spec, m, tol)?;
    let scale = 1.0 + mu.norm();
    let mu_residual = spec.inf_action(mu, m).norm();
    if mu_residual > 1e-7 * scale {
        return Err(Error::precondition("μ is not in the stabilizer of m", mu_residual, 1e-7 * scale));
    }
    let kappa_invariance = alg.invariance_defect(mu);
    let j_invariance = j_invariance_defect(spec, m, mu);
    if mode == DecompositionMode::Hermitian {
        let limit = 1e-8 * scale;
        if kappa_invariance > limit {
            return Err(Error::precondition("κ is not ad_μ-invariant", kappa_invariance, limit));
        }
        let limit_j = 1e-6 * scale;
        if j_invariance > limit_j {
            return Err(Error::precondition("j_m is not μ-invariant", j_invariance, limit_j));
        }
    }
    let gram = complexify(alg.gram());
    let b = &stab.basis;
    let iad = complexify(&alg.ad_matrix(mu)) * Complex64::new(0.0, 1.0);
    let ab = &iad * b;
    let restricted = b.adjoint() * &gram * &ab;
    let outside = &ab - b * &restricted;
    let ad_preservation = op_norm_c(&outside);
    let hermitian = op_norm_c(&(&restricted - restricted.adjoint()));

    let r = restricted.nrows();
    let (values, vectors): (Vec<(f64, f64)>, Vec<CVector>) = if r == 0 {
        (Vec::new(), Vec::new())
    } else {
        match mode {
            DecompositionMode::Hermitian => {
                let h = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
                let eig = h.symmetric_eigen();
                let vals = eig.eigenvalues.iter().map(|&v| (v, 0.0)).collect();
                let vecs = (0..r).map(|c| eig.eigenvectors.column(c).into_owned()).collect();
                (vals, vecs)
            }
            DecompositionMode::Generalized => {
                let (_, t) = Schur::new(restricted.clone()).unpack();
                let vals: Vec<(f64, f64)> = (0..r).map(|i| (t[(i, i)].re, t[(i, i)].im)).collect();
                (vals, Vec::new())
            }
        }
    };
    let radius = values.iter().map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
    let groups = cluster_values(&values, tol.cluster);
    let mut clusters = Vec::new();
    for g in &groups {
        let k = g.len() as f64;
        let re = g.iter().map(|&i| values[i].0).sum::<f64>() / k;
        let im = g.iter().map(|&i| values[i].1).sum::<f64>() / k;
        let snap_tol = tol.cluster * radius.max(1.0);
        let (re, im) = if re.hypot(im) <= snap_tol { (0.0, 0.0) } else { (re, im) };
        let coords = match mode {
            DecompositionMode::Hermitian => CMat::from_columns(&g.iter().map(|&i| vectors[i].clone()).collect::<Vec<_>>()),
            DecompositionMode::Generalized => {
                let lambda = Complex64::new(re, im);
                let shifted = &restricted - CMat::identity(r, r) * lambda;
                let mut power = CMat::identity(r, r);
                for _ in 0..g.len() {
                    power = &power * &shifted;
                }
                let ker = kernel_c(&power, 1e-6);
                ker.basis
            }
        };
        let basis = b * coords;
        let basis = if mode == DecompositionMode::Generalized {
            kappa_orthonormalize(&gram, &basis).unwrap_or(basis)
        } else {
            basis
        };
        clusters.push(Cluster { value: re, imag: im, basis });
    }
    clusters.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    let mut orthogonality = 0.0f64;
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            let cross = clusters[i].basis.adjoint() * &gram * &clusters[j].basis;
            orthogonality = orthogonality.max(cross.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    let mut eigenvalues: Vec<f64> = values.iter().map(|v| v.0).collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut decomposition = StabilizerDecomposition {
        m: m.clone(),
        mu: mu.clone(),
        basis: stab.basis.clone(),
        eigenvalues,
        clusters,
        diagnostics: DecompositionDiagnostics {
            mu_residual,
            kappa_invariance,
            j_invariance,
            ad_preservation,
            hermitian,
            orthogonality,
            jm_in_zero_cluster: None,
            membership: stab.membership,
        },
        spectral_radius: radius,
        cluster_tol: tol.cluster,
        gram,
    };
    let jm = spec.momentum(m);
    if (&jm - mu).norm() <= 1e-12 * scale {
        let v = to_cvector(&ComplexVector::real(jm));
        let zero = decomposition.zero_cluster().cloned();
        let dist = match zero {
            Some(z) => decomposition.distance_to(Some(&z), &v),
            None => (v.adjoint() * &decomposition.gram * &v)[(0, 0)].re.abs().sqrt(),
        };
        decomposition.diagnostics.jm_in_zero_cluster = Some(dist);
    }
    Ok(decomposition)
}

/// Largest component of stabilizer-projected brackets [k_λ, k_ν] outside k_{λ+ν}.
pub fn grading_defect(decomp: &StabilizerDecomposition, alg: &LieAlgebraSpec, lambda: f64, nu: f64) -> f64 {
    let (Some(a), Some(b)) = (decomp.cluster_near(lambda), decomp.cluster_near(nu)) else {
        return 0.0;
    };
    let target = decomp.cluster_near(lambda + nu).cloned();
    let c = alg.complexify();
    let mut worst = 0.0f64;
    for i in 0..a.dim() {
        let x = ComplexVector::from_complex(&a.basis.column(i).into_owned());
        for k in 0..b.dim() {
            let y = ComplexVector::from_complex(&b.basis.column(k).into_owned());
            let br = c.bracket(&x, &y).to_complex();
            let p = decomp.project(&br);
            let dist = match &target {
                Some(t) => decomp.distance_to(Some(t), &p),
                None => (p.adjoint() * &decomp.gram * &p)[(0, 0)].re.abs().sqrt(),
            };
            worst = worst.max(dist);
        }
    }
    worst
}

/// Decomposition at a point of an equivariant action, with its sign certificate.
#[derive(Clone, Debug)]
pub struct EquivariantRefinement {
    pub decomposition: StabilizerDecomposition,
    /// Largest eigenvalue of i·ad_{J(m)} on (g_C)_m; the theory says ≤ 0.
    pub max_eigenvalue: f64,
    /// Real dimension of the real stabilizer g_m.
    pub real_stabilizer_dim: usize,
    /// Principal angle between the zero cluster and (g_m)_C.
    pub zero_cluster_angle: f64,
    /// ‖Σ_κ‖.
    pub equivariance_defect: f64,
}

pub fn equivariant_refinement<S: HamiltonianAction + ?Sized>(spec: &S, m: &Vector, tol: &Tolerances) -> Result<EquivariantRefinement> {
    let alg = spec.algebra();
    let sk = sigma_kappa_map(spec, m);
    let defect = op_norm(&sk);
    let limit = 1e-8 * (1.0 + spec.momentum(m).norm());
    if defect > limit {
        return Err(Error::precondition("action is not equivariant (Σ_κ ≠ 0)", defect, limit));
    }
    let jm = spec.momentum(m);
    let decomposition = eigendecompose_stabilizer(spec, m, &jm, DecompositionMode::Hermitian, tol)?;
    let d = alg.dim();
    let orbit = Mat::from_columns(&(0..d).map(|a| spec.inf_action(&alg.basis_vector(a), m)).collect::<Vec<_>>());
    let real = kernel(&orbit, tol.rank);
    let real_c = complexify(&real.basis);
    let zero = decomposition.zero_cluster().map(|c| c.basis.clone()).unwrap_or_else(|| CMat::zeros(d, 0));
    let zero_cluster_angle = max_principal_angle(&realify_columns(&zero), &realify_columns(&real_c));
    let max_eigenvalue = decomposition.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(EquivariantRefinement {
        decomposition,
        max_eigenvalue: if max_eigenvalue.is_finite() { max_eigenvalue } else { 0.0 },
        real_stabilizer_dim: real.dim(),
        zero_cluster_angle,
        equivariance_defect: defect,
    })
}
