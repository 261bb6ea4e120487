//! Diff₊(S¹) acting affinely on smooth functions modulo constants, truncated to
//! Fourier modes 1..N.
//!
//! Points are [f] = Σ a_k cos 2πkφ + b_k sin 2πkφ stored as (a₁, b₁, …, a_N, b_N).
//! Vector fields X∂_φ have modes 0..N stored as (x₀, x_{a1}, x_{b1}, …). The
//! bracket [X, Y] = X′Y − XY′ is projected back to N modes, so identities that
//! involve it are exact only for inputs with modes ≤ N/3.
//!
//! Group-level operations work on grid samples of circle diffeomorphisms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::RngCore;
use rustfft::FftPlanner;

use crate::action::gaussian;
use crate::affine::AffineActionSpec;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{CompatibleStructure, Mat, SymplecticSpace, Vector};

/// Real trigonometric coefficients c₀ + Σ a_k cos 2πkθ + b_k sin 2πkθ.
#[derive(Clone, Debug, PartialEq)]
pub struct Trig {
    pub c0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Trig {
    pub fn modes(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.c0;
        for k in 0..self.a.len() {
            let w = 2.0 * PI * (k + 1) as f64 * theta;
            s += self.a[k] * w.cos() + self.b[k] * w.sin();
        }
        s
    }
}

fn fft(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn ifft_real(spec: &[Complex64]) -> Vec<f64> {
    let m = spec.len();
    let mut buf = spec.to_vec();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf.iter().map(|z| z.re / m as f64).collect()
}

/// Trigonometric coefficients of M periodic samples on θ_n = n/M, up to `modes`.
pub fn analyze(samples: &[f64], modes: usize) -> Trig {
    let m = samples.len();
    let f = fft(samples);
    let scale = 2.0 / m as f64;
    let a = (1..=modes).map(|k| if k < m { f[k].re * scale } else { 0.0 }).collect();
    let b = (1..=modes).map(|k| if k < m { -f[k].im * scale } else { 0.0 }).collect();
    Trig { c0: f[0].re / m as f64, a, b }
}

/// Samples of a trigonometric polynomial on M grid points.
pub fn synthesize(t: &Trig, m: usize) -> Vec<f64> {
    (0..m).map(|n| t.eval(n as f64 / m as f64)).collect()
}

/// r-th spectral derivative of periodic samples (period 1).
pub fn spectral_derivative(samples: &[f64], order: u32) -> Vec<f64> {
    let m = samples.len();
    let mut f = fft(samples);
    for (k, z) in f.iter_mut().enumerate() {
        let freq = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        if 2 * k == m && order % 2 == 1 {
            *z = Complex64::new(0.0, 0.0);
            continue;
        }
        *z *= Complex64::new(0.0, 2.0 * PI * freq).powu(order);
    }
    ifft_real(&f)
}

/// ∫₀¹ u dθ by the trapezoid rule, exact for trigonometric polynomials below the Nyquist mode.
pub fn grid_integral(u: &[f64]) -> f64 {
    crate::contraction::pairwise_sum(u) / u.len() as f64
}

/// A class [f] of functions modulo constants, by Fourier coefficients k = 1..N.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierClass {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FourierClass {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension { expected: a.len(), got: b.len() });
        }
        Ok(Self { a, b })
    }

    pub fn modes(&self) -> usize {
        self.a.len()
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_fn(2 * self.a.len(), |i, _| if i % 2 == 0 { self.a[i / 2] } else { self.b[i / 2] })
    }

    pub fn from_vector(v: &Vector) -> Self {
        let n = v.len() / 2;
        Self { a: (0..n).map(|k| v[2 * k]).collect(), b: (0..n).map(|k| v[2 * k + 1]).collect() }
    }

    pub fn trig(&self) -> Trig {
        Trig { c0: 0.0, a: self.a.clone(), b: self.b.clone() }
    }

    pub fn samples(&self, m: usize) -> Vec<f64> {
        synthesize(&self.trig(), m)
    }
}

/// Vector field coordinates (x₀, x_{a1}, x_{b1}, …) as a trigonometric polynomial.
pub fn field_trig(x: &Vector) -> Trig {
    let n = (x.len() - 1) / 2;
    Trig {
        c0: x[0],
        a: (0..n).map(|k| x[1 + 2 * k]).collect(),
        b: (0..n).map(|k| x[2 + 2 * k]).collect(),
    }
}

/// Coordinates of a vector field (or density) from its coefficients, truncated to N modes.
pub fn field_vector(t: &Trig, n: usize) -> Vector {
    let mut v = Vector::zeros(2 * n + 1);
    v[0] = t.c0;
    for k in 0..n.min(t.modes()) {
        v[1 + 2 * k] = t.a[k];
        v[2 + 2 * k] = t.b[k];
    }
    v
}

fn class_vector(t: &Trig, n: usize) -> Vector {
    let mut v = Vector::zeros(2 * n);
    for k in 0..n.min(t.modes()) {
        v[2 * k] = t.a[k];
        v[2 * k + 1] = t.b[k];
    }
    v
}

/// Truncated Witt algebra with κ(X, Y) = ∫XY dφ and [X, Y] = P_N(X′Y − XY′).
pub fn virasoro_algebra(n: usize) -> Result<LieAlgebraSpec> {
    let d = 2 * n + 1;
    let grid = (8 * n).max(16);
    let samples: Vec<Vec<f64>> = (0..d).map(|a| synthesize(&field_trig(&unit(d, a)), grid)).collect();
    let derivs: Vec<Vec<f64>> = samples.iter().map(|s| spectral_derivative(s, 1)).collect();
    let mut c = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let br: Vec<f64> = (0..grid)
                .map(|g| derivs[i][g] * samples[j][g] - samples[i][g] * derivs[j][g])
                .collect();
            let v = field_vector(&analyze(&br, n), n);
            for k in 0..d {
                c[(i * d + j) * d + k] = if v[k].abs() < 1e-12 { 0.0 } else { v[k] };
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            for k in 0..d {
                c[(i * d + j) * d + k] = -c[(j * d + i) * d + k];
            }
        }
    }
    let mut gram = Mat::identity(d, d) * 0.5;
    gram[(0, 0)] = 1.0;
    let mut labels = vec!["1".to_string()];
    for k in 1..=n {
        labels.push(format!("cos{k}"));
        labels.push(format!("sin{k}"));
    }
    LieAlgebraSpec::new(d, c, gram, labels)
}

fn unit(d: usize, a: usize) -> Vector {
    let mut e = Vector::zeros(d);
    e[a] = 1.0;
    e
}

/// The truncated affine model together with its grid size for diffeomorphisms.
#[derive(Clone, Debug)]
pub struct VirasoroModel {
    pub modes: usize,
    pub grid: usize,
    pub spec: AffineActionSpec,
}

/// ω([f], [g]) = ∫f dg, j = Hilbert transform, ξ·[f] = −[Xf′] − [X′].
pub fn build_virasoro(modes: usize, grid: usize) -> Result<VirasoroModel> {
    if modes < 4 {
        return Err(Error::Invalid(format!("need at least 4 modes, got {modes}")));
    }
    if !grid.is_power_of_two() || grid < 8 * modes {
        return Err(Error::Invalid(format!("grid must be a power of two ≥ 8N = {}, got {grid}", 8 * modes)));
    }
    let n = modes;
    let mut omega = Mat::zeros(2 * n, 2 * n);
    let mut j = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        let w = PI * (k + 1) as f64;
        omega[(2 * k, 2 * k + 1)] = w;
        omega[(2 * k + 1, 2 * k)] = -w;
        // H cos = sin, H sin = −cos
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    let space = SymplecticSpace::new(omega)?;
    let structure = CompatibleStructure::new(&space, j)?;
    let algebra = virasoro_algebra(n)?;
    let d = algebra.dim();
    let g = (8 * n).max(16);
    let class_derivs: Vec<Vec<f64>> = (0..2 * n)
        .map(|i| spectral_derivative(&FourierClass::from_vector(&unit(2 * n, i)).samples(g), 1))
        .collect();
    let mut rho = Vec::with_capacity(d);
    let mut tau = Mat::zeros(2 * n, d);
    for a in 0..d {
        let x = synthesize(&field_trig(&unit(d, a)), g);
        let cols: Vec<Vector> = class_derivs
            .iter()
            .map(|df| {
                let u: Vec<f64> = (0..g).map(|p| -x[p] * df[p]).collect();
                class_vector(&analyze(&u, n), n)
            })
            .collect();
        rho.push(Mat::from_columns(&cols));
        let dx: Vec<f64> = spectral_derivative(&x, 1).iter().map(|v| -v).collect();
        tau.set_column(a, &class_vector(&analyze(&dx, n), n));
    }
    let spec = AffineActionSpec::new(space, algebra, structure, rho, tau, None)?;
    Ok(VirasoroModel { modes, grid, spec })
}

impl VirasoroModel {
    /// (−f″ + ½(f′)²) on the grid, without truncation.
    pub fn momentum_density(&self, f: &FourierClass) -> Vec<f64> {
        momentum_density_samples(&f.samples(self.grid))
    }

    /// Random class with modes ≤ `max_mode` and coefficients of size `scale`/k.
    pub fn sample_band_limited(&self, rng: &mut dyn RngCore, max_mode: usize, scale: f64) -> FourierClass {
        let g = gaussian(rng, 2 * max_mode);
        let mut a = vec![0.0; self.modes];
        let mut b = vec![0.0; self.modes];
        for k in 0..max_mode.min(self.modes) {
            a[k] = scale * g[2 * k] / (k + 1) as f64;
            b[k] = scale * g[2 * k + 1] / (k + 1) as f64;
        }
        FourierClass { a, b }
    }

    /// Random vector field with modes ≤ `max_mode`.
    pub fn sample_field(&self, rng: &mut dyn RngCore, max_mode: usize) -> Vector {
        let d = 2 * self.modes + 1;
        let g = gaussian(rng, d);
        Vector::from_fn(d, |i, _| if i == 0 || (i + 1) / 2 <= max_mode { g[i] } else { 0.0 })
    }
}

/// −f″ + ½(f′)² from grid samples of f.
pub fn momentum_density_samples(f: &[f64]) -> Vec<f64> {
    let d1 = spectral_derivative(f, 1);
    let d2 = spectral_derivative(f, 2);
    d1.iter().zip(&d2).map(|(a, b)| -b + 0.5 * a * a).collect()
}

/// −∫XY‴ dφ on a grid, the Gelfand–Fuchs cocycle.
pub fn gelfand_fuchs(x: &Vector, y: &Vector, grid: usize) -> f64 {
    let xs = synthesize(&field_trig(x), grid);
    let y3 = spectral_derivative(&synthesize(&field_trig(y), grid), 3);
    -grid_integral(&xs.iter().zip(&y3).map(|(a, b)| a * b).collect::<Vec<_>>())
}

/// max |r − mean r| for r = f‴ − ½(f′)³: zero exactly at critical points of ‖J‖².
pub fn euler_lagrange_residual(f: &FourierClass, grid: usize) -> f64 {
    let s = f.samples(grid);
    let d1 = spectral_derivative(&s, 1);
    let d3 = spectral_derivative(&s, 3);
    let r: Vec<f64> = d1.iter().zip(&d3).map(|(a, c)| c - 0.5 * a * a * a).collect();
    let mean = grid_integral(&r);
    r.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
}

/// An orientation-preserving circle diffeomorphism φ(θ) = θ + p(θ), sampled on θ_n = n/M.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleDiffeo {
    p: Vec<f64>,
}

/// Newton inversion settings.
const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX: usize = 60;

impl CircleDiffeo {
    pub fn identity(m: usize) -> Self {
        Self { p: vec![0.0; m] }
    }

    pub fn from_displacement(p: Vec<f64>) -> Result<Self> {
        if !p.len().is_power_of_two() || p.len() < 8 {
            return Err(Error::Invalid(format!("grid size must be a power of two ≥ 8, got {}", p.len())));
        }
        let d = Self { p };
        let min = d.derivative(1).iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::Invalid(format!("not orientation preserving: min φ' = {min:.3e}")));
        }
        Ok(d)
    }

    pub fn from_fn(m: usize, p: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_displacement((0..m).map(|n| p(n as f64 / m as f64)).collect())
    }

    /// p = Σ_{k ≤ modes} (α_k cos + β_k sin)(2πkθ)/(2πk), with Σ|α_k| + |β_k| = `slope` < 1.
    pub fn random_small(rng: &mut dyn RngCore, m: usize, modes: usize, slope: f64) -> Result<Self> {
        let g = gaussian(rng, 2 * modes);
        let total: f64 = g.iter().map(|v| v.abs()).sum();
        let c: Vec<f64> = g.iter().map(|v| v * slope / total).collect();
        Self::from_fn(m, |t| {
            (0..modes)
                .map(|k| {
                    let w = 2.0 * PI * (k + 1) as f64;
                    (c[2 * k] * (w * t).cos() + c[2 * k + 1] * (w * t).sin()) / w
                })
                .sum()
        })
    }

    pub fn grid(&self) -> usize {
        self.p.len()
    }

    pub fn displacement(&self) -> &[f64] {
        &self.p
    }

    /// φ^{(r)} on the grid; φ′ = 1 + p′.
    pub fn derivative(&self, order: u32) -> Vec<f64> {
        let d = spectral_derivative(&self.p, order);
        if order == 1 {
            d.iter().map(|v| 1.0 + v).collect()
        } else {
            d
        }
    }

    fn coefficients(&self) -> Vec<Complex64> {
        let m = self.p.len() as f64;
        fft(&self.p).into_iter().map(|z| z / m).collect()
    }

    /// (p(θ), p′(θ)) at arbitrary points by trigonometric interpolation.
    fn interpolate(coeffs: &[Complex64], theta: &[f64]) -> Vec<(f64, f64)> {
        let m = coeffs.len();
        let half = m / 2;
        theta
            .iter()
            .map(|&t| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * t);
                // Horner over k = half-1 … 1 for Σ c_k z^k and Σ k c_k z^k
                let (mut s, mut ds) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for k in (1..half).rev() {
                    s = (s + coeffs[k]) * z;
                    ds = (ds + coeffs[k] * k as f64) * z;
                }
                // Nyquist mode split evenly between ±M/2
                let nyq = coeffs[half].re * (PI * m as f64 * t).cos();
                let dnyq = -coeffs[half].re * PI * m as f64 * (PI * m as f64 * t).sin();
                let p = coeffs[0].re + 2.0 * s.re + nyq;
                let dp = 2.0 * PI * (2.0 * (ds * Complex64::i()).re) + dnyq;
                (p, dp)
            })
            .collect()
    }

    fn nodes(&self) -> Vec<f64> {
        let m = self.p.len();
        (0..m).map(|n| n as f64 / m as f64).collect()
    }

    /// (self ∘ other)(θ) = other(θ) + p_self(other(θ)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.grid() != other.grid() {
            return Err(Error::Dimension { expected: self.grid(), got: other.grid() });
        }
        let pts: Vec<f64> = self.nodes().iter().zip(&other.p).map(|(t, q)| t + q).collect();
        let vals = Self::interpolate(&self.coefficients(), &pts);
        Ok(Self { p: other.p.iter().zip(&vals).map(|(q, (v, _))| q + v).collect() })
    }

    /// φ⁻¹ by Newton on every node, with a monotonicity guard.
    pub fn inverse(&self) -> Result<Self> {
        let coeffs = self.coefficients();
        let nodes = self.nodes();
        let mut psi: Vec<f64> = nodes.iter().zip(&self.p).map(|(t, q)| t - q).collect();
        for _ in 0..NEWTON_MAX {
            let vals = Self::interpolate(&coeffs, &psi);
            let mut worst = 0.0f64;
            for ((x, t), (p, dp)) in psi.iter_mut().zip(&nodes).zip(&vals) {
                let slope = 1.0 + dp;
                if !(slope > 0.0) {
                    return Err(Error::Numerical(format!("inversion left the monotone region (φ' = {slope:.3e})")));
                }
                let step = (*x + p - t) / slope;
                *x -= step;
                worst = worst.max(step.abs());
            }
            if worst < NEWTON_TOL {
                return Ok(Self { p: psi.iter().zip(&nodes).map(|(x, t)| x - t).collect() });
            }
        }
        Err(Error::Numerical(format!("Newton inversion did not converge in {NEWTON_MAX} iterations")))
    }

    /// φ‴/φ′ − (3/2)(φ″/φ′)².
    pub fn schwarzian(&self) -> Vec<f64> {
        let (d1, d2, d3) = (self.derivative(1), self.derivative(2), self.derivative(3));
        (0..self.grid()).map(|i| d3[i] / d1[i] - 1.5 * (d2[i] / d1[i]).powi(2)).collect()
    }
}

/// φ·[f] = [f∘φ⁻¹ + log((φ⁻¹)′)] on grid samples of f.
pub fn act_on_samples(phi: &CircleDiffeo, f: &[f64]) -> Result<Vec<f64>> {
    let inv = phi.inverse()?;
    let coeffs: Vec<Complex64> = fft(f).into_iter().map(|z| z / f.len() as f64).collect();
    let pts: Vec<f64> = inv.nodes().iter().zip(&inv.p).map(|(t, q)| t + q).collect();
    let vals = CircleDiffeo::interpolate(&coeffs, &pts);
    let d = inv.derivative(1);
    Ok(vals.iter().zip(&d).map(|((v, _), s)| v + s.ln()).collect())
}

/// τ(φ) = [log((φ⁻¹)′)].
pub fn tau(phi: &CircleDiffeo) -> Result<Vec<f64>> {
    act_on_samples(phi, &vec![0.0; phi.grid()])
}

/// ω([f], [g]) = ∫f g′ dθ on grid samples.
pub fn grid_omega(f: &[f64], g: &[f64]) -> f64 {
    let dg = spectral_derivative(g, 1);
    grid_integral(&f.iter().zip(&dg).map(|(a, b)| a * b).collect::<Vec<_>>())
}

/// Bott–Thurston cocycle ½∫log((φ₁φ₂)′) d(log φ₂′).
pub fn bott_thurston(phi1: &CircleDiffeo, phi2: &CircleDiffeo) -> Result<f64> {
    let comp = phi1.compose(phi2)?;
    let a: Vec<f64> = comp.derivative(1).iter().map(|v| v.ln()).collect();
    let b: Vec<f64> = phi2.derivative(1).iter().map(|v| v.ln()).collect();
    Ok(0.5 * grid_omega(&a, &b))
}

/// The same cocycle through the affine data: ½ω(τ(φ₂⁻¹φ₁⁻¹), τ(φ₂⁻¹)).
pub fn bott_thurston_affine(phi1: &CircleDiffeo, phi2: &CircleDiffeo) -> Result<f64> {
    let i1 = phi1.inverse()?;
    let i2 = phi2.inverse()?;
    let a = tau(&i2.compose(&i1)?)?;
    let b = tau(&i2)?;
    Ok(0.5 * grid_omega(&a, &b))
}

/// |c(φ₁,φ₂) + c(φ₁φ₂,φ₃) − c(φ₂,φ₃) − c(φ₁,φ₂φ₃)|.
pub fn bott_thurston_identity_defect(phi1: &CircleDiffeo, phi2: &CircleDiffeo, phi3: &CircleDiffeo) -> Result<f64> {
    let p12 = phi1.compose(phi2)?;
    let p23 = phi2.compose(phi3)?;
    let v = bott_thurston(phi1, phi2)? + bott_thurston(&p12, phi3)? - bott_thurston(phi2, phi3)? - bott_thurston(phi1, &p23)?;
    Ok(v.abs())
}

/// σ(φ⁻¹) = J(φ⁻¹·[0]) as a density on the grid.
pub fn sigma_of_inverse(phi: &CircleDiffeo) -> Result<Vec<f64>> {
    let inv = phi.inverse()?;
    let f = tau(&inv)?;
    Ok(momentum_density_samples(&f))
}

/// L² grid norm of σ(φ⁻¹) + S(φ).
pub fn schwarzian_defect(phi: &CircleDiffeo) -> Result<f64> {
    let s = sigma_of_inverse(phi)?;
    let sch = phi.schwarzian();
    let d: Vec<f64> = s.iter().zip(&sch).map(|(a, b)| (a + b).powi(2)).collect();
    Ok(grid_integral(&d).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{momentum_defect, sigma_two_cocycle, Derivative, HamiltonianAction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(d: usize, k: usize, sin: bool) -> Vector {
        unit(d, if sin { 2 * k } else { 2 * k - 1 })
    }

    #[test]
    fn fourier_round_trip_and_derivative() {
        let t = Trig { c0: 0.3, a: vec![1.0, 0.0, -0.5], b: vec![0.0, 2.0, 0.25] };
        let s = synthesize(&t, 32);
        let back = analyze(&s, 3);
        assert!((back.c0 - 0.3).abs() < 1e-14);
        for k in 0..3 {
            assert!((back.a[k] - t.a[k]).abs() < 1e-14 && (back.b[k] - t.b[k]).abs() < 1e-14);
        }
        let d = spectral_derivative(&synthesize(&Trig { c0: 0.0, a: vec![0.0], b: vec![1.0] }, 16), 1);
        for (n, v) in d.iter().enumerate() {
            assert!((v - 2.0 * PI * (2.0 * PI * n as f64 / 16.0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_and_invariance() {
        let alg = virasoro_algebra(6).unwrap();
        let d = alg.dim();
        // [cos, sin] = cos′ sin − cos sin′ = −2π
        let br = alg.bracket(&field(d, 1, false), &field(d, 1, true));
        assert!((br[0] + 2.0 * PI).abs() < 1e-12 && br.rows(1, d - 1).amax() < 1e-12);
        assert!(alg.invariance_defect(&unit(d, 0)) < 1e-12);
        assert!(alg.invariance_defect(&field(d, 1, false)) > 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let low = |r: &mut ChaCha8Rng| {
            let g = gaussian(r, d);
            Vector::from_fn(d, |i, _| if (i + 1) / 2 <= 2 { g[i] } else { 0.0 })
        };
        for _ in 0..10 {
            let (x, y, z) = (low(&mut rng), low(&mut rng), low(&mut rng));
            let j = alg.bracket(&x, &alg.bracket(&y, &z)) + alg.bracket(&y, &alg.bracket(&z, &x)) + alg.bracket(&z, &alg.bracket(&x, &y));
            assert!(j.amax() < 1e-10);
        }
    }

    #[test]
    fn momentum_matches_spectral_density() {
        let model = build_virasoro(8, 128).unwrap();
        let eps = 0.3;
        let mut a = vec![0.0; 8];
        let mut b = vec![0.0; 8];
        b[0] = eps;
        let f = FourierClass::new(a.clone(), b.clone()).unwrap();
        let j = model.spec.momentum(&f.to_vector());
        // −f″ + ½f′² = 4π²ε sin + π²ε²(1 + cos 4πφ)
        let w = 2.0 * PI;
        assert!((j[0] - 0.5 * w * w * eps * eps * 0.5).abs() < 1e-12);
        assert!((j[2] - w * w * eps).abs() < 1e-12);
        assert!((j[3] - 0.25 * w * w * eps * eps).abs() < 1e-12);
        let dens = analyze(&model.momentum_density(&f), 8);
        assert!((field_vector(&dens, 8) - j).amax() < 1e-10);
        a[0] = 0.0;
        b[0] = 0.0;
        assert_eq!(model.spec.momentum(&FourierClass::new(a, b).unwrap().to_vector()).amax(), 0.0);
    }

    #[test]
    fn momentum_identity_and_gelfand_fuchs() {
        let model = build_virasoro(9, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let d = model.spec.algebra().dim();
        for _ in 0..5 {
            let f = model.sample_band_limited(&mut rng, 3, 0.5).to_vector();
            assert!(momentum_defect(&model.spec, &f, 20, Derivative::FiniteDifference(1e-5), &mut rng).unwrap() < 1e-6);
        }
        let (x, y) = (field(d, 1, true), field(d, 1, false));
        let expected = -4.0 * PI.powi(3);
        assert!((gelfand_fuchs(&x, &y, 64) - expected).abs() < 1e-9);
        assert!((model.spec.sigma_closed_form(&x, &y) - expected).abs() < 1e-9);
        let m1 = model.sample_band_limited(&mut rng, 3, 0.5).to_vector();
        let m2 = model.sample_band_limited(&mut rng, 3, 0.5).to_vector();
        let s1 = sigma_two_cocycle(&model.spec, &x, &y, &m1);
        let s2 = sigma_two_cocycle(&model.spec, &x, &y, &m2);
        assert!((s1 - expected).abs() < 1e-8 && (s2 - expected).abs() < 1e-8, "{s1} {s2}");
    }

    #[test]
    fn diffeo_inverse_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let phi = CircleDiffeo::random_small(&mut rng, 256, 3, 0.5).unwrap();
        let inv = phi.inverse().unwrap();
        let id = phi.compose(&inv).unwrap();
        assert!(id.displacement().iter().all(|v| v.abs() < 1e-12));
        let id = inv.compose(&phi).unwrap();
        assert!(id.displacement().iter().all(|v| v.abs() < 1e-12));
        assert!(CircleDiffeo::from_fn(64, |t| 0.3 * (2.0 * PI * t).sin()).is_err());
        assert!(CircleDiffeo::from_displacement(vec![0.0; 12]).is_err());
    }

    #[test]
    fn schwarzian_and_bott_thurston() {
        let phi = CircleDiffeo::from_fn(256, |t| 0.1 * (2.0 * PI * t).sin()).unwrap();
        assert!(schwarzian_defect(&phi).unwrap() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let g: Vec<CircleDiffeo> = (0..3).map(|_| CircleDiffeo::random_small(&mut rng, 128, 3, 0.4).unwrap()).collect();
        assert!(bott_thurston_identity_defect(&g[0], &g[1], &g[2]).unwrap() < 1e-10);
        let a = bott_thurston(&g[0], &g[1]).unwrap();
        let b = bott_thurston_affine(&g[0], &g[1]).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
        let e = CircleDiffeo::identity(128);
        assert!(bott_thurston(&e, &g[0]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn euler_lagrange_at_zero_and_generic() {
        let zero = FourierClass::new(vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert_eq!(euler_lagrange_residual(&zero, 64), 0.0);
        let f = FourierClass::new(vec![0.2, 0.0, 0.0, 0.0], vec![0.0, 0.1, 0.0, 0.0]).unwrap();
        assert!(euler_lagrange_residual(&f, 64) > 1e-3);
    }
}
