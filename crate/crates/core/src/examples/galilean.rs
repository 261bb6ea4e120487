//! A free non-relativistic particle with mass m and spin s under the Galilean group.
//!
//! Algebra coordinates are (α, β, γ, δ) ∈ ℝ³×ℝ³×ℝ³×ℝ (rotation, boost, translation,
//! time translation). Points are (q, p, x) ∈ ℝ³×ℝ³×S².

use rand::RngCore;

use crate::action::{gaussian, unit_gaussian, GroupAction, GroupLaw, HamiltonianAction};
use crate::affine::{AffineActionSpec, AffineGroup};
use crate::error::{Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::linalg::{cross, expm, hat, CompatibleStructure, ComplexVector, Mat, SymplecticSpace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GalileanParams {
    pub mass: f64,
    pub spin: f64,
}

impl GalileanParams {
    pub fn new(mass: f64, spin: f64) -> Result<Self> {
        if mass == 0.0 || !mass.is_finite() {
            return Err(Error::Invalid("mass must be nonzero".into()));
        }
        if !(spin > 0.0) || !spin.is_finite() {
            return Err(Error::Invalid("spin must be positive".into()));
        }
        Ok(Self { mass, spin })
    }
}

impl Default for GalileanParams {
    fn default() -> Self {
        Self { mass: 1.0, spin: 1.0 }
    }
}

fn v3(v: &Vector, offset: usize) -> [f64; 3] {
    [v[offset], v[offset + 1], v[offset + 2]]
}

fn put3(v: &mut Vector, offset: usize, a: [f64; 3]) {
    v[offset] = a[0];
    v[offset + 1] = a[1];
    v[offset + 2] = a[2];
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// [(α₁,β₁,γ₁,δ₁), (α₂,β₂,γ₂,δ₂)] =
/// (α₁×α₂, α₁×β₂ − α₂×β₁, α₁×γ₂ − α₂×γ₁ − δ₁β₂ + δ₂β₁, 0).
pub fn galilean_bracket(x: &Vector, y: &Vector) -> Vector {
    let (a1, b1, g1, d1) = (v3(x, 0), v3(x, 3), v3(x, 6), x[9]);
    let (a2, b2, g2, d2) = (v3(y, 0), v3(y, 3), v3(y, 6), y[9]);
    let mut out = Vector::zeros(10);
    put3(&mut out, 0, cross(&a1, &a2));
    put3(&mut out, 3, add3(cross(&a1, &b2), scale3(cross(&a2, &b1), -1.0)));
    let g = add3(
        add3(cross(&a1, &g2), scale3(cross(&a2, &g1), -1.0)),
        add3(scale3(b2, -d1), scale3(b1, d2)),
    );
    put3(&mut out, 6, g);
    out
}

/// The Galilean algebra with κ = 2α·α′ + β·β′ + γ·γ′ + δδ′.
pub fn galilean_algebra() -> LieAlgebraSpec {
    let d = 10;
    let mut c = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let mut ei = Vector::zeros(d);
            let mut ej = Vector::zeros(d);
            ei[i] = 1.0;
            ej[j] = 1.0;
            let b = galilean_bracket(&ei, &ej);
            for k in 0..d {
                c[(i * d + j) * d + k] = b[k];
            }
        }
    }
    let mut gram = Mat::identity(d, d);
    for i in 0..3 {
        gram[(i, i)] = 2.0;
    }
    let labels = ["a1", "a2", "a3", "b1", "b2", "b3", "g1", "g2", "g3", "d"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    LieAlgebraSpec::new(d, c, gram, labels).expect("Galilean structure constants are valid")
}

/// 5×5 matrix of an algebra element: [[α̂, β, γ], [0, 0, δ], [0, 0, 0]].
pub fn algebra_matrix(xi: &Vector) -> Mat {
    let mut m = Mat::zeros(5, 5);
    m.view_mut((0, 0), (3, 3)).copy_from(&hat(&v3(xi, 0)));
    for i in 0..3 {
        m[(i, 3)] = xi[3 + i];
        m[(i, 4)] = xi[6 + i];
    }
    m[(3, 4)] = xi[9];
    m
}

fn algebra_coords(m: &Mat) -> Vector {
    let mut v = Vector::zeros(10);
    v[0] = m[(2, 1)];
    v[1] = m[(0, 2)];
    v[2] = m[(1, 0)];
    for i in 0..3 {
        v[3 + i] = m[(i, 3)];
        v[6 + i] = m[(i, 4)];
    }
    v[9] = m[(3, 4)];
    v
}

/// A Galilean transformation (R, v, a, τ), stored as [[R, v, a], [0, 1, τ], [0, 0, 1]].
#[derive(Clone, Debug, PartialEq)]
pub struct GalileanElement(pub Mat);

impl GalileanElement {
    pub fn new(r: Mat, v: [f64; 3], a: [f64; 3], tau: f64) -> Self {
        let mut m = Mat::identity(5, 5);
        m.view_mut((0, 0), (3, 3)).copy_from(&r);
        for i in 0..3 {
            m[(i, 3)] = v[i];
            m[(i, 4)] = a[i];
        }
        m[(3, 4)] = tau;
        Self(m)
    }

    pub fn rotation(&self) -> Mat {
        self.0.view((0, 0), (3, 3)).into_owned()
    }

    pub fn boost(&self) -> [f64; 3] {
        [self.0[(0, 3)], self.0[(1, 3)], self.0[(2, 3)]]
    }

    pub fn translation(&self) -> [f64; 3] {
        [self.0[(0, 4)], self.0[(1, 4)], self.0[(2, 4)]]
    }

    pub fn time(&self) -> f64 {
        self.0[(3, 4)]
    }
}

fn mat3_apply(r: &Mat, a: [f64; 3]) -> [f64; 3] {
    let v = r * Vector::from_row_slice(&a);
    [v[0], v[1], v[2]]
}

/// The spin particle: ℝ³×ℝ³×S² with ω = dp∧dq + s·vol_{S²}.
#[derive(Clone, Debug)]
pub struct GalileanSpec {
    pub params: GalileanParams,
    algebra: LieAlgebraSpec,
}

impl GalileanSpec {
    pub fn new(params: GalileanParams) -> Self {
        Self { params, algebra: galilean_algebra() }
    }

    /// (0, 0, x), a point of the first critical family.
    pub fn first_family_point(x: [f64; 3]) -> Vector {
        let n = dot3(x, x).sqrt();
        let mut m = Vector::zeros(9);
        put3(&mut m, 6, scale3(x, 1.0 / n));
        m
    }
}

impl HamiltonianAction for GalileanSpec {
    fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    fn point_dim(&self) -> usize {
        9
    }

    /// ξ·(q,p,x) = (α×q + γ − (δ/m)p, α×p + mβ, α×x).
    fn inf_action(&self, xi: &Vector, m: &Vector) -> Vector {
        let mass = self.params.mass;
        let (a, b, g, d) = (v3(xi, 0), v3(xi, 3), v3(xi, 6), xi[9]);
        let (q, p, x) = (v3(m, 0), v3(m, 3), v3(m, 6));
        let mut out = Vector::zeros(9);
        put3(&mut out, 0, add3(add3(cross(&a, &q), g), scale3(p, -d / mass)));
        put3(&mut out, 3, add3(cross(&a, &p), scale3(b, mass)));
        put3(&mut out, 6, cross(&a, &x));
        out
    }

    /// J(q,p,x) = (½q×p − (s/2)x, −mq, p, −‖p‖²/2m).
    fn momentum(&self, m: &Vector) -> Vector {
        let GalileanParams { mass, spin } = self.params;
        let (q, p, x) = (v3(m, 0), v3(m, 3), v3(m, 6));
        let mut out = Vector::zeros(10);
        put3(&mut out, 0, add3(scale3(cross(&q, &p), 0.5), scale3(x, -spin / 2.0)));
        put3(&mut out, 3, scale3(q, -mass));
        put3(&mut out, 6, p);
        out[9] = -dot3(p, p) / (2.0 * mass);
        out
    }

    fn omega_at(&self, m: &Vector, x: &Vector, y: &Vector) -> f64 {
        let pt = v3(m, 6);
        dot3(v3(x, 3), v3(y, 0)) - dot3(v3(x, 0), v3(y, 3))
            + self.params.spin * dot3(pt, cross(&v3(x, 6), &v3(y, 6)))
    }

    /// j(δq, δp, δx) = (δp, −δq, x×δx).
    fn acs_at(&self, m: &Vector, x: &Vector) -> Vector {
        let mut out = Vector::zeros(9);
        put3(&mut out, 0, v3(x, 3));
        put3(&mut out, 3, scale3(v3(x, 0), -1.0));
        put3(&mut out, 6, cross(&v3(m, 6), &v3(x, 6)));
        out
    }

    fn has_analytic_tangent(&self) -> bool {
        true
    }

    fn momentum_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        let GalileanParams { mass, spin } = self.params;
        let (q, p) = (v3(m, 0), v3(m, 3));
        let (dq, dp, dx) = (v3(x, 0), v3(x, 3), v3(x, 6));
        let mut out = Vector::zeros(10);
        let rot = scale3(add3(cross(&dq, &p), cross(&q, &dp)), 0.5);
        put3(&mut out, 0, add3(rot, scale3(dx, -spin / 2.0)));
        put3(&mut out, 3, scale3(dq, -mass));
        put3(&mut out, 6, dp);
        out[9] = -dot3(p, dp) / mass;
        out
    }

    fn project_tangent(&self, m: &Vector, x: &Vector) -> Vector {
        let pt = v3(m, 6);
        let dx = v3(x, 6);
        let mut out = x.clone();
        put3(&mut out, 6, add3(dx, scale3(pt, -dot3(pt, dx))));
        out
    }

    fn retract(&self, m: &Vector, x: &Vector) -> Vector {
        let mut out = m + x;
        let s = v3(&out, 6);
        let n = dot3(s, s).sqrt();
        put3(&mut out, 6, scale3(s, 1.0 / n));
        out
    }

    /// τ_mσ*(X) = (α×δq − (δ/m)δp, α×δp, α×δx), projected to T_mM.
    fn linearize_isotropy(&self, sigma: &Vector, m: &Vector, x: &Vector) -> Vector {
        let a = v3(sigma, 0);
        let d = sigma[9];
        let (dq, dp, dx) = (v3(x, 0), v3(x, 3), v3(x, 6));
        let mut out = Vector::zeros(9);
        put3(&mut out, 0, add3(cross(&a, &dq), scale3(dp, -d / self.params.mass)));
        put3(&mut out, 3, cross(&a, &dp));
        put3(&mut out, 6, cross(&a, &dx));
        self.project_tangent(m, &out)
    }

    fn base_point(&self) -> Option<Vector> {
        None
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        let mut m = gaussian(rng, 9);
        let x = unit_gaussian(rng, 3);
        m.rows_mut(6, 3).copy_from(&x);
        m
    }
}

/// The ℝ⁶ = {(q, p)} affine factor with ω = dp∧dq and j(δq, δp) = (δp, −δq).
pub fn build_galilean_affine(params: GalileanParams) -> Result<AffineActionSpec> {
    let mass = params.mass;
    let mut omega = Mat::zeros(6, 6);
    for i in 0..3 {
        omega[(i, 3 + i)] = -1.0;
        omega[(3 + i, i)] = 1.0;
    }
    let space = SymplecticSpace::new(omega)?;
    let j = CompatibleStructure::standard(&space)?;
    let algebra = galilean_algebra();
    let mut rho = vec![Mat::zeros(6, 6); 10];
    for i in 0..3 {
        let mut e = [0.0; 3];
        e[i] = 1.0;
        let h = hat(&e);
        rho[i].view_mut((0, 0), (3, 3)).copy_from(&h);
        rho[i].view_mut((3, 3), (3, 3)).copy_from(&h);
    }
    for i in 0..3 {
        rho[9][(i, 3 + i)] = -1.0 / mass;
    }
    let mut tau = Mat::zeros(6, 10);
    for i in 0..3 {
        tau[(i, 6 + i)] = 1.0;
        tau[(3 + i, 3 + i)] = mass;
    }
    AffineActionSpec::new(space, algebra, j, rho, tau, None)
}

/// Both packagings of the example.
pub fn build_galilean(params: GalileanParams) -> Result<(AffineActionSpec, GalileanSpec)> {
    Ok((build_galilean_affine(params)?, GalileanSpec::new(params)))
}

fn group_ops_identity() -> GalileanElement {
    GalileanElement(Mat::identity(5, 5))
}

fn group_inverse(g: &GalileanElement) -> GalileanElement {
    let r = g.rotation();
    let rt = r.transpose();
    let v = g.boost();
    let a = g.translation();
    let t = g.time();
    let vi = scale3(mat3_apply(&rt, v), -1.0);
    let ai = scale3(mat3_apply(&rt, add3(a, scale3(v, -t))), -1.0);
    GalileanElement::new(rt, vi, ai, -t)
}

fn group_sample(rng: &mut dyn RngCore) -> GalileanElement {
    let w = gaussian(rng, 3);
    let r = expm(&hat(&[w[0], w[1], w[2]]));
    let v = gaussian(rng, 3);
    let a = gaussian(rng, 3);
    let t = gaussian(rng, 1)[0];
    GalileanElement::new(r, [v[0], v[1], v[2]], [a[0], a[1], a[2]], t)
}

fn group_adjoint(g: &GalileanElement) -> Mat {
    let gi = group_inverse(g);
    let cols: Vec<Vector> = (0..10)
        .map(|k| {
            let mut e = Vector::zeros(10);
            e[k] = 1.0;
            algebra_coords(&(&g.0 * algebra_matrix(&e) * &gi.0))
        })
        .collect();
    Mat::from_columns(&cols)
}

/// The Galilean group acting on the affine factor ℝ⁶.
#[derive(Clone, Debug)]
pub struct GalileanAffineGroup {
    spec: AffineActionSpec,
    pub params: GalileanParams,
}

impl GalileanAffineGroup {
    pub fn new(params: GalileanParams) -> Result<Self> {
        Ok(Self { spec: build_galilean_affine(params)?, params })
    }
}

impl GroupLaw for GalileanAffineGroup {
    type Element = GalileanElement;

    fn identity(&self) -> GalileanElement {
        group_ops_identity()
    }

    fn compose(&self, g: &GalileanElement, h: &GalileanElement) -> GalileanElement {
        GalileanElement(&g.0 * &h.0)
    }

    fn inverse(&self, g: &GalileanElement) -> GalileanElement {
        group_inverse(g)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> GalileanElement {
        group_sample(rng)
    }
}

impl GroupAction for GalileanAffineGroup {
    type Action = AffineActionSpec;

    fn action(&self) -> &AffineActionSpec {
        &self.spec
    }

    fn act(&self, g: &GalileanElement, m: &Vector) -> Vector {
        self.affine_act(g, m)
    }

    fn adjoint(&self, g: &GalileanElement) -> Mat {
        group_adjoint(g)
    }

    fn exp(&self, xi: &Vector) -> GalileanElement {
        GalileanElement(expm(&algebra_matrix(xi)))
    }
}

impl AffineGroup for GalileanAffineGroup {
    /// (q, p) ↦ (R(q − τp/m), Rp).
    fn rho(&self, g: &GalileanElement) -> Mat {
        let r = g.rotation();
        let mut out = Mat::zeros(6, 6);
        out.view_mut((0, 0), (3, 3)).copy_from(&r);
        out.view_mut((0, 3), (3, 3)).copy_from(&(&r * (-g.time() / self.params.mass)));
        out.view_mut((3, 3), (3, 3)).copy_from(&r);
        out
    }

    /// τ(g) = (a − vτ, mv).
    fn tau(&self, g: &GalileanElement) -> Vector {
        let v = g.boost();
        let mut out = Vector::zeros(6);
        put3(&mut out, 0, add3(g.translation(), scale3(v, -g.time())));
        put3(&mut out, 3, scale3(v, self.params.mass));
        out
    }
}

/// The Galilean group acting on ℝ³×ℝ³×S².
#[derive(Clone, Debug)]
pub struct GalileanGroup {
    spec: GalileanSpec,
}

impl GalileanGroup {
    pub fn new(params: GalileanParams) -> Self {
        Self { spec: GalileanSpec::new(params) }
    }
}

impl GroupLaw for GalileanGroup {
    type Element = GalileanElement;

    fn identity(&self) -> GalileanElement {
        group_ops_identity()
    }

    fn compose(&self, g: &GalileanElement, h: &GalileanElement) -> GalileanElement {
        GalileanElement(&g.0 * &h.0)
    }

    fn inverse(&self, g: &GalileanElement) -> GalileanElement {
        group_inverse(g)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> GalileanElement {
        group_sample(rng)
    }
}

impl GroupAction for GalileanGroup {
    type Action = GalileanSpec;

    fn action(&self) -> &GalileanSpec {
        &self.spec
    }

    /// (R,v,a,τ)·(q,p,x) = (R(q − τp/m) − vτ + a, Rp + mv, Rx).
    fn act(&self, g: &GalileanElement, m: &Vector) -> Vector {
        let mass = self.spec.params.mass;
        let r = g.rotation();
        let (q, p, x) = (v3(m, 0), v3(m, 3), v3(m, 6));
        let t = g.time();
        let v = g.boost();
        let mut out = Vector::zeros(9);
        let q1 = add3(mat3_apply(&r, add3(q, scale3(p, -t / mass))), add3(scale3(v, -t), g.translation()));
        put3(&mut out, 0, q1);
        put3(&mut out, 3, add3(mat3_apply(&r, p), scale3(v, mass)));
        put3(&mut out, 6, mat3_apply(&r, x));
        out
    }

    fn adjoint(&self, g: &GalileanElement) -> Mat {
        group_adjoint(g)
    }

    fn exp(&self, xi: &Vector) -> GalileanElement {
        GalileanElement(expm(&algebra_matrix(xi)))
    }
}

/// The Bargmann cocycle (m/2)(v₁·R₁a₂ − a₁·R₁v₂ − τ₂ v₁·R₁v₂).
pub fn bargmann_cocycle(params: GalileanParams, g1: &GalileanElement, g2: &GalileanElement) -> f64 {
    let r1 = g1.rotation();
    let (v1, a1) = (g1.boost(), g1.translation());
    let (v2, a2, t2) = (g2.boost(), g2.translation(), g2.time());
    let ra2 = mat3_apply(&r1, a2);
    let rv2 = mat3_apply(&r1, v2);
    0.5 * params.mass * (dot3(v1, ra2) - dot3(a1, rv2) - t2 * dot3(v1, rv2))
}

/// A point of the second critical family, which exists iff s² > 4m².
///
/// ‖p‖² = 2m²(s − c)/c and q = c/(2m²)·p×x with c = (4m²s)^{1/3}.
pub fn galilean_second_critical_family(params: GalileanParams, p_direction: [f64; 3], x: [f64; 3]) -> Result<Vector> {
    let GalileanParams { mass, spin } = params;
    let c = (4.0 * mass * mass * spin).cbrt();
    if spin <= c {
        return Err(Error::precondition(
            format!("second critical family needs s > (4m²s)^(1/3), i.e. s² > 4m² (s = {spin}, m = {mass})"),
            c - spin,
            0.0,
        ));
    }
    let xn = dot3(x, x).sqrt();
    let x = scale3(x, 1.0 / xn);
    let pn = dot3(p_direction, p_direction).sqrt();
    let ph = scale3(p_direction, 1.0 / pn);
    if dot3(ph, x).abs() > 1e-12 {
        return Err(Error::Invalid("p direction must be orthogonal to x".into()));
    }
    let p_norm = (2.0 * mass * mass * (spin - c) / c).sqrt();
    let p = scale3(ph, p_norm);
    let q = scale3(cross(&p, &x), c / (2.0 * mass * mass));
    let mut m = Vector::zeros(9);
    put3(&mut m, 0, q);
    put3(&mut m, 3, p);
    put3(&mut m, 6, x);
    Ok(m)
}

/// ‖p‖² on the second family.
pub fn second_family_p_squared(params: GalileanParams) -> f64 {
    let GalileanParams { mass, spin } = params;
    let c = (4.0 * mass * mass * spin).cbrt();
    2.0 * mass * mass * (spin - c) / c
}

/// J on the second family: (−(m²s/2)^{1/3}x, −(s/2m)^{1/3}p×x, p, −m(s − c)/c).
pub fn second_family_momentum(params: GalileanParams, p: [f64; 3], x: [f64; 3]) -> Vector {
    let GalileanParams { mass, spin } = params;
    let c = (4.0 * mass * mass * spin).cbrt();
    let mut out = Vector::zeros(10);
    put3(&mut out, 0, scale3(x, -(mass * mass * spin / 2.0).cbrt()));
    put3(&mut out, 3, scale3(cross(&p, &x), -(spin / (2.0 * mass)).cbrt()));
    put3(&mut out, 6, p);
    out[9] = -mass * (spin - c) / c;
    out
}

fn complex_slot(re: [f64; 3], im: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    (re, im)
}

fn assemble(slots: [([f64; 3], [f64; 3]); 3], delta: (f64, f64)) -> ComplexVector {
    let mut re = Vector::zeros(10);
    let mut im = Vector::zeros(10);
    for (k, (r, i)) in slots.iter().enumerate() {
        put3(&mut re, 3 * k, *r);
        put3(&mut im, 3 * k, *i);
    }
    re[9] = delta.0;
    im[9] = delta.1;
    ComplexVector { re, im }
}

/// (a x, b x, i m b x, θ) with a, b, θ complex: the part of the stabilizer of (0,0,x) commuting with J.
pub fn stabilizer_center_element(params: GalileanParams, x: [f64; 3], a: (f64, f64), b: (f64, f64), theta: (f64, f64)) -> ComplexVector {
    let m = params.mass;
    assemble(
        [
            complex_slot(scale3(x, a.0), scale3(x, a.1)),
            complex_slot(scale3(x, b.0), scale3(x, b.1)),
            // i m (b₀ + i b₁) x = m(−b₁ + i b₀) x
            complex_slot(scale3(x, -m * b.1), scale3(x, m * b.0)),
        ],
        theta,
    )
}

/// (α×x + iα, β×x + iβ, i m(β×x + iβ), 0) for α, β ⊥ x.
pub fn stabilizer_plus_element(params: GalileanParams, x: [f64; 3], alpha: [f64; 3], beta: [f64; 3]) -> ComplexVector {
    let m = params.mass;
    let bx = cross(&beta, &x);
    assemble(
        [
            complex_slot(cross(&alpha, &x), alpha),
            complex_slot(bx, beta),
            complex_slot(scale3(beta, -m), scale3(bx, m)),
        ],
        (0.0, 0.0),
    )
}

/// (0, β×x − iβ, i m(β×x − iβ), 0) for β ⊥ x.
pub fn stabilizer_minus_element(params: GalileanParams, x: [f64; 3], beta: [f64; 3]) -> ComplexVector {
    let m = params.mass;
    let bx = cross(&beta, &x);
    assemble(
        [
            complex_slot([0.0; 3], [0.0; 3]),
            complex_slot(bx, scale3(beta, -1.0)),
            complex_slot(scale3(beta, m), scale3(bx, m)),
        ],
        (0.0, 0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{momentum_defect, sigma_one_cocycle, Derivative};
    use crate::affine::group_cocycle_c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bracket_matches_matrix_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let x = gaussian(&mut rng, 10);
            let y = gaussian(&mut rng, 10);
            let (mx, my) = (algebra_matrix(&x), algebra_matrix(&y));
            let comm = algebra_coords(&(&mx * &my - &my * &mx));
            assert!((comm - galilean_bracket(&x, &y)).amax() < 1e-12);
        }
        assert!(galilean_algebra().jacobi_defect().max_defect < 1e-14);
    }

    #[test]
    fn infinitesimal_action_is_derivative_of_group_action() {
        let group = GalileanGroup::new(GalileanParams::new(1.3, 0.7).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = group.action().sample_point(&mut rng);
        let xi = gaussian(&mut rng, 10);
        let h = 1e-6;
        let fd = (group.act(&group.exp(&(&xi * h)), &m) - group.act(&group.exp(&(&xi * -h)), &m)) / (2.0 * h);
        assert!((fd - group.action().inf_action(&xi, &m)).amax() < 1e-8);
    }

    #[test]
    fn group_action_is_a_left_action() {
        let group = GalileanGroup::new(GalileanParams::default());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = group.action().sample_point(&mut rng);
        let (g, h) = (group.sample(&mut rng), group.sample(&mut rng));
        let lhs = group.act(&group.compose(&g, &h), &m);
        let rhs = group.act(&g, &group.act(&h, &m));
        assert!((lhs - rhs).amax() < 1e-12);
        let gi = group.inverse(&g);
        assert!((group.compose(&g, &gi).0 - Mat::identity(5, 5)).amax() < 1e-12);
    }

    #[test]
    fn first_family_momentum() {
        let params = GalileanParams::new(2.0, 3.0).unwrap();
        let spec = GalileanSpec::new(params);
        let m = GalileanSpec::first_family_point([0.0, 0.6, 0.8]);
        let j = spec.momentum(&m);
        let mut expected = Vector::zeros(10);
        expected[1] = -1.5 * 0.6;
        expected[2] = -1.5 * 0.8;
        assert!((j - expected).amax() < 1e-15);
    }

    #[test]
    fn momentum_identity_at_random_points() {
        let spec = GalileanSpec::new(GalileanParams::new(0.8, 1.7).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let m = spec.sample_point(&mut rng);
            let d = momentum_defect(&spec, &m, 20, Derivative::FiniteDifference(1e-5), &mut rng).unwrap();
            assert!(d < 1e-6, "fd defect {d}");
            let d = momentum_defect(&spec, &m, 20, Derivative::Native, &mut rng).unwrap();
            assert!(d < 1e-12, "analytic defect {d}");
        }
    }

    #[test]
    fn affine_factor_reproduces_closed_form_momentum() {
        let params = GalileanParams::new(1.5, 2.0).unwrap();
        let (aff, full) = build_galilean(params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let m = full.sample_point(&mut rng);
        let v = m.rows(0, 6).into_owned();
        let mut ja = aff.affine_momentum(&v).unwrap();
        let x = v3(&m, 6);
        for i in 0..3 {
            ja[i] -= params.spin / 2.0 * x[i];
        }
        assert!((ja - full.momentum(&m)).amax() < 1e-12);
    }

    #[test]
    fn bargmann_matches_affine_cocycle() {
        let params = GalileanParams::new(1.7, 1.0).unwrap();
        let group = GalileanAffineGroup::new(params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..20 {
            let (g1, g2) = (group.sample(&mut rng), group.sample(&mut rng));
            let a = group_cocycle_c(&group, &g1, &g2);
            let b = bargmann_cocycle(params, &g1, &g2);
            assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn sigma_is_momentum_of_tau() {
        let params = GalileanParams::default();
        let group = GalileanGroup::new(params);
        let aff = GalileanAffineGroup::new(params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let m0 = GalileanSpec::first_family_point([0.0, 0.0, 1.0]);
        for _ in 0..10 {
            let g = group.sample(&mut rng);
            let s = sigma_one_cocycle(&group, &g, &m0);
            let expected = aff.action().affine_momentum(&aff.tau(&g)).unwrap();
            assert!((s - expected).amax() < 1e-10);
        }
        assert!(sigma_one_cocycle(&group, &group.identity(), &m0).amax() < 1e-15);
    }

    #[test]
    fn second_family_matches_displayed_momentum() {
        let params = GalileanParams::new(1.0, 10.0).unwrap();
        let p_dir = [1.0, 0.0, 0.0];
        let x = [0.0, 0.0, 1.0];
        let m = galilean_second_critical_family(params, p_dir, x).unwrap();
        let spec = GalileanSpec::new(params);
        let p = v3(&m, 3);
        let j = spec.momentum(&m);
        assert!((j - second_family_momentum(params, p, x)).amax() < 1e-12);
        assert!((dot3(p, p) - 2.0 * (10.0 - 40f64.cbrt()) / 40f64.cbrt()).abs() < 1e-12);
        let bad = GalileanParams::new(1.0, 2.0).unwrap();
        assert!(matches!(
            galilean_second_critical_family(bad, p_dir, x),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(GalileanParams::new(0.0, 1.0).is_err());
        assert!(GalileanParams::new(1.0, 0.0).is_err());
        assert!(GalileanParams::new(-1.0, 1.0).is_ok());
    }
}
