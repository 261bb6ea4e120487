//! The fixed registry of anchors. Every check record names the identity it tests
//! by one of these strings; the order here is also the order checks are reported in.

use serde::{Serialize, Serializer};

macro_rules! anchors {
    ($($variant:ident => $text:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Anchor {
            $($variant,)*
        }

        impl Anchor {
            pub const ALL: &'static [Anchor] = &[$(Anchor::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Anchor::$variant => $text,)*
                }
            }
        }
    };
}

anchors! {
    Jacobi => "Jacobi identity of the structure constants",
    PairingSymmetry => "κ symmetric and nondegenerate",
    AcsCompatible => "j² = −1, ω(j·, j·) = ω, ω(·, j·) > 0",
    MomentumIdentity => "d⟨J, ξ⟩ = −ι(ξ·m)ω",
    MomentumClosedForm => "closed-form momentum map",
    SigmaConstant => "Σ(ξ, η) = κ(J(m), [ξ, η]) + ω(ξ·m, η·m) is independent of m",
    SigmaClosedForm => "Σ(ξ, η) = ω(τ′ξ, τ′η) for affine actions",
    SigmaKappaSkew => "Σ_κ is κ-skew",
    OneCocycle => "σ(g) = J(g·m) − Ad*_{g⁻¹}J(m) is independent of m",
    OneCocycleLaw => "σ(gh) = σ(g) + Ad*_{g⁻¹}σ(h)",
    GroupCocycle => "c(g₁, g₂) = ½ω(τ(g₁), τ(g₁g₂))",
    TriangleCocycle => "c(g₁, g₂) as the ω-area of a contraction triangle",
    Bargmann => "Bargmann cocycle of the Galilean group",
    CocycleIdentity => "c(g₁, g₂) + c(g₁g₂, g₃) = c(g₂, g₃) + c(g₁, g₂g₃)",
    ExtensionLaw => "central extension multiplication is associative",
    GelfandFuchs => "Gelfand–Fuchs cocycle Σ(X, Y) = −∫XY‴",
    BottThurston => "Bott–Thurston cocycle ½∫log((φ₁φ₂)′) d log φ₂′",
    Schwarzian => "σ(φ⁻¹) = −S(φ) dφ²",
    ContractionMomentum => "J(m) = ∫₀¹ Λ*ω(∂_t, ξ·m) dt",
    CayleyLemma => "∫₀¹ Λ*Ω(∂_t, A) dt = ¼tr(φ_{j₀}(j)A)",
    Critical => "m critical for ‖J‖² iff J(m)·m = 0",
    CriticalFamily => "closed-form critical family",
    KirwanFlow => "gradient flow of ‖J‖² converges to a critical point",
    LichnerowiczSymmetric => "L_m is κ-symmetric",
    ZSkew => "Z_m is κ-skew",
    ZCrossCheck => "Z_m = Σ_κ − ad*J(m)",
    CalabiHermitian => "C±_m are κ_C-Hermitian",
    CalabiNegative => "C⁺_m ≤ 0",
    CalabiFactorization => "C⁺_m = −Υ*_mΥ_m",
    CalabiImaginary => "Im C⁺_m = T_mJ ∘ Υ_m",
    CalabiKernel => "ker C⁺_m = ker Υ_m = (g_C)_m",
    CalabiCommute => "[C⁺_m, C⁻_m] = 0 at critical points of equivariant actions",
    StabilizerDimension => "dimension of the complexified stabilizer",
    StabilizerSpectrum => "eigenvalues of i·ad_{J(m)} on (g_C)_m",
    StabilizerEmbedding => "displayed stabilizer subspaces lie in the eigenclusters",
    NotSubalgebra => "c_m is not closed under the bracket",
    Refinement => "i·ad_{J(m)} ≤ 0 on (g_C)_m for equivariant actions",
    HessianFormula => "Hess_m = 2(‖dJ X‖² + ω(X, τ_m(J(m)*) X))",
    HessianOrbit => "½Hess(ζ·m, γ·m) = Re κ_C(ζ, C⁺_mR_mγ)",
    HessianPositive => "orbit Hessian is positive semidefinite for equivariant actions",
}

impl Anchor {
    /// Registry position, used to order merged check results.
    pub fn index(self) -> usize {
        Anchor::ALL.iter().position(|&a| a == self).unwrap_or(usize::MAX)
    }
}

impl Serialize for Anchor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}
