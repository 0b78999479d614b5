//! Lifted arithmetic in the universal cover of SU(1,1) and in the cover of
//! the negative cone `L = {|z| < |w|}` of the pseudo-Euclidean space E^{2,2}.
//!
//! Group elements are stored as `(z, α)`; the modulus `r = sqrt(1 + |z|²)` is
//! always recomputed, so `r² − |z|² = 1` holds by construction. The element
//! `(z, α)` projects to `(z, v)` with `v = r·e^{iα}`, which we identify with
//! the matrix `[[v̄, z], [z̄, v]]`.
//!
//! Products are lifted with the principal-argument cocycle: if the downstairs
//! product is `v' = v₁v₂(1 + c)` then `α' = α₁ + α₂ + Arg(1 + c)`. Because
//! `|c| < 1` the correction never leaves `(−π/2, π/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Point of the Poincaré disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(pub Complex64);

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Self {
        DiscPoint(Complex64::new(re, im))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Hyperbolic distance (curvature −1).
    pub fn distance(&self, other: &DiscPoint) -> f64 {
        let num = (self.0 - other.0).norm();
        let den = (Complex64::new(1.0, 0.0) - self.0.conj() * other.0).norm();
        2.0 * (num / den).atanh()
    }
}

/// Point `(z, w)` of E^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoVector {
    pub z: Complex64,
    pub w: Complex64,
}

impl PseudoVector {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }
}

/// Symmetric bilinear form of signature (2,2): `Re(z₁z̄₂ − w₁w̄₂)`.
pub fn pairing(a: &PseudoVector, b: &PseudoVector) -> f64 {
    (a.z * b.z.conj() - a.w * b.w.conj()).re
}

/// Element of the universal covering group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UElement {
    pub z: Complex64,
    pub alpha: f64,
}

/// Point of the universal cover of the cone `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePoint {
    pub z: Complex64,
    pub alpha: f64,
    pub r: f64,
}

impl UElement {
    pub const IDENTITY: UElement = UElement {
        z: Complex64::new(0.0, 0.0),
        alpha: 0.0,
    };

    pub fn new(z: Complex64, alpha: f64) -> Self {
        Self { z, alpha }
    }

    /// The generator `r₀(2π) = (0, −π)` of the centre raised to the power `j`.
    pub fn central(j: i64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), -PI * j as f64)
    }

    /// Copy with a replaced argument.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn r(&self) -> f64 {
        (1.0 + self.z.norm_sqr()).sqrt()
    }

    /// Second downstairs coordinate `v = r·e^{iα}`.
    pub fn v(&self) -> Complex64 {
        Complex64::from_polar(self.r(), self.alpha)
    }

    pub fn as_cone_point(&self) -> ConePoint {
        ConePoint {
            z: self.z,
            alpha: self.alpha,
            r: self.r(),
        }
    }

    /// If the element is central (`z ≈ 0`, `α ≈ −jπ`), returns `j`.
    pub fn central_power(&self, tol: f64) -> Option<i64> {
        if self.z.norm() > tol {
            return None;
        }
        let j = (-self.alpha / PI).round();
        ((-self.alpha / PI - j).abs() * PI <= tol).then_some(j as i64)
    }

    /// Componentwise distance in `(z, α)`.
    pub fn distance(&self, other: &UElement) -> f64 {
        (self.z - other.z).norm().max((self.alpha - other.alpha).abs())
    }
}

impl ConePoint {
    pub fn new(z: Complex64, alpha: f64, r: f64) -> Self {
        debug_assert!(r > 0.0 && z.norm() < r, "not a point of the cone cover");
        Self { z, alpha, r }
    }

    pub fn w(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.alpha)
    }

    /// `λ = sqrt(r² − |z|²)`, the fibre coordinate of `L̃ ≅ G̃ × R₊`.
    pub fn fibre(&self) -> f64 {
        (self.r * self.r - self.z.norm_sqr()).max(0.0).sqrt()
    }

    pub fn distance(&self, other: &ConePoint) -> f64 {
        (self.z - other.z)
            .norm()
            .max((self.alpha - other.alpha).abs())
            .max((self.r - other.r).abs())
    }
}

/// Covering projection for group elements: `(z, α) ↦ (z, r·e^{iα})`.
pub fn project_pi(g: &UElement) -> PseudoVector {
    PseudoVector::new(g.z, g.v())
}

/// Covering projection for cone points.
pub fn project_pi_cone(a: &ConePoint) -> PseudoVector {
    PseudoVector::new(a.z, a.w())
}

/// Radial projection onto the group: divides by `λ = sqrt(r² − |z|²)`.
pub fn project_theta(a: &ConePoint) -> UElement {
    let lambda = a.fibre();
    UElement::new(a.z / lambda, a.alpha)
}

/// Error returned by [`scale`] for a non-positive factor.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("scale factor must be positive, got {0}")]
pub struct NonPositiveScale(pub f64);

pub fn scale(lambda: f64, a: &ConePoint) -> Result<ConePoint, NonPositiveScale> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(ConePoint {
            z: a.z * lambda,
            alpha: a.alpha,
            r: a.r * lambda,
        })
    } else {
        Err(NonPositiveScale(lambda))
    }
}

/// Lifted product of two triples `(z, α, r)` whose downstairs images are
/// `(z, r·e^{iα})`. Returns the product triple; `|c| < 1` is asserted.
#[inline]
fn lifted_product(
    z1: Complex64,
    a1: f64,
    r1: f64,
    z2: Complex64,
    a2: f64,
    r2: f64,
) -> (Complex64, f64, f64) {
    let w1 = Complex64::from_polar(r1, a1);
    let w2 = Complex64::from_polar(r2, a2);
    let z = w1.conj() * z2 + z1 * w2;
    let c = z1.conj() * z2 / (w1 * w2);
    debug_assert!(c.norm() < 1.0, "cocycle correction outside the unit disc");
    let one_c = Complex64::new(1.0, 0.0) + c;
    (z, a1 + a2 + one_c.arg(), r1 * r2 * one_c.norm())
}

/// Cocycle correction `c` of a product, exposed for the continuity audit.
pub fn cocycle_correction(g: &UElement, h: &UElement) -> Complex64 {
    g.z.conj() * h.z / (g.v() * h.v())
}

pub fn mul(g: &UElement, h: &UElement) -> UElement {
    let (z, alpha, _) = lifted_product(g.z, g.alpha, g.r(), h.z, h.alpha, h.r());
    UElement::new(z, alpha)
}

pub fn inv(g: &UElement) -> UElement {
    UElement::new(-g.z, -g.alpha)
}

/// `g^n` by repeated squaring (negative powers use the inverse).
pub fn pow(g: &UElement, n: i64) -> UElement {
    let mut base = if n < 0 { inv(g) } else { *g };
    let mut e = n.unsigned_abs();
    let mut acc = UElement::IDENTITY;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Left translation `g · a`.
pub fn left_mul(g: &UElement, a: &ConePoint) -> ConePoint {
    let (z, alpha, r) = lifted_product(g.z, g.alpha, g.r(), a.z, a.alpha, a.r);
    ConePoint { z, alpha, r }
}

/// Right translation `a · h`.
pub fn right_mul(a: &ConePoint, h: &UElement) -> ConePoint {
    let (z, alpha, r) = lifted_product(a.z, a.alpha, a.r, h.z, h.alpha, h.r());
    ConePoint { z, alpha, r }
}

/// Action of the pair `(g₁, g₂)`: `a ↦ g₁·a·g₂⁻¹`.
pub fn act(g1: &UElement, g2: &UElement, a: &ConePoint) -> ConePoint {
    left_mul(g1, &right_mul(a, &inv(g2)))
}

/// The same action on group elements.
pub fn act_group(g1: &UElement, g2: &UElement, a: &UElement) -> UElement {
    mul(g1, &mul(a, &inv(g2)))
}

/// Lift `T_x = (s·x, 0)`, `s = (1 − |x|²)^{−1/2}`, which maps 0 to `x`.
pub fn disc_translation(x: &DiscPoint) -> UElement {
    let s = 1.0 / (1.0 - x.0.norm_sqr()).sqrt();
    UElement::new(x.0 * s, 0.0)
}

/// `r_x(t)`: the lift of the rotation through angle `t` about `x`.
pub fn rotation_lift(x: &DiscPoint, t: f64) -> UElement {
    let r0 = UElement::new(Complex64::new(0.0, 0.0), -0.5 * t);
    if x.0.norm_sqr() == 0.0 {
        return r0;
    }
    let tx = disc_translation(x);
    mul(&mul(&tx, &r0), &inv(&tx))
}

/// Möbius action of the downstairs image `(a, b)`: `x ↦ (b̄x + a)/(āx + b)`.
pub fn disc_action(g: &UElement, x: &DiscPoint) -> DiscPoint {
    let a = g.z;
    let b = g.v();
    DiscPoint((b.conj() * x.0 + a) / (a.conj() * x.0 + b))
}

/// Downstairs matrix `[[v̄, z], [z̄, v]]`.
pub fn matrix(g: &UElement) -> [[Complex64; 2]; 2] {
    let v = g.v();
    [[v.conj(), g.z], [g.z.conj(), v]]
}
