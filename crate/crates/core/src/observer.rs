//! Observer-observed products in the spacetime algebra `Cl(1,3)`.
//!
//! An [`ObserverFrame`] fixes the observer `γ₀`, the observed direction `γ₁`
//! and two completing spatial vectors `γ₂, γ₃`. Relative to that frame a
//! grade-1 element `a = a^μ γ_μ` has coordinates `(a⁰, a¹, a², a³)`, and the
//! spacetime split `aγ₀ = a⁰ + a^i γ_iγ₀` identifies it with a paravector in
//! `R ⊕ R^{3,0}`.
//!
//! Determinants are written with the `b` row on top:
//! `|b^μ b^ν; a^μ a^ν| = b^μ a^ν − b^ν a^μ`.

use std::fmt;

use crate::clifford::{vector_inner, CliffordSignature, Multivector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spinfactor::{Signature, SpinFactorElement};

/// Tolerance used to validate orthonormality of floating-point frames.
pub const FRAME_TOL: f64 = 1e-12;

/// Relative tolerance for cross-checks between evaluation paths in float mode.
pub const PATH_TOL: f64 = 1e-9;

const METRIC: [i64; 4] = [1, -1, -1, -1];

fn metric<T: Scalar>(mu: usize) -> T {
    T::from_i64(METRIC[mu])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObserverFrame<T = f64> {
    gamma: [Multivector<T>; 4],
}

impl<T: Scalar> ObserverFrame<T> {
    /// Validates that `gamma` is an orthonormal basis of the grade-1 space
    /// of `Cl(1,3)` with `γ₀² = 1` and `γ_i² = −1`.
    pub fn new(gamma: [Multivector<T>; 4]) -> Result<Self> {
        for (mu, g) in gamma.iter().enumerate() {
            if g.signature() != CliffordSignature::spacetime() {
                return Err(Error::InvalidFrame(format!(
                    "γ{mu} lives in {}, expected Cl(1,3)",
                    g.signature()
                )));
            }
            if !g.is_grade(1) {
                return Err(Error::InvalidFrame(format!("γ{mu} is not grade-1")));
            }
        }
        for mu in 0..4 {
            for nu in mu..4 {
                let got = vector_inner(&gamma[mu], &gamma[nu])?;
                let want = if mu == nu { metric(mu) } else { T::ZERO };
                if !got.close(want, FRAME_TOL, 0.0) {
                    return Err(Error::InvalidFrame(format!(
                        "<γ{mu}, γ{nu}> = {got:?}, expected {want:?}"
                    )));
                }
            }
        }
        Ok(Self { gamma })
    }

    /// The standard basis `γ_μ` of `Cl(1,3)`.
    pub fn standard() -> Self {
        let sta = CliffordSignature::spacetime();
        Self {
            gamma: std::array::from_fn(|mu| Multivector::basis_vector(sta, mu)),
        }
    }

    pub fn gamma(&self, mu: usize) -> &Multivector<T> {
        &self.gamma[mu]
    }

    /// Frame coordinates `a^μ = η_μμ ⟨a, γ_μ⟩` of a grade-1 element.
    pub fn coords(&self, a: &Multivector<T>) -> Result<[T; 4]> {
        if !a.is_grade(1) {
            return Err(Error::NotGrade1);
        }
        let mut out = [T::ZERO; 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            *slot = metric::<T>(mu) * vector_inner(a, &self.gamma[mu])?;
        }
        Ok(out)
    }

    /// `Σ c_μ γ_μ`.
    pub fn vector(&self, c: [T; 4]) -> Multivector<T> {
        self.combine(&c, &self.gamma)
    }

    /// `Σ c_i γ_i` over the spatial vectors `γ₁, γ₂, γ₃`.
    pub fn spatial_vector(&self, c: [T; 3]) -> Multivector<T> {
        self.combine(&c, &self.gamma[1..])
    }

    fn combine(&self, c: &[T], basis: &[Multivector<T>]) -> Multivector<T> {
        c.iter().zip(basis).fold(
            Multivector::zero(CliffordSignature::spacetime()),
            |acc, (&k, g)| acc.add(&g.scale(k)).expect("frame vectors share Cl(1,3)"),
        )
    }

    /// `γ_iγ₀` for `i ∈ {1,2,3}`; these square to `+1`.
    pub fn spatial_bivector(&self, i: usize) -> Multivector<T> {
        self.gamma[i]
            .geometric_product(&self.gamma[0])
            .expect("frame vectors share Cl(1,3)")
    }

    /// `γ₀∧γ₁∧γ₂∧γ₃` built from the frame's vectors.
    pub fn pseudoscalar(&self) -> Multivector<T> {
        self.gamma[1..]
            .iter()
            .fold(self.gamma[0].clone(), |acc, g| {
                acc.wedge(g).expect("frame vectors share Cl(1,3)")
            })
    }

    /// Coefficient of the frame pseudoscalar `I` in a grade-4 element `x`.
    ///
    /// `I Ĩ = −1` for an orthonormal `Cl(1,3)` frame, so the coefficient is
    /// `−⟨x Ĩ⟩₀`.
    pub fn pseudoscalar_coefficient(&self, x: &Multivector<T>) -> Result<T> {
        let rev = self.pseudoscalar().reverse();
        Ok(-x.geometric_product(&rev)?.scalar_part())
    }
}

/// An element `t + s^i γ_iγ₀` of the split space `P = {pγ₀}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Paravector<T = f64> {
    pub time: T,
    pub space: [T; 3],
    frame: ObserverFrame<T>,
}

impl<T: Scalar> Paravector<T> {
    pub fn new(time: T, space: [T; 3], frame: &ObserverFrame<T>) -> Self {
        Self {
            time,
            space,
            frame: frame.clone(),
        }
    }

    pub fn frame(&self) -> &ObserverFrame<T> {
        &self.frame
    }

    /// `t + Σ s_i γ_iγ₀`.
    pub fn to_multivector(&self) -> Multivector<T> {
        let mut mv = Multivector::scalar(CliffordSignature::spacetime(), self.time);
        for (i, &s) in self.space.iter().enumerate() {
            let e = self.frame.spatial_bivector(i + 1).scale(s);
            mv = mv.add(&e).expect("same algebra");
        }
        mv
    }

    /// The spatial reverse `(aγ₀)* = γ₀a`, i.e. `t − Σ s_i γ_iγ₀`.
    pub fn spatial_reverse(&self) -> Self {
        Self {
            time: self.time,
            space: self.space.map(|s| -s),
            frame: self.frame.clone(),
        }
    }

    /// Orthogonal projection of a multivector onto `P`: the scalar part plus
    /// the components along each `γ_iγ₀`, recovered as `⟨x γ_iγ₀⟩₀`.
    pub fn project(x: &Multivector<T>, frame: &ObserverFrame<T>) -> Result<Self> {
        let mut space = [T::ZERO; 3];
        for (i, slot) in space.iter_mut().enumerate() {
            *slot = x
                .geometric_product(&frame.spatial_bivector(i + 1))?
                .scalar_part();
        }
        Ok(Self::new(x.scalar_part(), space, frame))
    }

    /// The vector-space isomorphism `Φ: P → R ⊕ R^{3,0}`.
    pub fn to_spinfactor(&self) -> SpinFactorElement<T> {
        SpinFactorElement::new(Signature::euclidean3(), self.time, self.space.to_vec())
            .expect("three spatial components")
    }

    /// Inverse of [`Paravector::to_spinfactor`].
    pub fn from_spinfactor(x: &SpinFactorElement<T>, frame: &ObserverFrame<T>) -> Result<Self> {
        if x.signature() != Signature::euclidean3() {
            return Err(Error::SignatureMismatch {
                left: x.signature().to_string(),
                right: Signature::euclidean3().to_string(),
            });
        }
        let v = x.vector();
        Ok(Self::new(x.scalar(), [v[0], v[1], v[2]], frame))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

/// `a ↦ aγ₀`, decomposed as `a⁰ + a^i γ_iγ₀`.
pub fn spacetime_split<T: Scalar>(
    a: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<Paravector<T>> {
    let c = frame.coords(a)?;
    Ok(Paravector::new(c[0], [c[1], c[2], c[3]], frame))
}

/// `Φ(x)`: time ↦ scalar part, space ↦ vector part.
pub fn to_spinfactor<T: Scalar>(x: &Paravector<T>) -> SpinFactorElement<T> {
    x.to_spinfactor()
}

/// `(aγ₀) ⋆ (bγ₀) = (aγ₀)(γ₀b) = ab`, computed as a geometric product.
pub fn star<T: Scalar>(x: &Paravector<T>, y: &Paravector<T>) -> Result<Multivector<T>> {
    x.check(y)?;
    x.to_multivector()
        .geometric_product(&y.spatial_reverse().to_multivector())
}

/// `(aγ₀) ∘ (bγ₀) = ⟨a,b⟩ + [b⁰𝐚 − a⁰𝐛]γ₀`.
pub fn circ_p<T: Scalar>(x: &Paravector<T>, y: &Paravector<T>) -> Result<Paravector<T>> {
    x.check(y)?;
    let mut time = x.time * y.time;
    for (&s, &t) in x.space.iter().zip(&y.space) {
        time = time - s * t;
    }
    let space = std::array::from_fn(|i| y.time * x.space[i] - x.time * y.space[i]);
    Ok(Paravector::new(time, space, &x.frame))
}

/// `b⁰𝐚 − a⁰𝐛` as frame coordinates on `γ₁, γ₂, γ₃`.
pub fn partial_wedge_coords<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> [T; 3] {
    std::array::from_fn(|k| det2(b[0], b[k + 1], a[0], a[k + 1]))
}

/// The `0 ↔ 1` interchange of [`partial_wedge_coords`]:
/// `(|b¹ b⁰; a¹ a⁰|, |b¹ b²; a¹ a²|, |b¹ b³; a¹ a³|)`.
pub fn partial_wedge_dagger_coords<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> [T; 3] {
    let cols = [0, 2, 3];
    std::array::from_fn(|k| det2(b[1], b[cols[k]], a[1], a[cols[k]]))
}

/// `|top_l top_r; bot_l bot_r|`.
fn det2<T: Scalar>(top_l: T, top_r: T, bot_l: T, bot_r: T) -> T {
    top_l * bot_r - top_r * bot_l
}

/// `a ⋄ b = ⟨a,b⟩γ₀ + [b⁰𝐚 − a⁰𝐛]`.
pub fn diamond<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<Multivector<T>> {
    let (ca, cb) = (frame.coords(a)?, frame.coords(b)?);
    let inner = vector_inner(a, b)?;
    let w = partial_wedge_coords(&ca, &cb);
    Ok(frame.vector([inner, w[0], w[1], w[2]]))
}

/// The observer-observed partial wedge `a[∂∧]b = b⁰𝐚 − a⁰𝐛`.
pub fn partial_wedge<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<Multivector<T>> {
    let (ca, cb) = (frame.coords(a)?, frame.coords(b)?);
    Ok(frame.spatial_vector(partial_wedge_coords(&ca, &cb)))
}

/// The time-boost reflection `a[∂∧]†b`.
pub fn partial_wedge_dagger<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<Multivector<T>> {
    let (ca, cb) = (frame.coords(a)?, frame.coords(b)?);
    Ok(frame.spatial_vector(partial_wedge_dagger_coords(&ca, &cb)))
}

/// Pseudoscalar coefficient of `γ₀∧γ₁∧(a[∂∧]b)∧(a[∂∧]†b)`, evaluated with
/// the Clifford wedge.
pub fn quad_product_wedge<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<T> {
    let pw = partial_wedge(a, b, frame)?;
    let pwd = partial_wedge_dagger(a, b, frame)?;
    let x = frame
        .gamma(0)
        .wedge(frame.gamma(1))?
        .wedge(&pw)?
        .wedge(&pwd)?;
    frame.pseudoscalar_coefficient(&x)
}

/// `|b⁰ b¹; a⁰ a¹| · |b² b³; a² a³|`.
pub fn quad_product_determinant<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> T {
    det2(b[0], b[1], a[0], a[1]) * det2(b[2], b[3], a[2], a[3])
}

/// The quad pseudoscalar product, evaluated by both the wedge pipeline and
/// the determinant product. The two must agree (exactly for integers).
pub fn quad_product<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<T> {
    let by_wedge = quad_product_wedge(a, b, frame)?;
    let by_det = quad_product_determinant(&frame.coords(a)?, &frame.coords(b)?);
    if !by_wedge.close(by_det, PATH_TOL, by_det.to_f64()) {
        return Err(Error::InternalMismatch(format!(
            "quad product: wedge pipeline {by_wedge:?} vs determinant {by_det:?}"
        )));
    }
    Ok(by_det)
}

/// The quad product with its first factor rewritten under the observer ↔
/// observed exchange: `(|b¹ b⁰; a¹ a⁰| γ₁∧γ₀) ∧ (|b² b³; a² a³| γ₂∧γ₃)`,
/// evaluated in the Clifford algebra.
pub fn quad_product_exchanged<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<T> {
    let (ca, cb) = (frame.coords(a)?, frame.coords(b)?);
    let first = frame
        .gamma(1)
        .wedge(frame.gamma(0))?
        .scale(det2(cb[1], cb[0], ca[1], ca[0]));
    let second = frame
        .gamma(2)
        .wedge(frame.gamma(3))?
        .scale(det2(cb[2], cb[3], ca[2], ca[3]));
    frame.pseudoscalar_coefficient(&first.wedge(&second)?)
}

/// Boost velocity in units of `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostVelocity(f64);

impl BoostVelocity {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && v.abs() < 1.0 {
            Ok(Self(v))
        } else {
            Err(Error::InvalidVelocity(v))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// `1/√(1 − v²)`.
    pub fn lorentz_factor(&self) -> f64 {
        1.0 / (1.0 - self.0 * self.0).sqrt()
    }

    /// Boosts frame coordinates along the observed direction `γ₁`.
    pub fn apply(&self, w: [f64; 4]) -> [f64; 4] {
        let g = self.lorentz_factor();
        let v = self.0;
        [g * (w[0] - v * w[1]), g * (w[1] - v * w[0]), w[2], w[3]]
    }
}

impl fmt::Display for BoostVelocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coordinate boost of `w` along `γ₁` in the given frame (passive view).
pub fn boost(
    w: &Multivector<f64>,
    v: BoostVelocity,
    frame: &ObserverFrame<f64>,
) -> Result<Multivector<f64>> {
    Ok(frame.vector(v.apply(frame.coords(w)?)))
}

/// Symmetry findings of the quad product that need no boost, so they can be
/// evaluated exactly on integer inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFindings<T> {
    pub product: T,
    pub exchanged: T,
    pub swapped: T,
    pub exchange_invariant: bool,
    pub commutative: bool,
    pub hemi_linear: bool,
}

/// Hemi-linearity of the determinant form: linear in the `(γ₀,γ₁)` block and
/// in the `(γ₂,γ₃)` block of each argument separately, checked by scaling by
/// 3 and by additivity against a second block value.
fn hemi_linear<T: Scalar>(a: &[T; 4], b: &[T; 4], frame: &ObserverFrame<T>) -> Result<bool> {
    let three = T::from_i64(3);
    let q = |x: &[T; 4], y: &[T; 4]| -> Result<T> {
        quad_product(&frame.vector(*x), &frame.vector(*y), frame)
    };
    let base = q(a, b)?;
    let scale_tol = |lhs: T, rhs: T| lhs.close(rhs, PATH_TOL, rhs.to_f64());

    let mut ok = true;
    // arguments: (which=0 → a varies, 1 → b varies), (block=0 → 01, 1 → 23)
    for which in 0..2 {
        for block in 0..2 {
            let (x, y) = if which == 0 { (a, b) } else { (b, a) };
            let (lo, hi) = if block == 0 { (0, 2) } else { (2, 4) };
            let eval = |v: &[T; 4]| if which == 0 { q(v, y) } else { q(y, v) };

            let mut scaled = *x;
            for c in &mut scaled[lo..hi] {
                *c = three * *c;
            }
            ok &= scale_tol(eval(&scaled)?, three * base);

            // second block value drawn from the other argument with a twist
            let mut other = *x;
            other[lo] = y[lo + 1] - x[lo];
            other[lo + 1] = x[lo + 1] + y[lo];
            let mut sum = *x;
            for k in lo..hi {
                sum[k] = x[k] + other[k];
            }
            ok &= scale_tol(eval(&sum)?, eval(x)? + eval(&other)?);
        }
    }
    Ok(ok)
}

pub fn symmetry_findings<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    frame: &ObserverFrame<T>,
) -> Result<SymmetryFindings<T>> {
    let product = quad_product(a, b, frame)?;
    let exchanged = quad_product_exchanged(a, b, frame)?;
    let swapped = quad_product(b, a, frame)?;
    let tol = |x: T| x.close(product, PATH_TOL, product.to_f64());
    Ok(SymmetryFindings {
        product,
        exchanged,
        swapped,
        exchange_invariant: tol(exchanged),
        commutative: tol(swapped),
        hemi_linear: hemi_linear(&frame.coords(a)?, &frame.coords(b)?, frame)?,
    })
}

/// The four invariance findings of the quad product for one `(a, b, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub product: f64,
    pub boosted_product: f64,
    pub boost_invariant: bool,
    pub exchange_invariant: bool,
    pub commutative: bool,
    pub hemi_linear: bool,
}

impl InvarianceReport {
    pub fn all_hold(&self) -> bool {
        self.boost_invariant && self.exchange_invariant && self.commutative && self.hemi_linear
    }
}

pub fn check_invariances(
    a: &Multivector<f64>,
    b: &Multivector<f64>,
    frame: &ObserverFrame<f64>,
    v: BoostVelocity,
) -> Result<InvarianceReport> {
    let sym = symmetry_findings(a, b, frame)?;
    let boosted_product = quad_product(&boost(a, v, frame)?, &boost(b, v, frame)?, frame)?;
    Ok(InvarianceReport {
        product: sym.product,
        boosted_product,
        boost_invariant: boosted_product.close(sym.product, PATH_TOL, sym.product),
        exchange_invariant: sym.exchange_invariant,
        commutative: sym.commutative,
        hemi_linear: sym.hemi_linear,
    })
}
