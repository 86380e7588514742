//! The spin factor Jordan algebra on `R ⊕ R^{m,n}`.
//!
//! Elements are `α + a` with a scalar part `α` and a vector part `a` carrying
//! the signature form `⟪a, b⟫ = Σ_{i<m} a_i b_i − Σ_{i≥m} a_i b_i`. The bullet
//! product is
//!
//! ```text
//! (α + a) • (β + b) = (αβ + ⟪a, b⟫) + (βa + αb)
//! ```
//!
//! which is commutative and unital but not associative. Units `x` with
//! `Q(x) = α² − ⟪a, a⟫ ≠ 0` have the unique inverse `x* / Q(x)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative null-cone guard: `|Q(x)| ≤ NULL_CONE_REL · (1 + ‖x‖²)` rejects.
pub const NULL_CONE_REL: f64 = 1e-12;

/// Signature `(m, n)` of the vector part: `m` directions squaring to `+1`
/// followed by `n` directions squaring to `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    m: usize,
    n: usize,
}

impl Signature {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m + n == 0 {
            return Err(Error::InvalidSignature(
                "spin factor needs at least one vector direction".into(),
            ));
        }
        Ok(Self { m, n })
    }

    /// The physical-space signature `(3, 0)`.
    pub fn euclidean3() -> Self {
        Self { m: 3, n: 0 }
    }

    pub fn positive(&self) -> usize {
        self.m
    }

    pub fn negative(&self) -> usize {
        self.n
    }

    /// Number of vector components, `m + n`.
    pub fn vector_dim(&self) -> usize {
        self.m + self.n
    }

    /// Dimension of the algebra, `1 + m + n`.
    pub fn algebra_dim(&self) -> usize {
        1 + self.m + self.n
    }

    /// Diagonal entry of the signature form for vector direction `i`.
    pub fn metric<T: Scalar>(&self, i: usize) -> T {
        if i < self.m {
            T::ONE
        } else {
            -T::ONE
        }
    }

    /// `⟪a, b⟫_sig`.
    pub fn form<T: Scalar>(&self, a: &[T], b: &[T]) -> T {
        let mut acc = T::ZERO;
        for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
            let p = x * y;
            if i < self.m {
                acc += p;
            } else {
                acc = acc - p;
            }
        }
        acc
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinFactorElement<T = f64> {
    scalar: T,
    vector: Vec<T>,
    signature: Signature,
}

impl<T: Scalar> SpinFactorElement<T> {
    pub fn new(signature: Signature, scalar: T, vector: Vec<T>) -> Result<Self> {
        if vector.len() != signature.vector_dim() {
            return Err(Error::InvalidSignature(format!(
                "vector part has {} components, signature {} needs {}",
                vector.len(),
                signature,
                signature.vector_dim()
            )));
        }
        Ok(Self {
            scalar,
            vector,
            signature,
        })
    }

    /// Builds an element from algebra coordinates `[α, a_1, …, a_{m+n}]`.
    pub fn from_coords(signature: Signature, coords: &[T]) -> Result<Self> {
        match coords.split_first() {
            Some((&s, rest)) => Self::new(signature, s, rest.to_vec()),
            None => Err(Error::InvalidSignature("empty coordinate list".into())),
        }
    }

    pub fn identity(signature: Signature) -> Self {
        Self::scalar_element(signature, T::ONE)
    }

    pub fn zero(signature: Signature) -> Self {
        Self::scalar_element(signature, T::ZERO)
    }

    pub fn scalar_element(signature: Signature, scalar: T) -> Self {
        Self {
            scalar,
            vector: vec![T::ZERO; signature.vector_dim()],
            signature,
        }
    }

    /// The basis vector `e_{i+1}` (zero-based `i`).
    pub fn basis_vector(signature: Signature, i: usize) -> Self {
        let mut x = Self::zero(signature);
        x.vector[i] = T::ONE;
        x
    }

    pub fn scalar(&self) -> T {
        self.scalar
    }

    pub fn vector(&self) -> &[T] {
        &self.vector
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn coords(&self) -> Vec<T> {
        std::iter::once(self.scalar)
            .chain(self.vector.iter().copied())
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.signature.to_string(),
                right: other.signature.to_string(),
            })
        }
    }

    /// `x • y`.
    pub fn bullet(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let scalar = self.scalar * other.scalar + self.signature.form(&self.vector, &other.vector);
        let vector = self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(&a, &b)| other.scalar * a + self.scalar * b)
            .collect();
        Ok(Self {
            scalar,
            vector,
            signature: self.signature,
        })
    }

    /// `(α + a)* = α − a`.
    pub fn conjugate(&self) -> Self {
        Self {
            scalar: self.scalar,
            vector: self.vector.iter().map(|&a| -a).collect(),
            signature: self.signature,
        }
    }

    /// `Q(x) = α² − ⟪a, a⟫`, the scalar part of `x • x*`.
    pub fn quadratic_form(&self) -> T {
        self.scalar * self.scalar - self.signature.form(&self.vector, &self.vector)
    }

    /// `⟨x, y⟩ = αβ − ⟪a, b⟫`, the polarization of `Q`.
    pub fn minkowski_inner(&self, other: &Self) -> Result<T> {
        self.check(other)?;
        Ok(self.scalar * other.scalar - self.signature.form(&self.vector, &other.vector))
    }

    /// `x ∘ y = x • y*`. Right-unital only.
    pub fn circ(&self, other: &Self) -> Result<Self> {
        self.bullet(&other.conjugate())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            scalar: self.scalar + other.scalar,
            vector: self
                .vector
                .iter()
                .zip(&other.vector)
                .map(|(&a, &b)| a + b)
                .collect(),
            signature: self.signature,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::ONE))
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            scalar: k * self.scalar,
            vector: self.vector.iter().map(|&a| k * a).collect(),
            signature: self.signature,
        }
    }

    /// Coefficient-wise comparison with [`Scalar::close`].
    pub fn close_to(&self, other: &Self, rel: f64) -> bool {
        let scale = self
            .coords()
            .iter()
            .chain(other.coords().iter())
            .fold(0.0f64, |m, c| m.max(c.to_f64().abs()));
        self.signature == other.signature
            && self
                .coords()
                .iter()
                .zip(other.coords())
                .all(|(&a, b)| a.close(b, rel, scale))
    }
}

impl SpinFactorElement<f64> {
    pub fn euclidean_norm_sq(&self) -> f64 {
        self.scalar * self.scalar + self.vector.iter().map(|a| a * a).sum::<f64>()
    }

    /// True when `|Q(x)|` clears the scale-aware null-cone guard.
    pub fn is_unit(&self) -> bool {
        self.quadratic_form().abs() > NULL_CONE_REL * (1.0 + self.euclidean_norm_sq())
    }

    /// The unique inverse `x* / Q(x)`.
    pub fn inverse(&self) -> Result<Self> {
        let q = self.quadratic_form();
        if !self.is_unit() {
            return Err(Error::NullElement { quadratic_form: q });
        }
        Ok(self.conjugate().scale(1.0 / q))
    }
}

impl SpinFactorElement<i64> {
    pub fn to_f64(&self) -> SpinFactorElement<f64> {
        SpinFactorElement {
            scalar: self.scalar as f64,
            vector: self.vector.iter().map(|&a| a as f64).collect(),
            signature: self.signature,
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for SpinFactorElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for (i, a) in self.vector.iter().enumerate() {
            write!(f, " + {}e{}", a, i + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig3() -> Signature {
        Signature::euclidean3()
    }

    fn el(c: &[f64]) -> SpinFactorElement {
        SpinFactorElement::from_coords(sig3(), c).unwrap()
    }

    fn eli(c: &[i64]) -> SpinFactorElement<i64> {
        SpinFactorElement::from_coords(sig3(), c).unwrap()
    }

    #[test]
    fn identity_is_neutral_for_bullet() {
        let one = SpinFactorElement::<i64>::identity(sig3());
        let y = eli(&[7, -2, 5, 3]);
        assert_eq!(one.bullet(&y).unwrap(), y);
        assert_eq!(y.bullet(&one).unwrap(), y);
    }

    #[test]
    fn bullet_expansion() {
        let x = eli(&[2, 1, 0, 0]);
        let y = eli(&[3, 0, 1, 0]);
        assert_eq!(x.bullet(&y).unwrap(), eli(&[6, 3, 2, 0]));
        let e1 = eli(&[0, 1, 0, 0]);
        assert_eq!(e1.bullet(&e1).unwrap(), eli(&[1, 0, 0, 0]));
    }

    #[test]
    fn negative_directions_square_to_minus_one() {
        let sig = Signature::new(1, 2).unwrap();
        let e3 = SpinFactorElement::<i64>::basis_vector(sig, 2);
        assert_eq!(e3.bullet(&e3).unwrap().scalar(), -1);
        assert_eq!(e3.quadratic_form(), 1);
    }

    #[test]
    fn conjugation() {
        let one = SpinFactorElement::<i64>::identity(sig3());
        assert_eq!(one.conjugate(), one);
        let x = eli(&[4, 1, -2, 3]);
        assert_eq!(x.conjugate(), eli(&[4, -1, 2, -3]));
        assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn quadratic_form_values() {
        assert_eq!(
            SpinFactorElement::<i64>::identity(sig3()).quadratic_form(),
            1
        );
        assert_eq!(eli(&[2, 1, 0, 0]).quadratic_form(), 3);
        assert_eq!(eli(&[1, 1, 0, 0]).quadratic_form(), 0);
        let x = eli(&[3, -1, 4, 2]);
        assert_eq!(
            x.quadratic_form(),
            x.bullet(&x.conjugate()).unwrap().scalar()
        );
    }

    #[test]
    fn inverse_values() {
        let two = SpinFactorElement::scalar_element(sig3(), 2.0);
        assert_eq!(two.inverse().unwrap().scalar(), 0.5);

        let x = el(&[2.0, 1.0, 0.0, 0.0]);
        let inv = x.inverse().unwrap();
        assert!(inv.close_to(&el(&[2.0 / 3.0, -1.0 / 3.0, 0.0, 0.0]), 1e-15));
        let one = SpinFactorElement::identity(sig3());
        assert!(x.bullet(&inv).unwrap().close_to(&one, 1e-15));

        let null = el(&[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(null.inverse(), Err(Error::NullElement { .. })));
    }

    #[test]
    fn null_cone_guard_scales_with_magnitude() {
        // Q is exactly zero on a large null vector; a tiny absolute offset
        // must still be rejected at large scale.
        let big = el(&[1e6, 1e6, 0.0, 1e-7]);
        assert!(big.inverse().is_err());
        assert!(el(&[1e6, 0.0, 0.0, 0.0]).inverse().is_ok());
    }

    #[test]
    fn minkowski_inner_values() {
        let one = SpinFactorElement::<i64>::identity(sig3());
        assert_eq!(one.minkowski_inner(&one).unwrap(), 1);
        let e1 = eli(&[0, 1, 0, 0]);
        assert_eq!(e1.minkowski_inner(&e1).unwrap(), -1);
        assert_eq!(
            eli(&[2, 1, 0, 0])
                .minkowski_inner(&eli(&[3, 0, 1, 0]))
                .unwrap(),
            6
        );
    }

    #[test]
    fn minkowski_inner_is_symmetrized_circ() {
        let x = eli(&[2, -3, 1, 5]);
        let y = eli(&[-1, 4, 2, 2]);
        let s = x.circ(&y).unwrap().add(&y.circ(&x).unwrap()).unwrap();
        // (x∘y + y∘x) = 2⟨x,y⟩ with zero vector part
        assert_eq!(s.scalar(), 2 * x.minkowski_inner(&y).unwrap());
        assert!(s.vector().iter().all(|&c| c == 0));
        assert_eq!(x.quadratic_form(), x.minkowski_inner(&x).unwrap());
    }

    #[test]
    fn circ_values_and_one_sided_identity() {
        let x = eli(&[2, 1, 0, 0]);
        let y = eli(&[3, 0, 1, 0]);
        assert_eq!(x.circ(&y).unwrap(), eli(&[6, 3, -2, 0]));

        let one = SpinFactorElement::<i64>::identity(sig3());
        let b = eli(&[5, 1, 2, -3]);
        assert_eq!(b.circ(&one).unwrap(), b);
        assert_eq!(one.circ(&b).unwrap(), eli(&[5, -1, -2, 3]));
        assert_ne!(one.circ(&b).unwrap(), b);
    }

    #[test]
    fn mismatched_signatures_are_rejected() {
        let x = SpinFactorElement::<i64>::identity(sig3());
        let y = SpinFactorElement::<i64>::identity(Signature::new(2, 1).unwrap());
        assert!(matches!(x.bullet(&y), Err(Error::SignatureMismatch { .. })));
        assert!(x.minkowski_inner(&y).is_err());
        assert!(x.circ(&y).is_err());
    }

    #[test]
    fn constructor_checks_lengths() {
        assert!(SpinFactorElement::new(sig3(), 1.0, vec![0.0; 2]).is_err());
        assert!(Signature::new(0, 0).is_err());
    }
}
