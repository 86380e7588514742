//! Dense Clifford algebra kernel for `Cl(p, q)` with `p + q ≤ 6`.
//!
//! A multivector stores all `2^(p+q)` coefficients indexed by blade bitmask:
//! bit `i` set means generator `γ_i` is present. Generators are ordered with
//! the `p` positive squares first, so in `Cl(1,3)` index 0 is the timelike
//! `γ₀`. Blade products take their sign from the number of transpositions
//! needed to sort the concatenated generator list, times the metric sign of
//! each generator that cancels.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordSignature {
    p: usize,
    q: usize,
}

impl CliffordSignature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidSignature(format!(
                "Cl({p},{q}) needs 1 <= p+q <= {MAX_DIM}"
            )));
        }
        Ok(Self { p, q })
    }

    /// `Cl(1,3)`, the spacetime algebra.
    pub fn spacetime() -> Self {
        Self { p: 1, q: 3 }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of generators.
    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    /// Mask of the top-grade blade.
    pub fn pseudoscalar_mask(&self) -> usize {
        self.blade_count() - 1
    }

    fn negative_mask(&self) -> usize {
        ((1 << self.q) - 1) << self.p
    }

    /// Sign and result mask of the blade product `e_a e_b`.
    pub fn blade_product(&self, a: usize, b: usize) -> (bool, usize) {
        let mut swaps = 0u32;
        let mut rest = a >> 1;
        while rest != 0 {
            swaps += (rest & b).count_ones();
            rest >>= 1;
        }
        let metric_flips = (a & b & self.negative_mask()).count_ones();
        ((swaps + metric_flips) % 2 == 1, a ^ b)
    }
}

impl fmt::Display for CliffordSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},{})", self.p, self.q)
    }
}

pub fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<T = f64> {
    coeffs: Vec<T>,
    sig: CliffordSignature,
}

impl<T: Scalar> Multivector<T> {
    pub fn zero(sig: CliffordSignature) -> Self {
        Self {
            coeffs: vec![T::ZERO; sig.blade_count()],
            sig,
        }
    }

    pub fn from_coeffs(sig: CliffordSignature, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != sig.blade_count() {
            return Err(Error::InvalidSignature(format!(
                "{sig} needs {} coefficients, got {}",
                sig.blade_count(),
                coeffs.len()
            )));
        }
        Ok(Self { coeffs, sig })
    }

    pub fn scalar(sig: CliffordSignature, value: T) -> Self {
        Self::blade(sig, 0, value)
    }

    pub fn blade(sig: CliffordSignature, mask: usize, value: T) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[mask] = value;
        mv
    }

    /// The generator `γ_i`.
    pub fn basis_vector(sig: CliffordSignature, i: usize) -> Self {
        Self::blade(sig, 1 << i, T::ONE)
    }

    /// The grade-1 element `Σ c_i γ_i`.
    pub fn vector(sig: CliffordSignature, coords: &[T]) -> Result<Self> {
        if coords.len() != sig.dim() {
            return Err(Error::InvalidSignature(format!(
                "{sig} vectors have {} components, got {}",
                sig.dim(),
                coords.len()
            )));
        }
        let mut mv = Self::zero(sig);
        for (i, &c) in coords.iter().enumerate() {
            mv.coeffs[1 << i] = c;
        }
        Ok(mv)
    }

    /// The unit pseudoscalar `γ₀γ₁…γ_{n−1}`.
    pub fn pseudoscalar(sig: CliffordSignature) -> Self {
        Self::blade(sig, sig.pseudoscalar_mask(), T::ONE)
    }

    pub fn signature(&self) -> CliffordSignature {
        self.sig
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> T {
        self.coeffs[mask]
    }

    pub fn scalar_part(&self) -> T {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == T::ZERO)
    }

    /// True when every blade outside grade `k` has an exactly zero coefficient.
    pub fn is_grade(&self, k: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(mask, &c)| grade_of(mask) == k || c == T::ZERO)
    }

    /// Coordinates of a pure grade-1 element.
    pub fn vector_coords(&self) -> Result<Vec<T>> {
        if !self.is_grade(1) {
            return Err(Error::NotGrade1);
        }
        Ok((0..self.sig.dim()).map(|i| self.coeffs[1 << i]).collect())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.sig.to_string(),
                right: other.sig.to_string(),
            })
        }
    }

    fn product_by(&self, other: &Self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut out = Self::zero(self.sig);
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == T::ZERO {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                if y == T::ZERO || !keep(a, b) {
                    continue;
                }
                let (neg, mask) = self.sig.blade_product(a, b);
                let term = x * y;
                out.coeffs[mask] += if neg { -term } else { term };
            }
        }
        out
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.product_by(other, |_, _| true))
    }

    /// Outer product: the grade-`(r+s)` part of each blade product, which is
    /// nonzero only for blades sharing no generator.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.product_by(other, |a, b| a & b == 0))
    }

    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.sig.dim() {
            return Err(Error::GradeOutOfRange {
                grade: k,
                max: self.sig.dim(),
            });
        }
        let mut out = Self::zero(self.sig);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if grade_of(mask) == k {
                out.coeffs[mask] = c;
            }
        }
        Ok(out)
    }

    /// Reversion: a grade-`k` blade picks up `(−1)^{k(k−1)/2}`.
    pub fn reverse(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                let k = grade_of(mask);
                if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Self {
            coeffs,
            sig: self.sig,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
            sig: self.sig,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::ONE))
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| k * c).collect(),
            sig: self.sig,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::ONE)
    }

    pub fn close_to(&self, other: &Self, rel: f64) -> bool {
        let scale = self
            .coeffs
            .iter()
            .chain(&other.coeffs)
            .fold(0.0f64, |m, c| m.max(c.to_f64().abs()));
        self.sig == other.sig
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(&a, &b)| a.close(b, rel, scale))
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0f64, |m, (&a, &b)| m.max((a - b).to_f64().abs()))
    }
}

/// Inner product of two grade-1 elements: the scalar part of `ab`, which is
/// also the scalar part of the symmetric product `(ab + ba)/2` since the
/// wedge `a∧b` has none.
pub fn vector_inner<T: Scalar>(a: &Multivector<T>, b: &Multivector<T>) -> Result<T> {
    if !a.is_grade(1) || !b.is_grade(1) {
        return Err(Error::NotGrade1);
    }
    Ok(a.geometric_product(b)?.scalar_part())
}

impl Multivector<i64> {
    pub fn to_f64(&self) -> Multivector<f64> {
        Multivector {
            coeffs: self.coeffs.iter().map(|&c| c as f64).collect(),
            sig: self.sig,
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c == T::ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if mask != 0 {
                write!(f, "*g")?;
                for i in 0..self.sig.dim() {
                    if mask & (1 << i) != 0 {
                        write!(f, "{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
