//! Elements of R[x]/(x^n - 1) with R = F_q[u]/(u^4), stored u-adically as
//! `a0 + u*a1 + u^2*a2 + u^3*a3` with each `ai` in the s-basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::galois::{Field, FieldElement};
use crate::sring::{PolyError, SPoly};

/// Number of u-adic parts (u^4 = 0).
pub const U_LEVELS: usize = 4;

#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    parts: [SPoly; U_LEVELS],
}

impl RingElement {
    pub fn zero(field: &Field, n: usize) -> RingElement {
        let z = SPoly::zero(field, n);
        RingElement {
            parts: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn one(field: &Field, n: usize) -> RingElement {
        RingElement::from_part(0, SPoly::one(field, n))
    }

    /// `u^level * poly`.
    pub fn from_part(level: usize, poly: SPoly) -> RingElement {
        assert!(level < U_LEVELS, "u-level {level} out of range");
        let mut out = RingElement::zero(poly.field(), poly.len());
        out.parts[level] = poly;
        out
    }

    /// `c * u^b * s^a`.
    pub fn monomial(field: &Field, n: usize, b: usize, a: usize, c: FieldElement) -> RingElement {
        if b >= U_LEVELS {
            return RingElement::zero(field, n);
        }
        RingElement::from_part(b, SPoly::monomial(field, n, a, c))
    }

    pub fn from_parts(parts: [SPoly; U_LEVELS]) -> Result<RingElement, PolyError> {
        for p in &parts[1..] {
            parts[0].checked_add(p)?;
        }
        Ok(RingElement { parts })
    }

    pub fn parts(&self) -> &[SPoly; U_LEVELS] {
        &self.parts
    }

    pub fn part(&self, level: usize) -> &SPoly {
        &self.parts[level]
    }

    pub fn field(&self) -> &Field {
        self.parts[0].field()
    }

    pub fn len(&self) -> usize {
        self.parts[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(SPoly::is_zero)
    }

    /// Smallest `j` with a nonzero `u^j` part, 4 for zero.
    pub fn u_valuation(&self) -> usize {
        self.parts.iter().position(|p| !p.is_zero()).unwrap_or(U_LEVELS)
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement, PolyError> {
        let mut parts = self.parts.clone();
        for (p, o) in parts.iter_mut().zip(&other.parts) {
            *p = p.checked_add(o)?;
        }
        Ok(RingElement { parts })
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement, PolyError> {
        let mut parts = self.parts.clone();
        for (p, o) in parts.iter_mut().zip(&other.parts) {
            *p = p.checked_sub(o)?;
        }
        Ok(RingElement { parts })
    }

    /// u-adic convolution truncated at u^3.
    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement, PolyError> {
        let mut out = RingElement::zero(self.field(), self.len());
        self.parts[0].checked_mul(&other.parts[0])?;
        for i in 0..U_LEVELS {
            if self.parts[i].is_zero() {
                continue;
            }
            for j in 0..U_LEVELS - i {
                if other.parts[j].is_zero() {
                    continue;
                }
                let prod = self.parts[i].checked_mul(&other.parts[j])?;
                out.parts[i + j] = &out.parts[i + j] + &prod;
            }
        }
        Ok(out)
    }

    /// `self * u^b * s^a`.
    pub fn shift_mul(&self, a: usize, b: usize) -> RingElement {
        let mut out = RingElement::zero(self.field(), self.len());
        for j in 0..U_LEVELS.saturating_sub(b) {
            out.parts[j + b] = self.parts[j].shift(a);
        }
        out
    }

    /// Multiplication by a polynomial over the residue field.
    pub fn scale(&self, poly: &SPoly) -> RingElement {
        RingElement {
            parts: self.parts.clone().map(|p| &p * poly),
        }
    }

    /// Flattening `(a0 || a1 || a2 || a3)` of the s-coefficients, length 4n.
    pub fn flatten(&self) -> Vec<FieldElement> {
        self.parts.iter().flat_map(|p| p.coeffs().iter().copied()).collect()
    }

    pub fn from_flat(field: &Field, n: usize, flat: &[FieldElement]) -> RingElement {
        assert_eq!(flat.len(), U_LEVELS * n, "flattened length");
        let part = |j: usize| SPoly::from_coeffs(field, n, &flat[j * n..(j + 1) * n]).expect("exact length");
        RingElement {
            parts: [part(0), part(1), part(2), part(3)],
        }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.checked_add(rhs).expect("RingElement add")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.checked_sub(rhs).expect("RingElement sub")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.checked_mul(rhs).expect("RingElement mul")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            parts: self.parts.clone().map(|p| -&p),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, p) in self.parts.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{p}")?,
                1 => write!(f, "u*({p})")?,
                _ => write!(f, "u^{j}*({p})")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}
