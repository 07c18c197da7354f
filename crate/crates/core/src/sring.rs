//! The truncated ring F_q[x]/(x^n - 1) for n = p^k, stored in the basis of
//! powers of s = x - 1.
//!
//! In characteristic p we have x^n - 1 = (x - 1)^n, so the ring is F_q[s]/(s^n):
//! multiplication is convolution truncated at degree n - 1, and an element is a
//! unit exactly when its constant s-coefficient is nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::galois::{Field, FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live in different fields")]
    MixedField,
    #[error("operands have different lengths ({0} vs {1})")]
    MixedLength(usize, usize),
    #[error("expected a coefficient vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Element of F_q[s]/(s^n), coefficients `c_0..c_{n-1}` of `sum c_i s^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct SPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

/// `f = s^valuation * unit_part`; `valuation == n` encodes `f == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub valuation: usize,
    pub unit_part: SPoly,
}

impl SPoly {
    pub fn zero(field: &Field, n: usize) -> SPoly {
        assert!(n >= 1, "length must be positive");
        SPoly {
            field: field.clone(),
            coeffs: vec![FieldElement::ZERO; n],
        }
    }

    pub fn one(field: &Field, n: usize) -> SPoly {
        SPoly::monomial(field, n, 0, field.one())
    }

    /// `c * s^e`, which is zero once `e >= n`.
    pub fn monomial(field: &Field, n: usize, e: usize, c: FieldElement) -> SPoly {
        let mut out = SPoly::zero(field, n);
        if e < n {
            out.coeffs[e] = c;
        }
        out
    }

    pub fn s_pow(field: &Field, n: usize, e: usize) -> SPoly {
        SPoly::monomial(field, n, e, field.one())
    }

    /// From s-basis coefficients; shorter inputs are zero-padded, longer ones rejected.
    pub fn from_coeffs(field: &Field, n: usize, coeffs: &[FieldElement]) -> Result<SPoly, PolyError> {
        if coeffs.len() > n {
            return Err(PolyError::LengthMismatch {
                expected: n,
                found: coeffs.len(),
            });
        }
        let mut out = SPoly::zero(field, n);
        out.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(out)
    }

    /// From small integers (reduced mod p) in the prime subfield.
    pub fn from_ints(field: &Field, n: usize, ints: &[i64]) -> SPoly {
        let c: Vec<FieldElement> = ints.iter().map(|&v| field.from_int(v)).collect();
        SPoly::from_coeffs(field, n, &c).expect("integer list longer than n")
    }

    /// From x-basis coefficients `d_i` of `sum d_i x^i`.
    pub fn from_x_coeffs(field: &Field, coeffs: &[FieldElement]) -> SPoly {
        SPoly {
            field: field.clone(),
            coeffs: x_to_s(field, coeffs),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false; the ring has positive length.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Index of the first nonzero coefficient, `n` for zero.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Coefficients in the x-basis.
    pub fn to_x_coeffs(&self) -> Vec<FieldElement> {
        s_to_x(&self.field, &self.coeffs)
    }

    fn check(&self, other: &SPoly) -> Result<(), PolyError> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(PolyError::MixedLength(self.coeffs.len(), other.coeffs.len()));
        }
        if !same_field(&self.field, &other.field) {
            return Err(PolyError::MixedField);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &SPoly) -> Result<SPoly, PolyError> {
        self.check(other)?;
        let f = &self.field;
        Ok(self.map2(other, |a, b| f.add(a, b)))
    }

    pub fn checked_sub(&self, other: &SPoly) -> Result<SPoly, PolyError> {
        self.check(other)?;
        let f = &self.field;
        Ok(self.map2(other, |a, b| f.sub(a, b)))
    }

    pub fn checked_mul(&self, other: &SPoly) -> Result<SPoly, PolyError> {
        self.check(other)?;
        let f = &self.field;
        let n = self.coeffs.len();
        let mut out = vec![FieldElement::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Ok(SPoly {
            field: self.field.clone(),
            coeffs: out,
        })
    }

    fn map2(&self, other: &SPoly, op: impl Fn(FieldElement, FieldElement) -> FieldElement) -> SPoly {
        SPoly {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: FieldElement) -> SPoly {
        SPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect(),
        }
    }

    /// Multiplication by `s^a`; everything shifted past degree n - 1 vanishes.
    pub fn shift(&self, a: usize) -> SPoly {
        let n = self.coeffs.len();
        let mut out = SPoly::zero(&self.field, n);
        if a < n {
            out.coeffs[a..].copy_from_slice(&self.coeffs[..n - a]);
        }
        out
    }

    /// Division by `s^a`, dropping the low coefficients.
    pub fn shift_down(&self, a: usize) -> SPoly {
        let n = self.coeffs.len();
        let mut out = SPoly::zero(&self.field, n);
        if a < n {
            out.coeffs[..n - a].copy_from_slice(&self.coeffs[a..]);
        }
        out
    }

    /// Keeps only the coefficients of degree `< len`.
    pub fn truncate(&self, len: usize) -> SPoly {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut().skip(len) {
            *c = FieldElement::ZERO;
        }
        out
    }

    pub fn decompose(&self) -> Decomposition {
        let valuation = self.valuation();
        Decomposition {
            valuation,
            unit_part: self.shift_down(valuation),
        }
    }

    /// Inverse of a unit by power-series division; `None` if the constant term is zero.
    pub fn inverse(&self) -> Option<SPoly> {
        let f = &self.field;
        let c0_inv = f.inv(self.coeffs[0]).ok()?;
        let n = self.coeffs.len();
        let mut g = vec![FieldElement::ZERO; n];
        g[0] = c0_inv;
        for k in 1..n {
            let mut acc = FieldElement::ZERO;
            for i in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[i], g[k - i]));
            }
            g[k] = f.neg(f.mul(c0_inv, acc));
        }
        Some(SPoly {
            field: self.field.clone(),
            coeffs: g,
        })
    }

    pub fn pow(&self, mut e: u64) -> SPoly {
        let mut base = self.clone();
        let mut acc = SPoly::one(&self.field, self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    std::sync::Arc::ptr_eq(a, b) || **a == **b
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        self.checked_add(rhs).expect("SPoly add")
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        self.checked_sub(rhs).expect("SPoly sub")
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, rhs: &SPoly) -> SPoly {
        self.checked_mul(rhs).expect("SPoly mul")
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| self.field.neg(a)).collect(),
        }
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.write_str(" + ")?;
            }
            first = false;
            let coef = if f.is_compound(c) {
                format!("({})", f.format(c))
            } else {
                f.format(c)
            };
            match i {
                0 => out.write_str(&coef)?,
                _ => {
                    if c != f.one() {
                        write!(out, "{coef}*")?;
                    }
                    if i == 1 {
                        out.write_str("s")?;
                    } else {
                        write!(out, "s^{i}")?;
                    }
                }
            }
        }
        if first {
            out.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SPoly[{}]({})", self.coeffs.len(), self)
    }
}

/// `binom(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut a: usize, mut b: usize, p: u32) -> u32 {
    let p = p as usize;
    let mut acc = 1usize;
    while b > 0 || a > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    acc as u32
}

fn small_binom(a: usize, b: usize, p: usize) -> usize {
    // a < p, so the factorials are invertible mod p
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..b {
        num = num * (a - i) % p;
        den = den * (i + 1) % p;
    }
    num * mod_inv(den, p) % p
}

fn mod_inv(x: usize, p: usize) -> usize {
    let mut acc = 1usize;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// x-basis to s-basis: `c_j = sum_i binom(i, j) d_i` (substitute x = s + 1).
pub fn x_to_s(field: &FieldSpec, d: &[FieldElement]) -> Vec<FieldElement> {
    let n = d.len();
    let p = field.characteristic();
    let mut c = vec![FieldElement::ZERO; n];
    for (i, &di) in d.iter().enumerate() {
        if di.is_zero() {
            continue;
        }
        for (j, cj) in c.iter_mut().enumerate().take(i + 1) {
            let b = binom_mod_p(i, j, p);
            if b != 0 {
                *cj = field.add(*cj, field.mul(field.from_int(b as i64), di));
            }
        }
    }
    c
}

/// s-basis to x-basis: `d_i = sum_j binom(j, i) (-1)^(j-i) c_j` (substitute s = x - 1).
pub fn s_to_x(field: &FieldSpec, c: &[FieldElement]) -> Vec<FieldElement> {
    let n = c.len();
    let p = field.characteristic();
    let mut d = vec![FieldElement::ZERO; n];
    for (j, &cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        for (i, di) in d.iter_mut().enumerate().take(j + 1) {
            let b = binom_mod_p(j, i, p) as i64;
            if b != 0 {
                let signed = if (j - i) % 2 == 0 { b } else { -b };
                *di = field.add(*di, field.mul(field.from_int(signed), cj));
            }
        }
    }
    d
}

/// Direction of [`basis_transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisDirection {
    XToS,
    SToX,
}

/// Converts a length-`n` coefficient vector between the x- and s-bases.
pub fn basis_transform(
    field: &FieldSpec,
    n: usize,
    v: &[FieldElement],
    direction: BasisDirection,
) -> Result<Vec<FieldElement>, PolyError> {
    if v.len() != n {
        return Err(PolyError::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(match direction {
        BasisDirection::XToS => x_to_s(field, v),
        BasisDirection::SToX => s_to_x(field, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;
    use std::sync::Arc;

    fn field(p: u32, m: u32) -> Field {
        Arc::new(FieldSpec::with_default_modulus(p, m).unwrap())
    }

    #[test]
    fn truncated_products() {
        let f2 = field(2, 1);
        let s2 = SPoly::s_pow(&f2, 4, 2);
        let s3 = SPoly::s_pow(&f2, 4, 3);
        assert!((&s2 * &s3).is_zero());
        let one_s = SPoly::from_ints(&f2, 4, &[1, 1]);
        assert_eq!(&one_s * &one_s, SPoly::from_ints(&f2, 4, &[1, 0, 1]));
    }

    #[test]
    fn shift_truncates() {
        let f3 = field(3, 1);
        let g = SPoly::from_ints(&f3, 9, &[0, 2, 1]);
        assert_eq!(g.shift(7), SPoly::monomial(&f3, 9, 8, f3.from_int(2)));
        assert!(g.shift(9).is_zero());
        assert!(g.shift(100).is_zero());
        assert_eq!(g.shift(2).shift(3), g.shift(5));
    }

    #[test]
    fn mixed_operands_are_rejected() {
        let f2 = field(2, 1);
        let f3 = field(3, 1);
        let a = SPoly::one(&f2, 4);
        let b = SPoly::one(&f2, 8);
        let c = SPoly::one(&f3, 4);
        assert_eq!(a.checked_add(&b), Err(PolyError::MixedLength(4, 8)));
        assert_eq!(a.checked_mul(&c), Err(PolyError::MixedField));
    }

    #[test]
    fn basis_examples() {
        let f2 = field(2, 1);
        let ints = |v: &[i64]| v.iter().map(|&x| f2.from_int(x)).collect::<Vec<_>>();
        assert_eq!(x_to_s(&f2, &ints(&[1, 1, 0, 0])), ints(&[0, 1, 0, 0]));
        assert_eq!(x_to_s(&f2, &ints(&[0, 0, 1, 0])), ints(&[1, 0, 1, 0]));
        let f3 = field(3, 1);
        let mut x = vec![f3.zero(); 9];
        x[1] = f3.one();
        let mut expect = vec![f3.zero(); 9];
        expect[0] = f3.one();
        expect[1] = f3.one();
        assert_eq!(x_to_s(&f3, &x), expect);
        // x^n = 1 in the quotient: its s-image is the constant 1
        let mut one = vec![f3.zero(); 9];
        one[0] = f3.one();
        assert_eq!(x_to_s(&f3, &one), one);
        assert_eq!(
            basis_transform(&f3, 9, &one[..3], BasisDirection::SToX),
            Err(PolyError::LengthMismatch { expected: 9, found: 3 })
        );
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u32, 3, 5, 7] {
            let mut row = vec![1u64];
            for a in 0..60usize {
                for (b, &v) in row.iter().enumerate() {
                    assert_eq!(binom_mod_p(a, b, p) as u64, v % p as u64, "C({a},{b}) mod {p}");
                }
                let mut next = vec![1u64; row.len() + 1];
                for b in 1..row.len() {
                    next[b] = (row[b - 1] + row[b]) % (p as u64 * 1_000_000);
                }
                row = next;
            }
            assert_eq!(binom_mod_p(3, 5, p), 0);
        }
    }

    #[test]
    fn decompositions() {
        let f2 = field(2, 1);
        let f = SPoly::from_ints(&f2, 4, &[0, 0, 1, 1]);
        let d = f.decompose();
        assert_eq!(d.valuation, 2);
        assert_eq!(d.unit_part, SPoly::from_ints(&f2, 4, &[1, 1]));
        let z = SPoly::zero(&f2, 4).decompose();
        assert_eq!(z.valuation, 4);
        assert!(z.unit_part.is_zero());
        let f3 = field(3, 1);
        let g = SPoly::from_ints(&f3, 9, &[0, 2, 1]).decompose();
        assert_eq!(g.valuation, 1);
        assert_eq!(g.unit_part, SPoly::from_ints(&f3, 9, &[2, 1]));
        assert!(g.unit_part.is_unit());
    }

    #[test]
    fn inverse_of_units() {
        let f4 = field(2, 2);
        let a = f4.generator();
        let h = SPoly::from_coeffs(&f4, 8, &[a, f4.one(), FieldElement::ZERO, a]).unwrap();
        let inv = h.inverse().unwrap();
        assert_eq!(&h * &inv, SPoly::one(&f4, 8));
        assert!(SPoly::s_pow(&f4, 8, 1).inverse().is_none());
    }

    #[test]
    fn display_format() {
        let f4 = field(2, 2);
        let a = f4.generator();
        let a1 = f4.add(a, f4.one());
        let h = SPoly::from_coeffs(&f4, 8, &[f4.one(), a, FieldElement::ZERO, a1]).unwrap();
        assert_eq!(h.to_string(), "1 + a*s + (a+1)*s^3");
        assert_eq!(SPoly::zero(&f4, 8).to_string(), "0");
    }
}
