//! Finite fields F_{p^m} given by a user-supplied monic irreducible modulus.
//!
//! Elements are stored as a packed integer code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! of their coefficient vector in the root `a` of the modulus. The field order is
//! capped at 256, so every operation is a table lookup.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: usize = 256;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NonPrime(u32),
    #[error("modulus is not monic of degree {0}")]
    NotMonic(u32),
    #[error("modulus has {found} coefficients, expected {expected}")]
    ModulusLength { expected: usize, found: usize },
    #[error("modulus coefficient {0} is not in [0, p)")]
    CoefficientOutOfRange(u32),
    #[error("modulus is reducible: divisible by {}", format_poly(.0))]
    Reducible(Vec<u32>),
    #[error("extension degree {0} out of range 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("field order {0} exceeds {MAX_ORDER}")]
    OrderTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element needs exactly {expected} coefficients, got {found}")]
    ElementLength { expected: usize, found: usize },
}

fn format_poly(c: &[u32]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v != 0)
        .map(|(d, &v)| match (d, v) {
            (0, v) => v.to_string(),
            (1, 1) => "x".into(),
            (1, v) => format!("{v}*x"),
            (d, 1) => format!("x^{d}"),
            (d, v) => format!("{v}*x^{d}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// An element of some [`FieldSpec`]; meaningless without its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Packed coefficient code in `[0, q)`.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field F_{p^m} = F_p[a]/(modulus(a)).
pub struct FieldSpec {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Shared handle to a field; polynomials and codes hold one of these.
pub type Field = Arc<FieldSpec>;

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `num` modulo the monic `den` over F_p (coefficients lowest first).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl FieldSpec {
    /// Builds F_{p^m} from a monic modulus of degree `m`, lowest coefficient first.
    ///
    /// Irreducibility is checked by trial division by every monic polynomial of
    /// degree 1..=m/2.
    pub fn new(p: u32, m: u32, modulus: &[u32]) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m < 1 || m > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::OrderTooLarge(q));
        }
        if modulus.len() != m as usize + 1 {
            return Err(FieldError::ModulusLength {
                expected: m as usize + 1,
                found: modulus.len(),
            });
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::CoefficientOutOfRange(c));
        }
        if modulus[m as usize] != 1 {
            return Err(FieldError::NotMonic(m));
        }
        for d in 1..=(m / 2) {
            let count = (p as u64).pow(d);
            for idx in 0..count {
                let mut cand = Vec::with_capacity(d as usize + 1);
                let mut v = idx;
                for _ in 0..d {
                    cand.push((v % p as u64) as u32);
                    v /= p as u64;
                }
                cand.push(1);
                if poly_rem(modulus, &cand, p).iter().all(|&c| c == 0) {
                    return Err(FieldError::Reducible(cand));
                }
            }
        }
        let q = q as usize;
        let mut spec = FieldSpec {
            p,
            m,
            modulus: modulus.to_vec(),
            q,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        spec.build_tables();
        Ok(spec)
    }

    /// Field from the built-in default modulus table, falling back to the
    /// lexicographically first monic irreducible of degree `m`.
    pub fn with_default_modulus(p: u32, m: u32) -> Result<FieldSpec, FieldError> {
        if let Some(modulus) = default_modulus(p, m) {
            return FieldSpec::new(p, m, modulus);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m < 1 || m > MAX_DEGREE {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::OrderTooLarge(q));
        }
        let mut last = Err(FieldError::NotMonic(m));
        for idx in 0..q {
            let mut modulus = Vec::with_capacity(m as usize + 1);
            let mut v = idx;
            for _ in 0..m {
                modulus.push((v % p as u64) as u32);
                v /= p as u64;
            }
            modulus.push(1);
            last = FieldSpec::new(p, m, &modulus);
            if last.is_ok() {
                break;
            }
        }
        last
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let coeffs: Vec<Vec<u32>> = (0..q).map(|c| self.unpack(c)).collect();
        for x in 0..q {
            for y in 0..q {
                let sum: Vec<u32> = coeffs[x]
                    .iter()
                    .zip(&coeffs[y])
                    .map(|(a, b)| (a + b) % self.p)
                    .collect();
                self.add[x * q + y] = self.pack(&sum) as u8;
                let prod = self.mul_reduce(&coeffs[x], &coeffs[y]);
                self.mul[x * q + y] = self.pack(&prod) as u8;
            }
            let neg: Vec<u32> = coeffs[x].iter().map(|&a| (self.p - a) % self.p).collect();
            self.neg[x] = self.pack(&neg) as u8;
        }
        for x in 1..q {
            self.inv[x] = (1..q)
                .find(|&y| self.mul[x * q + y] == 1)
                .expect("nonzero element of a field has an inverse") as u8;
        }
    }

    fn unpack(&self, mut code: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            out.push((code % self.p as usize) as u32);
            code /= self.p as usize;
        }
        out
    }

    fn pack(&self, coeffs: &[u32]) -> usize {
        coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    fn mul_reduce(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut prod = vec![0u32; x.len() + y.len() - 1];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        r
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The root `a` of the modulus. For a prime field this is the constant `-modulus[0]`.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            FieldElement(self.p as u8)
        }
    }

    /// Integer reduced mod p, embedded in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u8)
    }

    pub fn from_code(&self, code: usize) -> FieldElement {
        assert!(code < self.q, "element code {code} out of range for order {}", self.q);
        FieldElement(code as u8)
    }

    /// Element from its coefficients in `a`, lowest degree first. Values are reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.m as usize {
            return Err(FieldError::ElementLength {
                expected: self.m as usize,
                found: coeffs.len(),
            });
        }
        let reduced: Vec<u32> = coeffs.iter().map(|&c| c % self.p).collect();
        Ok(FieldElement(self.pack(&reduced) as u8))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.unpack(x.code())
    }

    /// Every element, in code order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|c| FieldElement(c as u8))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add[x.code() * self.q + y.code()])
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.neg[x.code()])
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.mul[x.code() * self.q + y.code()])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElement(self.inv[x.code()]))
        }
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Display as an integer-coefficient polynomial in `a`, highest power first, e.g. `a+1`.
    pub fn format(&self, x: FieldElement) -> String {
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(d, &v)| match (d, v) {
                (0, v) => v.to_string(),
                (1, 1) => "a".into(),
                (1, v) => format!("{v}*a"),
                (d, 1) => format!("a^{d}"),
                (d, v) => format!("{v}*a^{d}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// True when [`format`](Self::format) yields more than one term and needs
    /// parentheses as a factor.
    pub fn is_compound(&self, x: FieldElement) -> bool {
        self.coeffs(x).iter().filter(|&&c| c != 0).count() > 1
    }
}

/// Built-in default moduli for the common small fields.
pub fn default_modulus(p: u32, m: u32) -> Option<&'static [u32]> {
    match (p, m) {
        (2, 1) | (3, 1) | (5, 1) => Some(&[0, 1]),
        (2, 2) => Some(&[1, 1, 1]),
        (5, 2) => Some(&[2, 1, 1]),
        (2, 3) => Some(&[1, 1, 0, 1]),
        (3, 2) => Some(&[1, 0, 1]),
        _ => None,
    }
}
