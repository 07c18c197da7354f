//! Cyclic codes over R = F_q[u]/(u^4) of length n = p^k given by a subset of the
//! four canonical generators
//!
//! ```text
//! g0 = s^r  + u s^k1 p1 + u^2 s^k2 p2 + u^3 s^k3 p3
//! g1 = u s^r1 + u^2 s^k4 p4 + u^3 s^k5 p5
//! g2 = u^2 s^r2 + u^3 s^k6 p6
//! g3 = u^3 s^r3
//! ```
//!
//! together with the F_q-linear span oracle used to cross-check every closed form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chain::{RingElement, U_LEVELS};
use crate::galois::{Field, FieldElement};
use crate::sring::SPoly;

/// Largest supported code length.
pub const MAX_LENGTH: usize = 3125;

/// Default bound on the number of enumerated codewords.
pub const DEFAULT_COUNT_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("no generator present")]
    EmptyGeneratorSet,
    #[error("degree ordering r3 <= r2 <= r1 <= r violated: deg g{hi} = {hi_deg} > deg g{lo} = {lo_deg}")]
    DegreeOrderViolated {
        lo: usize,
        lo_deg: usize,
        hi: usize,
        hi_deg: usize,
    },
    #[error("degree {degree} of g{level} is not below n = {n}")]
    DegreeOutOfRange { level: usize, degree: usize, n: usize },
    #[error("correction p{0} is not a unit (zero constant term)")]
    CorrectionNotUnit(usize),
    #[error("correction degree k{index} = {exponent} is not below its bound {bound}")]
    CorrectionDegreeTooLarge { index: usize, exponent: usize, bound: usize },
    #[error("correction p{0} given without the generator that carries it")]
    OrphanCorrection(usize),
    #[error("correction p{0} has the wrong field or length")]
    CorrectionShape(usize),
    #[error("length p^k must satisfy k >= 1 and p^k <= {MAX_LENGTH}")]
    BadLength,
    #[error("enumeration of q^{rank} codewords exceeds bound {bound}")]
    TooLarge { rank: usize, bound: u64 },
}

/// `(generator level, u-power)` of correction `p_index`, `index` in 1..=6.
pub fn correction_slot(index: usize) -> (usize, usize) {
    match index {
        1 => (0, 1),
        2 => (0, 2),
        3 => (0, 3),
        4 => (1, 2),
        5 => (1, 3),
        6 => (2, 3),
        _ => panic!("correction index {index} out of range 1..=6"),
    }
}

/// Correction index carried by generator `level` at u-power `upow`.
pub fn correction_index(level: usize, upow: usize) -> Option<usize> {
    (1..=6).find(|&i| correction_slot(i) == (level, upow))
}

/// Generator whose degree bounds `k_index` (k1 < r1; k2, k4 < r2; k3, k5, k6 < r3).
fn correction_bound_level(index: usize) -> usize {
    match index {
        1 => 1,
        2 | 4 => 2,
        _ => 3,
    }
}

/// Which canonical generators are present, as a bitmask over g0..g3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealType(u8);

impl IdealType {
    /// The fifteen types: four principal ideals, then the non-principal ones.
    pub const ALL: [IdealType; 15] = [
        IdealType(0b0001),
        IdealType(0b0010),
        IdealType(0b0100),
        IdealType(0b1000),
        IdealType(0b0011),
        IdealType(0b0101),
        IdealType(0b1001),
        IdealType(0b0110),
        IdealType(0b1010),
        IdealType(0b1100),
        IdealType(0b0111),
        IdealType(0b1011),
        IdealType(0b1101),
        IdealType(0b1110),
        IdealType(0b1111),
    ];

    pub fn from_levels(levels: &[usize]) -> Option<IdealType> {
        let mask = levels.iter().fold(0u8, |m, &l| m | (1 << l));
        (mask != 0 && mask < 16).then_some(IdealType(mask))
    }

    pub fn has(self, level: usize) -> bool {
        self.0 & (1 << level) != 0
    }

    pub fn levels(self) -> impl Iterator<Item = usize> {
        (0..U_LEVELS).filter(move |&l| self.has(l))
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_principal(self) -> bool {
        self.count() == 1
    }

    /// The type with generator `level` removed, if anything remains.
    pub fn without(self, level: usize) -> Option<IdealType> {
        let mask = self.0 & !(1 << level);
        (mask != 0).then_some(IdealType(mask))
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

impl fmt::Display for IdealType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.levels().map(|l| format!("g{l}")).collect();
        write!(f, "<{}>", names.join(","))
    }
}

impl FromStr for IdealType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
        let mut levels = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            let level = part
                .strip_prefix('g')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&l| l < U_LEVELS)
                .ok_or_else(|| format!("bad generator name {part:?}"))?;
            levels.push(level);
        }
        IdealType::from_levels(&levels).ok_or_else(|| format!("bad ideal type {s:?}"))
    }
}

/// The term `s^exponent * unit` of a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub exponent: usize,
    pub unit: SPoly,
}

impl Correction {
    pub fn new(exponent: usize, unit: SPoly) -> Correction {
        Correction { exponent, unit }
    }

    pub fn term(&self) -> SPoly {
        self.unit.shift(self.exponent)
    }
}

/// Degrees `r, r1, r2, r3` of the present generators and corrections `(k_i, p_i)`.
///
/// An absent correction means the corresponding term is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorForm {
    degrees: [Option<usize>; U_LEVELS],
    corrections: [Option<Correction>; 6],
}

impl GeneratorForm {
    pub fn new() -> GeneratorForm {
        GeneratorForm::default()
    }

    pub fn with_generator(mut self, level: usize, degree: usize) -> GeneratorForm {
        self.degrees[level] = Some(degree);
        self
    }

    /// Sets `p_index = unit` with `k_index = exponent`, `index` in 1..=6.
    pub fn with_correction(mut self, index: usize, exponent: usize, unit: SPoly) -> GeneratorForm {
        self.corrections[index - 1] = Some(Correction::new(exponent, unit));
        self
    }

    pub fn degree(&self, level: usize) -> Option<usize> {
        self.degrees[level]
    }

    pub fn correction(&self, index: usize) -> Option<&Correction> {
        self.corrections[index - 1].as_ref()
    }

    pub fn set_correction(&mut self, index: usize, c: Option<Correction>) {
        self.corrections[index - 1] = c;
    }

    pub fn present_levels(&self) -> Vec<usize> {
        (0..U_LEVELS).filter(|&l| self.degrees[l].is_some()).collect()
    }

    /// The form with generator `level` and its corrections removed.
    pub fn without(&self, level: usize) -> GeneratorForm {
        let mut out = self.clone();
        out.degrees[level] = None;
        for i in 1..=6 {
            if correction_slot(i).0 == level {
                out.corrections[i - 1] = None;
            }
        }
        out
    }
}

/// A validated cyclic code: field, length exponent and canonical generator subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCode {
    field: Field,
    k: u32,
    n: usize,
    form: GeneratorForm,
    ideal_type: IdealType,
}

/// Checks every [`GeneratorForm`] invariant and infers the ideal type.
///
/// Correction units are normalized by dropping coefficients that `s^k` pushes past
/// degree n - 1, so equal generators always compare equal.
pub fn validate_canonical(field: &Field, k: u32, form: GeneratorForm) -> Result<CyclicCode, CodeError> {
    let p = field.characteristic() as usize;
    if k == 0 {
        return Err(CodeError::BadLength);
    }
    let n = p.checked_pow(k).filter(|&n| n <= MAX_LENGTH).ok_or(CodeError::BadLength)?;
    let mut form = form;
    let levels = form.present_levels();
    if levels.is_empty() {
        return Err(CodeError::EmptyGeneratorSet);
    }
    for &l in &levels {
        let d = form.degrees[l].unwrap();
        if d >= n {
            return Err(CodeError::DegreeOutOfRange { level: l, degree: d, n });
        }
    }
    for w in levels.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (lo_deg, hi_deg) = (form.degrees[lo].unwrap(), form.degrees[hi].unwrap());
        if hi_deg > lo_deg {
            return Err(CodeError::DegreeOrderViolated { lo, lo_deg, hi, hi_deg });
        }
    }
    for index in 1..=6 {
        let Some(c) = form.corrections[index - 1].take() else {
            continue;
        };
        let (owner, _) = correction_slot(index);
        if form.degrees[owner].is_none() {
            return Err(CodeError::OrphanCorrection(index));
        }
        if c.unit.len() != n || **c.unit.field() != **field {
            return Err(CodeError::CorrectionShape(index));
        }
        if !c.unit.is_unit() {
            return Err(CodeError::CorrectionNotUnit(index));
        }
        let bound = form.degrees[correction_bound_level(index)].unwrap_or(n);
        if c.exponent >= bound {
            return Err(CodeError::CorrectionDegreeTooLarge {
                index,
                exponent: c.exponent,
                bound,
            });
        }
        let unit = c.unit.truncate(n - c.exponent);
        form.corrections[index - 1] = Some(Correction::new(c.exponent, unit));
    }
    let ideal_type = IdealType::from_levels(&levels).expect("nonempty level set");
    Ok(CyclicCode {
        field: field.clone(),
        k,
        n,
        form,
        ideal_type,
    })
}

impl CyclicCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn form(&self) -> &GeneratorForm {
        &self.form
    }

    pub fn ideal_type(&self) -> IdealType {
        self.ideal_type
    }

    pub fn degree(&self, level: usize) -> Option<usize> {
        self.form.degree(level)
    }

    pub fn correction(&self, index: usize) -> Option<&Correction> {
        self.form.correction(index)
    }

    /// `s^k_index * p_index`, zero when the correction is absent.
    pub fn correction_term(&self, index: usize) -> SPoly {
        self.correction(index)
            .map(Correction::term)
            .unwrap_or_else(|| SPoly::zero(&self.field, self.n))
    }

    /// The generator `g_level` as a ring element.
    pub fn generator(&self, level: usize) -> Option<RingElement> {
        let r = self.form.degree(level)?;
        let mut g = RingElement::monomial(&self.field, self.n, level, r, self.field.one());
        for upow in level + 1..U_LEVELS {
            let index = correction_index(level, upow).expect("slot exists above the leading level");
            if let Some(c) = self.correction(index) {
                g = &g + &RingElement::from_part(upow, c.term());
            }
        }
        Some(g)
    }

    pub fn generators(&self) -> Vec<(usize, RingElement)> {
        self.ideal_type
            .levels()
            .map(|l| (l, self.generator(l).expect("present level")))
            .collect()
    }

    /// The code generated by the remaining generators, if any remain.
    pub fn without(&self, level: usize) -> Option<CyclicCode> {
        self.ideal_type.without(level)?;
        Some(
            validate_canonical(&self.field, self.k, self.form.without(level))
                .expect("dropping a generator keeps the form valid"),
        )
    }
}

/// Reduced row-echelon basis of C as an F_q-subspace of F_q^{4n}.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    field: Field,
    n: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

struct Echelon<'a> {
    field: &'a Field,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    fn reduce(&self, v: &mut [FieldElement]) {
        let f = self.field;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(piv) {
                if !r.is_zero() {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Returns false when `v` was already in the span.
    fn insert(&mut self, mut v: Vec<FieldElement>) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(v[piv]).expect("pivot is nonzero");
        for x in v.iter_mut().skip(piv) {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    fn finish(mut self) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
        let f = self.field;
        // Back-substitute: later rows are already zero at earlier pivots.
        for j in (0..self.rows.len()).rev() {
            let piv = self.pivots[j];
            let (head, tail) = self.rows.split_at_mut(j);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let c = row[piv];
                if c.is_zero() {
                    continue;
                }
                for (x, &r) in row.iter_mut().zip(pivot_row).skip(piv) {
                    if !r.is_zero() {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let pivots = order.iter().map(|&i| self.pivots[i]).collect();
        let mut rows: Vec<Option<Vec<FieldElement>>> = self.rows.into_iter().map(Some).collect();
        let rows = order.iter().map(|&i| rows[i].take().unwrap()).collect();
        (rows, pivots)
    }
}

/// Row-reduces `{g * s^a * u^b}` over all present generators, `0 <= a < n`, `0 <= b <= 3`.
pub fn span_basis(code: &CyclicCode) -> SpanBasis {
    let n = code.n;
    let mut ech = Echelon {
        field: &code.field,
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    for (_, g) in code.generators() {
        for b in 0..U_LEVELS {
            for a in 0..n {
                let row = g.shift_mul(a, b);
                if row.is_zero() {
                    break;
                }
                ech.insert(row.flatten());
            }
        }
    }
    let (rows, pivots) = ech.finish();
    SpanBasis {
        field: code.field.clone(),
        n,
        rows,
        pivots,
    }
}

impl SpanBasis {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// dim_{F_q} C.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_element(&self, i: usize) -> RingElement {
        RingElement::from_flat(&self.field, self.n, &self.rows[i])
    }

    pub fn contains(&self, elem: &RingElement) -> bool {
        assert_eq!(elem.len(), self.n, "element length");
        self.contains_flat(elem.flatten())
    }

    fn contains_flat(&self, mut v: Vec<FieldElement>) -> bool {
        let f = &self.field;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(piv) {
                if !r.is_zero() {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    /// Whether `u^level * s^exp` lies in C.
    pub fn contains_monomial(&self, level: usize, exp: usize) -> bool {
        if exp >= self.n {
            return true;
        }
        let mut v = vec![FieldElement::ZERO; U_LEVELS * self.n];
        v[level * self.n + exp] = self.field.one();
        self.contains_flat(v)
    }

    /// Least `t` with `u^level * s^t` in C, `n` when Tor_level(C) is trivial.
    pub fn torsional_degree(&self, level: usize) -> usize {
        // membership is monotone in the exponent
        let n = self.n;
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.contains_monomial(level, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// `q^rank`, or `None` on overflow.
    pub fn codeword_count(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.rank() as u32)
    }

    /// All `q^rank` codewords, each exactly once, zero first.
    pub fn enumerate_codewords(&self, cap: u64) -> Result<Codewords<'_>, CodeError> {
        match self.codeword_count() {
            Some(c) if c <= cap => Ok(Codewords {
                basis: self,
                digits: vec![0; self.rank()],
                done: false,
            }),
            _ => Err(CodeError::TooLarge {
                rank: self.rank(),
                bound: cap,
            }),
        }
    }
}

/// Least `t` with `u^i (x-1)^t` in C.
pub fn torsion_oracle(code: &CyclicCode, level: usize) -> usize {
    span_basis(code).torsional_degree(level)
}

/// Iterator over all F_q-combinations of the basis rows.
pub struct Codewords<'a> {
    basis: &'a SpanBasis,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Codewords<'_> {
    type Item = RingElement;

    fn next(&mut self) -> Option<RingElement> {
        if self.done {
            return None;
        }
        let b = self.basis;
        let f = &b.field;
        let mut v = vec![FieldElement::ZERO; U_LEVELS * b.n];
        for (row, &d) in b.rows.iter().zip(&self.digits) {
            if d == 0 {
                continue;
            }
            let c = f.from_code(d);
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        let q = f.order();
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < q {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(RingElement::from_flat(f, b.n, &v))
    }
}
