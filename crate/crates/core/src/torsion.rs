//! Closed forms for the third torsional degree t3, the least `t` with
//! `u^3 (x-1)^t` in C, for all fifteen ideal types.
//!
//! Every formula is evaluated by building the actual witness polynomials and
//! decomposing them, so cancellation of leading terms is measured, not assumed.
//! An absent correction contributes the zero polynomial and every candidate whose
//! defining polynomial vanishes is dropped.

use serde::Serialize;
use thiserror::Error;

use crate::chain::RingElement;
use crate::codes::{CyclicCode, IdealType};
use crate::sring::SPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("expected ideal type {expected}, found {found}")]
    WrongIdealType { expected: String, found: IdealType },
    #[error("inconsistent u^2-part element {0}")]
    InconsistentSet(String),
}

/// `u^2 s^omega h1 + u^3 s^omega_tilde h2` with `h1`, `h2` each a unit or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct U2Element {
    pub source: &'static str,
    pub omega: Option<usize>,
    pub omega_tilde: Option<usize>,
    pub h1: SPoly,
    pub h2: SPoly,
}

impl U2Element {
    /// Normalizes an element with vanishing `1` and `u` parts; `None` for zero.
    pub fn from_ring(source: &'static str, e: &RingElement) -> Option<U2Element> {
        assert!(
            e.part(0).is_zero() && e.part(1).is_zero(),
            "{source} has a nonzero part below u^2"
        );
        if e.is_zero() {
            return None;
        }
        let n = e.len();
        let d1 = e.part(2).decompose();
        let d2 = e.part(3).decompose();
        Some(U2Element {
            source,
            omega: (d1.valuation < n).then_some(d1.valuation),
            omega_tilde: (d2.valuation < n).then_some(d2.valuation),
            h1: d1.unit_part,
            h2: d2.unit_part,
        })
    }

    pub fn to_ring(&self) -> RingElement {
        let part = |v: Option<usize>, h: &SPoly| match v {
            Some(v) => h.shift(v),
            None => SPoly::zero(h.field(), h.len()),
        };
        &RingElement::from_part(2, part(self.omega, &self.h1))
            + &RingElement::from_part(3, part(self.omega_tilde, &self.h2))
    }

    fn check(&self) -> Result<(), TorsionError> {
        let ok = |v: Option<usize>, h: &SPoly| match v {
            Some(v) => v < h.len() && h.is_unit(),
            None => h.is_zero(),
        };
        if ok(self.omega, &self.h1) && ok(self.omega_tilde, &self.h2) {
            Ok(())
        } else {
            Err(TorsionError::InconsistentSet(self.source.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub label: String,
    pub value: usize,
}

/// A decomposed witness polynomial; `value` is `None` when it vanished.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tau {
    pub label: String,
    pub value: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetEntry {
    pub source: String,
    pub omega: Option<usize>,
    pub omega_tilde: Option<usize>,
    pub element: String,
}

/// Derivation record of one t3 evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Trace {
    pub case: String,
    pub candidates: Vec<Candidate>,
    /// Candidates `>= n`, whose witness term vanishes.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<Candidate>,
    pub taus: Vec<Tau>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_sub: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_hat: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<SetEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub: Option<Box<Trace>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T3Result {
    pub t3: usize,
    pub trace: Trace,
}

struct Collector {
    n: usize,
    trace: Trace,
}

impl Collector {
    fn new(n: usize, case: impl Into<String>) -> Collector {
        Collector {
            n,
            trace: Trace {
                case: case.into(),
                ..Trace::default()
            },
        }
    }

    /// Records a candidate; values `>= n` stand for vanished terms and are dropped.
    fn push(&mut self, label: impl Into<String>, value: Option<usize>) {
        if let Some(value) = value {
            let c = Candidate {
                label: label.into(),
                value,
            };
            if value < self.n {
                self.trace.candidates.push(c);
            } else {
                self.trace.dropped.push(c);
            }
        }
    }

    /// Decomposes `poly`, records it as a tau and returns its valuation if nonzero.
    fn tau(&mut self, label: impl Into<String>, poly: &SPoly) -> Option<usize> {
        let v = poly.valuation();
        let value = (v < self.n).then_some(v);
        self.trace.taus.push(Tau {
            label: label.into(),
            value,
        });
        value
    }

    fn finish(self) -> T3Result {
        let t3 = self
            .trace
            .candidates
            .iter()
            .map(|c| c.value)
            .min()
            .unwrap_or(self.n);
        T3Result { t3, trace: self.trace }
    }
}

fn expect_type(code: &CyclicCode, levels: &[usize]) -> Result<(), TorsionError> {
    let expected = IdealType::from_levels(levels).expect("nonempty level list");
    if code.ideal_type() == expected {
        Ok(())
    } else {
        Err(TorsionError::WrongIdealType {
            expected: expected.to_string(),
            found: code.ideal_type(),
        })
    }
}

/// Correction data `(k_i, p_i)` if present.
fn corr(code: &CyclicCode, i: usize) -> Option<(usize, &SPoly)> {
    code.correction(i).map(|c| (c.exponent, &c.unit))
}

/// `s^e * poly`, zero past degree n - 1.
fn mono(e: usize, poly: &SPoly) -> SPoly {
    poly.shift(e)
}

fn zero_like(code: &CyclicCode) -> SPoly {
    SPoly::zero(code.field(), code.n())
}

/// Third torsional degree of `<g1>`.
pub fn t3_g1(code: &CyclicCode) -> Result<T3Result, TorsionError> {
    expect_type(code, &[1])?;
    Ok(t3_g1_unchecked(code))
}

fn t3_g1_unchecked(code: &CyclicCode) -> T3Result {
    let n = code.n();
    let r1 = code.degree(1).expect("g1 present");
    let p4 = corr(code, 4);
    let p5 = corr(code, 5);
    // the u^2-degree of s^(n-r1) g1 is n - r1 + k4
    let case_a = p4.map_or(true, |(k4, _)| n - r1 + k4 >= r1);
    if case_a {
        let mut c = Collector::new(n, "g1: n-r1+k4 >= r1");
        let mut d = zero_like(code);
        if let Some((k4, p4)) = p4 {
            d = &d + &mono(n + 2 * k4 - 2 * r1, &(p4 * p4));
        }
        if let Some((k5, p5)) = p5 {
            d = &d - &mono(n - r1 + k5, p5);
        }
        c.push("r1", Some(r1));
        let tau1 = c.tau("tau1", &d);
        c.push("tau1", tau1);
        c.finish()
    } else {
        let (k4, p4) = p4.expect("case (b) needs p4");
        let mut c = Collector::new(n, "g1: n-r1+k4 < r1");
        let mut d = mono(k4, &(p4 * p4));
        if let Some((k5, p5)) = p5 {
            d = &d - &mono(r1 - k4 + k5, p5);
        }
        c.push("n-r1+k4", Some(n - r1 + k4));
        let tau2 = c.tau("tau2", &d);
        c.push("tau2", tau2);
        c.finish()
    }
}

/// Third torsional degree of `<g1, g2>`.
pub fn t3_g1_g2(code: &CyclicCode) -> Result<T3Result, TorsionError> {
    expect_type(code, &[1, 2])?;
    let n = code.n();
    let r1 = code.degree(1).expect("g1 present");
    let r2 = code.degree(2).expect("g2 present");
    let sub = t3_g1_unchecked(&code.without(2).expect("g1 remains"));
    let p4 = corr(code, 4);
    let p5 = corr(code, 5);
    let p6 = corr(code, 6);

    let above = p4.map_or(true, |(k4, _)| n - r1 + k4 > r2);
    let mut c = Collector::new(
        n,
        if above {
            "g1,g2: n-r1+k4 > r2"
        } else {
            "g1,g2: n-r1+k4 <= r2"
        },
    );
    let mut d3 = zero_like(code);
    if above {
        if let Some((k5, p5)) = p5 {
            d3 = &d3 + &mono(n - r1 + k5, p5);
        }
        if let (Some((k4, p4)), Some((k6, p6))) = (p4, p6) {
            d3 = &d3 - &mono(n - r1 + k4 - r2 + k6, &(p4 * p6));
        }
    } else {
        let (k4, p4) = p4.expect("branch needs p4");
        if let Some((k5, p5)) = p5 {
            d3 = &d3 + &mono(r2 - k4 + k5, p5);
        }
        if let Some((k6, p6)) = p6 {
            d3 = &d3 - &mono(k6, &(p4 * p6));
        }
    }
    let mut d4 = zero_like(code);
    if let Some((k4, p4)) = p4 {
        d4 = &d4 + &mono(k4, p4);
    }
    if let Some((k6, p6)) = p6 {
        d4 = &d4 - &mono(r1 - r2 + k6, p6);
    }
    let tau3 = c.tau("tau3", &d3);
    let tau4 = c.tau("tau4", &d4);
    let kappa = tau3.into_iter().chain(tau4).min();
    c.trace.kappa = kappa;
    c.trace.t_sub = Some(sub.t3);
    c.push("kappa", kappa);
    c.push("t", Some(sub.t3));
    c.push("r2", Some(r2));
    c.push("n-r1+k4", p4.map(|(k4, _)| n - r1 + k4));
    if let (Some((k4, _)), Some((k5, _))) = (p4, p5) {
        c.push("n-k4+k5", Some(n - k4 + k5));
    }
    c.push("n-r2+k6", p6.map(|(k6, _)| n - r2 + k6));
    c.trace.sub = Some(Box::new(sub.trace));
    Ok(c.finish())
}

/// Third torsional degree of `<g2>`.
pub fn t3_g2(code: &CyclicCode) -> Result<T3Result, TorsionError> {
    expect_type(code, &[2])?;
    let n = code.n();
    let r2 = code.degree(2).expect("g2 present");
    let mut c = Collector::new(n, "g2");
    c.push("n-r2+k6", corr(code, 6).map(|(k6, _)| n - r2 + k6));
    c.push("r2", Some(r2));
    Ok(c.finish())
}

/// Third torsional degree of `<g3>`.
pub fn t3_g3(code: &CyclicCode) -> Result<T3Result, TorsionError> {
    expect_type(code, &[3])?;
    let mut c = Collector::new(code.n(), "g3");
    c.push("r3", code.degree(3));
    Ok(c.finish())
}

/// Eliminates the `u^level` part of `y` against `x`: the result lies in the
/// F_q[s]-span of `x`, `y` and has zero `u^level` part. If either already has zero
/// `u^level` part it is returned as is.
fn elim(level: usize, x: &RingElement, y: &RingElement) -> RingElement {
    let n = x.len();
    let dx = x.part(level).decompose();
    let dy = y.part(level).decompose();
    if dx.valuation == n {
        return x.clone();
    }
    if dy.valuation == n {
        return y.clone();
    }
    let out = if dx.valuation >= dy.valuation {
        &x.scale(&dy.unit_part) - &y.scale(&dx.unit_part.shift(dx.valuation - dy.valuation))
    } else {
        &x.scale(&dy.unit_part.shift(dy.valuation - dx.valuation)) - &y.scale(&dx.unit_part)
    };
    debug_assert!(out.part(level).is_zero());
    out
}

/// `s^(n - v) x` where `v` is the valuation of the `u^level` part; kills that part.
fn ann(level: usize, x: &RingElement) -> RingElement {
    let v = x.part(level).valuation();
    let n = x.len();
    if v == n {
        x.clone()
    } else {
        x.shift_mul(n - v, 0)
    }
}

fn g0_set_levels(t: IdealType) -> Option<&'static str> {
    let name = |l: &[usize]| IdealType::from_levels(l).unwrap();
    if t == name(&[0]) {
        Some("T1")
    } else if t == name(&[0, 1]) {
        Some("T2")
    } else if t == name(&[0, 1, 2]) {
        Some("T3")
    } else if t == name(&[0, 2]) {
        Some("T4")
    } else {
        None
    }
}

/// Elements of C with vanishing `1` and `u` parts that generate, together with
/// their u-multiples, every such element: the set T1, T2, T3 or T4 according to
/// whether C is `<g0>`, `<g0,g1>`, `<g0,g1,g2>` or `<g0,g2>`. Zero elements are dropped.
pub fn u2_part_set(code: &CyclicCode) -> Result<Vec<U2Element>, TorsionError> {
    let name = g0_set_levels(code.ideal_type()).ok_or_else(|| TorsionError::WrongIdealType {
        expected: "<g0>, <g0,g1>, <g0,g1,g2> or <g0,g2>".to_string(),
        found: code.ideal_type(),
    })?;
    let n = code.n();
    let r = code.degree(0).expect("g0 present");
    let g0 = code.generator(0).expect("g0 present");
    // x1 = s^(n-r) g0 and x2 = u g0 are the multiples of g0 with zero unit part
    let x1 = g0.shift_mul(n - r, 0);
    let x2 = g0.shift_mul(0, 1);
    let mut raw: Vec<(&'static str, RingElement)> = vec![("eq2", elim(1, &x1, &x2))];
    let g1 = code.generator(1);
    if let Some(x3) = &g1 {
        raw.push(("eq3", elim(1, &x1, x3)));
        raw.push(("eq02_1", elim(1, &x2, x3)));
        raw.push(("eq12", ann(1, &x1)));
    }
    raw.push(("eq13", x1.shift_mul(0, 1)));
    if let Some(x3) = &g1 {
        raw.push(("eq6_2", ann(1, x3)));
    }
    raw.push(("eq6_1", x2.shift_mul(0, 1)));
    if let Some(x3) = &g1 {
        raw.push(("eq6_3", x3.shift_mul(0, 1)));
    }
    if let Some(g2) = code.generator(2) {
        raw.push(("eq11", g2));
    }
    debug_assert!(matches!(name, "T1" | "T2" | "T3" | "T4"));
    Ok(raw
        .iter()
        .filter_map(|(src, e)| U2Element::from_ring(src, e))
        .collect())
}

/// Name of the u^2-part set used for a g0-containing type without g3.
pub fn u2_set_name(t: IdealType) -> Option<&'static str> {
    g0_set_levels(t)
}

/// t3 of the code generated by a u^2-part set.
///
/// Candidates: each `omega_i` (from `u f_i`), `n - omega_i + omega_tilde_i` (from
/// `s^(n - omega_i) f_i`), each `omega_tilde` of a pure-u^3 element, and the least
/// valuation m of the pairwise eliminations
/// `f_j - s^(omega_j - omega_i) h_i1^-1 h_j1 f_i` over the set sorted by omega.
pub fn t3_from_u2_set(set: &[U2Element], code: &CyclicCode) -> Result<T3Result, TorsionError> {
    for e in set {
        e.check()?;
        if e.h1.len() != code.n() || e.h2.len() != code.n() {
            return Err(TorsionError::InconsistentSet(e.source.to_string()));
        }
    }
    let n = code.n();
    let mut c = Collector::new(n, "u2-part set");
    c.trace.set = set
        .iter()
        .map(|e| SetEntry {
            source: e.source.to_string(),
            omega: e.omega,
            omega_tilde: e.omega_tilde,
            element: e.to_ring().to_string(),
        })
        .collect();
    let mut with_omega: Vec<&U2Element> = set.iter().filter(|e| e.omega.is_some()).collect();
    with_omega.sort_by_key(|e| e.omega);
    c.trace.nu = Some(with_omega.len());

    let mut m: Option<usize> = None;
    for (i, fi) in with_omega.iter().enumerate() {
        let wi = fi.omega.unwrap();
        let hi_inv = fi.h1.inverse().expect("h1 is a unit");
        for fj in &with_omega[i + 1..] {
            let wj = fj.omega.unwrap();
            let factor = (&hi_inv * &fj.h1).shift(wj - wi);
            let e = &fj.to_ring() - &fi.to_ring().scale(&factor);
            debug_assert!(e.part(2).is_zero());
            let tau = c.tau(format!("{}-{}", fj.source, fi.source), e.part(3));
            if let Some(t) = tau {
                m = Some(m.map_or(t, |m: usize| m.min(t)));
            }
        }
    }
    c.trace.m = m;
    c.push("m", m);
    for e in &with_omega {
        let w = e.omega.unwrap();
        c.push(format!("omega[{}]", e.source), Some(w));
        if let Some(wt) = e.omega_tilde.filter(|&wt| wt < w) {
            c.push(format!("n-omega+omega~[{}]", e.source), Some(n - w + wt));
        }
    }
    for e in set.iter().filter(|e| e.omega.is_none()) {
        c.push(format!("omega~[{}]", e.source), e.omega_tilde);
    }
    Ok(c.finish())
}

/// t3 after adjoining `g3 = u^3 s^r3` to a code whose t3 is `t_hat`.
pub fn t3_adjoin_g3(t_hat: usize, r3: usize) -> usize {
    t_hat.min(r3)
}

/// t3 of any canonical code.
pub fn t3(code: &CyclicCode) -> Result<T3Result, TorsionError> {
    let t = code.ideal_type();
    let is = |l: &[usize]| t == IdealType::from_levels(l).unwrap();
    if is(&[1]) {
        t3_g1(code)
    } else if is(&[1, 2]) {
        t3_g1_g2(code)
    } else if is(&[2]) {
        t3_g2(code)
    } else if is(&[3]) {
        t3_g3(code)
    } else if t.has(3) {
        let sub = t3(&code.without(3).expect("another generator remains"))?;
        let r3 = code.degree(3).expect("g3 present");
        let mut c = Collector::new(code.n(), "adjoin g3");
        c.trace.t_hat = Some(sub.t3);
        c.push("t_hat", Some(sub.t3));
        c.push("r3", Some(r3));
        c.trace.sub = Some(Box::new(sub.trace));
        let out = c.finish();
        debug_assert_eq!(out.t3, t3_adjoin_g3(sub.t3, r3));
        Ok(out)
    } else {
        let set = u2_part_set(code)?;
        let mut out = t3_from_u2_set(&set, code)?;
        out.trace.case = format!("{} ({})", t, u2_set_name(t).expect("g0 type"));
        Ok(out)
    }
}
