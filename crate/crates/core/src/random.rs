//! Seeded generation of random canonical codes.

use rand::Rng;

use crate::codes::{correction_slot, validate_canonical, CyclicCode, GeneratorForm, IdealType};
use crate::galois::{Field, FieldElement};
use crate::sring::SPoly;

/// A random unit of F_q[s]/(s^n).
pub fn random_unit<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> SPoly {
    let q = field.order();
    let coeffs: Vec<FieldElement> = (0..n)
        .map(|i| field.from_code(if i == 0 { rng.gen_range(1..q) } else { rng.gen_range(0..q) }))
        .collect();
    SPoly::from_coeffs(field, n, &coeffs).expect("length n")
}

/// Draws the ideal type uniformly from the fifteen, the degrees as sorted uniform
/// draws from `[0, n)`, and each correction absent with probability 1/3, else with
/// a uniform exponent below its bound and a random unit.
pub fn random_code<R: Rng + ?Sized>(field: &Field, k: u32, rng: &mut R) -> CyclicCode {
    let ideal_type = IdealType::ALL[rng.gen_range(0..IdealType::ALL.len())];
    random_code_of_type(field, k, ideal_type, rng)
}

pub fn random_code_of_type<R: Rng + ?Sized>(
    field: &Field,
    k: u32,
    ideal_type: IdealType,
    rng: &mut R,
) -> CyclicCode {
    let n = (field.characteristic() as usize).pow(k);
    let levels: Vec<usize> = ideal_type.levels().collect();
    let mut degrees: Vec<usize> = levels.iter().map(|_| rng.gen_range(0..n)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let mut form = GeneratorForm::new();
    for (&l, &d) in levels.iter().zip(&degrees) {
        form = form.with_generator(l, d);
    }
    for index in 1..=6 {
        let (owner, _) = correction_slot(index);
        if !ideal_type.has(owner) || rng.gen_range(0..3) == 0 {
            continue;
        }
        let bound_level = match index {
            1 => 1,
            2 | 4 => 2,
            _ => 3,
        };
        let bound = form.degree(bound_level).unwrap_or(n);
        if bound == 0 {
            continue;
        }
        let exp = rng.gen_range(0..bound);
        form = form.with_correction(index, exp, random_unit(field, n, rng));
    }
    validate_canonical(field, k, form).expect("random form is canonical")
}
