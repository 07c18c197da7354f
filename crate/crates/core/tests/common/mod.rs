#![allow(dead_code)]

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrcyclic::chain::U_LEVELS;
use rrcyclic::codes::CyclicCode;
use rrcyclic::galois::{Field, FieldSpec};
use rrcyclic::random::random_code;

/// The six (p, m, k) grids of the agreement criterion.
pub const GRID: [(u32, u32, u32); 6] = [(2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 2), (5, 1, 1), (2, 1, 4)];

pub fn field(p: u32, m: u32) -> Field {
    Arc::new(FieldSpec::with_default_modulus(p, m).unwrap())
}

pub fn random_codes(p: u32, m: u32, k: u32, seed: u64, count: usize) -> Vec<CyclicCode> {
    let f = field(p, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_code(&f, k, &mut rng)).collect()
}

/// Rank over F_p of integer rows, plain mod-p elimination.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&i| rows[rank][c] * i % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + (p - f) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// t3 by rank comparison over a prime field: the least t for which appending
/// u^3 s^t to the spanning set does not raise the rank.
pub fn naive_t3(code: &CyclicCode) -> usize {
    let f = code.field();
    assert_eq!(f.degree(), 1, "prime fields only");
    let p = f.characteristic() as u64;
    let n = code.n();
    let mut rows = Vec::new();
    for (_, g) in code.generators() {
        for b in 0..U_LEVELS {
            for a in 0..n {
                let row: Vec<u64> = g.shift_mul(a, b).flatten().iter().map(|c| c.code() as u64).collect();
                rows.push(row);
            }
        }
    }
    let base = rank_mod_p(rows.clone(), p);
    (0..n)
        .find(|&t| {
            let mut probe = vec![0u64; U_LEVELS * n];
            probe[3 * n + t] = 1;
            let mut with = rows.clone();
            with.push(probe);
            rank_mod_p(with, p) == base
        })
        .unwrap_or(n)
}
