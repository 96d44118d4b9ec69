//! Deterministic seeded samples. Every generator is a pure function of
//! its seed, so reports built on them are reproducible byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::ExactRational;
use crate::valuation::abs_p;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// General-purpose rationals: moderate numerators and denominators, with
/// zero appearing occasionally.
pub fn rationals(seed: u64, count: usize) -> Vec<ExactRational> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            if r.gen_range(0..16) == 0 {
                ExactRational::zero()
            } else {
                let num = r.gen_range(-400i64..=400);
                let den = r.gen_range(1i64..=40);
                ExactRational::ratio(num, den).expect("positive denominator")
            }
        })
        .collect()
}

fn unit_for(r: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let candidate = r.gen_range(1i64..=400);
        if candidate % p as i64 != 0 {
            return candidate;
        }
    }
}

/// Rationals with a spread of p-adic valuations: (a/b)·p^e with p dividing
/// neither a nor b and e in −5..=5. About one in sixteen is zero.
pub fn padic_rationals(seed: u64, count: usize, p: u64) -> Vec<ExactRational> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            if r.gen_range(0..16) == 0 {
                return ExactRational::zero();
            }
            let sign = if r.gen_bool(0.5) { 1 } else { -1 };
            let a = unit_for(&mut r, p) * sign;
            let b = unit_for(&mut r, p);
            let e = r.gen_range(-5i32..=5);
            let (num_pow, den_pow) = if e >= 0 { (e as u32, 0) } else { (0, (-e) as u32) };
            let num = a * (p as i64).pow(num_pow);
            let den = b * (p as i64).pow(den_pow);
            ExactRational::ratio(num, den).expect("positive denominator")
        })
        .collect()
}

/// Pairs of p-adic-flavoured rationals.
pub fn padic_pairs(seed: u64, count: usize, p: u64) -> Vec<(ExactRational, ExactRational)> {
    let left = padic_rationals(seed, count, p);
    let right = padic_rationals(seed.wrapping_add(0x9e3779b9), count, p);
    left.into_iter().zip(right).collect()
}

/// Pairs with |a|_p ≠ |b|_p, where the sharp triangle equality is exact.
pub fn distinct_norm_pairs(
    seed: u64,
    count: usize,
    p: u64,
) -> Vec<(ExactRational, ExactRational)> {
    let mut out = Vec::with_capacity(count);
    let mut salt = 0u64;
    while out.len() < count {
        for (a, b) in padic_pairs(seed.wrapping_add(salt), count, p) {
            if out.len() == count {
                break;
            }
            if abs_p(&a, p).expect("valid prime") != abs_p(&b, p).expect("valid prime") {
                out.push((a, b));
            }
        }
        salt = salt.wrapping_add(1);
    }
    out
}

fn odd_in(r: &mut ChaCha8Rng, limit: i64) -> i64 {
    loop {
        let c = r.gen_range(1..=limit);
        if c % 2 == 1 {
            return c;
        }
    }
}

/// A 2-adic sample mixing unit-norm elements (odd/odd fractions) with
/// non-units, led by zero. Exercises both branches of the inversion map.
pub fn mixed_2adic(seed: u64, count: usize) -> Vec<ExactRational> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(ExactRational::zero());
    }
    while out.len() < count {
        let a = odd_in(&mut r, 199);
        let b = odd_in(&mut r, 199);
        if out.len() % 2 == 1 {
            out.push(ExactRational::ratio(a, b).expect("odd denominator"));
        } else {
            let e = loop {
                let e: i32 = r.gen_range(-4..=4);
                if e != 0 {
                    break e;
                }
            };
            let (num_pow, den_pow) = if e >= 0 { (e as u32, 0) } else { (0, (-e) as u32) };
            out.push(
                ExactRational::ratio(a * 2i64.pow(num_pow), b * 2i64.pow(den_pow))
                    .expect("odd denominator"),
            );
        }
    }
    out
}

/// Unit-norm 2-adic rationals only (odd numerator and denominator).
pub fn unit_2adic(seed: u64, count: usize) -> Vec<ExactRational> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let a = odd_in(&mut r, 199);
            let b = odd_in(&mut r, 199);
            ExactRational::ratio(a, b).expect("odd denominator")
        })
        .collect()
}
