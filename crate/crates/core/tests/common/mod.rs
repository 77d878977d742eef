#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use torsion_core::SparsePoly;

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn bigs(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| big(x)).collect()
}

/// Up to `max_terms` terms in `n` variables; exponents in `0..=max_exp`,
/// coefficients in `[-max_coeff, max_coeff]`. May be zero.
pub fn poly(n: usize, max_terms: usize, max_exp: u32, max_coeff: i64) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -max_coeff..=max_coeff), 0..=max_terms)
        .prop_map(move |terms| {
            SparsePoly::from_terms(
                n,
                terms.into_iter().map(|(e, c)| (e.into_iter().map(BigUint::from).collect(), BigInt::from(c))),
            )
        })
}

pub fn nonzero_poly(n: usize, max_terms: usize, max_exp: u32, max_coeff: i64) -> impl Strategy<Value = SparsePoly> {
    poly(n, max_terms, max_exp, max_coeff).prop_filter("nonzero", |p| !p.is_zero())
}

/// Sieve of Eratosthenes up to and including `n`.
pub fn sieve(n: usize) -> Vec<bool> {
    let mut s = vec![true; n + 1];
    s[0] = false;
    if n >= 1 {
        s[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if s[i] {
            for j in (i * i..=n).step_by(i) {
                s[j] = false;
            }
        }
        i += 1;
    }
    s
}

/// Nonzero polynomial drawn directly from `rng`, for loops outside proptest.
pub fn random_poly<R: rand::Rng>(rng: &mut R, n: usize, max_terms: usize, max_exp: u32, max_coeff: i64) -> SparsePoly {
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let p = SparsePoly::from_terms(
            n,
            (0..terms).map(|_| {
                let e = (0..n).map(|_| BigUint::from(rng.gen_range(0..=max_exp))).collect();
                (e, BigInt::from(rng.gen_range(-max_coeff..=max_coeff)))
            }),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// Primes below `bound` that are `1 mod m`.
pub fn conforming_primes(m: &BigUint, bound: usize) -> Vec<BigUint> {
    let s = sieve(bound);
    (2..bound).filter(|&q| s[q]).map(BigUint::from).filter(|q| (q - 1u32) % m == BigUint::from(0u32)).collect()
}
