//! Primality, factoring, primes in the progression `cM + 1`, and cyclic
//! subgroups of `(Z/qZ)^*`.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, ExecPolicy};
use crate::modarith::{mul_mod, pow_mod};

/// Deterministic Miller-Rabin with the first 13 prime bases is exact below
/// this bound (Sorenson and Webster).
pub const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";
const SMALL_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const PROBABLE_ROUNDS: usize = 64;
const TRIAL_LIMIT: u32 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Primality {
    Composite,
    /// Proven by a deterministic witness set.
    Prime,
    /// Passed 64 strong-probable-prime rounds and a strong Lucas test.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        self != Primality::Composite
    }
}

fn deterministic_bound() -> &'static BigUint {
    static B: OnceLock<BigUint> = OnceLock::new();
    B.get_or_init(|| DETERMINISTIC_BOUND.parse().unwrap())
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (d, s) = odd_part_u64(n - 1);
    SMALL_BASES[..12].iter().all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn odd_part_u64(m: u64) -> (u64, u32) {
    let s = m.trailing_zeros();
    (m >> s, s)
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Classify `n`: exact below 3.3·10^24, BPSW-style above.
pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    for &p in &SMALL_BASES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let spp = |a: &BigUint| {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    if !SMALL_BASES.iter().all(|&a| spp(&BigUint::from(a))) {
        return Primality::Composite;
    }
    if n < deterministic_bound() {
        return Primality::Prime;
    }
    // bases drawn from a generator seeded by n keep the answer reproducible
    let mut rng = ChaCha8Rng::seed_from_u64(n.iter_u64_digits().fold(0x9e37, |h, w| h ^ w.rotate_left(17)));
    let two = BigUint::from(2u32);
    for _ in 0..PROBABLE_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if !spp(&a) {
            return Primality::Composite;
        }
    }
    if strong_lucas(n) {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    assert!(n.is_odd(), "jacobi symbol needs odd modulus");
    let mut n = n.clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).to_biguint().unwrap();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap();
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 if d.magnitude() != n => return false,
            _ => {}
        }
        d = if d.sign() == num_bigint::Sign::Minus { -d + 2u32 } else { -d - 2u32 };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;
    let modn = |x: BigInt| x.mod_floor(&n_int);
    let half = |x: BigInt| {
        let x = if x.is_odd() { x + &n_int } else { x };
        modn(x / 2)
    };

    let n_plus_1 = BigInt::from(n.clone()) + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap();
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = modn(q.clone());
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = modn(&u * &v);
        v = modn(&v * &v - 2 * &qk);
        qk = modn(&qk * &qk);
        if k.bit(i) {
            let (u_old, v_old) = (u.clone(), v.clone());
            u = half(&p * &u_old + &v_old);
            v = half(&d * &u_old + &p * &v_old);
            qk = modn(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&v * &v - 2 * &qk);
        if v.is_zero() {
            return true;
        }
        qk = modn(&qk * &qk);
    }
    false
}

fn small_primes() -> &'static [u32] {
    static P: OnceLock<Vec<u32>> = OnceLock::new();
    P.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                (i * i..=n).step_by(i).for_each(|j| sieve[j] = false);
            }
            i += 1;
        }
        (0..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FactorError {
    #[error("factoring budget exhausted; unfactored cofactor {cofactor}")]
    Budget { cofactor: BigUint, partial: Vec<BigUint> },
    #[error("cannot factor zero")]
    Zero,
}

/// Prime factorization with multiplicity, sorted ascending.
pub fn factor(n: &BigUint) -> Result<Vec<BigUint>, FactorError> {
    factor_with(n, DEFAULT_RHO_ITERATIONS)
}

/// [`factor`] with an explicit Pollard-rho iteration cap per split.
pub fn factor_with(n: &BigUint, rho_iterations: u64) -> Result<Vec<BigUint>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            out.push(p_big.clone());
        }
    }
    let mut stack = vec![rest];
    let mut stuck = None;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        match rho_split(&m, rho_iterations) {
            Some(f) => {
                let g = &m / &f;
                stack.push(f);
                stack.push(g);
            }
            None => {
                stuck = Some(m);
                break;
            }
        }
    }
    out.sort();
    match stuck {
        None => Ok(out),
        Some(cofactor) => {
            let mut cofactor = cofactor;
            for m in stack {
                cofactor *= m;
            }
            Err(FactorError::Budget { cofactor, partial: out })
        }
    }
}

/// A nontrivial factor of composite `n` by Pollard rho with Brent's cycle
/// detection, trying successive polynomial constants.
fn rho_split(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let root = n.sqrt();
    if &root * &root == *n {
        return Some(root);
    }
    if let Some(n64) = n.to_u64() {
        return rho_split_u64(n64, max_iterations).map(BigUint::from);
    }
    let mut budget = max_iterations;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
        let mut x;
        let mut ys;
        let m = 128u64;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            ys = y.clone();
            let mut g = BigUint::one();
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            budget = budget.saturating_sub(r);
            if !g.is_one() {
                if &g == n {
                    loop {
                        ys = f(&ys);
                        let diff = if x > ys { &x - &ys } else { &ys - &x };
                        g = diff.gcd(n);
                        if !g.is_one() {
                            break;
                        }
                    }
                }
                if &g != n {
                    return Some(g);
                }
                break;
            }
            r *= 2;
            if budget == 0 {
                return None;
            }
        }
        if budget == 0 {
            return None;
        }
    }
    None
}

fn rho_split_u64(n: u64, max_iterations: u64) -> Option<u64> {
    let mut budget = max_iterations;
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let m = 128u64;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            ys = y;
            let mut g = 1;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            budget = budget.saturating_sub(r);
            if g != 1 {
                if g == n {
                    loop {
                        ys = f(ys);
                        g = x.abs_diff(ys).gcd(&n);
                        if g != 1 {
                            break;
                        }
                    }
                }
                if g != n {
                    return Some(g);
                }
                break;
            }
            r *= 2;
            if budget == 0 {
                return None;
            }
        }
        if budget == 0 {
            return None;
        }
    }
    None
}

/// Distinct prime divisors, ascending.
pub fn distinct_prime_factors(n: &BigUint) -> Result<Vec<BigUint>, FactorError> {
    let mut f = factor(n)?;
    f.dedup();
    Ok(f)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: &BigUint) -> Result<Vec<BigUint>, FactorError> {
    let f = factor(n)?;
    let mut divs = vec![BigUint::one()];
    let mut i = 0;
    while i < f.len() {
        let p = &f[i];
        let mult = f[i..].iter().take_while(|x| *x == p).count();
        let base = divs.clone();
        let mut pk = BigUint::one();
        for _ in 0..mult {
            pk *= p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
        i += mult;
    }
    divs.sort();
    Ok(divs)
}

/// Euler's totient from the factorization of `n`.
pub fn totient(n: &BigUint) -> Result<BigUint, FactorError> {
    let mut phi = n.clone();
    for p in distinct_prime_factors(n)? {
        phi = phi / &p * (&p - 1u32);
    }
    Ok(phi)
}

/// A prime `q = c*M + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionPrime {
    pub modulus: BigUint,
    pub multiplier: BigUint,
    pub q: BigUint,
}

impl ProgressionPrime {
    /// `Some` iff `c*M + 1` is prime.
    pub fn try_new(modulus: &BigUint, multiplier: &BigUint) -> Option<Self> {
        let q = modulus * multiplier + 1u32;
        is_prime(&q).then(|| ProgressionPrime {
            modulus: modulus.clone(),
            multiplier: multiplier.clone(),
            q,
        })
    }
}

/// Bound on the multiplier `c` from Linnik's theorem: `c <= M^{C0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinnikConfig {
    pub c0: f64,
    pub cap_override: Option<BigUint>,
}

impl Default for LinnikConfig {
    fn default() -> Self {
        LinnikConfig { c0: 5.5, cap_override: None }
    }
}

impl LinnikConfig {
    /// `min(floor(M^{C0}), override)`, at least 1.
    pub fn multiplier_cap(&self, modulus: &BigUint) -> BigUint {
        assert!(self.c0 >= 1.0, "Linnik exponent must be at least 1");
        let linnik = if modulus.is_one() {
            BigUint::one()
        } else {
            pow_real(modulus, self.c0)
        };
        let cap = match &self.cap_override {
            Some(o) => linnik.min(o.clone()),
            None => linnik,
        };
        cap.max(BigUint::one())
    }
}

/// Approximate `floor(m^e)` for real `e`; exact for integral `e`.
fn pow_real(m: &BigUint, e: f64) -> BigUint {
    if e.fract() == 0.0 {
        return m.pow(e as u32);
    }
    let whole = m.pow(e.trunc() as u32);
    let frac = crate::real::pow_frac_floor(m, e.fract());
    whole * frac
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PrimeSearchError {
    #[error("no prime c*{modulus}+1 for c in [{first}, {last}]")]
    CapExhausted { modulus: BigUint, first: BigUint, last: BigUint },
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// Smallest `c` with `q = cM + 1` prime and `q > lower_bound`, scanning `c`
/// upward to the Linnik cap.
pub fn find_progression_prime(
    modulus: &BigUint,
    lower_bound: &BigUint,
    config: &LinnikConfig,
) -> Result<ProgressionPrime, PrimeSearchError> {
    find_progression_prime_with(modulus, lower_bound, config, ExecPolicy::default())
}

pub fn find_progression_prime_with(
    modulus: &BigUint,
    lower_bound: &BigUint,
    config: &LinnikConfig,
    policy: ExecPolicy,
) -> Result<ProgressionPrime, PrimeSearchError> {
    if modulus.is_zero() {
        return Err(PrimeSearchError::ZeroModulus);
    }
    // cM + 1 > lb  <=>  c >= ceil(lb / M)
    let first = Integer::div_ceil(lower_bound, modulus).max(BigUint::one());
    let last = config.multiplier_cap(modulus);
    let exhausted = || PrimeSearchError::CapExhausted {
        modulus: modulus.clone(),
        first: first.clone(),
        last: last.clone(),
    };
    if first > last {
        return Err(exhausted());
    }
    let span = (&last - &first + 1u32).to_u64().unwrap_or(u64::MAX);
    exec::find_first(policy, span, |k| {
        ProgressionPrime::try_new(modulus, &(&first + k))
    })
    .map(|(_, p)| p)
    .ok_or_else(exhausted)
}

/// Result of drawing random multipliers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleOutcome {
    Found { prime: ProgressionPrime, draws: Vec<BigUint> },
    /// `J` draws, all composite.
    Failed { draws: Vec<BigUint> },
}

/// Draw up to `trials` uniform `j` in `[1, k_cap]` until `jM + 1` is prime.
pub fn sample_progression_prime<R: Rng + ?Sized>(
    modulus: &BigUint,
    k_cap: &BigUint,
    trials: &BigUint,
    rng: &mut R,
) -> SampleOutcome {
    assert!(!k_cap.is_zero() && !trials.is_zero(), "K and J must be positive");
    let upper = k_cap + 1u32;
    let one = BigUint::one();
    let mut draws = Vec::new();
    let mut count = BigUint::zero();
    while &count < trials {
        let j = rng.gen_biguint_range(&one, &upper);
        draws.push(j.clone());
        if let Some(prime) = ProgressionPrime::try_new(modulus, &j) {
            return SampleOutcome::Found { prime, draws };
        }
        count += 1u32;
    }
    SampleOutcome::Failed { draws }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootsError {
    #[error("{order} does not divide q - 1 = {q_minus_1}")]
    NotDividing { order: BigUint, q_minus_1: BigUint },
    #[error("order must be positive")]
    ZeroOrder,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("subgroup of order {0} too large to list")]
    TooLarge(BigUint),
}

/// Generator of the order-`d` subgroup of `(Z/qZ)^*`: the first `x = 2, 3, ...`
/// whose power `x^{(q-1)/d}` has order exactly `d`.
pub fn subgroup_generator(q: &BigUint, d: &BigUint) -> Result<BigUint, RootsError> {
    if d.is_zero() {
        return Err(RootsError::ZeroOrder);
    }
    let q_minus_1 = q - 1u32;
    let (cof, rem) = q_minus_1.div_rem(d);
    if !rem.is_zero() {
        return Err(RootsError::NotDividing { order: d.clone(), q_minus_1 });
    }
    if d.is_one() {
        return Ok(BigUint::one());
    }
    let primes = distinct_prime_factors(d)?;
    let mut x = BigUint::from(2u32);
    loop {
        let h = x.modpow(&cof, q);
        if primes.iter().all(|p| !h.modpow(&(d / p), q).is_one()) {
            return Ok(h);
        }
        x += 1u32;
    }
}

/// The `d` residues `t` with `t^d = 1 (mod q)`, ascending.
pub fn roots_of_unity_mod(q: &BigUint, d: &BigUint) -> Result<Vec<BigUint>, RootsError> {
    let g = subgroup_generator(q, d)?;
    let count = d.to_usize().filter(|&c| c <= 1 << 26).ok_or_else(|| RootsError::TooLarge(d.clone()))?;
    let mut out = Vec::with_capacity(count);
    let mut x = BigUint::one();
    for _ in 0..count {
        out.push(x.clone());
        x = (x * &g) % q;
    }
    out.sort();
    Ok(out)
}
