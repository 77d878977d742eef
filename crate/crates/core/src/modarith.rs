//! Arithmetic in prime fields `Z/qZ`.
//!
//! [`PrimeField`] abstracts over a word-sized modulus ([`SmallField`], with
//! `u128` products) and an arbitrary-precision one ([`BigField`]). Sweeps and
//! evaluators are generic over it so the common desk-scale case never touches
//! the allocator.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for word-sized operands.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let g = a.extended_gcd(&m);
    if !g.gcd.is_one() {
        return None;
    }
    g.x.mod_floor(&m).to_biguint()
}

/// Reduce a signed big integer into `[0, m)`.
pub fn reduce_signed(c: &BigInt, m: &BigUint) -> BigUint {
    let r = c.magnitude() % m;
    if c.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

/// A prime field `Z/qZ`. Implementations assume `q` is prime.
/// Conversions take `&self` because they reduce modulo the field's `q`.
#[allow(clippy::wrong_self_convention)]
pub trait PrimeField: Sync + Send {
    type Elem: Clone + Send + Sync + PartialEq + std::fmt::Debug;

    fn modulus(&self) -> BigUint;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_biguint(&self, a: &BigUint) -> Self::Elem;
    fn from_bigint(&self, a: &BigInt) -> Self::Elem;
    fn from_u64(&self, a: u64) -> Self::Elem;
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;
    /// `a^e` with a word-sized exponent.
    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem;
    /// `(q - 1) / k`, or `None` if `k` does not divide `q - 1`.
    fn cofactor(&self, k: &BigUint) -> Option<BigUint> {
        let (quo, rem) = (self.modulus() - 1u32).div_rem(k);
        rem.is_zero().then_some(quo)
    }

    /// `a^e` for an arbitrary exponent. Nonzero bases reduce `e` modulo
    /// `q - 1`; `0^0 = 1` and `0^e = 0` otherwise.
    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        if self.is_zero(a) {
            return if e.is_zero() { self.one() } else { self.zero() };
        }
        let order = self.modulus() - 1u32;
        let e = e % &order;
        match e.to_u64() {
            Some(small) => self.pow_u64(a, small),
            None => self.from_biguint(&self.to_biguint(a).modpow(&e, &self.modulus())),
        }
    }
}

/// `Z/qZ` with `q < 2^64`.
#[derive(Debug, Clone, Copy)]
pub struct SmallField {
    pub q: u64,
}

impl PrimeField for SmallField {
    type Elem = u64;

    fn modulus(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.q
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.q as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            ((*a as u128 + self.q as u128 - *b as u128) % self.q as u128) as u64
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.q)
    }
    fn from_biguint(&self, a: &BigUint) -> u64 {
        (a % self.q).to_u64().expect("residue fits in u64")
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        reduce_signed(a, &BigUint::from(self.q))
            .to_u64()
            .expect("residue fits in u64")
    }
    fn from_u64(&self, a: u64) -> u64 {
        a % self.q
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
    fn pow_u64(&self, a: &u64, e: u64) -> u64 {
        pow_mod(*a, e, self.q)
    }
}

/// `Z/qZ` for arbitrary `q`.
#[derive(Debug, Clone)]
pub struct BigField {
    pub q: BigUint,
}

impl PrimeField for BigField {
    type Elem = BigUint;

    fn modulus(&self) -> BigUint {
        self.q.clone()
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.q
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.q
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a + &self.q) - b) % &self.q
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.q
    }
    fn from_biguint(&self, a: &BigUint) -> BigUint {
        a % &self.q
    }
    fn from_bigint(&self, a: &BigInt) -> BigUint {
        reduce_signed(a, &self.q)
    }
    fn from_u64(&self, a: u64) -> BigUint {
        BigUint::from(a) % &self.q
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
    fn pow_u64(&self, a: &BigUint, e: u64) -> BigUint {
        a.modpow(&BigUint::from(e), &self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_fields_agree() {
        let small = SmallField { q: 258623 };
        let big = BigField { q: BigUint::from(258623u32) };
        for (a, e) in [(3u64, 2842u64), (0, 0), (0, 5), (258622, 258621), (17, 1 << 40)] {
            let e_big = BigUint::from(e);
            let s = small.pow(&a, &e_big);
            let b = big.pow(&BigUint::from(a), &e_big);
            assert_eq!(BigUint::from(s), b, "a={a} e={e}");
        }
        assert_eq!(small.sub(&3, &5), 258621);
        assert_eq!(small.from_bigint(&BigInt::from(-1)), 258622);
    }

    #[test]
    fn zero_base_conventions() {
        let f = SmallField { q: 7 };
        assert_eq!(f.pow(&0, &BigUint::zero()), 1);
        assert_eq!(f.pow(&0, &BigUint::from(6u32)), 0);
        assert_eq!(f.pow(&5, &BigUint::from(6u32)), 1);
    }

    #[test]
    fn inverse() {
        let m = BigUint::from(97u32);
        let inv = inv_mod(&BigUint::from(5u32), &m).unwrap();
        assert_eq!((inv * 5u32) % m, BigUint::one());
        assert!(inv_mod(&BigUint::from(6u32), &BigUint::from(9u32)).is_none());
    }
}
