//! Exact ground truth for small instances.
//!
//! Everything here works with dense univariate polynomials over `Z` and the
//! factorization `x^M - 1 = prod_{d | M} Phi_d`. A point whose coordinates are
//! `M`-th roots of unity is encoded by exponents of a fixed primitive root
//! `w_M`, and a polynomial vanishes there iff `Phi_M` divides the univariate
//! polynomial obtained by substituting `x_i = t^{a_i}` and reducing mod
//! `t^M - 1`. None of this shares code with the prime-field fast paths.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::SparsePoly;
use crate::primes;
use crate::torsion::TorsionInstance;

/// Default bound on the number of points [`brute_force_torsion`] visits.
pub const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{points} points exceed the enumeration cap {cap}")]
    CapExceeded { points: BigUint, cap: u64 },
    #[error("order {0} is too large for dense arithmetic")]
    TooLarge(BigUint),
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("{q} is not a prime congruent to 1 mod {d}")]
    NotExceptionalCandidate { q: BigUint, d: BigUint },
    #[error("resultant with the zero polynomial")]
    ZeroPolynomial,
    #[error("index vector has {got} entries, system has {expected} variables")]
    Arity { expected: usize, got: usize },
}

/// Dense univariate integer polynomial, lowest degree first, no trailing
/// zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DensePoly {
    coeffs: Vec<BigInt>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] += 1;
        Self::new(c)
    }

    /// Dense form of a univariate sparse polynomial.
    pub fn from_sparse(f: &SparsePoly) -> Result<Self, OracleError> {
        if f.num_vars() != 1 {
            return Err(OracleError::NotUnivariate(f.num_vars()));
        }
        let deg = f.total_degree();
        let n = deg.to_usize().filter(|&n| n <= 1 << 24).ok_or(OracleError::TooLarge(deg))?;
        let mut c = vec![BigInt::zero(); n + 1];
        for (e, v) in f.terms() {
            c[e[0].to_usize().unwrap()] += v;
        }
        Ok(Self::new(c))
    }

    /// `sum c_e t^{<a, e> mod m}` for a polynomial in any number of
    /// variables: the image of `f(t^{a_1}, ..., t^{a_n})` in `Z[t]/(t^m - 1)`.
    pub fn fold_exponents(f: &SparsePoly, a: &[BigUint], m: usize) -> Self {
        let mb = BigUint::from(m);
        let mut c = vec![BigInt::zero(); m];
        for (e, v) in f.terms() {
            let dot: BigUint = e.iter().zip(a).map(|(x, y)| x * y).sum::<BigUint>() % &mb;
            c[dot.to_usize().unwrap()] += v;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn mul(&self, o: &DensePoly) -> DensePoly {
        if self.is_zero() || o.is_zero() {
            return DensePoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        DensePoly::new(c)
    }

    /// `self * (x^d - 1)`
    fn mul_binomial(&self, d: usize) -> DensePoly {
        let mut c = vec![BigInt::zero(); self.coeffs.len() + d];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i + d] += a;
            c[i] -= a;
        }
        DensePoly::new(c)
    }

    /// `self / (x^d - 1)`, which must be exact.
    fn div_binomial(&self, d: usize) -> DensePoly {
        let n = self.coeffs.len();
        assert!(n > d, "division by x^{d} - 1 is not exact");
        // p_i = q_{i-d} - q_i
        let mut q = vec![BigInt::zero(); n - d];
        for i in 0..n - d {
            let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
            q[i] = prev - &self.coeffs[i];
        }
        let out = DensePoly::new(q);
        debug_assert_eq!(out.mul_binomial(d), *self, "inexact binomial division");
        out
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &DensePoly) -> DensePoly {
        let dm = m.degree().expect("nonzero divisor");
        assert!(m.lc().is_one(), "divisor must be monic");
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                for (j, mc) in m.coeffs.iter().enumerate() {
                    r[top - dm + j] -= &c * mc;
                }
            }
            r.pop();
        }
        DensePoly::new(r)
    }

    /// Quotient by a monic polynomial, asserting an exact division.
    pub fn div_exact_monic(&self, m: &DensePoly) -> Option<DensePoly> {
        let dm = m.degree().expect("nonzero divisor");
        assert!(m.lc().is_one(), "divisor must be monic");
        if self.is_zero() {
            return Some(DensePoly::zero());
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - dm];
        for top in (dm..r.len()).rev() {
            let c = r[top].clone();
            if c.is_zero() {
                continue;
            }
            for (j, mc) in m.coeffs.iter().enumerate() {
                r[top - dm + j] -= &c * mc;
            }
            q[top - dm] = c;
        }
        r.iter().all(Zero::is_zero).then(|| DensePoly::new(q))
    }

    /// `lc(b)^{deg a - deg b + 1} a mod b`.
    fn pseudo_rem(&self, b: &DensePoly) -> DensePoly {
        let db = b.degree().expect("nonzero divisor");
        let Some(da) = self.degree() else { return DensePoly::zero() };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while r.degree().is_some_and(|d| d >= db) {
            let top = r.coeffs.len() - 1;
            let c = r.coeffs[top].clone();
            for x in r.coeffs.iter_mut() {
                *x *= lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r.coeffs[top - db + j] -= &c * bc;
            }
            r = DensePoly::new(r.coeffs);
            e -= 1;
        }
        let scale = num_traits::pow(lb.clone(), e);
        DensePoly::new(r.coeffs.into_iter().map(|x| x * &scale).collect())
    }

    fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_scalar(&self, k: &BigInt) -> DensePoly {
        DensePoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!(c.is_multiple_of(k), "inexact scalar division");
                    c / k
                })
                .collect(),
        )
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Evaluation at a complex number, for floating-point cross-checks.
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        self.coeffs.iter().rev().fold((0.0, 0.0), |(a, b), c| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            (a * re - b * im + c, a * im + b * re)
        })
    }
}

impl fmt::Display for DensePoly {
    /// Highest degree first in the variable `x`, e.g. `x^2 - x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.magnitude();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePoly({self})")
    }
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<usize, Arc<DensePoly>>> {
    static CACHE: std::sync::OnceLock<RwLock<HashMap<usize, Arc<DensePoly>>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}`, built by multiplying the
/// binomials with `mu = +1` and then dividing exactly by those with `mu = -1`.
/// Memoized.
pub fn cyclotomic(m: usize) -> Arc<DensePoly> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let divs: Vec<usize> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut p = DensePoly::one();
    for &d in &divs {
        if mobius(m / d) == 1 {
            p = p.mul_binomial(d);
        }
    }
    for &d in &divs {
        if mobius(m / d) == -1 {
            p = p.div_binomial(d);
        }
    }
    let p = Arc::new(p);
    cyclotomic_cache().write().unwrap().entry(m).or_insert(p).clone()
}

fn small_order(d: &BigUint) -> Result<usize, OracleError> {
    d.to_usize().filter(|&d| (1..=1 << 22).contains(&d)).ok_or_else(|| OracleError::TooLarge(d.clone()))
}

/// Does the univariate `f` vanish at a primitive `delta`-th root of unity?
pub fn vanishes_at_primitive_root(f: &SparsePoly, delta: &BigUint) -> Result<bool, OracleError> {
    if f.num_vars() != 1 {
        return Err(OracleError::NotUnivariate(f.num_vars()));
    }
    let d = small_order(delta)?;
    let folded = DensePoly::fold_exponents(f, &[BigUint::one()], d);
    Ok(folded.rem_monic(&cyclotomic(d)).is_zero())
}

/// The point `(w_M^{a_1}, ..., w_M^{a_n})` for a fixed primitive `M`-th root
/// of unity `w_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionIndexVector {
    pub m: u64,
    pub a: Vec<u64>,
}

impl fmt::Display for TorsionIndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(u64::to_string).collect();
        write!(f, "M={} a=({})", self.m, a.join(","))
    }
}

/// Does `f` vanish at the encoded point? Folds exponents into
/// `Z[t]/(t^M - 1)` and tests divisibility by `Phi_M`.
pub fn vanishes_at_index(f: &SparsePoly, idx: &TorsionIndexVector) -> Result<bool, OracleError> {
    if idx.a.len() != f.num_vars() {
        return Err(OracleError::Arity { expected: f.num_vars(), got: idx.a.len() });
    }
    let m = small_order(&BigUint::from(idx.m))?;
    let a: Vec<BigUint> = idx.a.iter().map(|&x| BigUint::from(x)).collect();
    let folded = DensePoly::fold_exponents(f, &a, m);
    Ok(folded.rem_monic(&cyclotomic(m)).is_zero())
}

/// Do all polynomials of the system vanish at the encoded point?
pub fn eval_at_torsion_point(system: &[SparsePoly], idx: &TorsionIndexVector) -> Result<bool, OracleError> {
    for f in system {
        if !vanishes_at_index(f, idx)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scans `a` in lexicographic order over `a_i in {0, M/d_i, 2M/d_i, ...}` and
/// returns the first torsion point of the instance, if any.
pub fn brute_force_torsion(inst: &TorsionInstance) -> Result<Option<TorsionIndexVector>, OracleError> {
    brute_force_torsion_capped(inst, ENUMERATION_CAP)
}

pub fn brute_force_torsion_capped(
    inst: &TorsionInstance,
    cap: u64,
) -> Result<Option<TorsionIndexVector>, OracleError> {
    let points: BigUint = inst.orders().iter().product();
    if points > BigUint::from(cap) {
        return Err(OracleError::CapExceeded { points, cap });
    }
    let m = inst.lcm_order();
    small_order(&m)?;
    let m = m.to_u64().unwrap();
    let orders: Vec<u64> = inst.orders().iter().map(|d| d.to_u64().unwrap()).collect();
    let steps: Vec<u64> = orders.iter().map(|d| m / d).collect();
    let n = orders.len();
    let mut digits = vec![0u64; n];
    loop {
        let idx = TorsionIndexVector { m, a: digits.iter().zip(&steps).map(|(k, s)| k * s).collect() };
        if eval_at_torsion_point(inst.system(), &idx)? {
            return Ok(Some(idx));
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < orders[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Brute-force check that every point of the finite subtorus
/// `{x : x_i^{d_i} = 1}` lies on `Z(prod_j f_ij)` for each `i`. Returns the
/// first point (in lexicographic order) where some product does not vanish.
pub fn brute_force_noncontained_point(
    products: &[Vec<SparsePoly>],
    orders: &[BigUint],
    cap: u64,
) -> Result<Option<TorsionIndexVector>, OracleError> {
    let points: BigUint = orders.iter().product();
    if points > BigUint::from(cap) {
        return Err(OracleError::CapExceeded { points, cap });
    }
    let m = orders.iter().fold(BigUint::one(), |a, d| a.lcm(d));
    small_order(&m)?;
    let m = m.to_u64().unwrap();
    let orders: Vec<u64> = orders.iter().map(|d| d.to_u64().unwrap()).collect();
    let n = orders.len();
    let mut digits = vec![0u64; n];
    loop {
        let idx = TorsionIndexVector { m, a: digits.iter().zip(&orders).map(|(k, d)| k * (m / d)).collect() };
        for factors in products {
            let mut vanishes = false;
            for f in factors {
                if vanishes_at_index(f, &idx)? {
                    vanishes = true;
                    break;
                }
            }
            if !vanishes {
                return Ok(Some(idx));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < orders[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `Res(a, b)` by the subresultant algorithm.
pub fn resultant(a: &DensePoly, b: &DensePoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            s = -s;
        }
    }
    let (ca, cb) = (a.content(), b.content());
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    let t = num_traits::pow(ca.clone(), db) * num_traits::pow(cb.clone(), da);
    a = a.div_scalar(&ca);
    b = b.div_scalar(&cb);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        if db == 0 {
            // Res(a, c) = c^{deg a} for a constant c, scaled by the sequence
            let lb = b.lc().clone();
            let h_final = if da == 0 {
                BigInt::one()
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h.clone(), da - 1)
            };
            return s * t * h_final;
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.div_scalar(&divisor);
        g = a.lc().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

/// `Res(f, x^M - 1)` with its sign reported separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicResultant {
    pub magnitude: BigUint,
    /// `-1`, `0` or `1`.
    pub sign: i8,
}

impl CyclicResultant {
    pub fn value(&self) -> BigInt {
        let v = BigInt::from(self.magnitude.clone());
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

/// `Res(f, x^M - 1) = (-1)^{M deg f} prod_{d | M} Res(Phi_d, f mod Phi_d)`.
pub fn cyclic_resultant(f: &SparsePoly, m: &BigUint) -> Result<CyclicResultant, OracleError> {
    if f.num_vars() != 1 {
        return Err(OracleError::NotUnivariate(f.num_vars()));
    }
    if f.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    let mu = small_order(m)?;
    let deg_f = f.total_degree();
    let mut value = BigInt::one();
    for d in (1..=mu).filter(|d| mu % d == 0) {
        let phi = cyclotomic(d);
        let r = DensePoly::fold_exponents(f, &[BigUint::one()], d).rem_monic(&phi);
        value *= resultant(&phi, &r);
        if value.is_zero() {
            break;
        }
    }
    if (deg_f * m).is_odd() {
        value = -value;
    }
    let sign = match value.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    Ok(CyclicResultant { magnitude: value.magnitude().clone(), sign })
}

/// Could reduction mod `q` fake a torsion point of `f` of order dividing `d`?
/// True iff `q | Res(f, x^d - 1)`.
pub fn exceptional_prime_check(f: &SparsePoly, d: &BigUint, q: &BigUint) -> Result<bool, OracleError> {
    let congruent = !d.is_zero() && q % d == BigUint::one() % d;
    if !congruent || !primes::is_prime(q) {
        return Err(OracleError::NotExceptionalCandidate { q: q.clone(), d: d.clone() });
    }
    let res = cyclic_resultant(f, d)?;
    Ok((&res.magnitude % q).is_zero())
}

/// Sylvester-matrix resultant, an independent check of [`resultant`].
pub fn sylvester_resultant(a: &DensePoly, b: &DensePoly) -> BigInt {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else { return BigInt::zero() };
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for (i, row) in rows.iter_mut().enumerate().take(n) {
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    crate::lattice::IntMatrix::from_rows(&rows).unwrap().det()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> SparsePoly {
        SparsePoly::parse(s, n).unwrap()
    }

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(*cyclotomic(1), DensePoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6).to_string(), "x^2 - x + 1");
        let prod = (1..=12).filter(|d| 12 % d == 0).fold(DensePoly::one(), |acc, d| acc.mul(&cyclotomic(d)));
        assert_eq!(prod, DensePoly::x_pow_minus_one(12));
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn primitive_root_vanishing() {
        assert!(vanishes_at_primitive_root(&p("x^2 + x + 1", 1), &b(3)).unwrap());
        assert!(vanishes_at_primitive_root(&p("x - 1", 1), &b(1)).unwrap());
        assert!(!vanishes_at_primitive_root(&p("x - 1", 1), &b(2)).unwrap());
        assert!(vanishes_at_primitive_root(&p("x^1000001 + 1", 1), &b(2)).unwrap());
    }

    #[test]
    fn torsion_point_evaluation() {
        let f = vec![p("1 + x + y", 2)];
        assert!(eval_at_torsion_point(&f, &TorsionIndexVector { m: 3, a: vec![1, 2] }).unwrap());
        assert!(!eval_at_torsion_point(&f, &TorsionIndexVector { m: 3, a: vec![0, 0] }).unwrap());
        assert!(eval_at_torsion_point(&[p("x - 1", 1)], &TorsionIndexVector { m: 4, a: vec![0] }).unwrap());
    }

    #[test]
    fn brute_force_examples() {
        let inst = TorsionInstance::new(vec![p("1 + x + y", 2)], vec![b(3), b(3)]).unwrap();
        assert_eq!(brute_force_torsion(&inst).unwrap(), Some(TorsionIndexVector { m: 3, a: vec![1, 2] }));
        let inst = TorsionInstance::new(vec![p("x^2 + 1", 1)], vec![b(2)]).unwrap();
        assert_eq!(brute_force_torsion(&inst).unwrap(), None);
        let inst = TorsionInstance::new(vec![p("x - 1", 1)], vec![b(2_000_000)]).unwrap();
        assert!(matches!(brute_force_torsion(&inst), Err(OracleError::CapExceeded { .. })));
    }

    #[test]
    fn small_resultants() {
        let x_minus_2 = DensePoly::from_i64(&[-2, 1]);
        let x2_minus_1 = DensePoly::from_i64(&[-1, 0, 1]);
        assert_eq!(resultant(&x_minus_2, &x2_minus_1), BigInt::from(3));
        assert_eq!(sylvester_resultant(&x_minus_2, &x2_minus_1), BigInt::from(3));
        for m in 1..8u64 {
            assert_eq!(cyclic_resultant(&p("x - 1", 1), &b(m)).unwrap().sign, 0);
        }
        let r = cyclic_resultant(&p("x - 2", 1), &b(2)).unwrap();
        assert_eq!(r.value(), BigInt::from(3));
    }

    #[test]
    fn subresultant_matches_sylvester() {
        let polys = [
            DensePoly::from_i64(&[3, 0, -2, 5]),
            DensePoly::from_i64(&[1, 1, 1]),
            DensePoly::from_i64(&[-4, 7, 0, 0, 2]),
            DensePoly::from_i64(&[6]),
            DensePoly::from_i64(&[0, 2, 4]),
            DensePoly::from_i64(&[12, -8, 0, 2, 0, 6]),
        ];
        for a in &polys {
            for c in &polys {
                assert_eq!(resultant(a, c), sylvester_resultant(a, c), "{a} / {c}");
            }
        }
    }

    #[test]
    fn exceptional_prime_preconditions() {
        let f = p("x - 2", 1);
        assert!(exceptional_prime_check(&f, &b(2), &b(3)).unwrap());
        assert!(!exceptional_prime_check(&f, &b(2), &b(5)).unwrap());
        assert!(exceptional_prime_check(&f, &b(2), &b(4)).is_err());
        assert!(exceptional_prime_check(&f, &b(3), &b(11)).is_err());
    }
}
