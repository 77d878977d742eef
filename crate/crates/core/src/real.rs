//! Outward-rounded interval arithmetic on fixed-point big integers.
//!
//! Used to turn real-valued bounds such as `e^{C^2}` or `log(6) log^C(KM)`
//! into the smallest integer strictly above them. An [`Interval`] at precision
//! `p` holds integers `lo <= hi` and stands for the real interval
//! `[lo / 2^p, hi / 2^p]`; every operation returns an interval containing all
//! possible exact results.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Extra bits carried inside `ln` and `exp`.
const GUARD: u32 = 64;
/// Precisions tried by [`smallest_integer_above`].
const PRECISIONS: [u32; 6] = [256, 512, 1024, 2048, 4096, 8192];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RealError {
    #[error("logarithm of an interval that is not strictly positive")]
    LogDomain,
    #[error("value too close to an integer to round at {0} bits")]
    Ambiguous(u32),
}

fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << k))
}

fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    -floor_shr(&-x, k)
}

impl Interval {
    pub fn int(n: impl Into<BigInt>, prec: u32) -> Interval {
        let v = n.into() << prec;
        Interval { lo: v.clone(), hi: v, prec }
    }

    /// Encloses the exact binary value of `x`.
    pub fn from_f64(x: f64, prec: u32) -> Interval {
        assert!(x.is_finite(), "non-finite real");
        if x == 0.0 {
            return Interval::int(0, prec);
        }
        let bits = x.abs().to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), raw_exp - 1075)
        };
        let mut m = BigInt::from(mant);
        if x < 0.0 {
            m = -m;
        }
        let shift = exp + prec as i64;
        if shift >= 0 {
            Interval::exact(m << shift as u32, prec)
        } else {
            let k = (-shift) as u32;
            Interval { lo: floor_shr(&m, k), hi: ceil_shr(&m, k), prec }
        }
    }

    fn exact(v: BigInt, prec: u32) -> Interval {
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, prec: self.prec }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval { lo: floor_shr(min, self.prec), hi: ceil_shr(max, self.prec), prec: self.prec }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Interval {
        let k = k.into();
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        Interval { lo: a.clone().min(b.clone()), hi: a.max(b), prec: self.prec }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec,
        }
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::int(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn ln(&self) -> Result<Interval, RealError> {
        if !self.lo.is_positive() {
            return Err(RealError::LogDomain);
        }
        let (lo, _) = ln_point(&self.lo, self.prec);
        let (_, hi) = ln_point(&self.hi, self.prec);
        Ok(Interval { lo, hi, prec: self.prec })
    }

    pub fn exp(&self) -> Interval {
        let (lo, _) = exp_point(&self.lo, self.prec);
        let (_, hi) = exp_point(&self.hi, self.prec);
        Interval { lo: lo.max(BigInt::zero()), hi, prec: self.prec }
    }

    /// `self^e = exp(e ln self)` for a positive base.
    pub fn powf(&self, e: &Interval) -> Result<Interval, RealError> {
        Ok(e.mul(&self.ln()?).exp())
    }

    pub fn floor_lo(&self) -> BigInt {
        floor_shr(&self.lo, self.prec)
    }

    pub fn floor_hi(&self) -> BigInt {
        floor_shr(&self.hi, self.prec)
    }

    /// Midpoint as `f64`, for diagnostics.
    pub fn approx(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) >> 1u32;
        let shift = mid.bits().saturating_sub(60) as u32;
        let top = (&mid >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.prec as i32)
    }

    pub fn width_bits(&self) -> u64 {
        (&self.hi - &self.lo).bits()
    }
}

/// Smallest integer `N` with `N > x`, where `f(p)` encloses `x` at precision
/// `p`. The precision is raised until the enclosure pins down `floor(x)`.
pub fn smallest_integer_above<F>(f: F) -> Result<BigInt, RealError>
where
    F: Fn(u32) -> Result<Interval, RealError>,
{
    let mut last = 0;
    for &p in &PRECISIONS {
        let iv = f(p)?;
        let (a, b) = (iv.floor_lo(), iv.floor_hi());
        if a == b {
            return Ok(a + 1);
        }
        last = p;
    }
    Err(RealError::Ambiguous(last))
}

/// Bound on the truncation error, in units of `2^-w`, of the series below and
/// of `ln 2`: each series has fewer than `w` terms, each off by at most 2 units.
fn series_error(w: u32) -> BigInt {
    BigInt::from(8 * (w as u64 + 8))
}

/// `ln 2` at scale `2^w`.
fn ln2_scaled(w: u32) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    let third = (BigInt::one() << w) / 3;
    atanh_scaled(&third, w) << 1u32
}

/// `atanh(s)` for `0 <= s <= 1/3` at scale `2^w`.
fn atanh_scaled(s: &BigInt, w: u32) -> BigInt {
    let s2 = (s * s) >> w;
    let mut power = s.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        sum += &power / k;
        power = (&power * &s2) >> w;
        k += 2;
    }
    sum
}

/// Enclosure of `ln(x / 2^p)` for integer `x > 0`, returned as `(lo, hi)` at
/// scale `2^p`.
fn ln_point(x: &BigInt, p: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << p;
    if *x == one {
        return (BigInt::zero(), BigInt::zero());
    }
    let w = p + GUARD;
    let top = x.bits() - 1;
    // x / 2^p = m 2^k with m in [1, 2)
    let k = top as i64 - p as i64;
    let m = if top <= w as u64 { x << (w as u64 - top) } else { x >> (top - w as u64) };
    let unit = BigInt::one() << w;
    let s = ((&m - &unit) << w) / (&m + &unit);
    let mid = (atanh_scaled(&s, w) << 1u32) + ln2_scaled(w) * k;
    let err = BigInt::from(k.unsigned_abs() + 3) * series_error(w);
    (floor_shr(&(&mid - &err), GUARD), ceil_shr(&(&mid + &err), GUARD))
}

/// Enclosure of `exp(x / 2^p)` at scale `2^p`.
fn exp_point(x: &BigInt, p: u32) -> (BigInt, BigInt) {
    if x.is_zero() {
        let one = BigInt::one() << p;
        return (one.clone(), one);
    }
    let w = p + GUARD;
    let xw = x << GUARD;
    let ln2 = ln2_scaled(w);
    // x = k ln 2 + r with |r| < 1
    let k = xw.div_floor(&ln2);
    let r = &xw - &k * &ln2;
    let unit = BigInt::one() << w;
    let mut term = unit.clone();
    let mut sum = BigInt::zero();
    let mut n = 1u32;
    while !term.is_zero() {
        sum += &term;
        term = ((&term * &r) >> w) / n;
        n += 1;
    }
    let k_abs = k.magnitude().clone();
    let k_i64 = k.to_i64().expect("exponent of exp out of range");
    // sum = e^r at scale 2^w; the result is sum 2^k at scale 2^p
    let shift = k_i64 - GUARD as i64;
    let mid = if shift >= 0 { sum << shift as u64 } else { floor_shr(&sum, (-shift) as u32) };
    // sum >= 1, so the relative error is below (|k| + 1) series_error / 2^w
    let factor = BigInt::from_biguint(Sign::Plus, k_abs + 1u32) * series_error(w);
    let err = ((mid.abs() * factor) >> w) + 2;
    (&mid - &err, &mid + &err)
}

/// `floor(m^f)` for `0 <= f < 1`, rounding up when `m^f` is within the
/// enclosure width of an integer. Used for search caps only.
pub fn pow_frac_floor(m: &BigUint, f: f64) -> BigUint {
    let p = 128;
    let base = Interval::int(BigInt::from(m.clone()), p);
    let v = base.powf(&Interval::from_f64(f, p)).expect("positive base");
    v.floor_hi().to_biguint().unwrap_or_default().max(BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encloses(iv: &Interval, x: f64) -> bool {
        let lo = iv.lo.to_f64().unwrap() / 2f64.powi(iv.prec as i32);
        let hi = iv.hi.to_f64().unwrap() / 2f64.powi(iv.prec as i32);
        let slack = x.abs() * 1e-15 + 1e-300;
        lo - slack <= x && x <= hi + slack
    }

    #[test]
    fn constants() {
        let p = 256;
        let two = Interval::int(2, p);
        let ln2 = two.ln().unwrap();
        assert!(encloses(&ln2, std::f64::consts::LN_2));
        assert!(ln2.width_bits() < 16);
        let e = Interval::int(1, p).exp();
        assert!(encloses(&e, std::f64::consts::E));
        assert_eq!(Interval::int(1, p).ln().unwrap(), Interval::int(0, p));
    }

    #[test]
    fn ln_and_exp_agree_with_f64() {
        let p = 256;
        for x in [3u64, 10, 1000, 123456789, 1 << 50] {
            let iv = Interval::int(x, p).ln().unwrap();
            assert!(encloses(&iv, (x as f64).ln()), "ln {x}");
        }
        for x in [-5.5f64, -0.25, 0.5, 1.5, 10.0, 100.0] {
            let iv = Interval::from_f64(x, p).exp();
            assert!(encloses(&iv, x.exp()), "exp {x}");
        }
        let small = Interval::from_f64(0.1, p).ln().unwrap();
        assert!(encloses(&small, 0.1f64.ln()));
    }

    #[test]
    fn exp_of_ln_is_identity() {
        let p = 512;
        for x in [2u64, 7, 1_000_003] {
            let iv = Interval::int(x, p).ln().unwrap().exp();
            assert_eq!(smallest_integer_above(|_| Ok(iv.sub(&Interval::from_f64(0.5, p)))).unwrap(), BigInt::from(x));
        }
    }

    #[test]
    fn rounding_to_integers() {
        // 36 ln^2 3 = 43.45...
        let v = smallest_integer_above(|p| {
            let l = Interval::int(3, p).ln()?;
            Ok(l.mul(&l).mul_int(36))
        })
        .unwrap();
        assert_eq!(v, BigInt::from(44));
        // e^{1} -> 3, ln 6 * ln 3 = 1.968 -> 2
        assert_eq!(smallest_integer_above(|p| Ok(Interval::int(1, p).exp())).unwrap(), BigInt::from(3));
        let j = smallest_integer_above(|p| Ok(Interval::int(6, p).ln()?.mul(&Interval::int(3, p).ln()?))).unwrap();
        assert_eq!(j, BigInt::from(2));
        // an exact integer rounds up to the next one
        assert_eq!(smallest_integer_above(|p| Ok(Interval::int(7, p))).unwrap(), BigInt::from(8));
    }

    #[test]
    fn negative_and_domain() {
        let p = 128;
        assert_eq!(Interval::int(0, p).ln(), Err(RealError::LogDomain));
        let v = Interval::from_f64(-2.5, p);
        assert_eq!(v.floor_lo(), BigInt::from(-3));
        assert_eq!(v.mul(&v).floor_lo(), BigInt::from(6));
    }

    #[test]
    fn fractional_powers() {
        assert_eq!(pow_frac_floor(&BigUint::from(4u32), 0.5), BigUint::from(2u32));
        let v = pow_frac_floor(&BigUint::from(1000u32), 0.5);
        assert_eq!(v, BigUint::from(31u32));
    }
}
