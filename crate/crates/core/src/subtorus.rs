//! Subtorus containment: is `T = {x : x_i^{d_i} = 1, i <= r}` contained in
//! `Z(prod_j f_{1,j}, ..., prod_j f_{k,j})`?
//!
//! Two deciders are provided. [`contains_subtorus_deterministic`] reduces
//! each product's exponents modulo the orders and checks for the zero
//! polynomial. [`find_certificate`] works over `Z/qZ` for a prime
//! `q = cM + 1` and looks for a point `t` of the torus where some product is
//! nonzero after the substitution `x_i = t_i^{(q-1)/d_i}`. When `q` exceeds
//! the norm and degree bounds of [`AlgorithmParams`] the two agree: a product
//! whose reduction is nonzero cannot vanish at every such point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use num_bigint::RandBigInt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::{self, ExecPolicy};
use crate::lattice::{self, DiagonalSubtorus, MatrixError, ShiftPolicy, TransformError};
use crate::modarith::{BigField, PrimeField, SmallField};
use crate::poly::{reduced_product, FieldPoly, ReductionModulus, SparsePoly};
use crate::primes::{self, LinnikConfig, PrimeSearchError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SubtorusError {
    #[error("product {0} has no factors")]
    EmptyProduct(usize),
    #[error("system has no products")]
    EmptySystem,
    #[error("product {product}, factor {factor}: {got} variables, expected {expected}")]
    Arity { product: usize, factor: usize, expected: usize, got: usize },
    #[error("{orders} orders for {num_vars} variables")]
    TooManyOrders { orders: usize, num_vars: usize },
    #[error("order d_{0} must be positive")]
    ZeroOrder(usize),
    #[error("{q} = {c}*{m} + 1 is not prime")]
    NotPrime { q: BigUint, c: BigUint, m: BigUint },
    #[error("pinned q = {q}: q - 1 is not a multiple of lcm(d) = {lcm}")]
    BadPinnedPrime { q: BigUint, lcm: BigUint },
    #[error(transparent)]
    PrimeSearch(#[from] PrimeSearchError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Products `prod_j f_{i,j}` for `i = 1..k`, kept factored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSystem {
    num_vars: usize,
    products: Vec<Vec<SparsePoly>>,
}

impl ProductSystem {
    pub fn new(products: Vec<Vec<SparsePoly>>) -> Result<Self, SubtorusError> {
        let first = products.first().ok_or(SubtorusError::EmptySystem)?;
        let num_vars = first.first().ok_or(SubtorusError::EmptyProduct(1))?.num_vars();
        for (i, factors) in products.iter().enumerate() {
            if factors.is_empty() {
                return Err(SubtorusError::EmptyProduct(i + 1));
            }
            for (j, f) in factors.iter().enumerate() {
                if f.num_vars() != num_vars {
                    return Err(SubtorusError::Arity {
                        product: i + 1,
                        factor: j + 1,
                        expected: num_vars,
                        got: f.num_vars(),
                    });
                }
            }
        }
        Ok(ProductSystem { num_vars, products })
    }

    /// One single-factor product per polynomial.
    pub fn from_polys(polys: Vec<SparsePoly>) -> Result<Self, SubtorusError> {
        Self::new(polys.into_iter().map(|f| vec![f]).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn products(&self) -> &[Vec<SparsePoly>] {
        &self.products
    }

    /// Step 0: replace every factor by its reduction.
    pub fn reduce(&self, modulus: &ReductionModulus) -> ProductSystem {
        ProductSystem {
            num_vars: self.num_vars,
            products: self
                .products
                .iter()
                .map(|fs| fs.iter().map(|f| f.reduce_exponents(modulus)).collect())
                .collect(),
        }
    }

    fn map_factors<F>(&self, f: F) -> Result<ProductSystem, SubtorusError>
    where
        F: Fn(&SparsePoly) -> Result<SparsePoly, SubtorusError>,
    {
        let products = self
            .products
            .iter()
            .map(|fs| fs.iter().map(&f).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProductSystem { num_vars: self.num_vars, products })
    }
}

fn check_orders(sys: &ProductSystem, orders: &[BigUint]) -> Result<ReductionModulus, SubtorusError> {
    if orders.len() > sys.num_vars {
        return Err(SubtorusError::TooManyOrders { orders: orders.len(), num_vars: sys.num_vars });
    }
    if let Some(i) = orders.iter().position(Zero::is_zero) {
        return Err(SubtorusError::ZeroOrder(i + 1));
    }
    Ok(ReductionModulus::diagonal(orders, sys.num_vars))
}

fn lcm_of(orders: &[BigUint]) -> BigUint {
    orders.iter().fold(BigUint::one(), |a, d| a.lcm(d))
}

/// The quantities of Step 1 of the containment algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    /// `N = max_i prod_j ||f_{i,j}||_1`.
    pub norm_bound: BigUint,
    /// `D = 2 + max(max_j d_j, max over i and free j of sum_s deg_{x_j} f_{i,s})`.
    pub degree_bound: BigUint,
    /// `M = ceil(max(N, D) / L) L`.
    pub modulus: BigUint,
    pub orders: Vec<BigUint>,
    /// `L = lcm(d)`.
    pub lcm: BigUint,
    /// 1-based indices of products with a zero factor; they vanish identically.
    pub zero_products: Vec<usize>,
}

/// Evaluates the Step 1 formulas on `sys` as given (no reduction).
pub fn compute_params(sys: &ProductSystem, orders: &[BigUint]) -> Result<AlgorithmParams, SubtorusError> {
    check_orders(sys, orders)?;
    let r = orders.len();
    let norm_bound = sys
        .products
        .iter()
        .map(|fs| fs.iter().map(SparsePoly::one_norm).product::<BigUint>())
        .max()
        .unwrap_or_default();
    let mut inner = orders.iter().max().cloned().unwrap_or_default();
    for fs in &sys.products {
        for j in r..sys.num_vars {
            let sum: BigUint = fs.iter().map(|f| f.degree_in(j).expect("index in range")).sum();
            inner = inner.max(sum);
        }
    }
    let degree_bound = inner + 2u32;
    let lcm = lcm_of(orders);
    let top = (&norm_bound).max(&degree_bound).clone();
    let modulus = Integer::div_ceil(&top, &lcm) * &lcm;
    let zero_products = sys
        .products
        .iter()
        .enumerate()
        .filter(|(_, fs)| fs.iter().any(SparsePoly::is_zero))
        .map(|(i, _)| i + 1)
        .collect();
    Ok(AlgorithmParams { norm_bound, degree_bound, modulus, orders: orders.to_vec(), lcm, zero_products })
}

/// The reduced products `bar(prod_j f_{i,j})`.
pub fn reduced_products(sys: &ProductSystem, orders: &[BigUint]) -> Result<Vec<SparsePoly>, SubtorusError> {
    let modulus = check_orders(sys, orders)?;
    Ok(sys.products.iter().map(|fs| reduced_product(fs, &modulus)).collect())
}

/// `T subset Z(...)` iff every reduced product is the zero polynomial.
pub fn contains_subtorus_deterministic(sys: &ProductSystem, orders: &[BigUint]) -> Result<bool, SubtorusError> {
    let modulus = check_orders(sys, orders)?;
    Ok(sys.products.iter().all(|fs| reduced_product(fs, &modulus).is_zero()))
}

/// `(c, q, t, i)` with product `i` nonzero at `x_j = t_j^{(q-1)/d_j}` mod `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonContainmentCertificate {
    pub c: BigUint,
    /// The `M` in `q = cM + 1`.
    pub m: BigUint,
    pub q: BigUint,
    pub t: Vec<BigUint>,
    /// 1-based product index.
    pub i: usize,
    pub value: BigUint,
}

impl NonContainmentCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "c": self.c.to_string(),
            "m": self.m.to_string(),
            "q": self.q.to_string(),
            "t": self.t.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "i": self.i.to_string(),
            "value": self.value.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let num = |k: &str| v.get(k)?.as_str()?.parse::<BigUint>().ok();
        Some(NonContainmentCertificate {
            c: num("c")?,
            m: num("m")?,
            q: num("q")?,
            t: v.get("t")?
                .as_array()?
                .iter()
                .map(|x| x.as_str()?.parse().ok())
                .collect::<Option<Vec<_>>>()?,
            i: v.get("i")?.as_str()?.parse().ok()?,
            value: num("value")?,
        })
    }
}

impl fmt::Display for NonContainmentCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.t.iter().map(ToString::to_string).collect();
        write!(f, "q={} c={} t=({}) i={} value={}", self.q, self.c, t.join(","), self.i, self.value)
    }
}

impl Serialize for NonContainmentCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NonContainmentCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).ok_or_else(|| serde::de::Error::custom("malformed certificate"))
    }
}

/// Exponents `(q-1)/d_i` for ordered variables, 1 for free ones.
fn substitution_powers(q: &BigUint, orders: &[BigUint], n: usize) -> Option<Vec<BigUint>> {
    let qm1 = q - 1u32;
    let mut out = Vec::with_capacity(n);
    for d in orders {
        let (quo, rem) = qm1.div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        out.push(quo);
    }
    out.resize(n, BigUint::one());
    Some(out)
}

/// Recomputes everything from the original system; never trusts the
/// certificate's stored fields.
pub fn verify_certificate(cert: &NonContainmentCertificate, sys: &ProductSystem, orders: &[BigUint]) -> bool {
    let n = sys.num_vars;
    if check_orders(sys, orders).is_err() || cert.t.len() != n {
        return false;
    }
    if cert.i == 0 || cert.i > sys.products.len() {
        return false;
    }
    if cert.q != &cert.c * &cert.m + 1u32 || !primes::is_prime(&cert.q) {
        return false;
    }
    if cert.t.iter().any(|t| t.is_zero() || *t >= cert.q) {
        return false;
    }
    let Some(powers) = substitution_powers(&cert.q, orders, n) else { return false };
    let point: Vec<BigUint> = cert.t.iter().zip(&powers).map(|(t, e)| t.modpow(e, &cert.q)).collect();
    let value = sys.products[cert.i - 1]
        .iter()
        .fold(BigUint::one(), |acc, f| acc * f.eval_mod(&point, &cert.q) % &cert.q);
    !value.is_zero() && value == cert.value
}

/// How the certificate prime is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrimeChoice {
    /// Smallest `c` with `cM + 1` prime, `M` from [`compute_params`].
    Search(LinnikConfig),
    /// `q = c L + 1` with `L = lcm(d)`.
    PinC(BigUint),
    /// A given prime with `L | q - 1`.
    PinQ(BigUint),
}

impl Default for PrimeChoice {
    fn default() -> Self {
        PrimeChoice::Search(LinnikConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSearch {
    pub prime: PrimeChoice,
    /// Random points tried before the exhaustive sweep.
    pub samples: u64,
    /// Maximum points visited by the sweep; `None` means no limit.
    pub sweep_cap: Option<u64>,
    pub seed: u64,
    pub policy: ExecPolicy,
}

impl Default for CertificateSearch {
    fn default() -> Self {
        CertificateSearch {
            prime: PrimeChoice::default(),
            samples: 1024,
            sweep_cap: None,
            seed: 0,
            policy: ExecPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CertificateOutcome {
    Found(NonContainmentCertificate),
    /// The sweep finished with no violation and `q` meets the bounds, so the
    /// subtorus is contained.
    NotFound { q: BigUint, c: BigUint, m: BigUint },
    Inconclusive { q: BigUint, reason: String },
}

/// Result of [`find_certificate`] with the parameters it used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub outcome: CertificateOutcome,
    /// Parameters of the reduced system.
    pub params: AlgorithmParams,
    pub samples_tried: u64,
    pub points_swept: u64,
}

/// Searches `((Z/qZ)^*)^n` for a point violating some product, after
/// reducing the system.
pub fn find_certificate(
    sys: &ProductSystem,
    orders: &[BigUint],
    search: &CertificateSearch,
) -> Result<CertificateReport, SubtorusError> {
    let modulus = check_orders(sys, orders)?;
    let reduced = sys.reduce(&modulus);
    let params = compute_params(&reduced, orders)?;
    let lcm = params.lcm.clone();
    let (c, m, q) = match &search.prime {
        PrimeChoice::Search(cfg) => {
            let lower = (&params.norm_bound).max(&params.degree_bound) - 1u32;
            let p = primes::find_progression_prime(&params.modulus, &lower, cfg)?;
            (p.multiplier, p.modulus, p.q)
        }
        PrimeChoice::PinC(c) => {
            let q = c * &lcm + 1u32;
            if !primes::is_prime(&q) {
                return Err(SubtorusError::NotPrime { q, c: c.clone(), m: lcm });
            }
            (c.clone(), lcm, q)
        }
        PrimeChoice::PinQ(q) => {
            let (c, rem) = (q - 1u32).div_rem(&lcm);
            if !rem.is_zero() || q.is_zero() {
                return Err(SubtorusError::BadPinnedPrime { q: q.clone(), lcm });
            }
            if !primes::is_prime(q) {
                return Err(SubtorusError::NotPrime { q: q.clone(), c, m: lcm });
            }
            (c, lcm, q.clone())
        }
    };
    let powers = substitution_powers(&q, orders, sys.num_vars).expect("lcm divides q - 1");
    let ctx = SearchContext { reduced: &reduced, orders, powers: &powers, search };
    let (found, samples_tried, points_swept, complete) = match q.to_u64() {
        Some(q64) => ctx.run(&SmallField { q: q64 }),
        None => ctx.run(&BigField { q: q.clone() }),
    };
    let outcome = match found {
        Some((t, i, value)) => CertificateOutcome::Found(NonContainmentCertificate { c, m, q, t, i, value }),
        None if !complete => CertificateOutcome::Inconclusive {
            q,
            reason: format!("sweep stopped after {points_swept} points"),
        },
        None if q > params.norm_bound && q > &params.degree_bound - 1u32 => {
            CertificateOutcome::NotFound { q, c, m }
        }
        None => CertificateOutcome::Inconclusive {
            q,
            reason: "q does not exceed the norm and degree bounds".into(),
        },
    };
    Ok(CertificateReport { outcome, params, samples_tried, points_swept })
}

struct SearchContext<'a> {
    reduced: &'a ProductSystem,
    orders: &'a [BigUint],
    powers: &'a [BigUint],
    search: &'a CertificateSearch,
}

type Violation = (Vec<BigUint>, usize, BigUint);

impl SearchContext<'_> {
    /// `(violation, samples tried, points swept, sweep complete)`.
    fn run<F: PrimeField>(&self, field: &F) -> (Option<Violation>, u64, u64, bool) {
        let compiled: Vec<Vec<FieldPoly<F>>> = self
            .reduced
            .products()
            .iter()
            .map(|fs| fs.iter().map(|f| f.compile(field)).collect())
            .collect();
        let zero_product: Vec<bool> =
            self.reduced.products().iter().map(|fs| fs.iter().any(SparsePoly::is_zero)).collect();
        let violation = |u: &[F::Elem]| -> Option<(usize, F::Elem)> {
            compiled.iter().zip(&zero_product).enumerate().find_map(|(i, (fs, &zero))| {
                if zero {
                    return None;
                }
                let mut acc = field.one();
                for f in fs {
                    acc = field.mul(&acc, &f.eval(field, u));
                    if field.is_zero(&acc) {
                        return None;
                    }
                }
                Some((i + 1, acc))
            })
        };
        let q = field.modulus();
        let n = self.reduced.num_vars();

        let mut rng = ChaCha8Rng::seed_from_u64(self.search.seed);
        let one = BigUint::one();
        for s in 0..self.search.samples {
            let t: Vec<BigUint> = (0..n).map(|_| rng.gen_biguint_range(&one, &q)).collect();
            let u: Vec<F::Elem> =
                t.iter().zip(self.powers).map(|(t, e)| field.pow(&field.from_biguint(t), e)).collect();
            if let Some((i, v)) = violation(&u) {
                return (Some((t, i, field.to_biguint(&v))), s + 1, 0, true);
            }
        }
        let samples = self.search.samples;

        // Sweep coordinates: for an ordered variable only the first t of each
        // class t^{(q-1)/d} matters; free variables take every value.
        let cap = self.search.sweep_cap.unwrap_or(u64::MAX);
        let mut axes: Vec<Vec<(BigUint, F::Elem)>> = Vec::with_capacity(n);
        for (j, e) in self.powers.iter().enumerate() {
            if let Some(d) = self.orders.get(j) {
                match class_representatives(field, e, d, cap) {
                    Some(axis) => axes.push(axis),
                    None => return (None, samples, 0, false),
                }
            } else {
                let Some(len) = (&q - 1u32).to_u64().filter(|&l| l <= cap) else {
                    return (None, samples, 0, false);
                };
                axes.push((1..=len).map(|t| (BigUint::from(t), field.from_u64(t))).collect());
            }
        }
        let total = axes.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64));
        let (len, complete) = match total {
            Some(t) if t <= cap => (t, true),
            _ => (cap, false),
        };
        let hit = exec::find_first(self.search.policy, len, |k| {
            // t_1 varies fastest
            let mut k = k;
            let mut u = Vec::with_capacity(n);
            for axis in &axes {
                let len = axis.len() as u64;
                u.push(axis[(k % len) as usize].1.clone());
                k /= len;
            }
            violation(&u).map(|(i, v)| (i, field.to_biguint(&v)))
        });
        match hit {
            Some((hit_index, (i, v))) => {
                let mut k = hit_index;
                let t = axes
                    .iter()
                    .map(|axis| {
                        let len = axis.len() as u64;
                        let t = axis[(k % len) as usize].0.clone();
                        k /= len;
                        t
                    })
                    .collect();
                (Some((t, i, v)), samples, hit_index + 1, true)
            }
            None => (None, samples, len, complete),
        }
    }
}

/// For `t = 1, 2, ...` keep the first `t` of each value of `t^e`, until `d`
/// values are seen. `None` if more than `cap` residues are scanned.
fn class_representatives<F: PrimeField>(
    field: &F,
    e: &BigUint,
    d: &BigUint,
    cap: u64,
) -> Option<Vec<(BigUint, F::Elem)>> {
    let want = d.to_usize()?;
    let mut out = Vec::with_capacity(want);
    let mut index = std::collections::HashMap::new();
    let mut t = 1u64;
    while out.len() < want {
        if t > cap || BigUint::from(t) >= field.modulus() {
            return None;
        }
        let u = field.pow(&field.from_u64(t), e);
        let key = field.to_biguint(&u);
        if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(key) {
            slot.insert(out.len());
            out.push((BigUint::from(t), u));
        }
        t += 1;
    }
    Some(out)
}

/// Containment for a subtorus given by arbitrary exponent vectors: the Smith
/// form diagonalizes it, the system is rewritten in the new coordinates, and
/// the diagonal decision applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralContainment {
    pub contained: bool,
    pub subtorus: DiagonalSubtorus,
    pub transformed: ProductSystem,
}

pub fn contains_subtorus_general(
    sys: &ProductSystem,
    dbars: &[Vec<BigInt>],
) -> Result<GeneralContainment, SubtorusError> {
    let subtorus = lattice::diagonalize_subtorus(dbars)?;
    if subtorus.num_vars != sys.num_vars {
        return Err(SubtorusError::Matrix(MatrixError::Ragged {
            row: 0,
            expected: sys.num_vars,
            got: subtorus.num_vars,
        }));
    }
    let transformed = sys.map_factors(|f| {
        let out = lattice::transform_system(std::slice::from_ref(f), &subtorus.u, ShiftPolicy::Shift)?;
        Ok(out.polys.into_iter().next().expect("one polynomial"))
    })?;
    let contained = contains_subtorus_deterministic(&transformed, &subtorus.orders)?;
    Ok(GeneralContainment { contained, subtorus, transformed })
}
