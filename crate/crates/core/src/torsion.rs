//! Torsion points: does a system vanish at a point whose coordinates are
//! roots of unity of prescribed orders?
//!
//! Univariate inputs are decided exactly: `f` vanishes at a primitive
//! `delta`-th root of unity iff `f g_delta` reduces to zero modulo
//! `x^delta - 1`, where `g_delta` kills every non-primitive root. Multivariate
//! inputs go through a random prime `q = jM + 1` and a root search over the
//! order-`d_i` subgroups of `(Z/qZ)^*`; a genuine torsion point always
//! survives reduction, and a spurious one appears only for few primes.

use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::{self, ExecPolicy};
use crate::modarith::{BigField, PrimeField, SmallField};
use crate::oracle::TorsionIndexVector;
use crate::poly::{reduced_product, FieldPoly, ReductionModulus, SparsePoly};
use crate::primes::{self, FactorError, RootsError, SampleOutcome};
use crate::real::{self, Interval, RealError};

/// Printed when every sampled multiplier gives a composite.
pub const FAILURE_MESSAGE: &str = "I HAVE FAILED. PLEASE FORGIVE ME.";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("empty system")]
    EmptySystem,
    #[error("order d_{0} must be positive")]
    ZeroOrder(usize),
    #[error("{orders} orders for {num_vars} variables")]
    OrderCount { orders: usize, num_vars: usize },
    #[error("polynomial {index} has {got} variables, expected {expected}")]
    Arity { index: usize, expected: usize, got: usize },
    #[error("expected univariate polynomials")]
    NotUnivariate,
    #[error("{q} is not prime")]
    NotPrime { q: BigUint },
    #[error("lcm of the orders, {m}, does not divide q - 1 = {q_minus_1}")]
    NotConforming { m: BigUint, q_minus_1: BigUint },
    #[error("APH constant C = {0} must be a finite real >= 1")]
    BadConstant(String),
    #[error("candidate point has {got} coordinates, expected {expected}")]
    HintArity { expected: usize, got: usize },
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// `f_1 = ... = f_k = 0` together with `x_i^{d_i} = 1` for every variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionInstance {
    system: Vec<SparsePoly>,
    orders: Vec<BigUint>,
}

impl TorsionInstance {
    pub fn new(system: Vec<SparsePoly>, orders: Vec<BigUint>) -> Result<Self, TorsionError> {
        let first = system.first().ok_or(TorsionError::EmptySystem)?;
        let n = first.num_vars();
        if orders.len() != n {
            return Err(TorsionError::OrderCount { orders: orders.len(), num_vars: n });
        }
        if let Some(i) = orders.iter().position(Zero::is_zero) {
            return Err(TorsionError::ZeroOrder(i + 1));
        }
        if let Some((index, f)) = system.iter().enumerate().find(|(_, f)| f.num_vars() != n) {
            return Err(TorsionError::Arity { index, expected: n, got: f.num_vars() });
        }
        Ok(TorsionInstance { system, orders })
    }

    pub fn system(&self) -> &[SparsePoly] {
        &self.system
    }

    pub fn orders(&self) -> &[BigUint] {
        &self.orders
    }

    pub fn num_vars(&self) -> usize {
        self.orders.len()
    }

    /// `M = lcm(d_1, ..., d_n)`.
    pub fn lcm_order(&self) -> BigUint {
        self.orders.iter().fold(BigUint::one(), |acc, d| acc.lcm(d))
    }
}

fn g_delta_factors(delta: &BigUint) -> Result<Vec<SparsePoly>, TorsionError> {
    Ok(primes::distinct_prime_factors(delta)?
        .iter()
        .map(|p| SparsePoly::binomial_minus_one(1, 0, &(delta / p)))
        .collect())
}

/// `g_delta(x) = prod_{p | delta prime} (x^{delta/p} - 1)`; `g_1 = 1`.
pub fn g_delta(delta: &BigUint) -> Result<SparsePoly, TorsionError> {
    Ok(g_delta_factors(delta)?
        .iter()
        .fold(SparsePoly::constant(1, 1), |acc, g| acc.multiply(g)))
}

/// A reason to answer YES.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionWitness {
    /// Every `f_i` vanishes at the primitive `delta`-th roots of unity;
    /// `index` names one of them as `w_d^{d/delta}` when `d` fits a word.
    RootOfUnity { delta: BigUint, index: Option<TorsionIndexVector> },
    /// A root of the system modulo the prime `q`.
    ModPrime { q: BigUint, t: Vec<BigUint> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionOutcome {
    Yes(TorsionWitness),
    No,
    /// All `J` sampled multipliers gave composites.
    Failed(String),
    /// The root search ran out of budget.
    Inconclusive(String),
}

/// Step 2 quantities of the randomized algorithm, each the smallest integer
/// strictly above its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct KpsBounds {
    /// `max(max_i deg f_i, max_i d_i)`.
    pub e: BigUint,
    /// `1 + max ln|c|` over all coefficients, rounded for display.
    pub sigma: f64,
    pub m: BigUint,
    pub c: f64,
    pub l: BigUint,
    pub k: BigUint,
    pub j: BigUint,
}

impl KpsBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "E": self.e.to_string(),
            "sigma": self.sigma,
            "M": self.m.to_string(),
            "C": self.c,
            "L": self.l.to_string(),
            "K": self.k.to_string(),
            "J": self.j.to_string(),
        })
    }
}

fn to_nat(x: BigInt) -> BigUint {
    x.to_biguint().expect("bounds are positive")
}

/// `ln^C x` for an integer `x >= 1`.
fn ln_pow(x: &BigUint, c: &Interval, prec: u32) -> Result<Interval, RealError> {
    if x.is_one() {
        return Ok(Interval::int(0, prec));
    }
    Interval::int(BigInt::from(x.clone()), prec).ln()?.powf(c)
}

/// Smallest `L`, `K`, `J` above the bounds, evaluated with outward rounding so
/// each strict inequality is certain.
pub fn kps_bounds(inst: &TorsionInstance, c: f64) -> Result<KpsBounds, TorsionError> {
    if !c.is_finite() || c < 1.0 {
        return Err(TorsionError::BadConstant(c.to_string()));
    }
    let n = inst.num_vars() as u32;
    let k = inst.system.len() as u64;
    let m = inst.lcm_order();
    let e = inst
        .system
        .iter()
        .map(SparsePoly::total_degree)
        .chain(inst.orders.iter().cloned())
        .max()
        .expect("nonempty");
    let max_coeff = inst.system.iter().map(SparsePoly::max_coeff).max().unwrap_or_default();
    let sigma = |p: u32| -> Result<Interval, RealError> {
        let one = Interval::int(1, p);
        if max_coeff.is_zero() {
            return Ok(one);
        }
        Ok(one.add(&Interval::int(BigInt::from(max_coeff.clone()), p).ln()?))
    };
    let e_int = BigInt::from(e.clone());

    let l = to_nat(real::smallest_integer_above(|p| {
        let e_iv = Interval::int(e_int.clone(), p);
        let inner = sigma(p)?
            .add(&Interval::int(k + n as u64, p).ln()?)
            .add(&e_iv.mul_int(14 * (n as u64 + 1)).mul(&Interval::int(&e_int + 1, p).ln()?));
        let scale = BigInt::from(2 * (n as u64 + 1).pow(3)) * e_int.pow(n + 1);
        Ok(Interval::int(1, p).add(&inner.mul_int(scale)))
    })?);

    let l_int = BigInt::from(l.clone());
    let k_bound = to_nat(real::smallest_integer_above(|p| {
        let c_iv = Interval::from_f64(c, p);
        let first = c_iv.powi(2).exp();
        let lnc = ln_pow(&m, &c_iv, p)?;
        let second = Interval::int(2, p).ln()?.mul(&lnc).exp();
        let third = lnc.powi(2).mul_int(BigInt::from(36) * &l_int * &l_int);
        Ok(first.max(&second).max(&third))
    })?);

    let km = &k_bound * &m;
    let j = to_nat(real::smallest_integer_above(|p| {
        let c_iv = Interval::from_f64(c, p);
        Ok(Interval::int(6, p).ln()?.mul(&ln_pow(&km, &c_iv, p)?))
    })?);

    let sigma_approx = sigma(256)?.approx();
    Ok(KpsBounds { e, sigma: sigma_approx, m, c, l, k: k_bound, j })
}

/// Every index `a` with `a_i` a multiple of `M/d_i`, for `M = lcm(d)`.
fn root_index(d: &BigUint, delta: &BigUint) -> Option<TorsionIndexVector> {
    Some(TorsionIndexVector { m: d.to_u64()?, a: vec![((d / delta) % d).to_u64()?] })
}

/// Provenance of a verdict: which path ran and with what parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TorsionProvenance {
    /// `"univariate-exact"` or `"multivariate-mod-q"`.
    pub algorithm: &'static str,
    /// False when caps replaced the Step 2 constants or the prime was pinned.
    pub conforming: bool,
    pub m: BigUint,
    pub bounds: Option<KpsBounds>,
    pub k_cap: Option<BigUint>,
    pub trials: Option<BigUint>,
    pub draws: Vec<BigUint>,
    pub q: Option<BigUint>,
    pub c: Option<BigUint>,
    pub divisors_scanned: Option<usize>,
    pub search: Option<RootSearchStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionVerdict {
    pub outcome: TorsionOutcome,
    pub provenance: TorsionProvenance,
}

fn strings(v: &[BigUint]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl TorsionVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self.outcome, TorsionOutcome::Yes(_))
    }

    pub fn to_json(&self) -> Value {
        let outcome = match &self.outcome {
            TorsionOutcome::Yes(TorsionWitness::RootOfUnity { delta, index }) => json!({
                "answer": "YES",
                "witness": {
                    "delta": delta.to_string(),
                    "index": index.as_ref().map(|i| json!({
                        "M": i.m.to_string(),
                        "a": i.a.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })),
                },
            }),
            TorsionOutcome::Yes(TorsionWitness::ModPrime { q, t }) => json!({
                "answer": "YES",
                "witness": { "q": q.to_string(), "t": strings(t) },
            }),
            TorsionOutcome::No => json!({ "answer": "NO" }),
            TorsionOutcome::Failed(msg) => json!({ "answer": "FAILED", "message": msg }),
            TorsionOutcome::Inconclusive(msg) => json!({ "answer": "INCONCLUSIVE", "message": msg }),
        };
        let p = &self.provenance;
        let opt = |x: &Option<BigUint>| x.as_ref().map(ToString::to_string);
        json!({
            "outcome": outcome,
            "provenance": {
                "algorithm": p.algorithm,
                "conforming": p.conforming,
                "M": p.m.to_string(),
                "bounds": p.bounds.as_ref().map(KpsBounds::to_json),
                "k_cap": opt(&p.k_cap),
                "trials": opt(&p.trials),
                "draws": strings(&p.draws),
                "q": opt(&p.q),
                "c": opt(&p.c),
                "divisors_scanned": p.divisors_scanned,
                "search": p.search.as_ref().map(|s| json!({
                    "hints_checked": s.hints_checked,
                    "samples_tried": s.samples_tried,
                    "points_swept": s.points_swept,
                    "space": s.space.to_string(),
                })),
            },
        })
    }
}

impl Serialize for TorsionVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for TorsionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            TorsionOutcome::Yes(TorsionWitness::RootOfUnity { delta, index }) => {
                write!(f, "YES delta={delta}")?;
                if let Some(i) = index {
                    write!(f, " {i}")?;
                }
                Ok(())
            }
            TorsionOutcome::Yes(TorsionWitness::ModPrime { q, t }) => {
                write!(f, "YES q={q} t=({})", strings(t).join(","))
            }
            TorsionOutcome::No => write!(f, "NO"),
            TorsionOutcome::Failed(msg) => write!(f, "{msg}"),
            TorsionOutcome::Inconclusive(msg) => write!(f, "INCONCLUSIVE {msg}"),
        }
    }
}

/// Exact decision for univariate `F` and order `d`: the smallest `delta | d`
/// at whose primitive roots every `f_i` vanishes, or NO.
pub fn torsion_univariate(
    system: &[SparsePoly],
    d: &BigUint,
    policy: ExecPolicy,
) -> Result<TorsionVerdict, TorsionError> {
    if system.is_empty() {
        return Err(TorsionError::EmptySystem);
    }
    if system.iter().any(|f| f.num_vars() != 1) {
        return Err(TorsionError::NotUnivariate);
    }
    if d.is_zero() {
        return Err(TorsionError::ZeroOrder(1));
    }
    let divisors = primes::divisors(d)?;
    let factors = divisors.iter().map(g_delta_factors).collect::<Result<Vec<_>, _>>()?;
    let hit = exec::find_first_in(policy, &divisors, |delta| {
        let i = divisors.binary_search(delta).expect("sorted divisors");
        let modulus = ReductionModulus::diagonal(std::slice::from_ref(delta), 1);
        system
            .iter()
            .all(|f| {
                let mut all = Vec::with_capacity(factors[i].len() + 1);
                all.push(f.clone());
                all.extend(factors[i].iter().cloned());
                reduced_product(&all, &modulus).is_zero()
            })
            .then_some(())
    });
    let (outcome, scanned) = match hit {
        Some((i, ())) => {
            let delta = divisors[i].clone();
            let index = root_index(d, &delta);
            (TorsionOutcome::Yes(TorsionWitness::RootOfUnity { delta, index }), i + 1)
        }
        None => (TorsionOutcome::No, divisors.len()),
    };
    Ok(TorsionVerdict {
        outcome,
        provenance: TorsionProvenance {
            algorithm: "univariate-exact",
            conforming: true,
            m: d.clone(),
            divisors_scanned: Some(scanned),
            ..Default::default()
        },
    })
}

/// Limits for [`find_mod_root`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootBudget {
    /// Candidate points checked before anything else.
    pub hints: Vec<Vec<BigUint>>,
    /// Random subgroup points tried before the sweep.
    pub samples: u64,
    /// Maximum points visited by the sweep; `None` means no limit.
    pub sweep_cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSearchStats {
    pub hints_checked: u64,
    pub samples_tried: u64,
    pub points_swept: u64,
    /// `prod d_i`, the size of the search space.
    pub space: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootOutcome {
    Found(Vec<BigUint>),
    NotFound,
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSearch {
    pub outcome: RootOutcome,
    pub stats: RootSearchStats,
}

/// Checks from scratch that `t` solves `f_i = 0`, `x_i^{d_i} = 1` mod prime `q`.
pub fn verify_mod_root(inst: &TorsionInstance, q: &BigUint, t: &[BigUint]) -> bool {
    if t.len() != inst.num_vars() || !primes::is_prime(q) {
        return false;
    }
    let in_subgroup = t
        .iter()
        .zip(&inst.orders)
        .all(|(t, d)| !t.is_zero() && t < q && t.modpow(d, q).is_one());
    in_subgroup && inst.system.iter().all(|f| f.eval_mod(t, q).is_zero())
}

/// Root search over `prod_i {t : t^{d_i} = 1}` in `(Z/qZ)^n`: hints, then
/// random points drawn from `rng`, then a sweep over exponent vectors of
/// fixed subgroup generators with the first coordinate fastest.
pub fn find_mod_root<R: Rng + ?Sized>(
    inst: &TorsionInstance,
    q: &BigUint,
    budget: &RootBudget,
    rng: &mut R,
    policy: ExecPolicy,
) -> Result<RootSearch, TorsionError> {
    let m = inst.lcm_order();
    let q_minus_1 = q - 1u32;
    if !q_minus_1.is_multiple_of(&m) {
        return Err(TorsionError::NotConforming { m, q_minus_1 });
    }
    if !primes::is_prime(q) {
        return Err(TorsionError::NotPrime { q: q.clone() });
    }
    if let Some(h) = budget.hints.iter().find(|h| h.len() != inst.num_vars()) {
        return Err(TorsionError::HintArity { expected: inst.num_vars(), got: h.len() });
    }
    let generators = inst
        .orders
        .iter()
        .map(|d| primes::subgroup_generator(q, d))
        .collect::<Result<Vec<_>, _>>()?;
    match q.to_u64() {
        Some(q64) => Ok(RootContext::new(inst, &generators, &SmallField { q: q64 }).run(inst, budget, rng, policy)),
        None => Ok(RootContext::new(inst, &generators, &BigField { q: q.clone() }).run(inst, budget, rng, policy)),
    }
}

struct RootContext<'a, F: PrimeField> {
    field: &'a F,
    system: Vec<FieldPoly<F>>,
    generators: Vec<F::Elem>,
}

impl<'a, F: PrimeField> RootContext<'a, F> {
    fn new(inst: &TorsionInstance, generators: &[BigUint], field: &'a F) -> Self {
        // exponents only matter modulo d_i on the subgroup
        let modulus = ReductionModulus::diagonal(&inst.orders, inst.num_vars());
        RootContext {
            field,
            system: inst.system.iter().map(|f| f.reduce_exponents(&modulus).compile(field)).collect(),
            generators: generators.iter().map(|g| field.from_biguint(g)).collect(),
        }
    }

    fn is_root(&self, t: &[F::Elem]) -> bool {
        self.system.iter().all(|f| self.field.is_zero(&f.eval(self.field, t)))
    }

    fn point(&self, exponents: &[BigUint]) -> Vec<F::Elem> {
        self.generators.iter().zip(exponents).map(|(g, k)| self.field.pow(g, k)).collect()
    }

    fn run<R: Rng + ?Sized>(
        &self,
        inst: &TorsionInstance,
        budget: &RootBudget,
        rng: &mut R,
        policy: ExecPolicy,
    ) -> RootSearch {
        let field = self.field;
        let q = field.modulus();
        let space: BigUint = inst.orders.iter().product();
        let mut stats = RootSearchStats { hints_checked: 0, samples_tried: 0, points_swept: 0, space: space.clone() };
        let done = |outcome, stats| RootSearch { outcome, stats };
        let to_big = |t: &[F::Elem]| t.iter().map(|x| field.to_biguint(x)).collect::<Vec<_>>();

        for hint in &budget.hints {
            stats.hints_checked += 1;
            let conforming = hint
                .iter()
                .zip(&inst.orders)
                .all(|(t, d)| !t.is_zero() && *t < q && t.modpow(d, &q).is_one());
            let t: Vec<F::Elem> = hint.iter().map(|x| field.from_biguint(x)).collect();
            if conforming && self.is_root(&t) {
                return done(RootOutcome::Found(hint.clone()), stats);
            }
        }

        for _ in 0..budget.samples {
            stats.samples_tried += 1;
            let k: Vec<BigUint> = inst.orders.iter().map(|d| rng.gen_biguint_below(d)).collect();
            let t = self.point(&k);
            if self.is_root(&t) {
                return done(RootOutcome::Found(to_big(&t)), stats);
            }
        }

        let cap = budget.sweep_cap.unwrap_or(u64::MAX);
        let orders: Option<Vec<u64>> = inst.orders.iter().map(ToPrimitive::to_u64).collect();
        let total = space.to_u64();
        let (len, complete) = match total {
            Some(t) if t <= cap => (t, true),
            _ => (cap, false),
        };
        let Some(orders) = orders else {
            return done(RootOutcome::Inconclusive("subgroup orders exceed a machine word".into()), stats);
        };
        let decode = |mut k: u64| -> Vec<BigUint> {
            orders
                .iter()
                .map(|&d| {
                    let digit = k % d;
                    k /= d;
                    BigUint::from(digit)
                })
                .collect()
        };
        let hit = exec::find_first(policy, len, |k| {
            let t = self.point(&decode(k));
            self.is_root(&t).then(|| to_big(&t))
        });
        match hit {
            Some((k, t)) => {
                stats.points_swept = k + 1;
                done(RootOutcome::Found(t), stats)
            }
            None => {
                stats.points_swept = len;
                if complete {
                    done(RootOutcome::NotFound, stats)
                } else {
                    let reason = format!("sweep stopped after {len} of {space} points");
                    done(RootOutcome::Inconclusive(reason), stats)
                }
            }
        }
    }
}

/// How Step 2's constants are used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionMode {
    /// Sample `j` from `[1, K]` at most `J` times, as computed.
    Conformance,
    /// Replace `K` and `J` by caps; reported as non-conforming.
    Practical { k_cap: BigUint, trials: BigUint },
}

/// A fixed prime instead of sampling one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimePin {
    /// `q = cM + 1`.
    C(BigUint),
    Q(BigUint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionConfig {
    pub mode: TorsionMode,
    /// The APH constant `C >= 1`.
    pub aph_c: f64,
    pub pin: Option<PrimePin>,
    pub budget: RootBudget,
    pub policy: ExecPolicy,
}

impl Default for TorsionConfig {
    fn default() -> Self {
        TorsionConfig {
            mode: TorsionMode::Conformance,
            aph_c: 1.0,
            pin: None,
            budget: RootBudget::default(),
            policy: ExecPolicy::default(),
        }
    }
}

/// Randomized decision: pick `q = jM + 1` prime and search for a root mod `q`.
/// YES is always correct when the system has a torsion point; a spurious YES
/// needs `q` to divide a resultant-like quantity bounded by `L`.
pub fn torsion_multivariate<R: Rng + ?Sized>(
    inst: &TorsionInstance,
    config: &TorsionConfig,
    rng: &mut R,
) -> Result<TorsionVerdict, TorsionError> {
    let m = inst.lcm_order();
    let bounds = kps_bounds(inst, config.aph_c)?;
    let mut prov = TorsionProvenance {
        algorithm: "multivariate-mod-q",
        conforming: matches!(config.mode, TorsionMode::Conformance) && config.pin.is_none(),
        m: m.clone(),
        ..Default::default()
    };
    let (k_cap, trials) = match &config.mode {
        TorsionMode::Conformance => (bounds.k.clone(), bounds.j.clone()),
        TorsionMode::Practical { k_cap, trials } => (k_cap.clone(), trials.clone()),
    };
    prov.bounds = Some(bounds);
    let (q, c) = match &config.pin {
        Some(PrimePin::C(c)) => {
            let q = c * &m + 1u32;
            if !primes::is_prime(&q) {
                return Err(TorsionError::NotPrime { q });
            }
            (q, c.clone())
        }
        Some(PrimePin::Q(q)) => {
            let (c, rem) = (q - 1u32).div_rem(&m);
            if !rem.is_zero() {
                return Err(TorsionError::NotConforming { m, q_minus_1: q - 1u32 });
            }
            if !primes::is_prime(q) {
                return Err(TorsionError::NotPrime { q: q.clone() });
            }
            (q.clone(), c)
        }
        None => {
            prov.k_cap = Some(k_cap.clone());
            prov.trials = Some(trials.clone());
            match primes::sample_progression_prime(&m, &k_cap, &trials, rng) {
                SampleOutcome::Found { prime, draws } => {
                    prov.draws = draws;
                    (prime.q, prime.multiplier)
                }
                SampleOutcome::Failed { draws } => {
                    prov.draws = draws;
                    return Ok(TorsionVerdict { outcome: TorsionOutcome::Failed(FAILURE_MESSAGE.into()), provenance: prov });
                }
            }
        }
    };
    prov.q = Some(q.clone());
    prov.c = Some(c);
    let search = find_mod_root(inst, &q, &config.budget, rng, config.policy)?;
    prov.search = Some(search.stats);
    let outcome = match search.outcome {
        RootOutcome::Found(t) => TorsionOutcome::Yes(TorsionWitness::ModPrime { q, t }),
        RootOutcome::NotFound => TorsionOutcome::No,
        RootOutcome::Inconclusive(reason) => TorsionOutcome::Inconclusive(reason),
    };
    Ok(TorsionVerdict { outcome, provenance: prov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> SparsePoly {
        SparsePoly::parse(s, n).unwrap()
    }

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn g_delta_examples() {
        assert_eq!(g_delta(&b(91)).unwrap(), p("x^13 - 1", 1).multiply(&p("x^7 - 1", 1)));
        assert_eq!(g_delta(&b(1)).unwrap(), p("1", 1));
        assert_eq!(g_delta(&b(6)).unwrap(), p("x^3 - 1", 1).multiply(&p("x^2 - 1", 1)));
    }

    #[test]
    fn univariate_examples() {
        let v = torsion_univariate(&[p("x^2 + x + 1", 1)], &b(3), ExecPolicy::Sequential).unwrap();
        assert_eq!(v.to_string(), "YES delta=3 M=3 a=(1)");
        let v = torsion_univariate(&[p("x - 1", 1)], &b(5), ExecPolicy::Parallel).unwrap();
        assert!(matches!(v.outcome, TorsionOutcome::Yes(TorsionWitness::RootOfUnity { ref delta, .. }) if delta.is_one()));
        let v = torsion_univariate(&[p("x + 2", 1)], &b(12), ExecPolicy::Parallel).unwrap();
        assert_eq!(v.outcome, TorsionOutcome::No);
        assert_eq!(v.provenance.divisors_scanned, Some(6));
        // x^2 + 1 vanishes at primitive 4th roots; x^4 - 1 too, but x + 1 does not
        let v = torsion_univariate(&[p("x^2 + 1", 1), p("x^4 - 1", 1)], &b(8), ExecPolicy::Parallel).unwrap();
        assert_eq!(v.to_string(), "YES delta=4 M=8 a=(2)");
        let v = torsion_univariate(&[p("x^2 + 1", 1), p("x + 1", 1)], &b(8), ExecPolicy::Parallel).unwrap();
        assert_eq!(v.outcome, TorsionOutcome::No);
        assert!(torsion_univariate(&[p("x + y", 2)], &b(3), ExecPolicy::Parallel).is_err());
    }

    #[test]
    fn kps_small_instance() {
        let inst = TorsionInstance::new(vec![p("x1 - 2", 1)], vec![b(1)]).unwrap();
        let kb = kps_bounds(&inst, 1.0).unwrap();
        // 1 + 16(1 + 2 ln 2 + 28 ln 2) = 349.71...
        assert_eq!((kb.e.clone(), kb.l.clone(), kb.k.clone(), kb.j.clone()), (b(1), b(350), b(3), b(2)));
        assert!((kb.sigma - (1.0 + 2f64.ln())).abs() < 1e-12);
        let ones = TorsionInstance::new(vec![p("x1 - 1", 1)], vec![b(1)]).unwrap();
        assert_eq!(kps_bounds(&ones, 1.0).unwrap().sigma, 1.0);
        // E = 2 via d = 2
        let wider = TorsionInstance::new(vec![p("x1 - 2", 1)], vec![b(2)]).unwrap();
        assert!(kps_bounds(&wider, 1.0).unwrap().l > kb.l);
        assert!(kps_bounds(&inst, 0.5).is_err());
    }

    #[test]
    fn mod_root_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = TorsionInstance::new(vec![p("x1 - 1", 1)], vec![b(3)]).unwrap();
        let r = find_mod_root(&inst, &b(7), &RootBudget::default(), &mut rng, ExecPolicy::Sequential).unwrap();
        assert_eq!(r.outcome, RootOutcome::Found(vec![b(1)]));
        assert_eq!(r.stats.space, b(3));
        let inst = TorsionInstance::new(vec![p("x1 - 3", 1)], vec![b(1)]).unwrap();
        let r = find_mod_root(&inst, &b(7), &RootBudget::default(), &mut rng, ExecPolicy::Sequential).unwrap();
        assert_eq!(r.outcome, RootOutcome::NotFound);
        let inst = TorsionInstance::new(vec![p("x1 - 1", 1)], vec![b(4)]).unwrap();
        assert!(find_mod_root(&inst, &b(7), &RootBudget::default(), &mut rng, ExecPolicy::Sequential).is_err());
        // x^2 + x + 1 at d = 3 mod 7: the roots are 2 and 4
        let inst = TorsionInstance::new(vec![p("x^2 + x + 1", 1)], vec![b(3)]).unwrap();
        let r = find_mod_root(&inst, &b(7), &RootBudget::default(), &mut rng, ExecPolicy::Parallel).unwrap();
        let RootOutcome::Found(t) = r.outcome else { panic!() };
        assert!(verify_mod_root(&inst, &b(7), &t));
        assert!(!verify_mod_root(&inst, &b(7), &[b(1)]));
    }

    #[test]
    fn hints_are_checked_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = TorsionInstance::new(vec![p("x^2 + x + 1", 1)], vec![b(3)]).unwrap();
        let budget = RootBudget { hints: vec![vec![b(3)], vec![b(4)]], samples: 0, sweep_cap: Some(0) };
        let r = find_mod_root(&inst, &b(7), &budget, &mut rng, ExecPolicy::Sequential).unwrap();
        assert_eq!(r.outcome, RootOutcome::Found(vec![b(4)]));
        assert_eq!(r.stats.hints_checked, 2);
        let budget = RootBudget { hints: vec![vec![b(3)]], samples: 0, sweep_cap: Some(1) };
        let r = find_mod_root(&inst, &b(7), &budget, &mut rng, ExecPolicy::Sequential).unwrap();
        assert!(matches!(r.outcome, RootOutcome::Inconclusive(_)));
    }

    #[test]
    fn multivariate_examples() {
        let practical = TorsionConfig {
            mode: TorsionMode::Practical { k_cap: b(1000), trials: b(50) },
            budget: RootBudget { samples: 8, ..Default::default() },
            ..Default::default()
        };
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = TorsionInstance::new(vec![p("x1 - 1", 2), p("x2 - 1", 2)], vec![b(2), b(2)]).unwrap();
            let v = torsion_multivariate(&inst, &practical, &mut rng).unwrap();
            let TorsionOutcome::Yes(TorsionWitness::ModPrime { q, t }) = &v.outcome else { panic!("{v}") };
            assert_eq!(t, &vec![b(1), b(1)]);
            assert!(verify_mod_root(&inst, q, t));
            let inst = TorsionInstance::new(vec![p("1", 2)], vec![b(3), b(2)]).unwrap();
            let v = torsion_multivariate(&inst, &practical, &mut rng).unwrap();
            assert_eq!(v.outcome, TorsionOutcome::No);
            assert!(!v.provenance.conforming);
        }
    }

    #[test]
    fn conformance_mode_uses_bounds() {
        let inst = TorsionInstance::new(vec![p("x1 - 2", 1)], vec![b(1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = torsion_multivariate(&inst, &TorsionConfig::default(), &mut rng).unwrap();
        // M = 1, K = 3, J = 2: j = 1 and 2 give primes 2 and 3
        assert!(v.provenance.conforming);
        assert_eq!(v.provenance.k_cap, Some(b(3)));
        let q = v.provenance.q.clone().unwrap();
        assert!(q == b(2) || q == b(3));
        // x - 2 at x = 1 is -1, a unit mod every prime
        assert_eq!(v.outcome, TorsionOutcome::No, "{v}");
    }

    #[test]
    fn failure_message() {
        // M = 7, K = J = 1: j = 1 gives 8, composite
        let inst = TorsionInstance::new(vec![p("x1 - 1", 1)], vec![b(7)]).unwrap();
        let cfg = TorsionConfig { mode: TorsionMode::Practical { k_cap: b(1), trials: b(1) }, ..Default::default() };
        let v = torsion_multivariate(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(v.to_string(), FAILURE_MESSAGE);
        assert_eq!(v.provenance.draws, vec![b(1)]);
    }
}
