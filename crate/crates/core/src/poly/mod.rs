//! Sparse multivariate polynomials over `Z` with arbitrary-precision
//! exponents.
//!
//! A [`SparsePoly`] is a map from exponent vectors to nonzero coefficients.
//! Degrees can be exponential in the encoding size, so exponents are
//! [`BigUint`] and nothing here ever materializes a dense coefficient vector.

mod json;
mod text;

pub use json::PolyJsonError;
pub use text::ParseError;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::modarith::{BigField, PrimeField, SmallField};

/// Exponent vector `(a_1, ..., a_n)` of a monomial `x_1^{a_1} ... x_n^{a_n}`.
pub type Exponent = Vec<BigUint>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },
}

/// Polynomial in `Z[x_1, ..., x_n]` stored as exponent vector -> coefficient.
///
/// No stored coefficient is zero and every key has length `num_vars`; the
/// zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    num_vars: usize,
    terms: HashMap<Exponent, BigInt>,
}

/// Per-variable exponent moduli for the bar reduction: `Some(d)` reduces the
/// exponent of that variable modulo `d`, `None` leaves it alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionModulus {
    moduli: Vec<Option<BigUint>>,
}

impl ReductionModulus {
    /// # Panics
    /// If any modulus is zero.
    pub fn new(moduli: Vec<Option<BigUint>>) -> Self {
        assert!(
            moduli.iter().flatten().all(|d| !d.is_zero()),
            "exponent moduli must be positive"
        );
        ReductionModulus { moduli }
    }

    /// Moduli `d_1, ..., d_r` on the first `r` of `num_vars` variables.
    pub fn diagonal(orders: &[BigUint], num_vars: usize) -> Self {
        assert!(orders.len() <= num_vars, "more orders than variables");
        let mut moduli: Vec<Option<BigUint>> = orders.iter().cloned().map(Some).collect();
        moduli.resize(num_vars, None);
        Self::new(moduli)
    }

    pub fn moduli(&self) -> &[Option<BigUint>] {
        &self.moduli
    }

    pub fn num_vars(&self) -> usize {
        self.moduli.len()
    }

    /// Product of the present moduli, i.e. the number of residue classes of
    /// exponents in the reduced variables.
    pub fn class_count(&self) -> BigUint {
        self.moduli.iter().flatten().product()
    }

    fn reduce(&self, exp: &Exponent) -> Exponent {
        exp.iter()
            .zip(&self.moduli)
            .map(|(e, d)| match d {
                Some(d) => e % d,
                None => e.clone(),
            })
            .collect()
    }
}

impl SparsePoly {
    pub fn zero(num_vars: usize) -> Self {
        SparsePoly { num_vars, terms: HashMap::new() }
    }

    pub fn constant(num_vars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(num_vars, [(vec![BigUint::zero(); num_vars], c.into())])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    ///
    /// # Panics
    /// If an exponent vector does not have length `num_vars`.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut p = SparsePoly::zero(num_vars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), num_vars, "exponent vector has wrong arity");
            p.add_term(exp, c);
        }
        p
    }

    /// Single monomial `coeff * x^exp`.
    pub fn monomial(exp: Exponent, coeff: impl Into<BigInt>) -> Self {
        let n = exp.len();
        Self::from_terms(n, [(exp, coeff.into())])
    }

    /// `x_var^e - 1` in `num_vars` variables.
    pub fn binomial_minus_one(num_vars: usize, var: usize, e: &BigUint) -> Self {
        assert!(var < num_vars);
        let mut exp = vec![BigUint::zero(); num_vars];
        exp[var] = e.clone();
        Self::from_terms(
            num_vars,
            [(exp, BigInt::one()), (vec![BigUint::zero(); num_vars], -BigInt::one())],
        )
    }

    /// The variable `x_var` itself.
    pub fn var(num_vars: usize, var: usize) -> Self {
        let mut exp = vec![BigUint::zero(); num_vars];
        exp[var] = BigUint::one();
        Self::monomial(exp, 1)
    }

    fn add_term(&mut self, exp: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in graded-lexicographic order, highest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    pub fn coeff(&self, exp: &[BigUint]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Sum of absolute values of the coefficients.
    pub fn one_norm(&self) -> BigUint {
        self.terms.values().map(|c| c.magnitude()).sum()
    }

    /// Largest absolute value of a coefficient (0 for the zero polynomial).
    pub fn max_coeff(&self) -> BigUint {
        self.terms
            .values()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// Degree in `x_var` (zero-based index). The zero polynomial has degree 0;
    /// callers that care must check [`SparsePoly::is_zero`].
    pub fn degree_in(&self, var: usize) -> Result<BigUint, PolyError> {
        if var >= self.num_vars {
            return Err(PolyError::VarOutOfRange { index: var, num_vars: self.num_vars });
        }
        Ok(self.terms.keys().map(|e| &e[var]).max().cloned().unwrap_or_default())
    }

    /// Largest total degree over all terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> BigUint {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<BigUint>())
            .max()
            .unwrap_or_default()
    }

    /// Exact product.
    ///
    /// # Panics
    /// If the operands have different variable counts.
    pub fn multiply(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = SparsePoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Product followed by reduction, without materializing the unreduced
    /// product.
    fn multiply_reduced(&self, other: &SparsePoly, modulus: &ReductionModulus) -> SparsePoly {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = SparsePoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(modulus.reduce(&e), ca * cb);
            }
        }
        out
    }

    /// The bar reduction: every exponent of a reduced variable is taken modulo
    /// its `d_i` and like terms are collected. Equivalent to repeatedly
    /// substituting `x_i^{d_i} = 1`.
    pub fn reduce_exponents(&self, modulus: &ReductionModulus) -> SparsePoly {
        assert_eq!(modulus.num_vars(), self.num_vars, "modulus arity mismatch");
        let mut out = SparsePoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(modulus.reduce(e), c.clone());
        }
        out
    }

    /// `x_i -> x_i^{powers_i}`: every exponent entry is scaled.
    pub fn substitute_powers(&self, powers: &[BigUint]) -> SparsePoly {
        assert_eq!(powers.len(), self.num_vars, "powers arity mismatch");
        assert!(powers.iter().all(|w| !w.is_zero()), "powers must be positive");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(powers).map(|(a, w)| a * w).collect(), c.clone()));
        SparsePoly { num_vars: self.num_vars, terms: terms.collect() }
    }

    /// Maps every exponent vector through `f`, collecting like terms.
    pub fn map_exponents<F>(&self, num_vars: usize, mut f: F) -> SparsePoly
    where
        F: FnMut(&Exponent) -> Exponent,
    {
        SparsePoly::from_terms(num_vars, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// Value at `point` modulo the prime `q`. Exponents are reduced modulo
    /// `q - 1` for nonzero bases; `0^0 = 1`.
    pub fn eval_mod(&self, point: &[BigUint], q: &BigUint) -> BigUint {
        assert_eq!(point.len(), self.num_vars, "point arity mismatch");
        match u64::try_from(q) {
            Ok(q64) => {
                let field = SmallField { q: q64 };
                let pt: Vec<u64> = point.iter().map(|t| field.from_biguint(t)).collect();
                BigUint::from(self.eval_in(&field, &pt))
            }
            Err(_) => {
                let field = BigField { q: q.clone() };
                let pt: Vec<BigUint> = point.iter().map(|t| t % q).collect();
                self.eval_in(&field, &pt)
            }
        }
    }

    /// Value at a point of `F^n` for a prime field `F`.
    pub fn eval_in<F: PrimeField>(&self, field: &F, point: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            let term = e
                .iter()
                .zip(point)
                .fold(field.from_bigint(c), |t, (a, x)| field.mul(&t, &field.pow(x, a)));
            field.add(&acc, &term)
        })
    }

    /// Reduce coefficients mod `q` and exponents mod `q - 1` once, for
    /// repeated evaluation at points of the torus `((Z/qZ)^*)^n`.
    pub fn compile<F: PrimeField>(&self, field: &F) -> FieldPoly<F> {
        let order = field.modulus() - 1u32;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (field.from_bigint(c), e.iter().map(|a| a % &order).collect()))
            .filter(|(c, _): &(F::Elem, Vec<BigUint>)| !field.is_zero(c))
            .collect();
        FieldPoly { terms }
    }
}

/// A polynomial compiled for evaluation on `((Z/qZ)^*)^n`.
///
/// Only valid at points with every coordinate nonzero, since exponents have
/// been reduced modulo `q - 1`.
#[derive(Debug, Clone)]
pub struct FieldPoly<F: PrimeField> {
    terms: Vec<(F::Elem, Vec<BigUint>)>,
}

impl<F: PrimeField> FieldPoly<F> {
    pub fn eval(&self, field: &F, point: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(field.zero(), |acc, (c, e)| {
            let term = e
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (a, x)| field.mul(&t, &field.pow(x, a)));
            field.add(&acc, &term)
        })
    }
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex(a: &[BigUint], b: &[BigUint]) -> Ordering {
    let da: BigUint = a.iter().sum();
    let db: BigUint = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// `reduce_exponents(prod factors)` via `G_{j+1} = bar(G_j * bar(g_{j+1}))`,
/// so no intermediate has more than `min(prod m_j, prod d_i)` terms in the
/// reduced variables.
///
/// # Panics
/// If `factors` is empty or the factors disagree on the variable count.
pub fn reduced_product(factors: &[SparsePoly], modulus: &ReductionModulus) -> SparsePoly {
    let (first, rest) = factors.split_first().expect("at least one factor");
    let mut acc = first.reduce_exponents(modulus);
    for g in rest {
        if acc.is_zero() {
            break;
        }
        acc = acc.multiply_reduced(&g.reduce_exponents(modulus), modulus);
    }
    acc
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[{}]({})", self.num_vars, self)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.multiply(rhs)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl SparsePoly {
    /// Whether every coefficient is ±1 (`σ(F)` is then 1).
    pub fn has_unit_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.abs().is_one())
    }
}
