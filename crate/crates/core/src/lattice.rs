//! Integer matrices, Hermite and Smith normal forms, and the monomial change
//! of variables that puts a subtorus presentation in diagonal form.
//!
//! Convention: exponent vectors are columns. Writing `x = z^U` means
//! `x_j = prod_i z_i^{U_ij}`, so the monomial `x^a` becomes `z^{U a}`.
//! For the Smith factorization `U M V = S` of the matrix whose columns are the
//! exponent vectors `d_1, ..., d_r`, the relations `x^{d_j} = 1` become
//! `z_i^{s_ii} = 1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Exponent, ReductionModulus, SparsePoly};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("bad matrix entry {0:?}")]
    Entry(String),
    #[error("expected a JSON array of arrays of decimal strings")]
    Shape,
    #[error("subtorus needs at least one exponent vector")]
    Empty,
}

/// Dense `rows x cols` matrix of big integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged { row: i, expected: cols, got: r.len() });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors, all of length `n`.
    pub fn from_columns(columns: &[Vec<BigInt>], n: usize) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(MatrixError::Ragged { row: j, expected: n, got: c.len() });
            }
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().magnitude().is_one()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self[(i, j)].is_zero()))
    }

    /// Largest entry bit length, for growth checks.
    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(BigInt::bits).max().unwrap_or(0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| self.row(i).iter().map(|v| serde_json::Value::String(v.to_string())).collect())
                .collect(),
        )
    }

    /// Accepts decimal strings or JSON integers.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, MatrixError> {
        let rows = v.as_array().ok_or(MatrixError::Shape)?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or(MatrixError::Shape)?
                    .iter()
                    .map(json_int)
                    .collect::<Result<Vec<BigInt>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(&parsed)
    }
}

pub(crate) fn json_int(v: &serde_json::Value) -> Result<BigInt, MatrixError> {
    match v {
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| MatrixError::Entry(s.clone())),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| MatrixError::Entry(n.to_string())),
        other => Err(MatrixError::Entry(other.to_string())),
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        IntMatrix::from_json(&v).map_err(D::Error::custom)
    }
}

/// Row-style Hermite form `U M = H`.
///
/// `H` is in row echelon form with positive pivots, and every entry above a
/// pivot lies in `[0, pivot)`. For a nonsingular square `M` this makes every
/// entry of `H` nonnegative.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for j in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let pivot = (r..m.rows)
                .filter(|&i| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(a, j)].magnitude().cmp(h[(b, j)].magnitude()));
            let Some(p) = pivot else { break };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(r, j)]);
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                clean &= h[(i, j)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, j)].div_floor(&h[(r, j)]);
            if !q.is_zero() {
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
            }
        }
        r += 1;
    }
    (u, h)
}

/// `U M V = S` with `U`, `V` unimodular and `S` diagonal, `s_ii >= 0`,
/// `s_ii | s_{i+1,i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithFactorization {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithFactorization {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithFactorization {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let min_abs = |s: &IntMatrix, t: usize, cells: &mut dyn Iterator<Item = (usize, usize)>| {
        cells
            .filter(|&(i, j)| !s[(i, j)].is_zero())
            .min_by(|&a, &b| s[a].magnitude().cmp(s[b].magnitude()))
            .map(|p| (p, t))
    };
    for t in 0..rows.min(cols) {
        let all = &mut (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some(((pi, pj), _)) = min_abs(&s, t, all) else { break };
        s.swap_rows(pi, t);
        u.swap_rows(pi, t);
        s.swap_cols(pj, t);
        v.swap_cols(pj, t);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !s[(i, t)].is_zero() {
                    let q = -s[(i, t)].div_floor(&s[(t, t)]);
                    s.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !s[(t, j)].is_zero() {
                    let q = -s[(t, j)].div_floor(&s[(t, t)]);
                    s.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                // a smaller remainder is left in row or column t; make it the pivot
                let line = &mut (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let ((pi, pj), _) = min_abs(&s, t, line).expect("nonzero remainder");
                s.swap_rows(pi, t);
                u.swap_rows(pi, t);
                s.swap_cols(pj, t);
                v.swap_cols(pj, t);
                continue;
            }
            // the pivot must divide the rest of the submatrix
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
            });
            match bad {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithFactorization { u, s, v }
}

/// A subtorus in diagonal form: under `x = z^U` it is cut out by
/// `z_i^{orders[i]} = 1` for `i < orders.len()`, other coordinates free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSubtorus {
    pub num_vars: usize,
    pub orders: Vec<BigUint>,
    pub u: IntMatrix,
}

impl DiagonalSubtorus {
    pub fn dimension(&self) -> usize {
        self.num_vars - self.orders.len()
    }

    pub fn is_full_torus(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn reduction_modulus(&self) -> ReductionModulus {
        ReductionModulus::diagonal(&self.orders, self.num_vars)
    }

    /// `prod orders`: the number of points when the subtorus is finite, and
    /// the number of its components otherwise.
    pub fn order_product(&self) -> BigUint {
        self.orders.iter().product()
    }
}

/// Diagonalizes `{x : x^{d_1} = ... = x^{d_r} = 1}` by the Smith
/// factorization of the matrix with columns `d_j`.
pub fn diagonalize_subtorus(dbars: &[Vec<BigInt>]) -> Result<DiagonalSubtorus, MatrixError> {
    let n = dbars.first().ok_or(MatrixError::Empty)?.len();
    let m = IntMatrix::from_columns(dbars, n)?;
    let smith = smith_normal_form(&m);
    let orders = smith
        .diagonal()
        .into_iter()
        .take_while(|d| !d.is_zero())
        .map(|d| d.to_biguint().expect("Smith diagonal is nonnegative"))
        .collect();
    Ok(DiagonalSubtorus { num_vars: n, orders, u: smith.u })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShiftPolicy {
    /// Multiply each polynomial by the monomial that clears negative exponents.
    #[default]
    Shift,
    /// Fail on the first negative exponent.
    Reject,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("polynomial {poly}: term {term} maps to negative exponent vector {exponent:?}")]
    NegativeExponent { poly: usize, term: String, exponent: Vec<BigInt> },
    #[error("change of variables is {rows}x{cols}, polynomial has {num_vars} variables")]
    Dimension { rows: usize, cols: usize, num_vars: usize },
    #[error("change of variables is not unimodular")]
    NotUnimodular,
}

/// Output of [`transform_system`]: `polys[k] = z^{shifts[k]} f_k(z^U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedSystem {
    pub polys: Vec<SparsePoly>,
    pub shifts: Vec<Exponent>,
}

/// Applies `x = z^U`, sending each monomial `x^a` to `z^{U a}`.
pub fn transform_system(
    system: &[SparsePoly],
    u: &IntMatrix,
    policy: ShiftPolicy,
) -> Result<TransformedSystem, TransformError> {
    if !u.is_unimodular() {
        return Err(TransformError::NotUnimodular);
    }
    let n = u.rows;
    let mut polys = Vec::with_capacity(system.len());
    let mut shifts = Vec::with_capacity(system.len());
    for (k, f) in system.iter().enumerate() {
        if f.num_vars() != n {
            return Err(TransformError::Dimension { rows: u.rows, cols: u.cols, num_vars: f.num_vars() });
        }
        let mapped: Vec<(Vec<BigInt>, &BigInt)> = f
            .sorted_terms()
            .into_iter()
            .map(|(a, c)| {
                let image = u.mul_vec(&a.iter().cloned().map(BigInt::from).collect::<Vec<_>>());
                if policy == ShiftPolicy::Reject && image.iter().any(Signed::is_negative) {
                    return Err(TransformError::NegativeExponent {
                        poly: k,
                        term: SparsePoly::monomial(a.clone(), c.clone()).to_string(),
                        exponent: image,
                    });
                }
                Ok((image, c))
            })
            .collect::<Result<_, _>>()?;
        let mut shift = vec![BigInt::zero(); n];
        for (e, _) in &mapped {
            for (s, v) in shift.iter_mut().zip(e) {
                if -v > *s {
                    *s = -v;
                }
            }
        }
        let terms = mapped.into_iter().map(|(e, c)| {
            let exp: Exponent =
                e.iter().zip(&shift).map(|(v, s)| (v + s).to_biguint().expect("shifted")).collect();
            (exp, c.clone())
        });
        polys.push(SparsePoly::from_terms(n, terms));
        shifts.push(shift.iter().map(|s| s.to_biguint().expect("nonnegative shift")).collect());
    }
    Ok(TransformedSystem { polys, shifts })
}

/// Sanity ceiling on entry growth: `n^3 log2^2(2n + max|a|)` bits.
pub fn growth_ceiling(n: usize, max_entry: &BigInt) -> u64 {
    let b = (BigInt::from(2 * n) + max_entry.abs()).bits().max(1);
    let n = n.max(1) as u64;
    n.pow(3) * b * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id), (id.clone(), id.clone()));
        let d = mat(&[&[2, 0], &[0, 3]]);
        let (u, h) = hermite_normal_form(&d);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(h, d);
        let m = mat(&[&[3, 5, -1], &[6, 1, 4], &[-2, 7, 7]]);
        let (u, h) = hermite_normal_form(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        assert!(h.is_upper_triangular());
        for j in 0..3 {
            assert!(h[(j, j)].is_positive());
            for i in 0..j {
                assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(j, j)]);
            }
        }
    }

    #[test]
    fn smith_examples() {
        let f = smith_normal_form(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.diagonal(), ints(&[1, 6]));
        assert_eq!(f.u.mul(&mat(&[&[2, 0], &[0, 3]])).mul(&f.v), f.s);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(z.s, IntMatrix::zeros(2, 3));
        assert_eq!(z.u, IntMatrix::identity(2));
        assert_eq!(z.v, IntMatrix::identity(3));
        for d in [0i64, 1, 7, -4] {
            let f = smith_normal_form(&mat(&[&[d]]));
            assert_eq!(f.diagonal(), ints(&[d.abs()]));
        }
    }

    #[test]
    fn smith_rectangular() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal(), ints(&[2, 6, 12]));
        let m = mat(&[&[6, 4], &[10, 8], &[4, 2]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.u.mul(&m).mul(&f.v), f.s);
        assert_eq!(f.diagonal(), ints(&[2, 2]));
    }

    #[test]
    fn diagonalize_examples() {
        let t = diagonalize_subtorus(&[ints(&[2, 0]), ints(&[0, 3])]).unwrap();
        assert_eq!(t.orders, vec![BigUint::from(1u32), BigUint::from(6u32)]);
        assert_eq!(t.order_product(), BigUint::from(6u32));
        let t = diagonalize_subtorus(&[ints(&[1, 1])]).unwrap();
        assert_eq!(t.orders, vec![BigUint::one()]);
        assert_eq!(t.dimension(), 1);
        let t = diagonalize_subtorus(&[ints(&[0, 0, 0])]).unwrap();
        assert!(t.is_full_torus());
        assert_eq!(t.dimension(), 3);
        assert_eq!(diagonalize_subtorus(&[]), Err(MatrixError::Empty));
    }

    #[test]
    fn diagonal_relations_match_original() {
        // z = (1, w^k) with w a primitive 6th root; x_j = prod_i z_i^{U_ij}
        // must satisfy x1^2 = x2^3 = 1, and the 6 images must be distinct
        let t = diagonalize_subtorus(&[ints(&[2, 0]), ints(&[0, 3])]).unwrap();
        let mut images = std::collections::HashSet::new();
        for k in 0..6i64 {
            let z_exp = [BigInt::zero(), BigInt::from(k)];
            let x_exp: Vec<BigInt> = (0..2)
                .map(|j| (0..2).map(|i| &t.u[(i, j)] * &z_exp[i]).sum())
                .collect();
            assert!((&x_exp[0] * BigInt::from(2)).is_multiple_of(&BigInt::from(6)));
            assert!((&x_exp[1] * BigInt::from(3)).is_multiple_of(&BigInt::from(6)));
            images.insert(x_exp.iter().map(|e| e.mod_floor(&BigInt::from(6))).collect::<Vec<_>>());
        }
        assert_eq!(images.len(), 6);
    }

    #[test]
    fn transform_examples() {
        let f = SparsePoly::parse("x1*x2 + 3*x1^2 - 1", 2).unwrap();
        let out = transform_system(std::slice::from_ref(&f), &IntMatrix::identity(2), ShiftPolicy::Reject).unwrap();
        assert_eq!(out.polys, vec![f.clone()]);
        let g = SparsePoly::parse("5*x1^3 + 2", 1).unwrap();
        let out = transform_system(std::slice::from_ref(&g), &mat(&[&[1]]), ShiftPolicy::Shift).unwrap();
        assert_eq!(out.polys, vec![g]);
        let swap = mat(&[&[0, 1], &[1, 0]]);
        let m = SparsePoly::parse("x1*x2", 2).unwrap();
        assert_eq!(transform_system(std::slice::from_ref(&m), &swap, ShiftPolicy::Reject).unwrap().polys[0], m);
        let h = SparsePoly::parse("x1^2 + x2", 2).unwrap();
        let out = transform_system(&[h], &swap, ShiftPolicy::Reject).unwrap();
        assert_eq!(out.polys[0], SparsePoly::parse("x2^2 + x1", 2).unwrap());
    }

    #[test]
    fn transform_negative_exponents() {
        // U = [[1, -1], [0, 1]] sends x2 to z1^{-1} z2
        let u = mat(&[&[1, -1], &[0, 1]]);
        let f = SparsePoly::parse("x1 + x2", 2).unwrap();
        let err = transform_system(std::slice::from_ref(&f), &u, ShiftPolicy::Reject).unwrap_err();
        match err {
            TransformError::NegativeExponent { poly, term, exponent } => {
                assert_eq!(poly, 0);
                assert_eq!(term, "x2");
                assert_eq!(exponent, ints(&[-1, 1]));
            }
            other => panic!("{other:?}"),
        }
        let out = transform_system(&[f], &u, ShiftPolicy::Shift).unwrap();
        // z1 + z1^{-1} z2, shifted by z1: z1^2 + z2
        assert_eq!(out.polys[0], SparsePoly::parse("x1^2 + x2", 2).unwrap());
        assert_eq!(out.shifts[0], vec![BigUint::one(), BigUint::zero()]);
        assert_eq!(
            transform_system(&[], &mat(&[&[2]]), ShiftPolicy::Shift),
            Err(TransformError::NotUnimodular)
        );
    }

    #[test]
    fn json_round_trip() {
        let m = mat(&[&[1, -2], &[3, 4]]);
        let v = m.to_json();
        assert_eq!(v, serde_json::json!([["1", "-2"], ["3", "4"]]));
        assert_eq!(IntMatrix::from_json(&v).unwrap(), m);
        let back: IntMatrix = serde_json::from_str(r#"[[1, "-2"], [3, 4]]"#).unwrap();
        assert_eq!(back, m);
        assert!(IntMatrix::from_json(&serde_json::json!([[1], [2, 3]])).is_err());
    }

    #[test]
    fn determinant() {
        assert_eq!(mat(&[&[2, 0], &[0, 3]]).det(), BigInt::from(6));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).det(), BigInt::zero());
        assert_eq!(mat(&[&[3, 5, -1], &[6, 1, 4], &[-2, 7, 7]]).det(), BigInt::from(-357));
    }
}
