//! Exact decision procedures for subtori and torsion points of sparse
//! integer polynomial systems.
//!
//! The crate answers two questions about a system of polynomials in
//! `Z[x_1, ..., x_n]` given in the sparse (monomial-list) encoding:
//!
//! - **Subtorus containment.** Is the algebraic subgroup
//!   `T = {x : x^{d_1} = ... = x^{d_r} = 1}` of `(C^*)^n` contained in the zero
//!   set of a system of products `prod_j f_{i,j}`? See [`subtorus`].
//! - **Torsion points.** Does the system vanish at a point whose coordinates
//!   are roots of unity of prescribed orders? See [`torsion`].
//!
//! Both are decided without ever expanding a polynomial of huge degree:
//! exponents are reduced modulo the orders (the "bar" reduction in
//! [`poly::SparsePoly::reduce_exponents`]) or the system is evaluated over a
//! prime field `Z/qZ` with `q = cM + 1`.
//!
//! The [`oracle`] module is an independent ground truth (cyclotomic
//! polynomials, exact evaluation at roots of unity, cyclic resultants) used to
//! cross-check the fast paths on small instances.
//!
//! ## Modules
//!
//! - [`poly`]: sparse multivariate polynomials with big-integer exponents.
//! - [`lattice`]: Hermite and Smith normal forms, subtorus diagonalization.
//! - [`primes`]: primality, factoring, progression primes, roots of unity mod q.
//! - [`subtorus`]: containment decisions and non-containment certificates.
//! - [`torsion`]: univariate and multivariate torsion detection.
//! - [`instance`]: the JSON instance file format.
//! - [`oracle`]: dense cyclotomic arithmetic and brute-force enumeration.
//!
//! ## Parallelism
//!
//! With the default `parallel` feature the point sweeps, divisor scans and
//! prime searches run on rayon. Every parallel search selects the first hit in
//! the documented sequential order, so outputs are identical with the feature
//! on or off. [`exec::ExecPolicy`] selects the strategy at runtime.

pub mod exec;
pub mod instance;
pub mod lattice;
pub mod modarith;
pub mod oracle;
pub mod poly;
pub mod primes;
pub mod real;
pub mod subtorus;
pub mod torsion;


pub use lattice::{DiagonalSubtorus, IntMatrix, SmithFactorization};
pub use poly::{ReductionModulus, SparsePoly};
pub use primes::{LinnikConfig, ProgressionPrime};
pub use subtorus::{NonContainmentCertificate, ProductSystem};
pub use torsion::{TorsionInstance, TorsionVerdict};



