//! Generalized Fibonacci and Lucas sequences.
//!
//! Both sequences obey `u(k+1) = p·u(k) + q·u(k-1)` and differ only in their
//! seeds: Fibonacci starts `0, 1`, Lucas starts `2, p`. The parameters are the
//! *values* of the polynomials `p(x)` and `q(x)` at some point `x`; use
//! [`Polynomial::eval`] (or [`RecurrenceParams::from_polynomials`]) to get
//! there from coefficient lists.
//!
//! Two arithmetic modes are provided behind the [`Recurrence`] trait:
//! [`RecurrenceParams`] runs over `f64`, [`IntRecurrenceParams`] over
//! arbitrary-precision integers.
//!
//! ```
//! use fibcirc::polyseq::{fibonacci_seq, lucas_seq, IntRecurrenceParams};
//!
//! let classic = IntRecurrenceParams::new(1, 1).unwrap();
//! let fib: Vec<i64> = fibonacci_seq(&classic, 6).iter().map(|v| v.try_into().unwrap()).collect();
//! assert_eq!(fib, [0, 1, 1, 2, 3, 5]);
//! let luc: Vec<i64> = lucas_seq(&classic, 5).iter().map(|v| v.try_into().unwrap()).collect();
//! assert_eq!(luc, [2, 1, 3, 4, 7]);
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Rejected recurrence parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("p must be nonzero")]
    ZeroP,
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("p^2 + 4q must be strictly positive (got {0})")]
    NonPositiveDiscriminant(String),
    #[error("parameters must be finite")]
    NonFinite,
}

/// A real polynomial, constant term first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Degree of the stored coefficient list (`len - 1`); `None` when empty.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| *c == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

/// Convenience wrapper for [`Polynomial::eval`].
pub fn eval_polynomial(poly: &Polynomial, x: f64) -> f64 {
    poly.eval(x)
}

/// Real recurrence parameters with `p != 0`, `q != 0` and `p² + 4q > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceParams {
    p: f64,
    q: f64,
}

impl RecurrenceParams {
    pub fn new(p: f64, q: f64) -> Result<Self, ParamError> {
        if !p.is_finite() || !q.is_finite() {
            return Err(ParamError::NonFinite);
        }
        if p == 0.0 {
            return Err(ParamError::ZeroP);
        }
        if q == 0.0 {
            return Err(ParamError::ZeroQ);
        }
        let disc = p * p + 4.0 * q;
        if disc <= 0.0 {
            return Err(ParamError::NonPositiveDiscriminant(disc.to_string()));
        }
        Ok(Self { p, q })
    }

    /// Evaluates `p(x)` and `q(x)` and validates the result.
    pub fn from_polynomials(p: &Polynomial, q: &Polynomial, x: f64) -> Result<Self, ParamError> {
        Self::new(p.eval(x), q.eval(x))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn discriminant(&self) -> f64 {
        self.p * self.p + 4.0 * self.q
    }

    pub fn roots(&self) -> CharacteristicRoots {
        char_roots(self)
    }
}

/// Exact integer recurrence parameters, same constraints as [`RecurrenceParams`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntRecurrenceParams {
    p: BigInt,
    q: BigInt,
}

impl IntRecurrenceParams {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ParamError> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() {
            return Err(ParamError::ZeroP);
        }
        if q.is_zero() {
            return Err(ParamError::ZeroQ);
        }
        let disc = &p * &p + BigInt::from(4) * &q;
        if !disc.is_positive() {
            return Err(ParamError::NonPositiveDiscriminant(disc.to_string()));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// The same parameters in floating-point mode.
    pub fn to_float(&self) -> Result<RecurrenceParams, ParamError> {
        let p = self.p.to_f64().ok_or(ParamError::NonFinite)?;
        let q = self.q.to_f64().ok_or(ParamError::NonFinite)?;
        RecurrenceParams::new(p, q)
    }
}

/// Arithmetic needed to run the shared recurrence.
pub trait Recurrence {
    type Value: Clone;

    fn p_value(&self) -> Self::Value;
    fn q_value(&self) -> Self::Value;
    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn two(&self) -> Self::Value;
    /// `p·current + q·previous`
    fn advance(&self, previous: &Self::Value, current: &Self::Value) -> Self::Value;
}

impl Recurrence for RecurrenceParams {
    type Value = f64;

    fn p_value(&self) -> f64 {
        self.p
    }
    fn q_value(&self) -> f64 {
        self.q
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn two(&self) -> f64 {
        2.0
    }
    fn advance(&self, previous: &f64, current: &f64) -> f64 {
        self.p * current + self.q * previous
    }
}

impl Recurrence for IntRecurrenceParams {
    type Value = BigInt;

    fn p_value(&self) -> BigInt {
        self.p.clone()
    }
    fn q_value(&self) -> BigInt {
        self.q.clone()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn two(&self) -> BigInt {
        BigInt::from(2)
    }
    fn advance(&self, previous: &BigInt, current: &BigInt) -> BigInt {
        &self.p * current + &self.q * previous
    }
}

fn run_recurrence<R: Recurrence>(params: &R, first: R::Value, second: R::Value, count: usize) -> Vec<R::Value> {
    let mut out = Vec::with_capacity(count);
    let (mut prev, mut cur) = (first, second);
    for _ in 0..count {
        let next = params.advance(&prev, &cur);
        out.push(prev);
        prev = cur;
        cur = next;
    }
    out
}

/// `F_0, …, F_{count-1}`.
pub fn fibonacci_seq<R: Recurrence>(params: &R, count: usize) -> Vec<R::Value> {
    run_recurrence(params, params.zero(), params.one(), count)
}

/// `L_0, …, L_{count-1}`.
pub fn lucas_seq<R: Recurrence>(params: &R, count: usize) -> Vec<R::Value> {
    run_recurrence(params, params.two(), params.p_value(), count)
}

/// Roots `alpha >= beta` of `v² - p·v - q = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub alpha: f64,
    pub beta: f64,
}

pub fn char_roots(params: &RecurrenceParams) -> CharacteristicRoots {
    let sqrt_disc = params.discriminant().sqrt();
    let p = params.p;
    // Pick the non-cancelling root first, then recover the other from alpha·beta = -q.
    let big = if p >= 0.0 { (p + sqrt_disc) / 2.0 } else { (p - sqrt_disc) / 2.0 };
    let small = -params.q / big;
    let (alpha, beta) = if big >= small { (big, small) } else { (small, big) };
    CharacteristicRoots { alpha, beta }
}

/// `(alpha^n - beta^n) / (alpha - beta)`.
pub fn fibonacci_binet(params: &RecurrenceParams, n: u32) -> f64 {
    let CharacteristicRoots { alpha, beta } = char_roots(params);
    let n = n as i32;
    (alpha.powi(n) - beta.powi(n)) / params.discriminant().sqrt()
}

/// `alpha^n + beta^n`.
pub fn lucas_binet(params: &RecurrenceParams, n: u32) -> f64 {
    let CharacteristicRoots { alpha, beta } = char_roots(params);
    let n = n as i32;
    alpha.powi(n) + beta.powi(n)
}
