//! Exact truncated formal power series in a single variable `t`.
//!
//! Coefficients live in a pluggable commutative ring: plain rationals for
//! the integer generating functions, or [`LaurentPolynomial`] when the
//! series carries the marking variables `p`, `q`. Every operation is exact;
//! no floating point appears anywhere in this module.
//!
//! A series explicitly carries its truncation order `N` (the highest
//! retained power of `t`). Binary operations return the minimum of the
//! operand orders, integration raises the order by one, differentiation
//! lowers it by one, so precision never silently degrades.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::laurent::LaurentPolynomial;

/// Errors from series operations whose preconditions can fail.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term is not invertible in the coefficient ring")]
    NonInvertibleConstant,
    #[error("exp requires a series with constant term 0")]
    ExpConstantTerm,
    #[error("log and pow require a series with constant term 1")]
    LogConstantTerm,
    #[error("scale factor must be an invertible monomial in the coefficient ring")]
    NonMonomialScale,
    #[error("coefficient index {index} exceeds truncation order {order}")]
    OrderExceeded { index: usize, order: usize },
}

/// A commutative coefficient ring with exact arithmetic.
///
/// `from_ratio` embeds the rationals, which also provides every scalar the
/// calculus operations need (1/n for integration, n for differentiation,
/// n! for EGF normalization).
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_ratio(r: BigRational) -> Self;
    /// Multiplicative inverse, where the ring supports one for this value.
    fn invert(&self) -> Option<Self>;
    /// Whether the value may be used as a variable-scaling factor in
    /// [`TruncatedSeries::scale_var`].
    fn valid_scale_factor(&self) -> bool;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_ratio(r: BigRational) -> Self {
        r
    }
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn valid_scale_factor(&self) -> bool {
        true
    }
}

impl Coefficient for LaurentPolynomial {
    fn zero() -> Self {
        LaurentPolynomial::zero()
    }
    fn one() -> Self {
        LaurentPolynomial::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPolynomial::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        LaurentPolynomial::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        LaurentPolynomial::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        LaurentPolynomial::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        LaurentPolynomial::mul(self, rhs)
    }
    fn from_ratio(r: BigRational) -> Self {
        LaurentPolynomial::from_ratio(r)
    }
    fn invert(&self) -> Option<Self> {
        LaurentPolynomial::invert(self)
    }
    /// Only invertible monomials (`2q`, `pq`, `1/q`, ...) may scale the
    /// series variable; general sums would change the series shape.
    fn valid_scale_factor(&self) -> bool {
        self.is_monomial()
    }
}

/// Series over plain rationals.
pub type RationalSeries = TruncatedSeries<BigRational>;
/// Series whose coefficients carry the marking variables `p`, `q`.
pub type LaurentSeries = TruncatedSeries<LaurentPolynomial>;

/// Coefficients of `t^0 ..= t^N` over the ring `C`, with `N` explicit.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Build from explicit coefficients for `t^0 ..= t^len-1`.
    ///
    /// Panics on an empty vector: a series always knows at least `t^0`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series must carry at least the t^0 coefficient");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The monomial `c * t` (zero constant term).
    pub fn linear(c: C, order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = c;
        s
    }

    /// Highest retained power of `t`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^n`; `n` must not exceed the order.
    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Constant term `f(0)`.
    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    /// Drop coefficients above `order` (no-op when already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..keep].to_vec() }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Self {
            coeffs: (0..n).map(|i| f(&self.coeffs[i], &rhs.coeffs[i])).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, C::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, C::sub)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    /// Multiply every coefficient by a fixed ring element.
    pub fn mul_scalar(&self, c: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self { coeffs: out }
    }

    /// `1/f` to the same order. Requires `f(0)` invertible in the ring.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let f0_inv = self.coeffs[0].invert().ok_or(SeriesError::NonInvertibleConstant)?;
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        out.push(f0_inv.clone());
        for m in 1..n {
            // g_m = -f0^{-1} * sum_{k=1..m} f_k g_{m-k}
            let mut acc = C::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].mul(&out[m - k]));
            }
            out.push(f0_inv.mul(&acc).neg());
        }
        Ok(Self { coeffs: out })
    }

    /// Termwise derivative; the order drops by one (an order-0 input yields
    /// the order-0 zero series).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.mul(&C::from_ratio(BigRational::from_integer(BigInt::from(n)))))
            .collect();
        Self { coeffs }
    }

    /// Antiderivative with constant term 0; the order rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            let inv = BigRational::new(BigInt::one(), BigInt::from(n + 1));
            coeffs.push(c.mul(&C::from_ratio(inv)));
        }
        Self { coeffs }
    }

    /// `f(c*t)`: the `t^n` coefficient is multiplied by `c^n`.
    ///
    /// For Laurent coefficients `c` must be an invertible monomial; every
    /// use in the closed forms is one (`q`, `pq`, `1/q`, `1/(pq)`, `2q`).
    pub fn scale_var(&self, c: &C) -> Result<Self, SeriesError> {
        if !c.valid_scale_factor() {
            return Err(SeriesError::NonMonomialScale);
        }
        let mut power = C::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, a) in self.coeffs.iter().enumerate() {
            if n > 0 {
                power = power.mul(c);
            }
            coeffs.push(a.mul(&power));
        }
        Ok(Self { coeffs })
    }

    /// `exp(f)` for `f(0) = 0`, by the standard coefficient recurrence.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n);
        out.push(C::one());
        for m in 1..n {
            // m * h_m = sum_{k=1..m} k * f_k * h_{m-k}
            let mut acc = C::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let kf = self.coeffs[k].mul(&C::from_ratio(BigRational::from_integer(BigInt::from(k))));
                acc = acc.add(&kf.mul(&out[m - k]));
            }
            out.push(acc.mul(&C::from_ratio(BigRational::new(BigInt::one(), BigInt::from(m)))));
        }
        Ok(Self { coeffs: out })
    }

    /// `log(f)` for `f(0) = 1`, via `integrate(f'/f)`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != C::one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let quotient = self.derivative().mul(&self.reciprocal()?);
        Ok(quotient.integrate())
    }

    /// `f^e = exp(e * log f)` for `f(0) = 1` and any ring element `e`.
    pub fn pow(&self, e: &C) -> Result<Self, SeriesError> {
        self.log()?.mul_scalar(e).exp()
    }

    /// `n! * [t^n] f` — the coefficient in exponential-generating-function
    /// normalization.
    pub fn egf_coefficient(&self, n: usize) -> Result<C, SeriesError> {
        if n > self.order() {
            return Err(SeriesError::OrderExceeded { index: n, order: self.order() });
        }
        Ok(self.coeffs[n].mul(&C::from_ratio(BigRational::from_integer(factorial(n)))))
    }
}

impl TruncatedSeries<LaurentPolynomial> {
    /// Substitute `p -> 1/p`, `q -> 1/q` in every coefficient.
    pub fn invert_vars(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(LaurentPolynomial::invert_vars).collect(),
        }
    }
}

impl<C: Coefficient> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "series[order {}: ", self.order())?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "t^{n}: {c:?}")?;
        }
        write!(f, "]")
    }
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Maclaurin series of `sin t`.
pub fn sin<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    trig_alternating(order, 1)
}

/// Maclaurin series of `cos t`.
pub fn cos<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    trig_alternating(order, 0)
}

/// `sin` and `cos` share the (-1)^k / n! shape; `phase` selects the parity.
fn trig_alternating<C: Coefficient>(order: usize, phase: usize) -> TruncatedSeries<C> {
    let mut coeffs = vec![C::zero(); order + 1];
    for (n, slot) in coeffs.iter_mut().enumerate() {
        if n % 2 != phase {
            continue;
        }
        let sign = if (n / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        *slot = C::from_ratio(BigRational::new(sign, factorial(n)));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Maclaurin series of `sec t = 1/cos t`.
pub fn sec<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    cos::<C>(order).reciprocal().expect("cos has constant term 1")
}

/// Maclaurin series of `tan t = sin t / cos t`.
pub fn tan<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    sin::<C>(order).mul(&sec::<C>(order))
}

/// `sec t + tan t`, the exponential generating function of the zigzag
/// (secant/tangent) numbers.
pub fn sec_plus_tan<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    sec::<C>(order).add(&tan::<C>(order))
}

/// `1/(cos t - sin t)`, the exponential generating function of the
/// Springer numbers.
pub fn springer_egf<C: Coefficient>(order: usize) -> TruncatedSeries<C> {
    cos::<C>(order)
        .sub(&sin::<C>(order))
        .reciprocal()
        .expect("cos - sin has constant term 1")
}
