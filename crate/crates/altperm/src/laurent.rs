//! Sparse Laurent polynomials in the two marking variables `p` and `q`,
//! with exact rational coefficients.
//!
//! Exponents may be negative: the closed forms for the joint distributions
//! route through monomials like `1/p`, `1/(pq)` before the final
//! coefficients collapse back to genuine polynomials. Supports stay tiny
//! (a handful of terms per series coefficient), so a sorted map is plenty.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exponent pair `(e_p, e_q)`.
pub type Exponents = (i64, i64);

/// A finitely supported map from exponent pairs to nonzero rationals.
///
/// Terms are kept in lexicographic `(e_p, e_q)` order, which doubles as the
/// canonical display and serialization order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<Exponents, BigRational>,
}

impl LaurentPolynomial {
    /// The zero polynomial (empty support).
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::from_ratio(BigRational::one())
    }

    /// A single term `coeff * p^ep * q^eq`. Zero coefficients collapse to zero.
    pub fn monomial(ep: i64, eq: i64, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((ep, eq), coeff);
        }
        Self { terms }
    }

    /// The variable `p`.
    pub fn var_p() -> Self {
        Self::monomial(1, 0, BigRational::one())
    }

    /// The variable `q`.
    pub fn var_q() -> Self {
        Self::monomial(0, 1, BigRational::one())
    }

    /// Constant polynomial with the given rational value.
    pub fn from_ratio(r: BigRational) -> Self {
        Self::monomial(0, 0, r)
    }

    /// Constant polynomial with the given integer value.
    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the support is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when no exponent is negative (an ordinary polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(ep, eq)| ep >= 0 && eq >= 0)
    }

    /// Iterate terms in canonical `(e_p, e_q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `p^ep q^eq` (zero when absent).
    pub fn coeff(&self, ep: i64, eq: i64) -> BigRational {
        self.terms.get(&(ep, eq)).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert_add(terms: &mut BTreeMap<Exponents, BigRational>, exp: Exponents, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            terms.remove(&exp);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&exp, c) in &rhs.terms {
            Self::insert_add(&mut terms, exp, c);
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (&(ap, aq), ac) in &self.terms {
            for (&(bp, bq), bc) in &rhs.terms {
                Self::insert_add(&mut terms, (ap + bp, aq + bq), &(ac * bc));
            }
        }
        Self { terms }
    }

    /// Multiplicative inverse. Defined only for single-term (monomial)
    /// values, which is all the closed forms ever need.
    pub fn invert(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(ep, eq), c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(-ep, -eq, c.recip()))
    }

    /// Exchange the roles of `p` and `q`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(ep, eq), c)| ((eq, ep), c.clone())).collect(),
        }
    }

    /// Substitute `p -> 1/p` and `q -> 1/q` (negate all exponents).
    pub fn invert_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(ep, eq), c)| ((-ep, -eq), c.clone())).collect(),
        }
    }

    /// Evaluate at `p = q = 1` (the sum of all coefficients).
    pub fn eval_at_ones(&self) -> BigRational {
        let mut total = BigRational::zero();
        for c in self.terms.values() {
            total += c;
        }
        total
    }

    /// `self^n` for `n >= 0` by repeated multiplication (exponents stay tiny).
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Writes one `c * p^a * q^b` term, suppressing unit parts.
fn fmt_term(f: &mut fmt::Formatter<'_>, exp: Exponents, coeff: &BigRational) -> fmt::Result {
    let (ep, eq) = exp;
    let unit_coeff = coeff.is_one();
    if ep == 0 && eq == 0 {
        return write!(f, "{coeff}");
    }
    if !unit_coeff {
        write!(f, "{coeff}")?;
    }
    if ep != 0 {
        if ep == 1 {
            write!(f, "p")?;
        } else {
            write!(f, "p^{ep}")?;
        }
    }
    if eq != 0 {
        if eq == 1 {
            write!(f, "q")?;
        } else {
            write!(f, "q^{eq}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&exp, coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_term(f, exp, &coeff.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPolynomial {
        LaurentPolynomial::var_q()
    }

    fn p() -> LaurentPolynomial {
        LaurentPolynomial::var_p()
    }

    #[test]
    fn ring_basics() {
        let x = p().mul(&q().pow(2)).add(&p().pow(2).mul(&q()));
        assert_eq!(x.num_terms(), 2);
        assert_eq!(x.coeff(1, 2), BigRational::one());
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.mul(&LaurentPolynomial::one()), x);
        assert!(x.mul(&LaurentPolynomial::zero()).is_zero());
    }

    #[test]
    fn invert_monomial_only() {
        let m = LaurentPolynomial::monomial(1, 1, BigRational::from_integer(2.into()));
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv), LaurentPolynomial::one());
        assert!(p().add(&q()).invert().is_none());
        assert!(LaurentPolynomial::zero().invert().is_none());
    }

    #[test]
    fn invert_vars_negates_exponents() {
        // pq^2 + p^2 q  ->  p^-1 q^-2 + p^-2 q^-1
        let x = p().mul(&q().pow(2)).add(&p().pow(2).mul(&q()));
        let y = x.invert_vars();
        assert_eq!(y.coeff(-1, -2), BigRational::one());
        assert_eq!(y.coeff(-2, -1), BigRational::one());
        assert_eq!(y.invert_vars(), x);
    }

    #[test]
    fn polynomial_predicate() {
        assert!(p().add(&q()).is_polynomial());
        assert!(!p().invert_vars().is_polynomial());
    }

    #[test]
    fn display_is_canonical() {
        let two = LaurentPolynomial::from_int(2);
        let three = LaurentPolynomial::from_int(3);
        let x = two.mul(&q()).add(&three.mul(&q().pow(2)));
        assert_eq!(x.to_string(), "2q + 3q^2");
        // lexicographic (e_p, e_q) order puts q-only terms first
        let y = p().add(&LaurentPolynomial::from_int(2).mul(&q()));
        assert_eq!(y.to_string(), "2q + p");
        let half = LaurentPolynomial::from_ratio(BigRational::new(1.into(), 2.into()));
        assert_eq!(half.mul(&p().invert().unwrap()).to_string(), "1/2p^-1");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
        assert_eq!(q().sub(&p()).to_string(), "q - p");
        assert_eq!(p().sub(&q()).to_string(), "-q + p");
    }

    #[test]
    fn eval_at_ones_sums_coefficients() {
        let x = p().mul(&q().pow(2)).add(&p().pow(2).mul(&q()));
        assert_eq!(x.eval_at_ones(), BigRational::from_integer(2.into()));
    }
}
