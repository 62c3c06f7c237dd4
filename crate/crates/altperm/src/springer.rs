//! Zigzag (secant/tangent) numbers, Springer numbers, the count of
//! reverse-complement-fixed up-down permutations, and the LLE/BE
//! q-analogues.
//!
//! Three independent routes exist for the Springer sequence and are kept
//! separate on purpose — their agreement is the theorem under test:
//!
//! - [`springer_numbers`]: EGF coefficients of `1/(cos t - sin t)`;
//! - [`rc_count_recurrence`]: the pair-selection recurrence
//!   `b_n = Σ_k 2^k C(n-1,k) E_k b_{n-k-1}`;
//! - [`brute_rc_count`]: filter the up-down permutations of length `2n`
//!   for fixedness under reverse-complement and count.

use num::{BigRational, BigUint, One, Zero};
use thiserror::Error;

use crate::dist::{egf_distribution, DistError, DistributionPolynomial};
use crate::laurent::LaurentPolynomial;
use crate::perm::{self, AltClass, PermError};
use crate::series::{self, LaurentSeries};

#[derive(Debug, Error, PartialEq)]
pub enum SpringerError {
    #[error("zigzag recurrence and EGF disagree at index {0}")]
    EulerCrossCheck(usize),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn binomial(n: usize, k: usize) -> BigUint {
    num::integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Zigzag numbers by the halved binomial self-convolution, no series
/// involved.
pub(crate) fn euler_by_recurrence(max: usize) -> Vec<BigUint> {
    let mut e = vec![BigUint::one()];
    if max >= 1 {
        e.push(BigUint::one());
    }
    for n in 1..max {
        // E_{n+1} = (1/2) Σ_{k=0..n} C(n,k) E_{n-k} E_k
        let mut sum = BigUint::zero();
        for k in 0..=n {
            sum += binomial(n, k) * &e[n - k] * &e[k];
        }
        e.push(sum / 2u32);
    }
    e
}

/// Zigzag numbers `E_0 ..= E_max`, computed by the recurrence and
/// cross-checked against the `sec t + tan t` EGF at every index.
pub fn euler_numbers(max: usize) -> Result<Vec<BigUint>, SpringerError> {
    let table = euler_by_recurrence(max);
    let egf = series::sec_plus_tan::<BigRational>(max);
    for (n, value) in table.iter().enumerate() {
        let from_series = egf.egf_coefficient(n).expect("order covers the range");
        if from_series != BigRational::from_integer(value.clone().into()) {
            return Err(SpringerError::EulerCrossCheck(n));
        }
    }
    Ok(table)
}

/// Springer numbers `S_0 ..= S_max` from the EGF `1/(cos t - sin t)`.
pub fn springer_numbers(max: usize) -> Vec<BigUint> {
    let egf = series::springer_egf::<BigRational>(max);
    (0..=max)
        .map(|n| {
            let c = egf.egf_coefficient(n).expect("order covers the range");
            assert!(c.is_integer(), "Springer EGF coefficient must be integral");
            c.to_integer().to_biguint().expect("Springer numbers are positive")
        })
        .collect()
}

/// `b_0 ..= b_max` where `b_n` counts the reverse-complement-fixed up-down
/// permutations of length `2n`, by the recurrence that picks the values
/// left of the extreme entry: `b_n = Σ_{k=0}^{n-1} 2^k C(n-1,k) E_k
/// b_{n-k-1}`.
pub fn rc_count_recurrence(max: usize) -> Vec<BigUint> {
    let e = euler_by_recurrence(max.saturating_sub(1));
    let mut b = vec![BigUint::one()];
    for n in 1..=max {
        let mut sum = BigUint::zero();
        for k in 0..n {
            sum += (BigUint::one() << k) * binomial(n - 1, k) * &e[k] * &b[n - 1 - k];
        }
        b.push(sum);
    }
    b
}

/// `|UD^{rc}_{2 half_n}|` by filtering the up-down generator.
pub fn brute_rc_count(half_n: usize) -> BigUint {
    let count = perm::par_fold_alternating(
        2 * half_n,
        AltClass::UpDown,
        || 0u64,
        |acc, values| {
            if perm::is_rc_fixed_slice(values) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    BigUint::from(count)
}

/// Which marking the q-analogue series carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QAnalogue {
    /// `q` marks LLE (entries left of the leftmost extreme entry).
    Lle,
    /// `p` marks BE (half the entries between the extreme entries).
    Be,
    /// Both markings at once.
    Joint,
}

/// The q-analogue integrand is `E(2qz) / (cos pz - sin pz)` with the
/// marking variables specialized to 1 where unused; the series is its
/// antiderivative. Coefficient `n` (EGF-normalized) is the distribution of
/// the extreme statistics over the fixed permutations of length `2n`.
pub fn gf_q_analogue(which: QAnalogue, order: usize) -> LaurentSeries {
    let two = LaurentPolynomial::from_int(2);
    let two_q = LaurentPolynomial::monomial(0, 1, BigRational::from_integer(2.into()));
    let p = LaurentPolynomial::var_p();
    let (zigzag_arg, recip_arg) = match which {
        QAnalogue::Lle => (two_q.clone(), LaurentPolynomial::one()),
        QAnalogue::Be => (two, p.clone()),
        QAnalogue::Joint => (two_q, p),
    };
    let zigzag = series::sec_plus_tan::<LaurentPolynomial>(order)
        .scale_var(&zigzag_arg)
        .expect("monomial scale");
    let recip = series::springer_egf::<LaurentPolynomial>(order)
        .scale_var(&recip_arg)
        .expect("monomial scale");
    zigzag.mul(&recip).integrate()
}

/// EGF coefficient `n` of the chosen q-analogue as a checked distribution
/// polynomial.
pub fn q_analogue_coefficient(
    which: QAnalogue,
    n: usize,
) -> Result<DistributionPolynomial, SpringerError> {
    let series = gf_q_analogue(which, n);
    Ok(egf_distribution(&series, n, "q-analogue coefficient")?)
}

/// `Σ p^be q^lle` over the reverse-complement-fixed up-down permutations
/// of the given (even) length.
pub fn brute_lle_be(len: usize) -> Result<DistributionPolynomial, SpringerError> {
    if len % 2 != 0 {
        return Err(SpringerError::Perm(PermError::OddLength(len)));
    }
    let mut out = DistributionPolynomial::zero();
    for pi in perm::enumerate_rc_fixed(len)? {
        if pi.is_empty() {
            out.add_unit_term(0, 0);
            continue;
        }
        let (lle, be) = pi.extreme_stats()?;
        out.add_unit_term(be as u32, lle as u32);
    }
    Ok(out)
}

/// The four q-deformations of the Springer EGF `1/(cos t - sin t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpringerDeformation {
    /// `1/(cos t - q sin t)`: `q` scales the sine term.
    ScaledSine,
    /// `1/(cos t - sin qt)`: `q` dilates the sine argument.
    SineArgument,
    /// `1/(cos qt - sin t)`: `q` dilates the cosine argument.
    CosineArgument,
    /// `1/(cos t - sin t)^q`: `q` exponentiates the whole EGF.
    PowerExponent,
}

impl SpringerDeformation {
    pub const ALL: [SpringerDeformation; 4] = [
        SpringerDeformation::ScaledSine,
        SpringerDeformation::SineArgument,
        SpringerDeformation::CosineArgument,
        SpringerDeformation::PowerExponent,
    ];

    /// 1-based index used on the command line.
    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i.checked_sub(1)?).copied()
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&d| d == self).unwrap() + 1
    }

    pub fn describe(self) -> &'static str {
        match self {
            SpringerDeformation::ScaledSine => "1/(cos t - q sin t)",
            SpringerDeformation::SineArgument => "1/(cos t - sin qt)",
            SpringerDeformation::CosineArgument => "1/(cos qt - sin t)",
            SpringerDeformation::PowerExponent => "1/(cos t - sin t)^q",
        }
    }
}

/// Expand one q-deformation of the Springer EGF. At `q = 1` each reduces to
/// the plain Springer EGF.
pub fn deformed_springer_egf(kind: SpringerDeformation, order: usize) -> LaurentSeries {
    let q = LaurentPolynomial::var_q();
    let cos = series::cos::<LaurentPolynomial>(order);
    let sin = series::sin::<LaurentPolynomial>(order);
    match kind {
        SpringerDeformation::ScaledSine => cos
            .sub(&sin.mul_scalar(&q))
            .reciprocal()
            .expect("constant term 1"),
        SpringerDeformation::SineArgument => cos
            .sub(&sin.scale_var(&q).expect("monomial scale"))
            .reciprocal()
            .expect("constant term 1"),
        SpringerDeformation::CosineArgument => cos
            .scale_var(&q)
            .expect("monomial scale")
            .sub(&sin)
            .reciprocal()
            .expect("constant term 1"),
        SpringerDeformation::PowerExponent => cos
            .sub(&sin)
            .pow(&q.neg())
            .expect("constant term 1"),
    }
}

/// EGF coefficient `n` of a deformation, checked to be a polynomial with
/// nonnegative integer coefficients.
pub fn deformed_springer_coefficient(
    kind: SpringerDeformation,
    n: usize,
) -> Result<DistributionPolynomial, SpringerError> {
    let series = deformed_springer_egf(kind, n);
    Ok(egf_distribution(&series, n, kind.describe())?)
}
