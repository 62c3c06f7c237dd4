//! Distributions of maxima/minima and marked-mesh-pattern statistics on
//! alternating permutations, computed up to three independent ways:
//!
//! 1. brute force — sum a monomial over every permutation of the class;
//! 2. closed form — expand the exact generating function and read off the
//!    coefficient in EGF normalization;
//! 3. convolution recurrence (for the joint marked-mesh statistics).
//!
//! The `verified_*` entry points run all available routes and insist on
//! exact polynomial equality; a disagreement surfaces as an error carrying
//! both polynomials and their difference, never a silent preference.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Zero};
use thiserror::Error;

use crate::laurent::LaurentPolynomial;
use crate::perm::{self, AltClass, MmpSpec, StatKind, Symmetry};
use crate::series::{self, LaurentSeries, SeriesError, TruncatedSeries};

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("length {n} does not match the parity of the {family} family")]
    ParityMismatch { family: &'static str, n: usize },
    #[error("{context}: extracted coefficient {value} is not a polynomial with nonnegative integer coefficients")]
    NotPolynomial { context: String, value: LaurentPolynomial },
    #[error("{context}: methods disagree: {lhs} vs {rhs} (difference {diff})")]
    Mismatch {
        context: String,
        lhs: Box<DistributionPolynomial>,
        rhs: Box<DistributionPolynomial>,
        diff: LaurentPolynomial,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

// ---------------------------------------------------------------------------
// Distribution polynomials
// ---------------------------------------------------------------------------

/// An exact polynomial in `p` and/or `q` with nonnegative integer
/// coefficients — the common output form of every distribution here.
///
/// Evaluating at `p = q = 1` recovers the number of permutations summed
/// over, so [`total`](Self::total) is the corresponding zigzag number.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DistributionPolynomial {
    terms: BTreeMap<(u32, u32), BigUint>,
}

impl DistributionPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1 (the weight of a single permutation
    /// matching neither statistic).
    pub fn one() -> Self {
        let mut s = Self::zero();
        s.add_unit_term(0, 0);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `p^ep q^eq` (the contribution of one permutation).
    pub fn add_unit_term(&mut self, ep: u32, eq: u32) {
        *self.terms.entry((ep, eq)).or_insert_with(BigUint::zero) += 1u32;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, c) in &rhs.terms {
            *terms.entry(e).or_insert_with(BigUint::zero) += c;
        }
        Self { terms }
    }

    /// Terms in lexicographic `(e_p, e_q)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigUint)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, ep: u32, eq: u32) -> BigUint {
        self.terms.get(&(ep, eq)).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Value at `p = q = 1`: the number of permutations counted.
    pub fn total(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.terms.values() {
            acc += c;
        }
        acc
    }

    /// Set `p = 1`, leaving a polynomial in `q`.
    pub fn set_p_one(&self) -> Self {
        let mut out = Self::zero();
        for (&(_, eq), c) in &self.terms {
            *out.terms.entry((0, eq)).or_insert_with(BigUint::zero) += c;
        }
        out
    }

    /// Set `q = 1`, leaving a polynomial in `p`.
    pub fn set_q_one(&self) -> Self {
        let mut out = Self::zero();
        for (&(ep, _), c) in &self.terms {
            *out.terms.entry((ep, 0)).or_insert_with(BigUint::zero) += c;
        }
        out
    }

    /// Exchange the roles of `p` and `q`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(ep, eq), c)| ((eq, ep), c.clone())).collect(),
        }
    }

    /// Invariant under `p <-> q`.
    pub fn is_var_symmetric(&self) -> bool {
        *self == self.swap_vars()
    }

    pub fn to_laurent(&self) -> LaurentPolynomial {
        let mut acc = LaurentPolynomial::zero();
        for (&(ep, eq), c) in &self.terms {
            let coeff = BigRational::from_integer(BigInt::from(c.clone()));
            acc = acc.add(&LaurentPolynomial::monomial(ep as i64, eq as i64, coeff));
        }
        acc
    }

    /// Read a Laurent value back as a distribution polynomial, rejecting
    /// negative exponents, fractional coefficients, and negative
    /// coefficients. This is the polynomiality checkpoint the Laurent
    /// intermediates must pass.
    pub fn try_from_laurent(value: &LaurentPolynomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for ((ep, eq), c) in value.terms() {
            if ep < 0 || eq < 0 || !c.is_integer() {
                return None;
            }
            let n = c.numer().to_biguint()?;
            if n.is_zero() {
                continue;
            }
            terms.insert((ep as u32, eq as u32), n);
        }
        Some(Self { terms })
    }
}

impl fmt::Display for DistributionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

impl fmt::Debug for DistributionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Extract the EGF coefficient at `t^n` and pass it through the
/// polynomiality checkpoint.
pub fn egf_distribution(
    series: &LaurentSeries,
    n: usize,
    context: &str,
) -> Result<DistributionPolynomial, DistError> {
    let value = series.egf_coefficient(n)?;
    DistributionPolynomial::try_from_laurent(&value).ok_or(DistError::NotPolynomial {
        context: context.to_string(),
        value,
    })
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// The four class/parity families every distribution theorem splits into.
///
/// The same enum indexes the single-statistic forms, the joint marked-mesh
/// forms, and the joint maxima forms; in each theorem the up-down/even
/// member comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    UdEven,
    UdOdd,
    DuEven,
    DuOdd,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::UdEven, Family::UdOdd, Family::DuEven, Family::DuOdd];

    pub fn of(class: AltClass, n: usize) -> Self {
        match (class, n % 2 == 0) {
            (AltClass::UpDown, true) => Family::UdEven,
            (AltClass::UpDown, false) => Family::UdOdd,
            (AltClass::DownUp, true) => Family::DuEven,
            (AltClass::DownUp, false) => Family::DuOdd,
        }
    }

    pub fn class(self) -> AltClass {
        match self {
            Family::UdEven | Family::UdOdd => AltClass::UpDown,
            Family::DuEven | Family::DuOdd => AltClass::DownUp,
        }
    }

    pub fn even_length(self) -> bool {
        matches!(self, Family::UdEven | Family::DuEven)
    }

    pub fn accepts_length(self, n: usize) -> bool {
        (n % 2 == 0) == self.even_length()
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::UdEven => "ud-even",
            Family::UdOdd => "ud-odd",
            Family::DuEven => "du-even",
            Family::DuOdd => "du-odd",
        }
    }

    fn expect_length(self, n: usize) -> Result<(), DistError> {
        if self.accepts_length(n) {
            Ok(())
        } else {
            Err(DistError::ParityMismatch { family: self.name(), n })
        }
    }
}

/// Which closed-form family carries a given statistic on a given class and
/// length: reduce the statistic to right-to-left maxima through the
/// symmetry that equidistributes them, then read the family off the image
/// class.
pub fn single_family(class: AltClass, n: usize, kind: StatKind) -> Family {
    let image = match kind {
        StatKind::RlMax => class,
        StatKind::LrMax => class.image_under(Symmetry::Reverse, n),
        StatKind::RlMin => class.image_under(Symmetry::Complement, n),
        StatKind::LrMin => class.image_under(Symmetry::ReverseComplement, n),
    };
    Family::of(image, n)
}

// ---------------------------------------------------------------------------
// Brute-force sweeps
// ---------------------------------------------------------------------------

fn brute_sum(
    n: usize,
    class: AltClass,
    weight: impl Fn(&[u32]) -> (u32, u32) + Sync + Send,
) -> DistributionPolynomial {
    perm::par_fold_alternating(
        n,
        class,
        DistributionPolynomial::zero,
        |acc, values| {
            let (ep, eq) = weight(values);
            acc.add_unit_term(ep, eq);
        },
        |a, b| a.add(&b),
    )
}

/// `Σ q^stat` over the alternating permutations of the class.
pub fn brute_single(n: usize, class: AltClass, kind: StatKind) -> DistributionPolynomial {
    assert!(n >= 1, "distributions start at length 1");
    brute_sum(n, class, |v| (0, perm::stat_slice(v, kind) as u32))
}

/// `Σ p^{stat_p} q^{stat_q}` over the class.
pub fn brute_stat_pair(
    n: usize,
    class: AltClass,
    p_kind: StatKind,
    q_kind: StatKind,
) -> DistributionPolynomial {
    assert!(n >= 1, "distributions start at length 1");
    brute_sum(n, class, |v| {
        (perm::stat_slice(v, p_kind) as u32, perm::stat_slice(v, q_kind) as u32)
    })
}

/// `Σ p^{mmp(spec_p)} q^{mmp(spec_q)}` over the class.
pub fn brute_mmp_pair(
    n: usize,
    class: AltClass,
    p_spec: MmpSpec,
    q_spec: MmpSpec,
) -> DistributionPolynomial {
    assert!(n >= 1, "distributions start at length 1");
    brute_sum(n, class, |v| {
        (perm::mmp_count_slice(v, p_spec) as u32, perm::mmp_count_slice(v, q_spec) as u32)
    })
}

/// Joint distribution of the non-left-to-right-maxima count (marked by `p`)
/// and the non-right-to-left-maxima count (marked by `q`).
pub fn brute_joint_mmp(n: usize, class: AltClass) -> DistributionPolynomial {
    brute_mmp_pair(n, class, MmpSpec::new(0, 1, 0, 0), MmpSpec::new(1, 0, 0, 0))
}

/// Joint distribution of left-to-right maxima (`p`) and right-to-left
/// maxima (`q`).
pub fn brute_joint_maxmin(n: usize, class: AltClass) -> DistributionPolynomial {
    brute_stat_pair(n, class, StatKind::LrMax, StatKind::RlMax)
}

// ---------------------------------------------------------------------------
// Generating functions
// ---------------------------------------------------------------------------

fn lp_int(n: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_int(n)
}

fn sec_scaled(c: &LaurentPolynomial, order: usize) -> LaurentSeries {
    series::sec::<LaurentPolynomial>(order)
        .scale_var(c)
        .expect("scale factor is an invertible monomial")
}

fn pow(f: &LaurentSeries, e: &LaurentPolynomial) -> LaurentSeries {
    f.pow(e).expect("base has constant term 1")
}

/// Closed form for the distribution of right-to-left maxima on the family,
/// expanded to the given order. The `q`-marked EGF coefficients are the
/// distribution polynomials.
pub fn gf_single(family: Family, order: usize) -> LaurentSeries {
    let q = LaurentPolynomial::var_q();
    let q_inv = q.invert().unwrap();
    let one_plus_q = lp_int(1).add(&q);
    match family {
        // (sec t)^q
        Family::UdEven => pow(&series::sec(order), &q),
        // (sec t)^q * ∫_0^{qt} (sec(z/q))^{-q} dz
        Family::UdOdd => {
            let inner = pow(&sec_scaled(&q_inv, order), &q.neg())
                .integrate()
                .scale_var(&q)
                .unwrap();
            pow(&series::sec(order), &q).mul(&inner)
        }
        // 1 + ∫_0^{qt} (sec(y/q))^{1+q} ∫_0^y (sec(z/q))^{-q} dz dy
        Family::DuEven => {
            let s = sec_scaled(&q_inv, order);
            let inner = pow(&s, &q.neg()).integrate();
            let outer = pow(&s, &one_plus_q).mul(&inner).integrate().scale_var(&q).unwrap();
            TruncatedSeries::one(outer.order()).add(&outer)
        }
        // ∫_0^{qt} (sec(z/q))^{1+q} dz
        Family::DuOdd => pow(&sec_scaled(&q_inv, order), &one_plus_q)
            .integrate()
            .scale_var(&q)
            .unwrap(),
    }
}

/// Closed forms for the joint marked-mesh distributions: `p` marks entries
/// with a larger entry up-left, `q` marks entries with a larger entry
/// up-right.
pub fn gf_joint_mmp(family: Family, order: usize) -> LaurentSeries {
    let p = LaurentPolynomial::var_p();
    let q = LaurentPolynomial::var_q();
    let pq = p.mul(&q);
    // exponent 1/p + 1/q
    let exponent = p.invert().unwrap().add(&q.invert().unwrap());
    let core = pow(&sec_scaled(&pq, order), &exponent);
    // ∫_0^{qs} (sec(pz))^{-1/p} dz
    let int_left = || {
        pow(&sec_scaled(&p, order), &p.invert().unwrap().neg())
            .integrate()
            .scale_var(&q)
            .unwrap()
    };
    // ∫_0^{ps} (sec(qz))^{-1/q} dz
    let int_right = || {
        pow(&sec_scaled(&q, order), &q.invert().unwrap().neg())
            .integrate()
            .scale_var(&p)
            .unwrap()
    };
    match family {
        Family::UdEven => core.mul(&int_left()).integrate(),
        Family::UdOdd => {
            let body = core.mul(&int_left()).mul(&int_right()).integrate();
            TruncatedSeries::linear(LaurentPolynomial::one(), body.order()).add(&body)
        }
        Family::DuEven => core.mul(&int_right()).integrate(),
        Family::DuOdd => core.integrate(),
    }
}

/// Closed forms for the joint distribution of left-to-right (`p`) and
/// right-to-left (`q`) maxima, per the direct integral formulas.
pub fn gf_joint_maxmin(family: Family, order: usize) -> LaurentSeries {
    let p = LaurentPolynomial::var_p();
    let q = LaurentPolynomial::var_q();
    let pq = p.mul(&q);
    let core = pow(&sec_scaled(&pq.invert().unwrap(), order), &p.add(&q));
    // ∫_0^{s/q} (sec(z/p))^{-p} dz
    let int_left = || {
        pow(&sec_scaled(&p.invert().unwrap(), order), &p.neg())
            .integrate()
            .scale_var(&q.invert().unwrap())
            .unwrap()
    };
    // ∫_0^{s/p} (sec(z/q))^{-q} dz
    let int_right = || {
        pow(&sec_scaled(&q.invert().unwrap(), order), &q.neg())
            .integrate()
            .scale_var(&p.invert().unwrap())
            .unwrap()
    };
    let scaled = |body: LaurentSeries| body.integrate().scale_var(&pq).unwrap();
    match family {
        Family::UdEven => scaled(core.mul(&int_left())),
        Family::UdOdd => {
            let body = scaled(core.mul(&int_left()).mul(&int_right()));
            TruncatedSeries::linear(pq.clone(), body.order()).add(&body)
        }
        Family::DuEven => scaled(core.mul(&int_right())),
        Family::DuOdd => scaled(core),
    }
}

/// The same joint maxima series obtained from the marked-mesh series by the
/// substitution identity: invert `p` and `q` in every coefficient, then
/// rescale the series variable by `pq`. An independent route used to
/// cross-check [`gf_joint_maxmin`].
pub fn gf_joint_maxmin_via_subst(family: Family, order: usize) -> LaurentSeries {
    let pq = LaurentPolynomial::var_p().mul(&LaurentPolynomial::var_q());
    gf_joint_mmp(family, order).invert_vars().scale_var(&pq).unwrap()
}

// ---------------------------------------------------------------------------
// Convolution recurrences
// ---------------------------------------------------------------------------

/// Memoized specializations the convolution recurrences consume, all
/// univariate:
///
/// - `alpha[m]` — the even up-down joint polynomial at `p = 1` (in `q`);
///   with the variable renamed to `p` it is also the even down-up
///   polynomial at `q = 1`, which the down-up recurrences use as their
///   left blocks.
/// - `beta[m]` — the odd up-down joint polynomial at `p = 1` (in `q`).
/// - `gamma[m]` — the odd up-down joint polynomial at `q = 1` (in `p`).
struct RecTables {
    binom: Vec<Vec<BigRational>>,
    alpha: Vec<LaurentPolynomial>,
    beta: Vec<LaurentPolynomial>,
    gamma: Vec<LaurentPolynomial>,
}

impl RecTables {
    fn build(max_len: usize) -> Self {
        let binom = binomial_table(max_len.max(1));
        let euler = euler_rationals(max_len.max(1));

        let half_even = max_len / 2;
        let half_odd = max_len.saturating_sub(1) / 2;

        // beta[m] = Σ_{k=1..m} C(2m, 2k-1) q^{2k-1} E_{2k-1} beta[m-k], beta[0] = 1
        let mut beta = vec![LaurentPolynomial::one()];
        for m in 1..=half_odd {
            let mut acc = LaurentPolynomial::zero();
            for k in 1..=m {
                let term =
                    LaurentPolynomial::monomial(0, (2 * k - 1) as i64, binom[2 * m][2 * k - 1].clone())
                        .mul(&LaurentPolynomial::from_ratio(euler[2 * k - 1].clone()))
                        .mul(&beta[m - k]);
                acc = acc.add(&term);
            }
            beta.push(acc);
        }

        // gamma[m] = Σ_{k=1..m} C(2m, 2k-1) gamma[k-1] p^{2(m-k)+1} E_{2(m-k)+1}, gamma[0] = 1
        let mut gamma = vec![LaurentPolynomial::one()];
        for m in 1..=half_odd {
            let mut acc = LaurentPolynomial::zero();
            for k in 1..=m {
                let right = 2 * (m - k) + 1;
                let term = LaurentPolynomial::from_ratio(binom[2 * m][2 * k - 1].clone())
                    .mul(&gamma[k - 1])
                    .mul(&LaurentPolynomial::monomial(right as i64, 0, euler[right].clone()));
                acc = acc.add(&term);
            }
            gamma.push(acc);
        }

        // alpha[m] = Σ_{k=1..m} C(2m-1, 2k-1) q^{2k-1} E_{2k-1} alpha[m-k], alpha[0] = 1
        let mut alpha = vec![LaurentPolynomial::one()];
        for m in 1..=half_even {
            let mut acc = LaurentPolynomial::zero();
            for k in 1..=m {
                let term = LaurentPolynomial::monomial(
                    0,
                    (2 * k - 1) as i64,
                    binom[2 * m - 1][2 * k - 1].clone(),
                )
                .mul(&LaurentPolynomial::from_ratio(euler[2 * k - 1].clone()))
                .mul(&alpha[m - k]);
                acc = acc.add(&term);
            }
            alpha.push(acc);
        }

        Self { binom, alpha, beta, gamma }
    }

    /// `alpha[m]` with the variable renamed to `p`.
    fn alpha_in_p(&self, m: usize) -> LaurentPolynomial {
        self.alpha[m].swap_vars()
    }
}

fn binomial_table(max: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut row = vec![BigRational::zero(); n + 1];
        row[0] = BigRational::one();
        row[n] = BigRational::one();
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Zigzag numbers as rationals, straight from the EGF (the recurrence route
/// lives in [`crate::springer::euler_numbers`] and is cross-checked there).
fn euler_rationals(max: usize) -> Vec<BigRational> {
    let egf = series::sec_plus_tan::<BigRational>(max);
    (0..=max).map(|n| egf.egf_coefficient(n).unwrap()).collect()
}

/// Joint marked-mesh distribution by the binomial convolution recurrence
/// over the position of the largest entry.
pub fn rec_joint_mmp(family: Family, n: usize) -> Result<DistributionPolynomial, DistError> {
    assert!(n >= 1, "distributions start at length 1");
    family.expect_length(n)?;
    let tables = RecTables::build(n);
    let value = match family {
        // A_{2m} = Σ_k C(2m-1, 2k-1) q^{2k-1} B_{2k-1}(p,1) p^{2m-2k} A_{2m-2k}(1,q)
        Family::UdEven => {
            let m = n / 2;
            let mut acc = LaurentPolynomial::zero();
            for k in 1..=m {
                let term = LaurentPolynomial::monomial(
                    0,
                    (2 * k - 1) as i64,
                    tables.binom[2 * m - 1][2 * k - 1].clone(),
                )
                .mul(&tables.gamma[k - 1])
                .mul(&LaurentPolynomial::monomial((2 * (m - k)) as i64, 0, BigRational::one()))
                .mul(&tables.alpha[m - k]);
                acc = acc.add(&term);
            }
            acc
        }
        // B_{2m+1} = Σ_k C(2m, 2k-1) q^{2k-1} B_{2k-1}(p,1) p^{2m-2k+1} B_{2m-2k+1}(1,q), B_1 = 1
        Family::UdOdd => {
            let m = (n - 1) / 2;
            let mut acc =
                if m == 0 { LaurentPolynomial::one() } else { LaurentPolynomial::zero() };
            for k in 1..=m {
                let right = 2 * (m - k) + 1;
                let term = LaurentPolynomial::monomial(
                    0,
                    (2 * k - 1) as i64,
                    tables.binom[2 * m][2 * k - 1].clone(),
                )
                .mul(&tables.gamma[k - 1])
                .mul(&LaurentPolynomial::monomial(right as i64, 0, BigRational::one()))
                .mul(&tables.beta[m - k]);
                acc = acc.add(&term);
            }
            acc
        }
        // C_{2m} = Σ_k C(2m-1, 2k) q^{2k} C_{2k}(p,1) p^{2m-2k-1} B_{2m-2k-1}(1,q)
        // with C_{2k}(p,1) = A_{2k}(1,p): the classes swap under
        // reverse-complement, which exchanges the two marked quadrants.
        Family::DuEven => {
            let m = n / 2;
            let mut acc = LaurentPolynomial::zero();
            for k in 0..m {
                let right = 2 * (m - k) - 1;
                let term = LaurentPolynomial::monomial(
                    0,
                    (2 * k) as i64,
                    tables.binom[2 * m - 1][2 * k].clone(),
                )
                .mul(&tables.alpha_in_p(k))
                .mul(&LaurentPolynomial::monomial(right as i64, 0, BigRational::one()))
                .mul(&tables.beta[(right - 1) / 2]);
                acc = acc.add(&term);
            }
            acc
        }
        // D_{2m+1} = Σ_k C(2m, 2k) q^{2k} C_{2k}(p,1) p^{2m-2k} A_{2m-2k}(1,q)
        Family::DuOdd => {
            let m = (n - 1) / 2;
            let mut acc = LaurentPolynomial::zero();
            for k in 0..=m {
                let term = LaurentPolynomial::monomial(
                    0,
                    (2 * k) as i64,
                    tables.binom[2 * m][2 * k].clone(),
                )
                .mul(&tables.alpha_in_p(k))
                .mul(&LaurentPolynomial::monomial((2 * (m - k)) as i64, 0, BigRational::one()))
                .mul(&tables.alpha[m - k]);
                acc = acc.add(&term);
            }
            acc
        }
    };
    DistributionPolynomial::try_from_laurent(&value).ok_or(DistError::NotPolynomial {
        context: format!("recurrence {} length {n}", family.name()),
        value,
    })
}

// ---------------------------------------------------------------------------
// Multi-route verification
// ---------------------------------------------------------------------------

fn ensure_equal(
    context: String,
    lhs: DistributionPolynomial,
    rhs: &DistributionPolynomial,
) -> Result<DistributionPolynomial, DistError> {
    if lhs == *rhs {
        Ok(lhs)
    } else {
        let diff = lhs.to_laurent().sub(&rhs.to_laurent());
        Err(DistError::Mismatch {
            context,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs.clone()),
            diff,
        })
    }
}

/// Brute force and closed form for a single statistic, checked equal.
pub fn verified_single(
    n: usize,
    class: AltClass,
    kind: StatKind,
) -> Result<DistributionPolynomial, DistError> {
    let family = single_family(class, n, kind);
    let brute = brute_single(n, class, kind);
    let gf = egf_distribution(&gf_single(family, n), n, "single closed form")?;
    ensure_equal(format!("single {kind:?} on {class:?} length {n}"), brute, &gf)
}

/// Brute force, closed form, and recurrence for the joint marked-mesh
/// distribution, checked pairwise equal.
pub fn verified_joint_mmp(n: usize, class: AltClass) -> Result<DistributionPolynomial, DistError> {
    let family = Family::of(class, n);
    let brute = brute_joint_mmp(n, class);
    let gf = egf_distribution(&gf_joint_mmp(family, n), n, "joint mmp closed form")?;
    let rec = rec_joint_mmp(family, n)?;
    let checked = ensure_equal(format!("joint mmp {} (gf)", family.name()), brute, &gf)?;
    ensure_equal(format!("joint mmp {} (recurrence)", family.name()), checked, &rec)
}

/// Brute force, direct closed form, and the substitution route for the
/// joint maxima distribution, checked pairwise equal.
pub fn verified_joint_maxmin(
    n: usize,
    class: AltClass,
) -> Result<DistributionPolynomial, DistError> {
    let family = Family::of(class, n);
    let brute = brute_joint_maxmin(n, class);
    let gf = egf_distribution(&gf_joint_maxmin(family, n), n, "joint maxmin closed form")?;
    let sub =
        egf_distribution(&gf_joint_maxmin_via_subst(family, n), n, "joint maxmin substitution")?;
    let checked = ensure_equal(format!("joint maxmin {} (gf)", family.name()), brute, &gf)?;
    ensure_equal(format!("joint maxmin {} (substitution)", family.name()), checked, &sub)
}

// ---------------------------------------------------------------------------
// Equidistribution report
// ---------------------------------------------------------------------------

/// One brute-verified identity: two sums over (possibly different) classes
/// and statistics that the symmetry maps force to coincide.
pub struct IdentityCheck {
    pub name: String,
    pub lhs: DistributionPolynomial,
    pub rhs: DistributionPolynomial,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub struct EquidistributionReport {
    pub length: usize,
    pub checks: Vec<IdentityCheck>,
}

impl EquidistributionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

const MMP_UP_LEFT: MmpSpec = MmpSpec { a: 0, b: 1, c: 0, d: 0 };
const MMP_UP_RIGHT: MmpSpec = MmpSpec { a: 1, b: 0, c: 0, d: 0 };
const MMP_DOWN_LEFT: MmpSpec = MmpSpec { a: 0, b: 0, c: 1, d: 0 };
const MMP_DOWN_RIGHT: MmpSpec = MmpSpec { a: 0, b: 0, c: 0, d: 1 };

/// Brute-verify, at one length, every equidistribution identity the
/// symmetry maps provide: the three partner sums of each single-statistic
/// family, of each joint marked-mesh family, and of each joint maxima
/// family, plus the `p <-> q` symmetry of the odd-length maxima
/// polynomials.
pub fn check_equidistribution(n: usize) -> EquidistributionReport {
    assert!(n >= 1, "distributions start at length 1");
    let mut checks = Vec::new();
    let syms = [Symmetry::Reverse, Symmetry::Complement, Symmetry::ReverseComplement];

    for class in [AltClass::UpDown, AltClass::DownUp] {
        let single_lhs = brute_single(n, class, StatKind::RlMax);
        for sym in syms {
            let image = class.image_under(sym, n);
            let partner_kind = match sym {
                Symmetry::Reverse => StatKind::LrMax,
                Symmetry::Complement => StatKind::RlMin,
                Symmetry::ReverseComplement => StatKind::LrMin,
            };
            checks.push(IdentityCheck {
                name: format!(
                    "single: rlmax on {class:?}_{n} = {partner_kind:?} on {image:?}_{n} ({sym:?})"
                ),
                lhs: single_lhs.clone(),
                rhs: brute_single(n, image, partner_kind),
            });
        }

        let mmp_lhs = brute_joint_mmp(n, class);
        for sym in syms {
            let image = class.image_under(sym, n);
            let (p_spec, q_spec, label) = match sym {
                Symmetry::Reverse => (MMP_UP_RIGHT, MMP_UP_LEFT, "up-right/up-left"),
                Symmetry::Complement => (MMP_DOWN_LEFT, MMP_DOWN_RIGHT, "down-left/down-right"),
                Symmetry::ReverseComplement => {
                    (MMP_DOWN_RIGHT, MMP_DOWN_LEFT, "down-right/down-left")
                }
            };
            checks.push(IdentityCheck {
                name: format!("joint mmp on {class:?}_{n} = ({label}) on {image:?}_{n} ({sym:?})"),
                lhs: mmp_lhs.clone(),
                rhs: brute_mmp_pair(n, image, p_spec, q_spec),
            });
        }

        let maxmin_lhs = brute_joint_maxmin(n, class);
        for sym in syms {
            let image = class.image_under(sym, n);
            let (p_kind, q_kind) = match sym {
                Symmetry::Reverse => (StatKind::RlMax, StatKind::LrMax),
                Symmetry::Complement => (StatKind::LrMin, StatKind::RlMin),
                Symmetry::ReverseComplement => (StatKind::RlMin, StatKind::LrMin),
            };
            checks.push(IdentityCheck {
                name: format!(
                    "joint maxmin on {class:?}_{n} = ({p_kind:?},{q_kind:?}) on {image:?}_{n} ({sym:?})"
                ),
                lhs: maxmin_lhs.clone(),
                rhs: brute_stat_pair(n, image, p_kind, q_kind),
            });
        }

        if n % 2 == 1 {
            checks.push(IdentityCheck {
                name: format!("joint maxmin on {class:?}_{n} is p<->q symmetric"),
                lhs: maxmin_lhs.clone(),
                rhs: maxmin_lhs.swap_vars(),
            });
        }
    }

    EquidistributionReport { length: n, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(pairs: &[(u32, u32, u64)]) -> DistributionPolynomial {
        let mut out = DistributionPolynomial::zero();
        for &(ep, eq, c) in pairs {
            for _ in 0..c {
                out.add_unit_term(ep, eq);
            }
        }
        out
    }

    #[test]
    fn distribution_polynomial_basics() {
        let x = dp(&[(0, 1, 2), (0, 2, 3)]);
        assert_eq!(x.to_string(), "2q + 3q^2");
        assert_eq!(x.total(), BigUint::from(5u32));
        let y = dp(&[(1, 2, 1), (2, 1, 1)]);
        assert!(y.is_var_symmetric());
        assert_eq!(y.set_p_one(), dp(&[(0, 2, 1), (0, 1, 1)]));
        assert_eq!(y.set_q_one(), dp(&[(1, 0, 1), (2, 0, 1)]));
        let z = DistributionPolynomial::try_from_laurent(&y.to_laurent()).unwrap();
        assert_eq!(z, y);
    }

    #[test]
    fn polynomiality_checkpoint_rejects() {
        let neg_exp = LaurentPolynomial::monomial(-1, 0, BigRational::one());
        assert!(DistributionPolynomial::try_from_laurent(&neg_exp).is_none());
        let frac = LaurentPolynomial::monomial(1, 0, BigRational::new(1.into(), 2.into()));
        assert!(DistributionPolynomial::try_from_laurent(&frac).is_none());
        let neg_coeff = LaurentPolynomial::monomial(1, 0, -BigRational::one());
        assert!(DistributionPolynomial::try_from_laurent(&neg_coeff).is_none());
    }

    #[test]
    fn egf_distribution_flags_negative_exponents() {
        let bad = TruncatedSeries::constant(LaurentPolynomial::var_q().invert().unwrap(), 2);
        assert!(matches!(
            egf_distribution(&bad, 0, "test"),
            Err(DistError::NotPolynomial { .. })
        ));
    }

    #[test]
    fn brute_single_examples() {
        assert_eq!(brute_single(4, AltClass::UpDown, StatKind::RlMax), dp(&[(0, 1, 2), (0, 2, 3)]));
        assert_eq!(brute_single(1, AltClass::UpDown, StatKind::RlMax), dp(&[(0, 1, 1)]));
        assert_eq!(
            brute_single(3, AltClass::DownUp, StatKind::RlMax),
            dp(&[(0, 1, 1), (0, 2, 1)])
        );
    }

    #[test]
    fn single_family_dispatch() {
        assert_eq!(single_family(AltClass::UpDown, 4, StatKind::RlMax), Family::UdEven);
        assert_eq!(single_family(AltClass::UpDown, 4, StatKind::LrMax), Family::DuEven);
        assert_eq!(single_family(AltClass::UpDown, 4, StatKind::LrMin), Family::UdEven);
        assert_eq!(single_family(AltClass::UpDown, 3, StatKind::LrMax), Family::UdOdd);
        assert_eq!(single_family(AltClass::DownUp, 3, StatKind::RlMin), Family::UdOdd);
        assert_eq!(single_family(AltClass::DownUp, 3, StatKind::LrMax), Family::DuOdd);
    }

    #[test]
    fn gf_single_anchors() {
        // (sec t)^q at n = 4: 2q + 3q^2
        let f1 = gf_single(Family::UdEven, 6);
        assert_eq!(egf_distribution(&f1, 4, "t").unwrap(), dp(&[(0, 1, 2), (0, 2, 3)]));
        // odd down-up at n = 3: q + q^2
        let f4 = gf_single(Family::DuOdd, 5);
        assert_eq!(egf_distribution(&f4, 3, "t").unwrap(), dp(&[(0, 1, 1), (0, 2, 1)]));
        assert_eq!(egf_distribution(&f4, 1, "t").unwrap(), dp(&[(0, 1, 1)]));
    }

    #[test]
    fn gf_single_totals_are_zigzag_numbers() {
        // setting q = 1 must recover the plain counts
        let f1 = gf_single(Family::UdEven, 8);
        let expect = [1u32, 1, 5, 61, 1385];
        for (m, e) in expect.iter().enumerate() {
            let c = f1.egf_coefficient(2 * m).unwrap();
            assert_eq!(c.eval_at_ones(), BigRational::from_integer((*e).into()));
        }
    }

    #[test]
    fn verified_single_small_lengths() {
        for n in 1..=7 {
            for class in [AltClass::UpDown, AltClass::DownUp] {
                for kind in [StatKind::LrMax, StatKind::RlMax, StatKind::LrMin, StatKind::RlMin] {
                    verified_single(n, class, kind).unwrap();
                }
            }
        }
    }

    #[test]
    fn brute_joint_mmp_examples() {
        assert_eq!(brute_joint_mmp(3, AltClass::DownUp), dp(&[(1, 2, 1), (2, 1, 1)]));
        assert_eq!(brute_joint_mmp(2, AltClass::UpDown), dp(&[(0, 1, 1)]));
        assert_eq!(brute_joint_mmp(1, AltClass::UpDown), DistributionPolynomial::one());
        // hand-enumerated: even down-up at 4 is 2 p^3 q + 3 p^2 q^2
        assert_eq!(brute_joint_mmp(4, AltClass::DownUp), dp(&[(3, 1, 2), (2, 2, 3)]));
        // hand-enumerated: even up-down at 4 is 2 p q^3 + 3 p^2 q^2
        assert_eq!(brute_joint_mmp(4, AltClass::UpDown), dp(&[(1, 3, 2), (2, 2, 3)]));
    }

    #[test]
    fn rec_joint_mmp_examples() {
        assert_eq!(rec_joint_mmp(Family::UdEven, 2).unwrap(), dp(&[(0, 1, 1)]));
        assert_eq!(rec_joint_mmp(Family::DuOdd, 1).unwrap(), DistributionPolynomial::one());
        assert_eq!(rec_joint_mmp(Family::UdEven, 4).unwrap(), brute_joint_mmp(4, AltClass::UpDown));
        assert_eq!(rec_joint_mmp(Family::DuOdd, 3).unwrap(), dp(&[(1, 2, 1), (2, 1, 1)]));
        assert!(matches!(
            rec_joint_mmp(Family::UdEven, 3),
            Err(DistError::ParityMismatch { .. })
        ));
    }

    /// The odd down-up convolution printed with left block `p^{2k} A_{2k}(p,1)`
    /// does not reproduce the enumeration at length 3; the implemented left
    /// block `q^{2k} A_{2k}(1,p)` does. Kept as a guard so the distinction
    /// stays visible.
    #[test]
    fn displayed_odd_du_recurrence_is_refuted_by_enumeration() {
        let a2 = brute_joint_mmp(2, AltClass::UpDown);
        let a2_p1 = a2.set_q_one().to_laurent(); // A_2(p,1) = 1
        let a2_1q = a2.set_p_one().to_laurent(); // A_2(1,q) = q
        let p = LaurentPolynomial::var_p();
        let q = LaurentPolynomial::var_q();
        // as displayed: C(2,0) p^0 A_0(p,1) p^2 A_2(1,q) + C(2,2) p^2 A_2(p,1) p^0 A_0(1,q)
        let displayed = p.pow(2).mul(&a2_1q).add(&p.pow(2).mul(&a2_p1));
        let brute = brute_joint_mmp(3, AltClass::DownUp).to_laurent();
        assert_ne!(displayed, brute);
        // as implemented: C(2,0) q^0 A_0(1,p) p^2 A_2(1,q) + C(2,2) q^2 A_2(1,p) p^0 A_0(1,q)
        let a2_1p = a2.set_p_one().swap_vars().to_laurent();
        let implemented = p.pow(2).mul(&a2_1q).add(&q.pow(2).mul(&a2_1p));
        assert_eq!(implemented, brute);
    }

    #[test]
    fn joint_mmp_three_routes_small_lengths() {
        for n in 1..=8 {
            for class in [AltClass::UpDown, AltClass::DownUp] {
                verified_joint_mmp(n, class).unwrap();
            }
        }
    }

    #[test]
    fn gf_joint_mmp_anchors() {
        let d = gf_joint_mmp(Family::DuOdd, 5);
        assert_eq!(egf_distribution(&d, 3, "t").unwrap(), dp(&[(1, 2, 1), (2, 1, 1)]));
        let a = gf_joint_mmp(Family::UdEven, 4);
        assert_eq!(egf_distribution(&a, 2, "t").unwrap(), dp(&[(0, 1, 1)]));
        let b = gf_joint_mmp(Family::UdOdd, 3);
        assert_eq!(egf_distribution(&b, 1, "t").unwrap(), DistributionPolynomial::one());
    }

    #[test]
    fn brute_joint_maxmin_examples() {
        assert_eq!(brute_joint_maxmin(3, AltClass::DownUp), dp(&[(2, 1, 1), (1, 2, 1)]));
        assert_eq!(brute_joint_maxmin(2, AltClass::UpDown), dp(&[(2, 1, 1)]));
    }

    #[test]
    fn gf_joint_maxmin_anchors() {
        let g1 = gf_joint_maxmin(Family::UdEven, 4);
        assert_eq!(egf_distribution(&g1, 2, "t").unwrap(), dp(&[(2, 1, 1)]));
        let g2 = gf_joint_maxmin(Family::UdOdd, 3);
        assert_eq!(egf_distribution(&g2, 1, "t").unwrap(), dp(&[(1, 1, 1)]));
        let g4 = gf_joint_maxmin(Family::DuOdd, 5);
        assert_eq!(egf_distribution(&g4, 3, "t").unwrap(), dp(&[(2, 1, 1), (1, 2, 1)]));
    }

    #[test]
    fn maxmin_three_routes_small_lengths() {
        for n in 1..=8 {
            for class in [AltClass::UpDown, AltClass::DownUp] {
                verified_joint_maxmin(n, class).unwrap();
            }
        }
    }

    #[test]
    fn subst_route_matches_direct_series() {
        for family in Family::ALL {
            let direct = gf_joint_maxmin(family, 8);
            let subst = gf_joint_maxmin_via_subst(family, 8);
            let order = direct.order().min(subst.order());
            assert_eq!(direct.truncate(order), subst.truncate(order), "{}", family.name());
        }
    }

    #[test]
    fn equidistribution_reports_pass() {
        for n in [3, 4] {
            let report = check_equidistribution(n);
            assert!(
                report.all_pass(),
                "failures: {:?}",
                report.failures().iter().map(|c| &c.name).collect::<Vec<_>>()
            );
            let expected = if n % 2 == 1 { 20 } else { 18 };
            assert_eq!(report.checks.len(), expected);
        }
    }

    #[test]
    fn mismatch_error_carries_difference() {
        let a = dp(&[(0, 1, 2)]);
        let b = dp(&[(0, 1, 3)]);
        let err = ensure_equal("test".into(), a, &b).unwrap_err();
        match err {
            DistError::Mismatch { diff, .. } => assert_eq!(diff.to_string(), "-q"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
