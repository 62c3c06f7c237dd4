//! Randomized algebraic properties of the coefficient rings, the series
//! engine, and the permutation symmetries.

use num::{BigRational, One, Zero};
use proptest::prelude::*;

use altperm::laurent::LaurentPolynomial;
use altperm::perm::{Permutation, StatKind, Symmetry};
use altperm::series::{self, RationalSeries, TruncatedSeries};

const ORDER: usize = 8;

fn arb_ratio() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn arb_laurent() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-3i64..=3), (-3i64..=3), arb_ratio()), 0..5).prop_map(|terms| {
        terms.into_iter().fold(LaurentPolynomial::zero(), |acc, (ep, eq, c)| {
            acc.add(&LaurentPolynomial::monomial(ep, eq, c))
        })
    })
}

fn arb_series() -> impl Strategy<Value = RationalSeries> {
    prop::collection::vec(arb_ratio(), ORDER + 1).prop_map(RationalSeries::from_coeffs)
}

fn arb_monic_series() -> impl Strategy<Value = RationalSeries> {
    arb_series().prop_map(|s| {
        let mut coeffs = s.coeffs().to_vec();
        coeffs[0] = BigRational::one();
        RationalSeries::from_coeffs(coeffs)
    })
}

/// Keys ranked by value (ties by position) give a uniform-ish permutation.
fn arb_perm() -> impl Strategy<Value = Permutation> {
    prop::collection::vec(0u32..1000, 1..10).prop_map(|keys| {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by_key(|&i| (keys[i], i));
        let mut values = vec![0u32; keys.len()];
        for (rank, &i) in idx.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Permutation::from_one_line(values).unwrap()
    })
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&LaurentPolynomial::one()), a.clone());
    }

    #[test]
    fn laurent_variable_maps(a in arb_laurent()) {
        prop_assert_eq!(a.invert_vars().invert_vars(), a.clone());
        prop_assert_eq!(a.swap_vars().swap_vars(), a.clone());
        // swapping and inverting commute
        prop_assert_eq!(a.swap_vars().invert_vars(), a.invert_vars().swap_vars());
    }

    #[test]
    fn laurent_monomial_inverse(ep in -4i64..=4, eq in -4i64..=4, c in arb_ratio()) {
        prop_assume!(!c.is_zero());
        let m = LaurentPolynomial::monomial(ep, eq, c);
        let inv = m.invert().unwrap();
        prop_assert_eq!(m.mul(&inv), LaurentPolynomial::one());
    }

    #[test]
    fn series_ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), RationalSeries::zero(ORDER));
    }

    #[test]
    fn series_reciprocal_inverts(f in arb_monic_series()) {
        let recip = f.reciprocal().unwrap();
        prop_assert_eq!(f.mul(&recip), RationalSeries::one(ORDER));
    }

    #[test]
    fn series_exp_log_roundtrip(f in arb_monic_series()) {
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn series_pow_additivity(f in arb_monic_series(), e1 in arb_ratio(), e2 in arb_ratio()) {
        let lhs = f.pow(&e1).unwrap().mul(&f.pow(&e2).unwrap());
        prop_assert_eq!(lhs, f.pow(&(&e1 + &e2)).unwrap());
    }

    #[test]
    fn series_scale_roundtrip(f in arb_series(), c in arb_ratio()) {
        prop_assume!(!c.is_zero());
        let back = f.scale_var(&c).unwrap().scale_var(&c.recip()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn series_integrate_then_differentiate(f in arb_series()) {
        prop_assert_eq!(f.integrate().derivative(), f);
    }

    #[test]
    fn laurent_series_pow_additivity(e1 in arb_laurent(), e2 in arb_laurent()) {
        let base = series::sec::<LaurentPolynomial>(6);
        let lhs = base.pow(&e1).unwrap().mul(&base.pow(&e2).unwrap());
        prop_assert_eq!(lhs, base.pow(&e1.add(&e2)).unwrap());
    }

    #[test]
    fn laurent_series_invert_vars_involution(ep in -2i64..=2, eq in -2i64..=2) {
        let e = LaurentPolynomial::monomial(ep, eq, BigRational::one());
        let f = series::sec::<LaurentPolynomial>(6).pow(&e).unwrap();
        prop_assert_eq!(f.invert_vars().invert_vars(), f);
    }

    #[test]
    fn min_order_arithmetic(a in arb_series(), shorter in 0usize..=ORDER) {
        let b = a.truncate(shorter);
        prop_assert_eq!(a.add(&b).order(), shorter);
        prop_assert_eq!(a.mul(&b).order(), shorter);
    }

    #[test]
    fn symmetries_are_involutions(pi in arb_perm()) {
        for sym in [Symmetry::Reverse, Symmetry::Complement, Symmetry::ReverseComplement] {
            prop_assert_eq!(pi.apply(sym).apply(sym), pi.clone());
        }
        prop_assert_eq!(
            pi.reverse().complement(),
            pi.apply(Symmetry::ReverseComplement)
        );
    }

    #[test]
    fn record_statistics_respect_symmetries(pi in arb_perm()) {
        let rlmax = pi.stat(StatKind::RlMax).unwrap();
        prop_assert_eq!(rlmax, pi.reverse().stat(StatKind::LrMax).unwrap());
        prop_assert_eq!(rlmax, pi.complement().stat(StatKind::RlMin).unwrap());
        prop_assert!(rlmax >= 1);
    }

    #[test]
    fn constant_series_egf_identity(c in arb_ratio(), n in 0usize..=6) {
        let f = TruncatedSeries::constant(c.clone(), 6);
        let coeff = f.egf_coefficient(n).unwrap();
        if n == 0 {
            prop_assert_eq!(coeff, c);
        } else {
            prop_assert!(coeff.is_zero());
        }
    }
}
