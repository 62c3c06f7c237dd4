//! Flat partially-ordered patterns: the four one-extreme-element posets,
//! avoidance counts on alternating permutations by inclusion-exclusion
//! recurrences, the symmetry dispatch that reduces every variant to the
//! bottoms-under-top pattern, and the occurrence-distribution table over
//! all permutations.

use num::{BigInt, BigUint, One, Signed, Zero};
use thiserror::Error;

use crate::perm::{self, AltClass, PermError, Pop, Symmetry};
use crate::springer;

#[derive(Debug, Error, PartialEq)]
pub enum PopError {
    #[error("flat pattern needs size k >= 3, got {0}")]
    SizeTooSmall(usize),
    #[error("occurrence distribution needs k >= 2, got {0}")]
    DistributionSize(usize),
    #[error("inclusion-exclusion produced a negative count at length {0}; inconsistent state")]
    NegativeCount(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// The four flat poset shapes: one extreme element over or under an
/// antichain, with the extreme labeled either first or last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatPopKind {
    /// Bottoms `1..k-1` under top `k`: an occurrence ends at its maximum.
    Lambda,
    /// Top labeled `1` over bottoms `2..k`: an occurrence starts at its
    /// maximum.
    TopFirst,
    /// Bottom labeled `1` under tops `2..k`: an occurrence starts at its
    /// minimum.
    BottomFirst,
    /// Tops `1..k-1` over bottom `k`: an occurrence ends at its minimum.
    Vee,
}

impl FlatPopKind {
    pub const ALL: [FlatPopKind; 4] =
        [FlatPopKind::Lambda, FlatPopKind::TopFirst, FlatPopKind::BottomFirst, FlatPopKind::Vee];

    /// The symmetry map that carries this pattern to the bottoms-under-top
    /// one (`None` for the pattern itself). Reversal flips positions, so it
    /// exchanges "ends at" with "starts at"; complement flips values, so it
    /// exchanges maxima with minima.
    pub fn reduction_symmetry(self) -> Option<Symmetry> {
        match self {
            FlatPopKind::Lambda => None,
            FlatPopKind::TopFirst => Some(Symmetry::Reverse),
            FlatPopKind::BottomFirst => Some(Symmetry::ReverseComplement),
            FlatPopKind::Vee => Some(Symmetry::Complement),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FlatPopKind::Lambda => "lambda",
            FlatPopKind::TopFirst => "top-first",
            FlatPopKind::BottomFirst => "bottom-first",
            FlatPopKind::Vee => "vee",
        }
    }
}

/// A flat pattern of a concrete size `k >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlatPop {
    kind: FlatPopKind,
    k: usize,
}

impl FlatPop {
    pub fn new(kind: FlatPopKind, k: usize) -> Result<Self, PopError> {
        if k < 3 {
            return Err(PopError::SizeTooSmall(k));
        }
        Ok(Self { kind, k })
    }

    pub fn kind(self) -> FlatPopKind {
        self.kind
    }

    pub fn size(self) -> usize {
        self.k
    }

    /// The underlying poset with the labeling of the shape.
    pub fn pop(self) -> Pop {
        flat_pop_poset(self.kind, self.k)
    }
}

/// Poset constructor shared with the distribution recurrence, which also
/// allows `k = 2` (every shape degenerates to the same two-chain there).
fn flat_pop_poset(kind: FlatPopKind, k: usize) -> Pop {
    let relations: Vec<(usize, usize)> = match kind {
        FlatPopKind::Lambda => (1..k).map(|m| (m, k)).collect(),
        FlatPopKind::TopFirst => (2..=k).map(|m| (m, 1)).collect(),
        FlatPopKind::BottomFirst => (2..=k).map(|m| (1, m)).collect(),
        FlatPopKind::Vee => (1..k).map(|m| (k, m)).collect(),
    };
    Pop::new(k, &relations).expect("flat relations form a poset")
}

/// Count of alternating permutations of the class and length avoiding the
/// bottoms-under-top pattern of size `k`, by the inclusion-exclusion
/// recurrences over the tail block drawn from the `k-1` smallest values.
///
/// Both class sequences use the zigzag numbers as base cases below length
/// `k`; terms reaching below length 0 contribute nothing.
pub fn flat_pop_count_rec(k: usize, n: usize, class: AltClass) -> Result<BigUint, PopError> {
    if k < 3 {
        return Err(PopError::SizeTooSmall(k));
    }
    let euler = springer::euler_by_recurrence(n.min(k.saturating_sub(1)));
    let binom: Vec<BigInt> =
        (0..k).map(|j| BigInt::from(num::integer::binomial(BigUint::from(k - 1), BigUint::from(j)))).collect();

    let mut table: Vec<BigInt> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m < k {
            table.push(BigInt::from(euler[m].clone()));
            continue;
        }
        let mut acc = BigInt::zero();
        let up_down_shape = (class == AltClass::UpDown) == (m % 2 == 0);
        if up_down_shape {
            // a(2n) and b(2n+1): alternating-sign even blocks
            // Σ_{i>=1} (-1)^{i+1} C(k-1, 2i) f(m - 2i)
            let mut i = 1;
            while 2 * i < k {
                if let Some(prev) = m.checked_sub(2 * i) {
                    let term = &binom[2 * i] * &table[prev];
                    if i % 2 == 1 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                } else {
                    break;
                }
                i += 1;
            }
        } else {
            // a(2n+1) and b(2n): alternating-sign odd blocks
            // Σ_{i>=0} (-1)^i C(k-1, 2i+1) f(m - 2i - 1)
            let mut i = 0;
            while 2 * i + 1 < k {
                if let Some(prev) = m.checked_sub(2 * i + 1) {
                    let term = &binom[2 * i + 1] * &table[prev];
                    if i % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                } else {
                    break;
                }
                i += 1;
            }
        }
        table.push(acc);
    }
    let value = table.pop().expect("table holds 0..=n");
    if value.is_negative() {
        return Err(PopError::NegativeCount(n));
    }
    Ok(value.to_biguint().unwrap())
}

/// Avoidance count for any flat pattern on any class, by reducing to the
/// bottoms-under-top pattern: a permutation avoids the pattern exactly when
/// its image under the pattern's reduction symmetry avoids
/// bottoms-under-top, and the image of the class is again an alternating
/// class.
pub fn pop_table_lookup(pattern: FlatPop, class: AltClass, n: usize) -> Result<BigUint, PopError> {
    let image_class = match pattern.kind.reduction_symmetry() {
        None => class,
        Some(sym) => class.image_under(sym, n),
    };
    flat_pop_count_rec(pattern.k, n, image_class)
}

/// Count the alternating permutations of the class with no occurrence of
/// the pattern (brute-force oracle; early-exits on the first occurrence).
pub fn brute_pop_avoiding(n: usize, class: AltClass, pop: &Pop) -> BigUint {
    let count = perm::par_fold_alternating(
        n,
        class,
        || 0u64,
        |acc, values| {
            if !perm::has_pop_occurrence_slice(values, pop) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    BigUint::from(count)
}

/// Count the permutations of `[n]` (all of them, not just alternating)
/// avoiding the pattern.
pub fn brute_all_avoiding(n: usize, pop: &Pop) -> BigUint {
    let mut count = 0u64;
    perm::for_each_permutation(n, |values| {
        if !perm::has_pop_occurrence_slice(values, pop) {
            count += 1;
        }
    });
    BigUint::from(count)
}

/// Row `n` of the occurrence-count distribution: entry `l` is the number of
/// permutations of `[n]` with exactly `l` occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceTable {
    pub n: usize,
    pub k: usize,
    counts: Vec<BigUint>,
}

impl OccurrenceTable {
    fn new(n: usize, k: usize, mut counts: Vec<BigUint>) -> Self {
        while counts.len() > 1 && counts.last().is_some_and(BigUint::is_zero) {
            counts.pop();
        }
        Self { n, k, counts }
    }

    /// Counts indexed by occurrence number, trailing zeros trimmed.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, occurrences: usize) -> BigUint {
        self.counts.get(occurrences).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Number of avoiders (the zero-occurrence entry).
    pub fn avoiders(&self) -> BigUint {
        self.count(0)
    }

    /// Sum of all entries; must be `n!`.
    pub fn total(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for c in &self.counts {
            acc += c;
        }
        acc
    }
}

/// Distribution of bottoms-under-top occurrences over all permutations of
/// `[n]`, by the insertion recurrence: appending the new largest value in
/// position `j` creates `C(j-1, k-1)` new occurrences (it can only serve as
/// the top of an occurrence, with any `k-1` of the entries to its left as
/// bottoms).
pub fn flat_pop_distribution(n: usize, k: usize) -> Result<OccurrenceTable, PopError> {
    if k < 2 {
        return Err(PopError::DistributionSize(k));
    }
    let mut counts = vec![BigUint::one()];
    for m in 0..n {
        let shifts: Vec<usize> = (0..=m)
            .map(|left| {
                num::integer::binomial(BigUint::from(left), BigUint::from(k - 1))
                    .try_into()
                    .expect("occurrence shift fits a machine word")
            })
            .collect();
        let mut next = vec![BigUint::zero(); counts.len() + shifts.last().copied().unwrap_or(0)];
        for (l, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &s in &shifts {
                next[l + s] += c;
            }
        }
        counts = next;
    }
    Ok(OccurrenceTable::new(n, k, counts))
}

/// The same table by counting occurrences in every permutation of `[n]`
/// (oracle for the insertion recurrence; use only for small `n`).
pub fn brute_flat_pop_distribution(n: usize, k: usize) -> Result<OccurrenceTable, PopError> {
    if k < 2 {
        return Err(PopError::DistributionSize(k));
    }
    let pop = flat_pop_poset(FlatPopKind::Lambda, k);
    let mut counts: Vec<BigUint> = Vec::new();
    perm::for_each_permutation(n, |values| {
        let occ = perm::pop_occurrences_slice(values, &pop) as usize;
        if occ >= counts.len() {
            counts.resize(occ + 1, BigUint::zero());
        }
        counts[occ] += 1u32;
    });
    Ok(OccurrenceTable::new(n, k, counts))
}
