//! Permutations in one-line notation, alternation classes, symmetry maps,
//! and the statistic extractors everything else is built on:
//!
//! - left-to-right / right-to-left maxima and minima counts
//! - quadrant marked mesh pattern matching and counting
//! - fixedness under reverse-complement, and the LLE/BE extreme statistics
//! - occurrence counting for partially ordered patterns
//! - direct backtracking generation of alternating permutations, with
//!   first-element partitioning for parallel brute-force sweeps

use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("values are not a rearrangement of 1..=n: {0}")]
    NotAPermutation(String),
    #[error("statistic is undefined on the empty permutation")]
    EmptyPermutation,
    #[error("length {0} is odd; reverse-complement-fixed up-down permutations have even length")]
    OddLength(usize),
    #[error("extreme statistics are defined only on reverse-complement-fixed up-down permutations of even length")]
    NotRcFixedUpDown,
    #[error("extreme elements at positions {0} and {1} have even distance; inconsistent state")]
    ExtremeGapParity(usize, usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
}

/// Alternation class: `UpDown` starts with an ascent, `DownUp` with a descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AltClass {
    UpDown,
    DownUp,
}

/// The three symmetry maps of the square acting on one-line notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    ReverseComplement,
}

impl AltClass {
    /// Whether the comparison between positions `c` and `c+1` (0-based)
    /// must be an ascent.
    pub fn ascent_at(self, c: usize) -> bool {
        match self {
            AltClass::UpDown => c % 2 == 0,
            AltClass::DownUp => c % 2 == 1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            AltClass::UpDown => AltClass::DownUp,
            AltClass::DownUp => AltClass::UpDown,
        }
    }

    /// The alternation class of the image of a length-`n` member under a
    /// symmetry map. Reversal flips the class only for even `n`; complement
    /// always flips it.
    pub fn image_under(self, sym: Symmetry, n: usize) -> Self {
        match sym {
            Symmetry::Reverse => {
                if n % 2 == 0 {
                    self.opposite()
                } else {
                    self
                }
            }
            Symmetry::Complement => self.opposite(),
            Symmetry::ReverseComplement => {
                if n % 2 == 0 {
                    self
                } else {
                    self.opposite()
                }
            }
        }
    }
}

/// Which maxima/minima statistic to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatKind {
    LrMax,
    RlMax,
    LrMin,
    RlMin,
}

/// Quadrant thresholds for a marked mesh pattern; a threshold of 0 imposes
/// no condition on its quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmpSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl MmpSpec {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        Self { a, b, c, d }
    }
}

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Build from one-line notation, validating that the values are a
    /// rearrangement of `1..=n`.
    pub fn from_one_line(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(PermError::NotAPermutation(format!("{values:?}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self { values })
    }

    /// Parse a digit string like `"34152"` (lengths up to 9).
    pub fn from_digits(s: &str) -> Result<Self, PermError> {
        let values = s
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| d >= 1).map(|d| d as u32))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PermError::NotAPermutation(s.to_string()))?;
        Self::from_one_line(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `π^r`: values read right to left.
    pub fn reverse(&self) -> Self {
        Self { values: self.values.iter().rev().copied().collect() }
    }

    /// `π^c`: each value `v` replaced by `n + 1 - v`.
    pub fn complement(&self) -> Self {
        let n = self.values.len() as u32;
        Self { values: self.values.iter().map(|&v| n + 1 - v).collect() }
    }

    /// `π^{rc}`: reverse and complement combined.
    pub fn reverse_complement(&self) -> Self {
        let n = self.values.len() as u32;
        Self { values: self.values.iter().rev().map(|&v| n + 1 - v).collect() }
    }

    pub fn apply(&self, sym: Symmetry) -> Self {
        match sym {
            Symmetry::Reverse => self.reverse(),
            Symmetry::Complement => self.complement(),
            Symmetry::ReverseComplement => self.reverse_complement(),
        }
    }

    /// Strict alternation check; lengths 0 and 1 belong to both classes.
    pub fn is_alternating(&self, class: AltClass) -> bool {
        is_alternating_slice(&self.values, class)
    }

    /// Fixed under reverse-complement, i.e. `π_i + π_{n+1-i} = n + 1` for
    /// all positions.
    pub fn is_rc_fixed(&self) -> bool {
        is_rc_fixed_slice(&self.values)
    }

    /// Count of the requested maxima/minima statistic.
    pub fn stat(&self, kind: StatKind) -> Result<usize, PermError> {
        if self.values.is_empty() {
            return Err(PermError::EmptyPermutation);
        }
        Ok(stat_slice(&self.values, kind))
    }

    /// Whether the entry at 0-based index `i` matches the marked mesh
    /// pattern, i.e. each quadrant around the point `(i+1, π_{i+1})` holds
    /// at least the specified number of points.
    pub fn mmp_matches_at(&self, i: usize, spec: MmpSpec) -> bool {
        mmp_matches_at_slice(&self.values, i, spec)
    }

    /// Number of entries matching the marked mesh pattern.
    pub fn mmp_count(&self, spec: MmpSpec) -> usize {
        mmp_count_slice(&self.values, spec)
    }

    /// `(lle, be)`: entries strictly left of the leftmost extreme entry, and
    /// half the gap between the two extreme entries.
    ///
    /// Defined only on reverse-complement-fixed up-down permutations of even
    /// length; other inputs are rejected.
    pub fn extreme_stats(&self) -> Result<(usize, usize), PermError> {
        let n = self.values.len();
        if n == 0
            || n % 2 != 0
            || !self.is_alternating(AltClass::UpDown)
            || !self.is_rc_fixed()
        {
            return Err(PermError::NotRcFixedUpDown);
        }
        let pos_min = self.values.iter().position(|&v| v == 1).unwrap() + 1;
        let pos_max = self.values.iter().position(|&v| v as usize == n).unwrap() + 1;
        let (left, right) = if pos_min < pos_max { (pos_min, pos_max) } else { (pos_max, pos_min) };
        let gap = right - left;
        if gap % 2 == 0 {
            // Unreachable on inputs that pass the class check above.
            return Err(PermError::ExtremeGapParity(left, right));
        }
        Ok((left - 1, (gap - 1) / 2))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.iter().all(|&v| v <= 9) {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let strs: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", strs.join(" "))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn is_alternating_slice(values: &[u32], class: AltClass) -> bool {
    values.windows(2).enumerate().all(|(c, w)| {
        if class.ascent_at(c) {
            w[0] < w[1]
        } else {
            w[0] > w[1]
        }
    })
}

pub(crate) fn is_rc_fixed_slice(values: &[u32]) -> bool {
    let n = values.len();
    (0..n).all(|i| values[i] + values[n - 1 - i] == n as u32 + 1)
}

pub(crate) fn stat_slice(values: &[u32], kind: StatKind) -> usize {
    match kind {
        StatKind::LrMax => records(values.iter(), |v, best| v > best),
        StatKind::LrMin => records(values.iter(), |v, best| v < best),
        StatKind::RlMax => records(values.iter().rev(), |v, best| v > best),
        StatKind::RlMin => records(values.iter().rev(), |v, best| v < best),
    }
}

fn records<'a>(iter: impl Iterator<Item = &'a u32>, beats: impl Fn(u32, u32) -> bool) -> usize {
    let mut count = 0;
    let mut best: Option<u32> = None;
    for &v in iter {
        if best.map_or(true, |b| beats(v, b)) {
            count += 1;
            best = Some(v);
        }
    }
    count
}

fn mmp_matches_at_slice(values: &[u32], i: usize, spec: MmpSpec) -> bool {
    let n = values.len();
    let v = values[i] as usize;
    // One pass over the left part gives quadrant II; the rest follow from
    // the totals (left count i, greater count n - v, smaller count v - 1).
    let q2 = values[..i].iter().filter(|&&w| w as usize > v).count();
    let q3 = i - q2;
    let q1 = (n - v) - q2;
    let q4 = (v - 1) - q3;
    q1 >= spec.a && q2 >= spec.b && q3 >= spec.c && q4 >= spec.d
}

pub(crate) fn mmp_count_slice(values: &[u32], spec: MmpSpec) -> usize {
    (0..values.len()).filter(|&i| mmp_matches_at_slice(values, i, spec)).count()
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

const MAX_GEN_LEN: usize = 63;

fn admissible(prefix: &[u32], class: AltClass, v: u32) -> bool {
    match prefix.last() {
        None => true,
        Some(&prev) => {
            if class.ascent_at(prefix.len() - 1) {
                v > prev
            } else {
                v < prev
            }
        }
    }
}

fn search_rec(n: usize, class: AltClass, prefix: &mut Vec<u32>, used: &mut u64, f: &mut impl FnMut(&[u32])) {
    if prefix.len() == n {
        f(prefix);
        return;
    }
    for v in 1..=n as u32 {
        if *used & (1 << v) == 0 && admissible(prefix, class, v) {
            prefix.push(v);
            *used |= 1 << v;
            search_rec(n, class, prefix, used, f);
            prefix.pop();
            *used &= !(1 << v);
        }
    }
}

/// Visit every alternating permutation of `[n]` of the class, in
/// lexicographic order, without allocating per item.
pub fn for_each_alternating(n: usize, class: AltClass, mut f: impl FnMut(&[u32])) {
    assert!(n <= MAX_GEN_LEN, "generation supports lengths up to {MAX_GEN_LEN}");
    let mut prefix = Vec::with_capacity(n);
    let mut used = 0u64;
    search_rec(n, class, &mut prefix, &mut used, &mut f);
}

/// As [`for_each_alternating`], restricted to permutations with the given
/// first value. Used to partition sweeps across threads.
pub fn for_each_alternating_with_first(n: usize, class: AltClass, first: u32, mut f: impl FnMut(&[u32])) {
    assert!(n <= MAX_GEN_LEN && n >= 1 && first >= 1 && first as usize <= n);
    let mut prefix = vec![first];
    let mut used = 1u64 << first;
    search_rec(n, class, &mut prefix, &mut used, &mut f);
}

/// Fold over all alternating permutations, fanning out by first element to
/// rayon workers when the sweep is large enough to be worth it. Partial
/// accumulators combine with `merge`.
pub fn par_fold_alternating<T, I, S, M>(n: usize, class: AltClass, init: I, step: S, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    S: Fn(&mut T, &[u32]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    const PAR_THRESHOLD: usize = 10;
    if n < PAR_THRESHOLD {
        let mut acc = init();
        for_each_alternating(n, class, |p| step(&mut acc, p));
        return acc;
    }
    (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            for_each_alternating_with_first(n, class, first, |p| step(&mut acc, p));
            acc
        })
        .reduce(&init, merge)
}

/// Lazy lexicographic stream of the alternating permutations of `[n]`.
pub fn enumerate_alternating(n: usize, class: AltClass) -> AlternatingPerms {
    assert!(n <= MAX_GEN_LEN, "generation supports lengths up to {MAX_GEN_LEN}");
    AlternatingPerms {
        n,
        class,
        prefix: Vec::with_capacity(n),
        used: 0,
        cursor: 1,
        done: false,
    }
}

/// Backtracking iterator behind [`enumerate_alternating`].
pub struct AlternatingPerms {
    n: usize,
    class: AltClass,
    prefix: Vec<u32>,
    used: u64,
    cursor: u32,
    done: bool,
}

impl AlternatingPerms {
    fn backtrack(&mut self) {
        match self.prefix.pop() {
            Some(last) => {
                self.used &= !(1 << last);
                self.cursor = last + 1;
            }
            None => self.done = true,
        }
    }
}

impl Iterator for AlternatingPerms {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(Permutation { values: Vec::new() });
        }
        loop {
            if self.done {
                return None;
            }
            if self.prefix.len() == self.n {
                let out = Permutation { values: self.prefix.clone() };
                self.backtrack();
                return Some(out);
            }
            let next = (self.cursor..=self.n as u32)
                .find(|&v| self.used & (1 << v) == 0 && admissible(&self.prefix, self.class, v));
            match next {
                Some(v) => {
                    self.prefix.push(v);
                    self.used |= 1 << v;
                    self.cursor = 1;
                }
                None => self.backtrack(),
            }
        }
    }
}

/// The reverse-complement-fixed up-down permutations of even length `n`,
/// in lexicographic order (a filter over the direct generator).
pub fn enumerate_rc_fixed(n: usize) -> Result<Vec<Permutation>, PermError> {
    if n % 2 != 0 {
        return Err(PermError::OddLength(n));
    }
    let mut out = Vec::new();
    for_each_alternating(n, AltClass::UpDown, |values| {
        if is_rc_fixed_slice(values) {
            out.push(Permutation { values: values.to_vec() });
        }
    });
    Ok(out)
}

/// Visit all `n!` permutations of `[n]` (Heap's algorithm; order is not
/// lexicographic). This is the brute-force oracle used to validate the
/// constrained generators and the occurrence recurrences.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut a: Vec<u32> = (1..=n as u32).collect();
    f(&a);
    if n == 0 {
        return;
    }
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Partially ordered patterns
// ---------------------------------------------------------------------------

/// A strict partial order on the labels `1..=k`, stored transitively closed.
///
/// An occurrence of the pattern in `π` is a subsequence `π_{i_1} < ... <
/// π_{i_k}` (by position) such that `π_{i_a} < π_{i_b}` for every stored
/// relation `a < b`; labels incomparable in the poset impose nothing.
#[derive(Clone, PartialEq, Eq)]
pub struct Pop {
    size: usize,
    less: Vec<bool>,
}

impl Pop {
    /// Build from covering (or any generating) relations `(a, b)` meaning
    /// `a` is below `b`. Computes the transitive closure and rejects cycles.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Self, PermError> {
        let mut less = vec![false; size * size];
        for &(a, b) in relations {
            if a == 0 || b == 0 || a > size || b > size {
                return Err(PermError::InvalidPoset(format!(
                    "label pair ({a}, {b}) out of range 1..={size}"
                )));
            }
            if a == b {
                return Err(PermError::InvalidPoset(format!("reflexive pair ({a}, {b})")));
            }
            less[(a - 1) * size + (b - 1)] = true;
        }
        // Warshall closure, then irreflexivity = acyclicity.
        for m in 0..size {
            for a in 0..size {
                if less[a * size + m] {
                    for b in 0..size {
                        if less[m * size + b] {
                            less[a * size + b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..size {
            if less[a * size + a] {
                return Err(PermError::InvalidPoset(format!("cycle through label {}", a + 1)));
            }
        }
        Ok(Self { size, less })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `a <_P b` for 1-based labels.
    pub fn less_than(&self, a: usize, b: usize) -> bool {
        self.less[(a - 1) * self.size + (b - 1)]
    }

    /// All stored pairs `(a, b)` with `a <_P b`, in label order.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.size {
            for b in 1..=self.size {
                if self.less_than(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Pop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pop(k={}, {:?})", self.size, self.relation_pairs())
    }
}

fn slots_compatible(values: &[u32], pop: &Pop, chosen: &[usize], pos: usize) -> bool {
    let slot = chosen.len();
    for (t, &tpos) in chosen.iter().enumerate() {
        if pop.less[t * pop.size + slot] && values[tpos] >= values[pos] {
            return false;
        }
        if pop.less[slot * pop.size + t] && values[pos] >= values[tpos] {
            return false;
        }
    }
    true
}

fn count_occurrences_rec(values: &[u32], pop: &Pop, chosen: &mut Vec<usize>, start: usize) -> u64 {
    let slot = chosen.len();
    if slot == pop.size {
        return 1;
    }
    let remaining = pop.size - slot;
    let mut total = 0;
    for pos in start..=values.len().saturating_sub(remaining) {
        if slots_compatible(values, pop, chosen, pos) {
            chosen.push(pos);
            total += count_occurrences_rec(values, pop, chosen, pos + 1);
            chosen.pop();
        }
    }
    total
}

fn find_occurrence_rec(values: &[u32], pop: &Pop, chosen: &mut Vec<usize>, start: usize) -> bool {
    let slot = chosen.len();
    if slot == pop.size {
        return true;
    }
    let remaining = pop.size - slot;
    for pos in start..=values.len().saturating_sub(remaining) {
        if slots_compatible(values, pop, chosen, pos) {
            chosen.push(pos);
            if find_occurrence_rec(values, pop, chosen, pos + 1) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Number of occurrences of the pattern in `π`. Patterns longer than `π`
/// have zero occurrences.
pub fn pop_occurrences(perm: &Permutation, pop: &Pop) -> u64 {
    pop_occurrences_slice(perm.values(), pop)
}

pub(crate) fn pop_occurrences_slice(values: &[u32], pop: &Pop) -> u64 {
    if pop.size > values.len() {
        return 0;
    }
    count_occurrences_rec(values, pop, &mut Vec::with_capacity(pop.size), 0)
}

/// Whether `π` contains at least one occurrence (early-exit search).
pub fn has_pop_occurrence(perm: &Permutation, pop: &Pop) -> bool {
    has_pop_occurrence_slice(perm.values(), pop)
}

pub(crate) fn has_pop_occurrence_slice(values: &[u32], pop: &Pop) -> bool {
    if pop.size > values.len() {
        return false;
    }
    find_occurrence_rec(values, pop, &mut Vec::with_capacity(pop.size), 0)
}

/// `π` avoids the pattern when it has no occurrence.
pub fn avoids(perm: &Permutation, pop: &Pop) -> bool {
    !has_pop_occurrence(perm, pop)
}
