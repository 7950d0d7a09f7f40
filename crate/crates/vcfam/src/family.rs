//! Ground types for subsets of `[n]` and set families, with traces,
//! shattering, VC dimension and k-fold operation closures.
//!
//! Elements are 1-based in every external interface and 0-based (bit
//! positions) internally. The ground set is capped at `n <= 128` so a
//! subset always fits a two-word bitmask.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use crate::error::{Error, Result};

/// A 1-based element of the ground set.
pub type Element = u32;

/// Hard cap on the ground-set size; a subset mask is a `u128`.
pub const MAX_GROUND: u32 = 128;

/// The ground set `[n] = {1, …, n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::InvalidGround { n });
        }
        Ok(GroundSet { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Mask with every element of `[n]` set.
    pub fn universe(&self) -> SubsetMask {
        SubsetMask::from_bits(universe_bits(self.n))
    }

    /// True when `mask` only uses elements of `[n]`.
    pub fn admits(&self, mask: SubsetMask) -> bool {
        mask.bits() & !universe_bits(self.n) == 0
    }

    fn check(&self, mask: SubsetMask) -> Result<()> {
        if self.admits(mask) {
            Ok(())
        } else {
            Err(Error::GroundMismatch {
                n: self.n,
                mask: mask.bits(),
            })
        }
    }
}

pub(crate) fn universe_bits(n: u32) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// A subset of the ground set, element `i` stored at bit `i-1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u128);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u128) -> Self {
        SubsetMask(bits)
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    /// Builds a mask from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = Element>>(elements: I) -> Result<Self> {
        let mut bits = 0u128;
        for e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: MAX_GROUND,
                });
            }
            bits |= 1u128 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }

    pub fn singleton(e: Element) -> Result<Self> {
        Self::from_elements([e])
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut rest = self.0;
        while rest != 0 {
            out.push(rest.trailing_zeros() + 1);
            rest &= rest - 1;
        }
        out
    }

    pub fn size(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, e: Element) -> bool {
        e >= 1 && e <= MAX_GROUND && self.0 >> (e - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within the given ground set.
    pub fn complement(&self, ground: GroundSet) -> SubsetMask {
        SubsetMask(!self.0 & universe_bits(ground.n()))
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;
    fn bitand(self, rhs: Self) -> Self {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: Self) -> Self {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitXor for SubsetMask {
    type Output = SubsetMask;
    fn bitxor(self, rhs: Self) -> Self {
        SubsetMask(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// One of the three binary set operations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SetOp {
    Intersection,
    Union,
    SymmetricDifference,
}

impl SetOp {
    pub fn apply(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        match self {
            SetOp::Intersection => a & b,
            SetOp::Union => a | b,
            SetOp::SymmetricDifference => a ^ b,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            SetOp::Intersection => "∩",
            SetOp::Union => "∪",
            SetOp::SymmetricDifference => "△",
        }
    }
}

/// A permutation of `[n]`, used for relabelling families.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    /// `images[i]` is the 1-based image of element `i+1`.
    images: Vec<Element>,
}

impl Permutation {
    pub fn new(images: Vec<Element>) -> Result<Self> {
        let n = images.len() as u32;
        if n == 0 || n > MAX_GROUND {
            return Err(Error::InvalidGround { n });
        }
        let mut seen = 0u128;
        for &e in &images {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            seen |= 1u128 << (e - 1);
        }
        if seen != universe_bits(n) {
            return Err(Error::range("element images do not form a permutation"));
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, e: Element) -> Element {
        self.images[(e - 1) as usize]
    }

    pub fn apply_mask(&self, mask: SubsetMask) -> SubsetMask {
        let mut out = 0u128;
        let mut rest = mask.bits();
        while rest != 0 {
            let p = rest.trailing_zeros();
            out |= 1u128 << (self.images[p as usize] - 1);
            rest &= rest - 1;
        }
        SubsetMask::from_bits(out)
    }
}

/// A deduplicated family of subsets of a common ground set.
///
/// Members are kept strictly increasing by numeric mask value, which is the
/// canonical order everywhere in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<SubsetMask>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, {:?})", self.ground.n(), self.members)
    }
}

impl SetFamily {
    /// Builds a family, validating widths, sorting and deduplicating.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ground: GroundSet, members: I) -> Result<Self> {
        let mut v: Vec<SubsetMask> = members.into_iter().collect();
        for &m in &v {
            ground.check(m)?;
        }
        v.sort_unstable();
        v.dedup();
        Ok(SetFamily { ground, members: v })
    }

    /// Internal constructor for masks already known to respect the ground.
    pub(crate) fn from_sorted_bits(ground: GroundSet, bits: Vec<u128>) -> Self {
        debug_assert!(bits.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(bits.iter().all(|&b| b & !universe_bits(ground.n()) == 0));
        SetFamily {
            ground,
            members: bits.into_iter().map(SubsetMask::from_bits).collect(),
        }
    }

    pub(crate) fn from_bits_unsorted(ground: GroundSet, mut bits: Vec<u128>) -> Self {
        bits.sort_unstable();
        bits.dedup();
        Self::from_sorted_bits(ground, bits)
    }

    pub fn empty(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            members: Vec::new(),
        }
    }

    /// The full cube `2^[n]`. Guarded to small `n` since it materializes
    /// all `2^n` subsets.
    pub fn full_cube(ground: GroundSet) -> Result<Self> {
        let n = ground.n();
        if n > 20 {
            return Err(Error::range(format!(
                "full cube over [{n}] is too large to materialize"
            )));
        }
        let members = (0..(1u128 << n)).map(SubsetMask::from_bits).collect();
        Ok(SetFamily { ground, members })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> u32 {
        self.ground.n()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubsetMask> {
        self.members.iter()
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    /// Union of all members.
    pub fn support(&self) -> SubsetMask {
        let mut bits = 0u128;
        for m in &self.members {
            bits |= m.bits();
        }
        SubsetMask::from_bits(bits)
    }

    pub fn max_member_size(&self) -> u32 {
        self.members.iter().map(|m| m.size()).max().unwrap_or(0)
    }

    /// The family of complements `{[n] ∖ S | S ∈ A}`.
    pub fn complement_family(&self) -> SetFamily {
        let u = universe_bits(self.n());
        let bits = self.members.iter().map(|m| !m.bits() & u).collect();
        SetFamily::from_bits_unsorted(self.ground, bits)
    }

    /// Applies a relabelling of the ground set to every member.
    pub fn relabel(&self, perm: &Permutation) -> Result<SetFamily> {
        if perm.n() != self.n() {
            return Err(Error::range(format!(
                "permutation on [{}] applied to family over [{}]",
                perm.n(),
                self.n()
            )));
        }
        let bits = self
            .members
            .iter()
            .map(|m| perm.apply_mask(*m).bits())
            .collect();
        Ok(SetFamily::from_bits_unsorted(self.ground, bits))
    }

    /// The trace `A ∩ Y = {S ∩ Y | S ∈ A}`, deduplicated.
    pub fn trace(&self, y: SubsetMask) -> Result<SetFamily> {
        self.ground.check(y)?;
        let bits = self.members.iter().map(|m| m.bits() & y.bits()).collect();
        Ok(SetFamily::from_bits_unsorted(self.ground, bits))
    }

    /// True iff `Y` is shattered by the family, i.e. `|A ∩ Y| = 2^|Y|`.
    pub fn is_shattered(&self, y: SubsetMask) -> Result<bool> {
        self.ground.check(y)?;
        Ok(self.is_shattered_bits(y.bits()))
    }

    pub(crate) fn is_shattered_bits(&self, y: u128) -> bool {
        let ysize = y.count_ones();
        // |A ∩ Y| <= |A|, so nothing larger than log2|A| can shatter.
        if ysize >= 64 || self.members.len() < (1usize << ysize) {
            return false;
        }
        let target = 1usize << ysize;
        if ysize <= 6 {
            // Small case: mark patterns in a 64-bit table.
            let mut seen = 0u64;
            let mut count = 0usize;
            for m in &self.members {
                let pat = compress_onto(m.bits(), y) as u64;
                if seen >> pat & 1 == 0 {
                    seen |= 1 << pat;
                    count += 1;
                    if count == target {
                        return true;
                    }
                }
            }
            false
        } else {
            // Sorted-sequence membership structure over the traces.
            let mut pats: Vec<u128> = self
                .members
                .iter()
                .map(|m| compress_onto(m.bits(), y))
                .collect();
            pats.sort_unstable();
            pats.dedup();
            pats.len() == target
        }
    }

    /// The collection `sh(A)` of all shattered subsets, as a family over the
    /// same ground set.
    ///
    /// `sh(A)` is downward closed, so it is grown level by level: every
    /// shattered set of size `s+1` extends a shattered set of size `s` by an
    /// element above its maximum. Candidates never leave the support of the
    /// family and never exceed `log2|A|` elements, which keeps the scan
    /// practical for the desk-scale families this crate targets.
    pub fn shattered_collection(&self) -> Result<SetFamily> {
        if self.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let support = self.support().bits();
        let positions: Vec<u32> = mask_positions(support);
        let max_size = floor_log2(self.members.len()).min(positions.len() as u32);

        let mut all: Vec<u128> = vec![0]; // ∅ is shattered by any nonempty family
        let mut frontier: Vec<u128> = vec![0];
        let mut size = 0;
        while !frontier.is_empty() && size < max_size {
            let mut next = Vec::new();
            for &y in &frontier {
                let low = if y == 0 { 0 } else { 128 - y.leading_zeros() };
                for &p in positions.iter().filter(|&&p| p >= low) {
                    let cand = y | 1u128 << p;
                    if self.is_shattered_bits(cand) {
                        next.push(cand);
                    }
                }
            }
            all.extend_from_slice(&next);
            frontier = next;
            size += 1;
        }
        Ok(SetFamily::from_bits_unsorted(self.ground, all))
    }

    /// The VC dimension: size of the largest shattered subset.
    ///
    /// Returns `-1` for the empty family by convention and `0` for `{∅}`.
    /// Candidate sizes are scanned downward from `min(n, ⌊log2|A|⌋)` (forced
    /// by `|A ∩ Y| <= |A|`); the first size with a shattered set wins. When
    /// the support is too wide for that scan to be feasible, the shattered
    /// sets are grown level by level instead (they are downward closed), so
    /// structured families over a large ground set self-limit to work near
    /// their actual dimension.
    pub fn vc_dimension(&self) -> i32 {
        if self.is_empty() {
            return -1;
        }
        let positions = mask_positions(self.support().bits());
        let max_size = floor_log2(self.members.len()).min(positions.len() as u32);

        const DESCENT_CAP: u128 = 4_000_000;
        if saturating_binom_leq(positions.len() as u32, max_size) <= DESCENT_CAP {
            for s in (1..=max_size).rev() {
                if any_combination(&positions, s as usize, 0, 0, &mut |y| {
                    self.is_shattered_bits(y)
                }) {
                    return s as i32;
                }
            }
            return 0;
        }

        let mut frontier: Vec<u128> = vec![0];
        let mut size = 0i32;
        while size < max_size as i32 {
            let mut next = Vec::new();
            for &y in &frontier {
                let low = if y == 0 { 0 } else { 128 - y.leading_zeros() };
                for &p in positions.iter().filter(|&&p| p >= low) {
                    let cand = y | 1u128 << p;
                    if self.is_shattered_bits(cand) {
                        next.push(cand);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
            size += 1;
        }
        size
    }

    /// The k-fold closure `⋆A^k = {S₁ ⋆ ⋯ ⋆ S_k | S_i ∈ A}`.
    ///
    /// `kfold(A, op, 1) = A`. The empty family folds to itself.
    pub fn kfold(&self, op: SetOp, k: u32) -> Result<SetFamily> {
        if k == 0 {
            return Err(Error::range("k-fold closure requires k >= 1"));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        let mut acc: Vec<u128> = self.members.iter().map(|m| m.bits()).collect();
        for _ in 1..k {
            acc = fold_step(&acc, self, op);
        }
        Ok(SetFamily::from_sorted_bits(self.ground, acc))
    }

    /// Maximum cardinality over all k-fold unions of members, computed on
    /// level sets reduced to their maximal elements instead of the full
    /// closure.
    pub(crate) fn max_kfold_union_size(&self, k: u32) -> u32 {
        debug_assert!(k >= 1 && !self.is_empty());
        let mut level: Vec<u128> = maximal_only(self.members.iter().map(|m| m.bits()).collect());
        let base = level.clone();
        for _ in 1..k {
            let mut next: Vec<u128> = Vec::with_capacity(level.len() * base.len());
            for &u in &level {
                for &m in &base {
                    next.push(u | m);
                }
            }
            next.sort_unstable();
            next.dedup();
            level = maximal_only(next);
        }
        level.iter().map(|u| u.count_ones()).max().unwrap_or(0)
    }

    /// Minimum cardinality over all k-fold intersections, dual to
    /// [`Self::max_kfold_union_size`] (level sets reduced to minimal
    /// elements).
    pub(crate) fn min_kfold_intersection_size(&self, k: u32) -> u32 {
        debug_assert!(k >= 1 && !self.is_empty());
        let mut level: Vec<u128> = minimal_only(self.members.iter().map(|m| m.bits()).collect());
        let base = level.clone();
        for _ in 1..k {
            let mut next: Vec<u128> = Vec::with_capacity(level.len() * base.len());
            for &u in &level {
                for &m in &base {
                    next.push(u & m);
                }
            }
            next.sort_unstable();
            next.dedup();
            level = minimal_only(next);
        }
        level.iter().map(|u| u.count_ones()).min().unwrap_or(0)
    }

    /// True iff every union of `k` members (with repetition) has size at
    /// most `bound`. A negative bound is never met by a nonempty family.
    pub fn is_kwise_union(&self, k: u32, bound: i64) -> Result<bool> {
        if k == 0 {
            return Err(Error::range("k-wise union requires k >= 1"));
        }
        if self.is_empty() {
            return Ok(true);
        }
        if bound < 0 {
            return Ok(false);
        }
        let bound = bound.min(u32::MAX as i64) as u32;
        // Early exit: a union of fewer members is completable by repetition,
        // so any oversized intermediate already decides the answer.
        if self.max_member_size() > bound {
            return Ok(false);
        }
        Ok(self.max_kfold_union_size(k) <= bound)
    }

    /// True iff every intersection of `k` members (with repetition) has size
    /// at least `t`. Complement-dual to [`Self::is_kwise_union`]:
    /// intersecting at `t` is the complement family being union-bounded by
    /// `n - t`, for every integer `t`.
    pub fn is_kwise_intersecting(&self, k: u32, t: i64) -> Result<bool> {
        if k == 0 {
            return Err(Error::range("k-wise intersection requires k >= 1"));
        }
        if self.is_empty() || t <= 0 {
            return Ok(true);
        }
        let t = t.min(u32::MAX as i64) as u32;
        if self.members.iter().any(|m| m.size() < t) {
            return Ok(false);
        }
        Ok(self.min_kfold_intersection_size(k) >= t)
    }
}

/// `{S₁ op ⋯ op S_k | S_i ∈ A_i}` with one family per slot.
pub fn kfold_multi(families: &[SetFamily], op: SetOp) -> Result<SetFamily> {
    let first = families
        .first()
        .ok_or_else(|| Error::range("k-fold over an empty family sequence"))?;
    let ground = first.ground();
    for f in families {
        if f.ground() != ground {
            return Err(Error::GroundMismatch {
                n: ground.n(),
                mask: universe_bits(f.n()),
            });
        }
    }
    if families.iter().any(|f| f.is_empty()) {
        return Ok(SetFamily::empty(ground));
    }
    let mut acc: Vec<u128> = first.members.iter().map(|m| m.bits()).collect();
    for f in &families[1..] {
        acc = fold_step(&acc, f, op);
    }
    Ok(SetFamily::from_sorted_bits(ground, acc))
}

fn fold_step(acc: &[u128], family: &SetFamily, op: SetOp) -> Vec<u128> {
    let mut next = Vec::with_capacity(acc.len() * family.len());
    for &x in acc {
        let xm = SubsetMask::from_bits(x);
        for s in &family.members {
            next.push(op.apply(xm, *s).bits());
        }
    }
    next.sort_unstable();
    next.dedup();
    next
}

/// Keeps only masks that are maximal under inclusion.
fn maximal_only(mut v: Vec<u128>) -> Vec<u128> {
    v.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()));
    let mut out: Vec<u128> = Vec::new();
    for m in v {
        if !out.iter().any(|&kept| m & !kept == 0) {
            out.push(m);
        }
    }
    out
}

/// Keeps only masks that are minimal under inclusion.
fn minimal_only(mut v: Vec<u128>) -> Vec<u128> {
    v.sort_unstable_by_key(|a| a.count_ones());
    let mut out: Vec<u128> = Vec::new();
    for m in v {
        if !out.iter().any(|&kept| kept & !m == 0) {
            out.push(m);
        }
    }
    out
}

/// Packs the bits of `mask` that lie at positions of `y` into the low bits.
pub(crate) fn compress_onto(mask: u128, y: u128) -> u128 {
    let mut out = 0u128;
    let mut bit = 0u32;
    let mut rest = y;
    while rest != 0 {
        let p = rest.trailing_zeros();
        if mask >> p & 1 == 1 {
            out |= 1u128 << bit;
        }
        bit += 1;
        rest &= rest - 1;
    }
    out
}

pub(crate) fn mask_positions(mask: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros());
        rest &= rest - 1;
    }
    out
}

fn floor_log2(len: usize) -> u32 {
    debug_assert!(len >= 1);
    usize::BITS - 1 - len.leading_zeros()
}

/// Saturating count of subsets of `[n]` with at most `t` elements, used to
/// size up candidate scans before running them.
fn saturating_binom_leq(n: u32, t: u32) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=t.min(n) {
        total = total.saturating_add(term);
        if total > u128::MAX / 2 {
            return total;
        }
        term = term.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    total
}

/// Calls `pred` on every mask built from `size` of the given bit positions
/// (taken from index `start` on); stops early when `pred` returns true.
fn any_combination(
    positions: &[u32],
    size: usize,
    start: usize,
    acc: u128,
    pred: &mut impl FnMut(u128) -> bool,
) -> bool {
    if size == 0 {
        return pred(acc);
    }
    for i in start..=positions.len().saturating_sub(size) {
        if any_combination(
            positions,
            size - 1,
            i + 1,
            acc | 1u128 << positions[i],
            pred,
        ) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fam(n: u32, sets: &[&[Element]]) -> SetFamily {
        let ground = GroundSet::new(n).unwrap();
        let masks = sets
            .iter()
            .map(|s| SubsetMask::from_elements(s.iter().copied()).unwrap());
        SetFamily::new(ground, masks).unwrap()
    }

    /// Definition-level shattering oracle, independent of the sorted-trace
    /// implementation: every R ⊆ Y must arise as S ∩ Y.
    fn naive_shattered(a: &SetFamily, y: SubsetMask) -> bool {
        let positions = mask_positions(y.bits());
        let card = positions.len();
        for r in 0u32..(1 << card) {
            let mut rmask = 0u128;
            for (i, &p) in positions.iter().enumerate() {
                if r >> i & 1 == 1 {
                    rmask |= 1u128 << p;
                }
            }
            if !a.iter().any(|s| s.bits() & y.bits() == rmask) {
                return false;
            }
        }
        true
    }

    fn naive_vc(a: &SetFamily) -> i32 {
        if a.is_empty() {
            return -1;
        }
        let n = a.n();
        let mut best = 0;
        for y in 0u128..(1 << n) {
            let ym = SubsetMask::from_bits(y);
            if naive_shattered(a, ym) {
                best = best.max(y.count_ones() as i32);
            }
        }
        best
    }

    fn naive_kfold(a: &SetFamily, op: SetOp, k: u32) -> SetFamily {
        let mut tuples: Vec<u128> = a.iter().map(|m| m.bits()).collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for &x in &tuples {
                for s in a.iter() {
                    next.push(op.apply(SubsetMask::from_bits(x), *s).bits());
                }
            }
            tuples = next;
        }
        SetFamily::from_bits_unsorted(a.ground(), tuples)
    }

    #[test]
    fn trace_examples() {
        let a = fam(2, &[&[], &[1, 2]]);
        let y = SubsetMask::from_elements([1]).unwrap();
        assert_eq!(a.trace(y).unwrap(), fam(2, &[&[], &[1]]));

        // Tracing on ∅ collapses any nonempty family to {∅}.
        let b = fam(3, &[&[1], &[2, 3], &[1, 2, 3]]);
        assert_eq!(b.trace(SubsetMask::EMPTY).unwrap(), fam(3, &[&[]]));

        // The full cube traces to the full cube of the window.
        let cube = SetFamily::full_cube(GroundSet::new(3).unwrap()).unwrap();
        let w = SubsetMask::from_elements([1, 3]).unwrap();
        assert_eq!(cube.trace(w).unwrap(), fam(3, &[&[], &[1], &[3], &[1, 3]]));
    }

    #[test]
    fn trace_rejects_ground_mismatch() {
        let a = fam(2, &[&[1]]);
        let y = SubsetMask::from_elements([3]).unwrap();
        assert!(matches!(a.trace(y), Err(Error::GroundMismatch { .. })));
        assert!(matches!(
            a.is_shattered(y),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn shattering_examples() {
        let cube = SetFamily::full_cube(GroundSet::new(3).unwrap()).unwrap();
        let all = SubsetMask::from_elements([1, 2, 3]).unwrap();
        assert!(cube.is_shattered(all).unwrap());

        let a = fam(2, &[&[], &[1, 2]]);
        assert!(a
            .is_shattered(SubsetMask::from_elements([1]).unwrap())
            .unwrap());
        assert!(!a
            .is_shattered(SubsetMask::from_elements([1, 2]).unwrap())
            .unwrap());
    }

    #[test]
    fn shattered_collection_examples() {
        let a = fam(2, &[&[], &[1, 2]]);
        assert_eq!(
            a.shattered_collection().unwrap(),
            fam(2, &[&[], &[1], &[2]])
        );

        let b = fam(2, &[&[], &[2]]);
        assert_eq!(b.shattered_collection().unwrap(), fam(2, &[&[], &[2]]));

        let c = fam(4, &[&[]]);
        assert_eq!(c.shattered_collection().unwrap(), fam(4, &[&[]]));

        assert!(matches!(
            SetFamily::empty(GroundSet::new(3).unwrap()).shattered_collection(),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn shattered_collection_matches_pointwise_check() {
        // sh(A) agrees with is_shattered over every Y, and is downward closed.
        let families = [
            fam(4, &[&[], &[1], &[2], &[1, 2], &[3, 4]]),
            fam(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1], &[]]),
            fam(3, &[&[1], &[2], &[3]]),
        ];
        for a in &families {
            let sh = a.shattered_collection().unwrap();
            for y in 0u128..(1 << a.n()) {
                let ym = SubsetMask::from_bits(y);
                assert_eq!(
                    sh.contains(ym),
                    a.is_shattered(ym).unwrap(),
                    "family {a:?}, Y={ym:?}"
                );
                assert_eq!(a.is_shattered(ym).unwrap(), naive_shattered(a, ym));
            }
            for m in sh.iter() {
                for p in mask_positions(m.bits()) {
                    assert!(sh.contains(SubsetMask::from_bits(m.bits() & !(1u128 << p))));
                }
            }
        }
    }

    #[test]
    fn vc_dimension_examples() {
        assert_eq!(fam(3, &[&[]]).vc_dimension(), 0);
        assert_eq!(
            SetFamily::empty(GroundSet::new(3).unwrap()).vc_dimension(),
            -1
        );
        assert_eq!(fam(3, &[&[], &[1], &[2], &[1, 2]]).vc_dimension(), 2);

        let lowsets42 = crate::construct::lowsets(4, 2).unwrap();
        assert_eq!(lowsets42.vc_dimension(), 2);
    }

    #[test]
    fn vc_dimension_over_wide_grounds_uses_the_level_ascent() {
        // Structured families over [128]: the descent space is astronomical
        // but the shattered levels die out immediately.
        let chain = crate::construct::complete_chain(128).unwrap();
        assert_eq!(chain.len(), 129);
        assert_eq!(chain.vc_dimension(), 1);

        let low = crate::construct::lowsets(128, 1).unwrap();
        assert_eq!(low.vc_dimension(), 1);

        let low2 = crate::construct::lowsets(40, 2).unwrap();
        assert_eq!(low2.vc_dimension(), 2);
    }

    #[test]
    fn vc_dimension_matches_naive_oracle() {
        let cases = [
            fam(4, &[&[], &[1], &[2], &[1, 2], &[3, 4]]),
            fam(4, &[&[1], &[2], &[3], &[4]]),
            fam(5, &[&[1, 2, 3], &[2, 3, 4], &[3, 4, 5], &[]]),
            fam(3, &[&[1, 2, 3]]),
        ];
        for a in &cases {
            assert_eq!(a.vc_dimension(), naive_vc(a), "family {a:?}");
        }
    }

    #[test]
    fn kfold_examples() {
        // S △ S = ∅ for a single set.
        let single = fam(4, &[&[2, 4]]);
        assert_eq!(
            single.kfold(SetOp::SymmetricDifference, 2).unwrap(),
            fam(4, &[&[]])
        );

        let a = fam(2, &[&[], &[1], &[2]]);
        assert_eq!(
            a.kfold(SetOp::Union, 2).unwrap(),
            fam(2, &[&[], &[1], &[2], &[1, 2]])
        );

        assert!(matches!(a.kfold(SetOp::Union, 0), Err(Error::Range(_))));
        assert_eq!(a.kfold(SetOp::Intersection, 1).unwrap(), a);
    }

    #[test]
    fn kfold_of_extremal_family_stays_in_low_sets() {
        // Symmetric differences of pairs from the r=1, i=1 construction on
        // [5] never exceed 3 elements.
        let a = crate::construct::family_a_ri(5, 1, 1).unwrap();
        let sq = a.kfold(SetOp::SymmetricDifference, 2).unwrap();
        assert!(sq.iter().all(|m| m.size() <= 3));
        assert_eq!(sq, naive_kfold(&a, SetOp::SymmetricDifference, 2));
    }

    #[test]
    fn kfold_matches_naive_enumeration() {
        let a = fam(4, &[&[1], &[2, 3], &[1, 4], &[]]);
        for op in [
            SetOp::Intersection,
            SetOp::Union,
            SetOp::SymmetricDifference,
        ] {
            for k in 1..=3 {
                assert_eq!(a.kfold(op, k).unwrap(), naive_kfold(&a, op, k));
            }
        }
    }

    #[test]
    fn kfold_multi_examples() {
        let a = fam(3, &[&[1], &[2, 3]]);
        assert_eq!(kfold_multi(&[a.clone()], SetOp::Union).unwrap(), a);

        let s1 = fam(2, &[&[1]]);
        let s2 = fam(2, &[&[2]]);
        assert_eq!(
            kfold_multi(&[s1, s2], SetOp::SymmetricDifference).unwrap(),
            fam(2, &[&[1, 2]])
        );

        let copies = vec![a.clone(), a.clone(), a.clone()];
        assert_eq!(
            kfold_multi(&copies, SetOp::Intersection).unwrap(),
            a.kfold(SetOp::Intersection, 3).unwrap()
        );

        assert!(kfold_multi(&[], SetOp::Union).is_err());
        let other = fam(4, &[&[1]]);
        assert!(kfold_multi(&[a, other], SetOp::Union).is_err());
    }

    #[test]
    fn kwise_union_examples() {
        for (n, t, k) in [(4u32, 1u32, 2u32), (5, 2, 3)] {
            let a = crate::construct::lowsets(n, t).unwrap();
            assert!(a.is_kwise_union(k, i64::from(k * t)).unwrap());
        }

        let a = crate::construct::family_a_ri(5, 1, 1).unwrap();
        assert!(a.is_kwise_union(2, 3i64).unwrap());

        let b = fam(3, &[&[1, 2], &[2, 3]]);
        assert!(!b.is_kwise_union(2, 2i64).unwrap());
        assert!(matches!(b.is_kwise_union(0, 2i64), Err(Error::Range(_))));
    }

    #[test]
    fn kwise_union_matches_definitional_closure() {
        let cases = [
            fam(5, &[&[1, 2], &[2, 3], &[4], &[]]),
            fam(4, &[&[1], &[2], &[3], &[4]]),
            crate::construct::family_a_ri(5, 1, 1).unwrap(),
        ];
        for a in &cases {
            for k in 1..=3u32 {
                let closure = a.kfold(SetOp::Union, k).unwrap();
                let true_max = closure.iter().map(|m| m.size()).max().unwrap();
                assert_eq!(a.max_kfold_union_size(k), true_max, "family {a:?} k={k}");
                for bound in 0..=a.n() {
                    assert_eq!(
                        a.is_kwise_union(k, i64::from(bound)).unwrap(),
                        true_max <= bound
                    );
                }
            }
        }
    }

    #[test]
    fn kwise_intersecting_examples() {
        let n = 5;
        let full = fam(n, &[&[1, 2, 3, 4, 5]]);
        assert!(full.is_kwise_intersecting(3, i64::from(n)).unwrap());

        // Complement duality against the union side.
        let a = crate::construct::family_a_ri(5, 1, 1).unwrap();
        let d = 2 * 1 + 1;
        assert!(a
            .complement_family()
            .is_kwise_intersecting(2, 5 - i64::from(d))
            .unwrap());

        let b = fam(3, &[&[1, 2], &[2, 3]]);
        assert!(!b.is_kwise_intersecting(2, 2i64).unwrap());
    }

    #[test]
    fn kwise_intersecting_is_union_on_complements() {
        let cases = [
            fam(5, &[&[1, 2], &[2, 3], &[4], &[1, 2, 3, 4, 5]]),
            fam(4, &[&[1, 2, 3], &[2, 3, 4], &[1, 3, 4]]),
        ];
        for a in &cases {
            for k in 1..=3u32 {
                for t in 0..=a.n() {
                    assert_eq!(
                        a.is_kwise_intersecting(k, i64::from(t)).unwrap(),
                        a.complement_family()
                            .is_kwise_union(k, i64::from(a.n()) - i64::from(t))
                            .unwrap(),
                        "family {a:?} k={k} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn relabelling_commutes_with_core_operations() {
        let a = fam(4, &[&[1, 2], &[3], &[], &[2, 3, 4]]);
        let perm = Permutation::new(vec![3, 1, 4, 2]).unwrap();
        let ra = a.relabel(&perm).unwrap();

        for op in [
            SetOp::Intersection,
            SetOp::Union,
            SetOp::SymmetricDifference,
        ] {
            assert_eq!(
                a.kfold(op, 2).unwrap().relabel(&perm).unwrap(),
                ra.kfold(op, 2).unwrap()
            );
        }
        assert_eq!(a.vc_dimension(), ra.vc_dimension());

        let y = SubsetMask::from_elements([2, 4]).unwrap();
        assert_eq!(
            a.trace(y).unwrap().relabel(&perm).unwrap(),
            ra.trace(perm.apply_mask(y)).unwrap()
        );
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![1, 4, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.apply(1), 2);
    }

    #[test]
    fn ground_set_bounds() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(129).is_err());
        let g = GroundSet::new(128).unwrap();
        assert_eq!(g.universe().size(), 128);
    }

    #[test]
    fn family_construction_dedups_and_sorts() {
        let g = GroundSet::new(3).unwrap();
        let m1 = SubsetMask::from_elements([2]).unwrap();
        let m2 = SubsetMask::from_elements([1]).unwrap();
        let f = SetFamily::new(g, vec![m1, m2, m1]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[0], m2);

        let wide = SubsetMask::from_elements([5]).unwrap();
        assert!(SetFamily::new(g, vec![wide]).is_err());
    }
}
