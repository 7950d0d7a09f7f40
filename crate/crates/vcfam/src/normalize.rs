//! Compression and shifting operators, single-step and fixpoint.
//!
//! Both operators are injective on a family, so they preserve cardinality.
//! Sweep orders are fixed (elements ascending for compression, index pairs
//! in lexicographic order for shifting) so fixpoint outputs are
//! deterministic.

use crate::error::{Error, Result};
use crate::family::{Element, SetFamily, SubsetMask};

/// The i-compression: a member keeps element `i` only when the member with
/// `i` removed is already present; otherwise `i` is dropped.
pub fn compress_at(a: &SetFamily, i: Element) -> Result<SetFamily> {
    if i == 0 || i > a.n() {
        return Err(Error::ElementOutOfRange {
            element: i,
            n: a.n(),
        });
    }
    let bit = 1u128 << (i - 1);
    let mut out = Vec::with_capacity(a.len());
    for m in a.iter() {
        let bits = m.bits();
        if bits & bit != 0 && !a.contains(SubsetMask::from_bits(bits & !bit)) {
            out.push(bits & !bit);
        } else {
            out.push(bits);
        }
    }
    let result = SetFamily::from_bits_unsorted(a.ground(), out);
    debug_assert_eq!(result.len(), a.len(), "compression must be injective");
    Ok(result)
}

/// Sweeps i = 1..n repeatedly until a full sweep changes nothing.
///
/// The total bit count of the family strictly decreases on every changing
/// sweep, which bounds the loop; exceeding the bound is an internal error.
pub fn compress(a: &SetFamily) -> Result<SetFamily> {
    let total_bits: u64 = a.iter().map(|m| m.size() as u64).sum();
    let mut cur = a.clone();
    for _ in 0..=total_bits {
        let mut next = cur.clone();
        for i in 1..=a.n() {
            next = compress_at(&next, i)?;
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::Internal(
        "compression fixpoint exceeded its potential bound".into(),
    ))
}

/// True iff the family is invariant under taking subsets.
pub fn is_downward_closed(a: &SetFamily) -> bool {
    // Checking one-element deletions suffices: closure under single
    // deletions gives closure under all subsets by induction on size.
    a.iter().all(|m| {
        let bits = m.bits();
        let mut rest = bits;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            if !a.contains(SubsetMask::from_bits(bits & !b)) {
                return false;
            }
            rest &= rest - 1;
        }
        true
    })
}

/// The (i,j)-shift: replaces `j` by `i` in a member when `i ∉ S`, `j ∈ S`
/// and the replacement is not already present. Requires `i < j`.
pub fn shift_at(a: &SetFamily, i: Element, j: Element) -> Result<SetFamily> {
    if i == 0 || j > a.n() {
        return Err(Error::ElementOutOfRange {
            element: if i == 0 { i } else { j },
            n: a.n(),
        });
    }
    if i >= j {
        return Err(Error::range(format!("shift requires i < j, got ({i},{j})")));
    }
    let ib = 1u128 << (i - 1);
    let jb = 1u128 << (j - 1);
    let mut out = Vec::with_capacity(a.len());
    for m in a.iter() {
        let bits = m.bits();
        if bits & ib == 0 && bits & jb != 0 {
            let target = (bits & !jb) | ib;
            if !a.contains(SubsetMask::from_bits(target)) {
                out.push(target);
                continue;
            }
        }
        out.push(bits);
    }
    let result = SetFamily::from_bits_unsorted(a.ground(), out);
    debug_assert_eq!(result.len(), a.len(), "shifting must be injective");
    Ok(result)
}

/// Sweeps all pairs i < j in lexicographic order until no pair changes the
/// family.
///
/// The sum of element values over all members strictly decreases on every
/// changing sweep, which bounds the loop.
pub fn shift(a: &SetFamily) -> Result<SetFamily> {
    let weight: u64 = a
        .iter()
        .map(|m| m.elements().iter().map(|&e| e as u64).sum::<u64>())
        .sum();
    let mut cur = a.clone();
    for _ in 0..=weight {
        let mut next = cur.clone();
        for i in 1..a.n() {
            for j in (i + 1)..=a.n() {
                next = shift_at(&next, i, j)?;
            }
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::Internal(
        "shift fixpoint exceeded its potential bound".into(),
    ))
}

/// True iff every (i,j)-shift with i < j fixes the family.
pub fn is_shifted(a: &SetFamily) -> bool {
    for i in 1..a.n() {
        let ib = 1u128 << (i - 1);
        for j in (i + 1)..=a.n() {
            let jb = 1u128 << (j - 1);
            for m in a.iter() {
                let bits = m.bits();
                if bits & ib == 0
                    && bits & jb != 0
                    && !a.contains(SubsetMask::from_bits((bits & !jb) | ib))
                {
                    return false;
                }
            }
        }
    }
    true
}
