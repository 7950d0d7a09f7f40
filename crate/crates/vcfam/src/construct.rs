//! Generators for the named extremal families, counterexample constructions
//! and edge cases.
//!
//! Every generator returns a canonical [`SetFamily`]. Generators that would
//! materialize very large families reject their parameters instead.

use crate::error::{Error, Result};
use crate::family::{universe_bits, GroundSet, SetFamily, SubsetMask};

/// Upper bound on the number of sets any generator will materialize.
const MAX_FAMILY: u128 = 1 << 22;

fn low_bits(s: u32) -> u128 {
    if s >= 128 {
        u128::MAX
    } else {
        (1u128 << s) - 1
    }
}

/// All masks over `[n]` with exactly `s` elements, ascending (Gosper's hack).
pub(crate) fn masks_of_size(n: u32, s: u32) -> Vec<u128> {
    if s > n {
        return Vec::new();
    }
    if s == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut v = low_bits(s);
    let last = low_bits(s) << (n - s);
    loop {
        out.push(v);
        if v == last {
            break;
        }
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

fn check_family_size(count: u128, what: &str) -> Result<()> {
    if count > MAX_FAMILY {
        Err(Error::range(format!(
            "{what} would have {count} sets, above the {MAX_FAMILY}-set generator cap"
        )))
    } else {
        Ok(())
    }
}

pub(crate) fn binom_leq_u128(n: u32, d: u32) -> u128 {
    // Saturating count of subsets of size <= d; only used for size guards.
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=d.min(n) {
        total = total.saturating_add(term);
        term = term
            .saturating_mul((n - i) as u128)
            .checked_div((i + 1) as u128)
            .unwrap_or(u128::MAX);
        if total > MAX_FAMILY {
            return total;
        }
    }
    total
}

/// `(n choose <= d)`: all subsets of `[n]` with at most `d` elements.
pub fn lowsets(n: u32, d: u32) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    if d > n {
        return Err(Error::range(format!(
            "lowsets requires d <= n, got ({n},{d})"
        )));
    }
    check_family_size(binom_leq_u128(n, d), "lowsets")?;
    let mut bits = Vec::new();
    for s in 0..=d {
        bits.extend(masks_of_size(n, s));
    }
    Ok(SetFamily::from_bits_unsorted(ground, bits))
}

/// `(n choose >= n-d)`: the complement-dual of [`lowsets`].
pub fn highsets(n: u32, d: u32) -> Result<SetFamily> {
    Ok(lowsets(n, d)?.complement_family())
}

/// The product family `((n-r) choose <= i) × 2^{top r elements}`: a low set
/// over the first `n-r` elements joined with an arbitrary subset of the last
/// `r`.
pub fn family_a_ri(n: u32, r: u32, i: u32) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    if r + i > n {
        return Err(Error::range(format!(
            "family_a_ri requires r + i <= n, got r={r}, i={i}, n={n}"
        )));
    }
    let count = binom_leq_u128(n - r, i).saturating_mul(low_bits(r).saturating_add(1));
    check_family_size(count, "family_a_ri")?;
    let mut low_part = Vec::new();
    for s in 0..=i {
        low_part.extend(masks_of_size(n - r, s));
    }
    let mut bits = Vec::with_capacity(low_part.len() << r);
    for h in 0..=low_bits(r) {
        let high = h << (n - r);
        for &l in &low_part {
            bits.push(l | high);
        }
        if r == 0 {
            break;
        }
    }
    Ok(SetFamily::from_bits_unsorted(ground, bits))
}

/// Chain length for residue class `k` in the mod-d structure on `[n]`:
/// the elements `k, k+d, k+2d, …` that lie in `[n]`.
fn chain_len(n: u32, d: u32, k: u32) -> u32 {
    (n - k) / d + 1
}

/// The family of subsets of `[n]` that are monotone modulo `d`: whenever a
/// member contains `i > d` it also contains `i - d`. Its members are exactly
/// the unions of prefixes of the `d` arithmetic chains `k, k+d, …`, so the
/// family has `∏_{k=1}^{d} (⌊(n-k)/d⌋ + 2)` members.
pub fn mod_d_family(n: u32, d: u32) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    if d == 0 || d > n {
        return Err(Error::range(format!(
            "mod_d_family requires 1 <= d <= n, got ({n},{d})"
        )));
    }
    let lens: Vec<u32> = (1..=d).map(|k| chain_len(n, d, k)).collect();
    let mut count: u128 = 1;
    for &l in &lens {
        count = count.saturating_mul((l + 1) as u128);
    }
    check_family_size(count, "mod_d_family")?;

    // Mixed-radix odometer over prefix lengths per chain.
    let mut counts = vec![0u32; d as usize];
    let mut bits = Vec::with_capacity(count as usize);
    loop {
        bits.push(prefix_mask(n, d, &counts));
        let mut pos = 0usize;
        loop {
            if pos == d as usize {
                return Ok(SetFamily::from_bits_unsorted(ground, bits));
            }
            if counts[pos] < lens[pos] {
                counts[pos] += 1;
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
    }
}

fn prefix_mask(n: u32, d: u32, counts: &[u32]) -> u128 {
    let mut bits = 0u128;
    for (idx, &c) in counts.iter().enumerate() {
        let k = idx as u32 + 1;
        for step in 0..c {
            let e = k + step * d;
            debug_assert!(e <= n);
            bits |= 1u128 << (e - 1);
        }
    }
    bits
}

/// The chain-prefix code of a mod-d member: one prefix length per residue
/// class, with `counts[k-1] <= ⌊(n-k)/d⌋ + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModDCode {
    counts: Vec<u32>,
}

impl ModDCode {
    pub fn new(counts: Vec<u32>, n: u32, d: u32) -> Result<Self> {
        if d == 0 || d > n {
            return Err(Error::range(format!(
                "mod-d code requires 1 <= d <= n, got ({n},{d})"
            )));
        }
        if counts.len() != d as usize {
            return Err(Error::range(format!(
                "mod-d code must have {d} counts, got {}",
                counts.len()
            )));
        }
        for (idx, &c) in counts.iter().enumerate() {
            let bound = chain_len(n, d, idx as u32 + 1);
            if c > bound {
                return Err(Error::range(format!(
                    "count {c} for residue {} exceeds its bound {bound}",
                    idx + 1
                )));
            }
        }
        Ok(ModDCode { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Encodes a member of the mod-d family as its per-chain prefix lengths.
pub fn mod_d_encode(s: SubsetMask, n: u32, d: u32) -> Result<ModDCode> {
    let ground = GroundSet::new(n)?;
    if d == 0 || d > n {
        return Err(Error::range(format!(
            "mod_d_encode requires 1 <= d <= n, got ({n},{d})"
        )));
    }
    if !ground.admits(s) {
        return Err(Error::GroundMismatch { n, mask: s.bits() });
    }
    let mut counts = Vec::with_capacity(d as usize);
    for k in 1..=d {
        let len = chain_len(n, d, k);
        let mut prefix = 0u32;
        let mut in_prefix = true;
        for step in 0..len {
            let e = k + step * d;
            if s.contains(e) {
                if !in_prefix {
                    return Err(Error::range(format!(
                        "set {s:?} is not monotone modulo {d}: element {e} present without {}",
                        e - d
                    )));
                }
                prefix += 1;
            } else {
                in_prefix = false;
            }
        }
        counts.push(prefix);
    }
    ModDCode::new(counts, n, d)
}

/// Inverse of [`mod_d_encode`].
pub fn mod_d_decode(code: &ModDCode, n: u32, d: u32) -> Result<SubsetMask> {
    // Re-validate against (n, d); a code built for other parameters errors.
    let code = ModDCode::new(code.counts.clone(), n, d)?;
    Ok(SubsetMask::from_bits(prefix_mask(n, d, &code.counts)))
}

/// The complete chain `{∅, [1], [2], …, [n]}` of nested prefixes.
pub fn complete_chain(n: u32) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    let bits = (0..=n).map(universe_bits).collect();
    Ok(SetFamily::from_bits_unsorted(ground, bits))
}

/// The full cube minus the two sets `{1}` and `[n]`; has `2^n - 2` members.
pub fn cube_minus_two(n: u32) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    if n < 2 {
        return Err(Error::range("cube_minus_two requires n >= 2"));
    }
    if n > 20 {
        return Err(Error::range(format!(
            "cube_minus_two over [{n}] is too large to materialize"
        )));
    }
    let bits = (0..(1u128 << n))
        .filter(|&m| m != 1 && m != low_bits(n))
        .collect();
    Ok(SetFamily::from_bits_unsorted(ground, bits))
}
