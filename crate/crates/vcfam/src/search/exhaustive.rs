//! Exhaustive engines over every family on a tiny ground set, plus the
//! mask-space bitset helpers shared with the compressed down-set search.
//!
//! For `n <= 6` a whole family fits one `u64`: bit `m` marks that the
//! subset with mask `m` is a member. Closures under the three operations
//! are then cheap bit manipulations, and `n <= 4` allows scanning all
//! `2^(2^n)` families outright.

use std::time::{Duration, Instant};

/// `{t ^ c | t ∈ bits}` on a mask-space bitset: XOR-translating the mask
/// space permutes bit positions, realized as a butterfly swap per set bit
/// of `c`.
pub(crate) fn xor_translate(bits: u64, c: u32, n: u32) -> u64 {
    debug_assert!(n <= 6 && c < (1 << n));
    debug_assert!(
        n >= 6 || bits >> (1u32 << n) == 0,
        "bits outside mask space"
    );
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    let mut x = bits;
    for p in 0..n {
        if c >> p & 1 == 1 {
            let s = 1u32 << p;
            x = ((x & MASKS[p as usize]) << s) | ((x >> s) & MASKS[p as usize]);
        }
    }
    x
}

/// k-fold symmetric-difference closure of the family encoded in `fam`.
pub(crate) fn sym_closure(fam: u64, n: u32, k: u32) -> u64 {
    let mut level = fam;
    for _ in 1..k {
        let mut next = 0u64;
        let mut rest = fam;
        while rest != 0 {
            let s = rest.trailing_zeros();
            next |= xor_translate(level, s, n);
            rest &= rest - 1;
        }
        level = next;
    }
    level
}

/// Pairwise closure under an arbitrary mask operation.
fn pair_closure(fam: u64, op: impl Fn(u32, u32) -> u32) -> u64 {
    let mut out = 0u64;
    let mut rest_a = fam;
    while rest_a != 0 {
        let a = rest_a.trailing_zeros();
        let mut rest_b = fam;
        while rest_b != 0 {
            let b = rest_b.trailing_zeros();
            out |= 1u64 << op(a, b);
            rest_b &= rest_b - 1;
        }
        rest_a &= rest_a - 1;
    }
    out
}

/// True iff the family encoded in `fam` has VC dimension at most `d`:
/// shattered sets are downward closed, so it suffices that no (d+1)-subset
/// of `[n]` is shattered.
pub(crate) fn small_vc_at_most(fam: u64, n: u32, d: u32) -> bool {
    if d >= n {
        return true;
    }
    let want = d + 1;
    for y in 1u32..(1 << n) {
        if y.count_ones() != want {
            continue;
        }
        let full: u64 = if want >= 6 {
            u64::MAX
        } else {
            (1 << (1 << want)) - 1
        };
        let mut seen = 0u64;
        let mut rest = fam;
        while rest != 0 {
            let m = rest.trailing_zeros();
            seen |= 1 << pext_small(m & y, y);
            if seen == full {
                return false; // shattered
            }
            rest &= rest - 1;
        }
    }
    true
}

/// Parallel bit extract for tiny masks.
fn pext_small(bits: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut out_bit = 0;
    let mut rest = mask;
    while rest != 0 {
        let p = rest.trailing_zeros();
        out |= (bits >> p & 1) << out_bit;
        out_bit += 1;
        rest &= rest - 1;
    }
    out
}

/// Feasibility for the bounded-VC symmetric-difference search.
pub(crate) fn vc_delta_feasible(fam: u64, n: u32, k: u32, d: u32) -> bool {
    small_vc_at_most(sym_closure(fam, n, k), n, d)
}

/// Feasibility for the two-sided intersection/union search.
pub(crate) fn two_sided_feasible(fam: u64, n: u32, d: u32) -> bool {
    small_vc_at_most(pair_closure(fam, |a, b| a & b), n, d)
        && small_vc_at_most(pair_closure(fam, |a, b| a | b), n, d)
}

pub(crate) struct RawResult {
    pub value: u64,
    pub witnesses: Vec<Vec<u128>>,
    pub cap_hit: bool,
    pub scanned: u64,
    pub elapsed: Duration,
}

/// Scans every nonempty family over `[n]` (`n <= 4`) and returns the
/// maximum size under `feasible`, with all maxima up to `cap`.
pub(crate) fn max_family(n: u32, cap: usize, feasible: impl Fn(u64) -> bool) -> RawResult {
    debug_assert!(n <= 4);
    let start = Instant::now();
    let masks = 1u32 << n;
    let total: u64 = 1 << masks;
    let mut best = 0u64;
    let mut witnesses: Vec<Vec<u128>> = Vec::new();
    let mut cap_hit = false;
    for fam in 1..total {
        let size = fam.count_ones() as u64;
        if size < best {
            continue;
        }
        if feasible(fam) {
            if size > best {
                best = size;
                witnesses.clear();
                cap_hit = false;
            }
            if witnesses.len() < cap {
                witnesses.push(family_bits(fam));
            } else {
                cap_hit = true;
            }
        }
    }
    RawResult {
        value: best,
        witnesses,
        cap_hit,
        scanned: total - 1,
        elapsed: start.elapsed(),
    }
}

fn family_bits(fam: u64) -> Vec<u128> {
    let mut out = Vec::with_capacity(fam.count_ones() as usize);
    let mut rest = fam;
    while rest != 0 {
        out.push(rest.trailing_zeros() as u128);
        rest &= rest - 1;
    }
    out
}
