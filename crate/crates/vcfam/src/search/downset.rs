//! Incremental enumeration of down-sets with branch-and-bound pruning.
//!
//! Families are grown by adding member masks in ascending numeric (colex)
//! order. A mask is addable when all its one-element deletions are present
//! (downward closure) and, under the shifted restriction, when all its
//! left-shift targets are present. Removing the numerically largest member
//! of a (shifted) down-set leaves a (shifted) down-set, so every family in
//! the space is reached through exactly one chain of valid prefixes.
//!
//! Two feasibility predicates are supported, both monotone (once a mask
//! conflicts with a family it conflicts with every superfamily), which
//! makes pruning and candidate filtering sound:
//!
//! * bounded k-fold unions, tracked on the antichain of maximal members;
//! * bounded VC dimension of the k-fold symmetric-difference closure,
//!   tracked as per-level closure bitsets over the `2^n` masks (n <= 6).

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::search::exhaustive::{small_vc_at_most, xor_translate};
use crate::search::SearchOptions;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Predicate {
    KwiseUnion { k: u32, d: u32 },
    VcSymdiff { k: u32, d: u32 },
}

pub(crate) struct RawSearch {
    pub value: u64,
    pub witnesses: Vec<Vec<u128>>,
    pub cap_hit: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Shared {
    incumbent: AtomicU64,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
    store: Mutex<WitnessStore>,
}

struct WitnessStore {
    best: u64,
    families: Vec<Vec<u128>>,
    cap: usize,
    cap_hit: bool,
}

impl WitnessStore {
    fn offer(&mut self, len: u64, family: &[u128]) {
        if len > self.best {
            self.best = len;
            self.families.clear();
            self.cap_hit = false;
        }
        if len == self.best {
            if self.families.len() < self.cap {
                self.families.push(family.to_vec());
            } else {
                self.cap_hit = true;
            }
        }
    }
}

/// Runs the search. `max_member_size` bounds candidate masks (members of a
/// feasible down-set never exceed it for either predicate); `seed` is a
/// verified attainable value used as the initial incumbent.
pub(crate) fn run(
    n: u32,
    max_member_size: u32,
    pred: Predicate,
    seed: u64,
    opts: &SearchOptions,
) -> Result<RawSearch> {
    if let Predicate::VcSymdiff { .. } = pred {
        debug_assert!(n <= 6, "symdiff closure bitsets require n <= 6");
    }
    let start = Instant::now();
    let candidates = candidate_masks(n, max_member_size)?;
    let shared = Shared {
        incumbent: AtomicU64::new(seed.max(1)),
        nodes: AtomicU64::new(0),
        budget: opts.node_budget,
        aborted: AtomicBool::new(false),
        store: Mutex::new(WitnessStore {
            best: seed.max(1),
            families: Vec::new(),
            cap: opts.witness_cap,
            cap_hit: false,
        }),
    };

    let workers = opts.workers.max(1);
    if workers == 1 {
        let mut explorer = Explorer::new(n, pred, opts.shifted_restriction, &shared);
        explorer.enter_node()?;
        explorer.expand(&candidates, 0, candidates.len())?;
    } else {
        // Root children are claimed round-robin; every deeper family has a
        // unique root child (its smallest non-empty member), so subtrees
        // partition the space.
        std::thread::scope(|scope| -> Result<()> {
            let mut handles = Vec::new();
            for w in 0..workers {
                let candidates = &candidates;
                let shared = &shared;
                handles.push(scope.spawn(move || -> Result<()> {
                    let mut explorer = Explorer::new(n, pred, opts.shifted_restriction, shared);
                    if w == 0 {
                        explorer.enter_node()?; // the root family {∅}
                    }
                    explorer.expand_stride(candidates, w, workers)
                }));
            }
            let mut first_err = None;
            for h in handles {
                if let Err(e) = h.join().expect("search worker panicked") {
                    first_err.get_or_insert(e);
                }
            }
            match first_err {
                Some(e) => Err(e),
                None => Ok(()),
            }
        })?;
    }

    let store = shared.store.into_inner().expect("witness store poisoned");
    if store.families.is_empty() {
        return Err(Error::Internal(
            "search finished without any witness for its value".into(),
        ));
    }
    Ok(RawSearch {
        value: store.best,
        witnesses: store.families,
        cap_hit: store.cap_hit,
        nodes: shared.nodes.into_inner(),
        elapsed: start.elapsed(),
    })
}

/// All masks over [n] with 1..=limit elements, ascending. The static size
/// of this list is the search-space estimate used to reject hopeless
/// parameters up front.
fn candidate_masks(n: u32, limit: u32) -> Result<Vec<u128>> {
    const MAX_CANDIDATES: u128 = 20_000;
    let estimate = crate::construct::binom_leq_u128(n, limit).saturating_sub(1);
    if estimate > MAX_CANDIDATES {
        return Err(Error::budget(format!(
            "down-set search space over [{n}] with member size <= {limit} \
             exceeds {MAX_CANDIDATES} candidate masks"
        )));
    }
    let mut out = Vec::with_capacity(estimate as usize);
    for size in 1..=limit.min(n) {
        out.extend(crate::construct::masks_of_size(n, size));
    }
    out.sort_unstable();
    Ok(out)
}

enum PredState {
    Union {
        k: u32,
        d: u32,
        antichain: Vec<u128>,
        undo: Vec<Vec<u128>>,
    },
    Symdiff {
        k: u32,
        d: u32,
        n: u32,
        layers: Vec<u64>,
        undo: Vec<Vec<u64>>,
    },
}

impl PredState {
    fn new(n: u32, pred: Predicate) -> PredState {
        match pred {
            Predicate::KwiseUnion { k, d } => PredState::Union {
                k,
                d,
                antichain: vec![0],
                undo: Vec::new(),
            },
            Predicate::VcSymdiff { k, d } => PredState::Symdiff {
                k,
                d,
                n,
                // Layer j holds the (j+1)-fold closure of {∅}, which is {∅}.
                layers: vec![1u64; k as usize],
                undo: Vec::new(),
            },
        }
    }

    /// Attempts to add `c`; commits and returns true on success. For the
    /// union predicate the candidate list is pre-filtered, so this always
    /// succeeds there; the symmetric-difference predicate decides here.
    fn try_push(&mut self, c: u128) -> bool {
        match self {
            PredState::Union {
                k,
                d,
                antichain,
                undo,
            } => {
                if cfg!(debug_assertions) {
                    assert!(unions_feasible(c, antichain, *k, *d));
                }
                let mut removed = Vec::new();
                antichain.retain(|&m| {
                    if m & !c == 0 {
                        removed.push(m);
                        false
                    } else {
                        true
                    }
                });
                antichain.push(c);
                undo.push(removed);
                true
            }
            PredState::Symdiff {
                k,
                d,
                n,
                layers,
                undo,
            } => {
                let cm = c as u32;
                let mut next = layers.clone();
                next[0] |= 1u64 << cm;
                for j in 1..*k as usize {
                    next[j] = layers[j] | xor_translate(next[j - 1], cm, *n);
                }
                if !small_vc_at_most(next[*k as usize - 1], *n, *d) {
                    return false;
                }
                undo.push(std::mem::replace(layers, next));
                true
            }
        }
    }

    fn pop(&mut self, c: u128) {
        match self {
            PredState::Union {
                antichain, undo, ..
            } => {
                let removed = undo.pop().expect("unbalanced predicate pop");
                // Antichain order is irrelevant; c may sit anywhere after
                // deeper pushes restored their own removals.
                let pos = antichain
                    .iter()
                    .position(|&m| m == c)
                    .expect("popped mask missing from antichain");
                antichain.swap_remove(pos);
                antichain.extend(removed);
            }
            PredState::Symdiff { layers, undo, .. } => {
                let _ = c;
                *layers = undo.pop().expect("unbalanced predicate pop");
            }
        }
    }

    /// Filters the remaining candidates after `c` was pushed, keeping only
    /// masks still compatible with every feasibility constraint that
    /// involves `c`. Only the union predicate filters; infeasibility is
    /// permanent for it, so dropped candidates never come back.
    fn filter_children(&self, c: u128, rest: &[u128], out: &mut Vec<u128>) {
        out.clear();
        match self {
            PredState::Union {
                k, d, antichain, ..
            } => {
                for &cand in rest {
                    if unions_with_forced(cand, c, antichain, *k, *d) {
                        out.push(cand);
                    }
                }
            }
            PredState::Symdiff { .. } => out.extend_from_slice(rest),
        }
    }
}

/// Checks every k-multiset that contains both `cand` and `forced`: the
/// union accumulator already holds both, repetitions of either are no-ops,
/// so the k-2 free slots range over the antichain alone.
fn unions_with_forced(cand: u128, forced: u128, pool: &[u128], k: u32, d: u32) -> bool {
    if k == 1 {
        return cand.count_ones() <= d;
    }
    all_unions_within(cand | forced, k - 2, pool, 0, d)
}

/// Full feasibility of adding `c`: every k-multiset over the family that
/// uses `c` at least once stays within `d`. Used only to cross-check the
/// incremental filtering.
fn unions_feasible(c: u128, antichain: &[u128], k: u32, d: u32) -> bool {
    if k == 1 {
        return c.count_ones() <= d;
    }
    all_unions_within(c, k - 1, antichain, 0, d)
}

fn all_unions_within(acc: u128, slots: u32, pool: &[u128], start: usize, d: u32) -> bool {
    if acc.count_ones() > d {
        return false;
    }
    if slots == 0 {
        return true;
    }
    for i in start..pool.len() {
        if !all_unions_within(acc | pool[i], slots - 1, pool, i, d) {
            return false;
        }
    }
    true
}

struct Explorer<'a> {
    pred: PredState,
    shifted: bool,
    family: Vec<u128>,
    shared: &'a Shared,
    scratch: Vec<Vec<u128>>,
}

impl<'a> Explorer<'a> {
    fn new(n: u32, pred: Predicate, shifted: bool, shared: &'a Shared) -> Self {
        Explorer {
            pred: PredState::new(n, pred),
            shifted,
            family: vec![0],
            shared,
            scratch: Vec::new(),
        }
    }

    /// Counts the current family as a visited node and offers it as a
    /// witness candidate.
    fn enter_node(&mut self) -> Result<()> {
        let visited = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if visited > self.shared.budget {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return Err(Error::budget(format!(
                "node budget of {} exhausted",
                self.shared.budget
            )));
        }
        if self.shared.aborted.load(Ordering::Relaxed) {
            return Err(Error::budget("search aborted by another worker"));
        }
        let len = self.family.len() as u64;
        if len >= self.shared.incumbent.load(Ordering::Relaxed) {
            self.shared.incumbent.fetch_max(len, Ordering::Relaxed);
            let mut store = self.shared.store.lock().expect("witness store poisoned");
            store.offer(len, &self.family);
        }
        Ok(())
    }

    fn contains(&self, mask: u128) -> bool {
        self.family.binary_search(&mask).is_ok()
    }

    fn down_addable(&self, c: u128) -> bool {
        let mut rest = c;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            if !self.contains(c & !b) {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    fn shift_addable(&self, c: u128) -> bool {
        let mut js = c;
        while js != 0 {
            let j = js.trailing_zeros();
            let jb = 1u128 << j;
            let mut is = !c & (jb - 1);
            while is != 0 {
                let ib = is & is.wrapping_neg();
                if !self.contains((c & !jb) | ib) {
                    return false;
                }
                is &= is - 1;
            }
            js &= js - 1;
        }
        true
    }

    /// Expands the current node over `cands[from..to]`.
    fn expand(&mut self, cands: &[u128], from: usize, to: usize) -> Result<()> {
        for idx in from..to {
            let c = cands[idx];
            if !self.down_addable(c) {
                continue;
            }
            if self.shifted && !self.shift_addable(c) {
                continue;
            }
            if !self.pred.try_push(c) {
                continue;
            }
            self.family.push(c);

            let mut child = self.scratch.pop().unwrap_or_default();
            self.pred.filter_children(c, &cands[idx + 1..], &mut child);
            let bound = (self.family.len() + child.len()) as u64;
            if bound >= self.shared.incumbent.load(Ordering::Relaxed) {
                self.enter_node()?;
                let end = child.len();
                self.expand(&child, 0, end)?;
            }
            self.scratch.push(child);

            self.family.pop();
            self.pred.pop(c);
        }
        Ok(())
    }

    /// Root-level striding for parallel workers: expands only the root
    /// children at indices congruent to `offset` modulo `stride`.
    fn expand_stride(&mut self, cands: &[u128], offset: usize, stride: usize) -> Result<()> {
        let mut idx = offset;
        while idx < cands.len() {
            self.expand(cands, idx, idx + 1)?;
            idx += stride;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    /// Reference enumeration of all down-sets over [n] satisfying `pred`,
    /// by direct subset filtering; n kept tiny.
    fn downsets_max(n: u32, pred: impl Fn(&[u128]) -> bool) -> u64 {
        let masks = 1u32 << n;
        let mut best = 0u64;
        for fam_bits in 1u64..(1 << masks) {
            let members: Vec<u128> = (0..masks)
                .filter(|m| fam_bits >> m & 1 == 1)
                .map(|m| m as u128)
                .collect();
            let down = members.iter().all(|&m| {
                let mut rest = m;
                loop {
                    if rest == 0 {
                        break true;
                    }
                    let b = rest & rest.wrapping_neg();
                    if !members.contains(&(m & !b)) {
                        break false;
                    }
                    rest &= rest - 1;
                }
            });
            if down && pred(&members) {
                best = best.max(members.len() as u64);
            }
        }
        best
    }

    #[test]
    fn engine_agrees_with_direct_downset_enumeration() {
        for n in 2u32..=4 {
            for k in 2u32..=3 {
                for d in 1..n {
                    let expected = downsets_max(n, |members| {
                        let mut max_union = 0;
                        for &a in members {
                            for &b in members {
                                for &c in members {
                                    let u = if k == 2 { a | b } else { a | b | c };
                                    max_union = max_union.max(u.count_ones());
                                }
                            }
                        }
                        max_union <= d
                    });
                    let raw = run(
                        n,
                        d,
                        Predicate::KwiseUnion { k, d },
                        1,
                        &SearchOptions {
                            shifted_restriction: false,
                            ..opts()
                        },
                    )
                    .unwrap();
                    assert_eq!(raw.value, expected, "n={n} k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn witness_enumeration_is_complete_without_shifting() {
        // All maximum 2-wise 1-union families on [4] are {∅, {x}}.
        let raw = run(
            4,
            1,
            Predicate::KwiseUnion { k: 2, d: 1 },
            1,
            &SearchOptions {
                shifted_restriction: false,
                witness_cap: 64,
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(raw.value, 2);
        assert!(!raw.cap_hit);
        assert_eq!(raw.witnesses.len(), 4);
        for w in &raw.witnesses {
            assert_eq!(w[0], 0);
            assert_eq!(w[1].count_ones(), 1);
        }
    }

    #[test]
    fn shifted_mode_explores_fewer_nodes() {
        let with = run(6, 3, Predicate::KwiseUnion { k: 2, d: 3 }, 1, &opts()).unwrap();
        let without = run(
            6,
            3,
            Predicate::KwiseUnion { k: 2, d: 3 },
            1,
            &SearchOptions {
                shifted_restriction: false,
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(with.value, without.value);
        assert!(with.nodes < without.nodes);
    }

    #[test]
    fn candidate_cap_rejects_oversized_spaces() {
        assert!(matches!(
            candidate_masks(20, 10),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
