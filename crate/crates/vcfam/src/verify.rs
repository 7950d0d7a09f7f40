//! Seeded verification suites for the structural properties the rest of
//! the crate relies on.
//!
//! Each suite runs a fixed number of deterministic trials (or a fixed
//! parameter grid), reports every failure, and serializes the first
//! counterexample in the family file format. A failure of one of these
//! suites means a checked statement is false, not merely that the tool
//! misbehaved, so callers surface it through a distinguished exit status.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::construct;
use crate::error::Result;
use crate::family::{kfold_multi, GroundSet, SetFamily, SetOp, SubsetMask};
use crate::files;
use crate::formula::{binom_leq, conjecture_value, katona_bound};
use crate::normalize::{compress, compress_at, is_downward_closed, shift_at};
use crate::search::{
    find_union_witness, max_kwise_union, max_vc_delta, union_witness_preconditions, SearchOptions,
    VcDeltaMode,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: String,
    /// What the suite checks, phrased as the property under test.
    pub description: String,
    pub trials: u64,
    pub seed: u64,
    pub max_n: u32,
    pub failures: Vec<String>,
    /// First counterexample, serialized as a family file with comments.
    pub counterexample: Option<String>,
    /// True when a failure falsifies a checked mathematical statement
    /// rather than indicating a tool defect.
    pub claim_violation: bool,
}

impl SuiteOutcome {
    fn new(suite: &str, description: &str, trials: u64, seed: u64, max_n: u32) -> Self {
        SuiteOutcome {
            suite: suite.into(),
            description: description.into(),
            trials,
            seed,
            max_n,
            failures: Vec::new(),
            counterexample: None,
            claim_violation: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, message: String, witness: Option<(&SetFamily, String)>) {
        if self.counterexample.is_none() {
            if let Some((family, context)) = witness {
                let mut text = String::new();
                for line in context.lines() {
                    text.push_str(&format!("# {line}\n"));
                }
                text.push_str(&files::serialize(family));
                self.counterexample = Some(text);
            }
        }
        self.failures.push(message);
        self.claim_violation = true;
    }
}

/// Fuzz suites build families over the full 2^n mask space; n is clamped
/// to keep that space (and every VC computation) desk-sized.
fn clamp_fuzz_n(max_n: u32) -> u32 {
    max_n.clamp(2, 12)
}

fn random_family(rng: &mut ChaCha8Rng, n: u32, max_members: usize) -> SetFamily {
    let space = 1usize << n;
    let count = rng.gen_range(1..=max_members.min(space));
    let ground = GroundSet::new(n).expect("fuzz ground set");
    let bits = sample(rng, space, count)
        .into_iter()
        .map(|m| m as u128)
        .collect();
    SetFamily::from_bits_unsorted(ground, bits)
}

/// Random downward-closed family that is k-wise union bounded by `d`,
/// built by compressing a random family and pruning maximal members until
/// the union bound holds.
fn random_kwise_union_downset(rng: &mut ChaCha8Rng, n: u32, k: u32, d: u32) -> Result<SetFamily> {
    let mut fam = compress(&random_family(rng, n, 1 << (n - 1)))?;
    while !fam.is_kwise_union(k, i64::from(d))? {
        // Dropping the numerically largest member removes a maximal set, so
        // downward closure is preserved.
        let mut members = fam.members().to_vec();
        members.pop();
        if members.is_empty() {
            members.push(SubsetMask::EMPTY);
        }
        fam = SetFamily::new(fam.ground(), members)?;
    }
    Ok(fam)
}

/// Shattering never grows under compression: for all families A₁,…,A_k and
/// any element i, every set shattered by the symmetric-difference closure
/// of the compressed families is shattered by the closure of the originals.
pub fn fuzz_lemma_compress(trials: u64, seed: u64, max_n: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(
        "lemma-compress",
        "compression cannot enlarge the shattered collection of a k-fold \
         symmetric-difference closure",
        trials,
        seed,
        clamp_fuzz_n(max_n),
    );
    let max_n = clamp_fuzz_n(max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=3u32);
        let families: Vec<SetFamily> = (0..k).map(|_| random_family(&mut rng, n, 48)).collect();
        let i = rng.gen_range(1..=n);
        let compressed: Vec<SetFamily> = families
            .iter()
            .map(|f| compress_at(f, i))
            .collect::<Result<_>>()?;

        let closure = kfold_multi(&families, SetOp::SymmetricDifference)?;
        let closure_c = kfold_multi(&compressed, SetOp::SymmetricDifference)?;
        let sh = closure.shattered_collection()?;
        let sh_c = closure_c.shattered_collection()?;

        let contained = sh_c.iter().all(|y| sh.contains(*y));
        if !contained || closure_c.vc_dimension() > closure.vc_dimension() {
            out.fail(
                format!("trial {trial}: inclusion fails for n={n} k={k} i={i}"),
                Some((&families[0], format!("trial {trial}, n={n}, k={k}, i={i}"))),
            );
        }
    }
    Ok(out)
}

/// Shifts preserve both downward closure and the k-wise union bound.
pub fn fuzz_lemma_shift(trials: u64, seed: u64, max_n: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(
        "lemma-shift",
        "an (i,j)-shift of a downward-closed k-wise union-bounded family \
         stays downward closed and union-bounded",
        trials,
        seed,
        clamp_fuzz_n(max_n),
    );
    let max_n = clamp_fuzz_n(max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=3u32);
        let d = rng.gen_range(1..n);
        let fam = random_kwise_union_downset(&mut rng, n, k, d)?;
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(i + 1..=n);
        let shifted = shift_at(&fam, i, j)?;
        let ok = shifted.len() == fam.len()
            && is_downward_closed(&shifted)
            && shifted.is_kwise_union(k, i64::from(d))?;
        if !ok {
            out.fail(
                format!("trial {trial}: shift ({i},{j}) breaks n={n} k={k} d={d}"),
                Some((
                    &fam,
                    format!("trial {trial}, n={n}, k={k}, d={d}, shift ({i},{j})"),
                )),
            );
        }
    }
    Ok(out)
}

/// Whenever `|B| >= s` and `|A| > 2^s (n choose <= u)`, some member unions
/// with B to at least s+u+1 elements.
pub fn fuzz_lemma_witness(trials: u64, seed: u64, max_n: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(
        "lemma-witness",
        "a family larger than 2^s (n choose <= u) always contains a member \
         whose union with a given s-set has more than s+u elements",
        trials,
        seed,
        clamp_fuzz_n(max_n),
    );
    let max_n = clamp_fuzz_n(max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=max_n);
        let space = 1u128 << n;
        // Draw (s, u) until the precondition is satisfiable on [n].
        let (s, u, threshold) = loop {
            let s = rng.gen_range(0..=3u32.min(n));
            let u = rng.gen_range(0..=2u32);
            let thr = (BigUint::from(1u32) << s) * binom_leq(n, u);
            if BigUint::from(space) > thr {
                break (s, u, thr.to_usize().expect("threshold fits usize"));
            }
        };
        let ground = GroundSet::new(n)?;
        let count = rng.gen_range(threshold + 1..=space as usize);
        let bits = sample(&mut rng, space as usize, count)
            .into_iter()
            .map(|m| m as u128)
            .collect();
        let fam = SetFamily::from_bits_unsorted(ground, bits);

        let mut b_bits = 0u128;
        while b_bits.count_ones() < s {
            b_bits |= 1 << rng.gen_range(0..n);
        }
        let b = SubsetMask::from_bits(b_bits);

        if !union_witness_preconditions(&fam, b, s, u) {
            out.fail(
                format!("trial {trial}: constructed instance misses preconditions"),
                Some((&fam, format!("trial {trial}: bad construction"))),
            );
            continue;
        }
        match find_union_witness(&fam, b, s, u)? {
            Some(w) => debug_assert!((w | b).size() >= s + u + 1),
            None => out.fail(
                format!(
                    "trial {trial}: no witness for n={n} s={s} u={u} |A|={}",
                    fam.len()
                ),
                Some((&fam, format!("trial {trial}, n={n}, s={s}, u={u}, B={b:?}"))),
            ),
        }
    }
    Ok(out)
}

/// `|A| <= (n choose <= VC(A))` on random families.
pub fn fuzz_sauer(trials: u64, seed: u64, max_n: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(
        "sauer",
        "every family has at most (n choose <= d) members, d its VC dimension",
        trials,
        seed,
        clamp_fuzz_n(max_n),
    );
    let max_n = clamp_fuzz_n(max_n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(1..=max_n);
        let fam = random_family(&mut rng, n, 1 << n.min(10));
        let d = fam.vc_dimension();
        debug_assert!(d >= 0);
        if BigUint::from(fam.len()) > binom_leq(n, d as u32) {
            out.fail(
                format!(
                    "trial {trial}: |A|={} exceeds bound at n={n} d={d}",
                    fam.len()
                ),
                Some((&fam, format!("trial {trial}, n={n}, VC={d}"))),
            );
        }
    }
    Ok(out)
}

/// The two extremal quantities agree: the exhaustive bounded-VC search
/// equals the union-bounded search on the full small grid.
pub fn grid_equivalence(max_n: u32) -> Result<SuiteOutcome> {
    let cap = max_n.min(4);
    let mut out = SuiteOutcome::new(
        "equivalence",
        "the largest family with VC-bounded k-fold symmetric differences is \
         exactly as large as the largest k-wise union-bounded family",
        0,
        0,
        cap,
    );
    let opts = SearchOptions::default();
    for n in 2..=cap {
        for k in 2..=3u32 {
            for d in 1..n {
                out.trials += 1;
                let p_prime = max_vc_delta(n, k, d, VcDeltaMode::Exhaustive, &opts)?;
                let p = max_kwise_union(n, k, d, &opts)?;
                if p_prime.value != p.value {
                    out.fail(
                        format!(
                            "n={n} k={k} d={d}: vc-delta {} != union {}",
                            p_prime.value, p.value
                        ),
                        p_prime
                            .witnesses
                            .first()
                            .map(|w| (w, format!("vc-delta witness, n={n} k={k} d={d}"))),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Search values match the pairwise closed form exactly.
pub fn grid_katona(max_n: u32) -> Result<SuiteOutcome> {
    let cap = max_n.min(6);
    let mut out = SuiteOutcome::new(
        "katona",
        "the 2-wise union search attains 2^r ((n-r) choose <= ⌊d/2⌋) exactly",
        0,
        0,
        cap,
    );
    let opts = SearchOptions::default();
    for n in 2..=cap {
        for d in 1..n {
            out.trials += 1;
            let searched = max_kwise_union(n, 2, d, &opts)?;
            let bound = katona_bound(n, d)?;
            if BigUint::from(searched.value) != bound.value {
                out.fail(
                    format!(
                        "n={n} d={d}: searched {} != bound {}",
                        searched.value, bound.value
                    ),
                    searched
                        .witnesses
                        .first()
                        .map(|w| (w, format!("search witness, n={n} d={d}"))),
                );
            }
        }
    }
    Ok(out)
}

/// Search values match the conjectured closed form on the desk grid. Any
/// mismatch here is a loud claim violation, not a quiet test failure.
pub fn grid_conjecture(max_n: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(
        "conjecture",
        "the k-wise union search attains max_i 2^{d-ki} ((n-d+ki) choose <= i) \
         on the searched grid",
        0,
        0,
        max_n,
    );
    let opts = SearchOptions::default();
    for k in 2..=3u32 {
        let n_cap = if k == 3 { max_n.min(6) } else { max_n.min(7) };
        for n in 2..=n_cap {
            for d in 1..n.min(5) {
                out.trials += 1;
                let searched = max_kwise_union(n, k, d, &opts)?;
                let conj = conjecture_value(n, k, d)?;
                if BigUint::from(searched.value) != conj.value {
                    out.fail(
                        format!(
                            "n={n} k={k} d={d}: searched {} != conjectured {}",
                            searched.value, conj.value
                        ),
                        searched
                            .witnesses
                            .first()
                            .map(|w| (w, format!("search witness, n={n} k={k} d={d}"))),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// The mod-d construction behaves as documented: counted size, growth
/// beyond (n/d)^d, closure under pairwise union/intersection, VC exactly d.
pub fn suite_counterexample(max_n: u32) -> Result<SuiteOutcome> {
    let cap = max_n.min(20);
    let mut out = SuiteOutcome::new(
        "counterexample",
        "the mod-d family has the product size above (n/d)^d, is closed \
         under pairwise union and intersection, and has VC dimension d",
        0,
        0,
        cap,
    );
    for d in 1..=4u32 {
        for n in (d + 1)..=cap {
            out.trials += 1;
            let fam = construct::mod_d_family(n, d)?;
            let mut product: u64 = 1;
            for k in 1..=d {
                product *= ((n - k) / d + 2) as u64;
            }
            let size_ok = fam.len() as u64 == product;
            let power_ok =
                BigUint::from(d).pow(d) * BigUint::from(fam.len()) > BigUint::from(n).pow(d);
            let union_ok = fam.kfold(SetOp::Union, 2)? == fam;
            let inter_ok = fam.kfold(SetOp::Intersection, 2)? == fam;
            let vc_ok = n > 10 || fam.vc_dimension() == d as i32;
            if !(size_ok && power_ok && union_ok && inter_ok && vc_ok) {
                out.fail(
                    format!(
                        "n={n} d={d}: size_ok={size_ok} power_ok={power_ok} \
                         union_ok={union_ok} inter_ok={inter_ok} vc_ok={vc_ok}"
                    ),
                    Some((&fam, format!("mod-d family, n={n} d={d}"))),
                );
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_suites_pass_on_small_budgets() {
        assert!(fuzz_lemma_compress(60, DEFAULT_SEED, 6).unwrap().passed());
        assert!(fuzz_lemma_shift(60, DEFAULT_SEED, 6).unwrap().passed());
        assert!(fuzz_lemma_witness(120, DEFAULT_SEED, 8).unwrap().passed());
        assert!(fuzz_sauer(120, DEFAULT_SEED, 8).unwrap().passed());
    }

    #[test]
    fn fuzz_suites_are_deterministic() {
        let a = fuzz_sauer(30, 7, 6).unwrap();
        let b = fuzz_sauer(30, 7, 6).unwrap();
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.trials, b.trials);
    }

    #[test]
    fn grid_suites_pass_on_small_grids() {
        assert!(grid_equivalence(3).unwrap().passed());
        assert!(grid_katona(5).unwrap().passed());
        assert!(grid_conjecture(5).unwrap().passed());
        assert!(suite_counterexample(12).unwrap().passed());
    }

    #[test]
    fn counterexamples_serialize_with_context() {
        let mut out = SuiteOutcome::new("x", "d", 1, 0, 3);
        let fam = construct::lowsets(3, 1).unwrap();
        out.fail("boom".into(), Some((&fam, "ctx line".into())));
        let text = out.counterexample.as_ref().unwrap();
        assert!(text.starts_with("# ctx line\n"));
        assert!(text.contains("n=3"));
        assert!(!out.passed());
        assert!(out.claim_violation);
    }
}
