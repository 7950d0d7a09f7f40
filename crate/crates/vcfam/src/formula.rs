//! Closed-form bound evaluators and threshold estimates, all in exact
//! big-integer arithmetic. No floating point anywhere in this module.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Which closed-form bound a [`BoundReport`] evaluates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormulaId {
    SauerShelah,
    Katona,
    MainBound,
    Conjecture,
}

impl FormulaId {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaId::SauerShelah => "sauer-shelah",
            FormulaId::Katona => "katona",
            FormulaId::MainBound => "main",
            FormulaId::Conjecture => "conjecture",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub label: String,
    pub value: BigUint,
}

/// Evaluation of a closed-form bound with all intermediate quantities kept
/// for audit output. The final value is always recomputable from the terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundReport {
    pub formula: FormulaId,
    pub value: BigUint,
    pub terms: Vec<Term>,
}

impl BoundReport {
    fn term(&self, label: &str) -> Option<&BigUint> {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map(|t| &t.value)
    }

    /// Recomputes the value from the recorded terms.
    pub fn validate(&self) -> bool {
        match self.formula {
            FormulaId::SauerShelah => true,
            FormulaId::Katona | FormulaId::MainBound => match (self.term("r"), self.term("base")) {
                (Some(r), Some(base)) => {
                    let r = r.try_into().unwrap_or(u64::MAX).min(127) as u32;
                    (BigUint::one() << r) * base == self.value
                }
                _ => false,
            },
            FormulaId::Conjecture => {
                let max = self
                    .terms
                    .iter()
                    .filter(|t| t.label.starts_with("candidate_i"))
                    .map(|t| t.value.clone())
                    .max();
                max.as_ref() == Some(&self.value)
            }
        }
    }
}

/// The binomial coefficient `C(n, t)`, zero when `t > n`.
pub fn binom(n: u32, t: u32) -> BigUint {
    if t > n {
        return BigUint::zero();
    }
    let t = t.min(n - t);
    let mut out = BigUint::one();
    for i in 0..t {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// `(n choose <= t) = Σ_{i=0}^{min(t,n)} C(n, i)`; saturates at `2^n` for
/// `t >= n`.
pub fn binom_leq(n: u32, t: u32) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    for i in 0..=t.min(n) {
        total += &term;
        if i < n {
            term = term * (n - i) / (i + 1);
        }
    }
    total
}

/// Signed-index variant used by the threshold chains: empty sum for t < 0.
fn binom_leq_i(n: u32, t: i64) -> BigUint {
    if t < 0 {
        BigUint::zero()
    } else {
        binom_leq(n, t.min(u32::MAX as i64) as u32)
    }
}

fn binom_i(n: u32, t: i64) -> BigUint {
    if t < 0 {
        BigUint::zero()
    } else {
        binom(n, t.min(u32::MAX as i64) as u32)
    }
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

/// `|A| <= (n choose <= d)` for every family of VC dimension at most `d`.
pub fn sauer_shelah_bound(n: u32, d: u32) -> BigUint {
    binom_leq(n, d)
}

/// `|A| <= 2^r (n-r choose <= ⌊d/2⌋)` with `r = d mod 2`, for families whose
/// pairwise symmetric differences have VC dimension at most `d`.
pub fn katona_bound(n: u32, d: u32) -> Result<BoundReport> {
    if d == 0 || d >= n {
        return Err(Error::range(format!(
            "katona_bound requires 0 < d < n, got ({n},{d})"
        )));
    }
    let report = half_split_bound(FormulaId::Katona, n, 2, d);
    debug_assert!(report.validate());
    Ok(report)
}

/// `|A| <= 2^r (n-r choose <= ⌊d/k⌋)` with `r = d mod k`, for families whose
/// k-fold symmetric differences have VC dimension at most `d` (valid for
/// every large enough `n`; agrees with the k = 1 and k = 2 bounds).
pub fn main_bound(n: u32, k: u32, d: u32) -> Result<BoundReport> {
    if k == 0 {
        return Err(Error::range("main_bound requires k >= 1"));
    }
    if d == 0 || d >= n {
        return Err(Error::range(format!(
            "main_bound requires 0 < d < n, got ({n},{d})"
        )));
    }
    let report = half_split_bound(FormulaId::MainBound, n, k, d);
    debug_assert!(report.validate());
    Ok(report)
}

fn half_split_bound(formula: FormulaId, n: u32, k: u32, d: u32) -> BoundReport {
    let r = d % k;
    let t = d / k;
    let base = binom_leq(n - r, t);
    let value = pow2(r) * &base;
    BoundReport {
        formula,
        value,
        terms: vec![
            Term {
                label: "r".into(),
                value: BigUint::from(r),
            },
            Term {
                label: "t".into(),
                value: BigUint::from(t),
            },
            Term {
                label: "base".into(),
                value: base,
            },
        ],
    }
}

/// The conjectured exact value `max_{0 <= i <= d/k} 2^{d-ki} (n-d+ki choose <= i)`,
/// with every candidate recorded. Ties in the reported argmax break toward
/// the larger `i`; the value is unaffected.
pub fn conjecture_value(n: u32, k: u32, d: u32) -> Result<BoundReport> {
    if k == 0 {
        return Err(Error::range("conjecture_value requires k >= 1"));
    }
    if d == 0 || d > n {
        return Err(Error::range(format!(
            "conjecture_value requires n >= d > 0, got ({n},{d})"
        )));
    }
    let mut terms = vec![
        Term {
            label: "r".into(),
            value: BigUint::from(d % k),
        },
        Term {
            label: "t".into(),
            value: BigUint::from(d / k),
        },
    ];
    let mut best = BigUint::zero();
    let mut argmax = 0u32;
    for i in 0..=d / k {
        let cand = pow2(d - k * i) * binom_leq(n - d + k * i, i);
        if cand >= best {
            best = cand.clone();
            argmax = i;
        }
        terms.push(Term {
            label: format!("candidate_i{i}"),
            value: cand,
        });
    }
    terms.push(Term {
        label: "argmax_i".into(),
        value: BigUint::from(argmax),
    });
    let report = BoundReport {
        formula: FormulaId::Conjecture,
        value: best,
        terms,
    };
    debug_assert!(report.validate());
    Ok(report)
}

/// Smallest `n` at which the threshold chain for the half-split bound is
/// provably positive from that point on, computed recursively over
/// `r = d mod k`.
///
/// For `r = 0` the chain requires `(n choose <= t) > 2^{(k-1)t+1} (n choose <= t-1)`;
/// for `r >= 1` it requires
/// `2^r (n-r choose <= t) > 2^{d+1} (n choose <= t-1) + (n choose t)` and at
/// least one more than the threshold for `d - 1`. Positivity from `n` onward
/// is certified by requiring the whole forward-difference chain of the
/// defining polynomial to be positive at `n`, and the recursive lower bound
/// is applied at every `d` so the estimate is monotone nondecreasing in `d`.
///
/// The result is an upper bound for the true threshold; the scan cost grows
/// with the answer (roughly `d·2^d/k`).
pub fn n0_estimate(d: u32, k: u32) -> u64 {
    assert!(k >= 1, "n0_estimate requires k >= 1");
    let mut memo: Vec<u64> = vec![1]; // d = 0: the trivial family bound holds everywhere
    for cur in 1..=d {
        let prev = memo[(cur - 1) as usize];
        let scan = scan_threshold(cur, k);
        memo.push(scan.max(prev + 1));
    }
    memo[d as usize]
}

fn scan_threshold(d: u32, k: u32) -> u64 {
    let r = d % k;
    let t = (d / k) as i64;
    let mut n = (d + 1) as u64;
    loop {
        let chain_ok = (0..=t).all(|j| {
            if r == 0 {
                let m = pow2((k - 1) * (t as u32) + 1);
                binom_leq_i(n as u32, t - j) > m * binom_leq_i(n as u32, t - j - 1)
            } else {
                pow2(r) * binom_leq_i(n as u32 - r, t - j)
                    > pow2(d + 1) * binom_leq_i(n as u32, t - j - 1) + binom_i(n as u32, t - j)
            }
        });
        if chain_ok {
            return n;
        }
        n += 1;
    }
}
