//! Ternary digit weights, cyclic carry sequences, and exhaustive verifiers
//! for the digit-weight inequalities behind the character-sum congruences.
//!
//! Everything here works modulo `3^m - 1`, where multiplying by 3 is a cyclic
//! rotation of the m ternary digits and negation is the digit complement
//! `d ↦ 2 - d`. A linear combination `Σ l_j a^(j)` can then be written
//! digit-wise, and [`carry_solve`] recovers the unique cyclic carry sequence
//! that turns those digit sums into the digits of the reduced result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default seed for sampled scans.
pub const DEFAULT_SEED: u64 = 0x5EED_D1C5;

const SAMPLE_BLOCK: u64 = 1 << 14;
const MAX_WITNESSES: usize = 16;
/// Largest m for which digit scans are accepted (values stay far from u64 limits).
pub const MAX_DIGITS: u32 = 30;

#[inline]
pub fn pow3(m: u32) -> u64 {
    3u64.pow(m)
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 || m > MAX_DIGITS {
        return Err(Error::Capacity { m, max: MAX_DIGITS });
    }
    Ok(())
}

/// `x mod (3^m - 1)` in `[0, 3^m - 2]`.
pub fn canonical_residue(x: i64, m: u32) -> u64 {
    x.rem_euclid(pow3(m) as i64 - 1) as u64
}

/// Ternary digit sum of a canonical residue `0 <= x <= 3^m - 2`.
pub fn weight(x: u64, m: u32) -> Result<u32> {
    if x > pow3(m) - 2 {
        return Err(Error::Domain(format!(
            "{x} is not a canonical residue modulo 3^{m} - 1; reduce it with canonical_residue first"
        )));
    }
    Ok(digit_sum(x))
}

#[inline]
fn digit_sum(mut x: u64) -> u32 {
    let mut s = 0;
    while x > 0 {
        s += (x % 3) as u32;
        x /= 3;
    }
    s
}

/// m ternary digits, index i holding the coefficient of `3^i`, read m-periodically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryWord {
    digits: Vec<u8>,
}

impl TernaryWord {
    /// Digits of `value`, which must lie in `[0, 3^m - 1]`.
    pub fn from_value(value: u64, m: u32) -> Result<Self> {
        if value >= pow3(m) {
            return Err(Error::Domain(format!("{value} does not fit in {m} ternary digits")));
        }
        let mut v = value;
        let digits = (0..m)
            .map(|_| {
                let d = (v % 3) as u8;
                v /= 3;
                d
            })
            .collect();
        Ok(TernaryWord { digits })
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() || digits.iter().any(|&d| d > 2) {
            return Err(Error::Domain(format!("{digits:?} is not a ternary word")));
        }
        Ok(TernaryWord { digits })
    }

    pub fn m(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Digit `i`, with `i` taken modulo m.
    #[inline]
    pub fn digit(&self, i: i64) -> u8 {
        self.digits[i.rem_euclid(self.digits.len() as i64) as usize]
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * 3 + d as u64)
    }

    pub fn weight(&self) -> u32 {
        self.digits.iter().map(|&d| d as u32).sum()
    }

    /// Word for `3^k · self mod (3^m - 1)`: digit i moves to position i + k.
    pub fn rotate(&self, k: i64) -> TernaryWord {
        TernaryWord {
            digits: (0..self.digits.len() as i64).map(|i| self.digit(i - k)).collect(),
        }
    }

    /// Word for `-self mod (3^m - 1)` via `d ↦ 2 - d`.
    pub fn complement(&self) -> TernaryWord {
        TernaryWord {
            digits: self.digits.iter().map(|&d| 2 - d).collect(),
        }
    }

    /// True when the value is `≡ 0 (mod 3^m - 1)`, i.e. all zeros or all twos.
    pub fn is_zero_residue(&self) -> bool {
        self.digits.iter().all(|&d| d == 0) || self.digits.iter().all(|&d| d == 2)
    }
}

/// One term `coef · word` of a digit-wise linear combination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub coef: i64,
    pub word: TernaryWord,
}

impl Summand {
    pub fn new(coef: i64, word: TernaryWord) -> Self {
        Summand { coef, word }
    }
}

/// Cyclic carry sequence `c_0..c_{m-1}` (with `c_{-1} = c_{m-1}`) and the
/// coefficient bounds `l_+`, `l_-` of the combination that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrySeq {
    pub c: Vec<i64>,
    pub l_plus: i64,
    pub l_minus: i64,
    /// Whether some summand is nonzero modulo `3^m - 1`.
    pub nonzero_summand: bool,
}

impl CarrySeq {
    pub fn m(&self) -> u32 {
        self.c.len() as u32
    }

    #[inline]
    pub fn at(&self, i: i64) -> i64 {
        self.c[i.rem_euclid(self.c.len() as i64) as usize]
    }

    pub fn sum(&self) -> i64 {
        self.c.iter().sum()
    }

    /// `l_- - 1 <= c_i <= l_+`, tightened to `l_- <= c_i <= l_+ - 1` when some
    /// summand is nonzero.
    pub fn within_bounds(&self) -> bool {
        let (lo, hi) = self.bounds();
        self.c.iter().all(|&c| lo <= c && c <= hi)
    }

    pub fn bounds(&self) -> (i64, i64) {
        if self.nonzero_summand {
            (self.l_minus, self.l_plus - 1)
        } else {
            (self.l_minus - 1, self.l_plus)
        }
    }
}

/// Digit-wise totals `B_i = Σ_j l_j a_i^(j)`.
fn digit_totals(m: usize, summands: &[Summand]) -> Vec<i64> {
    (0..m)
        .map(|i| summands.iter().map(|s| s.coef * s.word.digits[i] as i64).sum())
        .collect()
}

/// Propagates `c_i = (c_{i-1} + B_i - s_i) / 3` from a guessed `c_{-1}`;
/// returns the sequence when every step divides exactly and it closes up.
fn propagate(start: i64, totals: &[i64], s: &[u8]) -> Option<Vec<i64>> {
    let mut prev = start;
    let mut c = Vec::with_capacity(totals.len());
    for (b, &si) in totals.iter().zip(s) {
        let num = prev + b - si as i64;
        if num.rem_euclid(3) != 0 {
            return None;
        }
        prev = num.div_euclid(3);
        c.push(prev);
    }
    (prev == start).then_some(c)
}

/// Solves `3 c_i + s_i = c_{i-1} + Σ_j l_j a_i^(j)` cyclically, where `s` is
/// the canonical residue of `Σ_j l_j a^(j)` modulo `3^m - 1`.
///
/// Every candidate `c_{-1}` in `[l_- - 1, l_+]` is tried; exactly one must
/// close up. Anything else contradicts the carry theorem and panics with the
/// offending inputs.
pub fn carry_solve(m: u32, summands: &[Summand]) -> Result<(TernaryWord, CarrySeq)> {
    check_m(m)?;
    if summands.is_empty() {
        return Err(Error::Precondition("carry_solve needs at least one summand".into()));
    }
    for s in summands {
        if s.coef == 0 {
            return Err(Error::Precondition("summand coefficients must be nonzero".into()));
        }
        if s.word.m() != m {
            return Err(Error::Precondition(format!(
                "summand has {} digits, expected {m}",
                s.word.m()
            )));
        }
    }
    let l_plus: i64 = summands.iter().filter(|s| s.coef > 0).map(|s| s.coef).sum();
    let l_minus: i64 = summands.iter().filter(|s| s.coef < 0).map(|s| s.coef).sum();
    let total: i64 = summands.iter().map(|s| s.coef * s.word.value() as i64).sum();
    let s_word = TernaryWord::from_value(canonical_residue(total, m), m)?;
    let totals = digit_totals(m as usize, summands);

    let mut found = (l_minus - 1..=l_plus).filter_map(|start| propagate(start, &totals, &s_word.digits));
    let c = found.next();
    let extra = found.next();
    let c = match (c, extra) {
        (Some(c), None) => c,
        (c, extra) => panic!(
            "carry system has {} solutions in [{}, {}] (expected exactly one): m={m}, summands={summands:?}, first={c:?}, second={extra:?}",
            if c.is_none() { "no" } else { "multiple" },
            l_minus - 1,
            l_plus
        ),
    };
    // Σ 3^i (3 c_i + s_i - c_{i-1}) telescopes to s + (3^m - 1) c_{m-1}
    let reconstructed = s_word.value() as i64 + (pow3(m) as i64 - 1) * c[m as usize - 1];
    assert_eq!(
        reconstructed, total,
        "carry round-trip failed: m={m}, summands={summands:?}, c={c:?}"
    );
    Ok((
        s_word,
        CarrySeq {
            c,
            l_plus,
            l_minus,
            nonzero_summand: summands.iter().any(|s| !s.word.is_zero_residue()),
        },
    ))
}

/// Word of `(3^m - 1) / 2`, all digits 1.
pub fn half_word(m: u32) -> TernaryWord {
    TernaryWord { digits: vec![1; m as usize] }
}

/// Nonnegative summands for `(q-1)/2 - 7a`, digit sums `5 + a_{i-1} - a_{i-2} - a_i`.
pub fn summands_half_minus_7a(a: &TernaryWord) -> Vec<Summand> {
    vec![
        Summand::new(1, half_word(a.m())),
        Summand::new(1, a.rotate(2).complement()),
        Summand::new(1, a.rotate(1)),
        Summand::new(1, a.complement()),
    ]
}

/// Nonnegative summands for `5a`, digit sums `4 + a_{i-2} - a_{i-1} - a_i`.
pub fn summands_5a(a: &TernaryWord) -> Vec<Summand> {
    vec![
        Summand::new(1, a.rotate(2)),
        Summand::new(1, a.rotate(1).complement()),
        Summand::new(1, a.complement()),
    ]
}

/// Nonnegative summands for `(q-1)/2 - 5a - 7b`, digit sums
/// `9 - 2a_{i-1} + a_i - b_{i-2} + b_{i-1} - b_i`; carries land in `0..=6`.
pub fn summands_two_variable(a: &TernaryWord, b: &TernaryWord) -> Vec<Summand> {
    let a1c = a.rotate(1).complement();
    vec![
        Summand::new(1, half_word(a.m())),
        Summand::new(1, a1c.clone()),
        Summand::new(1, a1c),
        Summand::new(1, a.clone()),
        Summand::new(1, b.rotate(2).complement()),
        Summand::new(1, b.rotate(1)),
        Summand::new(1, b.complement()),
    ]
}

/// The same combination with signed coefficients (`l_+ = 3`, `l_- = -4`).
pub fn summands_two_variable_raw(a: &TernaryWord, b: &TernaryWord) -> Vec<Summand> {
    let a1 = a.rotate(1);
    vec![
        Summand::new(1, half_word(a.m())),
        Summand::new(-1, a1.clone()),
        Summand::new(-1, a1),
        Summand::new(1, a.clone()),
        Summand::new(-1, b.rotate(2)),
        Summand::new(1, b.rotate(1)),
        Summand::new(-1, b.clone()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ScanMode {
    Full,
    Sampled { samples: u64, seed: u64 },
}

impl ScanMode {
    pub fn sampled(samples: u64) -> Self {
        ScanMode::Sampled {
            samples,
            seed: DEFAULT_SEED,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScanMode::Full => "full",
            ScanMode::Sampled { .. } => "sampled",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ScanMode::Full => None,
            ScanMode::Sampled { seed, .. } => Some(*seed),
        }
    }
}

/// Deterministic sample stream: block `k` draws from its own ChaCha stream, so
/// the result does not depend on how blocks are spread over workers.
fn sampled_blocks(samples: u64, seed: u64) -> impl ParallelIterator<Item = (u64, ChaCha8Rng)> {
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    (0..blocks).into_par_iter().map(move |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let n = SAMPLE_BLOCK.min(samples - k * SAMPLE_BLOCK);
        (n, rng)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    pub value: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carries: Option<Vec<i64>>,
}

/// Result of a digit-weight inequality scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalReport {
    pub theorem: String,
    pub m: u32,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: u64,
    /// Smallest left-hand side seen.
    pub min: u32,
    /// Whether the left-hand side reached at least m everywhere.
    pub holds: bool,
    pub counterexamples: u64,
    /// Minimizers when the bound holds, counterexamples otherwise (capped).
    pub witnesses: Vec<Witness>,
    /// Named auxiliary checks (alternate form, carry identities), all expected true.
    pub checks: Vec<NamedCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
struct ScanAcc {
    instances: u64,
    min: u32,
    below: u64,
    minimizers: Vec<Witness>,
    bad: Vec<Witness>,
    flags: Vec<bool>,
}

impl ScanAcc {
    fn new(nflags: usize) -> Self {
        ScanAcc {
            min: u32::MAX,
            flags: vec![true; nflags],
            ..Default::default()
        }
    }

    fn record(&mut self, m: u32, w: Witness) {
        let v = w.value as u32;
        self.instances += 1;
        if v < m {
            self.below += 1;
            if self.bad.len() < MAX_WITNESSES {
                self.bad.push(w.clone());
            }
        }
        if v < self.min {
            self.min = v;
            self.minimizers.clear();
        }
        if v == self.min && self.minimizers.len() < MAX_WITNESSES {
            self.minimizers.push(w);
        }
    }

    fn merge(mut self, other: ScanAcc) -> ScanAcc {
        self.instances += other.instances;
        self.below += other.below;
        self.bad.extend(other.bad);
        self.bad.sort_by_key(|w| (w.a, w.b));
        self.bad.truncate(MAX_WITNESSES);
        if other.min < self.min {
            self.min = other.min;
            self.minimizers = other.minimizers;
        } else if other.min == self.min {
            self.minimizers.extend(other.minimizers);
        }
        self.minimizers.sort_by_key(|w| (w.a, w.b));
        self.minimizers.truncate(MAX_WITNESSES);
        for (f, o) in self.flags.iter_mut().zip(other.flags) {
            *f &= o;
        }
        self
    }

    fn into_report(self, theorem: &str, m: u32, mode: ScanMode, flag_names: &[&str]) -> GoalReport {
        GoalReport {
            theorem: theorem.to_string(),
            m,
            mode: mode.name().to_string(),
            seed: mode.seed(),
            instances: self.instances,
            min: self.min,
            holds: self.below == 0,
            counterexamples: self.below,
            witnesses: if self.below == 0 { self.minimizers } else { self.bad },
            checks: flag_names
                .iter()
                .zip(self.flags)
                .map(|(n, passed)| NamedCheck {
                    name: n.to_string(),
                    passed,
                })
                .collect(),
        }
    }
}

fn weight_table(m: u32) -> Vec<u8> {
    (0..pow3(m) - 1).map(|x| digit_sum(x) as u8).collect()
}

fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let (mut r0, mut r1, mut s0, mut s1) = (n, a.rem_euclid(n), 0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n))
}

const GOAL41_CHECKS: [&str; 3] = [
    "eq14_direct_form_agrees",
    "carry_weight_identity",
    "digit_plus_carries_at_most_4",
];

/// Scans `w(5a) + w((q-1)/2 - 7a) >= m` over `a ∈ [0, q-2]`.
///
/// Each `a` is also checked against the direct form
/// `w(5a) + w((q-1)/2 - 5^{-1}·7·(5a))`, and, through [`carry_solve`],
/// against `Σ s_i + Σ t_i = 9m - 2Σa_i - 2Σc_i - 2Σe_i` and
/// `a_i + c_i + e_i <= 4`.
pub fn verify_goal41(m: u32, mode: ScanMode) -> Result<GoalReport> {
    check_m(m)?;
    if m % 2 == 0 {
        return Err(Error::Precondition(format!(
            "m={m} is even, so 5 may divide 3^m - 1 and the two forms are not equivalent"
        )));
    }
    let n = pow3(m) as i64 - 1;
    let half = n / 2;
    let inv5 = mod_inverse(5, n).expect("gcd(5, 3^m - 1) = 1 for odd m");
    let wt = weight_table(m);
    let w = |x: i64| wt[x.rem_euclid(n) as usize] as u32;

    let eval = |a: i64| -> (Witness, [bool; 3]) {
        let lhs = w(5 * a) + w(half - 7 * a);
        let a5 = (5 * a).rem_euclid(n);
        let direct = w(a5) + w(half - (inv5 * 7 % n) * a5 % n);
        let word = TernaryWord::from_value(a as u64, m).expect("a < 3^m");
        let (s, c) = carry_solve(m, &summands_half_minus_7a(&word)).expect("valid summands");
        let (t, e) = carry_solve(m, &summands_5a(&word)).expect("valid summands");
        let identity = (s.weight() + t.weight()) as i64
            == 9 * m as i64 - 2 * word.weight() as i64 - 2 * c.sum() - 2 * e.sum();
        let local = (0..m as usize).all(|i| word.digits[i] as i64 + c.c[i] + e.c[i] <= 4);
        (
            Witness {
                a: a as u64,
                b: None,
                value: lhs as i64,
                carries: None,
            },
            [direct == lhs, identity, local],
        )
    };
    let fold = |mut acc: ScanAcc, a: i64| {
        let (wit, flags) = eval(a);
        for (f, ok) in acc.flags.iter_mut().zip(flags) {
            *f &= ok;
        }
        acc.record(m, wit);
        acc
    };
    let acc = match mode {
        ScanMode::Full => (0..n)
            .into_par_iter()
            .fold(|| ScanAcc::new(3), fold)
            .reduce(|| ScanAcc::new(3), ScanAcc::merge),
        ScanMode::Sampled { samples, seed } => sampled_blocks(samples, seed)
            .map(|(k, mut rng)| (0..k).map(|_| rng.gen_range(0..n)).fold(ScanAcc::new(3), fold))
            .reduce(|| ScanAcc::new(3), ScanAcc::merge),
    };
    Ok(acc.into_report("goal41", m, mode, &GOAL41_CHECKS))
}

fn check_two_variable_m(m: u32) -> Result<()> {
    check_m(m)?;
    if m % 2 == 0 || m % 3 == 0 {
        return Err(Error::Precondition(format!(
            "m={m} must be odd and not divisible by 3"
        )));
    }
    Ok(())
}

/// Scans `w(a) + w(b) + w((q-1)/2 - 7a - 5b) >= m` over `a, b ∈ [0, q-2]`.
pub fn verify_goal42(m: u32, mode: ScanMode) -> Result<GoalReport> {
    check_two_variable_m(m)?;
    let n = pow3(m) as i64 - 1;
    let half = n / 2;
    let wt = weight_table(m);
    let lhs = |a: i64, b: i64| -> u32 {
        wt[a as usize] as u32 + wt[b as usize] as u32 + wt[(half - 7 * a - 5 * b).rem_euclid(n) as usize] as u32
    };
    let wit = |a: i64, b: i64, v: u32| Witness {
        a: a as u64,
        b: Some(b as u64),
        value: v as i64,
        carries: None,
    };
    let acc = match mode {
        ScanMode::Full => (0..n)
            .into_par_iter()
            .fold(
                || ScanAcc::new(0),
                |mut acc, a| {
                    for b in 0..n {
                        let v = lhs(a, b);
                        // avoid building witnesses for the common case
                        if v <= acc.min || v < m {
                            acc.record(m, wit(a, b, v));
                        } else {
                            acc.instances += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(|| ScanAcc::new(0), ScanAcc::merge),
        ScanMode::Sampled { samples, seed } => sampled_blocks(samples, seed)
            .map(|(k, mut rng)| {
                let mut acc = ScanAcc::new(0);
                for _ in 0..k {
                    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    acc.record(m, wit(a, b, lhs(a, b)));
                }
                acc
            })
            .reduce(|| ScanAcc::new(0), ScanAcc::merge),
    };
    Ok(acc.into_report("goal42", m, mode, &[]))
}

/// One predicate on the two-variable carry sequence, with its violations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    pub name: String,
    pub statement: String,
    pub violations: u64,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryAuditReport {
    pub theorem: String,
    pub m: u32,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: u64,
    /// Smallest `w(a) + w(b) + w((q-1)/2 - 5a - 7b)` seen, i.e. `9m - 2 max Σc_i`.
    pub min: u32,
    pub max_carry_sum: i64,
    pub holds: bool,
    pub lemmas: Vec<LemmaOutcome>,
}

/// (name, statement) for every audited predicate, in report order.
pub const CARRY_PREDICATES: [(&str, &str); 10] = [
    ("carry_range", "0 <= c_i <= 6 for the nonnegative digit form"),
    ("raw_form_bounds", "l_- <= c_i <= l_+ - 1 for the signed form (l_+ = 3, l_- = -4)"),
    ("weight_identity", "w(a) + w(b) + w(s) = 9m - 2 sum c_i"),
    ("lemma_a1", "c_i <= 5 for every i"),
    ("lemma_a2", "c_i = 5 implies c_{i-1} <= 4 and c_{i+1} <= 4"),
    ("lemma_a3", "c_i = 5 and c_{i-1} = 4 imply c_{i-2} <= 4"),
    ("lemma_a4", "c_i = 5 and c_{i-1} = c_{i-2} = 4 imply c_{i-3} <= 4"),
    ("lemma_a5", "c_i = 5 and c_{i-1} = ... = c_{i-r} = 4 (r >= 1) imply c_{i-r-1} <= 4"),
    (
        "corollary_a1",
        "c_i = c_{i-t} = 5 with c_{i-1..i-t+1} <= 4 implies some c_{i-l} < 4, 1 <= l <= t-1",
    ),
    ("sum_bound", "sum c_i <= 4m"),
];

/// Evaluates every carry-sequence predicate except the form-dependent ones;
/// entries line up with `CARRY_PREDICATES[3..]`.
pub fn carry_lemma_predicates(c: &CarrySeq) -> [bool; 7] {
    let m = c.m() as i64;
    let at = |i: i64| c.at(i);
    let a1 = c.c.iter().all(|&x| x <= 5);
    let fives: Vec<i64> = (0..m).filter(|&i| at(i) == 5).collect();
    let a2 = fives.iter().all(|&i| at(i - 1) <= 4 && at(i + 1) <= 4);
    let a3 = fives.iter().all(|&i| !(at(i - 1) == 4) || at(i - 2) <= 4);
    let a4 = fives.iter().all(|&i| !(at(i - 1) == 4 && at(i - 2) == 4) || at(i - 3) <= 4);
    let a5 = fives.iter().all(|&i| {
        (1..m)
            .take_while(|&r| at(i - r) == 4)
            .all(|r| at(i - r - 1) <= 4)
    });
    let cor = fives.iter().all(|&i| {
        (1..=m).all(|t| {
            let premise = at(i - t) == 5 && (1..t).all(|l| at(i - l) <= 4);
            !premise || (1..t).any(|l| at(i - l) < 4)
        })
    });
    let sum = c.sum() <= 4 * m;
    [a1, a2, a3, a4, a5, cor, sum]
}

#[derive(Clone, Debug)]
struct AuditAcc {
    instances: u64,
    min: u32,
    max_sum: i64,
    violations: Vec<u64>,
    witnesses: Vec<Vec<Witness>>,
}

impl AuditAcc {
    fn new() -> Self {
        AuditAcc {
            instances: 0,
            min: u32::MAX,
            max_sum: i64::MIN,
            violations: vec![0; CARRY_PREDICATES.len()],
            witnesses: vec![Vec::new(); CARRY_PREDICATES.len()],
        }
    }

    fn visit(mut self, m: u32, a: u64, b: u64) -> Self {
        let wa = TernaryWord::from_value(a, m).expect("a < 3^m");
        let wb = TernaryWord::from_value(b, m).expect("b < 3^m");
        let (s, c) = carry_solve(m, &summands_two_variable(&wa, &wb)).expect("valid summands");
        let (_, raw) = carry_solve(m, &summands_two_variable_raw(&wa, &wb)).expect("valid summands");
        let lhs = wa.weight() + wb.weight() + s.weight();
        let mut results = vec![
            c.c.iter().all(|&x| (0..=6).contains(&x)) && c.within_bounds(),
            raw.within_bounds() && raw.l_plus == 3 && raw.l_minus == -4,
            lhs as i64 == 9 * m as i64 - 2 * c.sum(),
        ];
        results.extend(carry_lemma_predicates(&c));
        self.instances += 1;
        self.min = self.min.min(lhs);
        self.max_sum = self.max_sum.max(c.sum());
        for (k, ok) in results.into_iter().enumerate() {
            if !ok {
                self.violations[k] += 1;
                if self.witnesses[k].len() < MAX_WITNESSES {
                    self.witnesses[k].push(Witness {
                        a,
                        b: Some(b),
                        value: lhs as i64,
                        carries: Some(c.c.clone()),
                    });
                }
            }
        }
        self
    }

    fn merge(mut self, o: AuditAcc) -> Self {
        self.instances += o.instances;
        self.min = self.min.min(o.min);
        self.max_sum = self.max_sum.max(o.max_sum);
        for k in 0..self.violations.len() {
            self.violations[k] += o.violations[k];
            self.witnesses[k].extend(o.witnesses[k].iter().cloned());
            self.witnesses[k].sort_by_key(|w| (w.a, w.b));
            self.witnesses[k].truncate(MAX_WITNESSES);
        }
        self
    }
}

/// Builds the two-variable carry sequence for each `(a, b)` in scope and
/// checks every carry lemma on it.
///
/// The lemmas are statements about the digit combination alone, so only odd
/// m is required here (unlike [`verify_goal42`]).
pub fn carry_lemma_audit(m: u32, mode: ScanMode) -> Result<CarryAuditReport> {
    check_m(m)?;
    if m % 2 == 0 {
        return Err(Error::Precondition(format!("m={m} must be odd")));
    }
    let n = pow3(m) - 1;
    let acc = match mode {
        ScanMode::Full => (0..n)
            .into_par_iter()
            .fold(AuditAcc::new, |acc, a| (0..n).fold(acc, |acc, b| acc.visit(m, a, b)))
            .reduce(AuditAcc::new, AuditAcc::merge),
        ScanMode::Sampled { samples, seed } => sampled_blocks(samples, seed)
            .map(|(k, mut rng)| {
                (0..k).fold(AuditAcc::new(), |acc, _| {
                    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    acc.visit(m, a, b)
                })
            })
            .reduce(AuditAcc::new, AuditAcc::merge),
    };
    let lemmas: Vec<LemmaOutcome> = CARRY_PREDICATES
        .iter()
        .zip(acc.violations.iter().zip(acc.witnesses))
        .map(|((name, statement), (&violations, witnesses))| LemmaOutcome {
            name: name.to_string(),
            statement: statement.to_string(),
            violations,
            witnesses,
        })
        .collect();
    Ok(CarryAuditReport {
        theorem: "carry-bounds".into(),
        m,
        mode: mode.name().into(),
        seed: mode.seed(),
        instances: acc.instances,
        min: acc.min,
        max_carry_sum: acc.max_sum,
        holds: lemmas.iter().all(|l| l.violations == 0),
        lemmas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(weight(0, 5).unwrap(), 0);
        for m in 1..=9 {
            assert_eq!(weight((pow3(m) - 1) / 2, m).unwrap(), m);
        }
        assert_eq!(weight(pow3(5) - 2, 5).unwrap(), 9);
        assert_eq!(TernaryWord::from_value(pow3(5) - 2, 5).unwrap().digits(), &[1, 2, 2, 2, 2]);
        assert!(weight(pow3(5) - 1, 5).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(canonical_residue(pow3(5) as i64 - 1, 5), 0);
        assert_eq!(canonical_residue(-1, 5), 241);
        assert_eq!(canonical_residue(7 * 121, 5), 121);
    }

    #[test]
    fn rotation_is_multiplication_by_three() {
        let m = 6;
        let n = pow3(m) - 1;
        for v in (0..n).step_by(37) {
            let w = TernaryWord::from_value(v, m).unwrap();
            assert_eq!(w.rotate(1).value(), 3 * v % n);
            assert_eq!(w.rotate(2).value(), 9 * v % n);
            assert_eq!(w.complement().value() % n, (n - v) % n);
        }
    }

    #[test]
    fn single_summand_has_no_carries() {
        for a in [0u64, 1, 17, 241] {
            let w = TernaryWord::from_value(a, 5).unwrap();
            let (s, c) = carry_solve(5, &[Summand::new(1, w.clone())]).unwrap();
            assert_eq!(s, w);
            assert!(c.c.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn half_minus_seven_a_at_one() {
        let a = TernaryWord::from_value(1, 5).unwrap();
        let (s, c) = carry_solve(5, &summands_half_minus_7a(&a)).unwrap();
        assert_eq!(s.value(), 114);
        assert_eq!((c.l_plus, c.l_minus), (4, 0));
        assert!(c.c.iter().all(|&x| (0..=3).contains(&x)));
    }

    #[test]
    fn carry_solver_rejects_bad_input() {
        let w = TernaryWord::from_value(3, 5).unwrap();
        assert!(carry_solve(5, &[]).is_err());
        assert!(carry_solve(5, &[Summand::new(0, w.clone())]).is_err());
        assert!(carry_solve(4, &[Summand::new(1, w)]).is_err());
    }

    #[test]
    fn all_zero_inputs_for_two_variable_form() {
        let z = TernaryWord::from_value(0, 5).unwrap();
        let (s, c) = carry_solve(5, &summands_two_variable(&z, &z)).unwrap();
        assert_eq!(s.value(), 121);
        assert!(c.sum() <= 20);
        assert!(c.c.iter().all(|&x| x <= 5));
    }

    #[test]
    fn lemma_predicates_flag_crafted_sequences() {
        let seq = |c: Vec<i64>| CarrySeq {
            c,
            l_plus: 7,
            l_minus: 0,
            nonzero_summand: true,
        };
        assert_eq!(carry_lemma_predicates(&seq(vec![4, 4, 4, 4, 4])), [true; 7]);
        let r = carry_lemma_predicates(&seq(vec![6, 0, 0, 0, 0]));
        assert!(!r[0]);
        let r = carry_lemma_predicates(&seq(vec![5, 5, 0, 0, 0]));
        assert!(!r[1] && !r[5]);
        let r = carry_lemma_predicates(&seq(vec![5, 4, 5, 0, 0, 0, 0]));
        assert!(!r[2] && !r[4] && !r[5]);
        let r = carry_lemma_predicates(&seq(vec![5, 4, 4, 5, 0, 0, 0]));
        assert!(!r[3] && !r[4] && !r[5]);
        let r = carry_lemma_predicates(&seq(vec![5, 4, 4, 4, 5, 0, 0]));
        assert!(r[3] && !r[4] && !r[5]);
        assert!(!carry_lemma_predicates(&seq(vec![5, 4, 4, 4, 4]))[6]);
    }

    #[test]
    fn goal_preconditions() {
        assert!(matches!(verify_goal41(4, ScanMode::Full), Err(Error::Precondition(_))));
        assert!(matches!(verify_goal42(3, ScanMode::Full), Err(Error::Precondition(_))));
        assert!(matches!(carry_lemma_audit(6, ScanMode::Full), Err(Error::Precondition(_))));
        assert!(carry_lemma_audit(3, ScanMode::Full).unwrap().holds);
    }

    #[test]
    fn goal41_small() {
        let r = verify_goal41(5, ScanMode::Full).unwrap();
        assert_eq!(r.instances, 242);
        assert!(r.holds);
        assert!(r.min >= 5);
        assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
    }

    #[test]
    fn goal42_matches_naive_scan() {
        let m = 5;
        let n = pow3(m) as i64 - 1;
        let mut min = u32::MAX;
        for a in 0..n {
            for b in 0..n {
                let r = canonical_residue(n / 2 - 7 * a - 5 * b, m);
                min = min.min(digit_sum(a as u64) + digit_sum(b as u64) + weight(r, m).unwrap());
            }
        }
        let r = verify_goal42(m, ScanMode::Full).unwrap();
        assert_eq!(r.min, min);
        assert!(r.witnesses.iter().all(|w| {
            let b = w.b.unwrap() as i64;
            let res = canonical_residue(n / 2 - 7 * w.a as i64 - 5 * b, m);
            digit_sum(w.a) + digit_sum(b as u64) + digit_sum(res) == min
        }));
    }

    #[test]
    fn sampled_scans_are_reproducible() {
        let a = carry_lemma_audit(7, ScanMode::sampled(3000)).unwrap();
        let b = carry_lemma_audit(7, ScanMode::sampled(3000)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.instances, 3000);
        assert_eq!(a.seed, Some(DEFAULT_SEED));
    }
}
