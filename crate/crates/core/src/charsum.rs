//! Exact additive character sums in the Eisenstein integers, the congruences
//! they satisfy on the image sets, and a floating-point Gauss sum layer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dickson::{dickson_eval, DicksonSpec};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};
use crate::sets::ElementSet;

/// `a0 + a1·ω` with `ω² = -1 - ω`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Eisenstein {
    pub a0: i64,
    pub a1: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a0: 0, a1: 0 };
    pub const ONE: Eisenstein = Eisenstein { a0: 1, a1: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { a0: 0, a1: 1 };

    pub const fn new(a0: i64, a1: i64) -> Self {
        Eisenstein { a0, a1 }
    }

    pub const fn from_int(n: i64) -> Self {
        Eisenstein { a0: n, a1: 0 }
    }

    /// `ω^t` for `t ∈ {0, 1, 2}`.
    pub fn omega_pow(t: u8) -> Self {
        match t % 3 {
            0 => Self::ONE,
            1 => Self::OMEGA,
            _ => Eisenstein::new(-1, -1),
        }
    }

    /// Sum of `ω^t` weighted by the tally `counts[t]`.
    pub fn from_tally(counts: [i64; 3]) -> Self {
        Eisenstein::new(counts[0] - counts[2], counts[1] - counts[2])
    }

    /// Image under `ω ↦ ω²`.
    pub fn conj(self) -> Self {
        Eisenstein::new(self.a0 - self.a1, -self.a1)
    }

    pub fn norm(self) -> i64 {
        self.a0 * self.a0 - self.a0 * self.a1 + self.a1 * self.a1
    }

    /// Both coordinates divisible by the rational integer `n`.
    pub fn divisible_by(self, n: i64) -> bool {
        self.a0 % n == 0 && self.a1 % n == 0
    }

    pub fn to_complex(self) -> Complex64 {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        Complex64::new(self.a0 as f64, 0.0) + w * self.a1 as f64
    }
}

impl Add for Eisenstein {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Eisenstein::new(self.a0 + o.a0, self.a1 + o.a1)
    }
}

impl Sub for Eisenstein {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Eisenstein::new(self.a0 - o.a0, self.a1 - o.a1)
    }
}

impl Neg for Eisenstein {
    type Output = Self;
    fn neg(self) -> Self {
        Eisenstein::new(-self.a0, -self.a1)
    }
}

impl Mul for Eisenstein {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Eisenstein::new(
            self.a0 * o.a0 - self.a1 * o.a1,
            self.a0 * o.a1 + self.a1 * o.a0 - self.a1 * o.a1,
        )
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}ω", self.a0, self.a1)
    }
}

/// Additive character `x ↦ ξ₃^{tr(βx)}` and multiplicative character
/// `g^j ↦ e^{2πi jk/(q-1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterIndex {
    pub beta: Felt,
    pub k: u32,
}

impl CharacterIndex {
    pub fn is_additive_trivial(&self) -> bool {
        self.beta.is_zero()
    }

    pub fn is_multiplicative_trivial(&self, ctx: &FieldCtx) -> bool {
        self.k % (ctx.q() - 1) == 0
    }

    /// The quadratic character as a multiplicative index.
    pub fn quadratic(ctx: &FieldCtx) -> Self {
        CharacterIndex {
            beta: Felt::ONE,
            k: (ctx.q() - 1) / 2,
        }
    }
}

/// `Σ_{d ∈ D} ξ₃^{tr(βd)}`, exact.
pub fn additive_char_sum(ctx: &FieldCtx, d: &ElementSet, beta: Felt) -> Eisenstein {
    let mut tally = [0i64; 3];
    for x in d.iter() {
        tally[ctx.trace(ctx.mul(beta, x)) as usize] += 1;
    }
    Eisenstein::from_tally(tally)
}

/// `ψ_β(D)` for every `β`, indexed by element.
pub fn all_char_sums(ctx: &FieldCtx, d: &ElementSet) -> Vec<Eisenstein> {
    let elems = d.to_vec();
    (0..ctx.q())
        .into_par_iter()
        .map(|b| {
            let mut tally = [0i64; 3];
            for &x in &elems {
                tally[ctx.trace(ctx.mul(Felt(b), x)) as usize] += 1;
            }
            Eisenstein::from_tally(tally)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaWitness {
    pub beta: Felt,
    pub value: Eisenstein,
}

/// Outcome of a check over every nonzero `β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharsumReport {
    pub check: String,
    pub m: u32,
    pub subject: String,
    pub all_pass: bool,
    pub checked: u32,
    /// Failing `β` values (capped).
    pub witnesses: Vec<BetaWitness>,
}

const MAX_WITNESSES: usize = 16;

fn collect_report(
    ctx: &FieldCtx,
    check: &str,
    subject: &str,
    values: &[Eisenstein],
    ok: impl Fn(Eisenstein) -> bool,
) -> CharsumReport {
    let failures: Vec<BetaWitness> = ctx
        .nonzero()
        .filter(|b| !ok(values[b.0 as usize]))
        .map(|beta| BetaWitness {
            beta,
            value: values[beta.0 as usize],
        })
        .collect();
    CharsumReport {
        check: check.into(),
        m: ctx.m(),
        subject: subject.into(),
        all_pass: failures.is_empty(),
        checked: ctx.q() - 1,
        witnesses: failures.into_iter().take(MAX_WITNESSES).collect(),
    }
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if ctx.m() % 2 == 0 {
        return Err(Error::Precondition(format!("m={} must be odd", ctx.m())));
    }
    Ok(())
}

/// `3^{(m-1)/2}` for odd m.
pub fn half_power(ctx: &FieldCtx) -> i64 {
    3i64.pow((ctx.m() - 1) / 2)
}

/// `ψ_β(D) · conj(ψ_β(D)) = (q+1)/4` for every `β ≠ 0`.
pub fn norm_check(ctx: &FieldCtx, d: &ElementSet, subject: &str) -> Result<CharsumReport> {
    d.check_ctx(ctx)?;
    let target = (ctx.q() as i64 + 1) / 4;
    let sums = all_char_sums(ctx, d);
    Ok(collect_report(ctx, "norm", subject, &sums, |z| {
        (ctx.q() as i64 + 1) % 4 == 0 && z.norm() == target
    }))
}

/// `ψ_β(D) ≡ (3^{(m-1)/2} - 1)/2 (mod 3^{(m-1)/2})` for every `β ≠ 0`.
pub fn lemma_sim_congruence(ctx: &FieldCtx, d: &ElementSet, subject: &str) -> Result<CharsumReport> {
    require_odd(ctx)?;
    d.check_ctx(ctx)?;
    let p = half_power(ctx);
    let shift = Eisenstein::from_int((p - 1) / 2);
    let sums = all_char_sums(ctx, d);
    Ok(collect_report(ctx, "lemma3", subject, &sums, |z| (z - shift).divisible_by(p)))
}

/// `S_β = Σ_{x≠0} ψ_β(D_7(x,u)) χ(x)` for every `β`, indexed by element.
pub fn s_beta_values(ctx: &FieldCtx, u: Felt) -> Vec<Eisenstein> {
    let spec = DicksonSpec { n: 7, u };
    let pts: Vec<(Felt, i64)> = ctx
        .nonzero()
        .map(|x| (dickson_eval(ctx, spec, x), ctx.quadratic_character(x) as i64))
        .collect();
    (0..ctx.q())
        .into_par_iter()
        .map(|b| {
            let mut tally = [0i64; 3];
            for &(y, chi) in &pts {
                tally[ctx.trace(ctx.mul(Felt(b), y)) as usize] += chi;
            }
            Eisenstein::from_tally(tally)
        })
        .collect()
}

/// `S_β ≡ 0 (mod 3^{(m-1)/2})` for every `β ≠ 0`.
pub fn s_beta_congruence(ctx: &FieldCtx, u: Felt) -> Result<CharsumReport> {
    require_odd(ctx)?;
    if ctx.m() % 3 == 0 {
        return Err(Error::Precondition(format!(
            "m={} is divisible by 3, so D_7(x, u) does not permute GF(q)",
            ctx.m()
        )));
    }
    if u.is_zero() {
        return Err(Error::Precondition("u must be nonzero".into()));
    }
    let p = half_power(ctx);
    let vals = s_beta_values(ctx, u);
    Ok(collect_report(ctx, "eq4", &format!("u={u}"), &vals, |z| z.divisible_by(p)))
}

fn unit(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}

/// `g(χ_k) = Σ_{x≠0} χ_k(x) ψ(x)` with `χ_k(g^j) = e^{2πi jk/(q-1)}`.
pub fn gauss_sum_numeric(ctx: &FieldCtx, k: i64) -> Complex64 {
    let n = ctx.q() as i64 - 1;
    let k = k.rem_euclid(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let x = ctx.exp(j);
        let chi = unit(((j * k) % n) as f64 / n as f64);
        acc += chi * unit(ctx.trace(x) as f64 / 3.0);
    }
    acc
}

/// Largest `| (1/(q-1)) Σ_χ g(χ) χ̄(x) - ψ(x) |` over sampled nonzero `x`
/// (all of them when `samples >= q - 1`).
pub fn fourier_inversion_check(ctx: &FieldCtx, samples: usize, seed: u64) -> Result<f64> {
    if ctx.m() > 5 {
        return Err(Error::Precondition(format!(
            "m={} is too large: the expansion has q-1 terms per point",
            ctx.m()
        )));
    }
    let n = ctx.q() as i64 - 1;
    let gauss: Vec<Complex64> = (0..n).map(|k| gauss_sum_numeric(ctx, k)).collect();
    let logs: Vec<i64> = if samples as i64 >= n {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| rng.gen_range(0..n)).collect()
    };
    Ok(logs
        .into_iter()
        .map(|j| {
            let x = ctx.exp(j);
            let recon: Complex64 = gauss
                .iter()
                .enumerate()
                .map(|(k, g)| g * unit(-(((j * k as i64) % n) as f64) / n as f64))
                .sum::<Complex64>()
                / n as f64;
            (recon - unit(ctx.trace(x) as f64 / 3.0)).norm()
        })
        .fold(0.0, f64::max))
}
