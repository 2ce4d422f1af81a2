//! Bit-packed subsets of GF(3^m) and exact difference-set verification.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field, Felt, FieldCtx};

/// Membership bit vector over the `q` elements of one particular field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    m: u32,
    modulus: Vec<u8>,
    q: u32,
    bits: Vec<u64>,
    len: usize,
}

#[inline]
pub(crate) fn words_for(q: u32) -> usize {
    (q as usize).div_ceil(64)
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

impl ElementSet {
    pub fn empty(ctx: &FieldCtx) -> Self {
        ElementSet {
            m: ctx.m(),
            modulus: ctx.modulus().to_vec(),
            q: ctx.q(),
            bits: vec![0; words_for(ctx.q())],
            len: 0,
        }
    }

    pub fn from_elements(ctx: &FieldCtx, elements: impl IntoIterator<Item = Felt>) -> Result<Self> {
        let mut s = Self::empty(ctx);
        for e in elements {
            ctx.check(e)?;
            s.insert(e);
        }
        Ok(s)
    }

    /// Inserts `e`; returns whether it was newly added.
    pub fn insert(&mut self, e: Felt) -> bool {
        let (w, b) = (e.0 as usize / 64, e.0 % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn contains(&self, e: Felt) -> bool {
        e.0 < self.q && self.bits[e.0 as usize / 64] & (1 << (e.0 % 64)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    /// Elements in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = Felt> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                (word != 0).then(|| {
                    let b = word.trailing_zeros();
                    word &= word - 1;
                    Felt(w as u32 * 64 + b)
                })
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Felt> {
        self.iter().collect()
    }

    /// Errors unless this set was built over `ctx`'s modulus.
    pub fn check_ctx(&self, ctx: &FieldCtx) -> Result<()> {
        if self.m != ctx.m() || self.modulus != ctx.modulus() {
            return Err(Error::FieldMismatch {
                set_m: self.m,
                set_modulus: self.modulus.clone(),
                ctx_m: ctx.m(),
                ctx_modulus: ctx.modulus().to_vec(),
            });
        }
        Ok(())
    }

    /// Applies an affine map `x ↦ s x + t` elementwise.
    pub fn affine_image(&self, ctx: &FieldCtx, s: Felt, t: Felt) -> ElementSet {
        let mut out = ElementSet::empty(ctx);
        for e in self.iter() {
            out.insert(ctx.add(ctx.mul(s, e), t));
        }
        out
    }

    pub fn translate(&self, ctx: &FieldCtx, t: Felt) -> ElementSet {
        let mut out = ElementSet::empty(ctx);
        self.translate_into(ctx, t, &mut out.bits);
        out.len = self.len;
        out
    }

    /// Writes the bits of `self + t` into `buf`, which must be `bits().len()` words.
    pub fn translate_into(&self, ctx: &FieldCtx, t: Felt, buf: &mut [u64]) {
        buf.fill(0);
        for e in self.iter() {
            let x = ctx.add(e, t).0 as usize;
            buf[x / 64] |= 1 << (x % 64);
        }
    }

    pub fn negate(&self, ctx: &FieldCtx) -> ElementSet {
        self.affine_image(ctx, ctx.from_int(-1), Felt::ZERO)
    }

    pub fn intersection_len(&self, other: &ElementSet) -> usize {
        and_popcount(&self.bits, &other.bits) as usize
    }

    pub fn to_file(&self) -> SetFile {
        SetFile {
            m: self.m,
            modulus: self.modulus.clone(),
            elements: self.iter().map(|e| e.0).collect(),
        }
    }
}

/// On-disk set: `{"m":…,"modulus":[…],"elements":[sorted indices]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFile {
    pub m: u32,
    pub modulus: Vec<u8>,
    pub elements: Vec<u32>,
}

impl SetFile {
    /// Canonical compact JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("set file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Rebuilds the field the file was pinned to.
    pub fn field(&self) -> Result<FieldCtx> {
        make_field(self.m, Some(&self.modulus))
    }

    pub fn to_set(&self, ctx: &FieldCtx) -> Result<ElementSet> {
        if self.m != ctx.m() || self.modulus != ctx.modulus() {
            return Err(Error::FieldMismatch {
                set_m: self.m,
                set_modulus: self.modulus.clone(),
                ctx_m: ctx.m(),
                ctx_modulus: ctx.modulus().to_vec(),
            });
        }
        ElementSet::from_elements(ctx, self.elements.iter().map(|&e| Felt(e)))
    }
}

/// `{f(x^2) : x ≠ 0}` when `squares_only`, else `{f(x) : x ≠ 0}`.
pub fn build_image_set(ctx: &FieldCtx, f: impl Fn(Felt) -> Felt, squares_only: bool) -> ElementSet {
    let mut out = ElementSet::empty(ctx);
    for x in ctx.nonzero() {
        let arg = if squares_only { ctx.mul(x, x) } else { x };
        out.insert(f(arg));
    }
    out
}

/// Nonzero squares of GF(q).
pub fn paley_set(ctx: &FieldCtx) -> ElementSet {
    build_image_set(ctx, |x| x, true)
}

/// `0 ∉ D`, `D ∩ -D = ∅` and `|D| = (q-1)/2`.
pub fn is_skew(ctx: &FieldCtx, d: &ElementSet) -> bool {
    if d.contains(Felt::ZERO) || d.len() as u32 != (ctx.q() - 1) / 2 {
        return false;
    }
    d.iter().all(|e| !d.contains(ctx.neg(e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSummary {
    pub min: u32,
    pub max: u32,
    pub uniform: bool,
}

impl CountSummary {
    fn of(values: impl Iterator<Item = u32>) -> Option<Self> {
        let mut it = values.peekable();
        it.peek()?;
        let (min, max) = it.fold((u32::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Some(CountSummary { min, max, uniform: min == max })
    }
}

/// Summary of `N(g) = |D ∩ (D + g)|` over nonzero `g`, overall and split by
/// membership of `g` in `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSpectrum {
    pub all: CountSummary,
    pub in_set: Option<CountSummary>,
    pub outside_set: Option<CountSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    DifferenceSet { lambda: u32 },
    PartialDifferenceSet { lambda: u32, mu: u32 },
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsReport {
    pub v: u32,
    pub k: u32,
    pub lambda_spectrum: LambdaSpectrum,
    pub verdict: Verdict,
    pub skew: bool,
}

impl DsReport {
    pub fn is_difference_set(&self) -> bool {
        matches!(self.verdict, Verdict::DifferenceSet { .. })
    }

    pub fn is_partial_difference_set(&self) -> bool {
        matches!(self.verdict, Verdict::PartialDifferenceSet { .. })
    }

    /// `(v, k, λ)` for a difference set.
    pub fn ds_parameters(&self) -> Option<(u32, u32, u32)> {
        match self.verdict {
            Verdict::DifferenceSet { lambda } => Some((self.v, self.k, lambda)),
            _ => None,
        }
    }

    /// `(v, k, λ, μ)` for a partial difference set.
    pub fn pds_parameters(&self) -> Option<(u32, u32, u32, u32)> {
        match self.verdict {
            Verdict::PartialDifferenceSet { lambda, mu } => Some((self.v, self.k, lambda, mu)),
            _ => None,
        }
    }
}

/// `N(g)` for every element, with `N(0)` reported as 0.
pub fn difference_counts(ctx: &FieldCtx, d: &ElementSet) -> Vec<u32> {
    let words = words_for(ctx.q());
    let mut counts: Vec<u32> = (1..ctx.q())
        .into_par_iter()
        .map_init(
            || vec![0u64; words],
            |buf, g| {
                d.translate_into(ctx, Felt(g), buf);
                and_popcount(d.bits(), buf)
            },
        )
        .collect();
    counts.insert(0, 0);
    counts
}

pub fn difference_report(ctx: &FieldCtx, d: &ElementSet) -> Result<DsReport> {
    d.check_ctx(ctx)?;
    if d.is_empty() {
        return Err(Error::Precondition("difference_report needs a nonempty set".into()));
    }
    let counts = difference_counts(ctx, d);
    let k = d.len() as u64;
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    assert_eq!(total, k * (k - 1), "every ordered pair of distinct elements has one nonzero difference");

    let nonzero = || (1..ctx.q()).map(Felt);
    let all = CountSummary::of(nonzero().map(|g| counts[g.0 as usize])).expect("q > 1");
    let in_set = CountSummary::of(nonzero().filter(|&g| d.contains(g)).map(|g| counts[g.0 as usize]));
    let outside_set = CountSummary::of(nonzero().filter(|&g| !d.contains(g)).map(|g| counts[g.0 as usize]));

    let verdict = if all.uniform {
        Verdict::DifferenceSet { lambda: all.min }
    } else {
        match (in_set, outside_set) {
            (Some(a), Some(b)) if a.uniform && b.uniform => Verdict::PartialDifferenceSet {
                lambda: a.min,
                mu: b.min,
            },
            _ => Verdict::Neither,
        }
    };
    Ok(DsReport {
        v: ctx.q(),
        k: d.len() as u32,
        lambda_spectrum: LambdaSpectrum {
            all,
            in_set,
            outside_set,
        },
        verdict,
        skew: is_skew(ctx, d),
    })
}
