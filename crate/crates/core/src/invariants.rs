//! Triple intersection numbers `T{a,b} = |D ∩ (D+a) ∩ (D+b)|`, their
//! distributions and extremes, and the scaling relation between the `D_u`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dickson::{dickson_eval, DicksonSpec};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};
use crate::sets::{and_popcount, build_image_set, words_for, ElementSet};

/// Which pairs `(a, b)` of nonzero elements are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairConvention {
    /// `{a, b}` with `a ≠ b`, each unordered pair once.
    UnorderedDistinct,
    /// `(a, b)` with `a ≠ b`, so every unordered pair twice.
    OrderedDistinct,
}

impl PairConvention {
    /// Convention whose multiplicities match the published m=5 Paley row.
    pub const CALIBRATED: PairConvention = PairConvention::UnorderedDistinct;

    pub fn name(&self) -> &'static str {
        match self {
            PairConvention::UnorderedDistinct => "unordered_distinct",
            PairConvention::OrderedDistinct => "ordered_distinct",
        }
    }

    /// Number of admissible pairs in a group of order `q`.
    pub fn pair_count(&self, q: u32) -> u64 {
        let n = q as u64 - 1;
        match self {
            PairConvention::UnorderedDistinct => n * (n - 1) / 2,
            PairConvention::OrderedDistinct => n * (n - 1),
        }
    }

    fn weight(&self) -> u64 {
        match self {
            PairConvention::UnorderedDistinct => 1,
            PairConvention::OrderedDistinct => 2,
        }
    }
}

impl Default for PairConvention {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

impl fmt::Display for PairConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unordered_distinct" | "unordered" => Ok(PairConvention::UnorderedDistinct),
            "ordered_distinct" | "ordered" => Ok(PairConvention::OrderedDistinct),
            _ => Err(Error::parse("pair convention", s, "expected unordered_distinct or ordered_distinct")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDist {
    pub family_label: String,
    pub m: u32,
    pub modulus: Vec<u8>,
    pub pair_convention: PairConvention,
    /// `(value, multiplicity)` sorted by value, zero multiplicities omitted.
    pub entries: Vec<(u32, u64)>,
}

impl TripleDist {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn weighted_sum(&self) -> u64 {
        self.entries.iter().map(|&(v, c)| v as u64 * c).sum()
    }

    pub fn multiplicity(&self, value: u32) -> u64 {
        self.entries
            .iter()
            .find(|&&(v, _)| v == value)
            .map_or(0, |&(_, c)| c)
    }

    pub fn minmax(&self) -> Option<(u32, u32)> {
        Some((self.entries.first()?.0, self.entries.last()?.0))
    }

    /// `value,multiplicity` rows under `#`-prefixed metadata lines.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# family={}\n# m={}\n# modulus={:?}\n# convention={}\n# tool_version={}\nvalue,multiplicity\n",
            self.family_label,
            self.m,
            self.modulus,
            self.pair_convention,
            crate::TOOL_VERSION
        );
        for (v, c) in &self.entries {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }

    /// Compact `v^c` rendering, e.g. `26^1815 27^3630`.
    pub fn compact(&self) -> String {
        self.entries
            .iter()
            .map(|(v, c)| format!("{v}^{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinMax {
    pub family_label: String,
    pub m: u32,
    pub pair_convention: PairConvention,
    pub min: u32,
    pub max: u32,
}

/// Translates `D + g` for every `g`, flattened row-major.
fn translate_table(ctx: &FieldCtx, d: &ElementSet) -> Vec<u64> {
    let words = words_for(ctx.q());
    let mut table = vec![0u64; words * ctx.q() as usize];
    table
        .par_chunks_mut(words)
        .enumerate()
        .for_each(|(g, row)| d.translate_into(ctx, Felt(g as u32), row));
    table
}

/// Calls `visit(T{a,b})` for every unordered pair of distinct nonzero `a < b`,
/// folding per-`a` partial results with `fold`/`merge`.
fn scan_pairs<A, F, M>(ctx: &FieldCtx, d: &ElementSet, init: impl Fn() -> A + Sync + Send, visit: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, u32) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let words = words_for(ctx.q());
    let table = translate_table(ctx, d);
    let row = |g: u32| &table[g as usize * words..(g as usize + 1) * words];
    let q = ctx.q();
    (1..q)
        .into_par_iter()
        .fold(
            || (init(), vec![0u64; words]),
            |(mut acc, mut da), a| {
                for (w, (x, y)) in da.iter_mut().zip(d.bits().iter().zip(row(a))) {
                    *w = x & y;
                }
                for b in a + 1..q {
                    visit(&mut acc, and_popcount(&da, row(b)));
                }
                (acc, da)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(&init, &merge)
}

pub fn triple_distribution(ctx: &FieldCtx, d: &ElementSet, convention: PairConvention, label: &str) -> Result<TripleDist> {
    d.check_ctx(ctx)?;
    let k = d.len();
    let hist = scan_pairs(
        ctx,
        d,
        || vec![0u64; k + 1],
        |h, t| h[t as usize] += 1,
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    let w = convention.weight();
    let entries: Vec<(u32, u64)> = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(v, c)| (v as u32, c * w))
        .collect();
    let dist = TripleDist {
        family_label: label.into(),
        m: ctx.m(),
        modulus: ctx.modulus().to_vec(),
        pair_convention: convention,
        entries,
    };
    assert_eq!(dist.total(), convention.pair_count(ctx.q()), "every admissible pair is counted once");
    Ok(dist)
}

/// Extremes of `T{a,b}`; identical under both conventions.
pub fn minmax_triple(ctx: &FieldCtx, d: &ElementSet, convention: PairConvention, label: &str) -> Result<MinMax> {
    d.check_ctx(ctx)?;
    if ctx.q() < 3 {
        return Err(Error::Precondition("need at least two distinct nonzero elements".into()));
    }
    let (min, max) = scan_pairs(
        ctx,
        d,
        || (u32::MAX, 0u32),
        |acc, t| *acc = (acc.0.min(t), acc.1.max(t)),
        |a, b| (a.0.min(b.0), a.1.max(b.1)),
    );
    Ok(MinMax {
        family_label: label.into(),
        m: ctx.m(),
        pair_convention: convention,
        min,
        max,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub labels: Vec<String>,
    /// `equal[i][j]` when inputs i and j have the same invariant.
    pub equal: Vec<Vec<bool>>,
    pub pairwise_distinct: bool,
}

impl Comparison {
    fn build<T: PartialEq>(labels: Vec<String>, keys: &[T]) -> Self {
        let equal: Vec<Vec<bool>> = keys.iter().map(|x| keys.iter().map(|y| x == y).collect()).collect();
        let pairwise_distinct = (0..keys.len()).all(|i| (0..keys.len()).all(|j| i == j || !equal[i][j]));
        Comparison {
            labels,
            equal,
            pairwise_distinct,
        }
    }

    pub fn summary(&self) -> &'static str {
        if self.pairwise_distinct {
            "pairwise distinct"
        } else {
            "not pairwise distinct"
        }
    }
}

fn check_compatible(items: impl Iterator<Item = (u32, PairConvention)>) -> Result<()> {
    let items: Vec<_> = items.collect();
    if let Some(&first) = items.first() {
        if let Some(bad) = items.iter().find(|&&x| x != first) {
            return Err(Error::Precondition(format!(
                "cannot compare m={} {} with m={} {}",
                first.0, first.1, bad.0, bad.1
            )));
        }
    }
    Ok(())
}

pub fn compare_families(dists: &[TripleDist]) -> Result<Comparison> {
    check_compatible(dists.iter().map(|d| (d.m, d.pair_convention)))?;
    let keys: Vec<&Vec<(u32, u64)>> = dists.iter().map(|d| &d.entries).collect();
    Ok(Comparison::build(dists.iter().map(|d| d.family_label.clone()).collect(), &keys))
}

pub fn compare_minmax(items: &[MinMax]) -> Result<Comparison> {
    check_compatible(items.iter().map(|d| (d.m, d.pair_convention)))?;
    let keys: Vec<(u32, u32)> = items.iter().map(|d| (d.min, d.max)).collect();
    Ok(Comparison::build(items.iter().map(|d| d.family_label.clone()).collect(), &keys))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingClass {
    EquivalentToD1,
    EquivalentToDminus1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub u: Felt,
    pub class: ScalingClass,
    /// `u = b^2` (class D_1) or `u = -b^2` (class D_{-1}).
    pub b: Felt,
    pub b_is_square: bool,
    /// `D_u = χ(b) · b^7 · D_{±1}` held elementwise.
    pub verified: bool,
}

/// Writes `u = ±b^2` and checks `D_u = χ(b) b^7 D_{±1}` elementwise, using
/// `b^7 D_7(x, v) = D_7(bx, v b^2)`.
pub fn scaling_orbit_check(ctx: &FieldCtx, u: Felt) -> Result<ScalingReport> {
    let m = ctx.m();
    if u.is_zero() {
        return Err(Error::Precondition("u must be nonzero".into()));
    }
    if m % 2 == 0 || m % 3 == 0 {
        return Err(Error::Precondition(format!("m={m} must be odd and not divisible by 3")));
    }
    let (class, base, b) = match ctx.sqrt(u) {
        Some(b) => (ScalingClass::EquivalentToD1, Felt::ONE, b),
        None => {
            let b = ctx.sqrt(ctx.neg(u)).expect("-1 is a nonsquare for odd m");
            (ScalingClass::EquivalentToDminus1, ctx.from_int(-1), b)
        }
    };
    let image = |v: Felt| build_image_set(ctx, |x| dickson_eval(ctx, DicksonSpec { n: 7, u: v }, x), true);
    let b_is_square = ctx.is_square(b);
    let b7 = ctx.pow(b, 7)?;
    let scale = if b_is_square { b7 } else { ctx.neg(b7) };
    let verified = image(u) == image(base).affine_image(ctx, scale, Felt::ZERO);
    Ok(ScalingReport {
        u,
        class,
        b,
        b_is_square,
        verified,
    })
}

/// On-disk distribution cache keyed by a hash of the set contents and convention.
#[derive(Clone, Debug)]
pub struct DistCache {
    dir: PathBuf,
}

pub const CACHE_ENV: &str = "SHDS_CACHE_DIR";

impl DistCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DistCache { dir: dir.into() }
    }

    /// Cache rooted at `$SHDS_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(d: &ElementSet, convention: PairConvention) -> String {
        let mut h = Sha256::new();
        h.update(b"triple-dist\0");
        h.update(d.to_file().to_json().as_bytes());
        h.update(convention.name().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Cached distribution relabeled as `label`, if present and readable.
    pub fn get(&self, d: &ElementSet, convention: PairConvention, label: &str) -> Option<TripleDist> {
        let text = std::fs::read_to_string(self.path(&Self::key(d, convention))).ok()?;
        let mut dist: TripleDist = serde_json::from_str(&text).ok()?;
        (dist.m == d.m() && dist.modulus == d.modulus() && dist.pair_convention == convention).then(|| {
            dist.family_label = label.into();
            dist
        })
    }

    pub fn put(&self, d: &ElementSet, dist: &TripleDist) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(&Self::key(d, dist.pair_convention));
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string(dist)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn get_or_compute(&self, ctx: &FieldCtx, d: &ElementSet, convention: PairConvention, label: &str) -> Result<TripleDist> {
        if let Some(hit) = self.get(d, convention, label) {
            return Ok(hit);
        }
        let dist = triple_distribution(ctx, d, convention, label)?;
        self.put(d, &dist)?;
        Ok(dist)
    }
}
