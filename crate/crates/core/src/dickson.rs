//! Dickson polynomials of the first kind, the permutation criterion, and
//! the planarity test on value tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// `D_n(x, u)` with order `n >= 1` and parameter `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicksonSpec {
    pub n: u32,
    pub u: Felt,
}

impl DicksonSpec {
    pub fn new(n: u32, u: Felt) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("Dickson order must be at least 1".into()));
        }
        Ok(DicksonSpec { n, u })
    }
}

/// Evaluates `D_n(x, u)` through `D_k = x D_{k-1} - u D_{k-2}`, `D_0 = 2`, `D_1 = x`.
pub fn dickson_eval(ctx: &FieldCtx, spec: DicksonSpec, x: Felt) -> Felt {
    let two = ctx.from_int(2);
    if spec.n == 0 {
        return two;
    }
    let mut prev = two;
    let mut cur = x;
    for _ in 1..spec.n {
        let next = ctx.sub(ctx.mul(x, cur), ctx.mul(spec.u, prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// Full value table `x ↦ D_n(x, u)` indexed by element.
pub fn value_table(ctx: &FieldCtx, spec: DicksonSpec) -> Vec<Felt> {
    ctx.elements().map(|x| dickson_eval(ctx, spec, x)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationMethod {
    /// `gcd(n, q^2 - 1) = 1` for `u ≠ 0`.
    Criterion,
    /// Evaluate everywhere and test bijectivity.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationVerdict {
    pub is_permutation: bool,
    pub method: PermutationMethod,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decides whether `D_n(·, u)` permutes GF(q). The criterion path does not
/// apply at `u = 0`; there the answer comes from evaluating `x^n`.
pub fn is_permutation(ctx: &FieldCtx, spec: DicksonSpec, method: PermutationMethod) -> PermutationVerdict {
    let q = ctx.q() as u64;
    match method {
        PermutationMethod::Criterion if !spec.u.is_zero() => PermutationVerdict {
            is_permutation: gcd(spec.n as u64, q * q - 1) == 1,
            method: PermutationMethod::Criterion,
        },
        _ => PermutationVerdict {
            is_permutation: is_bijection(&value_table(ctx, spec)),
            method: PermutationMethod::Exhaustive,
        },
    }
}

/// True iff `table` hits every index in `0..table.len()` exactly once.
pub fn is_bijection(table: &[Felt]) -> bool {
    let mut seen = vec![false; table.len()];
    for &y in table {
        match seen.get_mut(y.0 as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// True iff `x ↦ f(x + a) - f(x)` is a bijection for every `a ≠ 0`.
pub fn is_planar(ctx: &FieldCtx, table: &[Felt]) -> Result<bool> {
    if table.len() != ctx.q() as usize {
        return Err(Error::Precondition(format!(
            "value table has {} entries, field has {}",
            table.len(),
            ctx.q()
        )));
    }
    Ok((1..ctx.q()).into_par_iter().all(|a| {
        let a = Felt(a);
        let mut seen = vec![false; table.len()];
        ctx.elements().all(|x| {
            let d = ctx.sub(table[ctx.add(x, a).0 as usize], table[x.0 as usize]);
            !std::mem::replace(&mut seen[d.0 as usize], true)
        })
    }))
}
