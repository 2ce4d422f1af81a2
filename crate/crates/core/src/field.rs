//! Table-driven arithmetic in GF(3^m).
//!
//! Elements are stored as their little-endian base-3 index: the polynomial
//! `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` (reduced modulo the field modulus)
//! has index `c_0 + 3 c_1 + ... + 3^{m-1} c_{m-1}`. Addition is therefore
//! digit-wise mod 3 with no carries, and subsets of the field pack into flat
//! bit vectors indexed by element.
//!
//! Multiplication goes through exp/log tables built from the smallest
//! primitive element, so a [`FieldCtx`] costs O(q) memory and every product is
//! two lookups.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree (tables are O(3^m)).
pub const MAX_DEGREE: u32 = 13;

const CHUNK_TRITS: u32 = 5;
const CHUNK: u32 = 243;

/// A field element, identified by its base-3 index in `0..q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Digit-wise addition and negation tables for 5-trit chunks, shared by all fields.
struct ChunkTables {
    add: Vec<u8>,
    neg: Vec<u8>,
}

fn chunk_tables() -> &'static ChunkTables {
    static TABLES: OnceLock<ChunkTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let digits = |mut v: u32| {
            let mut d = [0u32; CHUNK_TRITS as usize];
            for slot in d.iter_mut() {
                *slot = v % 3;
                v /= 3;
            }
            d
        };
        let pack = |d: [u32; CHUNK_TRITS as usize]| d.iter().rev().fold(0u32, |acc, &t| acc * 3 + t);
        let mut add = vec![0u8; (CHUNK * CHUNK) as usize];
        let mut neg = vec![0u8; CHUNK as usize];
        for a in 0..CHUNK {
            let da = digits(a);
            let mut dn = da;
            dn.iter_mut().for_each(|t| *t = (3 - *t) % 3);
            neg[a as usize] = pack(dn) as u8;
            for b in 0..CHUNK {
                let db = digits(b);
                let mut ds = [0u32; CHUNK_TRITS as usize];
                for i in 0..CHUNK_TRITS as usize {
                    ds[i] = (da[i] + db[i]) % 3;
                }
                add[(a * CHUNK + b) as usize] = pack(ds) as u8;
            }
        }
        ChunkTables { add, neg }
    })
}

/// Renders a digit vector (constant term first) as a polynomial in `x`.
pub fn poly_to_string(digits: &[u8]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let term = match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Map from extension degree to default modulus, loaded from the versioned
/// JSON config (`{"version": 1, "moduli": {"5": [1,2,0,0,0,1], ...}}`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuliConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub moduli: BTreeMap<String, Vec<u8>>,
}

const BUILTIN_MODULI: &str = include_str!("../data/moduli.json");

impl ModuliConfig {
    pub const SUPPORTED_VERSION: u32 = 1;

    pub fn builtin() -> &'static ModuliConfig {
        static CFG: OnceLock<ModuliConfig> = OnceLock::new();
        CFG.get_or_init(|| ModuliConfig::from_json(BUILTIN_MODULI).expect("shipped moduli config is valid"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ModuliConfig = serde_json::from_str(text)?;
        if cfg.version != Self::SUPPORTED_VERSION {
            return Err(Error::Config(format!(
                "moduli config version {} is not supported (expected {})",
                cfg.version,
                Self::SUPPORTED_VERSION
            )));
        }
        for key in cfg.moduli.keys() {
            key.parse::<u32>()
                .map_err(|_| Error::Config(format!("moduli key {key:?} is not an integer degree")))?;
        }
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn modulus_for(&self, m: u32) -> Option<&[u8]> {
        self.moduli.get(&m.to_string()).map(Vec::as_slice)
    }
}

// Polynomial helpers over GF(3) on digit vectors, constant term first.

fn poly_trim(p: &mut Vec<u8>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Remainder of `num` modulo the monic `den`.
fn poly_rem(num: &[u8], den: &[u8]) -> Vec<u8> {
    let mut r: Vec<u8> = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let top = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if top != 0 {
            for (k, &c) in den.iter().enumerate() {
                r[shift + k] = ((r[shift + k] as u32 + 3 * 3 - top as u32 * c as u32) % 3) as u8;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    poly_trim(&mut r);
    r
}

/// Finds a monic factor of degree `1..=deg/2` by trial division, if any.
fn find_factor(modulus: &[u8]) -> Option<Vec<u8>> {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = 3u32.pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                cand.push((v % 3) as u8);
                v /= 3;
            }
            cand.push(1);
            let r = poly_rem(modulus, &cand);
            if r.iter().all(|&c| c == 0) {
                return Some(cand);
            }
        }
    }
    None
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Immutable GF(3^m) context: modulus plus exp, log and trace tables.
#[derive(Clone)]
pub struct FieldCtx {
    m: u32,
    q: u32,
    modulus: Vec<u8>,
    generator: Felt,
    pow3: Vec<u32>,
    // exp is stored twice over so log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &poly_to_string(&self.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

/// Builds GF(3^m) from `modulus` (constant term first), or from the shipped
/// default when `modulus` is `None`.
pub fn make_field(m: u32, modulus: Option<&[u8]>) -> Result<FieldCtx> {
    make_field_with_config(m, modulus, ModuliConfig::builtin())
}

pub fn make_field_with_config(m: u32, modulus: Option<&[u8]>, config: &ModuliConfig) -> Result<FieldCtx> {
    if m == 0 || m > MAX_DEGREE {
        return Err(Error::Capacity { m, max: MAX_DEGREE });
    }
    let modulus = match modulus {
        Some(p) => p.to_vec(),
        None => config
            .modulus_for(m)
            .ok_or_else(|| Error::Config(format!("no default modulus for m={m}")))?
            .to_vec(),
    };
    FieldCtx::new(m, modulus)
}

impl FieldCtx {
    fn new(m: u32, modulus: Vec<u8>) -> Result<Self> {
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c > 2) {
            return Err(Error::MalformedModulus {
                poly: format!("{modulus:?}"),
                m,
            });
        }
        if let Some(factor) = find_factor(&modulus) {
            return Err(Error::ReducibleModulus {
                poly: poly_to_string(&modulus),
                factor: poly_to_string(&factor),
            });
        }
        let q = 3u32.pow(m);
        let pow3: Vec<u32> = (0..=m).map(|i| 3u32.pow(i)).collect();
        let mut ctx = FieldCtx {
            m,
            q,
            modulus,
            generator: Felt::ZERO,
            pow3,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        ctx.generator = ctx.find_generator();
        ctx.build_exp_log();
        ctx.build_trace();
        Ok(ctx)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `q = 3^m`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.modulus)
    }

    /// Smallest-index element of multiplicative order `q - 1`.
    pub fn generator(&self) -> Felt {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.q).map(Felt)
    }

    /// Element from a prime-field integer (`-1` maps to 2).
    pub fn from_int(&self, v: i64) -> Felt {
        Felt(v.rem_euclid(3) as u32)
    }

    pub fn digits(&self, a: Felt) -> Vec<u8> {
        let mut v = a.0;
        (0..self.m)
            .map(|_| {
                let d = (v % 3) as u8;
                v /= 3;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u8]) -> Result<Felt> {
        if digits.len() > self.m as usize || digits.iter().any(|&d| d > 2) {
            return Err(Error::Domain(format!(
                "digit vector {digits:?} is not an element of GF(3^{})",
                self.m
            )));
        }
        Ok(Felt(digits.iter().rev().fold(0, |acc, &d| acc * 3 + d as u32)))
    }

    pub fn check(&self, a: Felt) -> Result<Felt> {
        if a.0 < self.q {
            Ok(a)
        } else {
            Err(Error::Domain(format!("index {} is not below q={}", a.0, self.q)))
        }
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        let t = &chunk_tables().add;
        let (mut x, mut y) = (a.0, b.0);
        if self.m <= CHUNK_TRITS {
            return Felt(t[(x * CHUNK + y) as usize] as u32);
        }
        let mut out = 0;
        let mut scale = 1;
        while x | y != 0 {
            out += t[((x % CHUNK) * CHUNK + y % CHUNK) as usize] as u32 * scale;
            x /= CHUNK;
            y /= CHUNK;
            scale *= CHUNK;
        }
        Felt(out)
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        let t = &chunk_tables().neg;
        let mut x = a.0;
        let mut out = 0;
        let mut scale = 1;
        while x != 0 {
            out += t[(x % CHUNK) as usize] as u32 * scale;
            x /= CHUNK;
            scale *= CHUNK;
        }
        Felt(out)
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.0 == 0 || b.0 == 0 {
            return Felt::ZERO;
        }
        Felt(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let l = self.log[a.0 as usize];
        Ok(Felt(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents go through the inverse, and `0^0 = 1`.
    pub fn pow(&self, a: Felt, e: i64) -> Result<Felt> {
        if a.is_zero() {
            return match e {
                0 => Ok(Felt::ONE),
                e if e > 0 => Ok(Felt::ZERO),
                _ => Err(Error::Domain("negative power of zero".into())),
            };
        }
        let order = (self.q - 1) as i64;
        let l = (self.log[a.0 as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        Ok(Felt(self.exp[l as usize]))
    }

    /// `generator^k` for any integer `k`.
    #[inline]
    pub fn exp(&self, k: i64) -> Felt {
        Felt(self.exp[k.rem_euclid((self.q - 1) as i64) as usize])
    }

    /// Discrete logarithm to the base of [`FieldCtx::generator`]; `None` for zero.
    #[inline]
    pub fn log(&self, a: Felt) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// Absolute trace to GF(3), as 0, 1 or 2.
    #[inline]
    pub fn trace(&self, a: Felt) -> u8 {
        self.trace[a.0 as usize]
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn quadratic_character(&self, a: Felt) -> i32 {
        match self.log(a) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    #[inline]
    pub fn is_square(&self, a: Felt) -> bool {
        self.quadratic_character(a) == 1
    }

    /// One square root of a nonzero square (`generator^(log/2)`), or `None`.
    pub fn sqrt(&self, a: Felt) -> Option<Felt> {
        if a.is_zero() {
            return Some(Felt::ZERO);
        }
        let l = self.log[a.0 as usize];
        (l % 2 == 0).then(|| Felt(self.exp[(l / 2) as usize]))
    }

    /// Frobenius `a ↦ a^3`.
    pub fn frobenius(&self, a: Felt) -> Felt {
        if a.is_zero() {
            return a;
        }
        let l = (self.log[a.0 as usize] as u64 * 3 % (self.q as u64 - 1)) as usize;
        Felt(self.exp[l])
    }

    /// Schoolbook product of two elements as reduced polynomials. Used only
    /// while the tables are being built.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let da = self.digits(Felt(a));
        let db = self.digits(Felt(b));
        let mut prod = vec![0u8; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u32 + x as u32 * y as u32) % 3) as u8;
            }
        }
        let r = poly_rem(&prod, &self.modulus);
        r.iter().rev().fold(0, |acc, &d| acc * 3 + d as u32)
    }

    fn pow_poly(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> Felt {
        let order = self.q as u64 - 1;
        let primes = prime_factors(order);
        (1..self.q)
            .find(|&c| {
                if order == 1 {
                    return c == 1;
                }
                primes.iter().all(|&p| self.pow_poly(c, order / p) != 1)
            })
            .map(Felt)
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_exp_log(&mut self) {
        let n = (self.q - 1) as usize;
        let m = self.m as usize;
        let g = self.generator.0;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let top = self.pow3[m - 1];
        let mut cur = 1u32;
        for k in 0..n {
            exp[k] = cur;
            exp[k + n] = cur;
            log[cur as usize] = k as u32;
            cur = if g == 3 && m > 1 {
                // multiply by x: shift digits up and fold the overflow digit through the modulus
                let hi = cur / top;
                let shifted = (cur % top) * 3;
                if hi == 0 {
                    shifted
                } else {
                    let mut red = Vec::with_capacity(m);
                    for i in 0..m {
                        red.push(((3 - (hi * self.modulus[i] as u32) % 3) % 3) as u8);
                    }
                    let red = red.iter().rev().fold(0, |acc, &d| acc * 3 + d as u32);
                    self.add(Felt(shifted), Felt(red)).0
                }
            } else {
                self.mul_poly(cur, g)
            };
        }
        debug_assert_eq!(cur, 1, "generator must have full order");
        self.exp = exp;
        self.log = log;
    }

    fn build_trace(&mut self) {
        let m = self.m as usize;
        // trace of each basis element x^j, then extend linearly over the digits
        let basis: Vec<u8> = (0..m)
            .map(|j| {
                let e = Felt(self.pow3[j]);
                let mut s = Felt::ZERO;
                let mut t = e;
                for _ in 0..m {
                    s = self.add(s, t);
                    t = self.frobenius(t);
                }
                debug_assert!(s.0 < 3, "trace lands in the prime field");
                s.0 as u8
            })
            .collect();
        let mut trace = vec![0u8; self.q as usize];
        for idx in 1..self.q as usize {
            let low = idx % 3;
            let rest = idx / 3;
            // idx = low + 3 * rest; rest's digits sit one position higher
            let mut acc = low as u32 * basis[0] as u32;
            let mut r = rest;
            let mut j = 1;
            while r > 0 {
                acc += (r % 3) as u32 * basis[j] as u32;
                r /= 3;
                j += 1;
            }
            trace[idx] = (acc % 3) as u8;
        }
        self.trace = trace;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_tables() {
        let f = make_field(1, None).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.generator(), Felt(2));
        assert_eq!(&f.exp[..2], &[1, 2]);
        assert_eq!(f.mul(Felt(2), Felt(2)), Felt(1));
    }

    #[test]
    fn gf9_with_x2_plus_1() {
        let f = make_field(2, Some(&[1, 0, 1])).unwrap();
        let x = Felt(3);
        assert_eq!(f.mul(x, x), Felt(2));
    }

    #[test]
    fn rejects_reducible_modulus_with_factor() {
        // x^2 + 2 = (x + 1)(x + 2)
        let err = make_field(2, Some(&[2, 0, 1])).unwrap_err();
        match err {
            Error::ReducibleModulus { factor, .. } => assert_eq!(factor, "x + 1"),
            other => panic!("unexpected {other:?}"),
        }
        // x^4 + 2x^2 + 1 = (x^2 + 1)^2 has no root, so a quadratic factor is reported
        let err = make_field(4, Some(&[1, 0, 2, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::ReducibleModulus { ref factor, .. } if factor == "x^2 + 1"), "{err}");
    }

    #[test]
    fn rejects_out_of_range_and_malformed() {
        assert!(matches!(make_field(0, None), Err(Error::Capacity { .. })));
        assert!(matches!(make_field(14, None), Err(Error::Capacity { .. })));
        assert!(matches!(make_field(2, Some(&[1, 0, 2])), Err(Error::MalformedModulus { .. })));
        assert!(matches!(make_field(2, Some(&[1, 1])), Err(Error::MalformedModulus { .. })));
    }

    #[test]
    fn gf243_default() {
        let f = make_field(5, None).unwrap();
        assert_eq!(f.q(), 243);
        assert_eq!(f.exp.len() / 2, 242);
        assert_eq!(f.trace(Felt::ZERO), 0);
        assert_eq!(f.trace(Felt::ONE), 2);
        assert_eq!(f.elements().filter(|&a| f.trace(a) == 0).count(), 81);
        assert_eq!(f.quadratic_character(Felt::ONE), 1);
        assert_eq!(f.quadratic_character(f.generator()), -1);
        assert_eq!(f.quadratic_character(f.from_int(-1)), -1);
    }

    #[test]
    fn every_default_modulus_builds_small() {
        for m in 1..=9 {
            let f = make_field(m, None).unwrap();
            for a in f.nonzero() {
                assert_eq!(f.exp(f.log(a).unwrap() as i64), a);
            }
            let squares = f.nonzero().filter(|&a| f.quadratic_character(a) == 1).count();
            assert_eq!(squares as u32, (f.q() - 1) / 2);
            for t in 0..3u8 {
                let n = f.elements().filter(|&a| f.trace(a) == t).count();
                assert_eq!(n as u32, f.q() / 3, "trace balance m={m}");
            }
        }
    }

    #[test]
    fn generator_is_smallest_primitive_for_custom_modulus() {
        // x^2 + 1 is irreducible but not primitive: x has order 4
        let f = make_field(2, Some(&[1, 0, 1])).unwrap();
        let g = f.generator();
        assert_ne!(g, Felt(3));
        for c in 1..g.0 {
            let ord = (1..=8).find(|&k| f.pow(Felt(c), k).unwrap() == Felt::ONE).unwrap();
            assert!(ord < 8);
        }
    }

    #[test]
    fn trace_matches_frobenius_sum_and_is_additive() {
        let f = make_field(7, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = Felt(rng.gen_range(0..f.q()));
            let b = Felt(rng.gen_range(0..f.q()));
            let mut s = Felt::ZERO;
            let mut t = a;
            for _ in 0..f.m() {
                s = f.add(s, t);
                t = f.pow(t, 3).unwrap();
            }
            assert_eq!(s.0, f.trace(a) as u32);
            assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
        }
    }

    #[test]
    fn inverse_and_negative_powers() {
        let f = make_field(6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a = Felt(rng.gen_range(1..f.q()));
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), Felt::ONE);
            assert_eq!(f.pow(a, -1).unwrap(), ai);
            assert_eq!(f.pow(a, -3).unwrap(), f.pow(ai, 3).unwrap());
        }
        assert!(matches!(f.inv(Felt::ZERO), Err(Error::Domain(_))));
        assert!(f.pow(Felt::ZERO, -2).is_err());
        assert_eq!(f.pow(Felt::ZERO, 0).unwrap(), Felt::ONE);
    }

    #[test]
    fn wide_field_addition_crosses_chunks() {
        let f = make_field(11, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = Felt(rng.gen_range(0..f.q()));
            let b = Felt(rng.gen_range(0..f.q()));
            let want: Vec<u8> = f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % 3).collect();
            assert_eq!(f.digits(f.add(a, b)), want);
            assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
        }
    }

    #[test]
    fn moduli_config_roundtrip_and_version_gate() {
        let cfg = ModuliConfig::builtin();
        assert_eq!(cfg.modulus_for(5), Some(&[1u8, 2, 0, 0, 0, 1][..]));
        let text = serde_json::to_string(cfg).unwrap();
        assert!(ModuliConfig::from_json(&text).is_ok());
        let bad = text.replace("\"version\":1", "\"version\":2");
        assert!(matches!(ModuliConfig::from_json(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn poly_strings() {
        assert_eq!(poly_to_string(&[1, 2, 0, 0, 0, 1]), "x^5 + 2x + 1");
        assert_eq!(poly_to_string(&[0]), "0");
    }
}
