//! Slow reference arithmetic on coefficient vectors, independent of the
//! table-driven field implementation.

#![allow(dead_code)]

/// Digits of `index`, constant term first.
pub fn to_poly(index: u32, m: u32) -> Vec<u8> {
    let mut v = index;
    (0..m)
        .map(|_| {
            let d = (v % 3) as u8;
            v /= 3;
            d
        })
        .collect()
}

pub fn from_poly(p: &[u8]) -> u32 {
    p.iter().rev().fold(0, |acc, &d| acc * 3 + d as u32)
}

pub fn poly_add(a: u32, b: u32, m: u32) -> u32 {
    let (x, y) = (to_poly(a, m), to_poly(b, m));
    from_poly(&x.iter().zip(&y).map(|(p, q)| (p + q) % 3).collect::<Vec<_>>())
}

pub fn poly_neg(a: u32, m: u32) -> u32 {
    from_poly(&to_poly(a, m).iter().map(|&d| (3 - d) % 3).collect::<Vec<_>>())
}

/// Schoolbook product reduced by the monic `modulus` (constant term first).
pub fn poly_mul(a: u32, b: u32, modulus: &[u8]) -> u32 {
    let m = modulus.len() as u32 - 1;
    let (x, y) = (to_poly(a, m), to_poly(b, m));
    let mut prod = vec![0u32; 2 * m as usize];
    for (i, &p) in x.iter().enumerate() {
        for (j, &q) in y.iter().enumerate() {
            prod[i + j] += p as u32 * q as u32;
        }
    }
    for k in (m as usize..prod.len()).rev() {
        let top = prod[k] % 3;
        prod[k] = 0;
        if top != 0 {
            for (t, &c) in modulus[..m as usize].iter().enumerate() {
                prod[k - m as usize + t] += 3 * 3 - top * c as u32;
            }
        }
    }
    from_poly(&prod[..m as usize].iter().map(|&c| (c % 3) as u8).collect::<Vec<_>>())
}

pub fn poly_pow(a: u32, mut e: u64, modulus: &[u8]) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(acc, base, modulus);
        }
        base = poly_mul(base, base, modulus);
        e >>= 1;
    }
    acc
}

/// `D_7(x, u) = x^7 - u x^5 - u^2 x^3 - u^3 x` in characteristic 3.
pub fn poly_d7(x: u32, u: u32, modulus: &[u8]) -> u32 {
    let m = modulus.len() as u32 - 1;
    let p = |e| poly_pow(x, e, modulus);
    let u2 = poly_mul(u, u, modulus);
    let u3 = poly_mul(u2, u, modulus);
    let mut acc = p(7);
    for t in [poly_mul(u, p(5), modulus), poly_mul(u2, p(3), modulus), poly_mul(u3, x, modulus)] {
        acc = poly_add(acc, poly_neg(t, m), m);
    }
    acc
}

/// `N(g)` for every nonzero `g` by direct pair enumeration.
pub fn difference_tally(set: &[u32], m: u32) -> Vec<u32> {
    let q = 3u32.pow(m);
    let mut n = vec![0u32; q as usize];
    for &x in set {
        for &y in set {
            if x != y {
                n[poly_add(x, poly_neg(y, m), m) as usize] += 1;
            }
        }
    }
    n
}
