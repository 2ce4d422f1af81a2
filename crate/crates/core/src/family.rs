//! Named set families and the `u`-expressions used to parameterize them.
//!
//! Labels: `paley`, `dy1`, `dy-1`, `dy:<u>`, `d7:<u>`, `dickson:<n>:<u>`,
//! `image:<e1>+<e2>+...` (the map `x ↦ Σ x^{e_i}`), and `set:<path>`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dickson::{dickson_eval, is_permutation, DicksonSpec, PermutationMethod};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};
use crate::sets::{build_image_set, paley_set, ElementSet, SetFile};

/// A field element written as `0`, `1`, `-1`, `2`, `g`, `g^k` or `-g^k`,
/// where `g` is the context's generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UExpr {
    Int(i64),
    GenPow { negate: bool, k: i64 },
}

impl UExpr {
    pub fn resolve(&self, ctx: &FieldCtx) -> Felt {
        match *self {
            UExpr::Int(v) => ctx.from_int(v),
            UExpr::GenPow { negate, k } => {
                let x = ctx.exp(k);
                if negate {
                    ctx.neg(x)
                } else {
                    x
                }
            }
        }
    }
}

impl FromStr for UExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(UExpr::Int(v));
        }
        let (negate, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r.trim()),
            None => (false, t),
        };
        let k = match rest {
            "g" => 1,
            _ => rest
                .strip_prefix("g^")
                .and_then(|e| e.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::parse("u-expression", s, "expected an integer, g, g^k or -g^k"))?,
        };
        Ok(UExpr::GenPow { negate, k })
    }
}

impl fmt::Display for UExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            UExpr::Int(v) => write!(f, "{v}"),
            UExpr::GenPow { negate, k } => {
                let sign = if negate { "-" } else { "" };
                if k == 1 {
                    write!(f, "{sign}g")
                } else {
                    write!(f, "{sign}g^{k}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Nonzero squares.
    Paley,
    /// `{D_5(x^2, -u) : x ≠ 0}`.
    Dy { u: UExpr },
    /// `{D_7(x^2, u) : x ≠ 0}`.
    D7 { u: UExpr },
    /// `{D_n(x^2, u) : x ≠ 0}`.
    Dickson { n: u32, u: UExpr },
    /// `{Σ_i (x^2)^{e_i} : x ≠ 0}`.
    Image { exponents: Vec<u32> },
    /// Elements read from a set file.
    SetFile { path: PathBuf },
}

/// Whether a construction is requested as a skew Hadamard difference set or
/// only as a (partial) difference set candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildMode {
    Shds,
    Pds,
}

impl FamilySpec {
    pub fn label(&self) -> String {
        match self {
            FamilySpec::Paley => "paley".into(),
            FamilySpec::Dy { u: UExpr::Int(1) } => "dy1".into(),
            FamilySpec::Dy { u: UExpr::Int(-1) } => "dy-1".into(),
            FamilySpec::Dy { u } => format!("dy:{u}"),
            FamilySpec::D7 { u } => format!("d7:{u}"),
            FamilySpec::Dickson { n, u } => format!("dickson:{n}:{u}"),
            FamilySpec::Image { exponents } => format!(
                "image:{}",
                exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("+")
            ),
            FamilySpec::SetFile { path } => format!("set:{}", path.display()),
        }
    }

    /// Checks the field-size preconditions of `mode` and builds the set.
    pub fn build(&self, ctx: &FieldCtx, mode: BuildMode) -> Result<ElementSet> {
        let m = ctx.m();
        let odd_m = || {
            if mode == BuildMode::Shds && m % 2 == 0 {
                return Err(Error::Precondition(format!(
                    "{}: m={m} is even, so -1 is a square and the image set cannot be skew (use PDS mode)",
                    self.label()
                )));
            }
            Ok(())
        };
        let nonzero_u = |u: Felt| {
            if u.is_zero() {
                return Err(Error::Precondition(format!("{}: u must be nonzero", self.label())));
            }
            Ok(())
        };
        match self {
            FamilySpec::Paley => {
                odd_m()?;
                Ok(paley_set(ctx))
            }
            FamilySpec::Dy { u } => {
                odd_m()?;
                let u = u.resolve(ctx);
                nonzero_u(u)?;
                let spec = DicksonSpec::new(5, ctx.neg(u))?;
                Ok(build_image_set(ctx, |x| dickson_eval(ctx, spec, x), true))
            }
            FamilySpec::D7 { u } => {
                odd_m()?;
                let u = u.resolve(ctx);
                nonzero_u(u)?;
                if mode == BuildMode::Shds && m % 3 == 0 {
                    return Err(Error::Precondition(format!(
                        "{}: m={m} is divisible by 3, so D_7(x, u) is not a permutation",
                        self.label()
                    )));
                }
                let spec = DicksonSpec::new(7, u)?;
                Ok(build_image_set(ctx, |x| dickson_eval(ctx, spec, x), true))
            }
            FamilySpec::Dickson { n, u } => {
                let spec = DicksonSpec::new(*n, u.resolve(ctx))?;
                if mode == BuildMode::Shds {
                    odd_m()?;
                    if !is_permutation(ctx, spec, PermutationMethod::Criterion).is_permutation {
                        return Err(Error::Precondition(format!(
                            "{}: D_{n}(x, u) is not a permutation of GF(3^{m})",
                            self.label()
                        )));
                    }
                }
                Ok(build_image_set(ctx, |x| dickson_eval(ctx, spec, x), true))
            }
            FamilySpec::Image { exponents } => {
                if exponents.is_empty() {
                    return Err(Error::Precondition("image: exponent list is empty".into()));
                }
                let f = |x: Felt| {
                    exponents.iter().fold(Felt::ZERO, |acc, &e| {
                        ctx.add(acc, ctx.pow(x, e as i64).expect("nonnegative exponent"))
                    })
                };
                if mode == BuildMode::Shds {
                    odd_m()?;
                    let table: Vec<Felt> = ctx.elements().map(f).collect();
                    if !crate::dickson::is_bijection(&table) {
                        return Err(Error::Precondition(format!(
                            "{}: the map is not a permutation of GF(3^{m})",
                            self.label()
                        )));
                    }
                }
                Ok(build_image_set(ctx, f, true))
            }
            FamilySpec::SetFile { path } => SetFile::read(path)?.to_set(ctx),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |reason: &str| Error::parse("family", s, reason);
        let (head, tail) = match t.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (t, None),
        };
        match (head, tail) {
            ("paley", None) => Ok(FamilySpec::Paley),
            ("dy1", None) => Ok(FamilySpec::Dy { u: UExpr::Int(1) }),
            ("dy-1", None) => Ok(FamilySpec::Dy { u: UExpr::Int(-1) }),
            ("dy", Some(u)) => Ok(FamilySpec::Dy { u: u.parse()? }),
            ("d7", Some(u)) => Ok(FamilySpec::D7 { u: u.parse()? }),
            ("dickson", Some(rest)) => {
                let (n, u) = rest.split_once(':').ok_or_else(|| bad("expected dickson:<n>:<u>"))?;
                let n = n.parse().map_err(|_| bad("order must be a positive integer"))?;
                if n == 0 {
                    return Err(bad("order must be at least 1"));
                }
                Ok(FamilySpec::Dickson { n, u: u.parse()? })
            }
            ("image", Some(list)) => {
                let exponents = list
                    .split('+')
                    .map(|e| e.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected exponents separated by '+'"))?;
                Ok(FamilySpec::Image { exponents })
            }
            ("set", Some(path)) if !path.is_empty() => Ok(FamilySpec::SetFile { path: path.into() }),
            _ => Err(bad(
                "expected paley, dy1, dy-1, dy:<u>, d7:<u>, dickson:<n>:<u>, image:<e1+e2..> or set:<path>",
            )),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn u_expressions() {
        let f = make_field(5, None).unwrap();
        let g = f.generator();
        let cases = [
            ("1", Felt::ONE),
            ("-1", f.from_int(-1)),
            ("4", Felt::ONE),
            ("g", g),
            ("g^3", f.pow(g, 3).unwrap()),
            ("-g^2", f.neg(f.mul(g, g))),
            ("g^-1", f.inv(g).unwrap()),
        ];
        for (s, want) in cases {
            let e: UExpr = s.parse().unwrap();
            assert_eq!(e.resolve(&f), want, "{s}");
            assert_eq!(e.to_string().parse::<UExpr>().unwrap(), e);
        }
        for bad in ["", "h", "g^", "g^x", "--1"] {
            assert!(bad.parse::<UExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn family_labels_roundtrip() {
        for s in ["paley", "dy1", "dy-1", "dy:g^2", "d7:1", "d7:-1", "dickson:11:g", "image:7+3", "set:x.json"] {
            let f: FamilySpec = s.parse().unwrap();
            assert_eq!(f.label(), s);
        }
        for bad in ["", "d7", "dickson:0:1", "dickson:5", "image:a", "set:", "pale"] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn mode_gates() {
        let f6 = make_field(6, None).unwrap();
        let d7: FamilySpec = "d7:1".parse().unwrap();
        assert!(matches!(d7.build(&f6, BuildMode::Shds), Err(Error::Precondition(_))));
        assert!(d7.build(&f6, BuildMode::Pds).is_ok());
        let f3 = make_field(3, None).unwrap();
        assert!(d7.build(&f3, BuildMode::Shds).is_err());
        assert!("d7:0".parse::<FamilySpec>().unwrap().build(&f3, BuildMode::Pds).is_err());
        let f5 = make_field(5, None).unwrap();
        assert_eq!(d7.build(&f5, BuildMode::Shds).unwrap().len(), 121);
        assert_eq!("dickson:1:1".parse::<FamilySpec>().unwrap().build(&f5, BuildMode::Shds).unwrap(), paley_set(&f5));
        assert!("dickson:2:1".parse::<FamilySpec>().unwrap().build(&f5, BuildMode::Shds).is_err());
        assert!("image:2".parse::<FamilySpec>().unwrap().build(&f5, BuildMode::Shds).is_err());
        assert_eq!("image:3".parse::<FamilySpec>().unwrap().build(&f5, BuildMode::Shds).unwrap().len(), 121);
    }
}
