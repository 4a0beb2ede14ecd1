use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Field, Ring};
use crate::error::{Error, Result};

/// The coefficient field of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    /// ℚ with the identity involution.
    Rational,
    /// ℚ(i) with complex conjugation.
    Gaussian,
    /// 𝔽_p with the identity involution. Never positive definite for p > 2 in
    /// enough variables; present so the definiteness checker has negatives.
    Prime(u64),
}

impl FieldKind {
    pub fn is_positive_definite(self) -> bool {
        matches!(self, FieldKind::Rational | FieldKind::Gaussian)
    }

    /// Fails with [`Error::NotPositiveDefinite`] unless the field is ℚ or ℚ(i).
    pub fn require_positive_definite(self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite(self.to_string()))
        }
    }

    /// Brings a scalar into this field (rationals reduce modulo p).
    pub fn embed(self, value: &Scalar) -> Scalar {
        match self {
            FieldKind::Prime(p) => value.to_prime(p),
            _ => value.clone(),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Gaussian => write!(f, "Q(i)"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "q" | "QQ" => Ok(FieldKind::Rational),
            "Q(i)" | "Qi" | "qi" | "gaussian" => Ok(FieldKind::Gaussian),
            other => {
                let digits = other
                    .strip_prefix('F')
                    .or_else(|| other.strip_prefix("GF"))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown field `{other}`")))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("unknown field `{other}`")))?;
                if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
                    return Err(Error::InvalidArgument(format!("{p} is not a small prime")));
                }
                Ok(FieldKind::Prime(p))
            }
        }
    }
}

impl Serialize for FieldKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// An exact field element.
///
/// Values of different kinds combine by promotion: rationals embed into ℚ(i)
/// and reduce into 𝔽_p. Mixing ℚ(i) with 𝔽_p, or two different primes, is a
/// programming error and panics.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rat(BigRational),
    /// `re + im·i` with `im ≠ 0`.
    Gauss(BigRational, BigRational),
    /// Residue `value mod p` with `value < p`.
    Mod(u64, u64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            Scalar::Rat(re)
        } else {
            Scalar::Gauss(re, im)
        }
    }

    pub fn i() -> Self {
        Scalar::Gauss(BigRational::zero(), BigRational::one())
    }

    pub fn modular(value: i64, p: u64) -> Self {
        Scalar::Mod(value.rem_euclid(p as i64) as u64, p)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    /// Real and imaginary parts; panics on residues.
    fn parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rat(r) => (r.clone(), BigRational::zero()),
            Scalar::Gauss(a, b) => (a.clone(), b.clone()),
            Scalar::Mod(..) => panic!("cannot combine a residue with a Gaussian rational"),
        }
    }

    pub(crate) fn to_prime(&self, p: u64) -> Scalar {
        match self {
            Scalar::Mod(v, q) => {
                assert_eq!(*q, p, "mixed prime fields F{q} and F{p}");
                Scalar::Mod(*v, p)
            }
            Scalar::Rat(r) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap();
                let den = r.denom().mod_floor(&pb).to_u64().unwrap();
                assert!(den != 0, "{r} has no image in F{p}");
                Scalar::Mod(mul_mod(num, inv_mod(den, p), p), p)
            }
            Scalar::Gauss(..) => panic!("cannot reduce a Gaussian rational modulo {p}"),
        }
    }

    /// The field this scalar forces, if any (rationals are compatible with every field).
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rat(_) => FieldKind::Rational,
            Scalar::Gauss(..) => FieldKind::Gaussian,
            Scalar::Mod(_, p) => FieldKind::Prime(*p),
        }
    }

    fn combine(
        &self,
        rhs: &Scalar,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        gauss: impl Fn(
            (BigRational, BigRational),
            (BigRational, BigRational),
        ) -> (BigRational, BigRational),
        modp: impl Fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat(a, b)),
            (Scalar::Mod(_, p), _) | (_, Scalar::Mod(_, p)) => {
                let p = *p;
                let (Scalar::Mod(a, _), Scalar::Mod(b, _)) = (self.to_prime(p), rhs.to_prime(p))
                else {
                    unreachable!()
                };
                Scalar::Mod(modp(a, b, p), p)
            }
            _ => {
                let (re, im) = gauss(self.parts(), rhs.parts());
                Scalar::gaussian(re, im)
            }
        }
    }

    /// Norm `a·ā` as a rational; panics on residues.
    pub fn norm(&self) -> BigRational {
        let (a, b) = self.parts();
        &a * &a + &b * &b
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p as i64));
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Mod(_, p), _) | (_, Scalar::Mod(_, p)) => {
                match (self.to_prime(*p), other.to_prime(*p)) {
                    (Scalar::Mod(a, _), Scalar::Mod(b, _)) => a == b,
                    _ => unreachable!(),
                }
            }
            _ => self.parts() == other.parts(),
        }
    }
}

impl Eq for Scalar {}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::from_int(0)
    }

    fn one() -> Self {
        Scalar::from_int(1)
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Gauss(..) => false,
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            |a, b| a + b,
            |(a, b), (c, d)| (a + c, b + d),
            |a, b, p| (a + b) % p,
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            |a, b| a - b,
            |(a, b), (c, d)| (a - c, b - d),
            |a, b, p| (a + p - b) % p,
        )
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            |a, b| a * b,
            |(a, b), (c, d)| (&a * &c - &b * &d, a * d + b * c),
            mul_mod,
        )
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Gauss(a, b) => Scalar::Gauss(-a, -b),
            Scalar::Mod(v, p) => Scalar::Mod((p - v) % p, *p),
        }
    }

    fn involve(&self) -> Self {
        match self {
            Scalar::Gauss(a, b) => Scalar::Gauss(a.clone(), -b),
            other => other.clone(),
        }
    }

    fn from_scalar(c: Scalar) -> Self {
        c
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Gauss(a, b) => {
                let n = &(a * a) + &(b * b);
                Scalar::Gauss(a / &n, -(b / &n))
            }
            Scalar::Mod(v, p) => Scalar::Mod(inv_mod(*v, *p), *p),
        })
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => f.write_str(&fmt_rational(r)),
            Scalar::Mod(v, _) => write!(f, "{v}"),
            Scalar::Gauss(a, b) => {
                let im = if b.is_one() {
                    "i".to_string()
                } else if *b == -BigRational::one() {
                    "-i".to_string()
                } else {
                    format!("{}i", fmt_rational(b))
                };
                if a.is_zero() {
                    f.write_str(&im)
                } else if b.is_negative() {
                    write!(f, "{}{}", fmt_rational(a), im)
                } else {
                    write!(f, "{}+{}", fmt_rational(a), im)
                }
            }
        }
    }
}

/// Parses an unsigned rational `a` or `a/b`.
pub(crate) fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return None;
    }
    if !num.bytes().all(|b| b.is_ascii_digit()) || !den.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parses a scalar literal: `a`, `a/b`, `c/di`, `a/b+c/di`, `i`, `-i`, ...
pub fn parse_scalar(text: &str, field: FieldKind) -> Result<Scalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::parse(1, 1, format!("invalid scalar literal `{text}`"));
    if s.is_empty() {
        return Err(err());
    }
    let mut total = Scalar::zero();
    // Split into signed terms at top-level '+'/'-' (a sign at position 0 belongs to the first term).
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut terms = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    if terms.len() > 2 {
        return Err(err());
    }
    for term in terms {
        let (neg, body) = match term.as_bytes()[0] {
            b'-' => (true, &term[1..]),
            b'+' => (false, &term[1..]),
            _ => (false, term),
        };
        let value = if let Some(im) = body.strip_suffix('i') {
            let coef = if im.is_empty() {
                BigRational::one()
            } else {
                parse_unsigned_rational(im).ok_or_else(err)?
            };
            Scalar::gaussian(BigRational::zero(), coef)
        } else {
            Scalar::Rat(parse_unsigned_rational(body).ok_or_else(err)?)
        };
        total = if neg {
            total.sub(&value)
        } else {
            total.add(&value)
        };
    }
    embed_checked(total, field)
}

pub(crate) fn embed_checked(value: Scalar, field: FieldKind) -> Result<Scalar> {
    match (field, &value) {
        (FieldKind::Rational, Scalar::Gauss(..)) => Err(Error::InvalidArgument(format!(
            "`{value}` is not a rational number"
        ))),
        (FieldKind::Prime(_), Scalar::Gauss(..)) => Err(Error::InvalidArgument(format!(
            "`{value}` has no image in {field}"
        ))),
        (FieldKind::Prime(p), Scalar::Rat(r)) if (r.denom() % BigInt::from(p)).is_zero() => Err(
            Error::InvalidArgument(format!("`{value}` has no image in {field}")),
        ),
        _ => Ok(field.embed(&value)),
    }
}

/// Outcome of [`check_positive_definite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Definiteness {
    /// No counterexample among tuples of length ≤ `up_to` within the search
    /// budget; `proof` is set when the field is known to be positive definite
    /// for every length.
    PositiveDefinite { up_to: usize, proof: bool },
    /// A non-trivial tuple with `Σ k̄ᵢkᵢ = 0`.
    Counterexample {
        #[serde(serialize_with = "serialize_display_vec")]
        witness: Vec<Scalar>,
    },
}

fn serialize_display_vec<S: serde::Serializer>(
    v: &[Scalar],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Searches for `k₁..k_m` (m ≤ n), not all zero, with `Σ k̄ᵢkᵢ = 0`.
///
/// ℚ and ℚ(i) are certified outright since a sum of norms vanishes only
/// when every term does. Prime fields are searched exhaustively in order of
/// tuple length, visiting at most `budget` tuples.
pub fn check_positive_definite(field: FieldKind, n: usize, budget: usize) -> Definiteness {
    let p = match field {
        FieldKind::Rational | FieldKind::Gaussian => {
            return Definiteness::PositiveDefinite {
                up_to: n,
                proof: true,
            }
        }
        FieldKind::Prime(p) => p,
    };
    let mut visited = 0usize;
    for m in 1..=n {
        let mut tuple = vec![0u64; m];
        loop {
            // advance odometer; first tuple (all zero) is skipped
            let mut i = m;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < p {
                    break;
                }
                tuple[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
            visited += 1;
            if visited > budget {
                return Definiteness::PositiveDefinite {
                    up_to: m.saturating_sub(1),
                    proof: false,
                };
            }
            let sum = tuple
                .iter()
                .fold(0u64, |acc, &k| (acc + mul_mod(k, k, p)) % p);
            if sum == 0 {
                return Definiteness::Counterexample {
                    witness: tuple.iter().map(|&k| Scalar::Mod(k, p)).collect(),
                };
            }
        }
    }
    Definiteness::PositiveDefinite {
        up_to: n,
        proof: false,
    }
}
