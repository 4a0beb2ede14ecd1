use std::collections::BTreeMap;
use std::fmt;

use super::field::{embed_checked, parse_unsigned_rational};
use super::{parse_scalar, Field, FieldKind, Ring, Scalar};
use crate::error::{Error, Result};

/// An element of K[x, x⁻¹], stored as a sparse exponent map without zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Scalar>,
}

impl Laurent {
    pub fn x() -> Self {
        Self::monomial(Scalar::one(), 1)
    }

    pub fn monomial(c: Scalar, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Laurent { terms }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds `Σ cᵢ xⁱ` from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut out = Laurent::zero();
        for (k, c) in pairs {
            out.add_term(k, &c);
        }
        out
    }

    /// Shorthand for integer coefficients `c₀xᵏ + c₁xᵏ⁺¹ + ...`.
    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (low + i as i64, Scalar::from_int(c))),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `max_deg − min_deg`; the Euclidean size function. `None` for zero.
    pub fn width(&self) -> Option<u64> {
        Some((self.max_deg()? - self.min_deg()?) as u64)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    /// Units of K[x, x⁻¹] are exactly the nonzero monomials `c·xᵏ`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn add_term(&mut self, k: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    /// Multiplies by `xᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.inv()?, -k))
    }

    /// Writes `self = u·f₀` with `u = c·xᵐ` a unit and `f₀` an ordinary monic
    /// polynomial with nonzero constant term. Returns `(u, f₀)`; zero maps to `(1, 0)`.
    pub fn associate_split(&self) -> (Laurent, Laurent) {
        let (Some(lo), Some(hi)) = (self.min_deg(), self.max_deg()) else {
            return (Laurent::one(), Laurent::zero());
        };
        let lead = self.terms[&hi].clone();
        let unit = Laurent::monomial(lead.clone(), lo);
        let normal = self
            .shift(-lo)
            .scale(&lead.inv().expect("nonzero leading coefficient"));
        (unit, normal)
    }

    /// The canonical associate: monic ordinary polynomial with nonzero constant term.
    pub fn normalized(&self) -> Laurent {
        self.associate_split().1
    }

    /// Euclidean division under the width function: `self = q·g + r` with
    /// `r = 0` or `width(r) < width(g)`.
    pub fn divmod(&self, g: &Laurent) -> Result<(Laurent, Laurent)> {
        let (Some(g_lo), Some(g_hi)) = (g.min_deg(), g.max_deg()) else {
            return Err(Error::DivisionByZero);
        };
        let Some(f_lo) = self.min_deg() else {
            return Ok((Laurent::zero(), Laurent::zero()));
        };
        // ordinary polynomial division of x^{-f_lo}·f by x^{-g_lo}·g
        let g_deg = g_hi - g_lo;
        let g_lead_inv = g.terms[&g_hi].inv().expect("nonzero leading coefficient");
        let mut rem = self.shift(-f_lo);
        let mut quot = Laurent::zero();
        while let Some(r_hi) = rem.max_deg() {
            if r_hi < g_deg {
                break;
            }
            let c = rem.terms[&r_hi].mul(&g_lead_inv);
            let k = r_hi - g_deg;
            for (e, v) in g.terms() {
                rem.add_term(e - g_lo + k, &v.mul(&c).neg());
            }
            quot.add_term(k, &c);
        }
        Ok((quot.shift(f_lo - g_lo), rem.shift(f_lo)))
    }

    /// Exact quotient `self / g`, if `g` divides `self`.
    pub fn div_exact(&self, g: &Laurent) -> Option<Laurent> {
        let (q, r) = self.divmod(g).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Laurent) -> bool {
        if self.is_zero() {
            f.is_zero()
        } else {
            f.div_exact(self).is_some()
        }
    }

    /// Greatest common divisor, normalized; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Laurent) -> Laurent {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.normalized()
    }

    /// Extended gcd: `(g, s, t)` with `s·self + t·other = g`, `g` normalized.
    pub fn xgcd(&self, other: &Laurent) -> (Laurent, Laurent, Laurent) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Laurent::one(), Laurent::zero());
        let (mut t0, mut t1) = (Laurent::zero(), Laurent::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, Laurent::zero(), Laurent::zero());
        }
        let (unit, g) = r0.associate_split();
        let inv = unit.unit_inverse().expect("unit");
        (g, s0.mul(&inv), t0.mul(&inv))
    }

    /// Evaluates at a nonzero point.
    pub fn eval(&self, point: &Scalar) -> Scalar {
        let inv = point.inv();
        self.terms().fold(Scalar::zero(), |acc, (k, c)| {
            let base = if k >= 0 {
                point.clone()
            } else {
                inv.clone().expect("nonzero point")
            };
            let mut p = Scalar::one();
            for _ in 0..k.unsigned_abs() {
                p = p.mul(&base);
            }
            acc.add(&c.mul(&p))
        })
    }

    /// Converts coefficients into `field`, failing on values it cannot hold.
    pub fn in_field(&self, field: FieldKind) -> Result<Laurent> {
        let mut out = Laurent::zero();
        for (k, c) in self.terms() {
            out.add_term(k, &embed_checked(c.clone(), field)?);
        }
        Ok(out)
    }

    /// Parses expressions such as `3+x+x^-1`, `1/2*x^-3`, `(1+2i)*x^2`, `2i*x`.
    pub fn parse(text: &str, field: FieldKind) -> Result<Laurent> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::parse(1, 1, format!("{msg} in Laurent expression `{text}`"));
        if s.is_empty() {
            return Err(err("empty"));
        }
        let bytes = s.as_bytes();
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for i in 0..bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(err("unbalanced parentheses"));
        }
        terms.push(&s[start..]);

        let mut out = Laurent::zero();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err("empty term"));
            }
            let (coef_text, power) = match body.find('x') {
                None => (body, None),
                Some(pos) => {
                    let exp = &body[pos + 1..];
                    let k = if exp.is_empty() {
                        1
                    } else {
                        exp.strip_prefix('^')
                            .and_then(|e| e.parse::<i64>().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    let c = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
                    if c.is_empty() && pos > 0 {
                        return Err(err("dangling `*`"));
                    }
                    (c, Some(k))
                }
            };
            let coef = if coef_text.is_empty() {
                Scalar::one()
            } else if let Some(inner) = coef_text
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
            {
                parse_scalar(inner, FieldKind::Gaussian).map_err(|_| err("bad coefficient"))?
            } else if let Some(im) = coef_text.strip_suffix('i') {
                let v = if im.is_empty() {
                    num_rational::BigRational::from_integer(1.into())
                } else {
                    parse_unsigned_rational(im).ok_or_else(|| err("bad coefficient"))?
                };
                Scalar::gaussian(num_rational::BigRational::from_integer(0.into()), v)
            } else {
                Scalar::Rat(
                    parse_unsigned_rational(coef_text).ok_or_else(|| err("bad coefficient"))?,
                )
            };
            let coef = embed_checked(if neg { coef.neg() } else { coef }, field)?;
            out.add_term(power.unwrap_or(0), &coef);
        }
        Ok(out)
    }
}

impl Ring for Laurent {
    fn zero() -> Self {
        Laurent::default()
    }

    fn one() -> Self {
        Laurent::constant(Scalar::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, &c.neg());
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Laurent::zero();
        for (a, c) in self.terms() {
            for (b, d) in rhs.terms() {
                out.add_term(a + b, &c.mul(d));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// `x ↦ x⁻¹` composed with the coefficient involution.
    fn involve(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(k, c)| (-k, c.involve())).collect(),
        }
    }

    fn from_scalar(c: Scalar) -> Self {
        Laurent::constant(c)
    }
}

impl fmt::Display for Laurent {
    /// Terms are printed by increasing `|k|`, positive exponent first:
    /// `3+x+x^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<i64> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&k| (k.unsigned_abs(), -k));
        let mut out = String::new();
        for k in keys {
            let c = &self.terms[&k];
            let term = if k == 0 {
                c.to_string()
            } else {
                let var = if k == 1 {
                    "x".to_string()
                } else {
                    format!("x^{k}")
                };
                if *c == Scalar::one() {
                    var
                } else if *c == Scalar::one().neg() {
                    format!("-{var}")
                } else if c.is_rational() {
                    format!("{c}*{var}")
                } else {
                    format!("({c})*{var}")
                }
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Laurent {
        Laurent::parse(s, FieldKind::Gaussian).unwrap()
    }

    #[test]
    fn reproduces_the_diagonal_entry() {
        let p = l("1+x").mul(&l("1+x^-1"));
        assert_eq!(p, l("2+x+x^-1"));
        assert_eq!(Laurent::one().add(&p).to_string(), "3+x+x^-1");
    }

    #[test]
    fn units_are_monomials() {
        assert!(!l("3+x+x^-1").is_unit());
        assert!(l("5*x^-3").is_unit());
        assert_eq!(l("5*x^-3").unit_inverse().unwrap(), l("1/5*x^3"));
        assert!(!Laurent::zero().is_unit());
    }

    #[test]
    fn involution_inverts_the_variable() {
        assert_eq!(l("1+x").involve(), l("1+x^-1"));
        assert_eq!(l("(1+2i)*x^2").involve(), l("(1-2i)*x^-2"));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "0", "3+x+x^-1", "-x^2", "1/2*x^-3", "(1+2i)*x", "1-2i", "2i*x^4", "-1+x^-1",
        ] {
            let p = l(s);
            assert_eq!(l(&p.to_string()), p, "{s}");
        }
        assert_eq!(l("x^-1+3+x").to_string(), "3+x+x^-1");
    }

    #[test]
    fn divmod_examples() {
        let f = l("x^-2+3+x^3");
        let g = l("1+x");
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.is_zero() || r.width() < g.width());
        assert_eq!(f.divmod(&Laurent::zero()), Err(Error::DivisionByZero));
        // division by a unit is exact
        let (q, r) = f.divmod(&l("2*x^5")).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&l("2*x^5")), f);
    }

    #[test]
    fn gcd_is_normalized() {
        let a = l("x+x^2").mul(&l("2-x"));
        let b = l("3*x^-4+3*x^-3");
        assert_eq!(a.gcd(&b), l("1+x"));
        assert_eq!(Laurent::zero().gcd(&l("5*x")), Laurent::one());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x^", "x^a", "*x", "(1+i", "1/0"] {
            assert!(Laurent::parse(bad, FieldKind::Gaussian).is_err(), "{bad}");
        }
        assert!(Laurent::parse("i*x", FieldKind::Rational).is_err());
    }
}
