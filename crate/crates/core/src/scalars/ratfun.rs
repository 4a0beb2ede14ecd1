use std::fmt;

use super::{Field, FieldKind, Laurent, Ring, Scalar};
use crate::error::{Error, Result};

/// An element of the fraction field K(x) of K[x, x⁻¹].
///
/// Canonical form: the denominator is an ordinary monic polynomial with
/// nonzero constant term, coprime to the numerator. Powers of `x` are units of
/// the Laurent ring and therefore always live in the numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Laurent,
    den: Laurent,
}

impl RatFun {
    pub fn new(num: Laurent, den: Laurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Laurent, den: Laurent) -> Self {
        if num.is_zero() {
            return RatFun::zero();
        }
        if den.is_one() {
            return RatFun { num, den };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let (unit, den) = den.associate_split();
        let num = num.mul(&unit.unit_inverse().expect("unit"));
        RatFun { num, den }
    }

    pub fn from_laurent(f: Laurent) -> Self {
        RatFun {
            num: f,
            den: Laurent::one(),
        }
    }

    pub fn numer(&self) -> &Laurent {
        &self.num
    }

    pub fn denom(&self) -> &Laurent {
        &self.den
    }

    /// The Laurent polynomial this equals, if the denominator is trivial.
    pub fn to_laurent(&self) -> Option<Laurent> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn parse(text: &str, field: FieldKind) -> Result<Self> {
        let text = text.trim();
        // split at a top-level '/' that is followed by '('
        if let Some(pos) = text.find(")/(") {
            let unwrap = |s: &'_ str| -> String {
                let s = s.strip_prefix('(').unwrap_or(s);
                s.strip_suffix(')').unwrap_or(s).to_string()
            };
            let num = Laurent::parse(&unwrap(&text[..=pos]), field)?;
            let den = Laurent::parse(&unwrap(&text[pos + 2..]), field)?;
            return RatFun::new(num, den);
        }
        Ok(RatFun::from_laurent(Laurent::parse(text, field)?))
    }
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun::from_laurent(Laurent::zero())
    }

    fn one() -> Self {
        RatFun::from_laurent(Laurent::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        Self::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun::from_laurent(self.num.mul(&rhs.num));
        }
        // cancel crosswise: the factors are already in lowest terms
        // a monomial numerator shares no factor with a normalized denominator
        let cancel = |num: &Laurent, den: &Laurent| {
            if den.is_one() || num.is_unit() {
                Laurent::one()
            } else {
                num.gcd(den)
            }
        };
        let g1 = cancel(&self.num, &rhs.den);
        let g2 = cancel(&rhs.num, &self.den);
        let exact = |a: &Laurent, g: &Laurent| {
            if g.is_one() {
                a.clone()
            } else {
                a.div_exact(g).expect("gcd divides")
            }
        };
        let num = exact(&self.num, &g1).mul(&exact(&rhs.num, &g2));
        let den = exact(&rhs.den, &g1).mul(&exact(&self.den, &g2));
        let (unit, den) = den.associate_split();
        RatFun {
            num: num.mul(&unit.unit_inverse().expect("unit")),
            den,
        }
    }

    fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn involve(&self) -> Self {
        Self::canonical(self.num.involve(), self.den.involve())
    }

    fn from_scalar(c: Scalar) -> Self {
        RatFun::from_laurent(Laurent::constant(c))
    }
}

impl Field for RatFun {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::canonical(self.den.clone(), self.num.clone()))
    }
}

impl From<Laurent> for RatFun {
    fn from(f: Laurent) -> Self {
        RatFun::from_laurent(f)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Laurent {
        Laurent::parse(s, FieldKind::Rational).unwrap()
    }

    #[test]
    fn laurent_non_units_become_invertible() {
        let f = RatFun::from_laurent(l("3+x+x^-1"));
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), RatFun::one());
        assert_eq!(g.to_string(), "(x)/(1+3*x+x^2)");
    }

    #[test]
    fn powers_of_x_are_absorbed() {
        let r = RatFun::new(l("x"), l("x^2")).unwrap();
        assert_eq!(r.numer(), &l("x^-1"));
        assert!(r.denom().is_one());
    }

    #[test]
    fn involution_on_inverse() {
        // 1/(1+x) ↦ 1/(1+x⁻¹) = x/(x+1)
        let r = RatFun::new(Laurent::one(), l("1+x")).unwrap();
        let s = r.involve();
        assert_eq!(s, RatFun::new(l("x"), l("1+x")).unwrap());
        // cross multiplication
        assert_eq!(s.numer().mul(&l("1+x^-1")), s.denom().mul(&Laurent::one()));
        assert_eq!(s.involve(), r);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            RatFun::new(l("1"), Laurent::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(RatFun::zero().inv().is_none());
    }

    #[test]
    fn parse_round_trip() {
        let r = RatFun::new(l("2+x^-1"), l("1-x+x^3")).unwrap();
        assert_eq!(
            RatFun::parse(&r.to_string(), FieldKind::Rational).unwrap(),
            r
        );
    }
}
