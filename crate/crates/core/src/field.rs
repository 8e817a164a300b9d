//! Exact scalars over a small prime field GF(p) or over the rationals.
//!
//! Scalars carry no field information; all arithmetic goes through the
//! [`FieldSpec`] they belong to.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for prime fields.
pub const MAX_MODULUS: u32 = 65_521;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u32),
    Rationals,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u32),
    Rat(BigRational),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_MODULUS as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub const GF2: FieldSpec = FieldSpec::Prime(2);
    pub const GF3: FieldSpec = FieldSpec::Prime(3);

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(*p as u64),
            FieldSpec::Rationals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Mod(0),
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod(n.rem_euclid(*p as i64) as u32),
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod((*p - *x) % *p),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Mod(x)) => {
                // Fermat: x^(p-2)
                let p = *p as u64;
                let mut base = *x as u64;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Mod(acc as u32)
            }
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// All elements in increasing order (0, 1, ..., p-1). Finite fields only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Prime(p) => Some((0..*p).map(Scalar::Mod).collect()),
            FieldSpec::Rationals => None,
        }
    }

    /// Parses `"3"`, `"-1"` or `"2/3"`. Over GF(p) a fraction means `a * b^-1`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar {
            text: text.to_string(),
            field: self.to_string(),
        };
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &p) + &p) % &p;
                    r.to_u32().expect("residue fits")
                };
                let n = Scalar::Mod(reduce(&num));
                let d = Scalar::Mod(reduce(&den));
                if self.is_zero(&d) {
                    return Err(bad());
                }
                Ok(self.div(&n, &d))
            }
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
        }
    }

    /// Canonical text form: residues `0..p`, rationals as `p` or `p/q`.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Mod(x) => x.to_string(),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// Integer value if the scalar is an integer that fits an `i64`.
    pub fn as_i64(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Mod(x) => Some(*x as i64),
            Scalar::Rat(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Rat(_) => None,
        }
    }

    pub fn check(&self, other: &FieldSpec) -> Result<()> {
        if self != other {
            return Err(Error::FieldMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }

    /// Whether `a` is a negative rational.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Rat(r) if r.is_negative())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Q" | "QQ" | "rationals" => return Ok(FieldSpec::Rationals),
            _ => {}
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownField(t.to_string()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::UnknownField(t.to_string()))?;
        FieldSpec::prime(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_must_be_prime() {
        assert!(matches!(FieldSpec::prime(4), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::prime(1), Err(Error::NotPrime(1))));
        assert_eq!(FieldSpec::prime(7).unwrap(), FieldSpec::Prime(7));
        let err = "GF(4)".parse::<FieldSpec>().unwrap_err();
        assert_eq!(err.to_string(), "modulus not prime: 4");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::Prime(7);
        let three = f.from_i64(3);
        let five = f.from_i64(5);
        assert_eq!(f.add(&three, &five), Scalar::Mod(1));
        assert_eq!(f.mul(&three, &five), Scalar::Mod(1));
        assert_eq!(f.inv(&three), five);
        assert_eq!(f.neg(&three), Scalar::Mod(4));
        assert_eq!(f.from_i64(-1), Scalar::Mod(6));
        assert_eq!(f.parse("1/3").unwrap(), five);
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn rational_parse_and_format() {
        let q = FieldSpec::Rationals;
        let x = q.parse("-4/6").unwrap();
        assert_eq!(q.format(&x), "-2/3");
        assert_eq!(q.format(&q.mul(&x, &q.from_i64(-3))), "2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("abc").is_err());
    }

    #[test]
    fn field_names_round_trip() {
        for f in [FieldSpec::GF2, FieldSpec::Prime(101), FieldSpec::Rationals] {
            assert_eq!(f.to_string().parse::<FieldSpec>().unwrap(), f);
        }
    }
}
