use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Rat {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Rat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: `{s}`"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(p, q)))
            }
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat::from_bigint(p))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from_int(n as i64)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_string_form() {
        assert_eq!(Rat::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!("-3/2".parse::<Rat>().unwrap(), Rat::new(-3, 2));
        assert_eq!("10/5".parse::<Rat>().unwrap(), Rat::from_int(2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn json_uses_strings() {
        let v = vec![Rat::new(1, 3), Rat::from_int(-7)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/3","-7"]"#);
        let back: Vec<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn powers() {
        assert_eq!(Rat::new(2, 3).pow(3), Rat::new(8, 27));
        assert_eq!(Rat::new(2, 3).pow(-2), Rat::new(9, 4));
        assert_eq!(Rat::from_int(5).pow(0), Rat::one());
    }
}
