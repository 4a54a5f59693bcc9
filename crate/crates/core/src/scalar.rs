//! Exact scalars over `Q` or a prime field `F_p`.
//!
//! A [`Scalar`] carries its own field tag so that values from different
//! fields can never be mixed silently; doing so is a programming error and
//! panics.

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    /// `F_p`; `p` is checked to be prime at construction.
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match *self {
            Field::Rationals => {
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".to_string()));
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u32().unwrap_or(0);
                let d = den.mod_floor(&pb).to_u32().unwrap_or(0);
                if d == 0 {
                    return Err(Error::Parse(alloc::format!(
                        "denominator {den} vanishes mod {p}"
                    )));
                }
                let n = self.int(n as i64);
                let d = self.int(d as i64);
                Ok(n * d.inv().expect("nonzero residue is invertible"))
            }
        }
    }

    /// Parses `"-3"`, `"2/3"` and similar exact literals. Decimal points and
    /// exponents are rejected as inexact.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        if t.contains(['.', 'e', 'E']) && !t.is_empty() {
            return Err(Error::InexactScalar(t.to_string()));
        }
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(alloc::format!("bad scalar {t:?}")))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(alloc::format!("bad scalar {t:?}")))?;
        self.ratio(&num, &den)
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => Some(p as u64),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    /// All field elements in residue order (finite fields only).
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar> + '_> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..p).map(move |v| self.int(v as i64))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `Fp:<p>` and `fp:<p>`.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("fp:") {
            let p: u32 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad field {s:?}")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(alloc::format!("bad field {s:?}")))
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Always in lowest terms with positive denominator.
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    /// `self^e` for a non-negative exponent; `0^0 = 1`.
    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[track_caller]
fn same_modulus(a: u32, b: u32) -> u32 {
    assert_eq!(a, b, "scalars from different prime fields");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Residue {
                    value: ((*a as u64 + *b as u64) % p as u64) as u32,
                    modulus: p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Residue {
                    value: ((*a as u64 * *b as u64) % p as u64) as u32,
                    modulus: p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// Canonical string form used by the JSON formats.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_rationals_in_lowest_terms() {
        let q = Field::Rationals;
        assert_eq!(q.parse("2/4").unwrap(), q.parse("1/2").unwrap());
        assert_eq!(q.parse("3/-6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse(" -7 ").unwrap(), q.int(-7));
    }

    #[test]
    fn parse_rejects_floats() {
        let q = Field::Rationals;
        assert!(matches!(q.parse("0.5"), Err(Error::InexactScalar(_))));
        assert!(matches!(q.parse("1e3"), Err(Error::InexactScalar(_))));
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn prime_field_division() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), f.int(3));
        assert_eq!(f.parse("-1").unwrap(), f.int(4));
        assert!(f.parse("1/5").is_err());
        assert!(Field::prime(6).is_err());
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("fp:9".parse::<Field>().is_err());
    }

    proptest! {
        #[test]
        fn field_axioms_fp(a in 0u32..101, b in 0u32..101) {
            let f = Field::Prime(101);
            let (x, y) = (f.int(a as i64), f.int(b as i64));
            prop_assert!((&x + &(-&x)).is_zero());
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn field_axioms_q(a in -50i64..50, b in 1i64..50) {
            let f = Field::Rationals;
            let x = f.ratio(&BigInt::from(a), &BigInt::from(b)).unwrap();
            prop_assert!((&x - &x).is_zero());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
            prop_assert_eq!(f.parse(&x.to_string()).unwrap(), x);
        }
    }
}
