//! Exact scalar rings: the rationals and the dual numbers `Q[ε]/(ε²)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Commutative ring with exact equality.
///
/// Everything structure-constant based (coalgebras, rack products, axiom
/// checks) is generic over this trait so that the same checks can run over
/// dual numbers for first-order deformations.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    /// The same element as a field scalar, when the ring is a field.
    fn to_field(&self) -> Option<Scalar>;
    fn parse_str(s: &str) -> Result<Self, String>;
    /// Tag used in structure files.
    const RING_TAG: &'static str;
}

pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}

/// A reduced fraction `numerator / denominator` with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Scalar(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar(BigRational::from_integer(n.into()))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn binomial(n: u64, k: u64) -> Self {
        if k > n {
            return Scalar::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Scalar(BigRational::from_integer(acc))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Scalar {
    type Err = String;

    /// Accepts `p` or `p/q` with `q > 0` and `gcd(|p|, q) = 1`; anything
    /// non-reduced is rejected rather than normalised.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once('/') {
            None => parse_integer(s)
                .map(|n| Scalar(BigRational::from_integer(n)))
                .ok_or_else(|| format!("malformed scalar {s:?}")),
            Some((p, q)) => {
                let numer = parse_integer(p).ok_or_else(|| format!("malformed scalar {s:?}"))?;
                if q.starts_with('-') {
                    return Err(format!("scalar {s:?} has a non-positive denominator"));
                }
                let denom = parse_integer(q).ok_or_else(|| format!("malformed scalar {s:?}"))?;
                if denom.is_zero() {
                    return Err(format!("scalar {s:?} has a zero denominator"));
                }
                let g = num_integer_gcd(&numer, &denom);
                if !g.is_one() && !numer.is_zero() {
                    return Err(format!("scalar {s:?} is not reduced"));
                }
                if numer.is_zero() && !denom.is_one() {
                    return Err(format!("scalar {s:?} is not reduced (zero is 0)"));
                }
                Ok(Scalar(BigRational::new_raw(numer, denom)))
            }
        }
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.0 -= rhs.0;
    }
}

impl Ring for Scalar {
    const RING_TAG: &'static str = "Q";

    fn zero() -> Self {
        Scalar(BigRational::zero())
    }
    fn one() -> Self {
        Scalar(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_integer(n)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn to_field(&self) -> Option<Scalar> {
        Some(self.clone())
    }
    fn parse_str(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

impl Field for Scalar {
    fn inverse(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }
}

/// `value + infinitesimal·ε` with `ε² = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DualScalar {
    pub value: Scalar,
    pub infinitesimal: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, infinitesimal: Scalar) -> Self {
        DualScalar { value, infinitesimal }
    }

    pub fn eps() -> Self {
        DualScalar { value: Scalar::zero(), infinitesimal: Scalar::one() }
    }
}

impl fmt::Debug for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}@eps", self.value, self.infinitesimal)
    }
}

impl FromStr for DualScalar {
    type Err = String;

    /// `p/q+r/s@eps`; a bare rational is read as having zero ε-part.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.strip_suffix("@eps") {
            None => Ok(DualScalar::new(s.parse()?, Scalar::zero())),
            Some(body) => {
                let (value, inf) = body
                    .split_once('+')
                    .ok_or_else(|| format!("malformed dual scalar {s:?}"))?;
                Ok(DualScalar::new(value.parse()?, inf.parse()?))
            }
        }
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.value + rhs.value, self.infinitesimal + rhs.infinitesimal)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.value - rhs.value, self.infinitesimal - rhs.infinitesimal)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: DualScalar) -> DualScalar {
        let inf = self.value.clone() * rhs.infinitesimal + self.infinitesimal * rhs.value.clone();
        DualScalar::new(self.value * rhs.value, inf)
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.value, -self.infinitesimal)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: DualScalar) {
        self.value += rhs.value;
        self.infinitesimal += rhs.infinitesimal;
    }
}

impl SubAssign for DualScalar {
    fn sub_assign(&mut self, rhs: DualScalar) {
        self.value -= rhs.value;
        self.infinitesimal -= rhs.infinitesimal;
    }
}

impl Ring for DualScalar {
    const RING_TAG: &'static str = "Q[eps]";

    fn zero() -> Self {
        DualScalar::default()
    }
    fn one() -> Self {
        DualScalar::new(Scalar::one(), Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.infinitesimal.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        DualScalar::new(Scalar::from_integer(n), Scalar::zero())
    }
    fn from_scalar(s: &Scalar) -> Self {
        DualScalar::new(s.clone(), Scalar::zero())
    }
    fn to_field(&self) -> Option<Scalar> {
        None
    }
    fn parse_str(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

pub(crate) fn parse_scalar<R: Ring>(field: &str, s: &str) -> Result<R> {
    R::parse_str(s).map_err(|m| Error::parse(field, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(q(3, 1).to_string(), "3");
        assert_eq!(q(-2, 6).to_string(), "-1/3");
        assert_eq!("-1/3".parse::<Scalar>().unwrap(), q(-1, 3));
        assert_eq!("0".parse::<Scalar>().unwrap(), Scalar::zero());
        assert!("2/4".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
        assert!("0/5".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("1.5".parse::<Scalar>().is_err());
    }

    #[test]
    fn dual_display_and_parse() {
        let d = DualScalar::new(q(1, 2), q(-3, 1));
        assert_eq!(d.to_string(), "1/2+-3@eps");
        assert_eq!(d.to_string().parse::<DualScalar>().unwrap(), d);
        assert_eq!("-1/3+2/5@eps".parse::<DualScalar>().unwrap(), DualScalar::new(q(-1, 3), q(2, 5)));
        assert_eq!("7".parse::<DualScalar>().unwrap(), DualScalar::from_i64(7));
        assert!("1+2/4@eps".parse::<DualScalar>().is_err());
    }

    #[test]
    fn eps_squares_to_zero() {
        let e = DualScalar::eps();
        assert!((e.clone() * e).is_zero());
        assert_eq!(DualScalar::eps().to_field(), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(Scalar::binomial(5, 2), Scalar::from_integer(10));
        assert_eq!(Scalar::binomial(4, 0), Scalar::one());
        assert_eq!(Scalar::binomial(2, 3), Scalar::zero());
    }

    fn small() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..12).prop_map(|(p, d)| Scalar::new(p, d))
    }

    fn dual() -> impl Strategy<Value = DualScalar> {
        (small(), small()).prop_map(|(a, b)| DualScalar::new(a, b))
    }

    proptest! {
        #[test]
        fn scalar_ring_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() + Scalar::zero(), a.clone());
            prop_assert_eq!(a.clone() * b.clone(), b * a);
        }

        #[test]
        fn dual_ring_axioms(a in dual(), b in dual(), c in dual()) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() * DualScalar::one(), a.clone());
            let expected = DualScalar::new(
                a.value.clone() * b.value.clone(),
                a.value.clone() * b.infinitesimal.clone() + a.infinitesimal.clone() * b.value.clone(),
            );
            prop_assert_eq!(a * b, expected);
        }

        #[test]
        fn scalar_string_round_trip(a in small()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }
    }
}
