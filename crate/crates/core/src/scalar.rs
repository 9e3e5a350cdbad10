//! Exact field elements: arbitrary-precision rationals or residues modulo a prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Radius of the integer range used for rational covector draws.
pub const RATIONAL_DRAW_RADIUS: u64 = 1024;

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(Field::DEFAULT_PRIME)
    }
}

impl Field {
    /// Largest prime below 2^31 (it is 2^31 - 1 itself).
    pub const DEFAULT_PRIME: u64 = 2_147_483_647;

    /// A prime field, after checking that `p` is prime and fits the
    /// single-word arithmetic (`p < 2^63`).
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..1 << 63).contains(&p) || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Field::Prime(p))
    }

    /// The tag used in documents: `"Q"` or `"gfp"`.
    pub fn tag(&self) -> &'static str {
        match self {
            Field::Rational => "Q",
            Field::Prime(_) => "gfp",
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                Scalar::Prime {
                    value: r.to_u64().expect("residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// Embeds a rational number; fails over GF(p) when the denominator is
    /// divisible by p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                den.inv()
                    .map(|d| &num * &d)
                    .ok_or_else(|| Error::Parse(format!("denominator of {q} vanishes modulo the field")))
            }
        }
    }

    /// Parses `"p"`, `"-p"` or `"p/q"` into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }

    /// A random element: uniform over GF(p), or uniform in
    /// `-radius..=radius` over the rationals.
    pub fn sample(&self, rng: &mut SplitMix64, radius: u64) -> Scalar {
        match self {
            Field::Rational => self.from_i64(rng.symmetric(radius)),
            Field::Prime(p) => Scalar::Prime {
                value: rng.below(*p),
                modulus: *p,
            },
        }
    }

    /// Number of values `sample` can return with the given radius.
    pub fn sample_space(&self, radius: u64) -> BigInt {
        match self {
            Field::Rational => BigInt::from(2 * radius + 1),
            Field::Prime(p) => BigInt::from(*p),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid scalar literal {text:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// An element of a [`Field`].
///
/// Rationals are kept in lowest terms with positive denominator (by
/// `BigRational`); residues are kept in `0..p`. Mixing elements of two
/// different fields is an invariant violation and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => {
                let p = *modulus as u128;
                let mut acc = 1u128;
                let mut base = *value as u128;
                let mut e = modulus - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                Scalar::Prime {
                    value: acc as u64,
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    /// Integer value when the scalar is an integer (always true over GF(p)).
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.numer().clone()),
            Scalar::Rational(_) => None,
            Scalar::Prime { value, .. } => Some(BigInt::from(*value)),
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) {
    if a.field() != b.field() {
        panic!("field mismatch: {:?} vs {:?}", a.field(), b.field());
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u128 + *modulus as u128 - *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rationals_normalize() {
        let q = Field::Rational.parse_scalar("2/4").unwrap();
        assert_eq!(q.to_string(), "1/2");
        let q = Field::Rational.parse_scalar("3/-6").unwrap();
        assert_eq!(q.to_string(), "-1/2");
        assert!(Field::Rational.parse_scalar("1/0").is_err());
        assert!(Field::Rational.parse_scalar("x").is_err());
    }

    #[test]
    fn prime_residues_are_canonical() {
        let f = Field::Prime(7);
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "4");
        assert!(f.parse_scalar("1/7").is_err());
        let x = f.from_i64(3);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn default_modulus_is_prime() {
        assert!(Field::prime(Field::DEFAULT_PRIME).is_ok());
        assert!(Field::prime(2_147_483_649).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime((1u64 << 61) - 1).is_ok());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::Prime(5).one();
    }

    proptest! {
        #[test]
        fn add_then_sub_is_identity(a in -1000i64..1000, b in -1000i64..1000, n in 1i64..50, d in 1i64..50) {
            for field in [Field::Rational, Field::default()] {
                let x = field.from_rational(&BigRational::new(a.into(), n.into())).unwrap();
                let y = field.from_rational(&BigRational::new(b.into(), d.into())).unwrap();
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                if !y.is_zero() {
                    prop_assert_eq!((&x * &y).checked_div(&y).unwrap(), x);
                }
            }
        }
    }
}
