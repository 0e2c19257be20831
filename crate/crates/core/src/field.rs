//! Exact coordinate fields with involution.
//!
//! Three families are supported: the rationals and the Gaussian rationals
//! (with the identity and complex conjugation as involution) and the prime
//! fields GF(p). The statically typed [`Field`] trait drives the linear
//! algebra; [`FieldElem`] is the tagged, dynamically checked form used for
//! file formats and the command line.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(FieldTag, FieldTag),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("unknown field {0:?} (expected Q, Qi or GF(p))")]
    UnknownField(String),
    #[error("GF({0}) is not available for linear algebra (supported primes are below 100)")]
    UnsupportedPrime(u64),
}

/// Which coordinate field a value or model lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The rationals, identity involution.
    Q,
    /// Gaussian rationals Q(i), complex conjugation.
    Qi,
    /// GF(p), identity involution.
    Gf(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => f.write_str("Q"),
            FieldTag::Qi => f.write_str("Qi"),
            FieldTag::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "Q" | "q" => return Ok(FieldTag::Q),
            "Qi" | "qi" | "Q(i)" => return Ok(FieldTag::Qi),
            _ => {}
        }
        let digits = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("GF"))
            .ok_or_else(|| FieldError::UnknownField(s.to_string()))?;
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| FieldError::UnknownField(s.to_string()))?;
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldTag::Gf(p))
    }
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// A commutative field with an involutive automorphism, usable as
/// coordinates for subspace lattices.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn tag() -> FieldTag;

    /// The involution: conjugation on Q(i), identity elsewhere.
    fn involute(&self) -> Self;

    fn from_i64(n: i64) -> Self;

    /// Sign when the value lies in an ordered subfield (the rationals);
    /// `None` otherwise.
    fn real_sign(&self) -> Option<Ordering>;

    /// A small element, used for random subspace generation. Integer parts are
    /// drawn from `-range..=range`.
    fn sample_small<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self;

    fn to_elem(&self) -> FieldElem;

    fn from_elem(e: &FieldElem) -> Result<Self, FieldError>;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

pub type Rational = BigRational;
pub type GaussRational = Complex<BigRational>;

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl Field for BigRational {
    fn tag() -> FieldTag {
        FieldTag::Q
    }

    fn involute(&self) -> Self {
        self.clone()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn real_sign(&self) -> Option<Ordering> {
        Some(rational_sign(self))
    }

    fn sample_small<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self {
        Self::from_i64(rng.gen_range(-range..=range))
    }

    fn to_elem(&self) -> FieldElem {
        FieldElem::Rational(self.clone())
    }

    fn from_elem(e: &FieldElem) -> Result<Self, FieldError> {
        match e {
            FieldElem::Rational(r) => Ok(r.clone()),
            other => Err(FieldError::MixedFields(FieldTag::Q, other.tag())),
        }
    }
}

impl Field for Complex<BigRational> {
    fn tag() -> FieldTag {
        FieldTag::Qi
    }

    fn involute(&self) -> Self {
        self.conj()
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_i64(n), BigRational::zero())
    }

    fn real_sign(&self) -> Option<Ordering> {
        self.im.is_zero().then(|| rational_sign(&self.re))
    }

    fn sample_small<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self {
        let re = rng.gen_range(-range..=range);
        let im = rng.gen_range(-range..=range);
        Complex::new(BigRational::from_i64(re), BigRational::from_i64(im))
    }

    fn to_elem(&self) -> FieldElem {
        FieldElem::Gaussian(self.clone())
    }

    fn from_elem(e: &FieldElem) -> Result<Self, FieldError> {
        match e {
            FieldElem::Gaussian(z) => Ok(z.clone()),
            // rationals embed
            FieldElem::Rational(r) => Ok(Complex::new(r.clone(), BigRational::zero())),
            other => Err(FieldError::MixedFields(FieldTag::Qi, other.tag())),
        }
    }
}

/// Residue modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf<const P: u64>(u64);

impl<const P: u64> Gf<P> {
    const PRIME: () = assert!(is_prime(P), "GF modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Gf(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Gf(acc)
    }
}

impl<const P: u64> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gf((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gf((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gf(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Gf<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in GF({P})");
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Gf<P> {
    fn one() -> Self {
        Gf(1 % P)
    }
}

impl<const P: u64> Field for Gf<P> {
    fn tag() -> FieldTag {
        FieldTag::Gf(P)
    }

    fn involute(&self) -> Self {
        *self
    }

    fn from_i64(n: i64) -> Self {
        Gf::new(n)
    }

    fn real_sign(&self) -> Option<Ordering> {
        None
    }

    fn sample_small<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self {
        Gf::new(rng.gen_range(-range..=range))
    }

    fn to_elem(&self) -> FieldElem {
        FieldElem::Prime {
            value: self.0,
            modulus: P,
        }
    }

    fn from_elem(e: &FieldElem) -> Result<Self, FieldError> {
        match e {
            FieldElem::Prime { value, modulus } if *modulus == P => Ok(Gf(*value)),
            other => Err(FieldError::MixedFields(FieldTag::Gf(P), other.tag())),
        }
    }
}

/// Runs `$body` with `$F` bound to the concrete field type for `$tag`.
///
/// Prime fields are instantiated for the primes below 100.
#[macro_export]
macro_rules! with_field {
    ($tag:expr, $F:ident => $body:expr) => {{
        #[allow(unused_imports)]
        use $crate::field::{FieldError, FieldTag, Gf, GaussRational, Rational};
        match $tag {
            FieldTag::Q => {
                type $F = Rational;
                Ok($body)
            }
            FieldTag::Qi => {
                type $F = GaussRational;
                Ok($body)
            }
            FieldTag::Gf(p) => $crate::with_field!(@gf p, $F => $body;
                2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 53 59 61 67 71 73 79 83 89 97),
        }
    }};
    (@gf $p:ident, $F:ident => $body:expr; $($q:literal)*) => {
        match $p {
            $( $q => {
                type $F = Gf<$q>;
                Ok($body)
            } )*
            other => Err(FieldError::UnsupportedPrime(other)),
        }
    };
}

// ---------------------------------------------------------------------------
// Dynamically tagged elements

/// A field element carrying its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Gaussian(Complex<BigRational>),
    Prime { value: u64, modulus: u64 },
}

impl FieldElem {
    pub fn prime(value: i64, modulus: u64) -> Result<Self, FieldError> {
        if !is_prime(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(FieldElem::Prime {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        })
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            FieldElem::Rational(_) => FieldTag::Q,
            FieldElem::Gaussian(_) => FieldTag::Qi,
            FieldElem::Prime { modulus, .. } => FieldTag::Gf(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Gaussian(z) => z.is_zero(),
            FieldElem::Prime { value, .. } => *value == 0,
        }
    }

    pub fn involute(&self) -> FieldElem {
        match self {
            FieldElem::Gaussian(z) => FieldElem::Gaussian(z.conj()),
            other => other.clone(),
        }
    }

    fn binop(
        &self,
        other: &FieldElem,
        q: impl Fn(&BigRational, &BigRational) -> BigRational,
        qi: impl Fn(&Complex<BigRational>, &Complex<BigRational>) -> Complex<BigRational>,
        gf: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<FieldElem, FieldError> {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => Ok(FieldElem::Rational(q(a, b))),
            (FieldElem::Gaussian(a), FieldElem::Gaussian(b)) => Ok(FieldElem::Gaussian(qi(a, b))),
            (
                FieldElem::Prime { value: a, modulus: p },
                FieldElem::Prime { value: b, modulus: r },
            ) if p == r => Ok(FieldElem::Prime {
                value: gf(*a, *b, *p),
                modulus: *p,
            }),
            (a, b) => Err(FieldError::MixedFields(a.tag(), b.tag())),
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.binop(other, |a, b| a + b, |a, b| a + b, |a, b, p| (a + b) % p)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.binop(other, |a, b| a - b, |a, b| a - b, |a, b, p| (a + p - b) % p)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.binop(
            other,
            |a, b| a * b,
            |a, b| a * b,
            |a, b, p| ((a as u128 * b as u128) % p as u128) as u64,
        )
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        if self.tag() != other.tag() {
            return Err(FieldError::MixedFields(self.tag(), other.tag()));
        }
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.binop(
            other,
            |a, b| a / b,
            |a, b| a / b,
            |a, b, p| ((a as u128 * mod_pow(b, p - 2, p) as u128) % p as u128) as u64,
        )
    }

    /// Parses an element of the field `tag`. Accepted forms: `3/4`, `-2`,
    /// `1/2+3/4i`, `-i`, `3 mod 7` (or a bare integer for GF(p)).
    pub fn parse(text: &str, tag: FieldTag) -> Result<FieldElem, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        match tag {
            FieldTag::Q => parse_rational(&s)
                .map(FieldElem::Rational)
                .ok_or_else(|| err("expected a rational like 3/4")),
            FieldTag::Qi => parse_gaussian(&s)
                .map(FieldElem::Gaussian)
                .ok_or_else(|| err("expected a Gaussian rational like 1/2+3/4i")),
            FieldTag::Gf(p) => {
                let (num, modulus) = match s.split_once("mod") {
                    Some((n, m)) => (n, m.parse::<u64>().map_err(|_| err("bad modulus"))?),
                    None => (s.as_str(), p),
                };
                if modulus != p {
                    return Err(FieldError::MixedFields(tag, FieldTag::Gf(modulus)));
                }
                let v: BigInt = num.parse().map_err(|_| err("expected an integer residue"))?;
                let r = ((v % p) + p) % p;
                FieldElem::prime(r.to_i64().expect("residue fits"), p)
            }
        }
    }
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if n.is_empty() || d.is_empty() || d.starts_with(['-', '+']) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn parse_gaussian(s: &str) -> Option<Complex<BigRational>> {
    let Some(body) = s.strip_suffix('i') else {
        return parse_rational(s).map(|r| Complex::new(r, BigRational::zero()));
    };
    // split at the last sign that is not leading
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Complex::new(parse_rational(re)?, im))
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => write!(f, "{r}"),
            FieldElem::Gaussian(z) => {
                let im = match &z.im {
                    x if x.is_one() => String::from("i"),
                    x if (-x).is_one() => String::from("-i"),
                    x => format!("{x}i"),
                };
                if z.im.is_zero() {
                    write!(f, "{}", z.re)
                } else if z.re.is_zero() {
                    f.write_str(&im)
                } else if im.starts_with('-') {
                    write!(f, "{}{}", z.re, im)
                } else {
                    write!(f, "{}+{}", z.re, im)
                }
            }
            FieldElem::Prime { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalization_and_ops() {
        let a = FieldElem::rational(2, 4).unwrap();
        assert_eq!(a, FieldElem::Rational(q(1, 2)));
        assert_eq!(a.to_string(), "1/2");
        let z = FieldElem::Gaussian(Complex::new(q(1, 1), q(2, 1)));
        assert_eq!(z.involute(), FieldElem::Gaussian(Complex::new(q(1, 1), q(-2, 1))));
        let three = FieldElem::prime(3, 5).unwrap();
        let four = FieldElem::prime(4, 5).unwrap();
        assert_eq!(three.mul(&four).unwrap(), FieldElem::prime(2, 5).unwrap());
        assert_eq!(Gf::<5>::new(3) * Gf::<5>::new(4), Gf::<5>::new(2));
    }

    #[test]
    fn errors() {
        let a = FieldElem::rational(1, 3).unwrap();
        let b = FieldElem::prime(1, 3).unwrap();
        assert!(matches!(a.add(&b), Err(FieldError::MixedFields(..))));
        let zero = FieldElem::rational(0, 1).unwrap();
        assert_eq!(a.div(&zero), Err(FieldError::DivisionByZero));
        assert_eq!(FieldElem::prime(1, 4), Err(FieldError::NotPrime(4)));
        assert!(FieldElem::prime(1, 5)
            .unwrap()
            .add(&FieldElem::prime(1, 7).unwrap())
            .is_err());
        assert!(FieldElem::rational(1, 0).is_err());
    }

    #[test]
    fn textual_forms() {
        let p = |s: &str, t: FieldTag| FieldElem::parse(s, t).unwrap();
        assert_eq!(p("3/4", FieldTag::Q), FieldElem::Rational(q(3, 4)));
        assert_eq!(p("-6/8", FieldTag::Q), FieldElem::Rational(q(-3, 4)));
        assert_eq!(
            p("1/2+3/4i", FieldTag::Qi),
            FieldElem::Gaussian(Complex::new(q(1, 2), q(3, 4)))
        );
        assert_eq!(
            p("1-i", FieldTag::Qi),
            FieldElem::Gaussian(Complex::new(q(1, 1), q(-1, 1)))
        );
        assert_eq!(
            p("-i", FieldTag::Qi),
            FieldElem::Gaussian(Complex::new(q(0, 1), q(-1, 1)))
        );
        assert_eq!(
            p("2/3i", FieldTag::Qi),
            FieldElem::Gaussian(Complex::new(q(0, 1), q(2, 3)))
        );
        assert_eq!(
            p("-1/2-i", FieldTag::Qi),
            FieldElem::Gaussian(Complex::new(q(-1, 2), q(-1, 1)))
        );
        assert_eq!(p("3 mod 7", FieldTag::Gf(7)), FieldElem::prime(3, 7).unwrap());
        assert_eq!(p("-1", FieldTag::Gf(7)), FieldElem::prime(6, 7).unwrap());
        assert!(FieldElem::parse("3 mod 5", FieldTag::Gf(7)).is_err());
        assert!(FieldElem::parse("1/0", FieldTag::Q).is_err());
        assert!(FieldElem::parse("i", FieldTag::Q).is_err());
        assert!(FieldElem::parse("", FieldTag::Q).is_err());
        for s in ["1/2+3/4i", "-i", "i", "7", "-2/3-5i", "4i"] {
            assert_eq!(p(s, FieldTag::Qi).to_string(), s);
        }
        assert_eq!("GF(5)".parse::<FieldTag>().unwrap(), FieldTag::Gf(5));
        assert_eq!("Qi".parse::<FieldTag>().unwrap(), FieldTag::Qi);
        assert!("GF(6)".parse::<FieldTag>().is_err());
        assert!("R".parse::<FieldTag>().is_err());
    }

    #[test]
    fn dispatch() {
        let t: Result<FieldTag, FieldError> = with_field!(FieldTag::Gf(13), F => F::tag());
        assert_eq!(t.unwrap(), FieldTag::Gf(13));
        let t: Result<FieldTag, FieldError> = with_field!(FieldTag::Gf(101), F => F::tag());
        assert_eq!(t, Err(FieldError::UnsupportedPrime(101)));
    }

    fn small_q() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    fn small_qi() -> impl Strategy<Value = GaussRational> {
        (small_q(), small_q()).prop_map(|(a, b)| Complex::new(a, b))
    }

    fn small_gf() -> impl Strategy<Value = Gf<7>> {
        (0i64..7).prop_map(Gf::new)
    }

    fn field_axioms<F: Field>(a: F, b: F, c: F) -> Result<(), TestCaseError> {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(
            a.clone() * (b.clone() + c.clone()),
            a.clone() * b.clone() + a.clone() * c.clone()
        );
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() + (-a.clone()), F::zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(a.clone() * inv, F::one());
        }
        prop_assert_eq!(a.involute().involute(), a.clone());
        prop_assert_eq!(
            (a.clone() * b.clone()).involute(),
            b.involute() * a.involute()
        );
        prop_assert_eq!((a.clone() + b.clone()).involute(), a.involute() + b.involute());
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rational_axioms(a in small_q(), b in small_q(), c in small_q()) {
            field_axioms(a.clone(), b, c)?;
            if (a.clone() * a.involute()).is_zero() {
                prop_assert!(a.is_zero());
            }
        }

        #[test]
        fn gaussian_axioms(a in small_qi(), b in small_qi(), c in small_qi()) {
            field_axioms(a.clone(), b, c)?;
            if (a.clone() * a.involute()).is_zero() {
                prop_assert!(a.is_zero());
            }
            prop_assert!((a.clone() * a.involute()).im.is_zero());
        }

        #[test]
        fn prime_axioms(a in small_gf(), b in small_gf(), c in small_gf()) {
            field_axioms(a, b, c)?;
        }

        #[test]
        fn dynamic_matches_static(a in small_qi(), b in small_qi()) {
            let (x, y) = (a.to_elem(), b.to_elem());
            prop_assert_eq!(x.add(&y).unwrap(), (a.clone() + b.clone()).to_elem());
            prop_assert_eq!(x.mul(&y).unwrap(), (a.clone() * b.clone()).to_elem());
            if !b.is_zero() {
                prop_assert_eq!(x.div(&y).unwrap(), (a.clone() / b.clone()).to_elem());
            }
            let printed = x.to_string();
            prop_assert_eq!(FieldElem::parse(&printed, FieldTag::Qi).unwrap(), x);
        }
    }
}
