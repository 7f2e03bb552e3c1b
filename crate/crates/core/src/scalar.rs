//! Exact coefficient fields.
//!
//! Everything in this crate is generic over [`Scalar`], an exact field with
//! decidable equality. Two implementations ship: the rationals
//! ([`Rational`]) and the Gaussian rationals ([`Gaussian`]), which carry an
//! imaginary unit and are needed wherever complex-linear operators appear.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// An exact field of characteristic zero.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The imaginary unit, when the field contains one.
    fn imaginary_unit() -> Option<Self>;

    /// Complex conjugation; the identity on real fields.
    fn conj(&self) -> Self;

    /// `Some` when the value is real.
    fn to_rational(&self) -> Option<Rational>;

    /// True when the printed form needs parentheses as a product factor.
    fn is_compound(&self) -> bool {
        false
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// A field containing `i` with `i^2 = -1`.
pub trait ComplexScalar: Scalar {
    fn i() -> Self {
        Self::imaginary_unit().expect("complex scalar without imaginary unit")
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Zero for Gaussian {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gaussian {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Add for Gaussian {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Gaussian {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for Gaussian {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let n = rhs.norm_sqr();
        let num = self * rhs.conj();
        Self::new(num.re / &n, num.im / &n)
    }
}

impl Neg for Gaussian {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for Gaussian {
    fn from_rational(r: Rational) -> Self {
        Self::real(r)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(Self::from_ints(0, 1))
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    fn to_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }

    fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

impl ComplexScalar for Gaussian {}

impl From<Rational> for Gaussian {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: &Rational| {
            if im.is_one() {
                write!(f, "i")
            } else if (-im).is_one() {
                write!(f, "-i")
            } else {
                write!(f, "{im}*i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => imag(f, &self.im),
            (false, false) => {
                write!(f, "{}", self.re)?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                imag(f, &self.im)
            }
        }
    }
}

impl Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

/// Parses `n` or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn gaussian_field_ops() {
        let i = Gaussian::i();
        assert_eq!(i.clone() * i.clone(), -Gaussian::one());
        let z = Gaussian::new(q(1, 2), q(3, 1));
        let w = Gaussian::new(q(-2, 1), q(1, 3));
        assert_eq!((z.clone() / w.clone()) * w.clone(), z);
        assert_eq!(z.clone() * z.inv(), Gaussian::one());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn display() {
        assert_eq!(Gaussian::from_ints(0, -2).to_string(), "-2*i");
        assert_eq!(Gaussian::from_ints(1, -1).to_string(), "1-i");
        assert_eq!(Gaussian::new(q(1, 2), q(0, 1)).to_string(), "1/2");
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
