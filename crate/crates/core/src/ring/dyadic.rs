//! Dyadic rationals `n / 2^k` with arbitrary-precision numerators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;

/// An element of `Z[1/2]`.
///
/// Always stored reduced: the numerator is odd unless the exponent is zero,
/// and zero is stored as `0 / 2^0`. Equality is therefore field-wise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    numerator: BigInt,
    denom_log2: u32,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, denom_log2: u32) -> Self {
        let mut d = Dyadic {
            numerator: numerator.into(),
            denom_log2,
        };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            numerator: BigInt::from(n),
            denom_log2: 0,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denom_log2(&self) -> u32 {
        self.denom_log2
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.denom_log2 == 0 && self.numerator.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.denom_log2 == 0
    }

    pub fn signum(&self) -> i32 {
        if self.numerator.is_positive() {
            1
        } else if self.numerator.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            numerator: self.numerator.abs(),
            denom_log2: self.denom_log2,
        }
    }

    /// `self / 2^k`.
    pub fn div_pow2(&self, k: u32) -> Self {
        Dyadic::new(self.numerator.clone(), self.denom_log2 + k)
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: u32) -> Self {
        if k <= self.denom_log2 {
            Dyadic {
                numerator: self.numerator.clone(),
                denom_log2: self.denom_log2 - k,
            }
        } else {
            Dyadic {
                numerator: &self.numerator << (k - self.denom_log2),
                denom_log2: 0,
            }
        }
    }

    /// Returns `Some(e)` when `self == ±2^e` for some (possibly negative) `e`.
    pub fn power_of_two_exponent(&self) -> Option<i64> {
        let m = self.numerator.abs();
        if m.is_zero() {
            return None;
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        if (&m >> tz).is_one() {
            Some(tz as i64 - self.denom_log2 as i64)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        if n.is_finite() {
            return n * (-(self.denom_log2 as f64)).exp2();
        }
        // Numerator too large for f64: drop low bits first.
        let bits = self.numerator.bits();
        let drop = bits.saturating_sub(60);
        let head = (&self.numerator >> drop).to_f64().unwrap_or(f64::NAN);
        head * (drop as f64 - self.denom_log2 as f64).exp2()
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.denom_log2 = 0;
            return;
        }
        if self.denom_log2 == 0 {
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.denom_log2 as u64);
        if shift > 0 {
            self.numerator >>= shift;
            self.denom_log2 -= shift as u32;
        }
    }

    fn add_ref(&self, other: &Dyadic) -> Dyadic {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (numerator, denom_log2) = match self.denom_log2.cmp(&other.denom_log2) {
            Ordering::Equal => (&self.numerator + &other.numerator, self.denom_log2),
            Ordering::Greater => (
                &self.numerator + (&other.numerator << (self.denom_log2 - other.denom_log2)),
                self.denom_log2,
            ),
            Ordering::Less => (
                (&self.numerator << (other.denom_log2 - self.denom_log2)) + &other.numerator,
                other.denom_log2,
            ),
        };
        Dyadic::new(numerator, denom_log2)
    }

    fn mul_ref(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // odd * odd is odd, so no reduction is needed unless an exponent was 0
        Dyadic::new(
            &self.numerator * &other.numerator,
            self.denom_log2 + other.denom_log2,
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        self.add_ref(rhs)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        self.add_ref(&rhs)
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = self.add_ref(rhs);
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self.add_ref(&-rhs)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self.add_ref(&-rhs)
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = self.add_ref(&-rhs);
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        self.mul_ref(rhs)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        self.mul_ref(&rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -&self.numerator,
            denom_log2: self.denom_log2,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_log2 == 0 {
            write!(f, "{}", self.numerator)
        } else {
            let den = BigInt::one() << self.denom_log2;
            write!(f, "{}/{}", self.numerator, den)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = RingError;

    /// Accepts `n` or `n/d` where `d` is a power of two.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RingError::Parse(format!("invalid dyadic literal `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let numerator: BigInt = num.parse().map_err(|_| bad())?;
        let denom_log2 = match den {
            None => 0,
            Some(d) => {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                let tz = d.trailing_zeros().unwrap_or(0);
                if !(&d >> tz).is_one() {
                    return Err(RingError::Parse(format!(
                        "denominator of `{s}` is not a power of two"
                    )));
                }
                tz as u32
            }
        };
        Ok(Dyadic::new(numerator, denom_log2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(6, 3);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.denom_log2(), 2);
        let z = Dyadic::new(0, 7);
        assert_eq!(z.denom_log2(), 0);
        assert_eq!(Dyadic::new(4, 1), Dyadic::from_int(2));
    }

    #[test]
    fn halves_sum_to_one() {
        let h = Dyadic::new(1, 1);
        assert!((&h + &h).is_one());
        assert_eq!(Dyadic::from_int(30).div_pow2(1), Dyadic::from_int(15));
    }

    #[test]
    fn parse_and_display() {
        let d: Dyadic = "-3/8".parse().unwrap();
        assert_eq!(d, Dyadic::new(-3, 3));
        assert_eq!(d.to_string(), "-3/8");
        assert_eq!("6/4".parse::<Dyadic>().unwrap().to_string(), "3/2");
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn power_of_two_detection() {
        assert_eq!(Dyadic::new(1, 3).power_of_two_exponent(), Some(-3));
        assert_eq!(Dyadic::from_int(-8).power_of_two_exponent(), Some(3));
        assert_eq!(Dyadic::from_int(3).power_of_two_exponent(), None);
        assert_eq!(Dyadic::zero().power_of_two_exponent(), None);
    }

    #[test]
    fn ordering_and_float() {
        assert!(Dyadic::new(1, 1) < Dyadic::new(3, 2));
        assert_eq!(Dyadic::new(-5, 2).to_f64(), -1.25);
        let huge = Dyadic::new(BigInt::one() << 2000u32, 1990);
        assert_eq!(huge.to_f64(), 1024.0);
    }
}
