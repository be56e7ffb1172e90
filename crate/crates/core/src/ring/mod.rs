//! Exact arithmetic over towers of quadratic extensions of `Z[1/2]`.
//!
//! Every amplitude, weight and H-box label in the crate is a [`RingElement`].
//! Floats only appear through [`RingElement::embed_float`], which is for
//! display and sampling, never for deciding equality.

mod dyadic;
mod matrix;
mod text;
mod tower;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use thiserror::Error;

pub use dyadic::Dyadic;
pub use matrix::RingMatrix;
pub use text::format_coeffs;
pub use tower::{build_from_specs, GeneratorSpec, Tower, TowerBuilder, TowerSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("generator `{name}` appears to lie in the lower ring (it equals {witness}); pass the override flag to accept it")]
    DegenerateGenerator { name: String, witness: String },
    #[error("tower has no primitive 2^{0}-th root of unity")]
    MissingRoot(u32),
    #[error("tower does not contain sqrt(2)")]
    MissingSqrt2,
    #[error("tower has no imaginary unit, so {0} has no imaginary part in it")]
    NoImaginaryUnit(String),
    #[error("{0} is not a unit with a known inverse")]
    NotInvertible(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// `x * y` on raw coefficient vectors of equal length `2^t`, reducing with
/// `squares[j] = a_j^2` (each of length `2^j`).
pub(crate) fn mul_coeffs(squares: &[Vec<Dyadic>], x: &[Dyadic], y: &[Dyadic]) -> Vec<Dyadic> {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    let half = n / 2;
    let t = n.trailing_zeros() as usize - 1;
    let (x0, x1) = x.split_at(half);
    let (y0, y1) = y.split_at(half);
    let x1z = all_zero(x1);
    let y1z = all_zero(y1);
    let lower = &squares[..t];

    let mut out = Vec::with_capacity(n);
    match (x1z, y1z) {
        (true, true) => {
            out.extend(mul_coeffs(lower, x0, y0));
            out.resize(n, Dyadic::zero());
        }
        (true, false) => {
            out.extend(mul_coeffs(lower, x0, y0));
            out.extend(mul_coeffs(lower, x0, y1));
        }
        (false, true) => {
            out.extend(mul_coeffs(lower, x0, y0));
            out.extend(mul_coeffs(lower, x1, y0));
        }
        (false, false) => {
            // three recursive products instead of four
            let p0 = mul_coeffs(lower, x0, y0);
            let p1 = mul_coeffs(lower, x1, y1);
            let sx = add_coeffs(x0, x1);
            let sy = add_coeffs(y0, y1);
            let mut mid = mul_coeffs(lower, &sx, &sy);
            for ((m, a), b) in mid.iter_mut().zip(&p0).zip(&p1) {
                *m -= a;
                *m -= b;
            }
            let p1s = mul_coeffs(lower, &p1, &squares[t]);
            out.extend(add_coeffs(&p0, &p1s));
            out.extend(mid);
        }
    }
    out
}

fn all_zero(x: &[Dyadic]) -> bool {
    x.iter().all(Dyadic::is_zero)
}

fn add_coeffs(x: &[Dyadic], y: &[Dyadic]) -> Vec<Dyadic> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// An exact element of a quadratic ring tower.
#[derive(Clone)]
pub struct RingElement {
    tower: Tower,
    coeffs: Vec<Dyadic>,
}

impl RingElement {
    pub(crate) fn from_parts(tower: Tower, coeffs: Vec<Dyadic>) -> Self {
        debug_assert_eq!(coeffs.len(), tower.dim());
        RingElement { tower, coeffs }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Coefficients over the basis monomials, indexed by generator bitmask.
    pub fn coeffs(&self) -> &[Dyadic] {
        &self.coeffs
    }

    pub fn coefficient(&self, mask: usize) -> &Dyadic {
        &self.coeffs[mask]
    }

    pub fn is_zero(&self) -> bool {
        all_zero(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && all_zero(&self.coeffs[1..])
    }

    /// The value as a plain dyadic, if no generator appears.
    pub fn as_dyadic(&self) -> Option<&Dyadic> {
        all_zero(&self.coeffs[1..]).then_some(&self.coeffs[0])
    }

    /// True when some monomial involving generator `j` or a later one has a
    /// nonzero coefficient.
    pub fn involves_generators_from(&self, j: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .any(|(mask, c)| mask >> j != 0 && !c.is_zero())
    }

    fn check(&self, other: &RingElement) -> Result<(), RingError> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(RingError::TowerMismatch)
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(self.with(add_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check(other)?;
        Ok(self.with(mul_coeffs(
            self.tower.squares(),
            &self.coeffs,
            &other.coeffs,
        )))
    }

    fn with(&self, coeffs: Vec<Dyadic>) -> RingElement {
        RingElement {
            tower: self.tower.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, d: &Dyadic) -> RingElement {
        self.with(self.coeffs.iter().map(|c| c * d).collect())
    }

    pub fn div_pow2(&self, k: u32) -> RingElement {
        self.with(self.coeffs.iter().map(|c| c.div_pow2(k)).collect())
    }

    pub fn mul_pow2(&self, k: u32) -> RingElement {
        self.with(self.coeffs.iter().map(|c| c.mul_pow2(k)).collect())
    }

    pub fn pow(&self, mut e: u32) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.tower.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugate, applied through the tower's generator map.
    pub fn conj(&self) -> RingElement {
        self.with(tower::conj_coeffs(self.tower.spec(), &self.coeffs))
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(x + conj x) / 2`.
    pub fn real_part(&self) -> RingElement {
        (self + &self.conj()).div_pow2(1)
    }

    /// `(x - conj x) / 2i`.
    pub fn imag_part(&self) -> Result<RingElement, RingError> {
        let diff = self - &self.conj();
        if diff.is_zero() {
            return Ok(self.tower.zero());
        }
        let i = self
            .tower
            .i()
            .map_err(|_| RingError::NoImaginaryUnit(self.to_string()))?;
        Ok((&diff * &(-&i)).div_pow2(1))
    }

    /// `|x|^2 = x * conj x`.
    pub fn norm_sqr(&self) -> RingElement {
        self * &self.conj()
    }

    /// Float image under the tower's embedding. Diagnostic only.
    pub fn embed_float(&self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(self.tower.monomial_floats())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| m * c.to_f64())
            .sum()
    }

    /// Sign of a real element, decided by its float image.
    pub fn real_sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(d) = self.as_dyadic() {
            return d.signum();
        }
        let f = self.embed_float().re;
        if f > 0.0 {
            1
        } else if f < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Exact inverse of a unit.
    ///
    /// Each generator `a_j` spans a quadratic extension, so `a_j -> -a_j` is
    /// an automorphism of the subring up to `j`. Multiplying by the flipped
    /// element from the top generator down yields a dyadic norm, which is
    /// invertible iff it is `+-2^e`.
    pub fn checked_inverse(&self) -> Result<RingElement, RingError> {
        let fail = || RingError::NotInvertible(self.to_string());
        let mut y = self.clone();
        let mut cofactor = self.tower.one();
        for j in (0..self.tower.len()).rev() {
            let flipped = y.with(
                y.coeffs
                    .iter()
                    .enumerate()
                    .map(|(mask, c)| if mask >> j & 1 == 1 { -c } else { c.clone() })
                    .collect(),
            );
            y = &y * &flipped;
            cofactor = &cofactor * &flipped;
        }
        let n = y.as_dyadic().ok_or_else(fail)?;
        let e = n.power_of_two_exponent().ok_or_else(fail)?;
        let mag = if e >= 0 {
            Dyadic::new(1, e as u32)
        } else {
            Dyadic::one().mul_pow2((-e) as u32)
        };
        Ok(cofactor.scale(&if n.signum() < 0 { -mag } else { mag }))
    }

    /// Re-expresses the element in `target`, whose leading generators must
    /// coincide with this element's tower.
    pub fn lift(&self, target: &Tower) -> Result<RingElement, RingError> {
        if *target == self.tower {
            return Ok(self.clone());
        }
        let src = self.tower.spec().generators();
        let dst = target.spec().generators();
        let dim = self.tower.dim();
        let prefix = src.len() <= dst.len()
            && src.iter().zip(dst).all(|(a, b)| {
                a.name == b.name
                    && a.float_embedding == b.float_embedding
                    && a.square[..dim] == b.square[..dim]
                    && a.conjugate[..dim] == b.conjugate[..dim]
                    && all_zero(&b.square[dim..])
                    && all_zero(&b.conjugate[dim..])
            });
        if !prefix {
            return Err(RingError::TowerMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(target.dim(), Dyadic::zero());
        Ok(RingElement::from_parts(target.clone(), coeffs))
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.tower == other.tower
    }
}

impl Eq for RingElement {}

impl Hash for RingElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.tower.names().iter().map(|s| s.to_string()).collect();
        f.write_str(&format_coeffs(&self.coeffs, &names))
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a> $tr<&'a RingElement> for &'a RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &'a RingElement) -> RingElement {
                self.$try(rhs)
                    .expect("ring operation across different towers")
            }
        }
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        assert!(
            self.tower == rhs.tower,
            "ring operation across different towers"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        assert!(
            self.tower == rhs.tower,
            "ring operation across different towers"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl MulAssign<&RingElement> for RingElement {
    fn mul_assign(&mut self, rhs: &RingElement) {
        *self = &*self * rhs;
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.with(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct() -> Tower {
        Tower::clifford_t()
    }

    #[test]
    fn conj_w_times_w_is_one() {
        let t = ct();
        let w = t.generator(1);
        assert!((&w.conj() * &w).is_one());
    }

    #[test]
    fn small_products() {
        let t = ct();
        let i = t.generator(0);
        let w = t.generator(1);
        let x = &w - &(&i * &w);
        // (w(1 - i))^2 = i * (1 - i)^2 = i * (-2i) = 2
        assert_eq!(&x * &x, t.from_int(2));
        let s = &w + &w.conj();
        assert_eq!(&s * &s, t.from_int(2));
        let h = s.div_pow2(1);
        assert_eq!(&h * &h, t.ratio(1, 1));
        assert!((s.embed_float().re - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn real_and_imag_parts() {
        let t = ct();
        let i = t.generator(0);
        let w = t.generator(1);
        assert!(i.real_part().is_zero());
        let im = w.imag_part().unwrap();
        assert!(im.is_real());
        assert!((im.embed_float().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(&w.real_part() + &(&i * &im), w);
        assert!(t.one().imag_part().unwrap().is_zero());
    }

    #[test]
    fn imag_part_without_i() {
        let t = TowerBuilder::new()
            .generator("r", "2", "r", Complex64::new(2f64.sqrt(), 0.0))
            .build()
            .unwrap();
        assert!(t.generator(0).imag_part().unwrap().is_zero());
    }

    #[test]
    fn one_norm_float() {
        let t = ct();
        let v = &t.sqrt2().unwrap().mul_pow2(1) - &t.one();
        assert!((v.embed_float().re - 1.8284271247461903).abs() < 1e-12);
    }

    #[test]
    fn inverses() {
        let t = ct();
        let w = t.generator(1);
        assert!((&w * &w.checked_inverse().unwrap()).is_one());
        let s = t.sqrt2().unwrap();
        assert!((&s * &s.checked_inverse().unwrap()).is_one());
        let h = t.ratio(-1, 3);
        assert_eq!(h.checked_inverse().unwrap(), t.from_int(-8));
        assert!(t.from_int(3).checked_inverse().is_err());
        assert!(t.zero().checked_inverse().is_err());
        // 1 + w has norm 2 + sqrt 2, not dyadic, yet is a unit
        let u = &t.one() + &w;
        assert!((&u * &u.checked_inverse().unwrap()).is_one());
        let silver = &t.one() + &(&w - &w.pow(3));
        assert!((&silver * &silver.checked_inverse().unwrap()).is_one());
        assert!((&t.from_int(1) + &(&w * &w.pow(2)))
            .checked_inverse()
            .is_ok());
        assert!((&t.from_int(3) + &w).checked_inverse().is_err());
    }

    #[test]
    fn lift_into_bigger_tower() {
        let small = ct();
        let big = Tower::cyclotomic(5).unwrap();
        let w = small.generator(1);
        let lw = w.lift(&big).unwrap();
        assert_eq!(lw, big.generator(1));
        assert!(big.generator(2).lift(&small).is_err());
    }

    #[test]
    fn mismatched_towers() {
        let a = ct().one();
        let b = Tower::cyclotomic(4).unwrap().one();
        assert_eq!(a.try_add(&b), Err(RingError::TowerMismatch));
    }
}
