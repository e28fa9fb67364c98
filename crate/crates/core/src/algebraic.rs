//! Exact arithmetic in the real multiquadratic field Q(√2, √3, √5).
//!
//! Every element is a rational combination of the eight square roots
//! `√d` for the squarefree divisors `d` of 30. This field contains all
//! Gram entries `-cos(π/k)` for `k ≤ 6`, which is what the diagram
//! classifier and the exact minor checks in the solver need.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes whose square roots generate the field, one bit each.
const PRIMES: [i64; 3] = [2, 3, 5];

/// Radicand of the basis element with the given prime mask.
const fn radicand(mask: usize) -> i64 {
    let mut r = 1;
    if mask & 1 != 0 {
        r *= 2;
    }
    if mask & 2 != 0 {
        r *= 3;
    }
    if mask & 4 != 0 {
        r *= 5;
    }
    r
}

/// Public coordinate order `{1, √2, √3, √5, √6, √10, √15, √30}` mapped to
/// internal prime masks.
const PUBLIC_ORDER: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// An element of Q(√2, √3, √5).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicReal {
    // Indexed by prime mask: bit 0 = √2, bit 1 = √3, bit 2 = √5.
    c: [BigRational; 8],
}

impl AlgebraicReal {
    pub fn zero() -> Self {
        Self {
            c: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut out = Self::zero();
        out.c[0] = q;
        out
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `num / den` as a field element.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `q · √d` for a squarefree divisor `d` of 30.
    ///
    /// Panics if `d` is not one of 1, 2, 3, 5, 6, 10, 15, 30.
    pub fn sqrt_term(q: BigRational, d: i64) -> Self {
        let mask = (0..8)
            .find(|&m| radicand(m) == d)
            .unwrap_or_else(|| panic!("√{d} is not a basis element of Q(√2,√3,√5)"));
        let mut out = Self::zero();
        out.c[mask] = q;
        out
    }

    /// `√d` for a squarefree divisor `d` of 30.
    pub fn sqrt(d: i64) -> Self {
        Self::sqrt_term(BigRational::one(), d)
    }

    /// Build from coordinates in the order `{1, √2, √3, √5, √6, √10, √15, √30}`.
    pub fn from_coordinates(coords: [BigRational; 8]) -> Self {
        let mut out = Self::zero();
        for (public, q) in coords.into_iter().enumerate() {
            out.c[PUBLIC_ORDER[public]] = q;
        }
        out
    }

    /// Coordinates in the order `{1, √2, √3, √5, √6, √10, √15, √30}`.
    pub fn coordinates(&self) -> [BigRational; 8] {
        std::array::from_fn(|public| self.c[PUBLIC_ORDER[public]].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    /// Galois conjugate flipping the sign of `√p` for the prime with index `bit`.
    fn conjugate(&self, bit: usize) -> Self {
        let mut out = self.clone();
        for (m, q) in out.c.iter_mut().enumerate() {
            if m & (1 << bit) != 0 {
                *q = -q.clone();
            }
        }
        out
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut num = Self::one();
        let mut den = self.clone();
        for bit in (0..PRIMES.len()).rev() {
            let conj = den.conjugate(bit);
            num = &num * &conj;
            den = &den * &conj;
        }
        let norm = den
            .as_rational()
            .expect("norm of a multiquadratic element is rational")
            .clone();
        Some(num.scale(&norm.recip()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            c: std::array::from_fn(|m| &self.c[m] * q),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self * &inv)
    }

    /// Nearest double. Not used for any sign decision.
    pub fn to_f64(&self) -> f64 {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(m, q)| q.to_f64().unwrap_or(f64::NAN) * (radicand(m) as f64).sqrt())
            .sum()
    }

    /// Rational enclosure `[lo, hi]` of the value, each square root bounded
    /// to within `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (m, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let (r_lo, r_hi) = if m == 0 {
                (BigRational::one(), BigRational::one())
            } else {
                let n = BigInt::from(radicand(m)) * &scale * &scale;
                let s = n.sqrt();
                (
                    BigRational::new(s.clone(), scale.clone()),
                    BigRational::new(s + 1, scale.clone()),
                )
            };
            if q.is_positive() {
                lo += q * &r_lo;
                hi += q * &r_hi;
            } else {
                lo += q * &r_hi;
                hi += q * &r_lo;
            }
        }
        (lo, hi)
    }

    /// Exact sign. Zero is decided from the coordinates; nonzero values are
    /// separated from zero by enclosures of doubling precision.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return match q.numer().sign() {
                Sign::Minus => Ordering::Less,
                Sign::NoSign => Ordering::Equal,
                Sign::Plus => Ordering::Greater,
            };
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Determinant of a square matrix by fraction-producing elimination.
    pub fn determinant(rows: &[Vec<AlgebraicReal>]) -> AlgebraicReal {
        let n = rows.len();
        let mut a: Vec<Vec<AlgebraicReal>> = rows.to_vec();
        let mut det = AlgebraicReal::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return AlgebraicReal::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let inv = a[col][col].inverse().expect("pivot is nonzero");
            det = &det * &a[col][col];
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] * &inv;
                for k in col..n {
                    let delta = &factor * &a[col][k];
                    a[r][k] = &a[r][k] - &delta;
                }
            }
        }
        det
    }
}

impl Default for AlgebraicReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a AlgebraicReal> for &'a AlgebraicReal {
    type Output = AlgebraicReal;
    fn add(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        AlgebraicReal {
            c: std::array::from_fn(|m| &self.c[m] + &rhs.c[m]),
        }
    }
}

impl<'a> Sub<&'a AlgebraicReal> for &'a AlgebraicReal {
    type Output = AlgebraicReal;
    fn sub(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        AlgebraicReal {
            c: std::array::from_fn(|m| &self.c[m] - &rhs.c[m]),
        }
    }
}

impl<'a> Mul<&'a AlgebraicReal> for &'a AlgebraicReal {
    type Output = AlgebraicReal;
    fn mul(self, rhs: &AlgebraicReal) -> AlgebraicReal {
        let mut out = AlgebraicReal::zero();
        for (m1, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m2, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // √r1 · √r2 = (shared primes) · √(r1 r2 / shared²)
                let shared = radicand(m1 & m2);
                out.c[m1 ^ m2] += a * b * BigInt::from(shared);
            }
        }
        out
    }
}

impl Add for AlgebraicReal {
    type Output = AlgebraicReal;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for AlgebraicReal {
    type Output = AlgebraicReal;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for AlgebraicReal {
    type Output = AlgebraicReal;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> Self {
        AlgebraicReal {
            c: self.c.map(|q| -q),
        }
    }
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -(self.clone())
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for &m in &PUBLIC_ORDER {
            let q = &self.c[m];
            if q.is_zero() {
                continue;
            }
            let (sign, mag) = if q.is_negative() { ("-", -q.clone()) } else { ("+", q.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (m, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "√{}", radicand(m))?,
                (_, false) => write!(f, "{mag}·√{}", radicand(m))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicReal({self})")
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
    fn square_roots_square_to_integers() {
        for d in [2, 3, 5, 6, 10, 15, 30] {
            let r = AlgebraicReal::sqrt(d);
            assert_eq!(&r * &r, AlgebraicReal::from_int(d));
        }
        let s6 = &AlgebraicReal::sqrt(2) * &AlgebraicReal::sqrt(3);
        assert_eq!(s6, AlgebraicReal::sqrt(6));
    }

    #[test]
    fn golden_ratio_relation() {
        // m = (1+√5)/2 satisfies m² − m − 1 = 0
        let m = &AlgebraicReal::ratio(1, 2) + &AlgebraicReal::sqrt_term(q(1, 2), 5);
        let r = &(&(&m * &m) - &m) - &AlgebraicReal::one();
        assert!(r.is_zero());
    }

    #[test]
    fn signs_of_near_cancellations() {
        // √2 + √3 − √10 ≈ −0.0165 and √5 + √6 − √(21.xx) style cases
        let x = &(&AlgebraicReal::sqrt(2) + &AlgebraicReal::sqrt(3)) - &AlgebraicReal::sqrt(10);
        assert_eq!(x.signum(), Ordering::Less);
        // 99/70 − √2 ≈ 7.2e-5
        let y = &AlgebraicReal::ratio(99, 70) - &AlgebraicReal::sqrt(2);
        assert_eq!(y.signum(), Ordering::Greater);
        assert_eq!(AlgebraicReal::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn coordinate_order_round_trip() {
        let coords: [BigRational; 8] = std::array::from_fn(|i| q(i as i64 + 1, 3));
        let x = AlgebraicReal::from_coordinates(coords.clone());
        assert_eq!(x.coordinates(), coords);
        assert!((x.to_f64() - {
            let r = [1.0f64, 2.0, 3.0, 5.0, 6.0, 10.0, 15.0, 30.0];
            (0..8).map(|i| (i as f64 + 1.0) / 3.0 * r[i].sqrt()).sum::<f64>()
        })
        .abs()
            < 1e-12);
    }

    #[test]
    // det of the A_n cosine matrix is (n + 1) / 2^n.
    fn determinant_of_a3_cosine_matrix() {
        let h = AlgebraicReal::ratio(-1, 2);
        let z = AlgebraicReal::zero();
        let o = AlgebraicReal::one();
        let m = vec![
            vec![o.clone(), h.clone(), z.clone()],
            vec![h.clone(), o.clone(), h.clone()],
            vec![z, h, o],
        ];
        assert_eq!(AlgebraicReal::determinant(&m), AlgebraicReal::ratio(1, 2));
    }

    fn small() -> impl Strategy<Value = AlgebraicReal> {
        prop::collection::vec(-6i64..=6, 8).prop_map(|v| {
            AlgebraicReal::from_coordinates(std::array::from_fn(|i| q(v[i], 1 + (i as i64 % 3))))
        })
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(x in small()) {
            prop_assume!(!x.is_zero());
            let inv = x.inverse().unwrap();
            prop_assert_eq!(&x * &inv, AlgebraicReal::one());
        }

        #[test]
        fn sign_agrees_with_float(x in small()) {
            let v = x.to_f64();
            if v.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), v.partial_cmp(&0.0).unwrap());
            }
        }

        #[test]
        fn ring_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
