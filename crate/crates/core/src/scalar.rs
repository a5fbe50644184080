//! Integer Laurent polynomials in the formal parameter `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite sum `sum_k c_k q^k` with `c_k` nonzero integers.
///
/// The zero scalar is the empty map. Every stored coefficient is nonzero,
/// so structural equality is ring equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentScalar {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        Self::term(k, BigInt::one())
    }

    /// `c q^k`; returns zero when `c == 0`.
    pub fn term(k: i32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    pub fn from_int(c: i64) -> Self {
        Self::term(0, c)
    }

    /// Builds from `(q-exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_unit_power() == Some(0)
    }

    /// If `self == q^k` exactly, returns `k`.
    pub fn as_unit_power(&self) -> Option<i32> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (k, c) = self.coeffs.iter().next()?;
        c.is_one().then_some(*k)
    }

    /// If `self == ±q^k` exactly, returns `(sign, k)`.
    pub fn as_signed_power(&self) -> Option<(i32, i32)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (k, c) = self.coeffs.iter().next()?;
        if c.is_one() {
            Some((1, *k))
        } else if (-c).is_one() {
            Some((-1, *k))
        } else {
            None
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i32) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, k: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Substitutes `q -> q^-1`.
    pub fn invert_q(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `q = 1` (sum of coefficients).
    pub fn at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn eval_complex(&self, q: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(e, c)| q.powi(*e) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| q.powi(*e) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        // Fast path: the overwhelmingly common case is a unit monomial.
        if let Some(k) = rhs.as_unit_power() {
            return self.shift(k);
        }
        if let Some(k) = self.as_unit_power() {
            return rhs.shift(k);
        }
        let mut out = LaurentScalar::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (*k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (k, true) => write!(f, "q^{k}")?,
                (k, false) => write!(f, "{mag}q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentScalar({self})")
    }
}

/// Coefficients serialize as JSON integers when they fit in `i64`, and as
/// decimal strings otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Emit in numeric exponent order; a string-keyed map would sort "-1"
        // before "-2" and break canonical output.
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            let v = c.to_i64().map(WireInt::Small).unwrap_or_else(|| WireInt::Big(c.to_string()));
            m.serialize_entry(&k.to_string(), &v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, WireInt> = BTreeMap::deserialize(d)?;
        let mut out = LaurentScalar::zero();
        for (k, v) in raw {
            let k: i32 = k.parse().map_err(D::Error::custom)?;
            let c = match v {
                WireInt::Small(c) => BigInt::from(c),
                WireInt::Big(s) => s.parse().map_err(D::Error::custom)?,
            };
            out.add_term(k, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let s = LaurentScalar::from_terms([(1, 2), (1, -2), (0, 3)]);
        assert_eq!(s, LaurentScalar::from_int(3));
        assert!(LaurentScalar::term(4, 0).is_zero());
    }

    #[test]
    fn ring_operations() {
        let a = LaurentScalar::from_terms([(0, 1), (-2, 1)]);
        let b = LaurentScalar::from_terms([(2, 1), (0, -1)]);
        // (1 + q^-2)(q^2 - 1) = q^2 - q^-2
        assert_eq!(&a * &b, LaurentScalar::from_terms([(2, 1), (-2, -1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(&a + &(-&a), LaurentScalar::zero());
    }

    #[test]
    fn unit_power_detection() {
        assert_eq!(LaurentScalar::q_pow(-3).as_unit_power(), Some(-3));
        assert_eq!(LaurentScalar::term(2, -1).as_unit_power(), None);
        assert_eq!(LaurentScalar::term(2, -1).as_signed_power(), Some((-1, 2)));
        assert_eq!(LaurentScalar::from_terms([(0, 1), (1, 1)]).as_unit_power(), None);
    }

    #[test]
    fn display_is_readable() {
        let s = LaurentScalar::from_terms([(0, 1), (-2, 1)]);
        assert_eq!(s.to_string(), "q^-2 + 1");
        assert_eq!(LaurentScalar::term(1, -3).to_string(), "-3q");
    }

    #[test]
    fn json_round_trip_with_big_coefficient() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = LaurentScalar::from_terms([(-3, BigInt::from(2)), (5, big)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"-3":2,"5":"123456789012345678901234567890"}"#);
        let back: LaurentScalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
