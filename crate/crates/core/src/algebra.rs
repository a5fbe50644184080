//! Quantum-torus style algebras: generators `x_1..x_n` with
//! `x_i x_j = q^{2 C_ij} x_j x_i`, Laurent monomials in normal order
//! `x_1^{e_1} ... x_n^{e_n}`, and polynomials with [`LaurentScalar`]
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::LaurentScalar;

/// Generator names plus the integer antisymmetric commutation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSignature {
    names: Vec<String>,
    commutation: Vec<Vec<i64>>,
}

impl AlgebraSignature {
    /// Validates and builds a signature. `commutation[i][j] = k` encodes
    /// `x_i x_j = q^{2k} x_j x_i`.
    pub fn new<S: Into<String>>(names: Vec<S>, commutation: Vec<Vec<i64>>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        if commutation.len() != n {
            return Err(Error::SizeMismatch { rows: commutation.len(), cols: commutation.first().map_or(0, Vec::len), names: n });
        }
        for row in &commutation {
            if row.len() != n {
                return Err(Error::SizeMismatch { rows: commutation.len(), cols: row.len(), names: n });
            }
        }
        for i in 0..n {
            for j in i..n {
                if commutation[i][j] != -commutation[j][i] {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        Ok(Self { names, commutation })
    }

    /// All generators pairwise commuting.
    pub fn commutative<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        let n = names.len();
        Self::new(names, vec![vec![0; n]; n])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn commutation(&self) -> &[Vec<i64>] {
        &self.commutation
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.commutation[i][j]
    }

    /// Same generators, all relations trivial. Used for `q = 1` comparisons.
    pub fn commutative_shadow(&self) -> Self {
        Self { names: self.names.clone(), commutation: vec![vec![0; self.len()]; self.len()] }
    }

    /// Block-diagonal union; generator names are prefixed to stay distinct.
    pub fn disjoint_union(&self, left_prefix: &str, other: &Self, right_prefix: &str) -> Result<Self> {
        let n = self.len();
        let m = other.len();
        let mut names: Vec<String> = self.names.iter().map(|s| format!("{left_prefix}{s}")).collect();
        names.extend(other.names.iter().map(|s| format!("{right_prefix}{s}")));
        let mut c = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            c[i][..n].copy_from_slice(&self.commutation[i]);
        }
        for i in 0..m {
            c[n + i][n..].copy_from_slice(&other.commutation[i]);
        }
        Self::new(names, c)
    }

    /// `alpha^T C beta`: the commutation exponent of `x^alpha` with `x^beta`.
    pub fn pairing(&self, alpha: &[i32], beta: &[i32]) -> i64 {
        let mut acc = 0i64;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &self.commutation[i];
            for (j, &b) in beta.iter().enumerate() {
                if b != 0 {
                    acc += a as i64 * b as i64 * row[j];
                }
            }
        }
        acc
    }

    /// `x^alpha x^beta = q^{2 t} x^{alpha+beta}` with
    /// `t = sum_{i>j} alpha_i beta_j C_ij`.
    pub fn twist(&self, alpha: &[i32], beta: &[i32]) -> i64 {
        let mut acc = 0i64;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &self.commutation[i];
            for (j, &b) in beta[..i].iter().enumerate() {
                if b != 0 {
                    acc += a as i64 * b as i64 * row[j];
                }
            }
        }
        acc
    }

    /// `q`-exponent `w` with `q^{w} x^alpha` Weyl-symmetric:
    /// `w = -sum_{i<j} alpha_i alpha_j C_ij`.
    pub fn weyl_shift(&self, alpha: &[i32]) -> i64 {
        let mut acc = 0i64;
        for i in 0..alpha.len() {
            if alpha[i] == 0 {
                continue;
            }
            for j in i + 1..alpha.len() {
                acc += alpha[i] as i64 * alpha[j] as i64 * self.commutation[i][j];
            }
        }
        -acc
    }
}

/// Laurent exponent vector, interpreted in normal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    pub fn from_exponents(e: Vec<i32>) -> Self {
        Self(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.0[i]
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn checked_scale(&self, k: i32) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

fn to_q_exp(v: i64) -> Result<i32> {
    i32::try_from(v).map_err(|_| Error::ExponentOverflow)
}

/// A finite sum of normal-ordered Laurent monomials with [`LaurentScalar`]
/// coefficients. Terms with zero coefficient are never stored, so two
/// polynomials over the same signature are equal iff their term maps are.
#[derive(Clone)]
pub struct Polynomial {
    sig: Arc<AlgebraSignature>,
    terms: BTreeMap<Monomial, LaurentScalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_signature(&self.sig, &other.sig) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_signature(a: &Arc<AlgebraSignature>, b: &Arc<AlgebraSignature>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(sig: &Arc<AlgebraSignature>) -> Self {
        Self { sig: Arc::clone(sig), terms: BTreeMap::new() }
    }

    pub fn one(sig: &Arc<AlgebraSignature>) -> Self {
        Self::scalar(sig, LaurentScalar::one())
    }

    pub fn scalar(sig: &Arc<AlgebraSignature>, c: LaurentScalar) -> Self {
        Self::term(sig, c, Monomial::one(sig.len()))
    }

    pub fn generator(sig: &Arc<AlgebraSignature>, i: usize) -> Self {
        Self::term(sig, LaurentScalar::one(), Monomial::generator(sig.len(), i))
    }

    /// Generator by name; panics if the name is unknown.
    pub fn var(sig: &Arc<AlgebraSignature>, name: &str) -> Self {
        let i = sig.index_of(name).unwrap_or_else(|| panic!("unknown generator `{name}`"));
        Self::generator(sig, i)
    }

    pub fn term(sig: &Arc<AlgebraSignature>, c: LaurentScalar, m: Monomial) -> Self {
        assert_eq!(m.len(), sig.len(), "monomial length does not match signature");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { sig: Arc::clone(sig), terms }
    }

    /// Builds from `(coefficient, exponents)` pairs, collecting like terms.
    pub fn from_terms(sig: &Arc<AlgebraSignature>, terms: Vec<(LaurentScalar, Vec<i32>)>) -> Result<Self> {
        let mut out = Self::zero(sig);
        for (c, e) in terms {
            if e.len() != sig.len() {
                return Err(Error::ExponentLength { expected: sig.len(), got: e.len() });
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> LaurentScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The single `(coefficient, monomial)` pair if this is one term.
    pub fn as_single_term(&self) -> Option<(&LaurentScalar, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if same_signature(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Normal-ordered product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut out = Self::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let t = self.sig.twist(&ma.0, &mb.0);
                let m = ma.checked_add(mb)?;
                let c = (ca * cb).shift(to_q_exp(2 * t)?);
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero(&self.sig);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Multiplies every coefficient by `q^k`.
    pub fn shift_q(&self, k: i32) -> Self {
        Self { sig: Arc::clone(&self.sig), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift(k))).collect() }
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.sig);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Inverse of a single unit-coefficient-times-monomial `±q^s x^alpha`.
    /// Sums are not invertible in this representation.
    pub fn inverse_unit(&self) -> Option<Self> {
        let (c, m) = self.as_single_term()?;
        let (sign, s) = c.as_signed_power()?;
        // (x^a)^{-1} = q^{2 t(a,a)} x^{-a}
        let t = self.sig.twist(&m.0, &m.0);
        let k = to_q_exp(2 * t).ok()?.checked_sub(s)?;
        Some(Self::term(&self.sig, LaurentScalar::term(k, sign), m.neg()))
    }

    /// Integer power (negative allowed) of a single unit term.
    pub fn unit_pow(&self, k: i32) -> Option<Self> {
        let base = if k < 0 { self.inverse_unit()? } else { self.clone() };
        self.as_single_term()?;
        Some(base.pow(k.unsigned_abs()))
    }

    /// Reinterprets the same exponent data over another signature of the
    /// same size (for example, its commutative shadow).
    pub fn reinterpret(&self, sig: &Arc<AlgebraSignature>) -> Result<Self> {
        if sig.len() != self.sig.len() {
            return Err(Error::SignatureMismatch);
        }
        Ok(Self { sig: Arc::clone(sig), terms: self.terms.clone() })
    }

    /// Transports the polynomial into a larger signature, sending generator
    /// `i` to generator `index_map[i]` of `sig`.
    pub fn lift(&self, sig: &Arc<AlgebraSignature>, index_map: &[usize]) -> Result<Self> {
        if index_map.len() != self.sig.len() {
            return Err(Error::ExponentLength { expected: self.sig.len(), got: index_map.len() });
        }
        let mut out = Self::zero(sig);
        for (m, c) in &self.terms {
            let mut e = vec![0; sig.len()];
            for (i, &x) in m.0.iter().enumerate() {
                let t = *index_map.get(i).filter(|&&t| t < sig.len()).ok_or_else(|| Error::IndexOutOfRange(format!("generator {i} lifted out of range")))?;
                e[t] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        // Lifting must not reorder: the images keep their relative order.
        debug_assert!(index_map.windows(2).all(|w| w[0] < w[1]));
        Ok(out)
    }

    /// Coefficients evaluated at `q = 1`.
    pub fn at_q_one(&self) -> Self {
        let mut out = Self::zero(&self.sig);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), LaurentScalar::term(0, c.at_one()));
        }
        out
    }

    /// Substitutes `q -> q^-1` in all coefficients.
    pub fn invert_q(&self) -> Self {
        Self { sig: Arc::clone(&self.sig), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.invert_q())).collect() }
    }

    /// Classical evaluation at `q = 1` with commuting real generator values.
    pub fn eval_classical(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let coeff = c.at_one().to_f64().unwrap_or(f64::NAN);
                m.0.iter().zip(values).fold(coeff, |acc, (&e, &v)| acc * v.powi(e))
            })
            .sum()
    }

    /// Generator indices that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.sig.len()).filter(|&i| self.terms.keys().any(|m| m.0[i] != 0)).collect();
        s.dedup();
        s
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            signature: (*self.sig).clone(),
            terms: self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())).collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        let sig = Arc::new(AlgebraSignature::new(json.signature.names.clone(), json.signature.commutation.clone())?);
        Self::from_terms(&sig, json.terms.iter().map(|(e, c)| (c.clone(), e.clone())).collect())
    }
}

/// Canonical wire form: the signature and a term list of
/// `[exponent vector, {q-exponent: coefficient}]` pairs in monomial order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub signature: AlgebraSignature,
    pub terms: Vec<(Vec<i32>, LaurentScalar)>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PolynomialJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Normal-ordered product of two polynomials over one signature.
pub fn normal_mul(p: &Polynomial, r: &Polynomial) -> Result<Polynomial> {
    p.try_mul(r)
}

/// Returns `Some(k)` when `p r = q^{2k} r p` exactly, `None` when the pair
/// does not `q`-commute uniformly.
pub fn q_commutation_exponent(p: &Polynomial, r: &Polynomial) -> Result<Option<i64>> {
    p.check_sig(r)?;
    if p.is_zero() || r.is_zero() {
        return Err(Error::InvalidParameter("q_commutation_exponent needs nonzero operands".into()));
    }
    // Monomial pairs commute by a pure power, so when both operands are single
    // terms the answer is the pairing; skip the two full products.
    if let (Some((_, ma)), Some((_, mb))) = (p.as_single_term(), r.as_single_term()) {
        return Ok(Some(p.sig.pairing(&ma.0, &mb.0)));
    }
    let pr = p.try_mul(r)?;
    let rp = r.try_mul(p)?;
    if pr.is_zero() || rp.is_zero() {
        return Ok(if pr.is_zero() && rp.is_zero() { Some(0) } else { None });
    }
    let (m, c_rp) = rp.terms.iter().next().expect("nonzero");
    let c_pr = match pr.terms.get(m) {
        Some(c) => c,
        None => return Ok(None),
    };
    let shift = c_pr.min_degree().unwrap() - c_rp.min_degree().unwrap();
    if shift % 2 != 0 {
        return Ok(None);
    }
    if pr == rp.shift_q(shift) {
        Ok(Some(shift as i64 / 2))
    } else {
        Ok(None)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    /// Panics on signature mismatch; use [`Polynomial::try_add`] otherwise.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&LaurentScalar::from_int(-1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.sig.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m.render(names);
                if m.is_one() {
                    format!("({c})")
                } else if c.is_one() {
                    mono
                } else {
                    format!("({c}) {mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{self}]")
    }
}

/// Convenience for tests and tables: `c q^k` as a scalar polynomial.
pub fn q_scalar(sig: &Arc<AlgebraSignature>, k: i32, c: i64) -> Polynomial {
    Polynomial::scalar(sig, LaurentScalar::term(k, BigInt::from(c)))
}

/// `true` when the scalar is exactly `+1`.
pub fn is_unit_one(c: &LaurentScalar) -> bool {
    c.as_unit_power() == Some(0) && c.coeff(0).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl() -> Arc<AlgebraSignature> {
        Arc::new(AlgebraSignature::new(vec!["u", "v"], vec![vec![0, 1], vec![-1, 0]]).unwrap())
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(AlgebraSignature::new(vec!["u", "v"], vec![vec![0, 1], vec![1, 0]]), Err(Error::NotAntisymmetric(0, 1))));
        assert!(matches!(AlgebraSignature::new(vec!["u"], vec![vec![1]]), Err(Error::NotAntisymmetric(0, 0))));
        assert!(matches!(AlgebraSignature::new(vec!["u", "v"], vec![vec![0]]), Err(Error::SizeMismatch { .. })));
        assert!(matches!(AlgebraSignature::new(vec!["u", "u"], vec![vec![0, 0], vec![0, 0]]), Err(Error::DuplicateGenerator(_))));
        assert!(AlgebraSignature::new(vec!["x"], vec![vec![0]]).is_ok());
    }

    #[test]
    fn weyl_pair_reordering() {
        let s = weyl();
        let u = Polynomial::var(&s, "u");
        let v = Polynomial::var(&s, "v");
        let vu = &v * &u;
        let uv = &u * &v;
        assert_eq!(vu, uv.shift_q(-2));
        assert_eq!(q_commutation_exponent(&u, &v).unwrap(), Some(1));
        assert_eq!(q_commutation_exponent(&v, &u).unwrap(), Some(-1));
    }

    #[test]
    fn square_of_sum() {
        let s = weyl();
        let u = Polynomial::var(&s, "u");
        let v = Polynomial::var(&s, "v");
        let w = &u + &v;
        let sq = &w * &w;
        // u^2 + (1 + q^-2) uv + v^2
        let expected = Polynomial::from_terms(
            &s,
            vec![
                (LaurentScalar::one(), vec![2, 0]),
                (LaurentScalar::from_terms([(0, 1), (-2, 1)]), vec![1, 1]),
                (LaurentScalar::one(), vec![0, 2]),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn identity_element() {
        let s = weyl();
        let p = &Polynomial::var(&s, "u") + &q_scalar(&s, 3, 2);
        assert_eq!(&p * &Polynomial::one(&s), p);
        assert_eq!(&Polynomial::one(&s) * &p, p);
    }

    #[test]
    fn unit_inverse_and_powers() {
        let s = weyl();
        let uv = &Polynomial::var(&s, "u") * &Polynomial::var(&s, "v");
        let w = (&uv * &Polynomial::var(&s, "u")).shift_q(5);
        let inv = w.inverse_unit().unwrap();
        assert_eq!(&w * &inv, Polynomial::one(&s));
        assert_eq!(&inv * &w, Polynomial::one(&s));
        assert_eq!(w.unit_pow(-2).unwrap(), &inv * &inv);
        assert!((&uv + &uv).inverse_unit().is_none());
    }

    #[test]
    fn self_commutation_is_zero_and_sums_may_fail() {
        let s = weyl();
        let u = Polynomial::var(&s, "u");
        let v = Polynomial::var(&s, "v");
        assert_eq!(q_commutation_exponent(&u, &u).unwrap(), Some(0));
        let w = &u + &v;
        assert_eq!(q_commutation_exponent(&w, &u).unwrap(), None);
        assert_eq!(q_commutation_exponent(&w, &w).unwrap(), Some(0));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = weyl();
        let b = Arc::new(AlgebraSignature::commutative(vec!["u", "v"]).unwrap());
        let x = Polynomial::var(&a, "u");
        let y = Polynomial::var(&b, "u");
        assert_eq!(normal_mul(&x, &y), Err(Error::SignatureMismatch));
    }

    #[test]
    fn json_is_canonical() {
        let s = weyl();
        let p = &Polynomial::var(&s, "v") * &Polynomial::var(&s, "u");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"signature":{"names":["u","v"],"commutation":[[0,1],[-1,0]]},"terms":[[[1,1],{"-2":1}]]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
