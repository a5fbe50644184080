//! Monomial algebra maps between signatures and their relation check.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{same_signature, AlgebraSignature, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::LaurentScalar;

/// Image of one source generator: `q^{q_power} x^{exponents}` in normal order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Image {
    pub q_power: i32,
    pub exponents: Monomial,
}

impl Image {
    pub fn new(q_power: i32, exponents: Vec<i32>) -> Self {
        Self { q_power, exponents: Monomial::from_exponents(exponents) }
    }

    pub fn coefficient(&self) -> LaurentScalar {
        LaurentScalar::q_pow(self.q_power)
    }

    pub fn render(&self, target: &AlgebraSignature) -> String {
        let mono = self.exponents.render(target.names());
        match self.q_power {
            0 => mono,
            1 => format!("q {mono}"),
            k => format!("q^{k} {mono}"),
        }
    }
}

/// Sends each source generator to a unit-coefficient Laurent monomial in the
/// target signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    source: Arc<AlgebraSignature>,
    target: Arc<AlgebraSignature>,
    images: Vec<Image>,
}

/// One source pair whose images do not reproduce the source relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub left: String,
    pub right: String,
    pub observed: i64,
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl MorphismReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Morphism {
    pub fn new(source: Arc<AlgebraSignature>, target: Arc<AlgebraSignature>, images: Vec<Image>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::MalformedMorphism(format!("{} images for {} source generators", images.len(), source.len())));
        }
        for (k, img) in images.iter().enumerate() {
            if img.exponents.len() != target.len() {
                return Err(Error::MalformedMorphism(format!(
                    "image of `{}` has {} exponents, target has {} generators",
                    source.name(k),
                    img.exponents.len(),
                    target.len()
                )));
            }
        }
        Ok(Self { source, target, images })
    }

    /// The identity map on a signature.
    pub fn identity(sig: &Arc<AlgebraSignature>) -> Self {
        let images = (0..sig.len()).map(|i| Image { q_power: 0, exponents: Monomial::generator(sig.len(), i) }).collect();
        Self { source: Arc::clone(sig), target: Arc::clone(sig), images }
    }

    pub fn source(&self) -> &Arc<AlgebraSignature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraSignature> {
        &self.target
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Image {
        &self.images[i]
    }

    pub fn image_of(&self, name: &str) -> Option<&Image> {
        self.source.index_of(name).map(|i| &self.images[i])
    }

    pub fn image_polynomial(&self, i: usize) -> Polynomial {
        let img = &self.images[i];
        Polynomial::term(&self.target, img.coefficient(), img.exponents.clone())
    }

    /// Replaces the target signature with one of equal size (used when the
    /// same exponent data is read under a different pair orientation).
    pub fn with_target(&self, target: Arc<AlgebraSignature>) -> Result<Self> {
        Self::new(Arc::clone(&self.source), target, self.images.clone())
    }

    /// Signature on the source generators whose commutation matrix is read off
    /// the images. Checking a morphism is comparing this with the source.
    pub fn induced_commutation(&self) -> Vec<Vec<i64>> {
        let n = self.source.len();
        let mut c = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                c[i][j] = self.target.pairing(self.images[i].exponents.exponents(), self.images[j].exponents.exponents());
            }
        }
        c
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if !same_signature(&self.target, &other.source) {
            return Err(Error::SignatureMismatch);
        }
        let images = (0..self.source.len())
            .map(|i| {
                let img = apply_morphism(&self.image_polynomial(i), other)?;
                let (c, m) = img.as_single_term().ok_or_else(|| Error::MalformedMorphism("composite image is not a monomial".into()))?;
                let k = c.as_unit_power().ok_or_else(|| Error::MalformedMorphism("composite image coefficient is not a power of q".into()))?;
                Ok(Image { q_power: k, exponents: m.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(Arc::clone(&self.source), Arc::clone(&other.target), images)
    }
}

/// Checks every source pair `(i, j)` with `i < j`: the images must satisfy
/// `f(x_i) f(x_j) = q^{2 C_ij} f(x_j) f(x_i)` in the target.
pub fn check_morphism(f: &Morphism) -> MorphismReport {
    let n = f.source.len();
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..n {
        for j in i + 1..n {
            pairs_checked += 1;
            let observed = f.target.pairing(f.images[i].exponents.exponents(), f.images[j].exponents.exponents());
            let expected = f.source.c(i, j);
            if observed != expected {
                violations.push(Violation {
                    i,
                    j,
                    left: f.source.name(i).to_owned(),
                    right: f.source.name(j).to_owned(),
                    observed,
                    expected,
                });
            }
        }
    }
    MorphismReport { pairs_checked, violations }
}

/// Image of a polynomial under the ring map determined by `f`.
pub fn apply_morphism(p: &Polynomial, f: &Morphism) -> Result<Polynomial> {
    if !same_signature(p.signature(), &f.source) {
        return Err(Error::SignatureMismatch);
    }
    let gens: Vec<Polynomial> = (0..f.source.len()).map(|i| f.image_polynomial(i)).collect();
    let mut out = Polynomial::zero(&f.target);
    for (m, c) in p.terms() {
        let mut acc = Polynomial::scalar(&f.target, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e != 0 {
                let factor = gens[i].unit_pow(e).expect("images are unit monomials");
                acc = acc.try_mul(&factor)?;
            }
        }
        out = out.try_add(&acc)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: AlgebraSignature,
    pub target: AlgebraSignature,
    pub images: Vec<NamedImage>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedImage {
    pub generator: String,
    pub q_power: i32,
    pub exponents: Vec<i32>,
    pub rendered: String,
}

impl Morphism {
    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            source: (*self.source).clone(),
            target: (*self.target).clone(),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(i, img)| NamedImage {
                    generator: self.source.name(i).to_owned(),
                    q_power: img.q_power,
                    exponents: img.exponents.exponents().to_vec(),
                    rendered: img.render(&self.target),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MorphismJson) -> Result<Self> {
        let source = Arc::new(AlgebraSignature::new(json.source.names().to_vec(), json.source.commutation().to_vec())?);
        let target = Arc::new(AlgebraSignature::new(json.target.names().to_vec(), json.target.commutation().to_vec())?);
        let mut images = Vec::with_capacity(source.len());
        for (i, name) in source.names().iter().enumerate() {
            let img = json
                .images
                .get(i)
                .filter(|img| &img.generator == name)
                .ok_or_else(|| Error::Serialization(format!("image list does not match source generator `{name}`")))?;
            images.push(Image::new(img.q_power, img.exponents.clone()));
        }
        Self::new(source, target, images)
    }
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MorphismJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q_scalar;

    fn weyl() -> Arc<AlgebraSignature> {
        Arc::new(AlgebraSignature::new(vec!["u", "v"], vec![vec![0, 1], vec![-1, 0]]).unwrap())
    }

    #[test]
    fn identity_passes() {
        let s = weyl();
        let r = check_morphism(&Morphism::identity(&s));
        assert!(r.pass());
        assert_eq!(r.pairs_checked, 1);
    }

    #[test]
    fn swapped_images_are_flagged() {
        let s = weyl();
        let f = Morphism::new(Arc::clone(&s), Arc::clone(&s), vec![Image::new(0, vec![0, 1]), Image::new(0, vec![1, 0])]).unwrap();
        let r = check_morphism(&f);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].observed, -1);
        assert_eq!(r.violations[0].expected, 1);
    }

    #[test]
    fn scalars_are_fixed() {
        let s = weyl();
        let f = Morphism::identity(&s);
        let c = q_scalar(&s, 3, 1);
        assert_eq!(apply_morphism(&c, &f).unwrap(), c);
    }

    #[test]
    fn malformed_images_rejected() {
        let s = weyl();
        assert!(Morphism::new(Arc::clone(&s), Arc::clone(&s), vec![Image::new(0, vec![1, 0])]).is_err());
        assert!(Morphism::new(Arc::clone(&s), Arc::clone(&s), vec![Image::new(0, vec![1]), Image::new(0, vec![0, 1])]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = weyl();
        let f = Morphism::new(Arc::clone(&s), Arc::clone(&s), vec![Image::new(1, vec![1, 1]), Image::new(0, vec![0, -1])]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: Morphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(text.contains(r#""rendered":"q u v""#));
    }
}
