//! The braid map `phi(a, b, c) = ((a+c)^{-1} c b, a + c, (a+c)^{-1} a b)`
//! relating `x_2(a) x_1(b) x_2(c)` and `x_1(a') x_2(b') x_1(c')`.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rep::{build_rep, commutator_residual, max_abs, q_value, relative_difference, CMat};
use crate::algebra::AlgebraSignature;
use crate::error::{Error, Result};

fn inverse(m: &CMat) -> Result<CMat> {
    let lu = m.clone().lu();
    let inv = lu.try_inverse().ok_or_else(|| Error::Numeric("a + c is singular".into()))?;
    // reject near-singular sums: the inverse must reproduce the identity
    let check = relative_difference(&(m * &inv), &CMat::identity(m.nrows(), m.ncols()));
    if !check.is_finite() || check > 1e-8 {
        return Err(Error::Numeric(format!("a + c is ill-conditioned (inverse residual {check:.2e})")));
    }
    Ok(inv)
}

/// `(a', b', c')` from the left-inverse forms.
pub fn braid_phi(a: &CMat, b: &CMat, c: &CMat) -> Result<(CMat, CMat, CMat)> {
    let s = a + c;
    let si = inverse(&s)?;
    let ap = &si * c * b;
    let cp = &si * a * b;
    Ok((ap, s, cp))
}

/// `x_1(a) x_2(b) x_1(c)` style products as `3D x 3D` block matrices.
/// `first` is the index (1 or 2) of the outer letters.
pub fn braid_product(first: usize, a: &CMat, b: &CMat, c: &CMat) -> CMat {
    let dim = a.nrows();
    let x = |i: usize, p: &CMat| -> CMat {
        let mut m = CMat::identity(3 * dim, 3 * dim);
        m.view_mut(((i - 1) * dim, i * dim), (dim, dim)).copy_from(p);
        m
    };
    let second = 3 - first;
    x(first, a) * x(second, b) * x(first, c)
}

/// Relative residuals of the four properties of `phi` on one triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidChecks {
    /// `(a+c)^{-1} c b = b c (a+c)^{-1}` and `(a+c)^{-1} a b = b a (a+c)^{-1}`.
    pub expression_forms: f64,
    /// `b' c' = q^2 c' b'`, `c' a' = q^2 a' c'`.
    pub primed_diagram: f64,
    pub involution: f64,
    pub matrix_identity: f64,
    /// Input relations `c a = q^2 a c`, `a b = q^2 b a`, `b c = c b`.
    pub input_diagram: f64,
}

impl BraidChecks {
    pub fn worst(&self) -> f64 {
        self.expression_forms.max(self.primed_diagram).max(self.involution).max(self.matrix_identity)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

fn diagram(a: &CMat, b: &CMat, c: &CMat, q2: Complex64) -> f64 {
    commutator_residual(c, a, q2).max(commutator_residual(a, b, q2)).max(commutator_residual(b, c, Complex64::new(1.0, 0.0)))
}

pub fn braid_checks(a: &CMat, b: &CMat, c: &CMat, q: Complex64) -> Result<BraidChecks> {
    let q2 = q * q;
    let (ap, bp, cp) = braid_phi(a, b, c)?;
    let si = inverse(&bp)?;
    let expression_forms = relative_difference(&ap, &(b * c * &si)).max(relative_difference(&cp, &(b * a * &si)));
    let primed_diagram = commutator_residual(&bp, &cp, q2).max(commutator_residual(&cp, &ap, q2));
    let (a2, b2, c2) = braid_phi(&ap, &bp, &cp)?;
    let involution = relative_difference(&a2, a).max(relative_difference(&b2, b)).max(relative_difference(&c2, c));
    let matrix_identity = relative_difference(&braid_product(2, a, b, c), &braid_product(1, &ap, &bp, &cp));
    Ok(BraidChecks { expression_forms, primed_diagram, involution, matrix_identity, input_diagram: diagram(a, b, c, q2) })
}

/// Signature of a triple with `c -> a -> b`, `b` and `c` commuting.
pub fn triple_signature() -> Arc<AlgebraSignature> {
    // order a, b, c; C(a,b) = 1, C(c,a) = 1, C(b,c) = 0
    Arc::new(AlgebraSignature::new(vec!["a", "b", "c"], vec![vec![0, 1, -1], vec![-1, 0, 0], vec![1, 0, 0]]).expect("valid"))
}

/// A random clock/shift triple: a positive central scalar and positive
/// multipliers on each generator, drawn log-uniformly from `[e^-1, e]`.
pub fn random_triple<R: Rng>(d: usize, rng: &mut R) -> Result<(CMat, CMat, CMat)> {
    let mut draw = || rng.random_range(-1.0f64..=1.0).exp();
    let rep = build_rep(&triple_signature(), d, &[draw()])?;
    let (sa, sb, sc) = (draw(), draw(), draw());
    let scale = |m: &CMat, s: f64| m * Complex64::new(s, 0.0);
    Ok((scale(rep.matrix(0), sa), scale(rep.matrix(1), sb), scale(rep.matrix(2), sc)))
}

/// Checks on `count` random triples at dimension `d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidSweep {
    pub d: usize,
    pub count: usize,
    pub worst: BraidChecks,
}

pub fn braid_sweep<R: Rng>(d: usize, count: usize, rng: &mut R) -> Result<BraidSweep> {
    let mut worst = BraidChecks { expression_forms: 0.0, primed_diagram: 0.0, involution: 0.0, matrix_identity: 0.0, input_diagram: 0.0 };
    let q = q_value(d);
    for _ in 0..count {
        let (a, b, c) = random_triple(d, rng)?;
        let r = braid_checks(&a, &b, &c, q)?;
        worst.expression_forms = worst.expression_forms.max(r.expression_forms);
        worst.primed_diagram = worst.primed_diagram.max(r.primed_diagram);
        worst.involution = worst.involution.max(r.involution);
        worst.matrix_identity = worst.matrix_identity.max(r.matrix_identity);
        worst.input_diagram = worst.input_diagram.max(r.input_diagram);
    }
    Ok(BraidSweep { d, count, worst })
}

/// `max|m|`, re-exported for reports.
pub fn norm(m: &CMat) -> f64 {
    max_abs(m)
}
