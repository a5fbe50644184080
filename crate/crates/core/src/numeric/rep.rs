//! Clock and shift representations of quantum tori at `q = e^{i pi / d}`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSignature, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::skew::symplectic_reduce;

pub type CMat = DMatrix<Complex64>;

/// `q = e^{i pi / d}`, so `q^2` is a primitive `d`-th root of unity.
pub fn q_value(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, PI / d as f64)
}

/// `diag(1, w, ..., w^{d-1})` with `w = q^2`.
pub fn clock(d: usize) -> CMat {
    let w = q_value(d).powi(2);
    CMat::from_fn(d, d, |i, j| if i == j { w.powi(i as i32) } else { Complex64::new(0.0, 0.0) })
}

/// Cyclic shift `e_k -> e_{k+1}`.
pub fn shift(d: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| if i == (j + 1) % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// `s * prod_t Z_t^{a_t} X_t^{b_t}` on `(C^d)^{⊗ r}`; a scaled generalized
/// permutation matrix, kept symbolic until [`MonomialOp::dense`].
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOp {
    pub scalar: Complex64,
    pub factors: Vec<(i64, i64)>,
}

impl MonomialOp {
    pub fn identity(r: usize) -> Self {
        Self { scalar: Complex64::new(1.0, 0.0), factors: vec![(0, 0); r] }
    }

    /// `X^b Z^a = w^{-ab} Z^a X^b` factorwise.
    pub fn mul(&self, other: &Self, d: usize) -> Self {
        let w = q_value(d).powi(2);
        let mut scalar = self.scalar * other.scalar;
        let mut factors = Vec::with_capacity(self.factors.len());
        for (&(a1, b1), &(a2, b2)) in self.factors.iter().zip(&other.factors) {
            scalar *= w.powi(-((a2 * b1).rem_euclid(d as i64)) as i32);
            factors.push(((a1 + a2).rem_euclid(d as i64), (b1 + b2).rem_euclid(d as i64)));
        }
        Self { scalar, factors }
    }

    pub fn inverse(&self, d: usize) -> Self {
        let w = q_value(d).powi(2);
        let mut scalar = self.scalar.inv();
        let mut factors = Vec::with_capacity(self.factors.len());
        for &(a, b) in &self.factors {
            scalar *= w.powi(-((a * b).rem_euclid(d as i64)) as i32);
            factors.push(((-a).rem_euclid(d as i64), (-b).rem_euclid(d as i64)));
        }
        Self { scalar, factors }
    }

    pub fn pow(&self, k: i32, d: usize) -> Self {
        let base = if k < 0 { self.inverse(d) } else { self.clone() };
        let mut acc = Self::identity(self.factors.len());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base, d);
        }
        acc
    }

    /// Adds `c` times the operator into `out` (of side `d^r`).
    pub fn accumulate(&self, c: Complex64, d: usize, out: &mut CMat) {
        let w = q_value(d).powi(2);
        let dim = out.nrows();
        let s = self.scalar * c;
        for col in 0..dim {
            // digits of col, first factor most significant
            let mut rest = col;
            let mut row = 0usize;
            let mut phase = 0i64;
            let mut place = dim;
            for &(a, b) in &self.factors {
                place /= d;
                let k = (rest / place) as i64;
                rest %= place;
                let k2 = (k + b).rem_euclid(d as i64);
                phase += a * k2;
                row += k2 as usize * place;
            }
            out[(row, col)] += s * w.powi(phase.rem_euclid(d as i64) as i32);
        }
    }

    pub fn dense(&self, d: usize) -> CMat {
        let dim = d.pow(self.factors.len() as u32);
        let mut m = CMat::zeros(dim, dim);
        self.accumulate(Complex64::new(1.0, 0.0), d, &mut m);
        m
    }
}

/// Where one generator goes: `scalar * q^{q_power} * prod (std)^{exponents}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub scalar: f64,
    pub q_power: i64,
    /// Exponents over `U_1, V_1, ..., U_r, V_r` of the standard pairs.
    pub exponents: Vec<i32>,
}

/// A representation of a signature by clock/shift matrices. Block `t` of the
/// skew normal form with divisor `δ` goes to `U_t = Z`, `V_t = X^δ` on the
/// `t`-th tensor factor; radical directions go to positive scalars.
#[derive(Clone, Debug)]
pub struct ClockShiftRep {
    d: usize,
    sig: Arc<AlgebraSignature>,
    divisors: Vec<i64>,
    assignment: Vec<Assignment>,
    ops: Vec<MonomialOp>,
    mats: Vec<CMat>,
}

pub fn build_rep(sig: &Arc<AlgebraSignature>, d: usize, scalars: &[f64]) -> Result<ClockShiftRep> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d={d} must be at least 2")));
    }
    let red = symplectic_reduce(sig.commutation())?;
    let divisors = red.divisors();
    if let Some(&bad) = divisors.iter().find(|&&x| x % d as i64 == 0) {
        return Err(Error::ElementaryDivisor(bad));
    }
    if scalars.len() != red.kernel_basis.len() {
        return Err(Error::InvalidParameter(format!("{} central scalars for a radical of dimension {}", scalars.len(), red.kernel_basis.len())));
    }
    if let Some(s) = scalars.iter().find(|&&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter(format!("central scalar {s} is not positive")));
    }
    let r = divisors.len();
    let std_sig = AlgebraSignature::new((0..red.s.len()).map(|k| format!("e{k}")).collect(), red.normal_form())?;
    let q = q_value(d);
    let mut assignment = Vec::with_capacity(sig.len());
    let mut ops = Vec::with_capacity(sig.len());
    for row in &red.s_inv {
        let e: Vec<i32> = row.iter().map(|&x| i32::try_from(x).map_err(|_| Error::ExponentOverflow)).collect::<Result<_>>()?;
        let w = std_sig.weyl_shift(&e);
        let mut scalar = 1.0;
        for (k, &s) in scalars.iter().enumerate() {
            scalar *= s.powi(e[2 * r + k]);
        }
        let factors = (0..r).map(|t| (i64::from(e[2 * t]), i64::from(e[2 * t + 1]) * divisors[t])).collect::<Vec<_>>();
        let factors = factors.into_iter().map(|(a, b)| (a.rem_euclid(d as i64), b.rem_euclid(d as i64))).collect();
        let phase = q.powi((w.rem_euclid(2 * d as i64)) as i32);
        ops.push(MonomialOp { scalar: phase * scalar, factors });
        assignment.push(Assignment { scalar, q_power: w, exponents: e[..2 * r].to_vec() });
    }
    let mats = ops.iter().map(|o| o.dense(d)).collect();
    Ok(ClockShiftRep { d, sig: Arc::clone(sig), divisors, assignment, ops, mats })
}

impl ClockShiftRep {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> Complex64 {
        q_value(self.d)
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    /// Side length `d^r` of the matrices.
    pub fn dim(&self) -> usize {
        self.d.pow(self.divisors.len() as u32)
    }

    pub fn pair_count(&self) -> usize {
        self.divisors.len()
    }

    pub fn assignment(&self) -> &[Assignment] {
        &self.assignment
    }

    pub fn matrix(&self, i: usize) -> &CMat {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.mats
    }

    pub fn matrix_of(&self, name: &str) -> Option<&CMat> {
        self.sig.index_of(name).map(|i| &self.mats[i])
    }

    /// The normal-ordered monomial `x^alpha` as an operator.
    pub fn monomial_op(&self, m: &Monomial) -> MonomialOp {
        let mut acc = MonomialOp::identity(self.divisors.len());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e != 0 {
                acc = acc.mul(&self.ops[i].pow(e, self.d), self.d);
            }
        }
        acc
    }

    pub fn eval_monomial(&self, m: &Monomial) -> CMat {
        self.monomial_op(m).dense(self.d)
    }

    pub fn eval_polynomial(&self, p: &Polynomial) -> Result<CMat> {
        if !crate::algebra::same_signature(p.signature(), &self.sig) {
            return Err(Error::SignatureMismatch);
        }
        let q = self.q();
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (m, c) in p.terms() {
            self.monomial_op(m).accumulate(c.eval_complex(q), self.d, &mut out);
        }
        Ok(out)
    }

    /// Largest relative residual of `X_i X_j - q^{2 C_ij} X_j X_i` over all pairs.
    pub fn max_relation_residual(&self) -> f64 {
        let q = self.q();
        let mut worst = 0.0f64;
        for i in 0..self.mats.len() {
            for j in i + 1..self.mats.len() {
                let r = commutator_residual(&self.mats[i], &self.mats[j], q.powi(2 * self.sig.c(i, j) as i32));
                worst = worst.max(r);
            }
        }
        worst
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max|X - Y| / max(max|X|, max|Y|)`, zero for two zero matrices.
pub fn relative_difference(x: &CMat, y: &CMat) -> f64 {
    let scale = max_abs(x).max(max_abs(y));
    if scale == 0.0 {
        return 0.0;
    }
    max_abs(&(x - y)) / scale
}

/// Relative residual of `XY = phase * YX`.
pub fn commutator_residual(x: &CMat, y: &CMat, phase: Complex64) -> f64 {
    let xy = x * y;
    let yx = y * x * phase;
    relative_difference(&xy, &yx)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub k: i64,
    pub residual: f64,
    pub ill_conditioned: bool,
}

/// The `k` in the window `|k| <= (d-1)/2` (or `-d/2 < k <= d/2` for even
/// `d`) minimizing `|XY - q^{2k} YX|`, with the relative residual reached.
pub fn measure_commutation(x: &CMat, y: &CMat, d: usize) -> Measured {
    let q = q_value(d);
    let xy = x * y;
    let yx = y * x;
    let scale = max_abs(&xy).max(max_abs(&yx));
    let ill_conditioned = scale <= 1e-12 * max_abs(x) * max_abs(y) || !scale.is_finite();
    let lo = -(((d - 1) / 2) as i64);
    let hi = (d / 2) as i64;
    let mut best = Measured { k: 0, residual: f64::INFINITY, ill_conditioned };
    for k in lo..=hi {
        let res = if scale == 0.0 { 0.0 } else { max_abs(&(&xy - &yx * q.powi(2 * k as i32))) / scale };
        if res < best.residual {
            best.k = k;
            best.residual = res;
        }
    }
    best
}
