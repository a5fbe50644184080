//! Symbolic Gauss-Lusztig matrices for `GL_q(N)`, the quantum determinant
//! and the `GL_q(2)` minor relations.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSignature, Polynomial};
use crate::error::{Error, Result};

/// Upper chart symbolic checks are capped here by default.
pub const DEFAULT_MAX_UPPER_N: usize = 6;
/// Full chart symbolic checks are capped here by default.
pub const DEFAULT_MAX_FULL_N: usize = 5;

/// Generator label such as `a21`, falling back to `a12,3` style once an
/// index reaches two digits.
pub fn label(prefix: &str, m: usize, n: usize) -> String {
    if m < 10 && n < 10 {
        format!("{prefix}{m}{n}")
    } else {
        format!("{prefix}{m},{n}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// `T^+ U^+`: generators `a_mn` and `v_m`.
    Upper,
    /// `U^- T U^+`: additionally `b_mn` and `u_m`.
    Full,
}

/// Index bookkeeping for the generators of a Lusztig chart.
///
/// The upper generators are ordered `a11, v1, a21, a22, v2, a31, ...`, i.e.
/// row `m` lists `a_m1..a_mm` followed by `v_m`. The full chart appends the
/// lower generators in the same pattern, `b11, u1, b21, b22, u2, ...`.
#[derive(Clone, Debug)]
pub struct LusztigChart {
    n: usize,
    kind: ChartKind,
    sig: Arc<AlgebraSignature>,
}

/// Position of `a_mn` inside one half (`1 <= n <= m`).
fn half_a(m: usize, n: usize) -> usize {
    // rows 1..m-1 occupy sum_{r<m} (r + 1) slots
    (m - 1) * (m + 2) / 2 + (n - 1)
}

fn half_v(m: usize) -> usize {
    half_a(m, m) + 1
}

fn half_len(n: usize) -> usize {
    (n * n + n).saturating_sub(2) / 2
}

enum HalfGen {
    A(usize, usize),
    V(usize),
}

fn half_decode(n: usize) -> Vec<HalfGen> {
    let mut out = Vec::new();
    for m in 1..n {
        for k in 1..=m {
            out.push(HalfGen::A(m, k));
        }
        out.push(HalfGen::V(m));
    }
    out
}

/// The commutation matrix of one half: `a_mn v_m = q^2 v_m a_mn`,
/// `a_mn a_mn' = q^2 a_mn' a_mn` for `n > n'`, `a_mn a_{m-1,n'} = q^2 a_{m-1,n'} a_mn` for `n <= n'`.
fn half_commutation(n: usize) -> Vec<Vec<i64>> {
    let gens = half_decode(n);
    let len = gens.len();
    let mut c = vec![vec![0i64; len]; len];
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            let val = match (gi, gj) {
                (HalfGen::A(m, _), HalfGen::V(k)) if m == k => 1,
                (HalfGen::V(k), HalfGen::A(m, _)) if m == k => -1,
                (HalfGen::A(m, a), HalfGen::A(m2, b)) if m == m2 && a > b => 1,
                (HalfGen::A(m, a), HalfGen::A(m2, b)) if m == m2 && a < b => -1,
                (HalfGen::A(m, a), HalfGen::A(m2, b)) if *m2 + 1 == *m && a <= b => 1,
                (HalfGen::A(m, a), HalfGen::A(m2, b)) if *m + 1 == *m2 && b <= a => -1,
                _ => 0,
            };
            c[i][j] = val;
        }
    }
    c
}

fn half_names(n: usize, a: &str, v: &str) -> Vec<String> {
    half_decode(n)
        .into_iter()
        .map(|g| match g {
            HalfGen::A(m, k) => label(a, m, k),
            HalfGen::V(m) => format!("{v}{m}"),
        })
        .collect()
}

impl LusztigChart {
    /// The chart of `T^+ U^+` with `(N^2 + N - 2) / 2` generators.
    pub fn upper(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(0, "N must be at least 1".into()));
        }
        let sig = AlgebraSignature::new(half_names(n, "a", "v"), half_commutation(n))?;
        Ok(Self { n, kind: ChartKind::Upper, sig: Arc::new(sig) })
    }

    /// The chart of `U^- T U^+` with `N^2 + N - 2` generators. The lower
    /// half commutes with the upper half, and `{b_mn, u_m}` satisfy the
    /// relations of `{a_mn, v_m}` with `q` replaced by `q^{-1}`: in
    /// particular `b_mn u_m^{-1} = q^2 u_m^{-1} b_mn`, while the `b`-`b`
    /// exponents are the negatives of the `a`-`a` ones. This is the only
    /// choice making `U^- T^-` a `GL_q` matrix.
    pub fn full(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(0, "N must be at least 1".into()));
        }
        let h = half_len(n);
        let mut names = half_names(n, "a", "v");
        names.extend(half_names(n, "b", "u"));
        let upper = half_commutation(n);
        let mut c = vec![vec![0i64; 2 * h]; 2 * h];
        for i in 0..h {
            c[i][..h].copy_from_slice(&upper[i]);
            for j in 0..h {
                c[h + i][h + j] = -upper[i][j];
            }
        }
        let sig = AlgebraSignature::new(names, c)?;
        Ok(Self { n, kind: ChartKind::Full, sig: Arc::new(sig) })
    }

    /// Same generator bookkeeping over a different commutation matrix
    /// (used to probe which relations are forced).
    pub fn with_signature(&self, sig: Arc<AlgebraSignature>) -> Result<Self> {
        if sig.len() != self.sig.len() {
            return Err(Error::SizeMismatch { rows: sig.len(), cols: sig.len(), names: self.sig.len() });
        }
        Ok(Self { n: self.n, kind: self.kind, sig })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.sig.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sig.is_empty()
    }

    fn check_a(&self, m: usize, k: usize) {
        assert!(1 <= k && k <= m && m < self.n, "a_{m},{k} is not a generator for N={}", self.n);
    }

    /// Index of `a_mn`, `1 <= n <= m <= N-1`.
    pub fn a(&self, m: usize, n: usize) -> usize {
        self.check_a(m, n);
        half_a(m, n)
    }

    /// Index of `v_m`, `1 <= m <= N-1`.
    pub fn v(&self, m: usize) -> usize {
        assert!(1 <= m && m < self.n, "v_{m} is not a generator for N={}", self.n);
        half_v(m)
    }

    /// Index of `b_mn` (full chart only).
    pub fn b(&self, m: usize, n: usize) -> usize {
        assert_eq!(self.kind, ChartKind::Full, "b generators live in the full chart");
        self.check_a(m, n);
        half_len(self.n) + half_a(m, n)
    }

    /// Index of `u_m`, `1 <= m <= N-1` (full chart only; `u_N = 1`).
    pub fn u(&self, m: usize) -> usize {
        assert_eq!(self.kind, ChartKind::Full, "u generators live in the full chart");
        assert!(1 <= m && m < self.n, "u_{m} is not a generator for N={}", self.n);
        half_len(self.n) + half_v(m)
    }

    pub fn gen(&self, i: usize) -> Polynomial {
        Polynomial::generator(&self.sig, i)
    }

    pub fn a_poly(&self, m: usize, n: usize) -> Polynomial {
        self.gen(self.a(m, n))
    }

    pub fn v_poly(&self, m: usize) -> Polynomial {
        if m == 0 || m == self.n {
            Polynomial::one(&self.sig)
        } else {
            self.gen(self.v(m))
        }
    }

    pub fn b_poly(&self, m: usize, n: usize) -> Polynomial {
        self.gen(self.b(m, n))
    }

    /// `u_m`, with the convention `u_N = 1`.
    pub fn u_poly(&self, m: usize) -> Polynomial {
        if m == self.n {
            Polynomial::one(&self.sig)
        } else {
            self.gen(self.u(m))
        }
    }

    /// Diagonal entry `T_k = u_k v_{k-1}` of the full chart, or `v_{k-1}`
    /// for the upper chart.
    pub fn diagonal(&self, k: usize) -> Polynomial {
        let v = self.v_poly(k - 1);
        match self.kind {
            ChartKind::Upper => v,
            ChartKind::Full => &self.u_poly(k) * &v,
        }
    }
}

/// `N x N` grid of polynomials over one signature.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    n: usize,
    sig: Arc<AlgebraSignature>,
    entries: Vec<Polynomial>,
}

impl OperatorMatrix {
    pub fn zeros(sig: &Arc<AlgebraSignature>, n: usize) -> Self {
        Self { n, sig: Arc::clone(sig), entries: vec![Polynomial::zero(sig); n * n] }
    }

    pub fn identity(sig: &Arc<AlgebraSignature>, n: usize) -> Self {
        let mut m = Self::zeros(sig, n);
        for i in 0..n {
            m.entries[i * n + i] = Polynomial::one(sig);
        }
        m
    }

    pub fn from_entries(sig: &Arc<AlgebraSignature>, n: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        if entries.iter().any(|e| !crate::algebra::same_signature(e.signature(), sig)) {
            return Err(Error::SignatureMismatch);
        }
        Ok(Self { n, sig: Arc::clone(sig), entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    /// Entry `z_ij` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n, "entry ({i},{j}) out of range");
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[(i - 1) * self.n + (j - 1)] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    /// Matrix product with entries multiplied in the order `self_ik other_kj`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter(format!("cannot multiply {0}x{0} by {1}x{1}", self.n, other.n)));
        }
        if !crate::algebra::same_signature(&self.sig, &other.sig) {
            return Err(Error::SignatureMismatch);
        }
        let n = self.n;
        let mut out = Self::zeros(&self.sig, n);
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = Polynomial::zero(&self.sig);
                for k in 1..=n {
                    let (x, y) = (self.entry(i, k), other.entry(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.try_add(&x.try_mul(y)?)?;
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Moves every entry into `sig` through [`Polynomial::lift`].
    pub fn lift(&self, sig: &Arc<AlgebraSignature>, index_map: &[usize]) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.lift(sig, index_map)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, sig: Arc::clone(sig), entries })
    }

    /// Same exponent data read over another signature of equal size.
    pub fn reinterpret(&self, sig: &Arc<AlgebraSignature>) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.reinterpret(sig)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, sig: Arc::clone(sig), entries })
    }

    /// Entries at `q = 1` with commuting generator values.
    pub fn eval_classical(&self, values: &[f64]) -> Vec<Vec<f64>> {
        (1..=self.n).map(|i| (1..=self.n).map(|j| self.entry(i, j).eval_classical(values)).collect()).collect()
    }
}

/// `T^+ U^+` over the given upper chart: `T^+ = diag(1, v_1, ..., v_{N-1})`
/// and `U^+ = F_1 F_2 ... F_{N-1}`, where `F_n` carries `a_mn` at `(m, m+1)`
/// for `m = n..N-1`.
pub fn upper_matrix(chart: &LusztigChart) -> Result<OperatorMatrix> {
    let n = chart.n();
    let sig = chart.signature();
    let mut t = OperatorMatrix::zeros(sig, n);
    for k in 1..=n {
        t.set(k, k, chart.v_poly(k - 1));
    }
    let mut acc = t;
    for col in 1..n {
        let mut f = OperatorMatrix::identity(sig, n);
        for m in col..n {
            f.set(m, m + 1, chart.a_poly(m, col));
        }
        acc = acc.try_mul(&f)?;
    }
    Ok(acc)
}

/// Lower unipotent factor `U^- = G_1 ... G_{N-1}`, the transpose pattern of
/// `U^+`: `G_k` carries `b_{m, m-N+1+k}` at `(m+1, m)` for `m = N-k..N-1`.
fn lower_unipotent(chart: &LusztigChart) -> Result<OperatorMatrix> {
    let n = chart.n();
    let sig = chart.signature();
    let mut acc = OperatorMatrix::identity(sig, n);
    for k in 1..n {
        let mut g = OperatorMatrix::identity(sig, n);
        for m in (n - k)..n {
            g.set(m + 1, m, chart.b_poly(m, m + 1 + k - n));
        }
        acc = acc.try_mul(&g)?;
    }
    Ok(acc)
}

/// `Z = U^- T U^+` with `T_k = u_k v_{k-1}` over a full chart.
pub fn full_matrix(chart: &LusztigChart) -> Result<OperatorMatrix> {
    if chart.kind() != ChartKind::Full {
        return Err(Error::InvalidParameter("full_matrix needs a full chart".into()));
    }
    let n = chart.n();
    let sig = chart.signature();
    let lower = lower_unipotent(chart)?;
    let mut t = OperatorMatrix::zeros(sig, n);
    for k in 1..=n {
        t.set(k, k, chart.u_poly(k));
    }
    // U^- T^- (T^+ U^+)
    lower.try_mul(&t)?.try_mul(&upper_matrix(chart)?)
}

pub fn build_upper(n: usize) -> Result<(LusztigChart, OperatorMatrix)> {
    let chart = LusztigChart::upper(n)?;
    let z = upper_matrix(&chart)?;
    Ok((chart, z))
}

pub fn build_full(n: usize) -> Result<(LusztigChart, OperatorMatrix)> {
    let chart = LusztigChart::full(n)?;
    let z = full_matrix(&chart)?;
    Ok((chart, z))
}

/// Closed form of the `T^+ U^+` entry `(i, i+j)`:
/// `v_{i-1} sum_{t_1 < ... < t_j} a_{i,t_1} a_{i+1,t_2} ... a_{i+j-1,t_j}`.
pub fn entry_closed_form(chart: &LusztigChart, row: usize, col: usize) -> Result<Polynomial> {
    let n = chart.n();
    if row == 0 || col == 0 || row > n || col > n {
        return Err(Error::IndexOutOfRange(format!("({row},{col}) for N={n}")));
    }
    let sig = chart.signature();
    if col < row {
        return Ok(Polynomial::zero(sig));
    }
    let j = col - row;
    let mut sum = Polynomial::zero(sig);
    let mut choice = Vec::with_capacity(j);
    enumerate_increasing(row, j, 1, &mut choice, &mut |ts: &[usize]| {
        let mut p = Polynomial::one(sig);
        for (k, &t) in ts.iter().enumerate() {
            p = &p * &chart.a_poly(row + k, t);
        }
        sum = &sum + &p;
    });
    Ok(&chart.v_poly(row - 1) * &sum)
}

/// Calls `f` on every `t_1 < ... < t_len` with `t_k <= first_row + k - 1`.
fn enumerate_increasing(first_row: usize, len: usize, min: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == len {
        f(acc);
        return;
    }
    let max = first_row + acc.len();
    for t in min..=max {
        acc.push(t);
        enumerate_increasing(first_row, len, t + 1, acc, f);
        acc.pop();
    }
}

/// The six defining relations of `GL_q(2)` on a minor `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    /// `ab = ba`
    Z1,
    /// `cd = dc`
    Z2,
    /// `ac = q^2 ca`
    Z3,
    /// `bd = q^2 db`
    Z4,
    /// `bc = q^2 cb`
    Z5,
    /// `ad - bc = da - cb`
    Z6,
}

impl Relation {
    pub const ALL: [Relation; 6] = [Relation::Z1, Relation::Z2, Relation::Z3, Relation::Z4, Relation::Z5, Relation::Z6];

    pub fn id(self) -> &'static str {
        match self {
            Relation::Z1 => "z1",
            Relation::Z2 => "z2",
            Relation::Z3 => "z3",
            Relation::Z4 => "z4",
            Relation::Z5 => "z5",
            Relation::Z6 => "z6",
        }
    }

    /// `lhs - rhs` of the relation.
    pub fn residual(self, a: &Polynomial, b: &Polynomial, c: &Polynomial, d: &Polynomial) -> Result<Polynomial> {
        let comm = |x: &Polynomial, y: &Polynomial, k: i32| -> Result<Polynomial> { x.try_mul(y)?.try_sub(&y.try_mul(x)?.shift_q(2 * k)) };
        match self {
            Relation::Z1 => comm(a, b, 0),
            Relation::Z2 => comm(c, d, 0),
            Relation::Z3 => comm(a, c, 1),
            Relation::Z4 => comm(b, d, 1),
            Relation::Z5 => comm(b, c, 1),
            Relation::Z6 => {
                let lhs = a.try_mul(d)?.try_sub(&b.try_mul(c)?)?;
                let rhs = d.try_mul(a)?.try_sub(&c.try_mul(b)?)?;
                lhs.try_sub(&rhs)
            }
        }
    }
}

/// Outcome of one relation on one minor; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorCheck {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub n: usize,
    pub checks: Vec<MinorCheck>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MinorCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks every `2 x 2` minor `i < i'`, `j < j'` against the six relations.
pub fn verify_glq2_relations(m: &OperatorMatrix) -> Result<RelationReport> {
    let n = m.n();
    let mut checks = Vec::new();
    for i in 1..=n {
        for i2 in i + 1..=n {
            for j in 1..=n {
                for j2 in j + 1..=n {
                    let (a, b, c, d) = (m.entry(i, j), m.entry(i, j2), m.entry(i2, j), m.entry(i2, j2));
                    for rel in Relation::ALL {
                        let r = rel.residual(a, b, c, d)?;
                        let pass = r.is_zero();
                        checks.push(MinorCheck { rows: (i, i2), cols: (j, j2), relation: rel, pass, residual: (!pass).then_some(r) });
                    }
                }
            }
        }
    }
    Ok(RelationReport { n, checks })
}

fn validate_minor(m: &OperatorMatrix, rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::InvalidMinor(format!("{} rows but {} columns", rows.len(), cols.len())));
    }
    for list in [rows, cols] {
        for (k, &x) in list.iter().enumerate() {
            if x == 0 || x > m.n() {
                return Err(Error::InvalidMinor(format!("index {x} outside 1..={}", m.n())));
            }
            if list[..k].contains(&x) {
                return Err(Error::InvalidMinor(format!("repeated index {x}")));
            }
        }
    }
    Ok(())
}

/// `sum_sigma (-1)^sigma z_{r_1, c_sigma(1)} ... z_{r_k, c_sigma(k)}` with the
/// factors multiplied in the listed row order. The sign is the parity of
/// `sigma` relative to the pairing `rows[t] <-> cols[t]`, which for sorted
/// lists is the usual one. Indices are 1-based.
pub fn quantum_determinant(m: &OperatorMatrix, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
    validate_minor(m, rows, cols)?;
    let k = rows.len();
    if k == 0 {
        return Ok(Polynomial::one(m.signature()));
    }
    if k > 20 {
        return Err(Error::InvalidMinor("minors above 20x20 are not supported".into()));
    }
    // Expansion along the rows in order: det(rows[t..], remaining cols) only
    // depends on the set of columns already used.
    let mut memo: HashMap<u32, Polynomial> = HashMap::new();
    det_rec(m, rows, cols, 0, 0, &mut memo)
}

fn det_rec(m: &OperatorMatrix, rows: &[usize], cols: &[usize], depth: usize, used: u32, memo: &mut HashMap<u32, Polynomial>) -> Result<Polynomial> {
    if depth == rows.len() {
        return Ok(Polynomial::one(m.signature()));
    }
    if let Some(p) = memo.get(&used) {
        return Ok(p.clone());
    }
    let mut acc = Polynomial::zero(m.signature());
    let mut position = 0usize;
    for (t, &c) in cols.iter().enumerate() {
        if used & (1 << t) != 0 {
            continue;
        }
        let z = m.entry(rows[depth], c);
        if !z.is_zero() {
            let rest = det_rec(m, rows, cols, depth + 1, used | (1 << t), memo)?;
            if !rest.is_zero() {
                let term = z.try_mul(&rest)?;
                acc = if position.is_multiple_of(2) { acc.try_add(&term)? } else { acc.try_sub(&term)? };
            }
        }
        position += 1;
    }
    memo.insert(used, acc.clone());
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowOrderReport {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub orders_checked: usize,
    /// Row orders whose determinant differs from the one in the given order.
    pub mismatches: Vec<Vec<usize>>,
}

impl RowOrderReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes the determinant for every reordering of the rows (columns
/// reordered the same way) and compares with the given order.
pub fn verify_row_order_independence(m: &OperatorMatrix, rows: &[usize], cols: &[usize]) -> Result<RowOrderReport> {
    let reference = quantum_determinant(m, rows, cols)?;
    let k = rows.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut mismatches = Vec::new();
    let mut orders_checked = 0;
    loop {
        let r: Vec<usize> = perm.iter().map(|&p| rows[p]).collect();
        let c: Vec<usize> = perm.iter().map(|&p| cols[p]).collect();
        orders_checked += 1;
        if quantum_determinant(m, &r, &c)? != reference {
            mismatches.push(r);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(RowOrderReport { rows: rows.to_vec(), cols: cols.to_vec(), orders_checked, mismatches })
}

/// Lexicographic successor; `false` once the last permutation is reached.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Product `X Y` of two mutually commuting copies of the full chart matrix,
/// with its relation report.
pub fn coproduct_stability_check(n: usize, max_n: usize) -> Result<RelationReport> {
    if n > max_n {
        return Err(Error::InvalidSize(n, format!("coproduct check is capped at N={max_n}")));
    }
    let (chart, z) = build_full(n)?;
    let h = chart.len();
    let doubled = Arc::new(chart.signature().disjoint_union("x.", chart.signature(), "y.")?);
    let left: Vec<usize> = (0..h).collect();
    let right: Vec<usize> = (h..2 * h).collect();
    let x = z.lift(&doubled, &left)?;
    let y = z.lift(&doubled, &right)?;
    verify_glq2_relations(&x.try_mul(&y)?)
}

/// `q`-free determinant of the classical shadow, for cross-checks.
pub fn classical_determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
    a.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_sizes() {
        for n in 1..7 {
            assert_eq!(LusztigChart::upper(n).unwrap().len(), (n * n + n - 2) / 2);
            assert_eq!(LusztigChart::full(n).unwrap().len(), n * n + n - 2);
        }
        assert!(LusztigChart::upper(0).is_err());
    }

    #[test]
    fn chart_indices_match_names() {
        let c = LusztigChart::full(4).unwrap();
        let s = c.signature();
        assert_eq!(s.name(c.a(3, 2)), "a32");
        assert_eq!(s.name(c.v(2)), "v2");
        assert_eq!(s.name(c.b(2, 1)), "b21");
        assert_eq!(s.name(c.u(3)), "u3");
        assert_eq!(s.c(c.a(2, 1), c.v(2)), 1);
        assert_eq!(s.c(c.b(2, 1), c.u(2)), -1);
        assert_eq!(s.c(c.a(2, 2), c.a(2, 1)), 1);
        assert_eq!(s.c(c.a(3, 1), c.a(2, 2)), 1);
        assert_eq!(s.c(c.a(3, 2), c.a(2, 1)), 0);
        assert_eq!(s.c(c.a(2, 1), c.b(2, 1)), 0);
        assert_eq!(s.c(c.b(2, 1), c.b(1, 1)), -1);
        assert_eq!(s.c(c.b(2, 2), c.b(2, 1)), -1);
    }

    #[test]
    fn small_matrices() {
        let (c, z) = build_upper(1).unwrap();
        assert_eq!(c.len(), 0);
        assert_eq!(z, OperatorMatrix::identity(c.signature(), 1));

        let (c, z) = build_upper(2).unwrap();
        assert_eq!(z.entry(1, 1), &Polynomial::one(c.signature()));
        assert_eq!(z.entry(1, 2), &c.a_poly(1, 1));
        assert!(z.entry(2, 1).is_zero());
        assert_eq!(z.entry(2, 2), &c.v_poly(1));

        let (c, z) = build_upper(3).unwrap();
        assert_eq!(z.entry(1, 3), &(&c.a_poly(1, 1) * &c.a_poly(2, 2)));
        assert_eq!(z.entry(2, 3), &(&c.v_poly(1) * &(&c.a_poly(2, 1) + &c.a_poly(2, 2))));
    }

    #[test]
    fn full_two_by_two() {
        let (c, z) = build_full(2).unwrap();
        let (u1, a, b, v1) = (c.u_poly(1), c.a_poly(1, 1), c.b_poly(1, 1), c.v_poly(1));
        assert_eq!(z.entry(1, 1), &u1);
        assert_eq!(z.entry(1, 2), &(&u1 * &a));
        assert_eq!(z.entry(2, 1), &(&b * &u1));
        assert_eq!(z.entry(2, 2), &(&(&(&b * &u1) * &a) + &v1));
        let det = quantum_determinant(&z, &[1, 2], &[1, 2]).unwrap();
        assert_eq!(det, &u1 * &v1);
    }

    #[test]
    fn closed_form_matches_product() {
        for n in 1..=5 {
            let (c, z) = build_upper(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(&entry_closed_form(&c, i, j).unwrap(), z.entry(i, j), "N={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn upper_relations_hold() {
        for n in 2..=4 {
            let (_, z) = build_upper(n).unwrap();
            let r = verify_glq2_relations(&z).unwrap();
            assert!(r.pass(), "N={n}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn full_relations_hold() {
        for n in 2..=3 {
            let (_, z) = build_full(n).unwrap();
            let r = verify_glq2_relations(&z).unwrap();
            assert!(r.pass(), "N={n}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn commutative_shadow_fails_z3() {
        let (c, _) = build_upper(3).unwrap();
        let flat = Arc::new(c.signature().commutative_shadow());
        let z = upper_matrix(&c.with_signature(flat).unwrap()).unwrap();
        let r = verify_glq2_relations(&z).unwrap();
        let bad = r.checks.iter().find(|k| k.rows == (1, 2) && k.cols == (2, 3) && k.relation == Relation::Z3).unwrap();
        assert!(!bad.pass);
        // z12 = a11, z22 = v1: residual (1 - q^2) v1 a11 in normal order
        let (a, v) = (c.a_poly(1, 1).reinterpret(z.signature()).unwrap(), c.v_poly(1).reinterpret(z.signature()).unwrap());
        let expected = (&a * &v).try_sub(&(&v * &a).shift_q(2)).unwrap();
        assert_eq!(bad.residual.as_ref().unwrap(), &expected);
    }

    #[test]
    fn determinant_edge_cases() {
        let (c, z) = build_upper(3).unwrap();
        assert!(quantum_determinant(&z, &[1, 2], &[1]).is_err());
        assert!(quantum_determinant(&z, &[1, 1], &[1, 2]).is_err());
        assert!(quantum_determinant(&z, &[1, 4], &[1, 2]).is_err());
        let id = OperatorMatrix::identity(c.signature(), 3);
        assert_eq!(quantum_determinant(&id, &[1, 2, 3], &[1, 2, 3]).unwrap(), Polynomial::one(c.signature()));
        let x23 = quantum_determinant(&z, &[1, 2], &[2, 3]).unwrap();
        let expect = &(&c.a_poly(1, 1) * &c.a_poly(2, 1)) * &c.v_poly(1);
        assert_eq!(x23, expect);
    }

    #[test]
    fn row_order() {
        let (_, z) = build_upper(3).unwrap();
        assert!(verify_row_order_independence(&z, &[1, 2], &[2, 3]).unwrap().pass());
        assert!(verify_row_order_independence(&z, &[2], &[3]).unwrap().pass());
        let (_, z) = build_full(3).unwrap();
        let r = verify_row_order_independence(&z, &[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(r.orders_checked, 6);
        assert!(r.pass());
    }

    #[test]
    fn coproduct_small() {
        assert!(coproduct_stability_check(1, 3).unwrap().pass());
        assert!(coproduct_stability_check(2, 3).unwrap().pass());
        assert!(coproduct_stability_check(4, 3).is_err());
    }

    #[test]
    fn permutations_enumerate() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
