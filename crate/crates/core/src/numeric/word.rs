//! Reduced words of the longest permutation and numeric charts on them.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::braid::braid_phi;
use super::rep::{build_rep, max_abs, measure_commutation, CMat};
use crate::error::{Error, Result};
use crate::glq::{LusztigChart, Relation};
use crate::skew::commutation_rank;

/// A reduced expression `s_{i_1} ... s_{i_m}` of the longest element of `S_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidWord(format!("no reduced word of w0 for N={n}")));
        }
        let len = n * (n - 1) / 2;
        if letters.len() != len {
            return Err(Error::InvalidWord(format!("length {} but w0 in S_{n} has length {len}", letters.len())));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for (p, &s) in letters.iter().enumerate() {
            if s == 0 || s >= n {
                return Err(Error::InvalidWord(format!("letter {s} outside 1..{}", n - 1)));
            }
            if perm[s - 1] > perm[s] {
                return Err(Error::InvalidWord(format!("not reduced at position {}", p + 1)));
            }
            perm.swap(s - 1, s);
        }
        Ok(Self { n, letters })
    }

    /// Digits such as `"121"`; `N` is one more than the largest letter
    /// unless given.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Self> {
        let letters: Vec<usize> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().map_err(|_| Error::InvalidWord(s.to_owned()))).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| Error::InvalidWord(s.to_owned()))).collect::<Result<_>>()?
        };
        let n = n.unwrap_or_else(|| letters.iter().max().map_or(0, |m| m + 1));
        Self::new(n, letters)
    }

    /// The word of the chart `U^+ = F_1 ... F_{N-1}`, where
    /// `F_n = x_{N-1}(a_{N-1,n}) ... x_n(a_{nn})`.
    pub fn canonical(n: usize) -> Self {
        let letters = (1..n).flat_map(|col| (col..n).rev()).collect();
        Self { n, letters }
    }

    /// Chart generator `(m, n)` of `a_mn` at each position of the canonical word.
    pub fn canonical_labels(n: usize) -> Vec<(usize, usize)> {
        (1..n).flat_map(|col| (col..n).rev().map(move |m| (m, col))).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn moves(&self) -> Vec<Move> {
        let l = &self.letters;
        let mut out = Vec::new();
        for p in 0..l.len().saturating_sub(1) {
            if l[p].abs_diff(l[p + 1]) >= 2 {
                out.push(Move::Swap(p));
            }
            if p + 2 < l.len() && l[p] == l[p + 2] && l[p].abs_diff(l[p + 1]) == 1 {
                out.push(Move::Braid(p));
            }
        }
        out
    }

    pub fn apply(&self, m: Move) -> Self {
        let mut letters = self.letters.clone();
        match m {
            Move::Swap(p) => letters.swap(p, p + 1),
            Move::Braid(p) => {
                let (i, j) = (letters[p], letters[p + 1]);
                letters[p] = j;
                letters[p + 1] = i;
                letters[p + 2] = j;
            }
        }
        Self { n: self.n, letters }
    }

    /// Every reduced word of `w0`, in breadth-first order from the canonical one.
    pub fn all(n: usize) -> Vec<Self> {
        let start = Self::canonical(n);
        let mut seen = vec![start.clone()];
        let mut index: HashMap<Self, ()> = HashMap::from([(start.clone(), ())]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            for m in w.moves() {
                let x = w.apply(m);
                if index.insert(x.clone(), ()).is_none() {
                    seen.push(x.clone());
                    queue.push_back(x);
                }
            }
        }
        seen
    }

    /// Shortest move sequence from the canonical word to this one.
    pub fn path_from_canonical(&self) -> Result<Vec<Move>> {
        let start = Self::canonical(self.n);
        let mut parent: HashMap<Self, Option<(Self, Move)>> = HashMap::from([(start.clone(), None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            if &w == self {
                let mut path = Vec::new();
                let mut cur = w;
                while let Some(Some((prev, m))) = parent.get(&cur).cloned() {
                    path.push(m);
                    cur = prev;
                }
                path.reverse();
                return Ok(path);
            }
            for m in w.moves() {
                let x = w.apply(m);
                if !parent.contains_key(&x) {
                    parent.insert(x.clone(), Some((w.clone(), m)));
                    queue.push_back(x);
                }
            }
        }
        Err(Error::InvalidWord(format!("{self} is not connected to the canonical word")))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n > 10 { "," } else { "" };
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(sep))
    }
}

/// 2-move (commuting letters) or 3-move (`s_i s_j s_i -> s_j s_i s_j`) at a
/// position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Swap(usize),
    Braid(usize),
}

/// `N x N` matrix of `D x D` blocks.
pub type BlockMatrix = Vec<Vec<CMat>>;

/// Numeric residual of one relation on one minor; indices 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericMinorCheck {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub relation: Relation,
    pub residual: f64,
}

/// All `GL_q(2)` relations on every 2x2 minor of a block matrix.
pub fn numeric_minor_relations(z: &BlockMatrix, q: Complex64) -> Vec<NumericMinorCheck> {
    let n = z.len();
    let q2 = q * q;
    let dim = z.first().and_then(|r| r.first()).map_or(0, |m| m.nrows());
    let zero = z.iter().map(|r| r.iter().map(|m| max_abs(m) == 0.0).collect::<Vec<_>>()).collect::<Vec<_>>();
    let mut cache: HashMap<(usize, usize, usize, usize), CMat> = HashMap::new();
    let mut prod = |x: (usize, usize), y: (usize, usize)| -> CMat {
        cache
            .entry((x.0, x.1, y.0, y.1))
            .or_insert_with(|| if zero[x.0][x.1] || zero[y.0][y.1] { CMat::zeros(dim, dim) } else { &z[x.0][x.1] * &z[y.0][y.1] })
            .clone()
    };
    let mut out = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    let (a, b, c, d) = ((i, j), (i, l), (k, j), (k, l));
                    for rel in Relation::ALL {
                        let pair = |x, y, p: Complex64, prod: &mut dyn FnMut((usize, usize), (usize, usize)) -> CMat| {
                            let lhs = prod(x, y);
                            let rhs = prod(y, x) * p;
                            let scale = max_abs(&lhs).max(max_abs(&rhs));
                            (lhs - rhs, scale)
                        };
                        let (diff, scale) = match rel {
                            Relation::Z1 => pair(a, b, Complex64::new(1.0, 0.0), &mut prod),
                            Relation::Z2 => pair(c, d, Complex64::new(1.0, 0.0), &mut prod),
                            Relation::Z3 => pair(a, c, q2, &mut prod),
                            Relation::Z4 => pair(b, d, q2, &mut prod),
                            Relation::Z5 => pair(b, c, q2, &mut prod),
                            Relation::Z6 => {
                                let (ad, bc, da, cb) = (prod(a, d), prod(b, c), prod(d, a), prod(c, b));
                                let scale = max_abs(&ad).max(max_abs(&bc)).max(max_abs(&da)).max(max_abs(&cb));
                                (ad - bc - (da - cb), scale)
                            }
                        };
                        let residual = if scale == 0.0 { 0.0 } else { max_abs(&diff) / scale };
                        out.push(NumericMinorCheck { rows: (i + 1, k + 1), cols: (j + 1, l + 1), relation: rel, residual });
                    }
                }
            }
        }
    }
    out
}

/// One `(a_{i,m}, a_{j,n}, a_{i,k})` pattern, consecutive in the subword on
/// letters `{i, j}` with `|i - j| = 1`. `observed` is `(C(c,a), C(a,b), C(b,c))`.
/// For `i > j` the triple must satisfy `c -> a -> b` with `b c = c b`; for
/// `i < j` it is the image of such a triple under the braid map, so
/// `b -> c -> a` with `a b = b a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCheck {
    pub letters: (usize, usize),
    pub positions: (usize, usize, usize),
    pub observed: (i64, i64, i64),
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordChart {
    pub word: ReducedWord,
    pub d: usize,
    pub path: Vec<Move>,
    /// Generator names: `p<k>:s<i>` per position, then `v1..v_{N-1}`.
    pub names: Vec<String>,
    #[serde(skip)]
    pub generators: Vec<CMat>,
    pub measured: Vec<Vec<i64>>,
    pub max_deviation: f64,
    pub local_checks: Vec<LocalCheck>,
    /// Each position q^2-commutes with the diagonal entry of its letter and
    /// commutes with the other diagonal entries.
    pub diagonal_pass: bool,
    pub minor_residual: f64,
}

impl WordChart {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_deviation < 1e-6 && self.local_checks.iter().all(|c| c.pass) && self.diagonal_pass && self.minor_residual <= tol
    }
}

/// Realizes the canonical chart by clock/shift matrices, transports it to
/// `word` by 2- and 3-moves, and measures what the transported generators
/// satisfy. Central scalars and per-generator positive multipliers are drawn
/// log-uniformly from `[e^-1, e]`; with equal multipliers `a + c` is
/// singular at a root of unity, since `(a + c)^d = a^d + c^d`.
pub fn word_chart(word: &ReducedWord, d: usize, seed: u64) -> Result<WordChart> {
    let n = word.n();
    let chart = LusztigChart::upper(n)?;
    let kernel = commutation_rank(chart.signature()).kernel_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.random_range(-1.0f64..=1.0).exp();
    let scalars: Vec<f64> = (0..kernel).map(|_| draw()).collect();
    let multipliers: Vec<f64> = (0..chart.len()).map(|_| draw()).collect();
    word_chart_with(word, d, &scalars, &multipliers)
}

pub fn word_chart_with(word: &ReducedWord, d: usize, scalars: &[f64], multipliers: &[f64]) -> Result<WordChart> {
    let n = word.n();
    // re-validate in case the word was deserialized
    ReducedWord::new(n, word.letters().to_vec())?;
    let chart = LusztigChart::upper(n)?;
    let rep = build_rep(chart.signature(), d, scalars)?;
    if multipliers.len() != chart.len() || multipliers.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter(format!("need {} positive multipliers", chart.len())));
    }
    let mat = |i: usize| rep.matrix(i) * Complex64::new(multipliers[i], 0.0);
    let mut gens: Vec<CMat> = ReducedWord::canonical_labels(n).iter().map(|&(m, k)| mat(chart.a(m, k))).collect();
    let diag: Vec<CMat> = (1..n).map(|m| mat(chart.v(m))).collect();
    let path = word.path_from_canonical()?;
    let mut cur = ReducedWord::canonical(n);
    for &m in &path {
        match m {
            Move::Swap(p) => gens.swap(p, p + 1),
            Move::Braid(p) => {
                let (a, b, c) = braid_phi(&gens[p], &gens[p + 1], &gens[p + 2])?;
                gens[p] = a;
                gens[p + 1] = b;
                gens[p + 2] = c;
            }
        }
        cur = cur.apply(m);
    }
    debug_assert_eq!(&cur, word);
    let len = gens.len();
    let mut names: Vec<String> = word.letters().iter().enumerate().map(|(p, s)| format!("p{}:s{s}", p + 1)).collect();
    names.extend((1..n).map(|m| format!("v{m}")));
    let all: Vec<&CMat> = gens.iter().chain(diag.iter()).collect();
    let total = all.len();
    let mut measured = vec![vec![0i64; total]; total];
    let mut max_deviation = 0.0f64;
    for i in 0..total {
        for j in i + 1..total {
            let m = measure_commutation(all[i], all[j], d);
            if m.ill_conditioned {
                return Err(Error::Numeric(format!("ill-conditioned pair ({}, {})", names[i], names[j])));
            }
            measured[i][j] = m.k;
            measured[j][i] = -m.k;
            max_deviation = max_deviation.max(m.residual);
        }
    }
    let letters = word.letters();
    let mut local_checks = Vec::new();
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) != 1 {
                continue;
            }
            let sub: Vec<usize> = (0..len).filter(|&p| letters[p] == i || letters[p] == j).collect();
            for w in sub.windows(3) {
                let (a, b, c) = (w[0], w[1], w[2]);
                if letters[a] == i && letters[b] == j && letters[c] == i {
                    let observed = (measured[c][a], measured[a][b], measured[b][c]);
                    let expected = if i > j { (1, 1, 0) } else { (1, 0, 1) };
                    local_checks.push(LocalCheck { letters: (i, j), positions: (a + 1, b + 1, c + 1), observed, pass: observed == expected });
                }
            }
        }
    }
    let diagonal_pass = (0..len).all(|p| (1..n).all(|m| measured[p][len + m - 1] == i64::from(letters[p] == m)));
    // Z = T^+ x_{i_1}(g_1) ... x_{i_L}(g_L)
    let dim = rep.dim();
    let zero = CMat::zeros(dim, dim);
    let mut z: BlockMatrix = vec![vec![zero.clone(); n]; n];
    z[0][0] = CMat::identity(dim, dim);
    for m in 1..n {
        z[m][m] = diag[m - 1].clone();
    }
    for (p, g) in gens.iter().enumerate() {
        let s = letters[p];
        for row in z.iter_mut() {
            let add = &row[s - 1] * g;
            row[s] += add;
        }
    }
    let minor_residual = numeric_minor_relations(&z, rep.q()).iter().fold(0.0f64, |acc, c| acc.max(c.residual));
    Ok(WordChart { word: word.clone(), d, path, names, generators: gens, measured, max_deviation, local_checks, diagonal_pass, minor_residual })
}
