//! The `q = 1` layer: totally positive matrices from Lusztig parameters,
//! initial minors, and Haar-measure densities by finite differences.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glq::label;

/// Positive parameters of `U^- T U^+`: `a_mn`, `b_mn` for
/// `1 <= n <= m <= N-1` in the order `a11, a21, a22, a31, ...`, and the
/// diagonal `u_1..u_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveParam {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub u: Vec<f64>,
}

fn tri(n: usize) -> usize {
    n * (n - 1) / 2
}

fn idx(m: usize, k: usize) -> usize {
    tri(m) + k - 1
}

impl PositiveParam {
    pub fn new(n: usize, a: Vec<f64>, b: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(n, "N must be positive".into()));
        }
        if a.len() != tri(n) || b.len() != tri(n) || u.len() != n {
            return Err(Error::InvalidParameter(format!(
                "N={n} needs {} a, {} b and {n} u values, got {}, {}, {}",
                tri(n),
                tri(n),
                a.len(),
                b.len(),
                u.len()
            )));
        }
        if let Some(x) = a.iter().chain(&b).chain(&u).find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter(format!("parameter {x} is not strictly positive")));
        }
        Ok(Self { n, a, b, u })
    }

    pub fn ones(n: usize) -> Self {
        Self { n, a: vec![1.0; tri(n)], b: vec![1.0; tri(n)], u: vec![1.0; n] }
    }

    /// Log-uniform on `[e^-1, e]` in every coordinate.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut draw = || rng.random_range(-1.0f64..=1.0).exp();
        let a = (0..tri(n)).map(|_| draw()).collect();
        let b = (0..tri(n)).map(|_| draw()).collect();
        let u = (0..n).map(|_| draw()).collect();
        Self { n, a, b, u }
    }

    pub fn a(&self, m: usize, k: usize) -> f64 {
        self.a[idx(m, k)]
    }

    pub fn b(&self, m: usize, k: usize) -> f64 {
        self.b[idx(m, k)]
    }

    /// `a.., b.., u..` as one vector.
    pub fn to_vec(&self) -> Vec<f64> {
        self.a.iter().chain(&self.b).chain(&self.u).copied().collect()
    }

    pub fn from_vec(n: usize, v: &[f64]) -> Result<Self> {
        let t = tri(n);
        if v.len() != 2 * t + n {
            return Err(Error::InvalidParameter(format!("expected {} coordinates", 2 * t + n)));
        }
        Self::new(n, v[..t].to_vec(), v[t..2 * t].to_vec(), v[2 * t..].to_vec())
    }

    pub fn names(n: usize) -> Vec<String> {
        let mut out = Vec::new();
        for p in ["a", "b"] {
            for m in 1..n {
                for k in 1..=m {
                    out.push(label(p, m, k));
                }
            }
        }
        out.extend((1..=n).map(|k| format!("u{k}")));
        out
    }

    /// Largest relative difference between two parameter sets.
    pub fn max_relative_error(&self, other: &Self) -> f64 {
        self.to_vec().iter().zip(other.to_vec()).map(|(x, y)| ((x - y) / x).abs()).fold(0.0, f64::max)
    }
}

/// `U^+ = F_1 ... F_{N-1}` with `a_mn` at `(m, m+1)` in `F_n`, at `q = 1`.
pub fn upper_unipotent(n: usize, a: &[f64]) -> DMatrix<f64> {
    let mut acc = DMatrix::identity(n, n);
    for col in 1..n {
        let mut f = DMatrix::identity(n, n);
        for m in col..n {
            f[(m - 1, m)] = a[idx(m, col)];
        }
        acc *= f;
    }
    acc
}

/// `U^- = G_1 ... G_{N-1}` with `b_{m, m+1+k-N}` at `(m+1, m)` in `G_k`.
pub fn lower_unipotent(n: usize, b: &[f64]) -> DMatrix<f64> {
    let mut acc = DMatrix::identity(n, n);
    for k in 1..n {
        let mut g = DMatrix::identity(n, n);
        for m in (n - k)..n {
            g[(m, m - 1)] = b[idx(m, m + 1 + k - n)];
        }
        acc *= g;
    }
    acc
}

/// `g = U^- T U^+`.
pub fn lusztig_matrix(p: &PositiveParam) -> DMatrix<f64> {
    let t = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&p.u));
    lower_unipotent(p.n, &p.b) * t * upper_unipotent(p.n, &p.a)
}

/// `T^+ U^+` with `T^+ = diag(1, v_1, ..., v_{N-1})`, the commuting shadow
/// of the symbolic upper chart.
pub fn upper_part(n: usize, a: &[f64], v: &[f64]) -> DMatrix<f64> {
    let mut d = vec![1.0];
    d.extend_from_slice(v);
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)) * upper_unipotent(n, a)
}

fn det(g: &DMatrix<f64>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> f64 {
    g.view((rows.start, cols.start), (rows.len(), cols.len())).clone_owned().determinant()
}

/// Initial minors `x_ij` (1-based): rows `1..i`, columns `j-i+1..j` for
/// `i < j`; the transposed pattern for `i > j`; leading principal for `i = j`.
pub fn initial_minors_classical(g: &DMatrix<f64>) -> Result<BTreeMap<(usize, usize), f64>> {
    if g.nrows() != g.ncols() {
        return Err(Error::InvalidParameter("matrix is not square".into()));
    }
    let n = g.nrows();
    let mut x = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let v = if i < j {
                det(g, 0..i, j - i..j)
            } else if i > j {
                det(g, i - j..i, 0..j)
            } else {
                det(g, 0..i, 0..i)
            };
            x.insert((i, j), v);
        }
    }
    Ok(x)
}

fn nonzero(v: f64, what: &str) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Numeric(format!("minor {what} vanishes")));
    }
    Ok(v)
}

/// Recovers `a` from the top-anchored minors `y_{i,j}` of a unipotent upper
/// triangular matrix, with `y_{0,j} = y_{i,i} = 1`:
/// `a_{p,n} = y_{p-n+1,p+1} y_{p-n,p-1} / (y_{p-n+1,p} y_{p-n,p})`.
fn unipotent_params(n: usize, y: &dyn Fn(usize, usize) -> Result<f64>) -> Result<Vec<f64>> {
    let mut a = vec![0.0; tri(n)];
    for p in 1..n {
        for k in 1..=p {
            let num = y(p - k + 1, p + 1)? * y(p - k, p - 1)?;
            let den = y(p - k + 1, p)? * y(p - k, p)?;
            a[idx(p, k)] = num / nonzero(den, &format!("for a{p}{k}"))?;
        }
    }
    Ok(a)
}

/// Inverse of `lusztig_matrix` through its initial minors.
pub fn params_from_minors(x: &BTreeMap<(usize, usize), f64>, n: usize) -> Result<PositiveParam> {
    let get = |i: usize, j: usize| -> Result<f64> {
        if i == 0 || j == 0 {
            return Ok(1.0);
        }
        x.get(&(i, j)).copied().ok_or_else(|| Error::InvalidParameter(format!("missing minor x{i},{j}")))
    };
    let mut diag = vec![1.0; n + 1];
    for i in 1..=n {
        diag[i] = nonzero(get(i, i)?, &format!("x{i}{i}"))?;
    }
    // y_{i,j} = x_{ij} / x_{ii} are the minors of U^+; the lower ones of (U^-)^T.
    let yu = |i: usize, j: usize| -> Result<f64> {
        if i == 0 || i == j {
            Ok(1.0)
        } else {
            Ok(get(i, j)? / diag[i])
        }
    };
    let yl = |i: usize, j: usize| -> Result<f64> {
        if i == 0 || i == j {
            Ok(1.0)
        } else {
            Ok(get(j, i)? / diag[i])
        }
    };
    let a = unipotent_params(n, &yu)?;
    // (U^-)^T is U^+ with a_{m,k} = b_{m, m+1-k}
    let at = unipotent_params(n, &yl)?;
    let mut b = vec![0.0; tri(n)];
    for m in 1..n {
        for k in 1..=m {
            b[idx(m, m + 1 - k)] = at[idx(m, k)];
        }
    }
    let u = (1..=n).map(|k| diag[k] / diag[k - 1]).collect();
    PositiveParam::new(n, a, b, u)
}

/// `X_ii = x_ii / x_{i-1,i-1}`, `X_ij = x_ij / x_ii` (`i < j`),
/// `X_ij = x_ij / x_jj` (`i > j`), row-major.
pub fn x_coordinates(g: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = g.nrows();
    let x = initial_minors_classical(g)?;
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let v = if i == j {
                let prev = if i == 1 { 1.0 } else { x[&(i - 1, i - 1)] };
                x[&(i, i)] / nonzero(prev, "on the diagonal")?
            } else if i < j {
                x[&(i, j)] / nonzero(x[&(i, i)], "on the diagonal")?
            } else {
                x[&(i, j)] / nonzero(x[&(j, j)], "on the diagonal")?
            };
            out.push(v);
        }
    }
    Ok(out)
}

/// Inverse of [`x_coordinates`] on the positive part.
pub fn matrix_from_x(n: usize, xc: &[f64]) -> Result<DMatrix<f64>> {
    if xc.len() != n * n {
        return Err(Error::InvalidParameter(format!("expected {} X coordinates", n * n)));
    }
    let at = |i: usize, j: usize| xc[(i - 1) * n + j - 1];
    let mut diag = vec![1.0; n + 1];
    for i in 1..=n {
        diag[i] = diag[i - 1] * at(i, i);
    }
    let mut x = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let v = if i == j {
                diag[i]
            } else if i < j {
                at(i, j) * diag[i]
            } else {
                at(i, j) * diag[j]
            };
            x.insert((i, j), v);
        }
    }
    Ok(lusztig_matrix(&params_from_minors(&x, n)?))
}

/// `|det d g / d c|` by central differences with step `h * |c_k|`.
pub fn jacobian_det(f: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>, at: &[f64], h: f64) -> Result<f64> {
    let dim = at.len();
    let mut jac = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let step = h * at[k].abs().max(1e-300);
        let mut plus = at.to_vec();
        let mut minus = at.to_vec();
        plus[k] += step;
        minus[k] -= step;
        let gp = f(&plus)?;
        let gm = f(&minus)?;
        if gp.len() != dim {
            return Err(Error::InvalidParameter("map is not between spaces of equal dimension".into()));
        }
        for (r, (p, m)) in gp.iter().zip(gm.iter()).enumerate() {
            jac[(r, k)] = (p - m) / (2.0 * step);
        }
    }
    Ok(jac.determinant().abs())
}

/// Coordinates on `GL^+(N)` with a claimed Haar density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// `X_ij` from the initial minors; claimed density
    /// `prod_{i,j<N} X_ij^{-1} * X_NN^{-1}`.
    X,
    /// `(a, b, u)`; claimed density `prod u_k^{-1} prod (a_ij b_ij)^{N-1-i}`.
    Abu,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityReport {
    pub coordinates: Coordinates,
    pub names: Vec<String>,
    /// `(Haar density) / (claimed density)` per sample, divided by the first.
    pub ratios: Vec<f64>,
    pub spread: f64,
    pub pass: bool,
    /// Same with the claimed density multiplied by `prod_k u_k^{N+1-2k}`.
    pub corrected_spread: f64,
    pub corrected_pass: bool,
    /// Least-squares exponents `e` with `ratio ~ const * prod c_k^{e_k}`,
    /// rounded when within 1e-3 of an integer.
    pub fitted_exponents: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HaarReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub h: f64,
    pub tolerance: f64,
    pub resampled: usize,
    pub systems: Vec<DensityReport>,
}

impl HaarReport {
    pub fn pass(&self) -> bool {
        self.systems.iter().all(|s| s.pass)
    }
}

/// Tolerance on the spread of density ratios.
pub fn haar_tolerance(n: usize) -> f64 {
    if n <= 3 {
        1e-5
    } else {
        1e-4
    }
}

fn claimed_density(sys: Coordinates, n: usize, c: &[f64]) -> f64 {
    match sys {
        Coordinates::X => {
            let mut d = 1.0;
            for i in 1..n {
                for j in 1..n {
                    d /= c[(i - 1) * n + j - 1];
                }
            }
            d / c[n * n - 1]
        }
        Coordinates::Abu => {
            let p = PositiveParam::from_vec(n, c).expect("valid coordinates");
            let mut d: f64 = p.u.iter().map(|u| 1.0 / u).product();
            for m in 1..n {
                for k in 1..=m {
                    d *= (p.a(m, k) * p.b(m, k)).powi((n - 1 - m) as i32);
                }
            }
            d
        }
    }
}

/// The diagonal `u_k` read off either coordinate system.
fn diagonal(sys: Coordinates, n: usize, c: &[f64]) -> Vec<f64> {
    match sys {
        Coordinates::X => (1..=n).map(|k| c[(k - 1) * n + k - 1]).collect(),
        Coordinates::Abu => c[2 * tri(n)..].to_vec(),
    }
}

fn spread(values: &[f64]) -> f64 {
    let first = values[0];
    values.iter().map(|v| (v / first - 1.0).abs()).fold(0.0, f64::max)
}

fn fit_exponents(points: &[Vec<f64>], ratios: &[f64]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let rows = points.len();
    if rows <= dim {
        return vec![f64::NAN; dim];
    }
    let design = DMatrix::from_fn(rows, dim + 1, |r, c| if c == 0 { 1.0 } else { points[r][c - 1].ln() });
    let rhs = nalgebra::DVector::from_iterator(rows, ratios.iter().map(|r| r.ln()));
    let sol = design.svd(true, true).solve(&rhs, 1e-12).expect("svd has both factors");
    sol.iter().skip(1).map(|&e| if (e - e.round()).abs() < 1e-3 { e.round() } else { e }).collect()
}

/// Checks the claimed Haar densities in both coordinate systems on random
/// points. The Haar density in entry coordinates is `|det g|^{-N}`.
pub fn haar_density_check(n: usize, samples: usize, h: f64, seed: u64) -> Result<HaarReport> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidSize(n, "Haar checks cover 1 <= N <= 4".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tolerance = haar_tolerance(n);
    let mut resampled = 0;
    let mut systems = Vec::new();
    let x_map = move |c: &[f64]| matrix_from_x(n, c);
    let abu_map = move |c: &[f64]| Ok(lusztig_matrix(&PositiveParam::from_vec(n, c)?));
    let mut pts: Vec<PositiveParam> = Vec::with_capacity(samples);
    while pts.len() < samples {
        pts.push(PositiveParam::random(n, &mut rng));
    }
    for sys in [Coordinates::X, Coordinates::Abu] {
        let map: &dyn Fn(&[f64]) -> Result<DMatrix<f64>> = match sys {
            Coordinates::X => &x_map,
            Coordinates::Abu => &abu_map,
        };
        let mut ratios = Vec::with_capacity(samples);
        let mut corrected = Vec::with_capacity(samples);
        let mut points = Vec::with_capacity(samples);
        for p in pts.iter_mut() {
            let (c, jac) = loop {
                let g = lusztig_matrix(p);
                let c = match sys {
                    Coordinates::X => x_coordinates(&g)?,
                    Coordinates::Abu => p.to_vec(),
                };
                let jac = jacobian_det(map, &c, h)?;
                if jac.is_finite() && jac > 1e-12 {
                    break (c, jac);
                }
                resampled += 1;
                *p = PositiveParam::random(n, &mut rng);
            };
            let g = map(&c)?;
            let haar = jac / g.determinant().abs().powi(n as i32);
            let claim = claimed_density(sys, n, &c);
            let modular: f64 = diagonal(sys, n, &c).iter().enumerate().map(|(k, u)| u.powi(n as i32 - 1 - 2 * k as i32)).product();
            ratios.push(haar / claim);
            corrected.push(haar / (claim * modular));
            points.push(c);
        }
        let fitted_exponents = fit_exponents(&points, &ratios);
        let first = ratios[0];
        let s = spread(&ratios);
        let cs = spread(&corrected);
        systems.push(DensityReport {
            coordinates: sys,
            names: match sys {
                Coordinates::X => (1..=n).flat_map(|i| (1..=n).map(move |j| format!("X{i}{j}"))).collect(),
                Coordinates::Abu => PositiveParam::names(n),
            },
            ratios: ratios.iter().map(|r| r / first).collect(),
            spread: s,
            pass: s <= tolerance,
            corrected_spread: cs,
            corrected_pass: cs <= tolerance,
            fitted_exponents,
        });
    }
    Ok(HaarReport { n, samples, seed, h, tolerance, resampled, systems })
}

/// Total positivity and parameter recovery on random samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositivityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub min_initial_minor: f64,
    pub positive: bool,
    pub max_round_trip_error: f64,
    pub round_trip_pass: bool,
}

pub fn positivity_check(n: usize, samples: usize, seed: u64) -> Result<PositivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_minor = f64::INFINITY;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = PositiveParam::random(n, &mut rng);
        let g = lusztig_matrix(&p);
        let x = initial_minors_classical(&g)?;
        min_minor = x.values().fold(min_minor, |m, &v| m.min(v));
        let back = params_from_minors(&x, n)?;
        worst = worst.max(p.max_relative_error(&back));
    }
    Ok(PositivityReport {
        n,
        samples,
        seed,
        min_initial_minor: min_minor,
        positive: min_minor > 0.0,
        max_round_trip_error: worst,
        round_trip_pass: worst < 1e-10,
    })
}
