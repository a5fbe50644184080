//! Integer skew-symmetric normal form and rank of commutation matrices.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSignature;
use crate::error::{Error, Result};

/// One `[[0, d], [-d, 0]]` block of the normal form at rows `(first, first+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewBlock {
    pub first: usize,
    pub divisor: i64,
}

/// `S C S^T = diag(d_1 J, ..., d_r J, 0)` with `S` unimodular and
/// `d_1 | d_2 | ... | d_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticReduction {
    pub s: Vec<Vec<i64>>,
    pub s_inv: Vec<Vec<i64>>,
    pub blocks: Vec<SkewBlock>,
    /// Rows of `S` past the blocks; they span the radical of `C`.
    pub kernel_basis: Vec<Vec<i64>>,
}

impl SymplecticReduction {
    pub fn rank(&self) -> usize {
        2 * self.blocks.len()
    }

    pub fn divisors(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.divisor).collect()
    }

    /// The block form the reduction claims.
    pub fn normal_form(&self) -> Vec<Vec<i64>> {
        let n = self.s.len();
        let mut f = vec![vec![0; n]; n];
        for b in &self.blocks {
            f[b.first][b.first + 1] = b.divisor;
            f[b.first + 1][b.first] = -b.divisor;
        }
        f
    }

    /// Recomputes `S C S^T` and `S S^{-1}` exactly.
    pub fn verify(&self, c: &[Vec<i64>]) -> bool {
        let n = c.len();
        if self.s.len() != n || self.s_inv.len() != n {
            return false;
        }
        let big = |m: &[Vec<i64>]| -> Vec<Vec<BigInt>> { m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect() };
        let (s, si, cm) = (big(&self.s), big(&self.s_inv), big(c));
        let st: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| s[j][i].clone()).collect()).collect();
        let form = mat_mul(&mat_mul(&s, &cm), &st);
        let id = mat_mul(&s, &si);
        let expected = big(&self.normal_form());
        form == expected && (0..n).all(|i| (0..n).all(|j| id[i][j] == BigInt::from(i64::from(i == j))))
            && self.blocks.windows(2).all(|w| w[1].divisor % w[0].divisor == 0)
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Working state: `m = s c s^T` is maintained under paired row and column
/// operations, `s_inv` follows along.
struct Work {
    m: Vec<Vec<i128>>,
    s: Vec<Vec<i128>>,
    s_inv: Vec<Vec<i128>>,
}

impl Work {
    /// row j += k row i, col j += k col i.
    fn add(&mut self, j: usize, i: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let n = self.m.len();
        for t in 0..n {
            self.m[j][t] = self.m[i][t].checked_mul(k).and_then(|x| x.checked_add(self.m[j][t])).ok_or(Error::ExponentOverflow)?;
            self.s[j][t] = self.s[i][t].checked_mul(k).and_then(|x| x.checked_add(self.s[j][t])).ok_or(Error::ExponentOverflow)?;
        }
        for t in 0..n {
            self.m[t][j] = self.m[t][i].checked_mul(k).and_then(|x| x.checked_add(self.m[t][j])).ok_or(Error::ExponentOverflow)?;
            // S' = E S gives S'^{-1} = S^{-1} E^{-1}: col i -= k col j.
            self.s_inv[t][i] = self.s_inv[t][j].checked_mul(k).and_then(|x| self.s_inv[t][i].checked_sub(x)).ok_or(Error::ExponentOverflow)?;
        }
        Ok(())
    }

    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap(i, j);
        self.s.swap(i, j);
        for row in &mut self.m {
            row.swap(i, j);
        }
        for row in &mut self.s_inv {
            row.swap(i, j);
        }
    }
}

/// Reduces an antisymmetric integer matrix to skew normal form.
/// Deterministic: pivots are the first entry of least absolute value in
/// row-major order.
pub fn symplectic_reduce(c: &[Vec<i64>]) -> Result<SymplecticReduction> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(Error::SizeMismatch { rows: n, cols: row.len(), names: n });
        }
        for j in i..n {
            if c[i][j] != -c[j][i] {
                return Err(Error::NotAntisymmetric(i, j));
            }
        }
    }
    let ident = |n: usize| -> Vec<Vec<i128>> { (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect() };
    let mut w = Work { m: c.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect(), s: ident(n), s_inv: ident(n) };
    let mut blocks = Vec::new();
    let mut p = 0;
    while p + 1 < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in p..n {
            for j in p..n {
                let x = w.m[i][j];
                if x > 0 && best.is_none_or(|(_, _, b)| x < b) {
                    best = Some((i, j, x));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        w.swap(p, i);
        let j = if j == p { i } else { j };
        w.swap(p + 1, j);
        loop {
            let d = w.m[p][p + 1];
            debug_assert!(d > 0);
            let mut restart = false;
            for k in p + 2..n {
                let qk = w.m[p][k].div_euclid(d);
                w.add(k, p + 1, -qk)?;
                let ql = w.m[p + 1][k].div_euclid(-d);
                w.add(k, p, -ql)?;
                if w.m[p][k] != 0 || w.m[p + 1][k] != 0 {
                    restart = true;
                }
            }
            if !restart {
                // divisibility of the rest by d
                let bad = (p + 2..n).flat_map(|a| (p + 2..n).map(move |b| (a, b))).find(|&(a, b)| w.m[a][b] % d != 0);
                match bad {
                    None => break,
                    Some((a, _)) => {
                        w.add(p, a, 1)?;
                        restart = true;
                    }
                }
            }
            if restart {
                // move the smallest nonzero entry of rows p, p+1 to (p, p+1)
                let mut best: Option<(usize, usize, i128)> = None;
                for r in [p, p + 1] {
                    for k in p..n {
                        let x = w.m[r][k].abs();
                        if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                            best = Some((r, k, x));
                        }
                    }
                }
                let (r, k, _) = best.expect("pivot row is nonzero");
                if r == p + 1 {
                    w.swap(p, p + 1);
                }
                let k = if k == p { p + 1 } else { k };
                w.swap(p + 1, k);
                if w.m[p][p + 1] < 0 {
                    w.swap(p, p + 1);
                }
            }
        }
        blocks.push(SkewBlock { first: p, divisor: i64::try_from(w.m[p][p + 1]).map_err(|_| Error::ExponentOverflow)? });
        p += 2;
    }
    let to64 = |m: Vec<Vec<i128>>| -> Result<Vec<Vec<i64>>> {
        m.into_iter().map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::ExponentOverflow)).collect()).collect()
    };
    let s = to64(w.s)?;
    let s_inv = to64(w.s_inv)?;
    let kernel_basis = s[2 * blocks.len()..].to_vec();
    Ok(SymplecticReduction { s, s_inv, blocks, kernel_basis })
}

/// Rank data of a commutation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationRank {
    pub rank: usize,
    pub minimal_tori: usize,
    pub kernel_dim: usize,
}

/// Rank over the rationals by fraction-free elimination.
pub fn rational_rank(c: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = c.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for k in col + 1..cols {
                let v = (&m[rank][col] * &m[r][k] - &m[r][col] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn commutation_rank(sig: &AlgebraSignature) -> CommutationRank {
    let rank = rational_rank(sig.commutation());
    CommutationRank { rank, minimal_tori: rank / 2, kernel_dim: sig.len() - rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_pair() {
        let r = symplectic_reduce(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(r.s, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(r.divisors(), vec![1]);
        assert!(r.kernel_basis.is_empty());
    }

    #[test]
    fn divisor_two() {
        let c = vec![vec![0, 2], vec![-2, 0]];
        let r = symplectic_reduce(&c).unwrap();
        assert_eq!(r.divisors(), vec![2]);
        assert!(r.verify(&c));
    }

    #[test]
    fn negative_pivot_and_kernel() {
        let c = vec![vec![0, -3, 6], vec![3, 0, 9], vec![-6, -9, 0]];
        let r = symplectic_reduce(&c).unwrap();
        assert!(r.verify(&c));
        assert_eq!(r.divisors(), vec![3]);
        assert_eq!(r.kernel_basis.len(), 1);
        assert_eq!(rational_rank(&c), 2);
    }

    #[test]
    fn divisibility_chain_is_enforced() {
        // diag(2J, 3J) must become diag(J, 6J)
        let c = vec![vec![0, 2, 0, 0], vec![-2, 0, 0, 0], vec![0, 0, 0, 3], vec![0, 0, -3, 0]];
        let r = symplectic_reduce(&c).unwrap();
        assert!(r.verify(&c));
        assert_eq!(r.divisors(), vec![1, 6]);
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(symplectic_reduce(&[vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rational_rank(&[vec![0]]), 0);
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rational_rank(&[vec![2, 1], vec![1, 3]]), 2);
    }
}
