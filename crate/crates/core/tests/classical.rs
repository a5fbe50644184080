use glq_core::classical::*;
use glq_core::glq::build_upper;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Leibniz expansion, independent of nalgebra's LU.
fn leibniz(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * (0..n).map(|i| m[i][perm[i]]).product::<f64>();
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    total
}

fn sub(g: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    rows.iter().map(|&r| cols.iter().map(|&c| g[(r, c)]).collect()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

#[test]
fn n2_matrix_by_hand() {
    let (a, b, u1, u2) = (1.7, 0.4, 2.5, 0.9);
    let p = PositiveParam::new(2, vec![a], vec![b], vec![u1, u2]).unwrap();
    let g = lusztig_matrix(&p);
    let expected = DMatrix::from_row_slice(2, 2, &[u1, u1 * a, b * u1, a * b * u1 + u2]);
    assert!((g - expected).abs().max() < 1e-15);
}

#[test]
fn initial_minors_match_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=5 {
        let g = lusztig_matrix(&PositiveParam::random(n, &mut rng));
        let x = initial_minors_classical(&g).unwrap();
        for (&(i, j), &v) in &x {
            let (rows, cols): (Vec<usize>, Vec<usize>) = if i <= j {
                ((0..i).collect(), (j - i..j).collect())
            } else {
                ((i - j..i).collect(), (0..j).collect())
            };
            let want = leibniz(&sub(&g, &rows, &cols));
            assert!((v - want).abs() <= 1e-10 * want.abs().max(1.0), "x{i},{j} at N={n}");
        }
    }
}

#[test]
fn every_minor_is_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=4 {
        for _ in 0..20 {
            let g = lusztig_matrix(&PositiveParam::random(n, &mut rng));
            for k in 1..=n {
                for rows in subsets(n, k) {
                    for cols in subsets(n, k) {
                        assert!(leibniz(&sub(&g, &rows, &cols)) > 0.0, "N={n} rows {rows:?} cols {cols:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn round_trip_up_to_five() {
    for n in 1..=5 {
        let r = positivity_check(n, 100, 3).unwrap();
        assert!(r.round_trip_pass && r.positive, "{r:?}");
    }
}

#[test]
fn upper_part_is_the_chart_at_q_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=4 {
        let (chart, z) = build_upper(n).unwrap();
        let p = PositiveParam::random(n, &mut rng);
        let v: Vec<f64> = (1..n).map(|k| 0.5 + k as f64 / 3.0).collect();
        let mut values = vec![0.0; chart.len()];
        for m in 1..n {
            for k in 1..=m {
                values[chart.a(m, k)] = p.a(m, k);
            }
            values[chart.v(m)] = v[m - 1];
        }
        let sym = z.eval_classical(&values);
        let num = upper_part(n, &p.a, &v);
        for i in 0..n {
            for j in 0..n {
                assert!((sym[i][j] - num[(i, j)]).abs() < 1e-12, "N={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn n2_haar_density_in_abu() {
    // g = [[u1, u1 a], [b u1, a b u1 + u2]]: the Jacobian is u1^2, det g = u1 u2,
    // so the Haar density |det g|^-2 |J| is 1 / u2^2.
    let map = |c: &[f64]| Ok(lusztig_matrix(&PositiveParam::from_vec(2, c)?));
    for c in [[0.7, 1.3, 2.0, 0.5], [2.2, 0.4, 0.6, 1.9]] {
        let jac = jacobian_det(&map, &c, 1e-5).unwrap();
        let det = c[2] * c[3];
        let density = jac / (det * det);
        assert!((density * c[3] * c[3] - 1.0).abs() < 1e-8, "{density}");
    }
}

#[test]
fn haar_corrected_density_is_constant() {
    for n in 2..=3 {
        let r = haar_density_check(n, 50, 1e-5, 7).unwrap();
        for s in &r.systems {
            assert!(s.corrected_pass, "N={n} {:?} {}", s.coordinates, s.corrected_spread);
            let u: Vec<f64> = s.names.iter().zip(&s.fitted_exponents).filter(|(name, _)| name.starts_with('u') || {
                let b = name.as_bytes();
                b[0] == b'X' && b[1] == b[2]
            }).map(|(_, &e)| e).collect();
            let want: Vec<f64> = (1..=n).map(|k| (n as f64) + 1.0 - 2.0 * k as f64).collect();
            assert_eq!(u, want, "N={n} {:?}", s.coordinates);
        }
    }
}

#[test]
fn haar_rejects_large_n() {
    assert!(haar_density_check(5, 10, 1e-5, 1).is_err());
}
