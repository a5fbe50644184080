//! Acceptance criteria, one line each. Criteria whose outcome is known to
//! differ from the stated claim are listed in `EXPECTED_FAIL`; the binary
//! exits nonzero whenever an outcome differs from what is expected, in
//! either direction.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use glq_core::classical::{haar_density_check, positivity_check};
use glq_core::cluster::{cluster_indices, cluster_monomial, initial_minor, initial_minor_of, p_exponent, verify_cluster_commutation};
use glq_core::glq::{build_full, build_upper, coproduct_stability_check, quantum_determinant, upper_matrix, verify_glq2_relations, verify_row_order_independence, LusztigChart};
use glq_core::numeric::braid::braid_sweep;
use glq_core::numeric::rep::relative_difference;
use glq_core::numeric::word::numeric_minor_relations;
use glq_core::numeric::{build_rep, measure_commutation, word_chart, ReducedWord};
use glq_core::skew::{commutation_rank, symplectic_reduce};
use glq_core::tori::{example64_repaired, sweep_family, Family, FamilyConvention, EXAMPLE64};
use glq_core::AlgebraSignature;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Table rows at N=6 contradict the chart; the printed densities miss a
/// modular factor. See the decisions ledger.
const EXPECTED_FAIL: [u32; 2] = [7, 10];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c1() -> Outcome {
    let mut failures = 0;
    let mut n5 = 0.0;
    for n in 2..=5 {
        let t = Instant::now();
        let (_, z) = build_upper(n).unwrap();
        failures += verify_glq2_relations(&z).unwrap().failures().count();
        if n == 5 {
            n5 = t.elapsed().as_secs_f64();
        }
    }
    outcome(failures == 0 && n5 < 60.0, format!("{failures} nonzero residuals, N=5 in {n5:.2} s (limit 60 s)"))
}

fn c2() -> Outcome {
    let chart = LusztigChart::upper(3).unwrap();
    let sig = chart.signature();
    let k = sig.len();
    let (mut tried, mut detected) = (0, 0);
    for i in 0..k {
        for j in i + 1..k {
            for delta in [-1, 1] {
                let mut c = sig.commutation().to_vec();
                c[i][j] += delta;
                c[j][i] -= delta;
                let perturbed = Arc::new(AlgebraSignature::new(sig.names().to_vec(), c).unwrap());
                let z = upper_matrix(&chart.with_signature(perturbed).unwrap()).unwrap();
                tried += 1;
                if !verify_glq2_relations(&z).unwrap().pass() {
                    detected += 1;
                }
            }
        }
    }
    outcome(detected == tried, format!("{detected}/{tried} perturbations detected ({} generators, every off-diagonal entry +-1)", k))
}

fn c3() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 2..=5 {
        let chart = LusztigChart::upper(n).unwrap();
        for j in 2..=n {
            for i in 1..j {
                checked += 1;
                if cluster_monomial(&chart, i, j).unwrap() != initial_minor(&chart, i, j).unwrap() {
                    bad.push(format!("N={n} x{i},{j}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} minors, mismatches: {bad:?}"))
}

fn c4() -> Outcome {
    let mut pairs = 0;
    let mut mismatches = 0;
    for n in 2..=5 {
        let r = verify_cluster_commutation(&LusztigChart::upper(n).unwrap()).unwrap();
        pairs += r.pairs.len();
        mismatches += r.mismatches().count();
    }
    let mut box_bad = 0;
    for i in 1..=6 {
        for j in 1..=6 {
            for k in 1..=6 {
                for l in 1..=6 {
                    let p = p_exponent(i, j, k, l);
                    if p != -p_exponent(k, l, i, j) || p != p_exponent(i, j - 1, k, l - 1) {
                        box_bad += 1;
                    }
                }
            }
        }
    }
    outcome(mismatches == 0 && box_bad == 0, format!("{pairs} cluster pairs, {mismatches} mismatches; {box_bad} failures of antisymmetry/recursion on 1..6"))
}

fn c5() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let (_, z) = build_full(n).unwrap();
        let f = verify_glq2_relations(&z).unwrap().failures().count();
        ok &= f == 0;
        notes.push(format!("full N={n}: {f}"));
    }
    for n in 2..=3 {
        let f = coproduct_stability_check(n, 3).unwrap().failures().count();
        ok &= f == 0;
        notes.push(format!("product N={n}: {f}"));
    }
    for n in 1..=4 {
        let (_, z) = build_full(n).unwrap();
        let rows: Vec<usize> = (1..=n).collect();
        let r = verify_row_order_independence(&z, &rows, &rows).unwrap();
        ok &= r.pass();
        notes.push(format!("det rows N={n}: {}/{}", r.orders_checked - r.mismatches.len(), r.orders_checked));
    }
    let (chart, z) = build_full(2).unwrap();
    let det = quantum_determinant(&z, &[1, 2], &[1, 2]).unwrap();
    let u1v1 = chart.u_poly(1).try_mul(&chart.v_poly(1)).unwrap();
    let det_ok = det == u1v1;
    ok &= det_ok;
    notes.push(format!("det_q at N=2 is u1 v1: {det_ok}"));
    outcome(ok, notes.join("; "))
}

fn c6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (kind, sizes, expect) in [("upper", 2..=8usize, 4usize), ("full", 2..=6, 2)] {
        let mut got = Vec::new();
        for n in sizes {
            let chart = if kind == "upper" { LusztigChart::upper(n) } else { LusztigChart::full(n) }.unwrap();
            let c = commutation_rank(chart.signature());
            let red = symplectic_reduce(chart.signature().commutation()).unwrap();
            ok &= c.minimal_tori == n * n / expect && red.verify(chart.signature().commutation()) && red.rank() == c.rank;
            got.push(c.minimal_tori);
        }
        notes.push(format!("{kind}: {got:?}"));
    }
    outcome(ok, format!("minimal tori {}; certificates verified", notes.join(", ")))
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn c7() -> Outcome {
    let pinned: BTreeMap<String, FamilyConvention> = serde_json::from_str(&golden("conventions.json")).unwrap();
    let table: Vec<(String, String)> = serde_json::from_str(&golden("example64.json")).unwrap();
    let verbatim = table.len() == EXAMPLE64.len() && table.iter().zip(EXAMPLE64).all(|((s, w), (s2, w2))| s == s2 && w == w2);
    let mut ok = verbatim;
    let mut notes = Vec::new();
    for f in Family::ALL {
        let sweep = sweep_family(f).unwrap();
        let frozen = pinned.get(f.name()) == Some(&sweep.chosen) && sweep.chosen == f.frozen();
        let mut failing = Vec::new();
        for n in f.sizes() {
            let e = f.embedding(n).unwrap();
            if !e.pass() || e.convention != f.frozen() {
                failing.push(format!("N={n} ({} violations)", e.report.violations.len()));
            }
        }
        ok &= frozen && failing.is_empty();
        notes.push(format!("{} [{}]{}", f.name(), sweep.chosen, if failing.is_empty() { String::new() } else { format!(" fails at {}", failing.join(", ")) }));
    }
    let repaired = example64_repaired(6).unwrap().pass();
    notes.push(format!("table verbatim: {verbatim}; with the two-row repair N=6 passes: {repaired}"));
    outcome(ok, notes.join("; "))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    let mut ok = true;
    for d in [5, 7, 11] {
        let s = braid_sweep(d, 100, &mut rng).unwrap();
        ok &= s.worst.pass(1e-9);
        notes.push(format!("d={d}: {:.1e}", s.worst.worst()));
    }
    outcome(ok, format!("100 instances each, worst relative residual {}", notes.join(", ")))
}

fn c9() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, d, step) in [(3, 5, 1), (4, 3, 2)] {
        let words = ReducedWord::all(n);
        let (mut dev, mut res, mut count, mut passed) = (0.0f64, 0.0f64, 0, 0);
        for w in words.iter().step_by(step) {
            let wc = word_chart(w, d, 1).unwrap();
            dev = dev.max(wc.max_deviation);
            res = res.max(wc.minor_residual);
            count += 1;
            if wc.pass(1e-9) {
                passed += 1;
            }
        }
        ok &= passed == count;
        notes.push(format!("N={n} d={d}: {passed}/{count} of {} words, deviation {dev:.1e}, minors {res:.1e}", words.len()));
    }
    outcome(ok, notes.join("; "))
}

fn c10() -> Outcome {
    let mut ok = true;
    let mut rt = 0.0f64;
    for n in 1..=5 {
        let r = positivity_check(n, 200, 10).unwrap();
        rt = rt.max(r.max_round_trip_error);
        ok &= r.round_trip_pass;
    }
    let mut positive = true;
    for n in 1..=6 {
        positive &= positivity_check(n, 1000, 20 + n as u64).unwrap().positive;
    }
    ok &= positive;
    let mut haar = Vec::new();
    for n in 2..=3 {
        let h = haar_density_check(n, 50, 1e-5, 7).unwrap();
        for s in &h.systems {
            ok &= s.pass;
            haar.push(format!("N={n} {:?} spread {:.1e} (corrected {:.1e})", s.coordinates, s.spread, s.corrected_spread));
        }
    }
    outcome(ok, format!("round trip {rt:.1e} (limit 1e-10); positivity {positive}; Haar vs 1e-5: {}", haar.join(", ")))
}

fn c11() -> Outcome {
    let d = 7;
    let mut worst = 0.0f64;
    let mut exp_bad = 0;
    for (n, full) in [(2, false), (3, false), (2, true)] {
        let (chart, z) = if full { build_full(n) } else { build_upper(n) }.unwrap();
        let kernel = commutation_rank(chart.signature()).kernel_dim;
        let scalars: Vec<f64> = (0..kernel).map(|k| 0.6 + 0.3 * k as f64).collect();
        let rep = build_rep(chart.signature(), d, &scalars).unwrap();
        worst = worst.max(rep.max_relation_residual());
        let blocks: Vec<Vec<_>> = (1..=n).map(|i| (1..=n).map(|j| rep.eval_polynomial(z.entry(i, j)).unwrap()).collect()).collect();
        worst = numeric_minor_relations(&blocks, rep.q()).iter().fold(worst, |w, c| w.max(c.residual));
        if full {
            continue;
        }
        for j in 2..=n {
            for i in 1..j {
                let x = rep.eval_polynomial(&initial_minor_of(&z, i, j).unwrap()).unwrap();
                let y = rep.eval_polynomial(&cluster_monomial(&chart, i, j).unwrap()).unwrap();
                worst = worst.max(relative_difference(&x, &y));
            }
        }
        let idx = cluster_indices(n);
        let xs: Vec<_> = idx.iter().map(|&(i, j)| rep.eval_polynomial(&initial_minor_of(&z, i, i + j).unwrap()).unwrap()).collect();
        for (a, &(i, j)) in idx.iter().enumerate() {
            for (b, &(k, l)) in idx.iter().enumerate() {
                let m = measure_commutation(&xs[a], &xs[b], d);
                worst = worst.max(m.residual);
                if m.k != p_exponent(i, j, k, l) {
                    exp_bad += 1;
                }
            }
        }
    }
    outcome(worst <= 1e-9 && exp_bad == 0, format!("d={d}, worst relative residual {worst:.1e}, {exp_bad} exponent mismatches"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "upper chart satisfies every 2x2 minor relation, N=2..5", c1),
        (2, "perturbing the N=3 commutation matrix breaks a relation", c2),
        (3, "cluster monomial equals initial minor, N=2..5", c3),
        (4, "cluster exponents equal P; P antisymmetric and shift invariant", c4),
        (5, "full chart, doubled product and quantum determinant", c5),
        (6, "minimal torus counts and normal-form certificates", c6),
        (7, "embedding families pass under frozen conventions, N<=6", c7),
        (8, "braid map on clock/shift triples, d=5,7,11", c8),
        (9, "word charts for all reduced words, N=3,4", c9),
        (10, "round trip, positivity and Haar densities", c10),
        (11, "symbolic identities hold under clock/shift at d=7", c11),
    ];
    let mut surprises = Vec::new();
    for (id, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let expected = !EXPECTED_FAIL.contains(&id);
        println!("[{}] {id:>2}. {name}: {} ({:.1} s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
        if o.pass != expected {
            surprises.push(id);
        }
    }
    if !surprises.is_empty() {
        eprintln!("outcome differs from the recorded expectation for criteria {surprises:?}");
        std::process::exit(1);
    }
}
