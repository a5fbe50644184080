//! Verification reports and the suites behind the command line.

use serde::{Deserialize, Serialize};

use crate::classical::{haar_density_check, positivity_check, Coordinates, HaarReport, PositivityReport};
use crate::cluster::{cluster_monomial, initial_minor, ratio_chart, verify_cluster_commutation};
use crate::error::{Error, Result};
use crate::glq::{build_full, build_upper, coproduct_stability_check, verify_glq2_relations, verify_row_order_independence, LusztigChart, RelationReport};
use crate::morphism::MorphismReport;
use crate::numeric::{word_chart, ReducedWord};
use crate::tori::{minimal_embedding, parse_table_word, render_table_word, used_tori, Embedding, Family, FamilyConvention, EXAMPLE64};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub pass: bool,
    /// Numeric residual, or a count of failing items for exact checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// First failing residual polynomial or other pointer into the data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, pass: bool) -> Self {
        Self { id: id.into(), pass, residual: None, reference: None }
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn reference(mut self, r: impl Into<String>) -> Self {
        self.reference = Some(r.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConventionRecord {
    pub family: String,
    pub convention: FamilyConvention,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Params,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<ConventionRecord>,
}

impl VerificationReport {
    /// Sorts the checks by id and sets `pass`.
    pub fn new(suite: impl Into<String>, params: Params, mut checks: Vec<CheckRecord>, convention: Option<ConventionRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = checks.iter().all(|c| c.pass);
        Self { suite: suite.into(), params, pass, checks, convention }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_text(&self) -> String {
        let mode = self.params.mode.as_deref().map(|m| format!(" {m}")).unwrap_or_default();
        let mut out = format!("{}{mode} N={}: {}\n", self.suite, self.params.n, if self.pass { "PASS" } else { "FAIL" });
        if let Some(c) = &self.convention {
            out += &format!("  convention {}: {}\n", c.family, c.convention);
        }
        for c in &self.checks {
            out += &format!("  {:<4} {}", if c.pass { "ok" } else { "FAIL" }, c.id);
            if let Some(r) = c.residual {
                out += &format!("  residual={r:.3e}");
            }
            if let Some(r) = &c.reference {
                out += &format!("  {r}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn relation_record(id: &str, r: &RelationReport) -> CheckRecord {
    let failures: Vec<_> = r.failures().collect();
    let mut rec = CheckRecord::new(id, failures.is_empty()).residual(failures.len() as f64);
    if let Some(f) = failures.first() {
        let poly = f.residual.as_ref().map(|p| p.to_string()).unwrap_or_default();
        rec = rec.reference(format!("{} rows {:?} cols {:?}: {poly}", f.relation.id(), f.rows, f.cols));
    }
    rec
}

pub fn morphism_record(id: &str, r: &MorphismReport) -> CheckRecord {
    let mut rec = CheckRecord::new(id, r.pass()).residual(r.violations.len() as f64);
    if let Some(v) = r.violations.first() {
        rec = rec.reference(format!("{} vs {}: q^{} expected q^{}", v.left, v.right, 2 * v.observed, 2 * v.expected));
    }
    rec
}

/// Largest `N` the exact suites accept.
pub const VERIFY_CAP: usize = 6;

/// Exact suites on the charts of size `n`, plus the numeric word chart when
/// a word is given.
pub fn verify_suite(n: usize, word: Option<&ReducedWord>, max_n: usize, d: usize, seed: u64) -> Result<VerificationReport> {
    if n == 0 || n > max_n {
        return Err(Error::InvalidSize(n, format!("verify needs 1 <= N <= {max_n}")));
    }
    if let Some(w) = word {
        if w.n() != n {
            return Err(Error::InvalidWord(format!("word {w} is for N={}, not N={n}", w.n())));
        }
    }
    let mut checks = Vec::new();
    let (chart, z) = build_upper(n)?;
    checks.push(relation_record("minors.upper", &verify_glq2_relations(&z)?));
    let (_, full) = build_full(n)?;
    checks.push(relation_record("minors.full", &verify_glq2_relations(&full)?));
    let mut bad = Vec::new();
    for j in 2..=n {
        for i in 1..j {
            if cluster_monomial(&chart, i, j)? != initial_minor(&chart, i, j)? {
                bad.push(format!("x{i},{j}"));
            }
        }
    }
    let mut rec = CheckRecord::new("cluster.order", bad.is_empty()).residual(bad.len() as f64);
    if let Some(b) = bad.first() {
        rec = rec.reference(b.clone());
    }
    checks.push(rec);
    let cl = verify_cluster_commutation(&chart)?;
    let mut rec = CheckRecord::new("cluster.exponents", cl.pass()).residual(cl.mismatches().count() as f64);
    if let Some(m) = cl.mismatches().next() {
        rec = rec.reference(format!("({},{};{},{}): {:?} vs P={}", m.i, m.j, m.k, m.l, m.symbolic, m.p));
    }
    checks.push(rec);
    if n >= 2 {
        let rc = ratio_chart(&chart)?;
        checks.push(CheckRecord::new("cluster.ratio", rc.pass()));
    }
    if n <= 3 {
        checks.push(relation_record("coproduct", &coproduct_stability_check(n, 3)?));
    }
    if n <= 4 {
        let rows: Vec<usize> = (1..=n).collect();
        let r = verify_row_order_independence(&full, &rows, &rows)?;
        checks.push(CheckRecord::new("det.row_order", r.pass()).residual(r.mismatches.len() as f64));
    }
    let mut params = Params { n, ..Params::default() };
    if let Some(w) = word {
        let wc = word_chart(w, d, seed)?;
        checks.push(
            CheckRecord::new(format!("word.{w}"), wc.pass(1e-9))
                .residual(wc.minor_residual)
                .reference(format!("max deviation {:.2e}", wc.max_deviation)),
        );
        params.word = Some(w.to_string());
        params.d = Some(d);
        params.seed = Some(seed);
    }
    Ok(VerificationReport::new("verify", params, checks, None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedMode {
    Thm61,
    Full,
    Reduced,
    Minimal,
    Example64,
}

impl EmbedMode {
    pub const ALL: [EmbedMode; 5] = [EmbedMode::Thm61, EmbedMode::Full, EmbedMode::Reduced, EmbedMode::Minimal, EmbedMode::Example64];

    pub fn name(self) -> &'static str {
        match self {
            EmbedMode::Thm61 => "thm61",
            EmbedMode::Full => "full",
            EmbedMode::Reduced => "reduced",
            EmbedMode::Minimal => "minimal",
            EmbedMode::Example64 => "example64",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::InvalidParameter(format!("unknown mode `{s}`")))
    }

    fn family(self) -> Option<Family> {
        match self {
            EmbedMode::Thm61 => Some(Family::Thm61),
            EmbedMode::Full => Some(Family::Full),
            EmbedMode::Reduced => Some(Family::Reduced),
            EmbedMode::Example64 => Some(Family::Example64),
            EmbedMode::Minimal => None,
        }
    }

    /// Target size implied by the construction, where it has a closed form.
    pub fn expected_pairs(self, n: usize) -> Option<usize> {
        match self {
            EmbedMode::Thm61 => Some((n * n + n).saturating_sub(4) / 2),
            EmbedMode::Reduced => Some((n * n).saturating_sub(2)),
            EmbedMode::Minimal => Some(n * n / 4),
            EmbedMode::Example64 => Some(9),
            EmbedMode::Full => None,
        }
    }
}

pub fn embed_suite(n: usize, mode: EmbedMode) -> Result<(VerificationReport, Embedding)> {
    let e = match mode.family() {
        Some(f) => {
            if !f.sizes().contains(&n) {
                return Err(Error::InvalidSize(n, format!("{} is defined for N in {:?}", f.name(), f.sizes())));
            }
            f.embedding(n)?
        }
        None => {
            if n < 2 {
                return Err(Error::InvalidSize(n, "minimal embedding needs N >= 2".into()));
            }
            let chart = LusztigChart::upper(n)?;
            let mut e = minimal_embedding(chart.signature())?;
            e.n = n;
            e
        }
    };
    let mut checks = vec![morphism_record("morphism", &e.report)];
    let (both, single) = used_tori(&e.morphism, e.pair_count);
    let mut pairs = CheckRecord::new("pairs", mode.expected_pairs(n).is_none_or(|p| p == e.pair_count))
        .residual(e.pair_count as f64)
        .reference(format!("{} pairs, {} central; {both} pairs fully used, {single} half used", e.pair_count, e.central_count));
    if let Some(p) = mode.expected_pairs(n) {
        pairs.reference = pairs.reference.map(|r| format!("{r}; expected {p}"));
    }
    checks.push(pairs);
    if mode == EmbedMode::Example64 {
        let verbatim = EXAMPLE64.iter().all(|&(_, w)| parse_table_word(w).map(|p| render_table_word(&p) == w).unwrap_or(false));
        checks.push(CheckRecord::new("table.verbatim", verbatim));
    }
    let convention = mode.family().map(|f| ConventionRecord { family: f.name().to_owned(), convention: e.convention });
    let params = Params { n, mode: Some(mode.name().to_owned()), ..Params::default() };
    Ok((VerificationReport::new("embed", params, checks, convention), e))
}

/// Per-sample data behind a classical report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalLog {
    pub positivity: PositivityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub haar: Option<HaarReport>,
}

/// Round trip, positivity and (for `2 <= N <= 4`) Haar densities.
pub fn classical_suite(n: usize, samples: usize, seed: u64) -> Result<(VerificationReport, ClassicalLog)> {
    if n == 0 {
        return Err(Error::InvalidSize(n, "N must be positive".into()));
    }
    let mut checks = Vec::new();
    let p = positivity_check(n, samples, seed)?;
    checks.push(CheckRecord::new("round_trip", p.round_trip_pass).residual(p.max_round_trip_error));
    checks.push(CheckRecord::new("positivity", p.positive).residual(p.min_initial_minor));
    let mut haar = None;
    if (2..=4).contains(&n) && samples >= 2 {
        let h = haar_density_check(n, samples, 1e-5, seed)?;
        for s in &h.systems {
            let name = match s.coordinates {
                Coordinates::X => "x",
                Coordinates::Abu => "abu",
            };
            checks.push(CheckRecord::new(format!("haar.{name}"), s.pass).residual(s.spread).reference(format!(
                "tolerance {:.0e}; with prod u_k^(N+1-2k): spread {:.2e}",
                h.tolerance, s.corrected_spread
            )));
        }
        haar = Some(h);
    }
    let params = Params { n, seed: Some(seed), samples: Some(samples), ..Params::default() };
    Ok((VerificationReport::new("classical", params, checks, None), ClassicalLog { positivity: p, haar }))
}
