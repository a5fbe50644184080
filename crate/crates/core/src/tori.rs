//! Embeddings of Lusztig charts into tensor powers of the quantum torus
//! `uv = q^2 vu`, and minimal embeddings from the skew normal form.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSignature, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::glq::{label, LusztigChart};
use crate::morphism::{check_morphism, Image, Morphism, MorphismReport};
use crate::skew::{rational_rank, symplectic_reduce};

/// Sign of `C(u, v)` for a torus pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `u v = q^2 v u`
    Standard,
    /// `u v = q^-2 v u`
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Reversed => -1,
        }
    }
}

/// Whether the diagonal generators are sent to the printed image or to its
/// inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagonal {
    Direct,
    Inverted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub orientation: Orientation,
    pub diagonal: Diagonal,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention { orientation: Orientation::Standard, diagonal: Diagonal::Direct },
        Convention { orientation: Orientation::Standard, diagonal: Diagonal::Inverted },
        Convention { orientation: Orientation::Reversed, diagonal: Diagonal::Direct },
        Convention { orientation: Orientation::Reversed, diagonal: Diagonal::Inverted },
    ];

    pub const STANDARD: Convention = Convention { orientation: Orientation::Standard, diagonal: Diagonal::Direct };
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Standard => "standard",
            Orientation::Reversed => "reversed",
        };
        let d = match self.diagonal {
            Diagonal::Direct => "direct",
            Diagonal::Inverted => "inverted",
        };
        write!(f, "{o}/{d}")
    }
}

/// Convention of an embedding family. `lower` is present for families that
/// also embed the `b`, `u` half on their own (primed) tori.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyConvention {
    pub upper: Convention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Convention>,
}

impl fmt::Display for FamilyConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            None => write!(f, "{}", self.upper),
            Some(l) => write!(f, "upper={} lower={}", self.upper, l),
        }
    }
}

/// A signature made of torus pairs `(u_a, v_a)` with `C(u_a, v_a) = ±1`
/// and central generators; all other entries vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct ToriSignature {
    sig: Arc<AlgebraSignature>,
    pairs: Vec<(usize, usize)>,
    central: Vec<usize>,
}

impl ToriSignature {
    /// Generators in the order `u_1, v_1, u_2, v_2, ..., central...`.
    pub fn new(pairs: Vec<(String, String, Orientation)>, central: Vec<String>) -> Result<Self> {
        let mut names = Vec::new();
        for (u, v, _) in &pairs {
            names.push(u.clone());
            names.push(v.clone());
        }
        names.extend(central.iter().cloned());
        let n = names.len();
        let mut c = vec![vec![0i64; n]; n];
        for (k, (_, _, o)) in pairs.iter().enumerate() {
            c[2 * k][2 * k + 1] = o.sign();
            c[2 * k + 1][2 * k] = -o.sign();
        }
        let sig = Arc::new(AlgebraSignature::new(names, c)?);
        let p = (0..pairs.len()).map(|k| (2 * k, 2 * k + 1)).collect();
        let central = (2 * pairs.len()..n).collect();
        Ok(Self { sig, pairs: p, central })
    }

    pub fn uniform(pairs: Vec<(String, String)>, central: Vec<String>, o: Orientation) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(u, v)| (u, v, o)).collect(), central)
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn central_count(&self) -> usize {
        self.central.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// An ordered product `q^k x_1^{e_1} x_2^{e_2} ...` of named target
/// generators, kept as written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub q_power: i32,
    pub letters: Vec<(String, i32)>,
}

impl Word {
    pub fn new(q_power: i32, letters: Vec<(String, i32)>) -> Self {
        Self { q_power, letters }
    }

    fn of(letters: Vec<String>) -> Self {
        Self { q_power: 0, letters: letters.into_iter().map(|l| (l, 1)).collect() }
    }

    /// The normal-ordered image of the word in `sig`.
    pub fn evaluate(&self, sig: &Arc<AlgebraSignature>) -> Result<Image> {
        let mut p = Polynomial::scalar(sig, crate::scalar::LaurentScalar::q_pow(self.q_power));
        for (name, e) in &self.letters {
            let i = sig.index_of(name).ok_or_else(|| Error::MalformedMorphism(format!("unknown target generator `{name}`")))?;
            let g = Polynomial::generator(sig, i).unit_pow(*e).expect("generators are units");
            p = p.try_mul(&g)?;
        }
        image_of(&p)
    }
}

fn image_of(p: &Polynomial) -> Result<Image> {
    let (c, m) = p.as_single_term().ok_or_else(|| Error::MalformedMorphism("image is not a monomial".into()))?;
    let k = c.as_unit_power().ok_or_else(|| Error::MalformedMorphism(format!("image coefficient {c} is not a power of q")))?;
    Ok(Image { q_power: k, exponents: m.clone() })
}

fn invert_image(img: &Image, sig: &Arc<AlgebraSignature>) -> Image {
    let p = Polynomial::term(sig, img.coefficient(), img.exponents.clone());
    image_of(&p.inverse_unit().expect("unit monomial")).expect("monomial")
}

/// One candidate of a convention sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub convention: FamilyConvention,
    pub pass: bool,
    pub violations: usize,
}

/// A reference (or derived) embedding fixed under the first passing
/// convention of its sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Embedding {
    pub family: String,
    pub n: usize,
    pub convention: FamilyConvention,
    pub sweep: Vec<SweepOutcome>,
    pub pair_count: usize,
    pub central_count: usize,
    pub morphism: Morphism,
    pub report: MorphismReport,
}

impl Embedding {
    pub fn pass(&self) -> bool {
        self.report.pass()
    }
}

/// Source generator, its printed image, and whether it is diagonal
/// (affected by [`Diagonal::Inverted`]) and in which half it lives.
struct Entry {
    source: String,
    word: Word,
    diagonal: bool,
    lower: bool,
}

/// Target pair `(u, v)` tagged by half.
struct PairSpec {
    u: String,
    v: String,
    lower: bool,
}

struct Blueprint {
    family: &'static str,
    n: usize,
    source: Arc<AlgebraSignature>,
    pairs: Vec<PairSpec>,
    central: Vec<String>,
    entries: Vec<Entry>,
}

impl Blueprint {
    fn build(&self, conv: FamilyConvention) -> Result<(Morphism, ToriSignature)> {
        let lower = conv.lower.unwrap_or(conv.upper);
        let pairs = self
            .pairs
            .iter()
            .map(|p| (p.u.clone(), p.v.clone(), if p.lower { lower.orientation } else { conv.upper.orientation }))
            .collect();
        let tori = ToriSignature::new(pairs, self.central.clone())?;
        let target = Arc::clone(tori.signature());
        let mut images = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            debug_assert_eq!(self.source.name(k), e.source);
            let mut img = e.word.evaluate(&target)?;
            let half = if e.lower { lower } else { conv.upper };
            if e.diagonal && half.diagonal == Diagonal::Inverted {
                img = invert_image(&img, &target);
            }
            images.push(img);
        }
        Ok((Morphism::new(Arc::clone(&self.source), target, images)?, tori))
    }

    fn sweep(&self, candidates: &[FamilyConvention]) -> Result<Vec<SweepOutcome>> {
        candidates
            .iter()
            .map(|&c| {
                let r = check_morphism(&self.build(c)?.0);
                Ok(SweepOutcome { convention: c, pass: r.pass(), violations: r.violations.len() })
            })
            .collect()
    }

    fn embed(&self, candidates: &[FamilyConvention], convention: FamilyConvention) -> Result<Embedding> {
        let sweep = self.sweep(candidates)?;
        let (morphism, tori) = self.build(convention)?;
        let report = check_morphism(&morphism);
        Ok(Embedding {
            family: self.family.to_owned(),
            n: self.n,
            convention,
            sweep,
            pair_count: tori.pair_count(),
            central_count: tori.central_count(),
            morphism,
            report,
        })
    }
}

/// The reference embedding families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Thm61,
    Full,
    Reduced,
    Example64,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Thm61, Family::Full, Family::Reduced, Family::Example64];

    pub fn name(self) -> &'static str {
        match self {
            Family::Thm61 => "thm61",
            Family::Full => "full",
            Family::Reduced => "reduced",
            Family::Example64 => "example64",
        }
    }

    pub fn sizes(self) -> std::ops::RangeInclusive<usize> {
        2..=6
    }

    pub fn candidates(self) -> Vec<FamilyConvention> {
        match self {
            Family::Thm61 | Family::Example64 => upper_only(),
            Family::Full => both_halves(),
            Family::Reduced => reduced_candidates(),
        }
    }

    /// The convention every embedding of the family is built under.
    pub fn frozen(self) -> FamilyConvention {
        let upper = Convention { orientation: Orientation::Reversed, diagonal: Diagonal::Inverted };
        match self {
            Family::Thm61 | Family::Example64 => FamilyConvention { upper, lower: None },
            Family::Full | Family::Reduced => FamilyConvention { upper, lower: Some(Convention::STANDARD) },
        }
    }

    fn blueprint(self, n: usize) -> Result<Blueprint> {
        match self {
            Family::Thm61 => thm61_blueprint(n),
            Family::Full => full_blueprint(n),
            Family::Reduced => reduced_blueprint(n),
            Family::Example64 => example64_blueprint(n),
        }
    }

    pub fn embedding(self, n: usize) -> Result<Embedding> {
        self.blueprint(n)?.embed(&self.candidates(), self.frozen())
    }

    pub fn embedding_with(self, n: usize, c: FamilyConvention) -> Result<Morphism> {
        Ok(self.blueprint(n)?.build(c)?.0)
    }
}

/// Sweep of one family over all its sizes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySweep {
    pub family: Family,
    pub sizes: Vec<usize>,
    /// `(convention, total violations, sizes on which it fails)`.
    pub candidates: Vec<(FamilyConvention, usize, Vec<usize>)>,
    /// Passing on every size if possible, otherwise fewest violations.
    pub chosen: FamilyConvention,
}

pub fn sweep_family(family: Family) -> Result<FamilySweep> {
    let sizes: Vec<usize> = family.sizes().collect();
    let mut rows: Vec<(FamilyConvention, usize, Vec<usize>)> = family.candidates().into_iter().map(|c| (c, 0, vec![])).collect();
    for &n in &sizes {
        let outcomes = family.blueprint(n)?.sweep(&family.candidates())?;
        for (row, o) in rows.iter_mut().zip(outcomes) {
            row.1 += o.violations;
            if !o.pass {
                row.2.push(n);
            }
        }
    }
    let chosen = rows.iter().min_by_key(|r| r.1).map(|r| r.0).expect("candidates are nonempty");
    Ok(FamilySweep { family, sizes, candidates: rows, chosen })
}

fn upper_only() -> Vec<FamilyConvention> {
    Convention::ALL.iter().map(|&c| FamilyConvention { upper: c, lower: None }).collect()
}

fn both_halves() -> Vec<FamilyConvention> {
    let mut v = Vec::new();
    for &u in &Convention::ALL {
        for &l in &Convention::ALL {
            v.push(FamilyConvention { upper: u, lower: Some(l) });
        }
    }
    v
}

fn require_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSize(n, "embeddings need N >= 2".into()));
    }
    Ok(())
}

/// Torus pairs `(u_mn, v_mn)` for `1 <= n <= m <= N-1` without the last one.
fn grid_pairs(n: usize, prime: &str, lower: bool) -> Vec<PairSpec> {
    let mut out = Vec::new();
    for m in 1..n {
        for k in 1..=m {
            if (m, k) != (n - 1, n - 1) {
                out.push(PairSpec { u: label(&format!("u{prime}"), m, k), v: label(&format!("v{prime}"), m, k), lower });
            }
        }
    }
    out
}

/// The letters `(prod_{k=n}^{m-1} v_{m-1,k}) (prod_{l=1}^{n-1} v_{m,l}) u_{m,n}`
/// shared by the `a` and `b` images.
fn grid_letters(n_size: usize, m: usize, n: usize, prime: &str) -> Vec<String> {
    let v = format!("v{prime}");
    let u = format!("u{prime}");
    let mut w = Vec::new();
    for k in n..m {
        w.push(label(&v, m - 1, k));
    }
    for l in 1..n {
        w.push(label(&v, m, l));
    }
    if (m, n) != (n_size - 1, n_size - 1) {
        w.push(label(&u, m, n));
    }
    w
}

fn thm61_upper_parts(n: usize) -> (Vec<PairSpec>, Vec<Entry>) {
    let mut pairs: Vec<PairSpec> = (1..n).map(|m| PairSpec { u: format!("u{m}"), v: format!("v{m}"), lower: false }).collect();
    pairs.extend(grid_pairs(n, "", false));
    let mut entries = Vec::new();
    for m in 1..n {
        for k in 1..=m {
            let mut w = vec![format!("u{m}")];
            w.extend(grid_letters(n, m, k, ""));
            entries.push(Entry { source: label("a", m, k), word: Word::of(w), diagonal: false, lower: false });
        }
        entries.push(Entry { source: format!("v{m}"), word: Word::of(vec![format!("v{m}")]), diagonal: true, lower: false });
    }
    (pairs, entries)
}

fn thm61_lower_parts(n: usize) -> (Vec<PairSpec>, Vec<Entry>) {
    let mut pairs: Vec<PairSpec> = (1..n).map(|m| PairSpec { u: format!("u'{m}"), v: format!("v'{m}"), lower: true }).collect();
    pairs.extend(grid_pairs(n, "'", true));
    let mut entries = Vec::new();
    for m in 1..n {
        for k in 1..=m {
            let mut w = vec![format!("v'{m}")];
            w.extend(grid_letters(n, m, k, "'"));
            entries.push(Entry { source: label("b", m, k), word: Word::of(w), diagonal: false, lower: true });
        }
        entries.push(Entry { source: format!("u{m}"), word: Word::of(vec![format!("u'{m}")]), diagonal: true, lower: true });
    }
    (pairs, entries)
}

fn thm61_blueprint(n: usize) -> Result<Blueprint> {
    require_n(n)?;
    let chart = LusztigChart::upper(n)?;
    let (pairs, entries) = thm61_upper_parts(n);
    Ok(Blueprint { family: "thm61", n, source: Arc::clone(chart.signature()), pairs, central: vec![], entries })
}

/// The upper-chart embedding on `(N^2 + N - 4) / 2` torus pairs:
/// `v_m -> v_m`, `a_mn -> u_m (prod v_{m-1,k}) (prod v_{m,l}) u_mn`.
pub fn thm61_embedding(n: usize) -> Result<Embedding> {
    Family::Thm61.embedding(n)
}

pub fn thm61_embedding_with(n: usize, c: Convention) -> Result<Morphism> {
    Ok(thm61_blueprint(n)?.build(FamilyConvention { upper: c, lower: None })?.0)
}

fn full_blueprint(n: usize) -> Result<Blueprint> {
    require_n(n)?;
    let chart = LusztigChart::full(n)?;
    let (mut pairs, mut entries) = thm61_upper_parts(n);
    let (lp, le) = thm61_lower_parts(n);
    pairs.extend(lp);
    entries.extend(le);
    Ok(Blueprint { family: "full", n, source: Arc::clone(chart.signature()), pairs, central: vec![], entries })
}

/// The full chart on `N^2 + N - 4` pairs: the upper embedding plus the
/// primed lower one, `u_m -> u'_m`, `b_mn -> v'_m (prod v'..) u'_mn`.
pub fn full_embedding(n: usize) -> Result<Embedding> {
    Family::Full.embedding(n)
}

pub fn full_embedding_with(n: usize, c: FamilyConvention) -> Result<Morphism> {
    Ok(full_blueprint(n)?.build(c)?.0)
}

/// Chart on `a_mn`, `b_mn` and the combined diagonal `T_k = u_k v_{k-1}`
/// (`k = 1..N`), with relations pulled back from the full chart.
pub fn combined_chart(n: usize) -> Result<Arc<AlgebraSignature>> {
    let full = LusztigChart::full(n)?;
    let fs = full.signature();
    let mut names = Vec::new();
    let mut vecs: Vec<Vec<i32>> = Vec::new();
    let unit = |i: usize| {
        let mut e = vec![0; fs.len()];
        e[i] = 1;
        e
    };
    for m in 1..n {
        for k in 1..=m {
            names.push(label("a", m, k));
            vecs.push(unit(full.a(m, k)));
        }
    }
    for m in 1..n {
        for k in 1..=m {
            names.push(label("b", m, k));
            vecs.push(unit(full.b(m, k)));
        }
    }
    for k in 1..=n {
        names.push(format!("T{k}"));
        let mut e = vec![0; fs.len()];
        if k < n {
            e[full.u(k)] += 1;
        }
        if k > 1 {
            e[full.v(k - 1)] += 1;
        }
        vecs.push(e);
    }
    let c = vecs.iter().map(|x| vecs.iter().map(|y| fs.pairing(x, y)).collect()).collect();
    Ok(Arc::new(AlgebraSignature::new(names, c)?))
}

fn reduced_blueprint(n: usize) -> Result<Blueprint> {
    require_n(n)?;
    let source = combined_chart(n)?;
    let mut pairs: Vec<PairSpec> = (1..=n).map(|i| PairSpec { u: format!("U{i}"), v: format!("V{i}"), lower: false }).collect();
    pairs.extend(grid_pairs(n, "", false));
    pairs.extend(grid_pairs(n, "'", true));
    let mut entries = Vec::new();
    for m in 1..n {
        for k in 1..=m {
            // u_m = U_{m+1}
            let mut w = Word::of(vec![format!("U{}", m + 1)]);
            w.letters.extend(grid_letters(n, m, k, "").into_iter().map(|l| (l, 1)));
            entries.push(Entry { source: label("a", m, k), word: w, diagonal: false, lower: false });
        }
    }
    for m in 1..n {
        for k in 1..=m {
            // v'_m = U_m^{-1}
            let mut w = Word::new(0, vec![(format!("U{m}"), -1)]);
            w.letters.extend(grid_letters(n, m, k, "'").into_iter().map(|l| (l, 1)));
            entries.push(Entry { source: label("b", m, k), word: w, diagonal: false, lower: true });
        }
    }
    for k in 1..=n {
        // V_k = u'_k v_{k-1}
        entries.push(Entry { source: format!("T{k}"), word: Word::of(vec![format!("V{k}")]), diagonal: true, lower: false });
    }
    Ok(Blueprint { family: "reduced", n, source, pairs, central: vec![], entries })
}

/// Candidates for the folded embedding: the upper convention fixes the
/// unprimed pairs, the `(U_i, V_i)` pairs and the diagonal; the lower one
/// only the orientation of the primed pairs.
fn reduced_candidates() -> Vec<FamilyConvention> {
    let mut v = Vec::new();
    for &u in &Convention::ALL {
        for o in [Orientation::Standard, Orientation::Reversed] {
            v.push(FamilyConvention { upper: u, lower: Some(Convention { orientation: o, diagonal: Diagonal::Direct }) });
        }
    }
    v
}

/// The folded embedding on `N^2 - 2` pairs: `V_i = u'_i v_{i-1}`,
/// `U_i = u_{i-1} = v'_i^{-1}`.
pub fn reduced_embedding(n: usize) -> Result<Embedding> {
    Family::Reduced.embedding(n)
}

pub fn reduced_embedding_with(n: usize, c: FamilyConvention) -> Result<Morphism> {
    Ok(reduced_blueprint(n)?.build(c)?.0)
}

/// Symbolic fold record: each `V_i` and `U_i` with what it replaces.
pub fn reduced_fold(n: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 1..=n {
        let up = if i < n { format!("u'{i}") } else { String::new() };
        let vp = if i > 1 { format!("v{}", i - 1) } else { String::new() };
        let rhs = match (up.is_empty(), vp.is_empty()) {
            (false, false) => format!("{up} {vp}"),
            (false, true) => up,
            (true, false) => vp,
            (true, true) => "1".into(),
        };
        out.push((format!("V{i}"), rhs));
    }
    for i in 1..=n {
        let lhs = if i > 1 { format!("u{}", i - 1) } else { "1".into() };
        let rhs = if i < n { format!("v'{i}^-1") } else { "1".into() };
        out.push((format!("U{i}"), format!("{lhs} = {rhs}")));
    }
    out
}

/// The reference table for `N <= 6` on 9 torus pairs `(U_i, V_i)`; `u_m`
/// there denotes the chart's diagonal generator `v_m`.
pub const EXAMPLE64: [(&str, &str); 20] = [
    ("a11", "U_1"),
    ("u1", "V_1"),
    ("a21", "V_1U_2"),
    ("a22", "qV_2U_2U_3"),
    ("u2", "V_2"),
    ("a31", "V_2U_3U_4"),
    ("a32", "V_3U_4U_5"),
    ("a33", "qV_4U_4U_5"),
    ("u3", "V_4"),
    ("a41", "V_4U_5U_6V_7V_8"),
    ("a42", "qV_5U_5U_6V_7"),
    ("a43", "U_3V_5U_6"),
    ("a44", "qV_6U_6"),
    ("u4", "V_6"),
    ("a51", "V_6U_9"),
    ("a52", "qV_6U_8V_9U_9"),
    ("a53", "V_6U_7V_7V_9U_9"),
    ("a54", "U_5V_6V_7U_8V_8V_9U_9"),
    ("a55", "qV_8V_9U_9"),
    ("u5", "V_9"),
];

/// Parses a table word such as `qV_2U_2U_3`.
pub fn parse_table_word(s: &str) -> Result<Word> {
    let bad = || Error::Serialization(format!("cannot parse table word `{s}`"));
    let mut rest = s;
    let mut q_power = 0;
    if let Some(r) = rest.strip_prefix('q') {
        q_power = 1;
        rest = r;
        if let Some(r) = rest.strip_prefix('^') {
            let end = r.find(|c: char| !(c.is_ascii_digit() || c == '-')).unwrap_or(r.len());
            q_power = r[..end].parse().map_err(|_| bad())?;
            rest = &r[end..];
        }
    }
    let mut letters = Vec::new();
    while !rest.is_empty() {
        let head = rest.chars().next().ok_or_else(bad)?;
        if head != 'U' && head != 'V' {
            return Err(bad());
        }
        let r = rest[1..].strip_prefix('_').ok_or_else(bad)?;
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            return Err(bad());
        }
        letters.push((format!("{head}{}", &r[..end]), 1));
        rest = &r[end..];
    }
    Ok(Word { q_power, letters })
}

/// Inverse of [`parse_table_word`].
pub fn render_table_word(w: &Word) -> String {
    let mut s = match w.q_power {
        0 => String::new(),
        1 => "q".into(),
        k => format!("q^{k}"),
    };
    for (name, e) in &w.letters {
        s.push_str(&format!("{}_{}", &name[..1], &name[1..]));
        if *e != 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

fn example64_blueprint(n: usize) -> Result<Blueprint> {
    table_blueprint(n, &EXAMPLE64, "example64")
}

fn table_blueprint(n: usize, table: &[(&str, &str)], family: &'static str) -> Result<Blueprint> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidSize(n, "the reference table covers 2 <= N <= 6".into()));
    }
    let chart = LusztigChart::upper(n)?;
    let pairs = (1..=9).map(|i| PairSpec { u: format!("U{i}"), v: format!("V{i}"), lower: false }).collect();
    let mut entries = Vec::new();
    for &(src, word) in table {
        let m: usize = src[1..2].parse().expect("table row");
        if m >= n {
            continue;
        }
        let diagonal = src.starts_with('u');
        let source = if diagonal { format!("v{m}") } else { src.to_owned() };
        entries.push(Entry { source, word: parse_table_word(word)?, diagonal, lower: false });
    }
    Ok(Blueprint { family, n, source: Arc::clone(chart.signature()), pairs, central: vec![], entries })
}

/// The reference table restricted to the chart of size `N` (rows with
/// `m <= N-1`), swept over the four conventions.
pub fn example64_embedding(n: usize) -> Result<Embedding> {
    Family::Example64.embedding(n)
}

pub fn example64_embedding_with(n: usize, c: Convention) -> Result<Morphism> {
    Ok(example64_blueprint(n)?.build(FamilyConvention { upper: c, lower: None })?.0)
}

/// As printed, `a53` commutes with `a52` and `a55` where the chart wants
/// `q`-commutation, under every convention. Flipping at most two exponents
/// in at most two rows, the only repair is this one.
pub const EXAMPLE64_REPAIRS: [(&str, &str); 2] = [("a41", "V_4U_5U_6V_8"), ("a53", "V_6U_7V_7U_8V_8V_9U_9")];

/// The table with [`EXAMPLE64_REPAIRS`] applied, under the frozen
/// convention. A diagnostic, not the reference data.
pub fn example64_repaired(n: usize) -> Result<Embedding> {
    let table: Vec<(&str, &str)> = EXAMPLE64
        .iter()
        .map(|&(s, w)| EXAMPLE64_REPAIRS.iter().find(|r| r.0 == s).copied().unwrap_or((s, w)))
        .collect();
    table_blueprint(n, &table, "example64-repaired")?.embed(&upper_only(), Family::Example64.frozen())
}

/// The full `N = 6` table.
pub fn example64_table() -> Result<Embedding> {
    example64_embedding(6)
}

/// Of the first `pairs` target pairs, those used with both members and
/// those used with one.
pub fn used_tori(m: &Morphism, pairs: usize) -> (usize, usize) {
    let t = m.target();
    let used: Vec<bool> = (0..t.len()).map(|i| m.images().iter().any(|img| img.exponents.degree(i) != 0)).collect();
    let mut both = 0;
    let mut single = 0;
    for k in 0..pairs.min(t.len() / 2) {
        match (used[2 * k], used[2 * k + 1]) {
            (true, true) => both += 1,
            (true, false) | (false, true) => single += 1,
            _ => {}
        }
    }
    (both, single)
}

/// Sends each generator `x_i` to the Weyl-balanced monomial whose exponents
/// are row `i` of `S^{-1}` on pairs `(U_k, V_k)` and central `Z_r`.
pub fn minimal_embedding(sig: &Arc<AlgebraSignature>) -> Result<Embedding> {
    let red = symplectic_reduce(sig.commutation())?;
    if let Some(d) = red.divisors().into_iter().find(|&d| d > 1) {
        return Err(Error::ElementaryDivisor(d));
    }
    let r = red.blocks.len();
    let pairs = (1..=r).map(|k| (format!("U{k}"), format!("V{k}"))).collect();
    let central = (1..=red.kernel_basis.len()).map(|k| format!("Z{k}")).collect();
    let tori = ToriSignature::uniform(pairs, central, Orientation::Standard)?;
    let target = Arc::clone(tori.signature());
    let mut images = Vec::with_capacity(sig.len());
    for row in &red.s_inv {
        let e: Vec<i32> = row.iter().map(|&x| i32::try_from(x).map_err(|_| Error::ExponentOverflow)).collect::<Result<_>>()?;
        let w = i32::try_from(target.weyl_shift(&e)).map_err(|_| Error::ExponentOverflow)?;
        images.push(Image { q_power: w, exponents: Monomial::from_exponents(e) });
    }
    let morphism = Morphism::new(Arc::clone(sig), target, images)?;
    let report = check_morphism(&morphism);
    let convention = FamilyConvention { upper: Convention::STANDARD, lower: None };
    Ok(Embedding {
        family: "minimal".into(),
        n: 0,
        convention,
        sweep: vec![SweepOutcome { convention, pass: report.pass(), violations: report.violations.len() }],
        pair_count: r,
        central_count: red.kernel_basis.len(),
        morphism,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Found,
    NotFound,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub convention: Convention,
    pub pairs: usize,
    pub central: usize,
    pub nodes: u64,
    pub outcome: SearchOutcome,
    /// Found images as exponent vectors over `U_1, V_1, ..., Z_1, ...`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<(String, Vec<i32>)>>,
}

/// Backtracking search for a minimal embedding of the upper chart in which
/// every image exponent is 0 or 1, on `floor(N^2/4)` pairs plus the
/// central generators. Images must be linearly independent.
pub fn monomial_minimality_search(n: usize, convention: Convention, budget: u64) -> Result<SearchReport> {
    require_n(n)?;
    let chart = LusztigChart::upper(n)?;
    let sig = chart.signature();
    let len = sig.len();
    let rank = rational_rank(sig.commutation());
    let pairs = rank / 2;
    let central = len - rank;
    let dim = 2 * pairs + central;
    // Required pairings between the images, read under the convention: an
    // inverted diagonal generator flips its row, a reversed target flips all.
    let diag: Vec<bool> = (0..len).map(|i| sig.name(i).starts_with('v')).collect();
    let target_sign = convention.orientation.sign();
    let mut req = vec![vec![0i64; len]; len];
    for i in 0..len {
        for j in 0..len {
            let mut c = sig.c(i, j) * target_sign;
            if convention.diagonal == Diagonal::Inverted {
                if diag[i] {
                    c = -c;
                }
                if diag[j] {
                    c = -c;
                }
            }
            req[i][j] = c;
        }
    }
    let form = |x: u32, y: u32| -> i64 {
        let mut s = 0;
        for k in 0..pairs {
            let (u, v) = (2 * k, 2 * k + 1);
            s += i64::from((x >> u) & 1) * i64::from((y >> v) & 1) - i64::from((x >> v) & 1) * i64::from((y >> u) & 1);
        }
        s
    };
    let mut state = Search { nodes: 0, budget, chosen: Vec::with_capacity(len), exhausted: false };
    let found = state.dfs(len, dim, &req, &form);
    let outcome = if found {
        SearchOutcome::Found
    } else if state.exhausted {
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::NotFound
    };
    let images = found.then(|| {
        state
            .chosen
            .iter()
            .enumerate()
            .map(|(i, &x)| (sig.name(i).to_owned(), (0..dim).map(|b| ((x >> b) & 1) as i32).collect()))
            .collect()
    });
    Ok(SearchReport { n, convention, pairs, central, nodes: state.nodes, outcome, images })
}

struct Search {
    nodes: u64,
    budget: u64,
    chosen: Vec<u32>,
    exhausted: bool,
}

impl Search {
    fn dfs(&mut self, len: usize, dim: usize, req: &[Vec<i64>], form: &dyn Fn(u32, u32) -> i64) -> bool {
        let i = self.chosen.len();
        if i == len {
            let rows: Vec<Vec<i64>> = self.chosen.iter().map(|&x| (0..dim).map(|b| i64::from((x >> b) & 1)).collect()).collect();
            return rational_rank(&rows) == len;
        }
        for x in 1u32..(1 << dim) {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return false;
            }
            self.nodes += 1;
            if self.chosen.iter().enumerate().all(|(j, &y)| form(x, y) == req[i][j]) {
                let rows: Vec<Vec<i64>> =
                    self.chosen.iter().chain(std::iter::once(&x)).map(|&z| (0..dim).map(|b| i64::from((z >> b) & 1)).collect()).collect();
                if rational_rank(&rows) < rows.len() {
                    continue;
                }
                self.chosen.push(x);
                if self.dfs(len, dim, req, form) {
                    return true;
                }
                self.chosen.pop();
                if self.exhausted {
                    return false;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tori_signature_layout() {
        let t = ToriSignature::uniform(vec![("u".into(), "v".into())], vec!["z".into()], Orientation::Standard).unwrap();
        assert_eq!(t.signature().names(), &["u", "v", "z"]);
        assert_eq!(t.signature().c(0, 1), 1);
        assert_eq!(t.central_count(), 1);
    }

    #[test]
    fn table_words_round_trip() {
        for (_, w) in EXAMPLE64 {
            assert_eq!(render_table_word(&parse_table_word(w).unwrap()), w);
        }
        assert!(parse_table_word("qW_1").is_err());
        assert!(parse_table_word("U_").is_err());
    }

    #[test]
    fn thm61_counts() {
        for n in 2..=6 {
            let e = thm61_embedding(n).unwrap();
            assert_eq!(e.pair_count, (n * n + n - 4) / 2);
        }
    }

    #[test]
    fn thm61_images() {
        let m = thm61_embedding_with(3, Convention::STANDARD).unwrap();
        let t = m.target();
        let idx = |s: &str| t.index_of(s).unwrap();
        let a11 = m.image_of("a11").unwrap();
        assert_eq!(a11.exponents.degree(idx("u1")), 1);
        assert_eq!(a11.exponents.degree(idx("u11")), 1);
        let a21 = m.image_of("a21").unwrap();
        for g in ["u2", "v11", "u21"] {
            assert_eq!(a21.exponents.degree(idx(g)), 1, "{g}");
        }
        assert_eq!(m.image_of("v2").unwrap().exponents.degree(idx("v2")), 1);
    }

    #[test]
    fn reduced_counts_and_fold() {
        assert_eq!(reduced_embedding(2).unwrap().pair_count, 2);
        assert_eq!(reduced_embedding(4).unwrap().pair_count, 14);
        let fold = reduced_fold(3);
        assert_eq!(fold[0], ("V1".to_string(), "u'1".to_string()));
    }

    #[test]
    fn minimal_n2() {
        let c = LusztigChart::upper(2).unwrap();
        let e = minimal_embedding(c.signature()).unwrap();
        assert_eq!(e.pair_count, 1);
        assert!(e.pass());
        assert_eq!(e.morphism.image(0).exponents.exponents(), &[1, 0]);
        assert_eq!(e.morphism.image(1).exponents.exponents(), &[0, 1]);
    }

    #[test]
    fn minimal_rejects_divisors() {
        let s = Arc::new(AlgebraSignature::new(vec!["x", "y"], vec![vec![0, 2], vec![-2, 0]]).unwrap());
        assert!(matches!(minimal_embedding(&s), Err(Error::ElementaryDivisor(2))));
    }

    #[test]
    fn minimal_commutative() {
        let s = Arc::new(AlgebraSignature::commutative(vec!["x", "y"]).unwrap());
        let e = minimal_embedding(&s).unwrap();
        assert_eq!((e.pair_count, e.central_count), (0, 2));
        assert!(e.pass());
    }
}
