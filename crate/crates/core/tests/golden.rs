//! Pinned data: the reference table and the frozen conventions.
//! Set `GLQ_BLESS=1` to rewrite the files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use glq_core::tori::{parse_table_word, render_table_word, sweep_family, thm61_embedding, Family, FamilyConvention, EXAMPLE64};
use serde::{de::DeserializeOwned, Serialize};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(name: &str, value: &T) {
    let p = path(name);
    if std::env::var_os("GLQ_BLESS").is_some() {
        std::fs::write(&p, serde_json::to_string_pretty(value).unwrap() + "\n").unwrap();
    }
    let text = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    let pinned: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&pinned, value, "{name} differs from the pinned copy");
}

#[test]
fn table_is_verbatim() {
    let rows: Vec<(String, String)> = EXAMPLE64
        .iter()
        .map(|&(s, w)| {
            let parsed = parse_table_word(w).unwrap();
            assert_eq!(render_table_word(&parsed), w);
            (s.to_owned(), w.to_owned())
        })
        .collect();
    check("example64.json", &rows);
    assert_eq!(rows[3], ("a22".to_owned(), "qV_2U_2U_3".to_owned()));
}

#[test]
fn frozen_conventions() {
    let mut frozen = BTreeMap::new();
    for f in Family::ALL {
        let sweep = sweep_family(f).unwrap();
        assert_eq!(sweep.chosen, f.frozen(), "{}", f.name());
        frozen.insert(f.name().to_owned(), f.frozen());
    }
    check::<BTreeMap<String, FamilyConvention>>("conventions.json", &frozen);
}

#[test]
fn thm61_images_n3() {
    let e = thm61_embedding(3).unwrap();
    let rendered: Vec<(String, String)> =
        e.morphism.to_json().images.into_iter().map(|i| (i.generator, i.rendered)).collect();
    check("thm61_n3.json", &rendered);
}
