//! Writes the bundled corpus as JSON files into the given directory.

use std::fs;
use std::path::PathBuf;

use nrelcat::corpus::{counterexamples, msset_corpus, nrel_corpus};

fn slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    fs::create_dir_all(dir.join("nrel")).unwrap();
    fs::create_dir_all(dir.join("counterexamples")).unwrap();
    fs::create_dir_all(dir.join("msset")).unwrap();
    for e in nrel_corpus() {
        fs::write(dir.join("nrel").join(slug(e.name) + ".json"), e.nrel.to_json()).unwrap();
    }
    for e in counterexamples() {
        fs::write(dir.join("counterexamples").join(slug(e.name) + ".json"), e.nrel.to_json()).unwrap();
    }
    for e in msset_corpus(2) {
        let name = slug(&e.name.replace('Δ', "delta"));
        fs::write(dir.join("msset").join(name + ".json"), e.msset.to_json()).unwrap();
    }
}
