//! Writes the bundled presentations to `data/` (or the directory given).

use std::path::PathBuf;
use std::sync::Arc;

use lgfree_core::element::{Ambient, Element};
use lgfree_core::group::GroupPresentation;
use lgfree_core::ordinal::Ordinal;
use lgfree_core::presets::{limit_q_group, limit_rank_group, two_prime_group};
use lgfree_core::schema::PresentationFile;
use lgfree_core::space::ScatteredSpace;

/// `[0, ω+1]` with no infinite prime: every `e(x)` for `x ≤ ω+1` is a generator.
fn discrete_successor() -> GroupPresentation {
    let top: Ordinal = "w+1".parse().expect("literal");
    let amb = Arc::new(Ambient::new(ScatteredSpace::new(top, []).expect("space"), vec![]).expect("ambient"));
    let gens = ["0", "1", "2", "3", "4", "5", "w", "w+1"]
        .iter()
        .map(|s| Element::basis(&amb, &s.parse().expect("literal")).expect("finite prime"))
        .collect();
    GroupPresentation::new(amb, gens).expect("same ambient")
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    let files = [
        ("limitq.json", limit_q_group(9)),
        ("two_prime.json", two_prime_group(6)),
        ("limit_rank.json", limit_rank_group(5)),
        ("discrete.json", discrete_successor()),
    ];
    for (name, group) in files {
        let path = dir.join(name);
        std::fs::write(&path, PresentationFile::from_group(&group).to_json() + "\n").expect("write");
        println!("{}", path.display());
    }
}
