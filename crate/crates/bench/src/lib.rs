//! Fixtures shared by the criterion benches.

use qwsed_core::{FamilySpec, WeightedGraph};

/// Family specs of growing order used across benches.
pub const LADDER: [&str; 4] = ["complete:16", "rook:8,8", "doublecone:disconnected:cycle:64", "lollipop:40,24"];

pub fn build(spec: &str) -> (FamilySpec, WeightedGraph) {
    let f: FamilySpec = spec.parse().expect("bench spec parses");
    let g = f.build().expect("bench spec builds");
    (f, g)
}
