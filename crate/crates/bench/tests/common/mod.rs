#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

/// A TSPLIB EUC_2D file for the given points.
pub fn tsplib(name: &str, coords: &[(i64, i64)]) -> String {
    let mut s = format!(
        "NAME: {name}\nTYPE: TSP\nDIMENSION: {}\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n",
        coords.len()
    );
    for (i, (x, y)) in coords.iter().enumerate() {
        s.push_str(&format!("{} {x} {y}\n", i + 1));
    }
    s.push_str("EOF\n");
    s
}

/// Calls `f` on every ordering of `v[k..]` (swap-based recursion, a
/// different visiting order from lexicographic enumeration).
pub fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
