#![allow(dead_code)]

use ils_core::tsp::TspInstance;
use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).expect("fixture present")
}

/// Coordinates straight from a TSPLIB `NODE_COORD_SECTION`, read without
/// the library parser.
pub fn raw_coords(text: &str) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut on = false;
    for line in text.lines() {
        let line = line.trim();
        if line == "NODE_COORD_SECTION" {
            on = true;
            continue;
        }
        if !on || line == "EOF" {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        out.push((t[1].parse().unwrap(), t[2].parse().unwrap()));
    }
    out
}

/// Nearest integer, halves up, written independently of the library.
pub fn nint_dist(a: (f64, f64), b: (f64, f64)) -> i64 {
    ((a.0 - b.0).hypot(a.1 - b.1) + 0.5).floor() as i64
}

pub fn naive_length(coords: &[(f64, f64)], order: &[usize]) -> i64 {
    let mut total = 0;
    for i in 0..order.len() {
        let j = if i + 1 == order.len() { 0 } else { i + 1 };
        total += nint_dist(coords[order[i]], coords[order[j]]);
    }
    total
}

/// Optimum by trying every permutation of cities 1..n after city 0.
pub fn brute_force_tsp(coords: &[(f64, f64)]) -> i64 {
    let n = coords.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = i64::MAX;
    permute(&mut rest, 0, &mut |p| {
        let mut order = vec![0];
        order.extend_from_slice(p);
        best = best.min(naive_length(coords, &order));
    });
    best
}

/// Calls `f` on every ordering of `v[k..]`.
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

pub fn random_coords(n: usize, side: f64, seed: u64) -> Vec<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                rng.random_range(0..side as u32) as f64,
                rng.random_range(0..side as u32) as f64,
            )
        })
        .collect()
}

pub fn random_instance(n: usize, seed: u64) -> (TspInstance, Vec<(f64, f64)>) {
    let coords = random_coords(n, 1000.0, seed);
    (
        TspInstance::from_coords(format!("r{n}-{seed}"), coords.clone()).unwrap(),
        coords,
    )
}

/// Undirected edges of `order` that are missing from `other`.
pub fn naive_edge_distance(order: &[usize], other: &[usize]) -> usize {
    let edges = |o: &[usize]| {
        let n = o.len();
        let mut e: Vec<(usize, usize)> = (0..n)
            .map(|i| {
                let (a, b) = (o[i], o[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort();
        e
    };
    let theirs = edges(other);
    edges(order)
        .into_iter()
        .filter(|e| theirs.binary_search(e).is_err())
        .count()
}
