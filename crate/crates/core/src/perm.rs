//! Small permutation helpers shared by the problem modules.

use crate::{Cost, Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Checks that `perm` is a bijection on `0..n`.
pub fn validate(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidSolution(format!(
            "expected {n} entries, found {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n {
            return Err(Error::InvalidSolution(format!("index {v} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidSolution(format!("index {v} appears twice")));
        }
    }
    Ok(())
}

pub fn is_permutation(perm: &[usize], n: usize) -> bool {
    validate(perm, n).is_ok()
}

pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &v) in perm.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Number of positions at which the two sequences differ.
pub fn hamming(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Reads whitespace-separated indices, optionally followed by a
/// `<label> <cost>` line.
pub fn read_labeled(text: &str, label: &str) -> Result<(Vec<usize>, Option<Cost>)> {
    let mut order = Vec::new();
    let mut cost = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix(label) {
            let rest = rest.trim();
            cost = Some(
                rest.parse()
                    .map_err(|_| Error::parse(i + 1, format!("bad {label} `{rest}`")))?,
            );
            continue;
        }
        for t in line.split_whitespace() {
            order.push(
                t.parse()
                    .map_err(|_| Error::parse(i + 1, format!("bad index `{t}`")))?,
            );
        }
    }
    Ok((order, cost))
}

/// Rearranges `perm` into the lexicographically next permutation.
/// Returns `false` (leaving `perm` sorted ascending) after the last one.
pub fn next_lexicographic(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
