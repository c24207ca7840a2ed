//! Quadratic assignment: QAPLIB input, exact objective, O(n) swap deltas,
//! pairwise-exchange descent and random k-exchange kicks.

use crate::engine::Solution;
use crate::{perm, Cost, Error, Result};
use rand::seq::{index, SliceRandom};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QapInstance {
    pub name: String,
    n: usize,
    /// Row-major `n × n`.
    flow: Vec<i64>,
    dist: Vec<i64>,
    pub best_known: Option<Cost>,
}

impl QapInstance {
    pub fn new(name: impl Into<String>, flow: Vec<Vec<i64>>, dist: Vec<Vec<i64>>) -> Result<Self> {
        let n = flow.len();
        if dist.len() != n {
            return Err(Error::Parameter(format!(
                "flow is {n}x{n} but distance has {} rows",
                dist.len()
            )));
        }
        if flow.iter().chain(&dist).any(|r| r.len() != n) {
            return Err(Error::Parameter(format!("both matrices must be {n}x{n}")));
        }
        Self::from_flat(name, n, flow.concat(), dist.concat())
    }

    fn from_flat(name: impl Into<String>, n: usize, flow: Vec<i64>, dist: Vec<i64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Degenerate("QAP size must be at least 1".into()));
        }
        Ok(QapInstance {
            name: name.into(),
            n,
            flow,
            dist,
            best_known: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn flow(&self, i: usize, j: usize) -> i64 {
        self.flow[i * self.n + j]
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> i64 {
        self.dist[a * self.n + b]
    }

    /// Uniform random instance with entries in `0..=max`.
    pub fn random_uniform<R: Rng + ?Sized>(name: impl Into<String>, n: usize, max: i64, rng: &mut R) -> Self {
        let mut m = || (0..n * n).map(|_| rng.random_range(0..=max)).collect::<Vec<_>>();
        let flow = m();
        let dist = m();
        Self::from_flat(name, n, flow, dist).expect("n >= 1")
    }
}

/// Parses QAPLIB text: `n`, then the flow and distance matrices.
pub fn parse_qaplib(text: &str) -> Result<QapInstance> {
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for t in line.split_whitespace() {
            let v: i64 = t
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad integer `{t}`")))?;
            tokens.push((i + 1, v));
        }
    }
    let Some(&(first_line, n)) = tokens.first() else {
        return Err(Error::parse(1, "empty QAPLIB file"));
    };
    let n = usize::try_from(n)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::parse(first_line, format!("bad size {n}")))?;
    let expected = 1 + 2 * n * n;
    if tokens.len() != expected {
        let line = tokens.last().map_or(1, |t| t.0);
        return Err(Error::parse(
            line,
            format!("found {} numbers, size {n} needs {expected}", tokens.len()),
        ));
    }
    let values: Vec<i64> = tokens[1..].iter().map(|t| t.1).collect();
    let (flow, dist) = values.split_at(n * n);
    QapInstance::from_flat("qap", n, flow.to_vec(), dist.to_vec())
}

/// Item-to-location permutation with its cached cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    perm: Vec<usize>,
    cost: Cost,
}

impl Assignment {
    pub fn new(inst: &QapInstance, perm: Vec<usize>) -> Result<Self> {
        perm::validate(&perm, inst.n())?;
        let cost = qap_cost(inst, &perm);
        Ok(Assignment { perm, cost })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    /// Swaps the locations of items `i` and `j`, updating the cost in O(n).
    pub fn swap(&mut self, inst: &QapInstance, i: usize, j: usize) {
        self.cost += swap_delta(inst, &self.perm, i, j);
        self.perm.swap(i, j);
    }

    pub fn validate(&self, inst: &QapInstance) -> Result<()> {
        perm::validate(&self.perm, inst.n())?;
        let naive = qap_cost(inst, &self.perm);
        if naive != self.cost {
            return Err(Error::InvalidSolution(format!(
                "cached cost {} differs from {naive}",
                self.cost
            )));
        }
        Ok(())
    }
}

impl Solution for Assignment {
    fn cost(&self) -> Cost {
        self.cost
    }

    fn permutation(&self) -> &[usize] {
        &self.perm
    }
}

/// `Σ_i Σ_j flow(i, j) · dist(π(i), π(j))`.
pub fn qap_cost(inst: &QapInstance, perm: &[usize]) -> Cost {
    let n = inst.n();
    let mut total = 0;
    for i in 0..n {
        let pi = perm[i];
        for j in 0..n {
            total += inst.flow(i, j) * inst.dist(pi, perm[j]);
        }
    }
    total
}

/// Cost change of swapping the locations of items `r` and `s`. Handles
/// asymmetric matrices and non-zero diagonals.
pub fn swap_delta(inst: &QapInstance, perm: &[usize], r: usize, s: usize) -> Cost {
    if r == s {
        return 0;
    }
    let (pr, ps) = (perm[r], perm[s]);
    let mut d = (inst.flow(r, r) - inst.flow(s, s)) * (inst.dist(ps, ps) - inst.dist(pr, pr))
        + (inst.flow(r, s) - inst.flow(s, r)) * (inst.dist(ps, pr) - inst.dist(pr, ps));
    for (k, &pk) in perm.iter().enumerate() {
        if k == r || k == s {
            continue;
        }
        d += (inst.flow(k, r) - inst.flow(k, s)) * (inst.dist(pk, ps) - inst.dist(pk, pr))
            + (inst.flow(r, k) - inst.flow(s, k)) * (inst.dist(ps, pk) - inst.dist(pr, pk));
    }
    d
}

/// First-improvement pairwise-exchange descent. Pairs `(i, j)`, `i < j`,
/// are scanned lexicographically and the scan restarts from the first pair
/// after every improving swap. Returns the number of swaps applied.
pub fn local_search_qap(inst: &QapInstance, a: &mut Assignment) -> u64 {
    let n = inst.n();
    let mut moves = 0;
    'scan: loop {
        for i in 0..n {
            for j in i + 1..n {
                let d = swap_delta(inst, &a.perm, i, j);
                if d < 0 {
                    a.perm.swap(i, j);
                    a.cost += d;
                    moves += 1;
                    continue 'scan;
                }
            }
        }
        return moves;
    }
}

/// Uniformly random derangement of `0..k` (rejection from uniform shuffles;
/// about e draws on average).
fn random_derangement<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        p.shuffle(rng);
        if p.iter().enumerate().all(|(i, &x)| i != x) {
            return p;
        }
    }
}

/// Picks `k` distinct items uniformly and permutes their locations among
/// themselves. With `derangement` no picked item keeps its location, so
/// exactly `k` entries change; otherwise the permutation is uniform.
pub fn k_exchange<R: Rng + ?Sized>(
    inst: &QapInstance,
    a: &Assignment,
    k: usize,
    derangement: bool,
    rng: &mut R,
) -> Result<Assignment> {
    let n = inst.n();
    if k < 2 || k > n {
        return Err(Error::Parameter(format!(
            "exchange size must lie in 2..={n}, got {k}"
        )));
    }
    let items = index::sample(rng, n, k).into_vec();
    let shuffle = if derangement {
        random_derangement(k, rng)
    } else {
        let mut p: Vec<usize> = (0..k).collect();
        p.shuffle(rng);
        p
    };
    let mut perm = a.perm.clone();
    for (t, &item) in items.iter().enumerate() {
        perm[item] = a.perm[items[shuffle[t]]];
    }
    Assignment::new(inst, perm)
}

pub fn random_assignment<R: Rng + ?Sized>(inst: &QapInstance, rng: &mut R) -> Assignment {
    Assignment::new(inst, perm::random(inst.n(), rng)).expect("random permutation")
}

/// Randomized greedy construction: the item with the largest total flow is
/// put on a random location, then the remaining items in decreasing flow
/// order each take the free location with the least added cost (ties to the
/// lowest index).
pub fn greedy_assignment<R: Rng + ?Sized>(inst: &QapInstance, rng: &mut R) -> Assignment {
    let n = inst.n();
    let mut items: Vec<usize> = (0..n).collect();
    let weight = |i: usize| -> i64 { (0..n).map(|k| inst.flow(i, k) + inst.flow(k, i)).sum() };
    items.sort_by_key(|&i| (std::cmp::Reverse(weight(i)), i));

    let mut perm = vec![usize::MAX; n];
    let mut free = vec![true; n];
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    for (step, &item) in items.iter().enumerate() {
        let loc = if step == 0 {
            rng.random_range(0..n)
        } else {
            (0..n)
                .filter(|&l| free[l])
                .min_by_key(|&l| {
                    let added: i64 = placed
                        .iter()
                        .map(|&o| {
                            inst.flow(item, o) * inst.dist(l, perm[o])
                                + inst.flow(o, item) * inst.dist(perm[o], l)
                        })
                        .sum::<i64>()
                        + inst.flow(item, item) * inst.dist(l, l);
                    (added, l)
                })
                .expect("a free location remains")
        };
        perm[item] = loc;
        free[loc] = false;
        placed.push(item);
    }
    Assignment::new(inst, perm).expect("every item placed once")
}

/// Permutation on one line, then `cost <value>`.
pub fn write_assignment(a: &Assignment) -> String {
    let line: Vec<String> = a.perm.iter().map(|p| p.to_string()).collect();
    format!("{}\ncost {}\n", line.join(" "), a.cost)
}

/// Reads the format of [`write_assignment`].
pub fn read_assignment(text: &str) -> Result<(Vec<usize>, Option<Cost>)> {
    perm::read_labeled(text, "cost")
}
