use super::TspInstance;
use crate::engine::Solution;
use crate::{perm, Cost, Result};

/// A tour with its inverse permutation, per-city don't-look bits and cached
/// length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
    position: Vec<usize>,
    dont_look: Vec<bool>,
    length: Cost,
}

/// Exact cyclic length by direct summation.
pub fn tour_length(inst: &TspInstance, order: &[usize]) -> Cost {
    let n = order.len();
    (0..n).map(|i| inst.d(order[i], order[(i + 1) % n])).sum()
}

/// A piece of the current tour, `start..=end` in positions (cyclic), placed
/// forwards or reversed when a reconnection is rebuilt.
#[derive(Debug, Clone, Copy)]
struct Piece {
    start: usize,
    end: usize,
    forward: bool,
}

impl Tour {
    /// Builds a tour from a city order. All don't-look bits start cleared.
    pub fn new(inst: &TspInstance, order: Vec<usize>) -> Result<Self> {
        perm::validate(&order, inst.n())?;
        let length = tour_length(inst, &order);
        let position = perm::inverse(&order);
        Ok(Tour {
            dont_look: vec![false; order.len()],
            order,
            position,
            length,
        })
    }

    pub fn identity(inst: &TspInstance) -> Self {
        Self::new(inst, (0..inst.n()).collect()).expect("identity is a permutation")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn position(&self, city: usize) -> usize {
        self.position[city]
    }

    #[inline]
    pub fn at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    #[inline]
    pub fn next(&self, city: usize) -> usize {
        let p = self.position[city] + 1;
        self.order[if p == self.n() { 0 } else { p }]
    }

    #[inline]
    pub fn prev(&self, city: usize) -> usize {
        let p = self.position[city];
        self.order[if p == 0 { self.n() - 1 } else { p - 1 }]
    }

    pub fn length(&self) -> Cost {
        self.length
    }

    pub(crate) fn add_length(&mut self, delta: Cost) {
        self.length += delta;
    }

    /// Re-evaluates the cached length under `inst`.
    pub fn rescore(&mut self, inst: &TspInstance) {
        self.length = tour_length(inst, &self.order);
    }

    #[inline]
    pub fn dont_look(&self, city: usize) -> bool {
        self.dont_look[city]
    }

    pub fn dont_look_bits(&self) -> &[bool] {
        &self.dont_look
    }

    #[inline]
    pub fn set_dont_look(&mut self, city: usize, value: bool) {
        self.dont_look[city] = value;
    }

    pub fn set_all_dont_look(&mut self, value: bool) {
        self.dont_look.fill(value);
    }

    /// Full consistency check: permutation, inverse, and cached length.
    pub fn validate(&self, inst: &TspInstance) -> Result<()> {
        perm::validate(&self.order, inst.n())?;
        for (i, &c) in self.order.iter().enumerate() {
            if self.position[c] != i {
                return Err(crate::Error::InvalidSolution(format!(
                    "position of city {c} is {}, expected {i}",
                    self.position[c]
                )));
            }
        }
        let naive = tour_length(inst, &self.order);
        if naive != self.length {
            return Err(crate::Error::InvalidSolution(format!(
                "cached length {} differs from {naive}",
                self.length
            )));
        }
        Ok(())
    }

    /// Undirected edge set as sorted pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut e: Vec<(usize, usize)> = (0..n)
            .map(|i| {
                let (a, b) = (self.order[i], self.order[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        e
    }

    #[inline]
    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.next(a) == b || self.prev(a) == b
    }

    /// Reverses the tour path running forward from position `i` to position
    /// `j` (inclusive, cyclic). Reverses the complementary path instead when
    /// that one is shorter; both give the same undirected tour.
    pub fn reverse_path(&mut self, i: usize, j: usize) {
        let n = self.n();
        let inner = (j + n - i) % n + 1;
        let (mut a, mut b, len) = if inner * 2 <= n {
            (i, j, inner)
        } else {
            ((j + 1) % n, (i + n - 1) % n, n - inner)
        };
        for _ in 0..len / 2 {
            self.order.swap(a, b);
            self.position[self.order[a]] = a;
            self.position[self.order[b]] = b;
            a = if a + 1 == n { 0 } else { a + 1 };
            b = if b == 0 { n - 1 } else { b - 1 };
        }
    }

    /// Applies the 2-opt move removing `(a, next(a))` and `(c, next(c))` and
    /// adding `(a, c)` and `(next(a), next(c))`. Does not touch the length.
    pub fn two_opt_move(&mut self, a: usize, c: usize) {
        let i = (self.position[a] + 1) % self.n();
        let j = self.position[c];
        self.reverse_path(i, j);
    }

    /// Plans the tour obtained by deleting the tour edges `removed` and
    /// inserting `added` (as many as removed). Returns `None` unless the
    /// result is a single Hamiltonian cycle.
    fn plan(&self, removed: &[(usize, usize)], added: &[(usize, usize)]) -> Option<Vec<Piece>> {
        let n = self.n();
        let k = removed.len();
        if k == 0 || added.len() != k || k > 4 {
            return None;
        }
        let mut cuts = [0usize; 4];
        for (slot, &(x, y)) in cuts.iter_mut().zip(removed) {
            *slot = if self.next(x) == y {
                self.position[x]
            } else if self.next(y) == x {
                self.position[y]
            } else {
                return None;
            };
        }
        let cuts = &mut cuts[..k];
        cuts.sort_unstable();
        if cuts.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        // Segment s runs from cuts[s] + 1 to cuts[s + 1] (the last one wraps).
        let seg_start = |s: usize| (cuts[s] + 1) % n;
        let seg_end = |s: usize| cuts[(s + 1) % k];
        // Endpoint 2s is the head of segment s, 2s + 1 its tail.
        let end_city = |e: usize| {
            let s = e / 2;
            self.order[if e % 2 == 0 { seg_start(s) } else { seg_end(s) }]
        };
        let mut partner = [usize::MAX; 8];
        let claim = |city: usize, partner: &[usize; 8]| -> Option<usize> {
            (0..2 * k).find(|&e| partner[e] == usize::MAX && end_city(e) == city)
        };
        for &(u, v) in added {
            let eu = claim(u, &partner)?;
            partner[eu] = eu;
            let ev = claim(v, &partner)?;
            partner[eu] = ev;
            partner[ev] = eu;
        }
        let mut pieces = Vec::with_capacity(k);
        let (mut seg, mut forward) = (0usize, true);
        loop {
            pieces.push(Piece {
                start: seg_start(seg),
                end: seg_end(seg),
                forward,
            });
            let exit = 2 * seg + usize::from(forward);
            let entry = partner[exit];
            seg = entry / 2;
            forward = entry % 2 == 0;
            if seg == 0 {
                break;
            }
            if pieces.len() == k {
                return None;
            }
        }
        (pieces.len() == k && forward).then_some(pieces)
    }

    /// Checks whether exchanging `removed` for `added` yields a tour.
    pub fn is_valid_exchange(&self, removed: &[(usize, usize)], added: &[(usize, usize)]) -> bool {
        self.plan(removed, added).is_some()
    }

    /// Replaces tour edges `removed` by `added` if the result is a tour.
    /// Returns whether the exchange was applied. The cached length is updated.
    pub fn exchange(&mut self, inst: &TspInstance, removed: &[(usize, usize)], added: &[(usize, usize)]) -> bool {
        let Some(pieces) = self.plan(removed, added) else {
            return false;
        };
        let n = self.n();
        let mut order = Vec::with_capacity(n);
        for p in &pieces {
            let len = (p.end + n - p.start) % n + 1;
            if p.forward {
                order.extend((0..len).map(|t| self.order[(p.start + t) % n]));
            } else {
                order.extend((0..len).map(|t| self.order[(p.end + n - t) % n]));
            }
        }
        let delta: Cost = added.iter().map(|&(a, b)| inst.d(a, b)).sum::<Cost>()
            - removed.iter().map(|&(a, b)| inst.d(a, b)).sum::<Cost>();
        self.order = order;
        for (i, &c) in self.order.iter().enumerate() {
            self.position[c] = i;
        }
        self.length += delta;
        true
    }
}

impl Solution for Tour {
    fn cost(&self) -> Cost {
        self.length
    }

    fn permutation(&self) -> &[usize] {
        &self.order
    }
}

/// Number of undirected edges of `a` missing from `b`.
pub fn tour_distance(a: &Tour, b: &Tour) -> Result<usize> {
    if a.n() != b.n() {
        return Err(crate::Error::Parameter(format!(
            "tours have different sizes {} and {}",
            a.n(),
            b.n()
        )));
    }
    Ok(edge_distance(a, b))
}

pub(crate) fn edge_distance(a: &Tour, b: &Tour) -> usize {
    let n = a.n();
    if n < 3 {
        return 0;
    }
    (0..n)
        .filter(|&i| {
            let x = a.order[i];
            let y = a.order[(i + 1) % n];
            !b.are_adjacent(x, y)
        })
        .count()
}
