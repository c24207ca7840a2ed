use super::{local_search_2opt, Tour, TspInstance};
use crate::{perm, Error, Result};
use rand::seq::index;
use rand::Rng;

/// Result of a double-bridge kick: the new tour and the first endpoint of
/// every removed edge.
#[derive(Debug, Clone)]
pub struct Kicked {
    pub tour: Tour,
    pub breakpoints: Vec<usize>,
}

/// Tours below this size have no four non-empty segments.
pub const MIN_DOUBLE_BRIDGE_SIZE: usize = 8;

/// Segment lengths for a cut at tour positions `p[0] < .. < p[3]` (the edge
/// after each position is removed).
fn segment_lengths(n: usize, p: [usize; 4]) -> [usize; 4] {
    [p[1] - p[0], p[2] - p[1], p[3] - p[2], n - p[3] + p[0]]
}

/// Two cyclically adjacent one-city segments would make a new edge coincide
/// with a removed one, so fewer than four edges would change.
fn changes_four_edges(n: usize, p: [usize; 4]) -> bool {
    let l = segment_lengths(n, p);
    (0..4).all(|s| !(l[s] == 1 && l[(s + 1) % 4] == 1))
}

/// Double bridge with the removed edges after positions `p` (strictly
/// increasing). Segments `A B C D` between the cuts are reconnected as
/// `A D C B`, which exchanges exactly four edges.
fn bridge_at(inst: &TspInstance, tour: &Tour, p: [usize; 4]) -> Kicked {
    let n = tour.n();
    let o = tour.order();
    let seg = |s: usize| {
        let start = (p[s] + 1) % n;
        let len = segment_lengths(n, p)[s];
        (0..len).map(move |t| o[(start + t) % n])
    };
    let mut order = Vec::with_capacity(n);
    // segment 3 wraps over position 0 and plays the role of A
    for s in [3, 2, 1, 0] {
        order.extend(seg(s));
    }
    let breakpoints: Vec<usize> = p.iter().map(|&q| o[q]).collect();
    let removed: i64 = p.iter().map(|&q| inst.d(o[q], o[(q + 1) % n])).sum();
    let mut kicked = Tour::new(inst, order).expect("segments partition the tour");
    debug_assert_eq!(
        kicked.length(),
        tour.length() - removed + added_length(inst, tour, p)
    );
    for c in 0..n {
        kicked.set_dont_look(c, tour.dont_look(c));
    }
    Kicked {
        tour: kicked,
        breakpoints,
    }
}

/// Sum of the four edges a double bridge at `p` inserts.
fn added_length(inst: &TspInstance, tour: &Tour, p: [usize; 4]) -> i64 {
    let n = tour.n();
    let o = tour.order();
    let head = |s: usize| o[(p[s] + 1) % n];
    let tail = |s: usize| o[p[(s + 1) % 4]];
    // A D C B: A.tail-D.head, D.tail-C.head, C.tail-B.head, B.tail-A.head
    // with A = segment 3 (wrapping), B = 0, C = 1, D = 2 in cut order.
    inst.d(tail(3), head(2)) + inst.d(tail(2), head(1)) + inst.d(tail(1), head(0)) + inst.d(tail(0), head(3))
}

/// Double bridge for the cut triple `1 <= a < b < c < n`: with
/// `A = [0, a)`, `B = [a, b)`, `C = [b, c)`, `D = [c, n)` the result visits
/// `A D C B`.
pub fn double_bridge_with_cuts(inst: &TspInstance, tour: &Tour, a: usize, b: usize, c: usize) -> Result<Kicked> {
    let n = tour.n();
    if n < MIN_DOUBLE_BRIDGE_SIZE {
        return Err(Error::Degenerate(format!(
            "double bridge needs at least {MIN_DOUBLE_BRIDGE_SIZE} cities, got {n}"
        )));
    }
    if !(1 <= a && a < b && b < c && c < n) {
        return Err(Error::Parameter(format!("invalid cuts ({a}, {b}, {c}) for n = {n}")));
    }
    Ok(bridge_at(inst, tour, [a - 1, b - 1, c - 1, n - 1]))
}

/// Uniform random double bridge over the cut triples that change exactly
/// four edges.
pub fn double_bridge<R: Rng + ?Sized>(inst: &TspInstance, tour: &Tour, rng: &mut R) -> Result<Kicked> {
    let n = tour.n();
    if n < MIN_DOUBLE_BRIDGE_SIZE {
        return Err(Error::Degenerate(format!(
            "double bridge needs at least {MIN_DOUBLE_BRIDGE_SIZE} cities, got {n}"
        )));
    }
    loop {
        let mut cuts = index::sample(rng, n - 1, 3).into_vec();
        cuts.sort_unstable();
        let p = [cuts[0], cuts[1], cuts[2], n - 1];
        if changes_four_edges(n, p) {
            return Ok(bridge_at(inst, tour, p));
        }
    }
}

/// Double bridge whose four breakpoints are a random city and three cities
/// drawn from its `bias` nearest neighbours, so the inserted edges tend to be
/// short. Smaller `bias` means a stronger pull towards short edges. Falls back
/// to the uniform move when no valid local cut is found.
pub fn biased_double_bridge<R: Rng + ?Sized>(
    inst: &TspInstance,
    tour: &Tour,
    bias: usize,
    rng: &mut R,
) -> Result<Kicked> {
    let n = tour.n();
    if n < MIN_DOUBLE_BRIDGE_SIZE {
        return Err(Error::Degenerate(format!(
            "double bridge needs at least {MIN_DOUBLE_BRIDGE_SIZE} cities, got {n}"
        )));
    }
    let width = bias.max(3).min(n - 1);
    for _ in 0..32 {
        let v = rng.random_range(0..n);
        let near = inst.nearest(v, width);
        let picks = index::sample(rng, near.len(), 3);
        let mut p = [
            tour.position(v),
            tour.position(near[picks.index(0)]),
            tour.position(near[picks.index(1)]),
            tour.position(near[picks.index(2)]),
        ];
        p.sort_unstable();
        if changes_four_edges(n, p) {
            return Ok(bridge_at(inst, tour, p));
        }
    }
    double_bridge(inst, tour, rng)
}

/// `k` double bridges applied one after another.
pub fn k_double_bridge<R: Rng + ?Sized>(inst: &TspInstance, tour: &Tour, k: usize, rng: &mut R) -> Result<Kicked> {
    if k == 0 {
        return Err(Error::Parameter("double-bridge count must be at least 1".into()));
    }
    let mut kicked = double_bridge(inst, tour, rng)?;
    for _ in 1..k {
        let next = double_bridge(inst, &kicked.tour, rng)?;
        kicked.tour = next.tour;
        kicked.breakpoints.extend(next.breakpoints);
    }
    Ok(kicked)
}

/// Clears the don't-look bits of each breakpoint and of its `radius`
/// nearest cities.
pub fn reset_dont_look_after_perturbation(inst: &TspInstance, tour: &mut Tour, breakpoints: &[usize], radius: usize) {
    for &b in breakpoints {
        tour.set_dont_look(b, false);
        if radius > 0 {
            for c in inst.nearest(b, radius) {
                tour.set_dont_look(c, false);
            }
        }
    }
}

/// A uniformly random tour with every don't-look bit cleared.
pub fn random_tour<R: Rng + ?Sized>(inst: &TspInstance, rng: &mut R) -> Tour {
    Tour::new(inst, perm::random(inst.n(), rng)).expect("random permutation")
}

/// Jitters the city coordinates by up to `magnitude` times the mean
/// nearest-neighbour distance, runs 2-opt from `tour` on the jittered
/// instance, and returns the resulting tour scored under the true distances.
pub fn coordinate_noise_perturbation<R: Rng + ?Sized>(
    inst: &TspInstance,
    tour: &Tour,
    magnitude: f64,
    rng: &mut R,
) -> Result<Tour> {
    let coords = inst
        .coords()
        .ok_or_else(|| Error::Unsupported("coordinate noise needs a coordinate-based instance".into()))?;
    if !(magnitude >= 0.0) {
        return Err(Error::Parameter(format!("noise magnitude must be non-negative, got {magnitude}")));
    }
    let amplitude = magnitude * inst.mean_nearest_neighbor_distance().unwrap_or(0.0);
    let jittered: Vec<(f64, f64)> = coords
        .iter()
        .map(|&(x, y)| {
            if amplitude > 0.0 {
                (
                    x + rng.random_range(-amplitude..=amplitude),
                    y + rng.random_range(-amplitude..=amplitude),
                )
            } else {
                (x, y)
            }
        })
        .collect();
    let noisy = TspInstance::from_coords_with(inst.name.clone(), jittered, inst.candidate_size())?;
    let mut on_noisy = tour.clone();
    on_noisy.rescore(&noisy);
    let moved = local_search_2opt(&noisy, on_noisy);
    Tour::new(inst, moved.order().to_vec())
}
