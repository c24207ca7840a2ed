use super::{Tour, TspInstance};
use crate::Cost;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    #[serde(rename = "2-opt", alias = "two-opt")]
    TwoOpt,
    #[serde(rename = "3-opt", alias = "three-opt")]
    ThreeOpt,
}

/// First-improvement 2-opt / 3-opt with fixed-radius candidate-list search
/// and don't-look bits.
///
/// Only cities whose don't-look bit is off are scanned. A city whose scan
/// finds nothing gets its bit set; every endpoint of an exchanged edge gets
/// its bit cleared and is queued again.
#[derive(Debug, Clone)]
pub struct TourSearch {
    neighborhood: Neighborhood,
    /// After the queue drains, clear all bits and rescan until a full pass
    /// finds nothing. Guarantees optimality in the candidate neighbourhood.
    exhaustive: bool,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    moves: u64,
}

#[derive(Debug, Clone, Copy)]
enum Move {
    TwoOpt {
        a: usize,
        c: usize,
        gain: Cost,
    },
    Exchange {
        removed: [(usize, usize); 3],
        added: [(usize, usize); 3],
    },
}

impl TourSearch {
    pub fn new(neighborhood: Neighborhood) -> Self {
        TourSearch {
            neighborhood,
            exhaustive: false,
            queue: VecDeque::new(),
            queued: Vec::new(),
            moves: 0,
        }
    }

    pub fn exhaustive(mut self, on: bool) -> Self {
        self.exhaustive = on;
        self
    }

    pub fn neighborhood(&self) -> Neighborhood {
        self.neighborhood
    }

    /// Improving moves applied since construction.
    pub fn moves(&self) -> u64 {
        self.moves
    }

    /// Descends from `tour`, starting from the cities whose don't-look bit
    /// is off. Returns the number of improving moves applied.
    pub fn run(&mut self, inst: &TspInstance, tour: &mut Tour) -> u64 {
        let n = tour.n();
        let before = self.moves;
        if n < 4 {
            tour.set_all_dont_look(true);
            return 0;
        }
        self.queued.clear();
        self.queued.resize(n, false);
        self.queue.clear();
        loop {
            for c in 0..n {
                if !tour.dont_look(c) {
                    self.queue.push_back(c);
                    self.queued[c] = true;
                }
            }
            let pass_start = self.moves;
            while let Some(t1) = self.queue.pop_front() {
                self.queued[t1] = false;
                match self.find(inst, tour, t1) {
                    Some(mv) => {
                        self.apply(inst, tour, mv);
                        self.moves += 1;
                    }
                    None => tour.set_dont_look(t1, true),
                }
            }
            if !self.exhaustive || self.moves == pass_start {
                break;
            }
            tour.set_all_dont_look(false);
        }
        self.moves - before
    }

    fn wake(&mut self, tour: &mut Tour, city: usize) {
        tour.set_dont_look(city, false);
        if !self.queued[city] {
            self.queued[city] = true;
            self.queue.push_back(city);
        }
    }

    fn apply(&mut self, inst: &TspInstance, tour: &mut Tour, mv: Move) {
        match mv {
            Move::TwoOpt { a, c, gain } => {
                let (an, cn) = (tour.next(a), tour.next(c));
                tour.two_opt_move(a, c);
                tour.add_length(-gain);
                for city in [a, an, c, cn] {
                    self.wake(tour, city);
                }
            }
            Move::Exchange { removed, added } => {
                let ok = tour.exchange(inst, &removed, &added);
                debug_assert!(ok, "planned exchange must be valid");
                for (x, y) in removed {
                    self.wake(tour, x);
                    self.wake(tour, y);
                }
            }
        }
    }

    /// First improving move starting at `t1`, if any.
    fn find(&self, inst: &TspInstance, tour: &Tour, t1: usize) -> Option<Move> {
        for succ in [true, false] {
            let t2 = if succ { tour.next(t1) } else { tour.prev(t1) };
            let d12 = inst.d(t1, t2);
            for &t3 in inst.candidates(t2) {
                let g1 = d12 - inst.d(t2, t3);
                if g1 <= 0 {
                    break;
                }
                if t3 == t1 || tour.are_adjacent(t2, t3) {
                    continue;
                }
                // Only one neighbour of t3 closes a valid 2-opt move.
                let t4_close = if succ { tour.prev(t3) } else { tour.next(t3) };
                let gain = g1 + inst.d(t3, t4_close) - inst.d(t4_close, t1);
                if gain > 0 && t4_close != t1 {
                    let (a, c) = if succ { (t1, t4_close) } else { (t2, t3) };
                    return Some(Move::TwoOpt { a, c, gain });
                }
                if self.neighborhood == Neighborhood::TwoOpt {
                    continue;
                }
                for t4 in [tour.next(t3), tour.prev(t3)] {
                    if t4 == t1 || t4 == t2 {
                        continue;
                    }
                    let g2_base = g1 + inst.d(t3, t4);
                    for &t5 in inst.candidates(t4) {
                        let g2 = g2_base - inst.d(t4, t5);
                        if g2 <= 0 {
                            break;
                        }
                        if t5 == t3 || t5 == t2 || tour.are_adjacent(t4, t5) {
                            continue;
                        }
                        for t6 in [tour.next(t5), tour.prev(t5)] {
                            if t6 == t1 && t5 == t2 {
                                continue;
                            }
                            let removed = [(t1, t2), (t3, t4), (t5, t6)];
                            if same_edge(removed[2], removed[0]) || same_edge(removed[2], removed[1]) {
                                continue;
                            }
                            let gain = g2 + inst.d(t5, t6) - inst.d(t6, t1);
                            if gain <= 0 || t6 == t1 {
                                continue;
                            }
                            let added = [(t2, t3), (t4, t5), (t6, t1)];
                            if tour.is_valid_exchange(&removed, &added) {
                                return Some(Move::Exchange { removed, added });
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

#[inline]
fn same_edge(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

/// 2-opt descent from `tour` to a local optimum of the full candidate
/// neighbourhood (all don't-look bits cleared first).
pub fn local_search_2opt(inst: &TspInstance, mut tour: Tour) -> Tour {
    tour.set_all_dont_look(false);
    TourSearch::new(Neighborhood::TwoOpt)
        .exhaustive(true)
        .run(inst, &mut tour);
    tour
}

/// 3-opt counterpart of [`local_search_2opt`].
pub fn local_search_3opt(inst: &TspInstance, mut tour: Tour) -> Tour {
    tour.set_all_dont_look(false);
    TourSearch::new(Neighborhood::ThreeOpt)
        .exhaustive(true)
        .run(inst, &mut tour);
    tour
}
