use crate::{Cost, Error, Result};
use rand::Rng;

pub const DEFAULT_CANDIDATES: usize = 40;

/// Symmetric TSP instance with a precomputed integer distance matrix and
/// nearest-neighbour candidate lists.
#[derive(Debug, Clone)]
pub struct TspInstance {
    pub name: String,
    n: usize,
    coords: Option<Vec<(f64, f64)>>,
    dist: Vec<i32>,
    candidates: Vec<Vec<usize>>,
    k: usize,
}

/// TSPLIB nint: nearest integer, halves away from zero.
pub fn euc_2d(a: (f64, f64), b: (f64, f64)) -> i32 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt().round() as i32
}

impl TspInstance {
    pub fn from_coords(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self> {
        Self::from_coords_with(name, coords, DEFAULT_CANDIDATES)
    }

    pub fn from_coords_with(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        k: usize,
    ) -> Result<Self> {
        let n = coords.len();
        let mut dist = vec![0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = euc_2d(coords[i], coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::build(name.into(), n, Some(coords), dist, k)
    }

    /// Builds from a full `n × n` matrix; it must be symmetric with a zero
    /// diagonal.
    pub fn from_matrix(name: impl Into<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        let mut dist = vec![0; n * n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parameter(format!(
                    "distance matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                dist[i * n + j] = i32::try_from(d)
                    .map_err(|_| Error::Parameter(format!("distance {d} out of range")))?;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0 {
                return Err(Error::Parameter(format!("d({i},{i}) must be 0")));
            }
            for j in i + 1..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::Parameter(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Self::build(name.into(), n, None, dist, DEFAULT_CANDIDATES)
    }

    fn build(
        name: String,
        n: usize,
        coords: Option<Vec<(f64, f64)>>,
        dist: Vec<i32>,
        k: usize,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Degenerate(format!("a tour needs at least 2 cities, got {n}")));
        }
        let mut inst = TspInstance {
            name,
            n,
            coords,
            dist,
            candidates: Vec::new(),
            k: 0,
        };
        inst.set_candidate_size(k);
        Ok(inst)
    }

    /// Rebuilds the candidate lists with `k` nearest neighbours per city
    /// (capped at `n - 1`). Ties are broken by city index.
    pub fn set_candidate_size(&mut self, k: usize) {
        let k = k.min(self.n - 1);
        self.k = k;
        self.candidates = (0..self.n)
            .map(|c| {
                let mut others: Vec<usize> = (0..self.n).filter(|&o| o != c).collect();
                let key = |&o: &usize| (self.d(c, o), o);
                if k < others.len() {
                    others.select_nth_unstable_by_key(k, key);
                    others.truncate(k);
                }
                others.sort_unstable_by_key(key);
                others
            })
            .collect();
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn candidate_size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> Cost {
        self.dist[a * self.n + b] as Cost
    }

    /// The `k` nearest cities to `c`, ascending by distance.
    #[inline]
    pub fn candidates(&self, c: usize) -> &[usize] {
        &self.candidates[c]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// The `count` cities nearest to `c` (excluding `c`), ascending by
    /// distance with ties by index. Served from the candidate list when it is
    /// long enough.
    pub fn nearest(&self, c: usize, count: usize) -> Vec<usize> {
        let count = count.min(self.n - 1);
        if count <= self.k {
            return self.candidates[c][..count].to_vec();
        }
        let mut others: Vec<usize> = (0..self.n).filter(|&o| o != c).collect();
        others.sort_unstable_by_key(|&o| (self.d(c, o), o));
        others.truncate(count);
        others
    }

    /// Mean Euclidean distance from each city to its nearest neighbour.
    pub fn mean_nearest_neighbor_distance(&self) -> Option<f64> {
        let coords = self.coords.as_ref()?;
        let total: f64 = (0..self.n)
            .map(|c| {
                let p = coords[c];
                coords
                    .iter()
                    .enumerate()
                    .filter(|&(o, _)| o != c)
                    .map(|(_, q)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        Some(total / self.n as f64)
    }

    /// Uniform random cities in a `side × side` square with integer
    /// coordinates.
    pub fn random_uniform<R: Rng + ?Sized>(name: impl Into<String>, n: usize, side: u32, rng: &mut R) -> Result<Self> {
        let coords = (0..n)
            .map(|_| (rng.random_range(0..side) as f64, rng.random_range(0..side) as f64))
            .collect();
        Self::from_coords(name, coords)
    }
}
