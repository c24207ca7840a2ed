//! Permutation flow shop: Taillard-format input, makespan, NEH, insert
//! descent and swap/interchange kicks.

use crate::engine::Solution;
use crate::{perm, Cost, Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Row order of the processing-time matrix in a file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// One row per machine (Taillard's files).
    #[default]
    MachineMajor,
    /// One row per job.
    JobMajor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FspInstance {
    pub name: String,
    n_jobs: usize,
    n_machines: usize,
    /// `proc[j * n_machines + k]` is job `j` on machine `k`.
    proc: Vec<i64>,
    pub best_known: Option<Cost>,
}

impl FspInstance {
    /// `times[j][k]`: processing time of job `j` on machine `k`.
    pub fn new(name: impl Into<String>, times: Vec<Vec<i64>>) -> Result<Self> {
        let n = times.len();
        let m = times.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::Degenerate("flow shop needs at least one job and one machine".into()));
        }
        if times.iter().any(|r| r.len() != m) {
            return Err(Error::Parameter("every job needs one time per machine".into()));
        }
        if let Some(&p) = times.iter().flatten().find(|&&p| p < 0) {
            return Err(Error::Parameter(format!("negative processing time {p}")));
        }
        Ok(FspInstance {
            name: name.into(),
            n_jobs: n,
            n_machines: m,
            proc: times.concat(),
            best_known: None,
        })
    }

    pub fn n_jobs(&self) -> usize {
        self.n_jobs
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    #[inline]
    pub fn p(&self, job: usize, machine: usize) -> i64 {
        self.proc[job * self.n_machines + machine]
    }

    pub fn total_processing_time(&self) -> i64 {
        self.proc.iter().sum()
    }

    fn job_total(&self, job: usize) -> i64 {
        (0..self.n_machines).map(|k| self.p(job, k)).sum()
    }

    /// Instance from Taillard's generator: times uniform in `1..=99`, drawn
    /// machine by machine from a Lehmer stream started at `seed`.
    pub fn taillard(name: impl Into<String>, seed: i64, n_jobs: usize, n_machines: usize) -> Self {
        let mut lcg = TaillardLcg(seed);
        let mut times = vec![vec![0; n_machines]; n_jobs];
        for k in 0..n_machines {
            for row in times.iter_mut() {
                row[k] = lcg.unif(1, 99);
            }
        }
        Self::new(name, times).expect("non-empty positive instance")
    }
}

/// Taillard's portable generator: `x ← 16807 x mod (2^31 − 1)` by Schrage's
/// method.
struct TaillardLcg(i64);

impl TaillardLcg {
    fn unif(&mut self, low: i64, high: i64) -> i64 {
        const A: i64 = 16807;
        const B: i64 = 127773;
        const C: i64 = 2836;
        const M: i64 = 2147483647;
        let k = self.0 / B;
        self.0 = A * (self.0 % B) - k * C;
        if self.0 < 0 {
            self.0 += M;
        }
        let u = self.0 as f64 / M as f64;
        low + (u * (high - low + 1) as f64) as i64
    }
}

/// Parses `n_jobs n_machines` followed by the processing-time matrix in the
/// given layout.
pub fn parse_fsp(text: &str, layout: Layout) -> Result<FspInstance> {
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for t in line.split_whitespace() {
            let v: i64 = t
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad integer `{t}`")))?;
            tokens.push((i + 1, v));
        }
    }
    if tokens.len() < 2 {
        return Err(Error::parse(1, "expected `n_jobs n_machines` header"));
    }
    let dim = |t: (usize, i64)| {
        usize::try_from(t.1)
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::parse(t.0, format!("bad dimension {}", t.1)))
    };
    let (n, m) = (dim(tokens[0])?, dim(tokens[1])?);
    let body = &tokens[2..];
    if body.len() != n * m {
        let line = tokens.last().map_or(1, |t| t.0);
        return Err(Error::parse(
            line,
            format!("found {} processing times, {n}x{m} needs {}", body.len(), n * m),
        ));
    }
    if let Some(&(line, p)) = body.iter().find(|t| t.1 < 0) {
        return Err(Error::parse(line, format!("negative processing time {p}")));
    }
    let mut times = vec![vec![0; m]; n];
    for (idx, &(_, v)) in body.iter().enumerate() {
        let (j, k) = match layout {
            Layout::MachineMajor => (idx % n, idx / n),
            Layout::JobMajor => (idx / m, idx % m),
        };
        times[j][k] = v;
    }
    FspInstance::new("fsp", times)
}

/// Writes the instance in machine-major layout.
pub fn write_fsp(inst: &FspInstance) -> String {
    let mut out = format!("{} {}\n", inst.n_jobs, inst.n_machines);
    for k in 0..inst.n_machines {
        let row: Vec<String> = (0..inst.n_jobs).map(|j| inst.p(j, k).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A job order with its cached makespan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSequence {
    order: Vec<usize>,
    makespan: Cost,
}

impl JobSequence {
    pub fn new(inst: &FspInstance, order: Vec<usize>) -> Result<Self> {
        perm::validate(&order, inst.n_jobs())?;
        let makespan = makespan(inst, &order);
        Ok(JobSequence { order, makespan })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn makespan(&self) -> Cost {
        self.makespan
    }

    pub fn validate(&self, inst: &FspInstance) -> Result<()> {
        perm::validate(&self.order, inst.n_jobs())?;
        let naive = makespan(inst, &self.order);
        if naive != self.makespan {
            return Err(Error::InvalidSolution(format!(
                "cached makespan {} differs from {naive}",
                self.makespan
            )));
        }
        Ok(())
    }
}

impl Solution for JobSequence {
    fn cost(&self) -> Cost {
        self.makespan
    }

    fn permutation(&self) -> &[usize] {
        &self.order
    }
}

/// Completion time of the last job on the last machine for the jobs of
/// `seq` in order (a partial sequence is fine).
pub fn makespan(inst: &FspInstance, seq: &[usize]) -> Cost {
    let m = inst.n_machines();
    let mut c = vec![0i64; m];
    for &j in seq {
        let mut prev = 0;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = (*ck).max(prev) + inst.p(j, k);
            prev = *ck;
        }
    }
    c[m - 1]
}

fn with_inserted(seq: &[usize], job: usize, pos: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.extend_from_slice(&seq[..pos]);
    out.push(job);
    out.extend_from_slice(&seq[pos..]);
    out
}

/// Inserts `jobs` one at a time, each at the position giving the smallest
/// partial makespan (earliest position on ties).
fn insert_greedily(inst: &FspInstance, jobs: &[usize]) -> Vec<usize> {
    let mut seq: Vec<usize> = Vec::with_capacity(jobs.len());
    for &job in jobs {
        let best = (0..=seq.len())
            .map(|pos| (makespan(inst, &with_inserted(&seq, job, pos)), pos))
            .min()
            .expect("at least one position");
        seq.insert(best.1, job);
    }
    seq
}

/// NEH: jobs by non-increasing total processing time (lower index first on
/// ties), each inserted at its best position.
pub fn neh(inst: &FspInstance) -> JobSequence {
    let mut jobs: Vec<usize> = (0..inst.n_jobs()).collect();
    jobs.sort_by_key(|&j| (std::cmp::Reverse(inst.job_total(j)), j));
    JobSequence::new(inst, insert_greedily(inst, &jobs)).expect("NEH places every job")
}

/// NEH insertion with the jobs taken in random order.
pub fn random_order_neh<R: Rng + ?Sized>(inst: &FspInstance, rng: &mut R) -> JobSequence {
    let jobs = perm::random(inst.n_jobs(), rng);
    JobSequence::new(inst, insert_greedily(inst, &jobs)).expect("every job inserted")
}

pub fn random_sequence<R: Rng + ?Sized>(inst: &FspInstance, rng: &mut R) -> JobSequence {
    JobSequence::new(inst, perm::random(inst.n_jobs(), rng)).expect("random permutation")
}

/// Makespans of inserting `job` at every position `0..=seq.len()` of `seq`
/// in O(n·m) total (Taillard's heads and tails).
fn insertion_makespans(inst: &FspInstance, seq: &[usize], job: usize) -> Vec<Cost> {
    let m = inst.n_machines();
    let len = seq.len();
    // e[i][k]: completion of seq[..i] on machine k; q[i][k]: time from the
    // start of seq[i] on machine k to the end of the schedule of seq[i..].
    let mut e = vec![0i64; (len + 1) * m];
    for i in 1..=len {
        let j = seq[i - 1];
        for k in 0..m {
            let up = if k > 0 { e[i * m + k - 1] } else { 0 };
            e[i * m + k] = e[(i - 1) * m + k].max(up) + inst.p(j, k);
        }
    }
    let mut q = vec![0i64; (len + 1) * m];
    for i in (0..len).rev() {
        let j = seq[i];
        for k in (0..m).rev() {
            let down = if k + 1 < m { q[i * m + k + 1] } else { 0 };
            q[i * m + k] = q[(i + 1) * m + k].max(down) + inst.p(j, k);
        }
    }
    (0..=len)
        .map(|pos| {
            let mut f_prev = 0;
            let mut best = 0;
            for k in 0..m {
                let f = e[pos * m + k].max(f_prev) + inst.p(job, k);
                f_prev = f;
                best = best.max(f + q[pos * m + k]);
            }
            best
        })
        .collect()
}

/// Remove-and-reinsert descent, first improvement. Removal positions are
/// scanned ascending and, for each, insertion positions ascending; the scan
/// starts over after each improving move. With `accelerated` all insertion
/// positions of a removed job are evaluated together in O(n·m); otherwise
/// each candidate is re-evaluated from scratch. Both visit the same moves.
/// Returns the number of moves applied.
pub fn local_search_insert(inst: &FspInstance, seq: &mut JobSequence, accelerated: bool) -> u64 {
    let n = seq.order.len();
    let mut moves = 0;
    'scan: loop {
        for i in 0..n {
            let mut rest = seq.order.clone();
            let job = rest.remove(i);
            let found = if accelerated {
                let spans = insertion_makespans(inst, &rest, job);
                (0..n).find(|&j| j != i && spans[j] < seq.makespan).map(|j| (j, spans[j]))
            } else {
                (0..n).filter(|&j| j != i).find_map(|j| {
                    let span = makespan(inst, &with_inserted(&rest, job, j));
                    (span < seq.makespan).then_some((j, span))
                })
            };
            if let Some((j, span)) = found {
                rest.insert(j, job);
                seq.order = rest;
                seq.makespan = span;
                moves += 1;
                continue 'scan;
            }
        }
        return moves;
    }
}

/// Applies `n_swaps` random adjacent transpositions and `n_interchanges`
/// random arbitrary transpositions, interleaved in random order.
pub fn fsp_perturb<R: Rng + ?Sized>(
    inst: &FspInstance,
    seq: &JobSequence,
    n_swaps: usize,
    n_interchanges: usize,
    rng: &mut R,
) -> Result<JobSequence> {
    if n_swaps == 0 && n_interchanges == 0 {
        return Err(Error::Parameter("perturbation needs at least one swap or interchange".into()));
    }
    let n = seq.order.len();
    if n < 2 {
        return Err(Error::Degenerate("perturbing needs at least two jobs".into()));
    }
    let mut kinds = vec![true; n_swaps];
    kinds.resize(n_swaps + n_interchanges, false);
    kinds.shuffle(rng);
    let mut order = seq.order.clone();
    for adjacent in kinds {
        if adjacent {
            let p = rng.random_range(0..n - 1);
            order.swap(p, p + 1);
        } else {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            order.swap(a, b);
        }
    }
    JobSequence::new(inst, order)
}

/// Job order on one line, then `makespan <value>`.
pub fn write_sequence(seq: &JobSequence) -> String {
    let line: Vec<String> = seq.order.iter().map(|j| j.to_string()).collect();
    format!("{}\nmakespan {}\n", line.join(" "), seq.makespan)
}

pub fn read_sequence(text: &str) -> Result<(Vec<usize>, Option<Cost>)> {
    perm::read_labeled(text, "makespan")
}
