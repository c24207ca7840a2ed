use crate::{Error, Result};
use ils_core::perm;
use ils_core::problem::ProblemInstance;
use ils_core::Cost;

pub const TSP_LIMIT: usize = 10;
pub const QAP_LIMIT: usize = 8;
pub const FSP_LIMIT: usize = 8;

/// Global optimum by exhaustive enumeration. Ties go to the
/// lexicographically smallest permutation.
///
/// TSP tours start at city 0 and each tour is visited in one direction only
/// (second city smaller than the last), so 9 free cities cost 9!/2 tours.
pub fn brute_force(problem: &ProblemInstance) -> Result<(Cost, Vec<usize>)> {
    let n = problem.size();
    let (name, limit) = match problem {
        ProblemInstance::Tsp(_) => ("tsp", TSP_LIMIT),
        ProblemInstance::Qap(_) => ("qap", QAP_LIMIT),
        ProblemInstance::Fsp(_) => ("fsp", FSP_LIMIT),
    };
    if n > limit {
        return Err(Error::SizeLimit {
            problem: name,
            size: n,
            limit,
        });
    }
    let mut best: Option<(Cost, Vec<usize>)> = None;
    let mut consider = |p: &[usize]| -> Result<()> {
        let c = problem.evaluate(p)?;
        if best.as_ref().is_none_or(|b| (c, p) < (b.0, b.1.as_slice())) {
            best = Some((c, p.to_vec()));
        }
        Ok(())
    };
    match problem {
        ProblemInstance::Tsp(_) if n > 3 => {
            let mut rest: Vec<usize> = (1..n).collect();
            let mut tour = vec![0; n];
            loop {
                if rest[0] < rest[n - 2] {
                    tour[1..].copy_from_slice(&rest);
                    consider(&tour)?;
                }
                if !perm::next_lexicographic(&mut rest) {
                    break;
                }
            }
        }
        ProblemInstance::Tsp(_) => consider(&(0..n).collect::<Vec<_>>())?,
        _ => {
            let mut p: Vec<usize> = (0..n).collect();
            loop {
                consider(&p)?;
                if !perm::next_lexicographic(&mut p) {
                    break;
                }
            }
        }
    }
    best.ok_or_else(|| Error::Config("cannot enumerate an empty instance".into()))
}
