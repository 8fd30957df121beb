//! End-to-end pipeline and randomized sampling of solutions.

use rand::Rng;
use thiserror::Error;

use crate::maxplus::{Matrix, Rational, Scalar};
use crate::model::{classify, fill_matrices, preprocess, Classification, MapSystem, MatrixSystem};
use crate::nonpositive::{
    stage1, stage2, SolutionDescription, SolutionStatus, SolveError, Stage1Outcome, Stage1Result,
};
use crate::oracle;
use crate::positive::{sharp_matrix, PositiveError, PositiveSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    NonPositive(#[from] SolveError),
    #[error(transparent)]
    Positive(#[from] PositiveError),
    #[error("produced vector {0:?} does not satisfy the system")]
    UnsoundSample(Vec<Scalar>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    NonPositive(SolutionDescription),
    Positive(PositiveSystem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub input: MapSystem,
    /// The preprocessed system.
    pub system: MapSystem,
    pub classification: Classification,
    pub matrices: MatrixSystem,
    /// `None` when stage 1 was skipped.
    pub stage1: Option<Stage1Result>,
    pub solution: Solution,
}

pub fn solve(input: &MapSystem) -> Result<Solved, PipelineError> {
    let system = preprocess(input);
    let classification = classify(&system);
    let matrices = fill_matrices(&system);
    let pinned: Vec<usize> = system.forced_bottom.iter().copied().collect();
    let positive = |ms: &MatrixSystem| -> Result<Solution, PipelineError> {
        let all: Vec<Matrix> = ms.all().cloned().collect();
        Ok(Solution::Positive(sharp_matrix(&all)?))
    };

    let (stage1_result, solution) = match classification {
        Classification::AllPositive => (None, positive(&matrices)?),
        Classification::HasNegative => match stage1(&matrices)? {
            Stage1Outcome::IdentitySystem => (None, positive(&matrices)?),
            Stage1Outcome::OnlyBottom => (
                None,
                Solution::NonPositive(SolutionDescription::only_bottom(system.n(), pinned)),
            ),
            Stage1Outcome::Reduced(s1) => {
                let desc = stage2(&s1, &matrices, &pinned)?;
                (Some(s1), Solution::NonPositive(desc))
            }
        },
    };
    Ok(Solved {
        input: input.clone(),
        system,
        classification,
        matrices,
        stage1: stage1_result,
        solution,
    })
}

impl Solved {
    /// Scale used for random parameters: the largest offset plus `n`.
    fn scale(&self) -> i64 {
        self.system.max_abs_offset().ceil().to_integer() + self.system.n() as i64
    }

    /// `count` random solutions, each verified against the atoms.
    ///
    /// When only the all `−∞` vector solves the system, that vector is
    /// returned once regardless of `count` (and nothing for `count == 0`).
    pub fn sample<R: Rng>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<Vec<Scalar>>, PipelineError> {
        let scale = self.scale();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let x = match &self.solution {
                Solution::NonPositive(desc) if desc.status == SolutionStatus::OnlyBottom => {
                    out.push(vec![Scalar::ZERO; self.system.n()]);
                    break;
                }
                Solution::NonPositive(desc) => sample_nonpositive(desc, scale, rng)?,
                Solution::Positive(sys) => {
                    let y: Vec<Scalar> = (0..sys.sharp.cols())
                        .map(|_| random_scalar(rng, -scale, 0, 0.2))
                        .collect();
                    sys.combine(&y).map_err(SolveError::from)?
                }
            };
            if !oracle::check(&x, &self.input) {
                return Err(PipelineError::UnsoundSample(x));
            }
            out.push(x);
        }
        Ok(out)
    }
}

fn random_scalar<R: Rng>(rng: &mut R, low: i64, high: i64, bottom_probability: f64) -> Scalar {
    if rng.gen_bool(bottom_probability) {
        Scalar::ZERO
    } else {
        // Halves exercise non-integer values.
        Scalar::Finite(Rational::new(rng.gen_range(2 * low..=2 * high), 2))
    }
}

fn sample_nonpositive<R: Rng>(
    desc: &SolutionDescription,
    scale: i64,
    rng: &mut R,
) -> Result<Vec<Scalar>, SolveError> {
    let kp = desc.k_prime;
    let u: Vec<Scalar> = (0..kp)
        .map(|_| random_scalar(rng, -scale, scale, 0.1))
        .collect();
    let d: Vec<Scalar> = (0..kp).map(|_| random_scalar(rng, -3, 0, 0.1)).collect();
    let mut f = Matrix::zeros(desc.f_bound.rows(), kp);
    for i in 0..f.rows() {
        for j in 0..kp {
            let cap = desc.f_bound.get(i, j).times(d[j]);
            f.set(i, j, cap.times(random_scalar(rng, -3, 0, 0.2)));
        }
    }
    desc.sample_solution(&u, &d, &f)
}
