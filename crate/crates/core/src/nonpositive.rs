//! Parametric solution set of systems with at least one strictly negative atom.
//!
//! Stage 1 solves the matrices that keep every free variable of `A_1` free
//! and produces `T^∧` (`n × k`): for each free variable, the greatest
//! solution of those matrices when that variable is `0` and the other free
//! variables are `−∞`. Stage 2 tests each column of `T^∧` against the
//! remaining matrices, keeps the `k'` columns that pass and bounds the
//! dropped free variables by a matrix `F` of the kept ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maxplus::{
    analyze_graph, greatest_solution, residual, star_times_unchecked, Matrix, MaxPlusError, Scalar,
    UpperMatrix, UpperScalar,
};
use crate::model::MatrixSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    MaxPlus(#[from] MaxPlusError),
    #[error("matrix {index} does not keep the free variables of the first matrix free")]
    NotFoldable { index: usize },
    #[error("stage 1 produced an unbounded entry")]
    Unbounded,
    #[error("the all -inf vector is the only solution")]
    OnlyBottom,
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("parameter out of bounds: {0}")]
    OutOfBounds(String),
}

/// Indices `i` whose row is `e_i`.
pub fn free_variables(a: &Matrix) -> Vec<usize> {
    (0..a.rows()).filter(|&i| a.row_is_unit(i)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage1Result {
    pub k: usize,
    /// Free variables first, then the others (original indices).
    pub perm: Vec<usize>,
    /// Positions in [`MatrixSystem::all`] of the matrices solved here.
    pub folded: Vec<usize>,
    pub l_prime: usize,
    /// Meet of the per-matrix greatest solutions, rows of the non-free
    /// variables in `perm` order.
    pub j_meet: Matrix,
    /// `I_k` stacked on the jointly feasible `J^∧`, rows in `perm` order.
    pub t_wedge: Matrix,
    /// Entries of `j_meet` lowered to make the columns jointly feasible.
    pub corrected_entries: usize,
}

impl Stage1Result {
    pub fn free(&self) -> &[usize] {
        &self.perm[..self.k]
    }

    pub fn dependent(&self) -> &[usize] {
        &self.perm[self.k..]
    }

    /// `T^∧` with rows in the original variable order.
    pub fn t_original(&self) -> Matrix {
        unpermute_rows(&self.t_wedge, &self.perm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage1Outcome {
    Reduced(Stage1Result),
    /// `A_1` has no free variable.
    OnlyBottom,
    /// `A_1 = I`: there is no negative constraint to saturate.
    IdentitySystem,
}

pub fn stage1(ms: &MatrixSystem) -> Result<Stage1Outcome, SolveError> {
    let n = ms.n();
    let a1 = &ms.negative[0];
    if a1.is_identity() {
        return Ok(Stage1Outcome::IdentitySystem);
    }
    let free = free_variables(a1);
    if free.is_empty() {
        return Ok(Stage1Outcome::OnlyBottom);
    }
    let rest: Vec<usize> = (0..n).filter(|v| !free.contains(v)).collect();

    let mut folded = Vec::new();
    let mut meet: Option<UpperMatrix> = None;
    for (index, a) in ms.all().enumerate() {
        let shaped = free.iter().all(|&i| a.row_is_unit(i));
        let c = a.select(&rest, &rest);
        if index < ms.negative.len() {
            if !shaped {
                return Err(SolveError::NotFoldable { index });
            }
        } else if !shaped || !analyze_graph(&c)?.worst_circuit_weight_sign.admits_star() {
            continue;
        }
        let j = greatest_solution(&c, &a.select(&rest, &free))?;
        meet = Some(match meet {
            None => j,
            Some(m) => m.meet(&j)?,
        });
        folded.push(index);
    }
    let j_meet = meet
        .expect("A_1 is always folded")
        .to_lower()
        .ok_or(SolveError::Unbounded)?;

    let mut t = Matrix::zeros(n, free.len());
    for (c, &v) in free.iter().enumerate() {
        t.set(v, c, Scalar::ONE);
    }
    for (r, &v) in rest.iter().enumerate() {
        for c in 0..free.len() {
            t.set(v, c, j_meet.get(r, c));
        }
    }
    let matrices: Vec<&Matrix> = ms
        .all()
        .enumerate()
        .filter(|(i, _)| folded.contains(i))
        .map(|(_, a)| a)
        .collect();
    let before = t.clone();
    make_jointly_feasible(&mut t, &matrices, &rest)?;
    let corrected_entries = before
        .entries()
        .iter()
        .zip(t.entries())
        .filter(|(a, b)| a != b)
        .count();

    let perm: Vec<usize> = free.iter().chain(&rest).copied().collect();
    let columns: Vec<usize> = (0..free.len()).collect();
    Ok(Stage1Outcome::Reduced(Stage1Result {
        k: free.len(),
        t_wedge: t.select(&perm, &columns),
        perm,
        l_prime: folded.len(),
        folded,
        j_meet,
        corrected_entries,
    }))
}

/// Lowers the `rows` of `t` until `t ≤ A t` for every matrix.
///
/// Each pass replaces `t` by `t ∧ min_A (A t)`, which never goes below a
/// feasible matrix under `t`. If that has not settled after a bounded number
/// of passes, offending entries are set to `−∞` until none is left.
fn make_jointly_feasible(
    t: &mut Matrix,
    matrices: &[&Matrix],
    rows: &[usize],
) -> Result<(), SolveError> {
    let bound = |t: &Matrix| -> Result<Matrix, SolveError> {
        let mut acc: Option<Matrix> = None;
        for a in matrices {
            let p = a.times(t)?;
            acc = Some(match acc {
                None => p,
                Some(m) => m.meet(&p)?,
            });
        }
        Ok(acc.expect("at least one matrix"))
    };
    let passes = 4 * t.rows() + 4;
    for _ in 0..passes {
        let next = t.meet(&bound(t)?)?;
        if next == *t {
            return Ok(());
        }
        *t = next;
    }
    loop {
        let b = bound(t)?;
        let mut changed = false;
        for &r in rows {
            for c in 0..t.cols() {
                if t.get(r, c) > b.get(r, c) {
                    t.set(r, c, Scalar::ZERO);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn unpermute_rows(m: &Matrix, perm: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for (p, &v) in perm.iter().enumerate() {
        for c in 0..m.cols() {
            out.set(v, c, m.get(p, c));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionStatus {
    OnlyBottom,
    Complete,
    Reduced,
}

/// Outcome of testing one column of `T^∧` against one matrix left out of
/// stage 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnTest {
    /// Free variable owning the column.
    pub variable: usize,
    /// Position of the matrix in [`MatrixSystem::all`].
    pub matrix: usize,
    /// `A t`, original variable order.
    pub product: Vec<Scalar>,
    pub passes: bool,
}

/// Solutions `x = T^∧ [D u; F u]` with `u` ranging over the kept free
/// variables, `D ≤ I` diagonal and `F ≤ f_bound ⊗ D`. Every such vector
/// solves the system; [`SolutionDescription::represents`] tells whether a
/// given solution is among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionDescription {
    pub n: usize,
    pub status: SolutionStatus,
    pub k: usize,
    pub k_prime: usize,
    pub l_prime: usize,
    /// Kept free variables, dropped free variables, dependent variables.
    pub perm: Vec<usize>,
    /// `n × k`, rows in `perm` order, columns kept then dropped.
    pub t_wedge: Matrix,
    /// Dependent variables as a function of the kept ones.
    pub j_block: Matrix,
    /// Dependent variables as a function of the dropped ones.
    pub k_block: Matrix,
    /// Meet of the residuated bounds `[I; K] \ Z` over the unsolved matrices.
    pub f_wedge: UpperMatrix,
    /// Bound actually used for `F`: `f_wedge` met with the bound that keeps
    /// every combination of columns feasible.
    pub f_bound: Matrix,
    pub pinned: Vec<usize>,
    pub column_tests: Vec<ColumnTest>,
    pub corrected_entries: usize,
}

impl SolutionDescription {
    pub fn only_bottom(n: usize, pinned: Vec<usize>) -> Self {
        SolutionDescription {
            n,
            status: SolutionStatus::OnlyBottom,
            k: 0,
            k_prime: 0,
            l_prime: 0,
            perm: (0..n).collect(),
            t_wedge: Matrix::zeros(n, 0),
            j_block: Matrix::zeros(n, 0),
            k_block: Matrix::zeros(n, 0),
            f_wedge: UpperMatrix::filled(0, 0, UpperScalar::Top),
            f_bound: Matrix::zeros(0, 0),
            pinned,
            column_tests: Vec::new(),
            corrected_entries: 0,
        }
    }

    pub fn kept(&self) -> &[usize] {
        &self.perm[..self.k_prime]
    }

    pub fn dropped(&self) -> &[usize] {
        &self.perm[self.k_prime..self.k]
    }

    pub fn dependent(&self) -> &[usize] {
        &self.perm[self.k..]
    }

    /// Values of the kept free variables in `x`.
    pub fn free_components(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.kept().iter().map(|&v| x[v]).collect()
    }

    /// Assembles `x` from the kept values `v = D u` and dropped values `y = F u`.
    fn assemble(&self, v: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut x = vec![Scalar::ZERO; self.n];
        for (&var, &value) in self.kept().iter().zip(v) {
            x[var] = value;
        }
        for (&var, &value) in self.dropped().iter().zip(y) {
            x[var] = value;
        }
        let from_kept = self.j_block.apply(v).expect("k' columns");
        let from_dropped = self.k_block.apply(y).expect("k - k' columns");
        for (r, &var) in self.dependent().iter().enumerate() {
            x[var] = from_kept[r].plus(from_dropped[r]);
        }
        for &p in &self.pinned {
            x[p] = Scalar::ZERO;
        }
        x
    }

    fn check_arity(&self, u: &[Scalar]) -> Result<(), SolveError> {
        if self.status == SolutionStatus::OnlyBottom {
            return Err(SolveError::OnlyBottom);
        }
        if u.len() != self.k_prime {
            return Err(SolveError::Arity {
                expected: self.k_prime,
                found: u.len(),
            });
        }
        Ok(())
    }

    /// Greatest solution whose kept free variables equal `u`.
    pub fn sup_solution(&self, u: &[Scalar]) -> Result<Vec<Scalar>, SolveError> {
        self.check_arity(u)?;
        let y = self.f_bound.apply(u)?;
        Ok(self.assemble(u, &y))
    }

    /// `x = T^∧ [D; F] u` for `D = diag(d)`.
    pub fn sample_solution(
        &self,
        u: &[Scalar],
        d: &[Scalar],
        f: &Matrix,
    ) -> Result<Vec<Scalar>, SolveError> {
        self.check_arity(u)?;
        if d.len() != self.k_prime {
            return Err(SolveError::Arity {
                expected: self.k_prime,
                found: d.len(),
            });
        }
        if let Some(i) = d.iter().position(|&di| di > Scalar::ONE) {
            return Err(SolveError::OutOfBounds(format!(
                "diagonal entry {i} is {} > 0",
                d[i]
            )));
        }
        if f.shape() != self.f_bound.shape() {
            return Err(MaxPlusError::DimensionMismatch {
                op: "sample_solution",
                left: self.f_bound.shape(),
                right: f.shape(),
            }
            .into());
        }
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                let cap = self.f_bound.get(i, j).times(d[j]);
                if f.get(i, j) > cap {
                    return Err(SolveError::OutOfBounds(format!(
                        "F[{i}][{j}] = {} exceeds {cap}",
                        f.get(i, j)
                    )));
                }
            }
        }
        let v: Vec<Scalar> = u.iter().zip(d).map(|(&ui, &di)| ui.times(di)).collect();
        let y = f.apply(u)?;
        Ok(self.assemble(&v, &y))
    }

    /// Whether `x` is `T^∧ [D; F] u` for some admissible parameters.
    ///
    /// Without loss of generality `D = I` and `u` is the kept part of `x`;
    /// then the dropped part must lie below `f_bound ⊗ u` and the dependent
    /// part must be exactly what the kept and dropped parts induce.
    pub fn represents(&self, x: &[Scalar]) -> bool {
        if x.len() != self.n {
            return false;
        }
        if self.status == SolutionStatus::OnlyBottom {
            return x.iter().all(|v| v.is_bottom());
        }
        let u = self.free_components(x);
        let y: Vec<Scalar> = self.dropped().iter().map(|&v| x[v]).collect();
        let cap = self.f_bound.apply(&u).expect("k' columns");
        if y.iter().zip(&cap).any(|(a, b)| a > b) {
            return false;
        }
        self.assemble(&u, &y) == x
    }
}

/// Stage 2: tests the columns of `T^∧` against the matrices left out of
/// stage 1 and bounds the dropped free variables.
pub fn stage2(
    s1: &Stage1Result,
    ms: &MatrixSystem,
    pinned: &[usize],
) -> Result<SolutionDescription, SolveError> {
    let n = ms.n();
    let t = s1.t_original();
    let free = s1.free();
    let dependent = s1.dependent();
    let unfolded: Vec<(usize, &Matrix)> = ms
        .all()
        .enumerate()
        .filter(|(i, _)| !s1.folded.contains(i))
        .collect();
    let products: Vec<Matrix> = unfolded
        .iter()
        .map(|(_, a)| a.times(&t))
        .collect::<Result<_, _>>()?;

    let mut column_tests = Vec::new();
    let mut kept_cols = Vec::new();
    let mut dropped_cols = Vec::new();
    for (c, &var) in free.iter().enumerate() {
        let mut all_pass = true;
        for ((index, _), p) in unfolded.iter().zip(&products) {
            let product = p.column(c);
            let passes = (0..n).all(|r| t.get(r, c) <= product[r]);
            all_pass &= passes;
            column_tests.push(ColumnTest {
                variable: var,
                matrix: *index,
                product,
                passes,
            });
        }
        if all_pass {
            kept_cols.push(c);
        } else {
            dropped_cols.push(c);
        }
    }
    let k = s1.k;
    let k_prime = kept_cols.len();
    if k_prime == 0 {
        let mut desc = SolutionDescription::only_bottom(n, pinned.to_vec());
        desc.k = k;
        desc.l_prime = s1.l_prime;
        desc.perm = s1.perm.clone();
        desc.t_wedge = s1.t_wedge.clone();
        desc.column_tests = column_tests;
        return Ok(desc);
    }

    let kept: Vec<usize> = kept_cols.iter().map(|&c| free[c]).collect();
    let dropped: Vec<usize> = dropped_cols.iter().map(|&c| free[c]).collect();
    let perm: Vec<usize> = kept
        .iter()
        .chain(&dropped)
        .chain(dependent)
        .copied()
        .collect();
    let columns: Vec<usize> = kept_cols.iter().chain(&dropped_cols).copied().collect();
    let j_block = t.select(dependent, &kept_cols);
    let k_block = t.select(dependent, &dropped_cols);

    let (f_wedge, f_bound) = if dropped.is_empty() {
        (
            UpperMatrix::filled(0, k_prime, UpperScalar::Top),
            Matrix::zeros(0, k_prime),
        )
    } else {
        let unknown: Vec<usize> = dropped.iter().chain(dependent).copied().collect();
        let stacked = Matrix::identity(dropped.len()).stack_vertical(&k_block)?;
        let mut f_wedge: Option<UpperMatrix> = None;
        for (_, a) in &unfolded {
            let b = a
                .select(&unknown, &kept)
                .plus(&a.select(&unknown, dependent).times(&j_block)?)?;
            let c = a.select(&unknown, &unknown);
            let z = if analyze_graph(&c)?.worst_circuit_weight_sign.admits_star() {
                star_times_unchecked(&c, &b)
            } else {
                b
            };
            let f = residual(&stacked, &z)?;
            f_wedge = Some(match f_wedge {
                None => f,
                Some(m) => m.meet(&f)?,
            });
        }
        let f_wedge = f_wedge.expect("a dropped column failed against some matrix");
        let combination = combination_bound(&t, &products, &kept_cols, &dropped_cols);
        let f_bound = f_wedge
            .meet(&combination)?
            .to_lower()
            .ok_or(SolveError::Unbounded)?;
        (f_wedge, f_bound)
    };

    Ok(SolutionDescription {
        n,
        status: if dropped.is_empty() {
            SolutionStatus::Complete
        } else {
            SolutionStatus::Reduced
        },
        k,
        k_prime,
        l_prime: s1.l_prime,
        t_wedge: t.select(&perm, &columns),
        perm,
        j_block,
        k_block,
        f_wedge,
        f_bound,
        pinned: pinned.to_vec(),
        column_tests,
        corrected_entries: s1.corrected_entries,
    })
}

/// Largest `β` such that `F ≤ β ⊗ D` keeps `T^∧ [D; F] u` feasible.
///
/// A dropped column `t̄_i` only needs help on the rows `r` where
/// `t̄_i[r] > (A t̄_i)[r]`; there the kept part supplies at least
/// `(A t_j)[r] + d_j u_j`, so `β_ij = min (A t_j)[r] − t̄_i[r]` over those rows
/// and all unsolved matrices suffices.
fn combination_bound(
    t: &Matrix,
    products: &[Matrix],
    kept: &[usize],
    dropped: &[usize],
) -> UpperMatrix {
    let mut beta = UpperMatrix::filled(dropped.len(), kept.len(), UpperScalar::Top);
    for p in products {
        for (i, &ci) in dropped.iter().enumerate() {
            for r in 0..t.rows() {
                let own = t.get(r, ci);
                if own <= p.get(r, ci) {
                    continue;
                }
                let lift = own.inverse();
                for (j, &cj) in kept.iter().enumerate() {
                    let candidate = lift.times_scalar(p.get(r, cj));
                    beta.set(i, j, beta.get(i, j).meet(candidate));
                }
            }
        }
    }
    beta
}
