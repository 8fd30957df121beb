//! Non-trivial solutions of systems made only of atoms with `a ≥ 0`.
//!
//! `x ≤ A x` is relaxed through the pseudo-inverse: `A^- x ≤ x` has the
//! solution cone spanned by the columns of `(A^-)*`, which is exact when `A`
//! is monomial. In general each column is cut down until it satisfies every
//! `x ≤ A_k x`.

use thiserror::Error;

use crate::maxplus::{kleene_star, Matrix, MaxPlusError, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositiveError {
    #[error(transparent)]
    MaxPlus(#[from] MaxPlusError),
    #[error("matrix is not monomial")]
    NotMonomial,
    #[error("no matrices given")]
    Empty,
}

/// Transpose of `A` with finite entries negated.
pub fn pseudo_inverse(a: &Matrix) -> Matrix {
    a.transpose().map(|v| match v {
        Scalar::Bottom => Scalar::Bottom,
        Scalar::Finite(r) => Scalar::Finite(-r),
    })
}

/// Exactly one finite entry in every row and every column.
pub fn is_monomial(a: &Matrix) -> bool {
    let finite_count = |line: &[Scalar]| line.iter().filter(|v| v.is_finite()).count();
    a.is_square()
        && (0..a.rows()).all(|i| finite_count(a.row(i)) == 1)
        && (0..a.cols()).all(|j| finite_count(&a.column(j)) == 1)
}

/// Generators of `{x : x ≤ A x}` for a monomial `A`: every solution is
/// `(A^-)* y` for some `y`.
pub fn monomial_cone(a: &Matrix) -> Result<Matrix, PositiveError> {
    if !is_monomial(a) {
        return Err(PositiveError::NotMonomial);
    }
    Ok(kleene_star(&pseudo_inverse(a))?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveSystem {
    pub matrices: Vec<Matrix>,
    /// `⊕_k A_k^-`.
    pub combined_inverse: Matrix,
    pub inverse_star: Matrix,
    /// Columns of `inverse_star` cut down until each satisfies `c ≤ A_k c`
    /// for every `k`.
    pub sharp: Matrix,
    /// Distinct columns of `sharp` that are not all `−∞`.
    pub nontrivial_columns: usize,
}

impl PositiveSystem {
    /// `0` everywhere except on variables whose row is all `−∞` in some
    /// matrix. A solution whenever the system was preprocessed, since then
    /// no atom reads a pinned variable.
    pub fn trivial_solution(&self) -> Vec<Scalar> {
        let n = self.sharp.rows();
        (0..n)
            .map(|i| {
                let pinned = self
                    .matrices
                    .iter()
                    .any(|a| a.row(i).iter().all(|v| v.is_bottom()));
                if pinned {
                    Scalar::ZERO
                } else {
                    Scalar::ONE
                }
            })
            .collect()
    }

    /// `A^# y`, a solution for every `y`.
    pub fn combine(&self, coefficients: &[Scalar]) -> Result<Vec<Scalar>, MaxPlusError> {
        self.sharp.apply(coefficients)
    }
}

pub fn sharp_matrix(matrices: &[Matrix]) -> Result<PositiveSystem, PositiveError> {
    let first = matrices.first().ok_or(PositiveError::Empty)?;
    let mut combined = pseudo_inverse(first);
    for a in &matrices[1..] {
        combined = combined.plus(&pseudo_inverse(a))?;
    }
    let inverse_star = kleene_star(&combined)?;
    let n = inverse_star.rows();

    let mut sharp = Matrix::zeros(n, n);
    for j in 0..n {
        let column = cut_column(&inverse_star.column(j), matrices)?;
        for (i, v) in column.into_iter().enumerate() {
            sharp.set(i, j, v);
        }
    }
    let mut distinct: Vec<Vec<Scalar>> = (0..n)
        .map(|j| sharp.column(j))
        .filter(|c| c.iter().any(|v| v.is_finite()))
        .collect();
    distinct.sort();
    distinct.dedup();
    Ok(PositiveSystem {
        matrices: matrices.to_vec(),
        combined_inverse: combined,
        inverse_star,
        sharp,
        nontrivial_columns: distinct.len(),
    })
}

/// Keeps entry `i` of `column` when `column_i ≤ (A_k column)_i` for every
/// `k`, then keeps setting violating entries to `−∞` until none is left.
fn cut_column(column: &[Scalar], matrices: &[Matrix]) -> Result<Vec<Scalar>, MaxPlusError> {
    let violations = |c: &[Scalar]| -> Result<Vec<bool>, MaxPlusError> {
        let mut bad = vec![false; c.len()];
        for a in matrices {
            for (i, v) in a.apply(c)?.into_iter().enumerate() {
                bad[i] |= c[i] > v;
            }
        }
        Ok(bad)
    };
    let mut c = column.to_vec();
    loop {
        let bad = violations(&c)?;
        if !bad.iter().any(|&b| b) {
            return Ok(c);
        }
        for (v, b) in c.iter_mut().zip(bad) {
            if b {
                *v = Scalar::ZERO;
            }
        }
    }
}
