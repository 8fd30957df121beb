//! Kleene star, saturation and greatest solutions of `X ≤ CX ⊕ B`.

use std::collections::VecDeque;

use super::graph::{analyze_graph, CircuitSign};
use super::scalar::UpperScalar;
use super::{Matrix, MaxPlusError, UpperMatrix};

/// `(I ⊕ A)^(2^k)` with `2^k ≥ n − 1`. Equals `A*` when no circuit is
/// positive; callers are responsible for that check.
pub(crate) fn star_unchecked(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut acc = Matrix::identity(n).plus(a).expect("square");
    let mut reach = 1usize;
    while reach + 1 < n {
        acc = acc.times(&acc).expect("square");
        reach *= 2;
    }
    acc
}

/// `A* B` by iterating `X ← B ⊕ A X` from `X = B`. The iterate after `t`
/// rounds is `(I ⊕ A ⊕ … ⊕ A^t) B`, so it is stable after at most `n − 1`
/// rounds when no circuit is positive. Cheap when `A` is sparse.
pub(crate) fn star_times_unchecked(a: &Matrix, b: &Matrix) -> Matrix {
    let mut x = b.clone();
    for _ in 0..a.rows() {
        let next = a
            .times(&x)
            .expect("dimensions checked by caller")
            .plus(b)
            .expect("same shape");
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// `A* = I ⊕ A ⊕ … ⊕ A^(n−1)`, or [`MaxPlusError::NoStar`] when `G(A)`
/// has a circuit of positive weight.
pub fn kleene_star(a: &Matrix) -> Result<Matrix, MaxPlusError> {
    let analysis = analyze_graph(a)?;
    if !analysis.worst_circuit_weight_sign.admits_star() {
        return Err(MaxPlusError::NoStar);
    }
    Ok(star_unchecked(a))
}

/// Greatest solution `x = A* b` of `x ≤ Ax ⊕ b`. Requires `A^k → O`.
pub fn saturate(a: &Matrix, b: &Matrix) -> Result<Matrix, MaxPlusError> {
    let analysis = analyze_graph(a)?;
    let sign = analysis.worst_circuit_weight_sign;
    if !sign.is_contracting() {
        return Err(MaxPlusError::NotContracting { sign });
    }
    if b.rows() != a.rows() {
        return Err(MaxPlusError::dims("saturate", a.shape(), b.shape()));
    }
    Ok(star_times_unchecked(a, b))
}

/// Greatest `X` over `ℚ ∪ {±∞}` with `X ≤ CX ⊕ B`.
///
/// Vertices fed by a circuit of non-negative weight can be raised without
/// bound and get `+∞`; on the remaining vertices every upstream circuit is
/// strictly negative and the answer is `C'* B'` on the induced subsystem.
pub fn greatest_solution(c: &Matrix, b: &Matrix) -> Result<UpperMatrix, MaxPlusError> {
    let analysis = analyze_graph(c)?;
    if b.rows() != c.rows() {
        return Err(MaxPlusError::dims(
            "greatest_solution",
            c.shape(),
            b.shape(),
        ));
    }
    let n = c.rows();
    let mut unbounded = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if analysis.component_signs[analysis.scc_of[v]] >= CircuitSign::HasZero {
            unbounded[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(j) = queue.pop_front() {
        for i in 0..n {
            if !unbounded[i] && c.get(i, j).is_finite() {
                unbounded[i] = true;
                queue.push_back(i);
            }
        }
    }
    let bounded: Vec<usize> = (0..n).filter(|&v| !unbounded[v]).collect();
    let all_cols: Vec<usize> = (0..b.cols()).collect();
    let sub = star_times_unchecked(
        &c.select(&bounded, &bounded),
        &b.select(&bounded, &all_cols),
    );

    let mut out = Matrix::filled(n, b.cols(), UpperScalar::Top);
    for (local, &v) in bounded.iter().enumerate() {
        for j in 0..b.cols() {
            out.set(v, j, UpperScalar::from(sub.get(local, j)));
        }
    }
    Ok(out)
}

/// Whether `x = Ax ⊕ b` holds exactly.
pub fn is_fixed_point(a: &Matrix, b: &Matrix, x: &Matrix) -> Result<bool, MaxPlusError> {
    Ok(a.times(x)?.plus(b)? == *x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::Scalar;

    const B: Option<i64> = None;

    #[test]
    fn star_of_zero_matrix_is_identity() {
        assert_eq!(
            kleene_star(&Matrix::zeros(2, 2)).unwrap(),
            Matrix::identity(2)
        );
    }

    #[test]
    fn star_of_nilpotent_matrix() {
        let a = Matrix::from_ints(&[&[B, B], &[Some(-1), B]]);
        assert_eq!(
            kleene_star(&a).unwrap(),
            Matrix::from_ints(&[&[Some(0), B], &[Some(-1), Some(0)]])
        );
    }

    #[test]
    fn positive_circuit_has_no_star() {
        let c = Matrix::from_ints(&[&[B, B, Some(0)], &[B, Some(0), B], &[Some(25), Some(25), B]]);
        assert_eq!(kleene_star(&c), Err(MaxPlusError::NoStar));
    }

    #[test]
    fn saturation_of_worked_block() {
        let c1 = Matrix::from_ints(&[&[B, B], &[Some(-1), B]]);
        let b1 = Matrix::from_ints(&[&[Some(-10), B], &[B, Some(-1)]]);
        let u = Matrix::column_vector(&[Scalar::ONE, Scalar::ONE]);
        let x = saturate(&c1, &b1.times(&u).unwrap()).unwrap();
        assert_eq!(x, Matrix::from_ints(&[&[Some(-10)], &[Some(-1)]]));
        assert!(is_fixed_point(&c1, &b1.times(&u).unwrap(), &x).unwrap());
    }

    #[test]
    fn saturate_with_zero_matrix_returns_rhs() {
        let b = Matrix::from_ints(&[&[Some(3)], &[B]]);
        assert_eq!(saturate(&Matrix::zeros(2, 2), &b).unwrap(), b);
    }

    #[test]
    fn saturate_rejects_zero_circuits() {
        let a = Matrix::from_ints(&[&[Some(0)]]);
        let b = Matrix::from_ints(&[&[Some(1)]]);
        assert!(matches!(
            saturate(&a, &b),
            Err(MaxPlusError::NotContracting { .. })
        ));
    }

    #[test]
    fn greatest_solution_marks_unbounded_rows() {
        // x1 ≤ x1 (free loop), x2 ≤ -1 + x1, x3 ≤ -2 + b.
        let c = Matrix::from_ints(&[&[Some(0), B, B], &[Some(-1), B, B], &[B, B, B]]);
        let b = Matrix::from_ints(&[&[B], &[B], &[Some(-2)]]);
        let x = greatest_solution(&c, &b).unwrap();
        assert_eq!(x.get(0, 0), UpperScalar::Top);
        assert_eq!(x.get(1, 0), UpperScalar::Top);
        assert_eq!(x.get(2, 0), UpperScalar::from(Scalar::int(-2)));
    }

    #[test]
    fn greatest_solution_agrees_with_saturation_when_contracting() {
        let c = Matrix::from_ints(&[&[B, Some(-3)], &[Some(-1), B]]);
        let b = Matrix::from_ints(&[&[Some(2), B], &[B, Some(0)]]);
        let expect = saturate(&c, &b).unwrap();
        assert_eq!(
            greatest_solution(&c, &b).unwrap(),
            UpperMatrix::from(&expect)
        );
    }
}
