//! Residuation: the greatest `X` with `A ⊗ X ≤ B`.

use super::scalar::UpperScalar;
use super::{Matrix, MaxPlusError, UpperMatrix};

/// `(A \ B)_{ij} = min_k (a_ki⁻¹ ⊗' b_kj)` over the min-plus semiring, with
/// `(−∞)⁻¹ = +∞` and `+∞ ⊗' −∞ = +∞`.
pub fn residual(a: &Matrix, b: &Matrix) -> Result<UpperMatrix, MaxPlusError> {
    if a.rows() != b.rows() {
        return Err(MaxPlusError::dims("residual", a.shape(), b.shape()));
    }
    let (n, q) = (a.cols(), b.cols());
    let mut out = Matrix::filled(n, q, UpperScalar::Top);
    for k in 0..a.rows() {
        for i in 0..n {
            let inv = a.get(k, i).inverse();
            if inv.is_top() {
                continue;
            }
            for j in 0..q {
                let term = inv.times_dual(UpperScalar::from(b.get(k, j)));
                if term < out.get(i, j) {
                    out.set(i, j, term);
                }
            }
        }
    }
    Ok(out)
}
