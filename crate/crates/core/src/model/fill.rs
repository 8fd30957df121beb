//! Procedure turning an atom system into the matrix system
//! `x ≤ A_1 x ∧ … ∧ A_L x`.

use super::atom::{Atom, MapSystem};
use crate::maxplus::{Matrix, Scalar};

/// `negative` holds `A_1 … A_l`, `positive` holds `A_{l+1} … A_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSystem {
    pub negative: Vec<Matrix>,
    pub positive: Vec<Matrix>,
}

impl MatrixSystem {
    pub fn n(&self) -> usize {
        self.negative
            .first()
            .or(self.positive.first())
            .map_or(0, Matrix::rows)
    }

    pub fn all(&self) -> impl Iterator<Item = &Matrix> {
        self.negative.iter().chain(&self.positive)
    }

    /// Whether `x ≤ A x` for every matrix.
    pub fn is_satisfied_by(&self, x: &[Scalar]) -> bool {
        self.all().all(|a| {
            let ax = a.apply(x).expect("vector length matches the system");
            x.iter().zip(&ax).all(|(xi, yi)| xi <= yi)
        })
    }

    /// Rows that are neither `e_i` nor all `−∞`.
    pub fn atom_row_count(&self) -> usize {
        self.all()
            .map(|a| {
                (0..a.rows())
                    .filter(|&i| !a.row_is_unit(i) && a.row(i).iter().any(|s| s.is_finite()))
                    .count()
            })
            .sum()
    }
}

/// Builds the matrix system of a preprocessed atom system.
///
/// Each variable gets a negative and a positive list of atoms, sorted by
/// offset then by right-hand side and deduplicated. Row `i` of the r-th
/// matrix of a part is the r-th atom of the corresponding list, or `e_i`
/// once the list is exhausted. Both parts contain at least one matrix.
///
/// A pinned variable gets an all-`−∞` row in `A_1`, which is satisfied
/// exactly when the variable is `−∞`.
pub fn fill_matrices(sys: &MapSystem) -> MatrixSystem {
    let n = sys.n();
    let mut negative_lists: Vec<Vec<&Atom>> = vec![Vec::new(); n];
    let mut positive_lists: Vec<Vec<&Atom>> = vec![Vec::new(); n];
    for atom in &sys.atoms {
        debug_assert!(
            !atom.is_self_referential(),
            "fill_matrices expects a preprocessed system"
        );
        if atom.is_negative() {
            negative_lists[atom.lhs].push(atom);
        } else {
            positive_lists[atom.lhs].push(atom);
        }
    }
    for list in negative_lists.iter_mut().chain(positive_lists.iter_mut()) {
        list.sort_by_key(|a| (a.offset, a.rhs.key()));
        list.dedup_by(|a, b| a.offset == b.offset && a.rhs == b.rhs);
    }

    let mut negative = build_part(n, &negative_lists);
    for &v in &sys.forced_bottom {
        for j in 0..n {
            negative[0].set(v, j, Scalar::ZERO);
        }
    }
    let positive = build_part(n, &positive_lists);
    MatrixSystem { negative, positive }
}

fn build_part(n: usize, lists: &[Vec<&Atom>]) -> Vec<Matrix> {
    let count = lists.iter().map(Vec::len).max().unwrap_or(0).max(1);
    (0..count)
        .map(|r| {
            let mut m = Matrix::identity(n);
            for (i, list) in lists.iter().enumerate() {
                if let Some(atom) = list.get(r) {
                    for (j, value) in atom.row(n).into_iter().enumerate() {
                        m.set(i, j, value);
                    }
                }
            }
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_atoms, preprocess};

    const B: Option<i64> = None;

    const S_PRIME: &str = "var x1, x2, x3, x4\n\
        x3 <= -10 + x1\n\
        x4 <= -1 + max(x2, x3)\n\
        x2 <= x4\n\
        x4 <= 25 + max(x2, x3)\n\
        x1 <= 9 + max(x2, x3)\n";

    fn a1() -> Matrix {
        Matrix::from_ints(&[
            &[Some(0), B, B, B],
            &[B, Some(0), B, B],
            &[Some(-10), B, B, B],
            &[B, Some(-1), Some(-1), B],
        ])
    }

    #[test]
    fn s_prime_matrices() {
        let ms = fill_matrices(&preprocess(&parse_atoms(S_PRIME).unwrap()));
        assert_eq!(ms.negative, vec![a1()]);
        let a2 = Matrix::from_ints(&[
            &[B, Some(9), Some(9), B],
            &[B, B, B, Some(0)],
            &[B, B, Some(0), B],
            &[B, Some(25), Some(25), B],
        ]);
        assert_eq!(ms.positive, vec![a2]);
        assert_eq!(ms.atom_row_count(), 5);
    }

    #[test]
    fn s_second_positive_matrix() {
        let text = S_PRIME.replace("x1 <= 9", "x1 <= 12");
        let ms = fill_matrices(&preprocess(&parse_atoms(&text).unwrap()));
        assert_eq!(ms.negative, vec![a1()]);
        assert_eq!(ms.positive[0].get(0, 1), Scalar::int(12));
        assert_eq!(ms.positive[0].get(0, 2), Scalar::int(12));
    }

    #[test]
    fn ragged_lists_are_padded_with_unit_rows() {
        let sys = preprocess(
            &parse_atoms("x <= -1 + y\nx <= -3 + y\nx <= -2 + max(y, x)\ny <= 4 + x").unwrap(),
        );
        let ms = fill_matrices(&sys);
        assert_eq!(ms.negative.len(), 3);
        let offsets: Vec<Scalar> = ms.negative.iter().map(|a| a.get(0, 1)).collect();
        assert_eq!(
            offsets,
            vec![Scalar::int(-3), Scalar::int(-2), Scalar::int(-1)]
        );
        assert!(ms.negative.iter().all(|a| a.row_is_unit(1)));
        assert_eq!(ms.positive.len(), 1);
        assert_eq!(ms.positive[0].row(1), &[Scalar::int(4), Scalar::ZERO]);
    }

    #[test]
    fn one_atom_per_variable() {
        let ms = fill_matrices(&parse_atoms("x <= -1 + y\ny <= 2 + x").unwrap());
        assert_eq!(ms.negative.len(), 1);
        assert_eq!(ms.positive.len(), 1);
        assert_eq!(ms.all().count(), 2);
    }

    #[test]
    fn only_positive_atoms_leave_identity_first() {
        let ms = fill_matrices(&parse_atoms("x <= 1 + y").unwrap());
        assert_eq!(ms.negative, vec![Matrix::identity(2)]);
    }

    #[test]
    fn pinned_variables_get_empty_rows() {
        let sys = preprocess(&parse_atoms("x <= -1 + x\ny <= 3 + z").unwrap());
        let ms = fill_matrices(&sys);
        assert!(ms.negative[0].row(0).iter().all(|s| s.is_bottom()));
        assert!(ms.is_satisfied_by(&[Scalar::ZERO, Scalar::int(1), Scalar::int(0)]));
        assert!(!ms.is_satisfied_by(&[Scalar::int(0), Scalar::int(1), Scalar::int(0)]));
    }
}
