#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use tropical_map::maxplus::{Matrix, Rational, Scalar};
use tropical_map::model::{Atom, MapSystem, Targets};

pub fn int(v: i64) -> Scalar {
    Scalar::int(v)
}

pub fn abs(r: Rational) -> Rational {
    if r < Rational::from_integer(0) {
        -r
    } else {
        r
    }
}

pub fn ints(values: &[Option<i64>]) -> Vec<Scalar> {
    values
        .iter()
        .map(|v| v.map_or(Scalar::ZERO, Scalar::int))
        .collect()
}

/// `−∞` with probability 1/4, otherwise a multiple of 1/2 in `[-range, range]`.
pub fn scalar(range: i64) -> impl Strategy<Value = Scalar> {
    prop_oneof![
        1 => Just(Scalar::ZERO),
        3 => (-2 * range..=2 * range).prop_map(|v| Scalar::Finite(Rational::new(v, 2))),
    ]
}

pub fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(scalar(range), rows * cols)
        .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
}

pub fn square(max_n: usize, range: i64) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(move |n| matrix(n, n, range))
}

/// Entries in `[-range, range]` with probability `density`, `−∞` otherwise.
pub fn random_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    range: i64,
    density: f64,
) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(density) {
                Scalar::int(rng.gen_range(-range..=range))
            } else {
                Scalar::ZERO
            }
        })
        .collect();
    Matrix::new(rows, cols, data).unwrap()
}

/// Random atom system; atoms may mention their own left-hand side.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, atoms: usize, range: i64) -> MapSystem {
    let list = (0..atoms)
        .map(|_| {
            let lhs = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let k = if rng.gen_bool(0.5) {
                j
            } else {
                rng.gen_range(0..n)
            };
            Atom::new(
                lhs,
                Rational::from_integer(rng.gen_range(-range..=range)),
                Targets::new(j, k),
            )
        })
        .collect();
    MapSystem::with_indexed_names(n, list)
}

pub fn system_strategy(
    max_n: usize,
    max_atoms: usize,
    range: i64,
) -> impl Strategy<Value = MapSystem> {
    (1..=max_n).prop_flat_map(move |n| {
        let atom =
            (0..n, -range..=range, 0..n, proptest::option::of(0..n)).prop_map(|(lhs, a, j, k)| {
                Atom::new(
                    lhs,
                    Rational::from_integer(a),
                    Targets::new(j, k.unwrap_or(j)),
                )
            });
        proptest::collection::vec(atom, 0..=max_atoms)
            .prop_map(move |atoms| MapSystem::with_indexed_names(n, atoms))
    })
}

/// Every vector over `{−∞} ∪ [-m, m]`.
pub fn grid_vectors(n: usize, m: i64) -> Vec<Vec<Scalar>> {
    let values: Vec<Scalar> = std::iter::once(Scalar::ZERO)
        .chain((-m..=m).map(Scalar::int))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut x = prefix.clone();
                    x.push(v);
                    x
                })
            })
            .collect();
    }
    out
}

pub fn leq(x: &[Scalar], y: &[Scalar]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Weights of all elementary circuits of `G(A)` by exhaustive search.
pub fn circuit_weights(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    let mut weights = Vec::new();
    // Circuits are enumerated from their smallest vertex to avoid repeats.
    fn walk(
        a: &Matrix,
        start: usize,
        at: usize,
        seen: &mut Vec<bool>,
        weight: Rational,
        out: &mut Vec<Rational>,
    ) {
        for next in start..a.rows() {
            // Edge at -> next exists when a[next][at] is finite.
            let Some(w) = a.get(next, at).value() else {
                continue;
            };
            if next == start {
                out.push(weight + w);
            } else if !seen[next] {
                seen[next] = true;
                walk(a, start, next, seen, weight + w, out);
                seen[next] = false;
            }
        }
    }
    for start in 0..n {
        let mut seen = vec![false; n];
        seen[start] = true;
        walk(
            a,
            start,
            start,
            &mut seen,
            Rational::from_integer(0),
            &mut weights,
        );
    }
    weights
}
