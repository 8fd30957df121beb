mod common;

use common::{grid_vectors, ints, leq, random_matrix, random_system, system_strategy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_map::maxplus::{analyze_graph, residual, Matrix, Rational, Scalar};
use tropical_map::model::{fill_matrices, parse_atoms, preprocess, Classification, MatrixSystem};
use tropical_map::nonpositive::{stage1, stage2, SolutionStatus, Stage1Outcome, Stage1Result};
use tropical_map::oracle::{check, completeness_report, grid_enumerate, Grid, DEFAULT_BUDGET};
use tropical_map::positive::{is_monomial, monomial_cone, pseudo_inverse};
use tropical_map::solve::{solve, Solution};

fn reduced(ms: &MatrixSystem) -> Option<Stage1Result> {
    match stage1(ms).unwrap() {
        Stage1Outcome::Reduced(s) => Some(s),
        _ => None,
    }
}

fn folded(ms: &MatrixSystem, s1: &Stage1Result) -> Vec<Matrix> {
    ms.all()
        .enumerate()
        .filter(|(i, _)| s1.folded.contains(i))
        .map(|(_, a)| a.clone())
        .collect()
}

fn satisfies(x: &[Scalar], matrices: &[Matrix]) -> bool {
    matrices.iter().all(|a| leq(x, &a.apply(x).unwrap()))
}

#[test]
fn samples_always_solve_the_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut systems = 0;
    let mut samples = 0;
    while systems < 200 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=2 * n + 2);
        let sys = random_system(&mut rng, n, m, 5);
        let solved = solve(&sys).unwrap();
        let xs = solved.sample(20, &mut rng).unwrap();
        for x in &xs {
            assert!(check(x, &sys), "{x:?} fails\n{sys}");
        }
        samples += xs.len();
        systems += 1;
    }
    assert!(samples > 1000);
}

#[test]
fn supremum_solves_the_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let n = rng.gen_range(1..=5);
        let sys = {
            let m = rng.gen_range(1..=3 * n);
            random_system(&mut rng, n, m, 5)
        };
        let solved = solve(&sys).unwrap();
        if let Solution::NonPositive(desc) = &solved.solution {
            if desc.status == SolutionStatus::OnlyBottom {
                continue;
            }
            let u: Vec<Scalar> = (0..desc.k_prime)
                .map(|_| Scalar::int(rng.gen_range(-6..=6)))
                .collect();
            let x = desc.sup_solution(&u).unwrap();
            assert!(check(&x, &sys), "{x:?}\n{sys}");
            assert!(desc.represents(&x));
        }
    }
}

#[test]
fn stage1_columns_are_jointly_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let sys = preprocess(&{
            let m = rng.gen_range(1..=3 * n);
            random_system(&mut rng, n, m, 5)
        });
        let ms = fill_matrices(&sys);
        let Some(s1) = reduced(&ms) else { continue };
        let t = s1.t_original();
        for a in folded(&ms, &s1) {
            assert!(t.leq(&a.times(&t).unwrap()).unwrap());
        }
        // Combinations T^∧ D u stay feasible.
        let u: Vec<Scalar> = (0..s1.k)
            .map(|_| Scalar::int(rng.gen_range(-4..=4)))
            .collect();
        let x = t.apply(&u).unwrap();
        assert!(satisfies(&x, &folded(&ms, &s1)));
    }
}

/// With a single folded matrix, every solution with free part `u` lies
/// below `T^∧ u` (grid oracle, n ≤ 3).
#[test]
fn stage1_is_maximal_with_one_folded_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(2..=3);
        let sys = preprocess(&{
            let m = rng.gen_range(1..=4);
            random_system(&mut rng, n, m, 3)
        });
        let ms = fill_matrices(&sys);
        let Some(s1) = reduced(&ms) else { continue };
        if s1.l_prime != 1 {
            continue;
        }
        let mats = folded(&ms, &s1);
        let t = s1.t_original();
        for x in grid_vectors(n, 6) {
            if satisfies(&x, &mats) {
                let u: Vec<Scalar> = s1.free().iter().map(|&v| x[v]).collect();
                assert!(leq(&x, &t.apply(&u).unwrap()), "{x:?} above T u\n{sys}");
            }
        }
        checked += 1;
    }
}

/// Two negative bounds on the same variable make the greatest solution
/// depend on `min(u1, u2)`, which no single matrix `T^∧` can express.
#[test]
fn stage1_maximality_fails_with_two_folded_matrices() {
    let sys = preprocess(&parse_atoms("var x1, x2, x3\nx3 <= -1 + x1\nx3 <= -1 + x2").unwrap());
    let ms = fill_matrices(&sys);
    let s1 = reduced(&ms).unwrap();
    assert!(s1.l_prime >= 2);
    let x = ints(&[Some(0), Some(0), Some(-1)]);
    assert!(check(&x, &sys));
    let bound = s1.t_original().apply(&x[..2]).unwrap();
    assert!(!leq(&x, &bound));
}

#[test]
fn feasible_matrices_lie_below_t_wedge_d() {
    // One folded matrix: T ≤ A T with top block D implies T ≤ T^∧ D, and
    // T^∧ D itself is feasible. Equality is not forced.
    let sys =
        preprocess(&parse_atoms("var x1, x2, x3\nx3 <= -10 + x1\nx2 <= -1 + max(x1, x3)").unwrap());
    let ms = fill_matrices(&sys);
    let s1 = reduced(&ms).unwrap();
    let a = &folded(&ms, &s1)[0];
    let t_wedge = s1.t_original();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let d = Scalar::int(rng.gen_range(-5..=0));
        let td = t_wedge.times(&Matrix::column_vector(&[d])).unwrap();
        assert!(td.leq(&a.times(&td).unwrap()).unwrap());
        let candidate = Matrix::column_vector(&[
            d,
            Scalar::int(rng.gen_range(-20..=2)),
            Scalar::int(rng.gen_range(-20..=2)),
        ]);
        let feasible = candidate.leq(&a.times(&candidate).unwrap()).unwrap();
        assert_eq!(feasible, candidate.leq(&td).unwrap());
    }
    let smaller = Matrix::column_vector(&[Scalar::ONE, Scalar::int(-30), Scalar::int(-20)]);
    assert!(smaller.leq(&a.times(&smaller).unwrap()).unwrap());
    assert_ne!(smaller, t_wedge);
}

#[test]
fn kept_columns_pass_every_unsolved_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let sys = preprocess(&{
            let m = rng.gen_range(1..=3 * n);
            random_system(&mut rng, n, m, 5)
        });
        let ms = fill_matrices(&sys);
        let Some(s1) = reduced(&ms) else { continue };
        let desc = stage2(&s1, &ms, &[]).unwrap();
        let t = s1.t_original();
        let unsolved: Vec<&Matrix> = ms
            .all()
            .enumerate()
            .filter(|(i, _)| !s1.folded.contains(i))
            .map(|(_, a)| a)
            .collect();
        for &v in desc.kept() {
            let c = s1.free().iter().position(|&f| f == v).unwrap();
            let col = t.column(c);
            for a in &unsolved {
                assert!(leq(&col, &a.apply(&col).unwrap()));
            }
        }
        assert_eq!(
            desc.status == SolutionStatus::Complete,
            desc.k_prime == desc.k && desc.k > 0
        );
    }
}

#[test]
fn completeness_at_desk_scale_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut full = 0;
    let mut total = 0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let sys = {
            let m = rng.gen_range(1..=2 * n);
            random_system(&mut rng, n, m, 3)
        };
        let solved = solve(&sys).unwrap();
        let Solution::NonPositive(desc) = &solved.solution else {
            continue;
        };
        let report = completeness_report(desc, &sys, &Grid::new(6, n), DEFAULT_BUDGET).unwrap();
        assert_eq!(
            report.represented + report.unrepresented.len(),
            report.grid_solutions
        );
        total += 1;
        if report.represented == report.grid_solutions {
            full += 1;
        }
    }
    println!("{full}/{total} systems fully represented on the grid");
    assert!(total > 0);
}

/// Every grid solution lies below the supremum, but solutions strictly
/// below it (like `x1 < x2 - 4` for `x1 <= -4 + x2`) are not of the form
/// `T^∧ [D; F] u`.
#[test]
fn two_variable_negative_systems_are_dominated() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let m = rng.gen_range(1..=3);
        let mut sys = random_system(&mut rng, 2, m, 3);
        for atom in &mut sys.atoms {
            atom.offset = -common::abs(atom.offset) - Rational::from_integer(1);
        }
        let solved = solve(&sys).unwrap();
        let Solution::NonPositive(desc) = &solved.solution else {
            continue;
        };
        let report = completeness_report(desc, &sys, &Grid::new(6, 2), DEFAULT_BUDGET).unwrap();
        assert_eq!(report.dominated, report.grid_solutions, "{sys}");
        assert!(report.represented >= 1, "{sys}");
    }
}

#[test]
fn sharp_columns_and_combinations_solve_positive_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut seen = 0;
    while seen < 100 {
        let n = rng.gen_range(1..=5);
        let mut sys = {
            let m = rng.gen_range(1..=3 * n);
            random_system(&mut rng, n, m, 5)
        };
        for atom in &mut sys.atoms {
            atom.offset = common::abs(atom.offset);
        }
        let solved = solve(&sys).unwrap();
        assert_eq!(solved.classification, Classification::AllPositive);
        let Solution::Positive(ps) = &solved.solution else {
            panic!("positive system")
        };
        for j in 0..n {
            let c = ps.sharp.column(j);
            for a in &ps.matrices {
                assert!(leq(&c, &a.apply(&c).unwrap()));
            }
        }
        for _ in 0..10 {
            let y: Vec<Scalar> = (0..n).map(|_| Scalar::int(rng.gen_range(-8..=0))).collect();
            assert!(check(&ps.combine(&y).unwrap(), &sys));
        }
        let ones = ps.trivial_solution();
        assert!(check(&ones, &sys));
        for a in solved.matrices.positive.iter() {
            assert!(leq(&ones, &a.apply(&ones).unwrap()));
        }
        assert!(ps.nontrivial_columns <= n);
        seen += 1;
    }
}

fn random_monomial<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, Scalar::int(rng.gen_range(0..=4)));
    }
    m
}

#[test]
fn monomial_inverse_and_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = random_monomial(&mut rng, n);
        let inv = pseudo_inverse(&m);
        assert_eq!(m.times(&inv).unwrap(), Matrix::identity(n));
        assert_eq!(inv.times(&m).unwrap(), Matrix::identity(n));
        let cone = monomial_cone(&m).unwrap();
        for x in grid_vectors(n, 4) {
            let holds = leq(&x, &m.apply(&x).unwrap());
            assert_eq!(holds, leq(&inv.apply(&x).unwrap(), &x));
            // x is in the cone iff it equals cone ⊗ (cone \ x).
            let y = residual(&cone, &Matrix::column_vector(&x)).unwrap();
            let y = y.clamp(Rational::from_integer(1000));
            let in_cone = cone.times(&y).unwrap().column(0) == x;
            assert_eq!(holds, in_cone, "{m:?} {x:?}");
        }
    }
}

/// Each vertex has exactly one incoming and one outgoing edge.
fn one_in_one_out(a: &Matrix) -> bool {
    (0..a.rows()).all(|i| a.row(i).iter().filter(|v| v.is_finite()).count() == 1)
        && (0..a.cols()).all(|j| a.column(j).iter().filter(|v| v.is_finite()).count() == 1)
}

#[test]
fn monomial_means_disjoint_circuits_covering_every_vertex() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let a = if rng.gen_bool(0.5) {
            random_monomial(&mut rng, n)
        } else {
            random_matrix(&mut rng, n, n, 3, 0.3)
        };
        let covered = one_in_one_out(&a) && {
            let g = analyze_graph(&a).unwrap();
            (0..n).all(|v| g.members(g.scc_of[v]).len() > 1 || a.get(v, v).is_finite())
        };
        assert_eq!(is_monomial(&a), covered);
    }
}

#[test]
fn single_circuit_characterisation_has_counterexamples() {
    // Two disjoint 2-cycles: monomial, but two elementary circuits.
    let b = None;
    let two_cycles = Matrix::from_ints(&[
        &[b, Some(1), b, b],
        &[Some(1), b, b, b],
        &[b, b, b, Some(2)],
        &[b, b, Some(2), b],
    ]);
    assert!(is_monomial(&two_cycles));
    assert_eq!(common::circuit_weights(&two_cycles).len(), 2);
    // One circuit plus a free vertex reading two variables: not monomial.
    let with_free = Matrix::from_ints(&[&[Some(1), Some(2)], &[b, Some(0)]]);
    assert!(!is_monomial(&with_free));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_is_deterministic(sys in system_strategy(4, 8, 5)) {
        let a = solve(&sys).unwrap();
        let b = solve(&sys).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bottom_is_always_a_solution(sys in system_strategy(5, 10, 5)) {
        prop_assert!(check(&vec![Scalar::ZERO; sys.n()], &sys));
        let found = grid_enumerate(&sys, &Grid::new(1, sys.n()), DEFAULT_BUDGET).unwrap();
        prop_assert!(found.contains(&vec![Scalar::ZERO; sys.n()]));
    }
}
