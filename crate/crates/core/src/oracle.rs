//! Brute-force ground truth evaluated on the atoms themselves, with no use of
//! the matrix machinery.

use rayon::prelude::*;
use thiserror::Error;

use crate::maxplus::{Rational, Scalar};
use crate::model::{Atom, MapSystem};
use crate::nonpositive::{SolutionDescription, SolutionStatus};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid has {points} points, budget is {budget}")]
    BudgetExceeded { points: u128, budget: u128 },
    #[error("vector has {found} entries, system has {expected} variables")]
    Arity { expected: usize, found: usize },
}

/// `None` is `−∞`.
type Value = Option<Rational>;

fn value(s: Scalar) -> Value {
    s.value()
}

fn rhs_value(atom: &Atom, x: &[Value]) -> Value {
    let best = atom.rhs.indices().filter_map(|j| x[j]).max()?;
    Some(best + atom.offset)
}

fn atom_holds(atom: &Atom, x: &[Value]) -> bool {
    match (x[atom.lhs], rhs_value(atom, x)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(r)) => l <= r,
    }
}

/// A failed atom with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index into `sys.atoms`, or `None` for a pinned variable that is not `−∞`.
    pub atom: Option<usize>,
    /// Left-hand-side variable.
    pub variable: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Atoms of `sys` violated by `x`, then pinned variables that are not `−∞`.
pub fn violations(x: &[Scalar], sys: &MapSystem) -> Result<Vec<Violation>, OracleError> {
    if x.len() != sys.n() {
        return Err(OracleError::Arity {
            expected: sys.n(),
            found: x.len(),
        });
    }
    let values: Vec<Value> = x.iter().copied().map(value).collect();
    let mut out: Vec<Violation> = sys
        .atoms
        .iter()
        .enumerate()
        .filter(|(_, atom)| !atom_holds(atom, &values))
        .map(|(i, atom)| Violation {
            atom: Some(i),
            variable: atom.lhs,
            lhs: x[atom.lhs],
            rhs: rhs_value(atom, &values).map_or(Scalar::ZERO, Scalar::Finite),
        })
        .collect();
    for &p in &sys.forced_bottom {
        if values[p].is_some() {
            out.push(Violation {
                atom: None,
                variable: p,
                lhs: x[p],
                rhs: Scalar::ZERO,
            });
        }
    }
    Ok(out)
}

/// Whether `x` satisfies every atom and every pinned variable is `−∞`.
pub fn check(x: &[Scalar], sys: &MapSystem) -> bool {
    violations(x, sys).is_ok_and(|v| v.is_empty())
}

/// Candidate values for every coordinate, ascending, `−∞` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub values: Vec<Scalar>,
    pub n: usize,
}

impl Grid {
    /// `{−∞} ∪ {−m, …, m}`.
    pub fn new(m: i64, n: usize) -> Grid {
        let mut values = vec![Scalar::ZERO];
        values.extend((-m..=m).map(Scalar::int));
        Grid { values, n }
    }

    /// Bound `m = ⌈max |offset|⌉ + n`.
    pub fn default_for(sys: &MapSystem) -> Grid {
        let m = sys.max_abs_offset().ceil().to_integer() + sys.n() as i64;
        Grid::new(m, sys.n())
    }

    pub fn points(&self) -> u128 {
        (self.values.len() as u128).saturating_pow(self.n as u32)
    }

    fn check_budget(&self, budget: u128) -> Result<(), OracleError> {
        let points = self.points();
        if points > budget {
            return Err(OracleError::BudgetExceeded { points, budget });
        }
        Ok(())
    }
}

/// All grid vectors satisfying `sys`, in lexicographic order.
///
/// Coordinates are assigned left to right; an atom is checked as soon as the
/// last variable it mentions is assigned, which prunes the search without
/// changing the result.
pub fn grid_enumerate(
    sys: &MapSystem,
    grid: &Grid,
    budget: u128,
) -> Result<Vec<Vec<Scalar>>, OracleError> {
    grid.check_budget(budget)?;
    let n = sys.n();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut ready: Vec<Vec<&Atom>> = vec![Vec::new(); n];
    for atom in &sys.atoms {
        let last = atom
            .rhs
            .indices()
            .chain([atom.lhs])
            .max()
            .expect("non-empty");
        ready[last].push(atom);
    }
    let values: Vec<Value> = grid.values.iter().copied().map(value).collect();
    let ctx = Search {
        sys,
        ready: &ready,
        values: &values,
    };

    let chunks: Vec<Vec<Vec<Scalar>>> = values
        .par_iter()
        .map(|&first| {
            let mut found = Vec::new();
            let mut x = vec![None; n];
            x[0] = first;
            if ctx.consistent(&x, 0) {
                ctx.descend(&mut x, 1, &mut found);
            }
            found
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

struct Search<'a> {
    sys: &'a MapSystem,
    ready: &'a [Vec<&'a Atom>],
    values: &'a [Value],
}

impl Search<'_> {
    fn consistent(&self, x: &[Value], i: usize) -> bool {
        (!self.sys.forced_bottom.contains(&i) || x[i].is_none())
            && self.ready[i].iter().all(|a| atom_holds(a, x))
    }

    fn descend(&self, x: &mut Vec<Value>, i: usize, found: &mut Vec<Vec<Scalar>>) {
        if i == x.len() {
            found.push(
                x.iter()
                    .map(|v| v.map_or(Scalar::ZERO, Scalar::Finite))
                    .collect(),
            );
            return;
        }
        for &v in self.values {
            x[i] = v;
            if self.consistent(x, i) {
                self.descend(x, i + 1, found);
            }
        }
        x[i] = None;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub grid_solutions: usize,
    /// Solutions below the greatest solution at their kept free components.
    pub dominated: usize,
    /// Solutions produced by some admissible parameters.
    pub represented: usize,
    /// Solutions that are not dominated.
    pub undominated: Vec<Vec<Scalar>>,
    /// Solutions that are not represented.
    pub unrepresented: Vec<Vec<Scalar>>,
}

impl CompletenessReport {
    pub fn dominated_percent(&self) -> f64 {
        percent(self.dominated, self.grid_solutions)
    }

    pub fn represented_percent(&self) -> f64 {
        percent(self.represented, self.grid_solutions)
    }
}

fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        100.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

/// Compares the grid solutions of `sys` with the family described by `desc`.
pub fn completeness_report(
    desc: &SolutionDescription,
    sys: &MapSystem,
    grid: &Grid,
    budget: u128,
) -> Result<CompletenessReport, OracleError> {
    let solutions = grid_enumerate(sys, grid, budget)?;
    let mut report = CompletenessReport {
        grid_solutions: solutions.len(),
        dominated: 0,
        represented: 0,
        undominated: Vec::new(),
        unrepresented: Vec::new(),
    };
    for x in solutions {
        let dominated = match desc.status {
            SolutionStatus::OnlyBottom => x.iter().all(|v| v.is_bottom()),
            _ => {
                let sup = desc
                    .sup_solution(&desc.free_components(&x))
                    .expect("status checked");
                x.iter().zip(&sup).all(|(a, b)| a <= b)
            }
        };
        if dominated {
            report.dominated += 1;
        } else {
            report.undominated.push(x.clone());
        }
        if desc.represents(&x) {
            report.represented += 1;
        } else {
            report.unrepresented.push(x);
        }
    }
    Ok(report)
}
