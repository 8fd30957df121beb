use std::collections::BTreeSet;
use std::fmt;

use crate::maxplus::{format_rational, Rational, Scalar};

/// Right-hand side of an atom: one variable, or the max of two distinct ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Targets {
    Single(usize),
    Pair(usize, usize),
}

impl Targets {
    /// Normalizes `max(j, k)`: the pair is stored sorted, and `max(j, j)`
    /// collapses to `j`.
    pub fn new(j: usize, k: usize) -> Targets {
        match j.cmp(&k) {
            std::cmp::Ordering::Equal => Targets::Single(j),
            std::cmp::Ordering::Less => Targets::Pair(j, k),
            std::cmp::Ordering::Greater => Targets::Pair(k, j),
        }
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let (a, b) = self.key();
        std::iter::once(a).chain((a != b).then_some(b))
    }

    /// Sort key `(j, k)`; a single target `j` reads as `(j, j)`.
    pub fn key(self) -> (usize, usize) {
        match self {
            Targets::Single(j) => (j, j),
            Targets::Pair(j, k) => (j, k),
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.indices().any(|t| t == v)
    }

    /// Drops `v` from the targets; `None` when nothing is left.
    pub fn without(self, v: usize) -> Option<Targets> {
        let rest: Vec<usize> = self.indices().filter(|&t| t != v).collect();
        match rest.as_slice() {
            [] => None,
            [j] => Some(Targets::Single(*j)),
            [j, k] => Some(Targets::new(*j, *k)),
            _ => unreachable!(),
        }
    }
}

/// One inequality `x_lhs ≤ offset + max(rhs)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub lhs: usize,
    pub offset: Rational,
    pub rhs: Targets,
}

impl Atom {
    pub fn new(lhs: usize, offset: Rational, rhs: Targets) -> Atom {
        Atom { lhs, offset, rhs }
    }

    /// Strictly negative atoms (`a < 0`) make up the negative part.
    pub fn is_negative(&self) -> bool {
        self.offset < Rational::from_integer(0)
    }

    /// Row vector `a·e_j ⊕ a·e_k`.
    pub fn row(&self, n: usize) -> Vec<Scalar> {
        let mut row = vec![Scalar::ZERO; n];
        for j in self.rhs.indices() {
            row[j] = Scalar::Finite(self.offset);
        }
        row
    }

    pub fn is_self_referential(&self) -> bool {
        self.rhs.contains(self.lhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomStats {
    /// `m_i^-` per variable.
    pub negative: Vec<usize>,
    /// `m_i^+` per variable.
    pub positive: Vec<usize>,
}

impl AtomStats {
    /// `m̄ = max_i m_i^-`.
    pub fn max_negative(&self) -> usize {
        self.negative.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.negative.iter().sum::<usize>() + self.positive.iter().sum::<usize>()
    }
}

/// A conjunction of atoms over named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapSystem {
    pub names: Vec<String>,
    pub atoms: Vec<Atom>,
    /// Variables that can only take the value `−∞`.
    pub forced_bottom: BTreeSet<usize>,
}

impl MapSystem {
    pub fn new(names: Vec<String>, atoms: Vec<Atom>) -> MapSystem {
        MapSystem {
            names,
            atoms,
            forced_bottom: BTreeSet::new(),
        }
    }

    /// Variables named `x1..xn`.
    pub fn with_indexed_names(n: usize, atoms: Vec<Atom>) -> MapSystem {
        MapSystem::new((1..=n).map(|i| format!("x{i}")).collect(), atoms)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn stats(&self) -> AtomStats {
        let mut stats = AtomStats {
            negative: vec![0; self.n()],
            positive: vec![0; self.n()],
        };
        for atom in &self.atoms {
            if atom.is_negative() {
                stats.negative[atom.lhs] += 1;
            } else {
                stats.positive[atom.lhs] += 1;
            }
        }
        stats
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn display_atom<'a>(&'a self, atom: &'a Atom) -> AtomDisplay<'a> {
        AtomDisplay {
            atom,
            names: &self.names,
        }
    }

    /// Largest absolute offset, zero for an empty system.
    pub fn max_abs_offset(&self) -> Rational {
        self.atoms
            .iter()
            .map(|a| if a.is_negative() { -a.offset } else { a.offset })
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }
}

pub struct AtomDisplay<'a> {
    atom: &'a Atom,
    names: &'a [String],
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.atom;
        write!(f, "{} <= ", self.names[a.lhs])?;
        if a.offset != Rational::from_integer(0) {
            write!(f, "{} + ", format_rational(&a.offset))?;
        }
        match a.rhs {
            Targets::Single(j) => write!(f, "{}", self.names[j]),
            Targets::Pair(j, k) => write!(f, "max({}, {})", self.names[j], self.names[k]),
        }
    }
}

impl fmt::Display for MapSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "var {}", self.names.join(", "))?;
        for atom in &self.atoms {
            writeln!(f, "{}", self.display_atom(atom))?;
        }
        for &v in &self.forced_bottom {
            writeln!(f, "{0} <= -1 + {0}", self.names[v])?;
        }
        Ok(())
    }
}
