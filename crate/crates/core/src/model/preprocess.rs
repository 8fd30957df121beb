//! Removal of self-referential atoms and propagation of pinned variables.

use serde::{Deserialize, Serialize};

use super::atom::{Atom, MapSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    AllPositive,
    HasNegative,
}

/// Rewrites the system until no atom mentions its own left-hand side and no
/// atom mentions a pinned variable.
///
/// * `x ≤ a + max(x, y)` with `a ≥ 0` always holds and is dropped.
/// * with `a < 0` it forces `x < a + x` unless `x ≤ a + y`, so it becomes `x ≤ a + y`.
/// * `x ≤ a + x` with `a < 0` pins `x` to `−∞`.
/// * a pinned variable disappears from every max; an atom left with an empty
///   right-hand side pins its left-hand side, and atoms bounding a pinned
///   variable are dropped.
pub fn preprocess(sys: &MapSystem) -> MapSystem {
    let mut pinned = sys.forced_bottom.clone();
    let mut atoms: Vec<Atom> = sys.atoms.clone();
    loop {
        let mut next = Vec::with_capacity(atoms.len());
        let mut changed = false;
        for atom in atoms {
            if pinned.contains(&atom.lhs) {
                changed = true;
                continue;
            }
            let mut rhs = Some(atom.rhs);
            for v in atom.rhs.indices().filter(|v| pinned.contains(v)) {
                rhs = rhs.and_then(|r| r.without(v));
            }
            let Some(mut rhs) = rhs else {
                pinned.insert(atom.lhs);
                changed = true;
                continue;
            };
            if rhs.contains(atom.lhs) {
                if !atom.is_negative() {
                    changed = true;
                    continue;
                }
                match rhs.without(atom.lhs) {
                    Some(rest) => rhs = rest,
                    None => {
                        pinned.insert(atom.lhs);
                        changed = true;
                        continue;
                    }
                }
            }
            changed |= rhs != atom.rhs;
            next.push(Atom::new(atom.lhs, atom.offset, rhs));
        }
        atoms = next;
        if !changed {
            break;
        }
    }
    MapSystem {
        names: sys.names.clone(),
        atoms,
        forced_bottom: pinned,
    }
}

pub fn classify(sys: &MapSystem) -> Classification {
    if sys.stats().max_negative() == 0 {
        Classification::AllPositive
    } else {
        Classification::HasNegative
    }
}
