//! Machine-readable and line-oriented renderings of a solved system.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use tropical_map::maxplus::{Matrix, Scalar};
use tropical_map::model::{Classification, MapSystem};
use tropical_map::nonpositive::SolutionStatus;
use tropical_map::oracle::{CompletenessReport, Violation};
use tropical_map::solve::{Solution, Solved};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportStatus {
    OnlyBottom,
    Complete,
    Reduced,
    PositiveSharp,
}

/// Matrix entries are strings: `-inf`, `+inf`, integers, exact decimals or `p/q`.
pub type Rows = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputReport {
    pub version: u32,
    pub variables: Vec<String>,
    pub classification: Classification,
    pub status: ReportStatus,
    /// Variables in row order of the matrices: kept free, dropped free,
    /// then dependent for the non-positive route; input order otherwise.
    pub permutation: Vec<String>,
    /// Number of free variables and how many of them survive stage 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept: Option<usize>,
    pub matrices: BTreeMap<String, Rows>,
    pub pinned: Vec<String>,
    pub samples: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn entries<T: Copy + fmt::Display>(m: &Matrix<T>) -> Rows {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

pub fn vector(x: &[Scalar]) -> Vec<String> {
    x.iter().map(ToString::to_string).collect()
}

fn names(sys: &MapSystem, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| sys.names[v].clone()).collect()
}

impl OutputReport {
    /// Report without samples; the caller adds verified vectors.
    pub fn new(solved: &Solved) -> OutputReport {
        let sys = &solved.system;
        let mut matrices = BTreeMap::new();
        let mut insert = |name: &str, rows: Rows| {
            if rows.first().is_some_and(|r| !r.is_empty()) {
                matrices.insert(name.to_string(), rows);
            }
        };
        let mut notes = Vec::new();
        let (status, permutation, free, kept, pinned) = match &solved.solution {
            Solution::NonPositive(desc) => {
                insert("t_wedge", entries(&desc.t_wedge));
                insert("j", entries(&desc.j_block));
                insert("k", entries(&desc.k_block));
                insert("f_wedge", entries(&desc.f_wedge));
                insert("f_bound", entries(&desc.f_bound));
                if desc.corrected_entries > 0 {
                    notes.push(format!(
                        "{} entries of the stage-1 meet were lowered to make its columns jointly feasible",
                        desc.corrected_entries
                    ));
                }
                let status = match desc.status {
                    SolutionStatus::OnlyBottom => ReportStatus::OnlyBottom,
                    SolutionStatus::Complete => ReportStatus::Complete,
                    SolutionStatus::Reduced => ReportStatus::Reduced,
                };
                let (free, kept) = match desc.status {
                    SolutionStatus::OnlyBottom => (None, None),
                    _ => (Some(desc.k), Some(desc.k_prime)),
                };
                (
                    status,
                    names(sys, &desc.perm),
                    free,
                    kept,
                    names(sys, &desc.pinned),
                )
            }
            Solution::Positive(ps) => {
                insert("sharp", entries(&ps.sharp));
                insert("inverse_star", entries(&ps.inverse_star));
                let all: Vec<usize> = (0..sys.n()).collect();
                let pinned: Vec<usize> = sys.forced_bottom.iter().copied().collect();
                (
                    ReportStatus::PositiveSharp,
                    names(sys, &all),
                    None,
                    None,
                    names(sys, &pinned),
                )
            }
        };
        OutputReport {
            version: REPORT_VERSION,
            variables: sys.names.clone(),
            classification: solved.classification,
            status,
            permutation,
            free,
            kept,
            matrices,
            pinned,
            samples: Vec::new(),
            notes,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "classification {:?}", self.classification);
        let _ = writeln!(out, "status {:?}", self.status);
        labelled(&mut out, "variables", &self.variables);
        labelled(&mut out, "permutation", &self.permutation);
        if let (Some(free), Some(kept)) = (self.free, self.kept) {
            let _ = writeln!(out, "free {free} kept {kept}");
        }
        labelled(&mut out, "pinned", &self.pinned);
        for (name, rows) in &self.matrices {
            let cols = rows.first().map_or(0, Vec::len);
            let _ = writeln!(out, "matrix {name} {}x{cols}", rows.len());
            for row in rows {
                let _ = writeln!(out, "  {}", row.join(" "));
            }
        }
        for x in &self.samples {
            labelled(&mut out, "sample", x);
        }
        for note in &self.notes {
            let _ = writeln!(out, "note {note}");
        }
        out
    }
}

fn labelled(out: &mut String, label: &str, items: &[String]) {
    out.push_str(label);
    for item in items {
        out.push(' ');
        out.push_str(item);
    }
    out.push('\n');
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub atom: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub pass: bool,
    pub violations: Vec<ViolationReport>,
}

impl CheckReport {
    pub fn new(sys: &MapSystem, found: &[Violation]) -> CheckReport {
        let violations = found
            .iter()
            .map(|v| ViolationReport {
                atom: match v.atom {
                    Some(i) => sys.display_atom(&sys.atoms[i]).to_string(),
                    None => format!("{} pinned to -inf", sys.names[v.variable]),
                },
                lhs: v.lhs.to_string(),
                rhs: v.rhs.to_string(),
            })
            .collect();
        CheckReport {
            pass: found.is_empty(),
            violations,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(if self.pass { "PASS\n" } else { "FAIL\n" });
        for v in &self.violations {
            let _ = writeln!(out, "  {}: {} > {}", v.atom, v.lhs, v.rhs);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid: i64,
    pub points: String,
    pub solutions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominated: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub represented: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominated_percent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub represented_percent: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub listed: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl OracleReport {
    pub fn new(grid: i64, points: u128, solutions: &[Vec<Scalar>], list: bool) -> OracleReport {
        OracleReport {
            grid,
            points: points.to_string(),
            solutions: solutions.len(),
            dominated: None,
            represented: None,
            dominated_percent: None,
            represented_percent: None,
            listed: if list {
                solutions.iter().map(|x| vector(x)).collect()
            } else {
                Vec::new()
            },
            warnings: Vec::new(),
        }
    }

    pub fn add_completeness(&mut self, report: &CompletenessReport) {
        self.dominated = Some(report.dominated);
        self.represented = Some(report.represented);
        self.dominated_percent = Some(report.dominated_percent());
        self.represented_percent = Some(report.represented_percent());
        if let Some(x) = report.undominated.first() {
            self.warnings.push(format!(
                "{} grid solutions lie above the supremum, e.g. {}",
                report.undominated.len(),
                vector(x).join(" ")
            ));
        }
        if let Some(x) = report.unrepresented.first() {
            self.warnings.push(format!(
                "{} grid solutions are not of the parametric form, e.g. {}",
                report.unrepresented.len(),
                vector(x).join(" ")
            ));
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "grid {} points {}", self.grid, self.points);
        let _ = writeln!(out, "solutions {}", self.solutions);
        if let (Some(d), Some(p)) = (self.dominated, self.dominated_percent) {
            let _ = writeln!(out, "dominated {d} ({p:.2}%)");
        }
        if let (Some(r), Some(p)) = (self.represented, self.represented_percent) {
            let _ = writeln!(out, "represented {r} ({p:.2}%)");
        }
        for x in &self.listed {
            let _ = writeln!(out, "solution {}", x.join(" "));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning {w}");
        }
        out
    }
}
