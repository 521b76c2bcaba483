//! Finite simplicial and cubical cell complexes: data model, JSON file format
//! and structural validation.
//!
//! A complex is a list of cells, each carrying an ordered facet list. The
//! facet order is semantic: it fixes the incidence signs used by the face
//! poset (see [`crate::poset`]).
//!
//! * simplicial `d`-cell: `d + 1` facets, the `i`-th facet is the face opposite
//!   the `i`-th vertex and has incidence `(-1)^i`;
//! * cubical `d`-cell: `2d` facets ordered `(axis 1, side 0), (axis 1, side 1),
//!   ..., (axis d, side 1)`; facet `(axis i, side e)` has incidence
//!   `(-1)^(i+1)` times `+1` for side 1 and `-1` for side 0.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GarlandError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Simplicial,
    Cubical,
}

impl ComplexKind {
    /// Number of facets a rank-regular `dim`-cell lists.
    pub fn facet_count(self, dim: usize) -> usize {
        match (self, dim) {
            (_, 0) => 0,
            (ComplexKind::Simplicial, d) => d + 1,
            (ComplexKind::Cubical, d) => 2 * d,
        }
    }

    /// Incidence sign of the facet listed at position `slot`.
    pub fn facet_sign(self, slot: usize) -> i8 {
        match self {
            ComplexKind::Simplicial => {
                if slot.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            ComplexKind::Cubical => {
                let axis = slot / 2 + 1;
                let side = if slot % 2 == 1 { 1 } else { -1 };
                if axis % 2 == 1 {
                    side
                } else {
                    -side
                }
            }
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::Simplicial => f.write_str("simplicial"),
            ComplexKind::Cubical => f.write_str("cubical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: u64,
    pub dim: usize,
    pub facets: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplex {
    pub kind: ComplexKind,
    pub cells: Vec<Cell>,
}

impl CellComplex {
    pub fn new(kind: ComplexKind, cells: Vec<Cell>) -> Self {
        CellComplex { kind, cells }
    }

    /// Dimension of the complex; `None` when it has no cells.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Number of cells of each dimension, indexed by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serialization cannot fail")
    }
}

/// Parses the JSON complex format. Cells keep their input order and ids.
pub fn parse_complex(text: &str) -> Result<CellComplex> {
    let complex: CellComplex = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("unknown variant") {
            GarlandError::Parse(format!("unknown kind: {msg}"))
        } else {
            GarlandError::Parse(format!("malformed document: {msg}"))
        }
    })?;

    let mut seen = HashSet::with_capacity(complex.cells.len());
    for cell in &complex.cells {
        if !seen.insert(cell.id) {
            return Err(GarlandError::Parse(format!(
                "duplicate cell id {}",
                cell.id
            )));
        }
    }
    for cell in &complex.cells {
        if let Some(f) = cell.facets.iter().find(|f| !seen.contains(f)) {
            return Err(GarlandError::Parse(format!(
                "dangling facet id {f} in cell {}",
                cell.id
            )));
        }
        let expected = complex.kind.facet_count(cell.dim);
        if cell.facets.len() != expected {
            return Err(GarlandError::Parse(format!(
                "wrong facet count: {} {}-cell {} lists {} facets, expected {expected}",
                complex.kind,
                cell.dim,
                cell.id,
                cell.facets.len()
            )));
        }
    }
    Ok(complex)
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub rule: String,
    pub cells: Vec<u64>,
    pub message: String,
}

impl Issue {
    fn new(rule: &str, cells: Vec<u64>, message: String) -> Self {
        Issue {
            rule: rule.to_string(),
            cells,
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks rank regularity, facet dimensions and the signed `∂∂ = 0` condition
/// on every corank-2 interval. Never fails; all findings go into the report.
pub fn validate(complex: &CellComplex) -> ValidationReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let kind = complex.kind;

    let mut index: HashMap<u64, usize> = HashMap::with_capacity(complex.cells.len());
    for (i, cell) in complex.cells.iter().enumerate() {
        if index.insert(cell.id, i).is_some() {
            violations.push(Issue::new(
                "duplicate-id",
                vec![cell.id],
                format!("cell id {} occurs more than once", cell.id),
            ));
        }
    }

    for cell in &complex.cells {
        let expected = kind.facet_count(cell.dim);
        if cell.facets.len() != expected {
            violations.push(Issue::new(
                "facet-count",
                vec![cell.id],
                format!(
                    "wrong facet count: {kind} {}-cell {} lists {} facets, expected {expected}",
                    cell.dim,
                    cell.id,
                    cell.facets.len()
                ),
            ));
        }
        let mut distinct = HashSet::new();
        for f in &cell.facets {
            match index.get(f) {
                None => violations.push(Issue::new(
                    "dangling-facet",
                    vec![cell.id, *f],
                    format!("cell {} lists unknown facet {f}", cell.id),
                )),
                Some(&j) => {
                    let fd = complex.cells[j].dim;
                    if fd + 1 != cell.dim {
                        violations.push(Issue::new(
                            "facet-dimension",
                            vec![cell.id, *f],
                            format!(
                                "facet {f} of {}-cell {} has dimension {fd}",
                                cell.dim, cell.id
                            ),
                        ));
                    }
                }
            }
            if !distinct.insert(*f) {
                violations.push(Issue::new(
                    "rank-regularity",
                    vec![cell.id, *f],
                    format!(
                        "rank regularity: cell {} lists facet {f} more than once",
                        cell.id
                    ),
                ));
            }
        }
    }

    // Interval checks only make sense on structurally sound input.
    if violations.is_empty() {
        check_intervals(complex, &index, &mut violations);
        collect_coface_warnings(complex, &index, &mut warnings);
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
        warnings,
    }
}

fn check_intervals(
    complex: &CellComplex,
    index: &HashMap<u64, usize>,
    violations: &mut Vec<Issue>,
) {
    let kind = complex.kind;
    for top in complex.cells.iter().filter(|c| c.dim >= 2) {
        // bottom id -> (signed sum, middle count)
        let mut intervals: BTreeMap<u64, (i64, usize)> = BTreeMap::new();
        for (i, mid_id) in top.facets.iter().enumerate() {
            let s_top = kind.facet_sign(i) as i64;
            let mid = &complex.cells[index[mid_id]];
            for (j, low) in mid.facets.iter().enumerate() {
                let entry = intervals.entry(*low).or_insert((0, 0));
                entry.0 += s_top * kind.facet_sign(j) as i64;
                entry.1 += 1;
            }
        }
        for (low, (sum, count)) in intervals {
            if count != 2 {
                violations.push(Issue::new(
                    "interval-middles",
                    vec![low, top.id],
                    format!(
                        "interval between {low} and {} has {count} middle elements, expected 2",
                        top.id
                    ),
                ));
            } else if sum != 0 {
                violations.push(Issue::new(
                    "boundary-squared",
                    vec![low, top.id],
                    format!(
                        "signed middle sum between {low} and {} is {sum}, expected 0",
                        top.id
                    ),
                ));
            }
        }
    }
}

fn collect_coface_warnings(
    complex: &CellComplex,
    index: &HashMap<u64, usize>,
    warnings: &mut Vec<Issue>,
) {
    let Some(dim) = complex.dim() else { return };
    let mut has_coface = vec![false; complex.cells.len()];
    for cell in &complex.cells {
        for f in &cell.facets {
            has_coface[index[f]] = true;
        }
    }
    for k in 0..dim {
        let lonely: Vec<u64> = complex
            .cells
            .iter()
            .zip(&has_coface)
            .filter(|(c, has)| c.dim == k && !**has)
            .map(|(c, _)| c.id)
            .collect();
        if !lonely.is_empty() {
            warnings.push(Issue::new(
                "no-coface",
                lonely.clone(),
                format!("{} {k}-cells have no {}-cofaces", lonely.len(), k + 1),
            ));
        }
    }
    warnings.push(Issue::new(
        "top-cells",
        Vec::new(),
        format!("{dim}-cells have no {}-cofaces", dim + 1),
    ));
}
