//! Exact projective geometry of line arrangements in CP^2.
//!
//! Lines and points carry homogeneous coordinate triples over a fixed
//! cyclotomic field. Intersection is the cross product of coefficient
//! triples, equality is projective (vanishing cross product), and all
//! predicates are exact: there is no floating point in this module.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElement, CycloError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("lines {0} and {1} are projectively coincident")]
    CoincidentLines(usize, usize),
    #[error("duplicate line at indices {0} and {1}")]
    DuplicateLines(usize, usize),
    #[error("line {0} has all coefficients zero")]
    ZeroLine(usize),
    #[error("arrangement needs at least one line")]
    Empty,
    #[error("line {index} lives in Q(zeta_{got}), arrangement is over Q(zeta_{expect})")]
    FieldMismatch { index: usize, expect: u32, got: u32 },
    #[error(transparent)]
    Field(#[from] CycloError),
    #[error("bad arrangement JSON: {0}")]
    BadJson(String),
}

/// A projective line a*x + b*y + c*z = 0 with coefficients in Q(zeta_m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjLine {
    pub coeffs: [CycloElement; 3],
}

/// A point of CP^2 in homogeneous coordinates over Q(zeta_m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub coords: [CycloElement; 3],
}

fn cross(a: &[CycloElement; 3], b: &[CycloElement; 3]) -> [CycloElement; 3] {
    let m = |i: usize, j: usize| a[i].try_mul(&b[j]).expect("same field");
    [
        m(1, 2).try_sub(&m(2, 1)).expect("same field"),
        m(2, 0).try_sub(&m(0, 2)).expect("same field"),
        m(0, 1).try_sub(&m(1, 0)).expect("same field"),
    ]
}

fn dot(a: &[CycloElement; 3], b: &[CycloElement; 3]) -> CycloElement {
    let mut acc = a[0].try_mul(&b[0]).expect("same field");
    for i in 1..3 {
        acc = acc
            .try_add(&a[i].try_mul(&b[i]).expect("same field"))
            .expect("same field");
    }
    acc
}

/// Scales a triple so its first nonzero entry is 1; the canonical projective
/// representative used for hashing and grouping.
fn canonicalize(t: &[CycloElement; 3]) -> [CycloElement; 3] {
    for i in 0..3 {
        if !t[i].is_zero() {
            let inv = t[i].inv().expect("nonzero");
            return [
                t[0].try_mul(&inv).expect("same field"),
                t[1].try_mul(&inv).expect("same field"),
                t[2].try_mul(&inv).expect("same field"),
            ];
        }
    }
    t.clone()
}

impl ProjLine {
    pub fn new(coeffs: [CycloElement; 3]) -> Self {
        ProjLine { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn canonical(&self) -> [CycloElement; 3] {
        canonicalize(&self.coeffs)
    }

    /// Exact incidence test.
    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.coeffs, &p.coords).is_zero()
    }
}

impl ProjPoint {
    pub fn new(coords: [CycloElement; 3]) -> Self {
        ProjPoint { coords }
    }

    pub fn canonical(&self) -> [CycloElement; 3] {
        canonicalize(&self.coords)
    }
}

/// True iff the two triples are proportional over the field.
pub fn proj_equal(p: &ProjPoint, q: &ProjPoint) -> bool {
    cross(&p.coords, &q.coords).iter().all(|c| c.is_zero())
}

/// Intersection point of two projectively distinct lines.
pub fn intersect(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint, ArrangementError> {
    let c = cross(&l1.coeffs, &l2.coeffs);
    if c.iter().all(|x| x.is_zero()) {
        return Err(ArrangementError::CoincidentLines(0, 1));
    }
    Ok(ProjPoint::new(c))
}

/// A validated line arrangement over one cyclotomic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    field_order: u32,
    lines: Vec<ProjLine>,
    name: Option<String>,
}

impl Arrangement {
    pub fn new(
        field_order: u32,
        lines: Vec<ProjLine>,
        name: Option<String>,
    ) -> Result<Self, ArrangementError> {
        if lines.is_empty() {
            return Err(ArrangementError::Empty);
        }
        let mut seen: HashMap<[CycloElement; 3], usize> = HashMap::new();
        for (i, line) in lines.iter().enumerate() {
            if line.is_zero() {
                return Err(ArrangementError::ZeroLine(i));
            }
            for c in &line.coeffs {
                if c.order() != field_order {
                    return Err(ArrangementError::FieldMismatch {
                        index: i,
                        expect: field_order,
                        got: c.order(),
                    });
                }
            }
            if let Some(&j) = seen.get(&line.canonical()) {
                return Err(ArrangementError::DuplicateLines(j, i));
            }
            seen.insert(line.canonical(), i);
        }
        Ok(Arrangement {
            field_order,
            lines,
            name,
        })
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            name: self.name.clone(),
            cyclotomic_order: self.field_order,
            lines: self
                .lines
                .iter()
                .map(|l| {
                    [
                        l.coeffs[0].to_strings(),
                        l.coeffs[1].to_strings(),
                        l.coeffs[2].to_strings(),
                    ]
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ArrangementJson) -> Result<Self, ArrangementError> {
        let m = json.cyclotomic_order;
        let mut lines = Vec::with_capacity(json.lines.len());
        for triple in &json.lines {
            let coeffs = [
                CycloElement::from_strings(m, &triple[0])?,
                CycloElement::from_strings(m, &triple[1])?,
                CycloElement::from_strings(m, &triple[2])?,
            ];
            lines.push(ProjLine::new(coeffs));
        }
        Arrangement::new(m, lines, json.name.clone())
    }
}

/// On-disk arrangement format. Each coefficient is the cyclofield textual
/// form: an array of "p/q" strings, lowest degree first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub cyclotomic_order: u32,
    pub lines: Vec<[Vec<String>; 3]>,
}

/// One intersection point with the lines through it.
#[derive(Debug, Clone)]
pub struct IncidencePoint {
    pub point: ProjPoint,
    /// Sorted indices of the arrangement lines through the point.
    pub line_indices: Vec<usize>,
}

impl IncidencePoint {
    pub fn multiplicity(&self) -> usize {
        self.line_indices.len()
    }
}

/// The full pairwise-intersection combinatorics of an arrangement.
#[derive(Debug, Clone)]
pub struct IncidenceData {
    pub points: Vec<IncidencePoint>,
    /// For each line, the sorted indices into `points` of its incident
    /// intersection points.
    pub per_line: Vec<Vec<usize>>,
}

impl IncidenceData {
    /// Multiset of point multiplicities as (multiplicity, count), sorted.
    pub fn multiplicity_multiset(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for p in &self.points {
            *counts.entry(p.multiplicity()).or_default() += 1;
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Indices of points with multiplicity >= 3.
    pub fn heavy_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.points[i].multiplicity() >= 3)
            .collect()
    }
}

/// Groups all pairwise intersection points by projective equality.
pub fn incidence(arr: &Arrangement) -> IncidenceData {
    let n = arr.lines.len();
    let mut groups: HashMap<[CycloElement; 3], Vec<usize>> = HashMap::new();
    let mut order: Vec<[CycloElement; 3]> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = intersect(&arr.lines[i], &arr.lines[j])
                .map_err(|_| ArrangementError::CoincidentLines(i, j))
                .expect("validated arrangements have distinct lines");
            let key = p.canonical();
            let entry = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                Vec::new()
            });
            entry.push(i);
            entry.push(j);
        }
    }
    // Deterministic point order: sort canonical representatives textually.
    order.sort_by_cached_key(|k| {
        k.iter()
            .map(|c| c.to_strings().join(","))
            .collect::<Vec<_>>()
            .join(";")
    });
    let mut points = Vec::with_capacity(order.len());
    let mut per_line: Vec<Vec<usize>> = vec![Vec::new(); n];
    for key in order {
        let mut idx = groups.remove(&key).unwrap();
        idx.sort_unstable();
        idx.dedup();
        let pi = points.len();
        for &li in &idx {
            per_line[li].push(pi);
        }
        points.push(IncidencePoint {
            point: ProjPoint::new(key),
            line_indices: idx,
        });
    }
    IncidenceData { points, per_line }
}

/// Result of the Hirzebruch-property test: 3n lines, every line meeting the
/// others at exactly n+1 points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirzebruchReport {
    pub holds: bool,
    pub n: Option<usize>,
    pub per_line_point_counts: Vec<usize>,
}

pub fn hirzebruch_check(arr: &Arrangement, inc: &IncidenceData) -> HirzebruchReport {
    let counts: Vec<usize> = inc.per_line.iter().map(|v| v.len()).collect();
    let total = arr.line_count();
    if total % 3 != 0 || total == 0 {
        return HirzebruchReport {
            holds: false,
            n: None,
            per_line_point_counts: counts,
        };
    }
    let n = total / 3;
    let holds = n >= 1 && counts.iter().all(|&c| c == n + 1);
    HirzebruchReport {
        holds,
        n: if holds { Some(n) } else { None },
        per_line_point_counts: counts,
    }
}

/// Applies an invertible 3x3 matrix to a coefficient triple. Used by the
/// projective-invariance checks.
pub fn apply_matrix(line: &ProjLine, m: &[[CycloElement; 3]; 3]) -> ProjLine {
    let mut out = Vec::with_capacity(3);
    for col in 0..3 {
        let mut acc = CycloElement::zero(line.coeffs[0].order());
        for row in 0..3 {
            acc = acc
                .try_add(&line.coeffs[row].try_mul(&m[row][col]).expect("same field"))
                .expect("same field");
        }
        out.push(acc);
    }
    ProjLine::new([out[0].clone(), out[1].clone(), out[2].clone()])
}
