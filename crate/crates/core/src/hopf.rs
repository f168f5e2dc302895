//! CAT(1) decision for ramifications of the 3-sphere along Hopf circles.
//!
//! Each complex line through the origin of C^2 is a Hopf fiber; the Hopf map
//! sends it to a point of the quotient 2-sphere. The quotient carries
//! curvature 4, so every distance here is half the angle between unit
//! vectors. The ramification is CAT(1) exactly when no point of the quotient
//! sphere is farther than pi/4 from the base-point set, equivalently when no
//! open half-sphere contains all base points.

pub use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloElement;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HopfError {
    #[error("line direction is (numerically) zero")]
    ZeroDirection,
    #[error("need at least 2 lines, got {got}")]
    TooFewLines { got: usize },
    #[error("lines {0} and {1} are projectively equal")]
    DuplicateLines(usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("expected exactly {expect} base points, got {got}")]
    WrongCount { expect: usize, got: usize },
}

/// A complex line through the origin of C^2, given by a direction vector.
#[derive(Debug, Clone)]
pub struct ComplexLine2 {
    pub direction: [Complex64; 2],
    /// Present when the line came from exact cyclotomic data.
    pub exact: Option<[CycloElement; 2]>,
}

impl ComplexLine2 {
    pub fn new(d0: Complex64, d1: Complex64) -> Result<Self, HopfError> {
        let line = ComplexLine2 {
            direction: [d0, d1],
            exact: None,
        };
        if line.norm_sqr() < 1e-24 {
            return Err(HopfError::ZeroDirection);
        }
        Ok(line)
    }

    pub fn from_real(d0: f64, d1: f64) -> Result<Self, HopfError> {
        Self::new(Complex64::new(d0, 0.0), Complex64::new(d1, 0.0))
    }

    pub fn from_exact(e0: CycloElement, e1: CycloElement) -> Result<Self, HopfError> {
        let a = e0.embed();
        let b = e1.embed();
        let mut line = Self::new(Complex64::new(a.re, a.im), Complex64::new(b.re, b.im))?;
        line.exact = Some([e0, e1]);
        Ok(line)
    }

    fn norm_sqr(&self) -> f64 {
        self.direction[0].norm_sqr() + self.direction[1].norm_sqr()
    }
}

/// Image of the line's Hopf circle on the standard unit 2-sphere:
/// [w0 : w1] -> (2 Re(conj(w0) w1), 2 Im(conj(w0) w1), |w0|^2 - |w1|^2),
/// normalized.
pub fn base_point(l: &ComplexLine2) -> Result<[f64; 3], HopfError> {
    let n = l.norm_sqr();
    if n < 1e-24 {
        return Err(HopfError::ZeroDirection);
    }
    let cross = l.direction[0].conj() * l.direction[1];
    Ok([
        2.0 * cross.re / n,
        2.0 * cross.im / n,
        (l.direction[0].norm_sqr() - l.direction[1].norm_sqr()) / n,
    ])
}

/// Hermitian angle between two complex lines, in [0, pi/2].
pub fn line_angle(l1: &ComplexLine2, l2: &ComplexLine2) -> Result<f64, HopfError> {
    let n1 = l1.norm_sqr();
    let n2 = l2.norm_sqr();
    if n1 < 1e-24 || n2 < 1e-24 {
        return Err(HopfError::ZeroDirection);
    }
    let inner = l1.direction[0].conj() * l2.direction[0]
        + l1.direction[1].conj() * l2.direction[1];
    let c = (inner.norm() / (n1 * n2).sqrt()).clamp(0.0, 1.0);
    Ok(c.acos())
}

// --- 3-vector helpers -----------------------------------------------------

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add_scaled(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    [a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &[f64; 3]) -> Option<[f64; 3]> {
    let n = norm(a);
    if n < 1e-12 {
        None
    } else {
        Some([a[0] / n, a[1] / n, a[2] / n])
    }
}

fn neg(a: &[f64; 3]) -> [f64; 3] {
    [-a[0], -a[1], -a[2]]
}

fn angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

fn tangent_basis(u: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if u[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let t1 = normalize(&cross3(u, &pick)).expect("u is a unit vector");
    let t2 = cross3(u, &t1);
    (t1, t2)
}

/// Hill-climbs f on the unit sphere with a shrinking tangent step.
///
/// The objectives here are minima over the configuration points of smooth
/// functions of the angle to each point, so besides a generic fan of tangent
/// directions the probes include, for each point, the in-tangent-plane
/// direction away from (or toward) it, and for each pair the bisector of
/// those two — the exact ridge directions of a min-structure objective.
fn ascend<F: Fn(&[f64; 3]) -> f64>(
    start: [f64; 3],
    f: &F,
    sources: &[[f64; 3]],
    toward: bool,
) -> ([f64; 3], f64) {
    let mut u = start;
    let mut fu = f(&u);
    let mut step = 0.2;
    while step > 1e-12 {
        let (t1, t2) = tangent_basis(&u);
        let mut probes: Vec<[f64; 3]> = Vec::new();
        for k in 0..16 {
            let a = std::f64::consts::TAU * k as f64 / 16.0;
            probes.push([
                a.cos() * t1[0] + a.sin() * t2[0],
                a.cos() * t1[1] + a.sin() * t2[1],
                a.cos() * t1[2] + a.sin() * t2[2],
            ]);
        }
        let mut grads: Vec<[f64; 3]> = Vec::new();
        for p in sources {
            let q = if toward { *p } else { neg(p) };
            let tangential = sub(&q, &add_scaled(&[0.0; 3], &u, dot(&q, &u)));
            if let Some(g) = normalize(&tangential) {
                grads.push(g);
            }
        }
        for i in 0..grads.len() {
            probes.push(grads[i]);
            for j in (i + 1)..grads.len() {
                let bis = [
                    grads[i][0] + grads[j][0],
                    grads[i][1] + grads[j][1],
                    grads[i][2] + grads[j][2],
                ];
                if let Some(b) = normalize(&bis) {
                    probes.push(b);
                }
            }
        }
        let mut improved = false;
        for d in probes {
            let v = normalize(&add_scaled(&u, &d, step)).expect("step keeps it nonzero");
            let fv = f(&v);
            if fv > fu {
                u = v;
                fu = fv;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (u, fu)
}

/// Base points of a Hopf-circle configuration on the unit 2-sphere. All
/// distances involving this type are in the curvature-4 quotient metric:
/// half the unit-sphere angle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HopfConfig {
    base_points: Vec<[f64; 3]>,
}

impl HopfConfig {
    pub fn new(base_points: Vec<[f64; 3]>) -> Result<Self, HopfError> {
        if base_points.is_empty() {
            return Err(HopfError::DegenerateInput("no base points".into()));
        }
        for (i, p) in base_points.iter().enumerate() {
            if (norm(p) - 1.0).abs() > 1e-12 {
                return Err(HopfError::DegenerateInput(format!(
                    "base point {i} is not a unit vector"
                )));
            }
        }
        for i in 0..base_points.len() {
            for j in (i + 1)..base_points.len() {
                if angle(&base_points[i], &base_points[j]) < DEFAULT_TOL {
                    return Err(HopfError::DegenerateInput(format!(
                        "base points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(HopfConfig { base_points })
    }

    pub fn from_lines(lines: &[ComplexLine2]) -> Result<Self, HopfError> {
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                if line_angle(&lines[i], &lines[j])? < DEFAULT_TOL {
                    return Err(HopfError::DuplicateLines(i, j));
                }
            }
        }
        let base_points = lines.iter().map(base_point).collect::<Result<_, _>>()?;
        HopfConfig::new(base_points)
    }

    pub fn base_points(&self) -> &[[f64; 3]] {
        &self.base_points
    }

    pub fn len(&self) -> usize {
        self.base_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base_points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullStatus {
    Inside,
    Boundary,
    Outside,
}

/// Best "separating" margin: the maximum over unit u of min_i u . p_i.
/// Positive means an open half-sphere contains all points (origin outside
/// the hull), negative means the origin is interior.
fn support_margin(points: &[[f64; 3]]) -> (f64, [f64; 3]) {
    let f = |u: &[f64; 3]| points.iter().map(|p| dot(u, p)).fold(f64::INFINITY, f64::min);
    let mut candidates: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, -1.0],
    ];
    for p in points {
        candidates.push(*p);
        candidates.push(neg(p));
        let (t1, t2) = tangent_basis(p);
        candidates.push(t1);
        candidates.push(t2);
    }
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let mid = [
                points[i][0] + points[j][0],
                points[i][1] + points[j][1],
                points[i][2] + points[j][2],
            ];
            if let Some(u) = normalize(&mid) {
                candidates.push(u);
                candidates.push(neg(&u));
            }
            for k in (j + 1)..n {
                let nrm = cross3(&sub(&points[j], &points[i]), &sub(&points[k], &points[i]));
                if let Some(u) = normalize(&nrm) {
                    candidates.push(u);
                    candidates.push(neg(&u));
                }
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0, 1.0]);
    for c in candidates {
        let v = f(&c);
        if v > best.0 {
            best = (v, c);
        }
    }
    let (u, v) = ascend(best.1, &f, points, true);
    (v, u)
}

pub fn hull_contains_origin(config: &HopfConfig) -> HullStatus {
    hull_contains_origin_tol(config, DEFAULT_TOL)
}

pub fn hull_contains_origin_tol(config: &HopfConfig, tol: f64) -> HullStatus {
    let (margin, _) = support_margin(&config.base_points);
    if margin > tol {
        HullStatus::Outside
    } else if margin < -tol {
        HullStatus::Inside
    } else {
        HullStatus::Boundary
    }
}

/// Maximum quotient-metric distance from a point of the sphere to the
/// nearest base point. Candidates (antipodes of points, antipodes of pair
/// midpoints, circumcenters of triples) refined by local ascent; see
/// [`covering_radius_grid`] for the independent cross-check.
pub fn covering_radius(config: &HopfConfig) -> f64 {
    covering_radius_witness(config).1
}

pub fn covering_radius_witness(config: &HopfConfig) -> ([f64; 3], f64) {
    let points = &config.base_points;
    let f = |u: &[f64; 3]| {
        points
            .iter()
            .map(|p| angle(u, p))
            .fold(f64::INFINITY, f64::min)
    };
    let mut candidates: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, -1.0],
    ];
    let n = points.len();
    for p in points {
        candidates.push(neg(p));
        let (t1, t2) = tangent_basis(p);
        candidates.push(t1);
        candidates.push(t2);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mid = [
                points[i][0] + points[j][0],
                points[i][1] + points[j][1],
                points[i][2] + points[j][2],
            ];
            if let Some(u) = normalize(&mid) {
                candidates.push(neg(&u));
            }
            for k in (j + 1)..n {
                let nrm = cross3(&sub(&points[j], &points[i]), &sub(&points[k], &points[i]));
                if let Some(u) = normalize(&nrm) {
                    candidates.push(u);
                    candidates.push(neg(&u));
                }
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0, 1.0]);
    for c in candidates {
        let v = f(&c);
        if v > best.0 {
            best = (v, c);
        }
    }
    let (u, v) = ascend(best.1, &f, points, false);
    (u, v / 2.0)
}

/// Grid + local-ascent cross-check for the covering radius.
pub fn covering_radius_grid(config: &HopfConfig, divisions: usize) -> f64 {
    let points = &config.base_points;
    let f = |u: &[f64; 3]| {
        points
            .iter()
            .map(|p| angle(u, p))
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_u = [0.0, 0.0, 1.0];
    for i in 0..=divisions {
        let theta = std::f64::consts::PI * i as f64 / divisions as f64;
        let m = (2 * divisions).max(1);
        for j in 0..m {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let u = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let v = f(&u);
            if v > best {
                best = v;
                best_u = u;
            }
        }
    }
    let (_, v) = ascend(best_u, &f, points, false);
    v / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatStatus {
    Cat1,
    Cat1Boundary,
    NotCat1,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatVerdict {
    pub status: CatStatus,
    /// Covering radius in the quotient metric, radians.
    pub covering_radius: f64,
    pub hull: HullStatus,
    /// Farthest point of the quotient sphere from the base-point set;
    /// reported as the witness when the verdict is NotCat1.
    pub witness: Option<[f64; 3]>,
}

pub fn cat1_verdict(lines: &[ComplexLine2]) -> Result<CatVerdict, HopfError> {
    cat1_verdict_tol(lines, DEFAULT_TOL)
}

pub fn cat1_verdict_tol(lines: &[ComplexLine2], tol: f64) -> Result<CatVerdict, HopfError> {
    if lines.len() < 2 {
        return Err(HopfError::TooFewLines { got: lines.len() });
    }
    let config = HopfConfig::from_lines(lines)?;
    Ok(verdict_of_config(&config, tol))
}

fn verdict_of_config(config: &HopfConfig, tol: f64) -> CatVerdict {
    let hull = hull_contains_origin_tol(config, tol);
    let (witness, radius) = covering_radius_witness(config);
    let status = match hull {
        HullStatus::Outside => CatStatus::NotCat1,
        HullStatus::Boundary => CatStatus::Cat1Boundary,
        HullStatus::Inside => CatStatus::Cat1,
    };
    // The two decision paths must agree: the hull misses the origin exactly
    // when some point of the quotient sphere is farther than pi/4 from
    // every base point.
    debug_assert!(
        !(radius > std::f64::consts::FRAC_PI_4 + 1e-6 && hull == HullStatus::Inside)
            && !(radius < std::f64::consts::FRAC_PI_4 - 1e-6 && hull == HullStatus::Outside),
        "hull/radius disagreement: radius={radius}, hull={hull:?}"
    );
    CatVerdict {
        status,
        covering_radius: radius,
        hull,
        witness: if status == CatStatus::NotCat1 {
            Some(witness)
        } else {
            None
        },
    }
}

/// Local Hopf configuration at one intersection point of an arrangement:
/// the tangent directions of the incident lines in an affine chart.
#[derive(Debug, Clone)]
pub struct LocalConfig {
    pub point_index: usize,
    pub multiplicity: usize,
    pub config: HopfConfig,
    pub verdict: CatVerdict,
}

pub fn local_configs(
    arr: &crate::arrangement::Arrangement,
    inc: &crate::arrangement::IncidenceData,
) -> Result<Vec<LocalConfig>, HopfError> {
    let mut out = Vec::new();
    for (pi, p) in inc.points.iter().enumerate() {
        if p.multiplicity() < 2 {
            continue;
        }
        // numeric coordinates of the point; chart = largest coordinate
        let coords: Vec<Complex64> = p
            .point
            .coords
            .iter()
            .map(|c| {
                let e = c.embed();
                Complex64::new(e.re, e.im)
            })
            .collect();
        let chart = (0..3)
            .max_by(|&a, &b| coords[a].norm().total_cmp(&coords[b].norm()))
            .expect("three coordinates");
        let (i, j) = match chart {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        // Line a.x = 0 through the point: its affine tangent direction in
        // the chart {x_chart = 1} solves a_i v_i + a_j v_j = 0.
        let mut lines = Vec::with_capacity(p.multiplicity());
        for &li in &p.line_indices {
            let a: Vec<Complex64> = arr.lines()[li]
                .coeffs
                .iter()
                .map(|c| {
                    let e = c.embed();
                    Complex64::new(e.re, e.im)
                })
                .collect();
            lines.push(ComplexLine2::new(a[j], -a[i])?);
        }
        let config = HopfConfig::from_lines(&lines)?;
        let verdict = verdict_of_config(&config, DEFAULT_TOL);
        out.push(LocalConfig {
            point_index: pi,
            multiplicity: p.multiplicity(),
            config,
            verdict,
        });
    }
    Ok(out)
}

/// Charney-Davis condition (i): the spherical triangle on the unit sphere
/// has perimeter 2 pi.
pub fn three_point_s2_check(
    x: &[f64; 3],
    y: &[f64; 3],
    z: &[f64; 3],
) -> Result<bool, HopfError> {
    for (a, b) in [(x, y), (x, z), (y, z)] {
        if angle(a, b) < 1e-12 {
            return Err(HopfError::DegenerateInput(
                "three points must be pairwise distinct".into(),
            ));
        }
    }
    let perimeter = angle(x, y) + angle(x, z) + angle(y, z);
    Ok((perimeter - 2.0 * std::f64::consts::PI).abs() <= DEFAULT_TOL)
}

/// Charney-Davis condition (ii) for fibers: the quotient-metric triangle of
/// a 3-point configuration has perimeter pi.
pub fn three_fiber_check(config: &HopfConfig) -> Result<bool, HopfError> {
    if config.len() != 3 {
        return Err(HopfError::WrongCount {
            expect: 3,
            got: config.len(),
        });
    }
    let p = &config.base_points;
    let perimeter = (angle(&p[0], &p[1]) + angle(&p[0], &p[2]) + angle(&p[1], &p[2])) / 2.0;
    Ok((perimeter - std::f64::consts::PI).abs() <= DEFAULT_TOL)
}

/// Deterministic random lines for tests and sampling-based checks.
pub fn random_lines<R: Rng>(rng: &mut R, count: usize) -> Vec<ComplexLine2> {
    let mut out: Vec<ComplexLine2> = Vec::with_capacity(count);
    while out.len() < count {
        let d0 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let d1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let Ok(line) = ComplexLine2::new(d0, d1) else {
            continue;
        };
        if out
            .iter()
            .all(|l| line_angle(l, &line).unwrap() > 1e-3)
        {
            out.push(line);
        }
    }
    out
}

/// A Haar-ish random unitary 2x2 matrix for invariance tests.
pub fn random_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    [[a, b], [-phase * b.conj(), phase * a.conj()]]
}

pub fn apply_unitary(u: &[[Complex64; 2]; 2], l: &ComplexLine2) -> ComplexLine2 {
    ComplexLine2 {
        direction: [
            u[0][0] * l.direction[0] + u[0][1] * l.direction[1],
            u[1][0] * l.direction[0] + u[1][1] * l.direction[1],
        ],
        exact: None,
    }
}
