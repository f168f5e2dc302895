//! Doubled spherical triangles and α-extendability.
//!
//! A spherical triangle is determined by its three angles (spherical
//! rigidity); the sides come out of the dual law of cosines.  Doubling the
//! triangle across its boundary produces a closed surface with three cone
//! points, and the question asked here is whether every point of the double
//! lies within a threshold distance α of a chosen subset of the cone points.
//! Curvature 4 means the sphere of radius 1/2: angles are unchanged, lengths
//! are half the unit-sphere angles.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Rational;

const COS_DEGEN: f64 = 1e-12;
const TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ExtendError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("singular set is empty")]
    EmptySingularSet,
    #[error("vertex index {0} out of range (triangles have vertices 0, 1, 2)")]
    BadVertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curvature {
    One,
    Four,
}

impl Curvature {
    /// Lengths on the curvature-κ sphere are unit-sphere angles divided by √κ.
    pub fn length_scale(self) -> f64 {
        match self {
            Curvature::One => 1.0,
            Curvature::Four => 0.5,
        }
    }
}

/// Spherical triangle given by its angles; sides are derived and validated
/// at construction.  Vertex `i` carries angle `angles[i]`; side `i` is the
/// opposite one.
#[derive(Debug, Clone)]
pub struct SphTriangle {
    angles: [f64; 3],
    curvature: Curvature,
    // unit-sphere side cosines, each in (-1, 1]
    side_cos: [f64; 3],
}

fn dual_law(angles: &[f64; 3]) -> [f64; 3] {
    let [a, b, c] = *angles;
    [
        (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin()),
        (b.cos() + c.cos() * a.cos()) / (c.sin() * a.sin()),
        (c.cos() + a.cos() * b.cos()) / (a.sin() * b.sin()),
    ]
}

impl SphTriangle {
    pub fn new(angles: [f64; 3], curvature: Curvature) -> Result<Self, ExtendError> {
        for &a in &angles {
            if !a.is_finite() || a <= 0.0 || a >= PI {
                return Err(ExtendError::InvalidParameters(format!(
                    "angle {a} outside the open interval (0, pi)"
                )));
            }
        }
        let excess = angles.iter().sum::<f64>() - PI;
        if excess <= 0.0 {
            return Err(ExtendError::InvalidParameters(format!(
                "angle sum must exceed pi (excess {excess})"
            )));
        }
        let raw = dual_law(&angles);
        let mut side_cos = [0.0; 3];
        for (i, &c) in raw.iter().enumerate() {
            if (c + 1.0).abs() <= COS_DEGEN {
                return Err(ExtendError::DegenerateTriangle(format!(
                    "side {i} has length pi on the unit sphere"
                )));
            }
            if !(-1.0..=1.0 + 1e-9).contains(&c) {
                return Err(ExtendError::InvalidParameters(format!(
                    "side cosine {c} out of range: no spherical triangle has these angles"
                )));
            }
            side_cos[i] = c.min(1.0);
        }
        Ok(Self {
            angles,
            curvature,
            side_cos,
        })
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// Side lengths in the intrinsic metric of the stated curvature.
    pub fn sides(&self) -> [f64; 3] {
        let s = self.curvature.length_scale();
        self.side_cos.map(|c| c.acos() * s)
    }
}

/// Dual spherical law of cosines; side `i` opposite angle `i`.
pub fn sides_from_angles(t: &SphTriangle) -> [f64; 3] {
    t.sides()
}

/// Ordinary spherical law of cosines, inverse direction to
/// [`sides_from_angles`].  Lengths are in the metric of `curvature`.
pub fn angles_from_sides(sides: [f64; 3], curvature: Curvature) -> Result<[f64; 3], ExtendError> {
    let scale = curvature.length_scale();
    let u = sides.map(|x| x / scale);
    for &x in &u {
        if !x.is_finite() || x <= 0.0 || x >= PI {
            return Err(ExtendError::InvalidParameters(format!(
                "unit-sphere side {x} outside the open interval (0, pi)"
            )));
        }
    }
    let [a, b, c] = u;
    let angle = |a: f64, b: f64, c: f64| -> Result<f64, ExtendError> {
        let cos = (a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin());
        if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&cos) {
            return Err(ExtendError::InvalidParameters(format!(
                "angle cosine {cos} out of range: no spherical triangle has these sides"
            )));
        }
        Ok(cos.clamp(-1.0, 1.0).acos())
    };
    Ok([angle(a, b, c)?, angle(b, c, a)?, angle(c, a, b)?])
}

/// The double of a triangle across its boundary: a sphere-like surface with
/// cone angles twice the triangle angles.  The distinguished vertex is the
/// one whose cone point is to be treated as regular upstairs.
#[derive(Debug, Clone)]
pub struct DoubledTriangle {
    triangle: SphTriangle,
    distinguished_vertex: usize,
}

impl DoubledTriangle {
    pub fn new(triangle: SphTriangle, distinguished_vertex: usize) -> Result<Self, ExtendError> {
        if distinguished_vertex > 2 {
            return Err(ExtendError::BadVertex(distinguished_vertex));
        }
        Ok(Self {
            triangle,
            distinguished_vertex,
        })
    }

    pub fn triangle(&self) -> &SphTriangle {
        &self.triangle
    }

    pub fn cone_angles(&self) -> [f64; 3] {
        self.triangle.angles.map(|a| 2.0 * a)
    }

    pub fn distinguished_vertex(&self) -> usize {
        self.distinguished_vertex
    }

    /// Vertices whose cone angle differs from 2π, i.e. the metrically
    /// singular points of the double.
    pub fn singular_vertices(&self) -> Vec<usize> {
        self.cone_angles()
            .iter()
            .enumerate()
            .filter(|(_, &a)| (a - 2.0 * PI).abs() > TOL)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Isoceles curvature-4 triangle with apex angle π/n and base angles just
/// below π(n+1)/(2n).  At exactly π(n+1)/(2n) the triangle degenerates (the
/// two long sides reach length π on the unit sphere), and above that value
/// the dual-law cosines leave [-1, 1], so no spherical triangle exists; ε
/// measures the offset below the wall.  The apex is the distinguished
/// vertex: its cone angle is 2π/n, while the base cone angles approach
/// 2π·(n+1)/(2n) > 2π·... > π from below.
pub fn counterexample_triangle(n: u32, eps: &Rational) -> Result<DoubledTriangle, ExtendError> {
    if n < 2 {
        return Err(ExtendError::InvalidParameters(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let e = eps
        .to_f64()
        .ok_or_else(|| ExtendError::InvalidParameters("epsilon not representable".into()))?;
    if !(e > 0.0) {
        return Err(ExtendError::InvalidParameters(format!(
            "epsilon must be positive, got {e}"
        )));
    }
    let nf = n as f64;
    let apex = PI / nf;
    let base = PI * (nf + 1.0) / (2.0 * nf) - e;
    let t = SphTriangle::new([apex, base, base], Curvature::Four)?;
    DoubledTriangle::new(t, 0)
}

// ---- geometry on the unit sphere ----------------------------------------

type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &V3) -> Option<V3> {
    let n = norm(a);
    if n < 1e-14 {
        return None;
    }
    Some([a[0] / n, a[1] / n, a[2] / n])
}

fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn sphere_angle(a: &V3, b: &V3) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Place the triangle on the unit sphere: vertex 0 at the pole, vertex 1 in
/// the xz half-plane.
fn embed(t: &SphTriangle) -> [V3; 3] {
    let [ca, cb, cc] = t.side_cos;
    let (sb, sc) = ((1.0 - cb * cb).sqrt(), (1.0 - cc * cc).sqrt());
    let a0 = t.angles[0];
    let v0 = [0.0, 0.0, 1.0];
    let v1 = [sc, 0.0, cc];
    let v2 = [sb * a0.cos(), sb * a0.sin(), cb];
    debug_assert!((sphere_angle(&v1, &v2) - ca.acos()).abs() < 1e-8);
    [v0, v1, v2]
}

fn bary_point(verts: &[V3; 3], w: &[f64; 3]) -> V3 {
    let p = [
        w[0] * verts[0][0] + w[1] * verts[1][0] + w[2] * verts[2][0],
        w[0] * verts[0][1] + w[1] * verts[1][1] + w[2] * verts[2][1],
        w[0] * verts[0][2] + w[1] * verts[1][2] + w[2] * verts[2][2],
    ];
    normalize(&p).unwrap_or(verts[0])
}

fn det3(m: &[V3; 3]) -> f64 {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Barycentric coordinates of p with respect to the vertex rays (Cramer).
fn bary_of(verts: &[V3; 3], p: &V3) -> Option<[f64; 3]> {
    let d = det3(verts);
    if d.abs() < 1e-12 {
        return None;
    }
    let w0 = det3(&[*p, verts[1], verts[2]]) / d;
    let w1 = det3(&[verts[0], *p, verts[2]]) / d;
    let w2 = det3(&[verts[0], verts[1], *p]) / d;
    Some([w0, w1, w2])
}

fn in_face(verts: &[V3; 3], p: &V3) -> bool {
    match bary_of(verts, p) {
        Some(w) => w.iter().all(|&x| x >= -1e-9),
        None => false,
    }
}

fn min_dist(p: &V3, targets: &[V3]) -> f64 {
    targets
        .iter()
        .map(|t| sphere_angle(p, t))
        .fold(f64::INFINITY, f64::min)
}

fn slerp(a: &V3, b: &V3, t: f64) -> V3 {
    let omega = sphere_angle(a, b);
    if omega < 1e-12 {
        return *a;
    }
    let (sa, sb) = (((1.0 - t) * omega).sin(), (t * omega).sin());
    let s = omega.sin();
    normalize(&[
        (sa * a[0] + sb * b[0]) / s,
        (sa * a[1] + sb * b[1]) / s,
        (sa * a[2] + sb * b[2]) / s,
    ])
    .unwrap_or(*a)
}

/// Maximize `f` along the arc from a to b; dense scan plus shrinking-step
/// refinement in the arc parameter.
fn arc_max(a: &V3, b: &V3, f: &dyn Fn(&V3) -> f64) -> (f64, V3) {
    let samples = 256;
    let mut best_t = 0.0;
    let mut best = f(a);
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let v = f(&slerp(a, b, t));
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let mut step = 1.0 / samples as f64;
    while step > 1e-12 {
        let mut moved = false;
        for t in [best_t - step, best_t + step] {
            if (0.0..=1.0).contains(&t) {
                let v = f(&slerp(a, b, t));
                if v > best + 1e-15 {
                    best = v;
                    best_t = t;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (best, slerp(a, b, best_t))
}

/// Exact-flavoured candidate enumeration for the maximum over the face of
/// the distance to the nearest target vertex: face vertices, per-edge 1D
/// maxima, equidistant loci of target pairs, the triple-equidistant point,
/// and target antipodes.  Complete for a convex face because an interior
/// local maximum either has ≥2 targets active (equidistant locus) or sits at
/// a single target's antipode.
fn far_candidates(verts: &[V3; 3], targets: &[V3]) -> (f64, V3) {
    let f = |p: &V3| min_dist(p, targets);
    let mut best = (-1.0, verts[0]);
    let mut consider = |val: f64, p: V3| {
        if val > best.0 + 1e-12 {
            best = (val, p);
        }
    };
    for v in verts.iter() {
        consider(f(v), *v);
    }
    for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
        let (val, p) = arc_max(&verts[i], &verts[j], &f);
        consider(val, p);
    }
    // equidistant great circle of each target pair, restricted to the face
    let restricted = |p: &V3| if in_face(verts, p) { f(p) } else { -1.0 };
    for i in 0..targets.len() {
        for j in (i + 1)..targets.len() {
            let n = sub(&targets[i], &targets[j]);
            let Some(e1) = normalize(&cross(&n, &[0.0, 0.0, 1.0]))
                .or_else(|| normalize(&cross(&n, &[1.0, 0.0, 0.0])))
            else {
                continue;
            };
            let e2 = match normalize(&cross(&n, &e1)) {
                Some(v) => v,
                None => continue,
            };
            let circ = |th: f64| -> V3 {
                [
                    th.cos() * e1[0] + th.sin() * e2[0],
                    th.cos() * e1[1] + th.sin() * e2[1],
                    th.cos() * e1[2] + th.sin() * e2[2],
                ]
            };
            let samples = 720;
            let mut best_th = None;
            let mut best_v = -1.0;
            for k in 0..samples {
                let th = 2.0 * PI * k as f64 / samples as f64;
                let v = restricted(&circ(th));
                if v > best_v {
                    best_v = v;
                    best_th = Some(th);
                }
            }
            if let Some(mut th) = best_th {
                let mut step = 2.0 * PI / samples as f64;
                while step > 1e-12 {
                    let mut moved = false;
                    for cand in [th - step, th + step] {
                        let v = restricted(&circ(cand));
                        if v > best_v + 1e-15 {
                            best_v = v;
                            th = cand;
                            moved = true;
                        }
                    }
                    if !moved {
                        step *= 0.5;
                    }
                }
                consider(best_v, circ(th));
            }
        }
    }
    if targets.len() >= 3 {
        let n = cross(&sub(&targets[0], &targets[1]), &sub(&targets[0], &targets[2]));
        if let Some(p) = normalize(&n) {
            for q in [p, [-p[0], -p[1], -p[2]]] {
                if in_face(verts, &q) {
                    consider(f(&q), q);
                }
            }
        }
    }
    for t in targets {
        let anti = [-t[0], -t[1], -t[2]];
        if in_face(verts, &anti) {
            consider(f(&anti), anti);
        }
    }
    best
}

fn clip_bary(w: &[f64; 3]) -> [f64; 3] {
    let mut c = w.map(|x| x.max(0.0));
    let s: f64 = c.iter().sum();
    if s < 1e-14 {
        return [1.0 / 3.0; 3];
    }
    for x in c.iter_mut() {
        *x /= s;
    }
    c
}

/// Dense barycentric sampling plus shrinking pattern search; the compass
/// probe set is widened with bisectors of the active-target gradients so
/// ridges of the min-distance objective do not stall the search.
fn far_grid(verts: &[V3; 3], targets: &[V3]) -> (f64, V3) {
    let f = |w: &[f64; 3]| min_dist(&bary_point(verts, w), targets);
    let n = 72;
    let mut best_w = [1.0, 0.0, 0.0];
    let mut best = f(&best_w);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let w = [
                i as f64 / n as f64,
                j as f64 / n as f64,
                (n - i - j) as f64 / n as f64,
            ];
            let v = f(&w);
            if v > best {
                best = v;
                best_w = w;
            }
        }
    }
    let starts = [
        best_w,
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.5, 0.5, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [1.0 / 3.0; 3],
    ];
    for start in starts {
        let (v, w) = refine_bary(verts, targets, start);
        if v > best {
            best = v;
            best_w = w;
        }
    }
    (best, bary_point(verts, &best_w))
}

fn refine_bary(verts: &[V3; 3], targets: &[V3], start: [f64; 3]) -> (f64, [f64; 3]) {
    let f = |w: &[f64; 3]| min_dist(&bary_point(verts, w), targets);
    let mut w = clip_bary(&start);
    let mut val = f(&w);
    let mut step = 0.02_f64;
    while step > 1e-11 {
        let mut dirs: Vec<[f64; 2]> = vec![
            [1.0, 0.0],
            [-1.0, 0.0],
            [0.0, 1.0],
            [0.0, -1.0],
            [1.0, 1.0],
            [-1.0, -1.0],
            [1.0, -1.0],
            [-1.0, 1.0],
        ];
        // gradients of the active distances in the (w0, w1) chart
        let p = bary_point(verts, &w);
        let active: Vec<usize> = (0..targets.len())
            .filter(|&i| sphere_angle(&p, &targets[i]) < val + 1e-6)
            .collect();
        if active.len() >= 2 {
            let h = (step * 1e-3).max(1e-12);
            let grad = |i: usize| -> [f64; 2] {
                let g = |du: f64, dv: f64| {
                    let c = clip_bary(&[w[0] + du, w[1] + dv, w[2] - du - dv]);
                    sphere_angle(&bary_point(verts, &c), &targets[i])
                };
                [
                    (g(h, 0.0) - g(-h, 0.0)) / (2.0 * h),
                    (g(0.0, h) - g(0.0, -h)) / (2.0 * h),
                ]
            };
            for a in 0..active.len() {
                for b in (a + 1)..active.len() {
                    let (ga, gb) = (grad(active[a]), grad(active[b]));
                    let nz = |g: [f64; 2]| {
                        let n = (g[0] * g[0] + g[1] * g[1]).sqrt();
                        if n < 1e-14 {
                            [0.0, 0.0]
                        } else {
                            [g[0] / n, g[1] / n]
                        }
                    };
                    let (ga, gb) = (nz(ga), nz(gb));
                    dirs.push([ga[0] + gb[0], ga[1] + gb[1]]);
                }
            }
        }
        let mut moved = false;
        for d in &dirs {
            let nd = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if nd < 1e-14 {
                continue;
            }
            let (du, dv) = (step * d[0] / nd, step * d[1] / nd);
            let cand = clip_bary(&[w[0] + du, w[1] + dv, w[2] - du - dv]);
            let v = f(&cand);
            if v > val + 1e-15 {
                val = v;
                w = cand;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (val, w)
}

/// Label a face point by which open cell of the triangle it lies in.
fn classify(verts: &[V3; 3], p: &V3) -> String {
    let w = match bary_of(verts, p) {
        Some(w) => clip_bary(&w),
        None => return "interior".into(),
    };
    let idx: Vec<usize> = (0..3).filter(|&i| w[i] > 1e-6).collect();
    match idx.len() {
        1 => format!("vertex {}", idx[0]),
        2 => format!("edge {}-{}", idx[0], idx[1]),
        _ => "interior".into(),
    }
}

fn face_far_point(verts: &[V3; 3], targets: &[V3]) -> (f64, V3, String) {
    let c = far_candidates(verts, targets);
    let g = far_grid(verts, targets);
    let (val, p) = if g.0 > c.0 + 1e-9 { g } else { c };
    let desc = classify(verts, &p);
    (val, p, desc)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtendabilityReport {
    /// Intrinsic metric of the stated curvature, like the threshold.
    pub max_dist_to_singular: f64,
    pub threshold: f64,
    pub extendable: bool,
    /// Unit-sphere coordinates of the far point in the embedded face model.
    pub witness: [f64; 3],
    pub witness_desc: String,
}

/// Maximum over the double of the distance to the chosen vertex set,
/// compared against α.  Computed on one closed face: each copy is convex in
/// the double, so within a face the intrinsic distance to a vertex is the
/// ambient arc length, and a path crossing into the mirror copy never beats
/// it (the copies are glued by the identity on the boundary).
pub fn alpha_extendable(
    d: &DoubledTriangle,
    alpha: f64,
    singular_set: &[usize],
) -> Result<ExtendabilityReport, ExtendError> {
    if singular_set.is_empty() {
        return Err(ExtendError::EmptySingularSet);
    }
    let mut set: Vec<usize> = singular_set.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&i| i > 2) {
        return Err(ExtendError::BadVertex(bad));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(ExtendError::InvalidParameters(format!(
            "threshold must be a nonnegative real, got {alpha}"
        )));
    }
    let verts = embed(d.triangle());
    let targets: Vec<V3> = set.iter().map(|&i| verts[i]).collect();
    let (unit_max, witness, witness_desc) = face_far_point(&verts, &targets);
    let max_dist = unit_max * d.triangle().curvature().length_scale();
    Ok(ExtendabilityReport {
        max_dist_to_singular: max_dist,
        threshold: alpha,
        extendable: max_dist <= alpha + TOL,
        witness,
        witness_desc,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub n: u32,
    pub epsilon: f64,
    pub angles: [f64; 3],
    pub cone_angles: [f64; 3],
    /// Curvature-4 side lengths, side i opposite vertex i.
    pub sides: [f64; 3],
    /// Lengths of the two sides at the distinguished vertex, minus π/4.
    pub side_margins: [f64; 2],
    pub sides_exceed_quarter_pi: bool,
    pub extendability: ExtendabilityReport,
    pub not_quarter_pi_extendable: bool,
    pub confirmed: bool,
}

/// Bundles the two claims behind the counterexample: the sides at the
/// distinguished vertex exceed π/4, and the double is not π/4-extendable
/// from the other two vertices.
pub fn verify_counterexample(n: u32, eps: &Rational) -> Result<CounterexampleReport, ExtendError> {
    let d = counterexample_triangle(n, eps)?;
    let sides = d.triangle().sides();
    // sides at vertex 0 are the ones opposite vertices 1 and 2
    let side_margins = [sides[1] - PI / 4.0, sides[2] - PI / 4.0];
    let sides_exceed = side_margins.iter().all(|&m| m > 0.0);
    let extendability = alpha_extendable(&d, PI / 4.0, &[1, 2])?;
    let not_ext = !extendability.extendable;
    Ok(CounterexampleReport {
        n,
        epsilon: eps.to_f64().unwrap_or(f64::NAN),
        angles: d.triangle().angles(),
        cone_angles: d.cone_angles(),
        sides,
        side_margins,
        sides_exceed_quarter_pi: sides_exceed,
        extendability,
        not_quarter_pi_extendable: not_ext,
        confirmed: sides_exceed && not_ext,
    })
}
