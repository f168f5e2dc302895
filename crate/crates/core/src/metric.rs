//! Feasibility of the non-negatively curved polyhedral metric on a line
//! arrangement, decided exactly.
//!
//! The arrangement determines a symmetric b-matrix; a weight vector z must
//! satisfy the per-line Gauss-Bonnet equalities `sum_k b_jk z_k = 1`,
//! `sum_k z_k = 3`, the open box `0 < z_k < 1`, and positive cone apex
//! angles `alpha_x > 0` at every point of multiplicity >= 3. Strictness is
//! handled by a max-slack linear program solved with an exact rational
//! simplex; both outcomes carry certificates that are re-verifiable from
//! scratch with no floating point.

pub mod simplex;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{hirzebruch_check, incidence, Arrangement, IncidenceData};
use crate::cyclo::{format_rational, parse_rational, rat, rat_int, Rational};
use simplex::{LinearProgram, LpOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("weight vector has length {got}, arrangement has {expect} lines")]
    LengthMismatch { expect: usize, got: usize },
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("bad certificate JSON: {0}")]
    BadJson(String),
}

/// The symmetric matrix of the linear system: off-diagonal entry 1 iff the
/// two lines meet at a double point, and `b_jj + 1` heavy points on line j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatrix {
    entries: Vec<Vec<Rational>>,
}

impl BMatrix {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }
}

pub fn build_b_matrix(inc: &IncidenceData) -> BMatrix {
    let n = inc.per_line.len();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for p in &inc.points {
        if p.multiplicity() == 2 {
            let (i, j) = (p.line_indices[0], p.line_indices[1]);
            entries[i][j] = rat_int(1);
            entries[j][i] = rat_int(1);
        }
    }
    for j in 0..n {
        let heavy = inc.per_line[j]
            .iter()
            .filter(|&&pi| inc.points[pi].multiplicity() >= 3)
            .count();
        entries[j][j] = rat_int(heavy as i64 - 1);
    }
    BMatrix { entries }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub z: Vec<Rational>,
}

impl WeightVector {
    pub fn new(z: Vec<Rational>) -> Self {
        WeightVector { z }
    }

    pub fn uniform(n: usize, value: Rational) -> Self {
        WeightVector {
            z: vec![value; n],
        }
    }
}

/// Apex data for one heavy point: `alpha = 1 - (1/2) sum_{x in l_k} z_k`,
/// and the circle fiber above x has length `2 pi alpha` (stored in units
/// of pi).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaEntry {
    pub point_index: usize,
    pub multiplicity: usize,
    pub alpha: Rational,
    pub fiber_length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaReport {
    pub entries: Vec<AlphaEntry>,
}

pub fn alphas(inc: &IncidenceData, z: &WeightVector) -> Result<AlphaReport, MetricError> {
    let n = inc.per_line.len();
    if z.z.len() != n {
        return Err(MetricError::LengthMismatch {
            expect: n,
            got: z.z.len(),
        });
    }
    let half = rat(1, 2);
    let mut entries = Vec::new();
    for (pi, p) in inc.points.iter().enumerate() {
        if p.multiplicity() < 3 {
            continue;
        }
        let sum: Rational = p.line_indices.iter().map(|&k| z.z[k].clone()).sum();
        let alpha = rat_int(1) - &half * &sum;
        let fiber_length = rat_int(2) * &alpha;
        entries.push(AlphaEntry {
            point_index: pi,
            multiplicity: p.multiplicity(),
            alpha,
            fiber_length,
        });
    }
    Ok(AlphaReport { entries })
}

/// The per-line rows of condition (ii), `sum_k b_jk z_k = 1`. The solver and
/// the checker both read their equality rows from here.
pub fn gauss_bonnet_rows(b: &BMatrix) -> Vec<Vec<Rational>> {
    b.entries.clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    /// (i) 0 < z_k < 1 for every k.
    pub range_ok: bool,
    /// min over k of min(z_k, 1 - z_k).
    pub range_margin: Rational,
    /// (ii) per line: sum_k b_jk z_k = 1; residuals are lhs - 1.
    pub rows_ok: bool,
    pub row_residuals: Vec<Rational>,
    /// (ii) total: sum_k z_k = 3.
    pub total_ok: bool,
    pub total_residual: Rational,
    /// (iv) alpha_x > 0 at every heavy point.
    pub alpha_ok: bool,
    /// min alpha over heavy points; None when there are none.
    pub alpha_margin: Option<Rational>,
    pub pass: bool,
}

pub fn check_weights(arr: &Arrangement, z: &WeightVector) -> Result<ConditionReport, MetricError> {
    let inc = incidence(arr);
    let b = build_b_matrix(&inc);
    check_weights_with(&inc, &b, z)
}

fn check_weights_with(
    inc: &IncidenceData,
    b: &BMatrix,
    z: &WeightVector,
) -> Result<ConditionReport, MetricError> {
    let n = b.n();
    if z.z.len() != n {
        return Err(MetricError::LengthMismatch {
            expect: n,
            got: z.z.len(),
        });
    }
    let one = rat_int(1);
    let mut range_margin = one.clone();
    for zk in &z.z {
        let upper = &one - zk;
        if *zk < range_margin {
            range_margin = zk.clone();
        }
        if upper < range_margin {
            range_margin = upper;
        }
    }
    let range_ok = range_margin.is_positive();

    let rows = gauss_bonnet_rows(b);
    let row_residuals: Vec<Rational> = rows
        .iter()
        .map(|row| {
            let lhs: Rational = row.iter().zip(&z.z).map(|(bjk, zk)| bjk * zk).sum();
            lhs - &one
        })
        .collect();
    let rows_ok = row_residuals.iter().all(|r| r.is_zero());
    let total: Rational = z.z.iter().cloned().sum();
    let total_residual = total - rat_int(3);
    let total_ok = total_residual.is_zero();

    let report = alphas(inc, z)?;
    let alpha_margin = report.entries.iter().map(|e| e.alpha.clone()).min();
    let alpha_ok = alpha_margin
        .as_ref()
        .map(|a| a.is_positive())
        .unwrap_or(true);

    let pass = range_ok && rows_ok && total_ok && alpha_ok;
    Ok(ConditionReport {
        range_ok,
        range_margin,
        rows_ok,
        row_residuals,
        total_ok,
        total_residual,
        alpha_ok,
        alpha_margin,
        pass,
    })
}

/// Residual of the displayed quadratic identity,
/// `sum_{mult > 2} (alpha_x - 1)^2 - sum_j z_j^2 b_jj - 3/2`.
/// Reported as a diagnostic; it is not a feasibility condition and nonzero
/// values are expected (the triangle at z = 1 gives 3/2, Ceva(3) at
/// z = 1/3 gives -3/2).
pub fn quadratic_residual(inc: &IncidenceData, z: &WeightVector) -> Result<Rational, MetricError> {
    let b = build_b_matrix(inc);
    let report = alphas(inc, z)?;
    let one = rat_int(1);
    let mut acc = Rational::zero();
    for e in &report.entries {
        let d = &e.alpha - &one;
        acc = acc + &d * &d;
    }
    for (j, zj) in z.z.iter().enumerate() {
        acc = acc - zj * zj * b.entry(j, j);
    }
    Ok(acc - rat(3, 2))
}

/// Witness that the weight system is solvable: `z` satisfies the equalities
/// and every strict condition with margin at least `slack > 0`. Cone angles
/// are `2 (1 - z_i)` in units of pi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricCertificate {
    pub z: WeightVector,
    pub slack: Rational,
    pub alphas: AlphaReport,
    pub cone_angles: Vec<Rational>,
}

/// Proof of infeasibility of the strict system, as row multipliers keyed by
/// constraint identifiers (`row_j`, `total`, `z_lo_k`, `z_hi_k`,
/// `alpha_p`). With `slack_bound = None` the combination contradicts the
/// closed relaxation (Farkas); with `Some(b)` it proves the optimal slack is
/// at most `b <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub slack_bound: Option<Rational>,
    pub multipliers: Vec<(String, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Feasible(MetricCertificate),
    Infeasible(InfeasibilityCertificate),
}

/// Constraint rows over the variables (z_1..z_n, s), in certificate id
/// order. Inequalities are `a . x <= u`.
struct ConstraintSystem {
    n: usize,
    eq: Vec<(String, Vec<Rational>, Rational)>,
    ub: Vec<(String, Vec<Rational>, Rational)>,
}

fn constraint_system(inc: &IncidenceData, b: &BMatrix) -> ConstraintSystem {
    let n = b.n();
    let s = n; // slack variable index
    let mut eq = Vec::with_capacity(n + 1);
    for (j, row) in gauss_bonnet_rows(b).into_iter().enumerate() {
        let mut a = row;
        a.push(Rational::zero());
        eq.push((format!("row_{j}"), a, rat_int(1)));
    }
    let mut a = vec![rat_int(1); n];
    a.push(Rational::zero());
    eq.push(("total".into(), a, rat_int(3)));

    let mut ub = Vec::new();
    for k in 0..n {
        // z_k >= s
        let mut a = vec![Rational::zero(); n + 1];
        a[k] = rat_int(-1);
        a[s] = rat_int(1);
        ub.push((format!("z_lo_{k}"), a, Rational::zero()));
    }
    for k in 0..n {
        // 1 - z_k >= s
        let mut a = vec![Rational::zero(); n + 1];
        a[k] = rat_int(1);
        a[s] = rat_int(1);
        ub.push((format!("z_hi_{k}"), a, rat_int(1)));
    }
    let half = rat(1, 2);
    for (pi, p) in inc.points.iter().enumerate() {
        if p.multiplicity() < 3 {
            continue;
        }
        // alpha_x >= s  <=>  (1/2) sum z_k + s <= 1
        let mut a = vec![Rational::zero(); n + 1];
        for &k in &p.line_indices {
            a[k] = half.clone();
        }
        a[s] = rat_int(1);
        ub.push((format!("alpha_{pi}"), a, rat_int(1)));
    }
    ConstraintSystem { n, eq, ub }
}

/// Decides the strict system by maximizing the common margin s subject to
/// the closed relaxation; feasible iff the optimum is positive.
pub fn solve_weights(arr: &Arrangement) -> SolveResult {
    let inc = incidence(arr);
    let b = build_b_matrix(&inc);
    let sys = constraint_system(&inc, &b);
    let n = sys.n;
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = rat_int(1);
    let lp = LinearProgram {
        num_vars: n + 1,
        objective,
        eq: sys.eq.iter().map(|(_, a, b)| (a.clone(), b.clone())).collect(),
        ub: sys.ub.iter().map(|(_, a, u)| (a.clone(), u.clone())).collect(),
    };
    let collect = |eq_mult: &[Rational], ub_mult: &[Rational]| -> Vec<(String, Rational)> {
        sys.eq
            .iter()
            .map(|(id, _, _)| id)
            .zip(eq_mult)
            .chain(sys.ub.iter().map(|(id, _, _)| id).zip(ub_mult))
            .filter(|(_, m)| !m.is_zero())
            .map(|(id, m)| (id.clone(), m.clone()))
            .collect()
    };
    match simplex::solve(&lp) {
        LpOutcome::Optimal {
            x,
            value,
            dual_eq,
            dual_ub,
        } => {
            if value.is_positive() {
                let z = WeightVector::new(x[..n].to_vec());
                let alpha_report = alphas(&inc, &z).expect("lengths match");
                let cone_angles = z
                    .z
                    .iter()
                    .map(|zi| rat_int(2) * (rat_int(1) - zi))
                    .collect();
                let cert = MetricCertificate {
                    z,
                    slack: value,
                    alphas: alpha_report,
                    cone_angles,
                };
                debug_assert!(verify_certificate(arr, &SolveResult::Feasible(cert.clone())));
                SolveResult::Feasible(cert)
            } else {
                let cert = InfeasibilityCertificate {
                    slack_bound: Some(value),
                    multipliers: collect(&dual_eq, &dual_ub),
                };
                debug_assert!(verify_certificate(
                    arr,
                    &SolveResult::Infeasible(cert.clone())
                ));
                SolveResult::Infeasible(cert)
            }
        }
        LpOutcome::Infeasible {
            farkas_eq,
            farkas_ub,
        } => {
            let cert = InfeasibilityCertificate {
                slack_bound: None,
                multipliers: collect(&farkas_eq, &farkas_ub),
            };
            debug_assert!(verify_certificate(
                arr,
                &SolveResult::Infeasible(cert.clone())
            ));
            SolveResult::Infeasible(cert)
        }
        LpOutcome::Unbounded => unreachable!("slack is bounded above by 1/2"),
    }
}

/// Re-verifies a certificate from scratch: the arrangement's constraint
/// system is rebuilt and every identity is checked in exact arithmetic,
/// independent of solver internals.
pub fn verify_certificate(arr: &Arrangement, result: &SolveResult) -> bool {
    let inc = incidence(arr);
    let b = build_b_matrix(&inc);
    match result {
        SolveResult::Feasible(cert) => verify_feasible(&inc, &b, cert),
        SolveResult::Infeasible(cert) => verify_infeasible(&inc, &b, cert),
    }
}

fn verify_feasible(inc: &IncidenceData, b: &BMatrix, cert: &MetricCertificate) -> bool {
    let n = b.n();
    if cert.z.z.len() != n || cert.cone_angles.len() != n || !cert.slack.is_positive() {
        return false;
    }
    let Ok(report) = check_weights_with(inc, b, &cert.z) else {
        return false;
    };
    if !report.pass {
        return false;
    }
    if report.range_margin < cert.slack {
        return false;
    }
    if let Some(a) = &report.alpha_margin {
        if *a < cert.slack {
            return false;
        }
    }
    let Ok(alpha_report) = alphas(inc, &cert.z) else {
        return false;
    };
    if alpha_report != cert.alphas {
        return false;
    }
    cert.cone_angles
        .iter()
        .zip(&cert.z.z)
        .all(|(angle, zi)| *angle == rat_int(2) * (rat_int(1) - zi))
}

fn verify_infeasible(inc: &IncidenceData, b: &BMatrix, cert: &InfeasibilityCertificate) -> bool {
    let sys = constraint_system(inc, b);
    let n = sys.n;
    let mut combo = vec![Rational::zero(); n + 1];
    let mut bound = Rational::zero();
    for (id, m) in &cert.multipliers {
        let row = sys
            .eq
            .iter()
            .map(|(rid, a, rhs)| (rid, a, rhs, false))
            .chain(sys.ub.iter().map(|(rid, a, rhs)| (rid, a, rhs, true)))
            .find(|(rid, _, _, _)| *rid == id);
        let Some((_, a, rhs, is_ub)) = row else {
            return false;
        };
        if is_ub && m.is_negative() {
            return false;
        }
        for (c, ai) in combo.iter_mut().zip(a) {
            *c = &*c + &(m * ai);
        }
        bound = bound + m * rhs;
    }
    match &cert.slack_bound {
        None => {
            // Farkas: a legal combination of the rows reads 0 <= negative.
            combo.iter().all(|c| c.is_zero()) && bound.is_negative()
        }
        Some(s_bound) => {
            // Weak duality: the combination dominates the objective (the
            // bare slack variable), so max s <= bound <= 0.
            if s_bound.is_positive() || bound != *s_bound {
                return false;
            }
            combo[..n].iter().all(|c| c.is_zero()) && combo[n] == rat_int(1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AsphericalReason {
    /// A weight system exists; the metric certificate is attached.
    Lp(MetricCertificate),
    /// Hirzebruch holds with >= 2n lines concurrent: three generic lines.
    TriangleSpecialCase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Aspherical(AsphericalReason),
    NoCertificate(InfeasibilityCertificate),
}

pub fn aspherical_verdict(arr: &Arrangement) -> Result<Verdict, MetricError> {
    match solve_weights(arr) {
        SolveResult::Feasible(cert) => Ok(Verdict::Aspherical(AsphericalReason::Lp(cert))),
        SolveResult::Infeasible(cert) => {
            let inc = incidence(arr);
            let h = hirzebruch_check(arr, &inc);
            let big_point = h.n.map(|n| {
                inc.points.iter().any(|p| p.multiplicity() >= 2 * n)
            });
            if h.holds && big_point == Some(true) {
                let is_triangle = arr.line_count() == 3
                    && inc.points.len() == 3
                    && inc.points.iter().all(|p| p.multiplicity() == 2);
                if is_triangle {
                    Ok(Verdict::Aspherical(AsphericalReason::TriangleSpecialCase))
                } else {
                    Err(MetricError::InternalContradiction(
                        "Hirzebruch with a 2n-fold point must be three generic lines".into(),
                    ))
                }
            } else {
                Ok(Verdict::NoCertificate(cert))
            }
        }
    }
}

// --- JSON forms -----------------------------------------------------------

fn pi_multiple(r: &Rational) -> String {
    format!("{} pi", format_rational(r))
}

fn parse_pi_multiple(s: &str) -> Result<Rational, MetricError> {
    let body = s
        .strip_suffix(" pi")
        .ok_or_else(|| MetricError::BadJson(format!("expected a pi multiple, got {s:?}")))?;
    parse_rational(body).map_err(|e| MetricError::BadJson(e.to_string()))
}

fn parse_rat(s: &str) -> Result<Rational, MetricError> {
    parse_rational(s).map_err(|e| MetricError::BadJson(e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaEntryJson {
    pub point_index: usize,
    pub multiplicity: usize,
    pub alpha: String,
    pub fiber_length: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricCertificateJson {
    pub z: Vec<String>,
    pub slack: String,
    pub alphas: Vec<AlphaEntryJson>,
    pub cone_angles: Vec<String>,
}

impl MetricCertificate {
    pub fn to_json(&self) -> MetricCertificateJson {
        MetricCertificateJson {
            z: self.z.z.iter().map(format_rational).collect(),
            slack: format_rational(&self.slack),
            alphas: self
                .alphas
                .entries
                .iter()
                .map(|e| AlphaEntryJson {
                    point_index: e.point_index,
                    multiplicity: e.multiplicity,
                    alpha: format_rational(&e.alpha),
                    fiber_length: pi_multiple(&e.fiber_length),
                })
                .collect(),
            cone_angles: self.cone_angles.iter().map(pi_multiple).collect(),
        }
    }

    pub fn from_json(json: &MetricCertificateJson) -> Result<Self, MetricError> {
        Ok(MetricCertificate {
            z: WeightVector::new(
                json.z.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?,
            ),
            slack: parse_rat(&json.slack)?,
            alphas: AlphaReport {
                entries: json
                    .alphas
                    .iter()
                    .map(|e| {
                        Ok(AlphaEntry {
                            point_index: e.point_index,
                            multiplicity: e.multiplicity,
                            alpha: parse_rat(&e.alpha)?,
                            fiber_length: parse_pi_multiple(&e.fiber_length)?,
                        })
                    })
                    .collect::<Result<_, MetricError>>()?,
            },
            cone_angles: json
                .cone_angles
                .iter()
                .map(|s| parse_pi_multiple(s))
                .collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfeasibilityCertificateJson {
    /// "farkas" or "slack_bound".
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack_bound: Option<String>,
    /// Pairs [constraint id, multiplier].
    pub multipliers: Vec<[String; 2]>,
}

impl InfeasibilityCertificate {
    pub fn to_json(&self) -> InfeasibilityCertificateJson {
        InfeasibilityCertificateJson {
            kind: if self.slack_bound.is_some() {
                "slack_bound".into()
            } else {
                "farkas".into()
            },
            slack_bound: self.slack_bound.as_ref().map(format_rational),
            multipliers: self
                .multipliers
                .iter()
                .map(|(id, m)| [id.clone(), format_rational(m)])
                .collect(),
        }
    }

    pub fn from_json(json: &InfeasibilityCertificateJson) -> Result<Self, MetricError> {
        let slack_bound = match (json.kind.as_str(), &json.slack_bound) {
            ("farkas", None) => None,
            ("slack_bound", Some(s)) => Some(parse_rat(s)?),
            _ => {
                return Err(MetricError::BadJson(format!(
                    "kind {:?} inconsistent with slack_bound presence",
                    json.kind
                )))
            }
        };
        Ok(InfeasibilityCertificate {
            slack_bound,
            multipliers: json
                .multipliers
                .iter()
                .map(|[id, m]| Ok((id.clone(), parse_rat(m)?)))
                .collect::<Result<_, MetricError>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn inc_of(arr: &Arrangement) -> IncidenceData {
        incidence(arr)
    }

    fn uniform(arr: &Arrangement, num: i64, den: i64) -> WeightVector {
        WeightVector::uniform(arr.line_count(), rat(num, den))
    }

    #[test]
    fn triangle_b_matrix() {
        let arr = catalog::triangle();
        let b = build_b_matrix(&inc_of(&arr));
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { rat_int(-1) } else { rat_int(1) };
                assert_eq!(*b.entry(i, j), want);
            }
        }
    }

    #[test]
    fn ceva3_b_matrix() {
        let arr = catalog::ceva(3).unwrap();
        let b = build_b_matrix(&inc_of(&arr));
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == j { rat_int(3) } else { rat_int(0) };
                assert_eq!(*b.entry(i, j), want);
            }
        }
    }

    #[test]
    fn hesse_b_matrix() {
        let arr = catalog::exceptional("hesse").unwrap();
        let inc = inc_of(&arr);
        let b = build_b_matrix(&inc);
        // 3 quadruple points per line, and off-diagonal ones exactly at the
        // double-point pairs; recount both straight from the incidence data.
        for j in 0..12 {
            assert_eq!(*b.entry(j, j), rat_int(2));
        }
        let mut ones = 0;
        for i in 0..12 {
            for j in (i + 1)..12 {
                let at_double = inc.points.iter().any(|p| {
                    p.multiplicity() == 2 && p.line_indices == vec![i, j]
                });
                assert_eq!(*b.entry(i, j), rat_int(if at_double { 1 } else { 0 }));
                assert_eq!(b.entry(i, j), b.entry(j, i));
                ones += at_double as usize;
            }
        }
        assert_eq!(ones, 12); // one pair per double point
    }

    #[test]
    fn diagonal_counts_heavy_points_for_catalog() {
        for entry in catalog::list() {
            let arr = catalog::by_name(&entry.name).unwrap();
            let inc = inc_of(&arr);
            let b = build_b_matrix(&inc);
            for j in 0..arr.line_count() {
                let heavy = inc.per_line[j]
                    .iter()
                    .filter(|&&pi| inc.points[pi].multiplicity() >= 3)
                    .count() as i64;
                assert_eq!(*b.entry(j, j), rat_int(heavy - 1), "{} line {j}", entry.name);
            }
        }
    }

    #[test]
    fn ceva3_alphas_at_one_third() {
        let arr = catalog::ceva(3).unwrap();
        let report = alphas(&inc_of(&arr), &uniform(&arr, 1, 3)).unwrap();
        assert_eq!(report.entries.len(), 12);
        for e in &report.entries {
            assert_eq!(e.multiplicity, 3);
            assert_eq!(e.alpha, rat(1, 2));
            assert_eq!(e.fiber_length, rat_int(1));
        }
    }

    #[test]
    fn zero_weights_give_unit_alphas() {
        let arr = catalog::exceptional("klein").unwrap();
        let report = alphas(&inc_of(&arr), &uniform(&arr, 0, 1)).unwrap();
        assert!(!report.entries.is_empty());
        assert!(report.entries.iter().all(|e| e.alpha == rat_int(1)));
    }

    #[test]
    fn klein_alphas_at_one_seventh() {
        let arr = catalog::exceptional("klein").unwrap();
        let report = alphas(&inc_of(&arr), &uniform(&arr, 1, 7)).unwrap();
        for e in &report.entries {
            match e.multiplicity {
                3 => assert_eq!(e.alpha, rat(11, 14)),
                4 => assert_eq!(e.alpha, rat(5, 7)),
                m => panic!("unexpected multiplicity {m}"),
            }
        }
    }

    #[test]
    fn length_mismatch_is_reported() {
        let arr = catalog::triangle();
        let bad = WeightVector::new(vec![rat_int(1); 2]);
        assert_eq!(
            alphas(&inc_of(&arr), &bad).unwrap_err(),
            MetricError::LengthMismatch { expect: 3, got: 2 }
        );
        assert!(check_weights(&arr, &bad).is_err());
        assert!(quadratic_residual(&inc_of(&arr), &bad).is_err());
    }

    #[test]
    fn ceva_uniform_weights_pass() {
        for m in 2..=5 {
            let arr = catalog::ceva(m).unwrap();
            let report = check_weights(&arr, &uniform(&arr, 1, m as i64)).unwrap();
            assert!(report.pass, "ceva({m}): {report:?}");
        }
    }

    #[test]
    fn triangle_unit_weights_fail_range_only() {
        let arr = catalog::triangle();
        let report = check_weights(&arr, &uniform(&arr, 1, 1)).unwrap();
        assert!(report.rows_ok && report.total_ok);
        assert!(!report.range_ok);
        assert!(!report.pass);
        assert_eq!(report.range_margin, rat_int(0));
    }

    #[test]
    fn ceva3_half_weights_fail_rows() {
        let arr = catalog::ceva(3).unwrap();
        let report = check_weights(&arr, &uniform(&arr, 1, 2)).unwrap();
        assert!(!report.rows_ok);
        assert!(report.row_residuals.iter().all(|r| *r == rat(1, 2)));
        assert!(!report.pass);
    }

    #[test]
    fn quadratic_residual_examples() {
        let tri = catalog::triangle();
        assert_eq!(
            quadratic_residual(&inc_of(&tri), &uniform(&tri, 1, 1)).unwrap(),
            rat(3, 2)
        );
        let c3 = catalog::ceva(3).unwrap();
        assert_eq!(
            quadratic_residual(&inc_of(&c3), &uniform(&c3, 1, 3)).unwrap(),
            rat(-3, 2)
        );
        let c2 = catalog::ceva(2).unwrap();
        assert_eq!(
            quadratic_residual(&inc_of(&c2), &uniform(&c2, 0, 1)).unwrap(),
            rat(-3, 2)
        );
    }

    #[test]
    fn quadratic_residual_matches_direct_summation() {
        // independent oracle: expand the defining sums with no shared code
        let arr = catalog::ceva(4).unwrap();
        let inc = inc_of(&arr);
        let z = uniform(&arr, 1, 4);
        let mut want = Rational::zero();
        for p in &inc.points {
            if p.multiplicity() < 3 {
                continue;
            }
            let s: Rational = p.line_indices.iter().map(|&k| z.z[k].clone()).sum();
            let d = rat_int(1) - rat(1, 2) * s - rat_int(1);
            want = want + &d * &d;
        }
        for j in 0..arr.line_count() {
            let heavy = inc.per_line[j]
                .iter()
                .filter(|&&pi| inc.points[pi].multiplicity() >= 3)
                .count() as i64;
            want = want - &z.z[j] * &z.z[j] * rat_int(heavy - 1);
        }
        want = want - rat(3, 2);
        assert_eq!(quadratic_residual(&inc, &z).unwrap(), want);
    }

    #[test]
    fn solver_and_checker_share_rows() {
        let arr = catalog::ceva(3).unwrap();
        let inc = inc_of(&arr);
        let b = build_b_matrix(&inc);
        let sys = constraint_system(&inc, &b);
        let rows = gauss_bonnet_rows(&b);
        assert_eq!(sys.eq.len(), rows.len() + 1);
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(sys.eq[j].0, format!("row_{j}"));
            assert_eq!(&sys.eq[j].1[..row.len()], &row[..]);
            // independently rebuilt row: double-point partners plus diagonal
            for k in 0..arr.line_count() {
                let want = if k == j {
                    b.entry(j, j).clone()
                } else {
                    let double = inc.points.iter().any(|p| {
                        p.multiplicity() == 2
                            && p.line_indices.contains(&j)
                            && p.line_indices.contains(&k)
                    });
                    rat_int(double as i64)
                };
                assert_eq!(row[k], want);
            }
        }
    }

    #[test]
    fn ceva3_is_feasible() {
        let arr = catalog::ceva(3).unwrap();
        let SolveResult::Feasible(cert) = solve_weights(&arr) else {
            panic!("ceva(3) must be feasible");
        };
        // the equalities force z = 1/3; slack = min(z, 1-z, alpha) = 1/3
        assert_eq!(cert.z.z, vec![rat(1, 3); 9]);
        assert_eq!(cert.slack, rat(1, 3));
        assert!(check_weights(&arr, &cert.z).unwrap().pass);
        assert!(verify_certificate(&arr, &SolveResult::Feasible(cert.clone())));
        assert_eq!(cert.cone_angles, vec![rat(4, 3); 9]);
    }

    #[test]
    fn ceva4_and_hesse_are_feasible() {
        for name in ["ceva4", "hesse"] {
            let arr = catalog::by_name(name).unwrap();
            let res = solve_weights(&arr);
            let SolveResult::Feasible(cert) = &res else {
                panic!("{name} must be feasible");
            };
            assert!(cert.slack.is_positive());
            assert!(check_weights(&arr, &cert.z).unwrap().pass);
            assert!(verify_certificate(&arr, &res));
        }
    }

    #[test]
    fn klein_is_feasible_with_forced_weights() {
        let arr = catalog::exceptional("klein").unwrap();
        let SolveResult::Feasible(cert) = solve_weights(&arr) else {
            panic!("klein must be feasible");
        };
        assert_eq!(cert.z.z, vec![rat(1, 7); 21]);
        assert_eq!(cert.slack, rat(1, 7));
        assert!(verify_certificate(&arr, &SolveResult::Feasible(cert)));
    }

    #[test]
    fn triangle_is_infeasible_with_slack_bound() {
        let arr = catalog::triangle();
        let res = solve_weights(&arr);
        let SolveResult::Infeasible(cert) = &res else {
            panic!("triangle must be infeasible");
        };
        // equalities force z = (1,1,1); the bound proves max slack <= 0
        assert_eq!(cert.slack_bound, Some(rat_int(0)));
        assert!(verify_certificate(&arr, &res));
    }

    #[test]
    fn four_generic_lines_are_infeasible() {
        let arr = catalog::generic_random(4, 7).unwrap();
        let res = solve_weights(&arr);
        let SolveResult::Infeasible(cert) = &res else {
            panic!("4 generic lines must be infeasible");
        };
        // equalities alone contradict: rows force z = 1, total says sum = 3
        assert_eq!(cert.slack_bound, None);
        assert!(verify_certificate(&arr, &res));
    }

    #[test]
    fn tiny_and_pencil_arrangements_are_handled() {
        for arr in [
            catalog::pencil(1).unwrap(),
            catalog::pencil(2).unwrap(),
            catalog::pencil(5).unwrap(),
        ] {
            let res = solve_weights(&arr);
            assert!(matches!(res, SolveResult::Infeasible(_)));
            assert!(verify_certificate(&arr, &res));
            assert!(matches!(
                aspherical_verdict(&arr).unwrap(),
                Verdict::NoCertificate(_)
            ));
        }
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let arr = catalog::ceva(3).unwrap();
        let SolveResult::Feasible(cert) = solve_weights(&arr) else {
            panic!()
        };
        let mut bad = cert.clone();
        bad.z.z[0] = &bad.z.z[0] + rat(1, 1000);
        assert!(!verify_certificate(&arr, &SolveResult::Feasible(bad)));
        let mut bad = cert.clone();
        bad.slack = &bad.slack + rat(1, 2);
        assert!(!verify_certificate(&arr, &SolveResult::Feasible(bad)));

        let tri = catalog::triangle();
        let SolveResult::Infeasible(icert) = solve_weights(&tri) else {
            panic!()
        };
        let mut bad = icert.clone();
        if let Some((_, m)) = bad.multipliers.first_mut() {
            *m = &*m + rat(1, 1000);
        }
        assert!(!verify_certificate(&tri, &SolveResult::Infeasible(bad)));
        let mut bad = icert;
        bad.multipliers.push(("no_such_row".into(), rat_int(1)));
        assert!(!verify_certificate(&tri, &SolveResult::Infeasible(bad)));
    }

    #[test]
    fn verdicts() {
        let c4 = catalog::ceva(4).unwrap();
        assert!(matches!(
            aspherical_verdict(&c4).unwrap(),
            Verdict::Aspherical(AsphericalReason::Lp(_))
        ));
        let tri = catalog::triangle();
        assert!(matches!(
            aspherical_verdict(&tri).unwrap(),
            Verdict::Aspherical(AsphericalReason::TriangleSpecialCase)
        ));
        let g4 = catalog::generic_random(4, 7).unwrap();
        assert!(matches!(
            aspherical_verdict(&g4).unwrap(),
            Verdict::NoCertificate(_)
        ));
    }

    #[test]
    fn scaling_lines_changes_nothing() {
        use crate::arrangement::ProjLine;
        use crate::cyclo::CycloElement;
        let arr = catalog::ceva(3).unwrap();
        let scaled_lines: Vec<ProjLine> = arr
            .lines()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let s = CycloElement::zeta_pow(3, (i % 3) as u32)
                    .scale(&rat(i as i64 % 5 + 1, 3));
                ProjLine::new([
                    l.coeffs[0].try_mul(&s).unwrap(),
                    l.coeffs[1].try_mul(&s).unwrap(),
                    l.coeffs[2].try_mul(&s).unwrap(),
                ])
            })
            .collect();
        let scaled = Arrangement::new(3, scaled_lines, None).unwrap();
        assert_eq!(
            build_b_matrix(&inc_of(&arr)),
            build_b_matrix(&inc_of(&scaled))
        );
        assert_eq!(solve_weights(&arr), solve_weights(&scaled));
    }

    #[test]
    fn solver_is_deterministic() {
        let arr = catalog::ceva(4).unwrap();
        assert_eq!(solve_weights(&arr), solve_weights(&arr));
    }

    #[test]
    fn certificate_json_round_trips() {
        let arr = catalog::ceva(3).unwrap();
        let SolveResult::Feasible(cert) = solve_weights(&arr) else {
            panic!()
        };
        let json = cert.to_json();
        assert!(json.z.iter().all(|s| s == "1/3"));
        assert_eq!(json.cone_angles[0], "4/3 pi");
        assert_eq!(json.alphas[0].fiber_length, "1 pi");
        let text = serde_json::to_string(&json).unwrap();
        let parsed: MetricCertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(MetricCertificate::from_json(&parsed).unwrap(), cert);

        let tri = catalog::triangle();
        let SolveResult::Infeasible(icert) = solve_weights(&tri) else {
            panic!()
        };
        let json = icert.to_json();
        assert_eq!(json.kind, "slack_bound");
        let text = serde_json::to_string(&json).unwrap();
        let parsed: InfeasibilityCertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(InfeasibilityCertificate::from_json(&parsed).unwrap(), icert);
    }
}
