//! Constructors for the named arrangements: the Ceva families, the five
//! exceptional reflection arrangements, and generators for tests.
//!
//! Exceptional arrangements are either built from closed-form coordinate
//! constructions (icosahedral, Hesse, G26) or shipped as embedded exact
//! coefficient tables (Klein, Valentiner). Every entry is validated against
//! its stored combinatorial signature by the test suite; any projectively
//! equivalent model would do, since all downstream predicates are projective
//! invariants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{
    hirzebruch_check, incidence, Arrangement, ArrangementError, ArrangementJson, ProjLine,
};
use crate::cyclo::CycloElement;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

fn el(m: u32, n: i64) -> CycloElement {
    CycloElement::from_int(m, n)
}

fn zeta_pow(m: u32, k: u32) -> CycloElement {
    CycloElement::zeta_pow(m, k)
}

/// The Ceva arrangement of 3m lines over Q(zeta_m):
/// x - zeta^k y, y - zeta^k z, z - zeta^k x for k = 0..m-1.
pub fn ceva(m: u32) -> Result<Arrangement, CatalogError> {
    if m < 2 {
        return Err(CatalogError::InvalidParameter(format!(
            "ceva requires m >= 2, got {m}"
        )));
    }
    let mut lines = Vec::with_capacity(3 * m as usize);
    for k in 0..m {
        let z = zeta_pow(m, k).neg();
        lines.push(ProjLine::new([el(m, 1), z.clone(), el(m, 0)]));
        lines.push(ProjLine::new([el(m, 0), el(m, 1), z.clone()]));
        lines.push(ProjLine::new([z, el(m, 0), el(m, 1)]));
    }
    Ok(Arrangement::new(m, lines, Some(format!("ceva{m}")))?)
}

/// Warning text for parameters outside the paper's labeled range.
pub fn ceva_warning(m: u32) -> Option<String> {
    (m == 2).then(|| {
        "ceva(2) is below the A_m^0 range m >= 3; included for double-point coverage".to_string()
    })
}

/// Ceva(m) plus the three coordinate lines (3m + 3 lines).
pub fn extended_ceva(m: u32) -> Result<Arrangement, CatalogError> {
    let base = ceva(m)?;
    let mut lines = base.lines().to_vec();
    lines.push(ProjLine::new([el(m, 1), el(m, 0), el(m, 0)]));
    lines.push(ProjLine::new([el(m, 0), el(m, 1), el(m, 0)]));
    lines.push(ProjLine::new([el(m, 0), el(m, 0), el(m, 1)]));
    Ok(Arrangement::new(
        m,
        lines,
        Some(format!("extended_ceva{m}")),
    )?)
}

/// The three coordinate lines.
pub fn triangle() -> Arrangement {
    Arrangement::new(
        1,
        vec![
            ProjLine::new([el(1, 1), el(1, 0), el(1, 0)]),
            ProjLine::new([el(1, 0), el(1, 1), el(1, 0)]),
            ProjLine::new([el(1, 0), el(1, 0), el(1, 1)]),
        ],
        Some("triangle".into()),
    )
    .expect("triangle is valid")
}

/// k distinct lines through [0:0:1].
pub fn pencil(k: u32) -> Result<Arrangement, CatalogError> {
    if k < 1 {
        return Err(CatalogError::InvalidParameter(
            "pencil requires k >= 1".into(),
        ));
    }
    let mut lines = vec![ProjLine::new([el(1, 0), el(1, 1), el(1, 0)])];
    for j in 0..k - 1 {
        lines.push(ProjLine::new([el(1, 1), el(1, j as i64), el(1, 0)]));
    }
    Ok(Arrangement::new(1, lines, Some(format!("pencil{k}")))?)
}

/// k lines with pseudo-random small integer coefficients, resampled until
/// every intersection point has multiplicity exactly 2. Deterministic per
/// seed.
pub fn generic_random(k: u32, seed: u64) -> Result<Arrangement, CatalogError> {
    if k < 1 {
        return Err(CatalogError::InvalidParameter(
            "generic_random requires k >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut lines = Vec::with_capacity(k as usize);
        for _ in 0..k {
            loop {
                let a = rng.gen_range(-9i64..=9);
                let b = rng.gen_range(-9i64..=9);
                let c = rng.gen_range(-9i64..=9);
                if a != 0 || b != 0 || c != 0 {
                    lines.push(ProjLine::new([el(1, a), el(1, b), el(1, c)]));
                    break;
                }
            }
        }
        let arr = match Arrangement::new(1, lines, Some(format!("generic{k}_seed{seed}"))) {
            Ok(a) => a,
            Err(_) => continue, // duplicate sample; try again
        };
        let inc = incidence(&arr);
        if inc.points.iter().all(|p| p.multiplicity() == 2) {
            return Ok(arr);
        }
    }
}

// Golden ratio tau = 1 + zeta_5 + zeta_5^4 in Q(zeta_5).
fn golden_ratio() -> CycloElement {
    el(5, 1)
        .try_add(&zeta_pow(5, 1))
        .unwrap()
        .try_add(&zeta_pow(5, 4))
        .unwrap()
}

/// The icosahedral (G23) arrangement: the 15 mirror lines of H3, with
/// normals e_i and all cyclic permutations of (1, +-tau^2, +-tau).
fn icosahedral() -> Arrangement {
    let tau = golden_ratio();
    let tau2 = tau.try_mul(&tau).unwrap();
    let mut normals: Vec<[CycloElement; 3]> = vec![
        [el(5, 1), el(5, 0), el(5, 0)],
        [el(5, 0), el(5, 1), el(5, 0)],
        [el(5, 0), el(5, 0), el(5, 1)],
    ];
    for &s2 in &[1i64, -1] {
        for &s3 in &[1i64, -1] {
            let a = el(5, 1);
            let b = if s2 > 0 { tau2.clone() } else { tau2.neg() };
            let c = if s3 > 0 { tau.clone() } else { tau.neg() };
            normals.push([a.clone(), b.clone(), c.clone()]);
            normals.push([c.clone(), a.clone(), b.clone()]);
            normals.push([b, c, a]);
        }
    }
    let lines = normals.into_iter().map(ProjLine::new).collect();
    Arrangement::new(5, lines, Some("icosahedral".into())).expect("icosahedral data is valid")
}

/// The Hesse arrangement (G25): the 12 lines through triples of the nine
/// inflection points of the Fermat cubic, over Q(zeta_3).
fn hesse_family() -> Arrangement {
    // Inflection points of x^3 + y^3 + z^3 = 0.
    let mut points: Vec<[CycloElement; 3]> = Vec::new();
    for a in 0..3 {
        let w = zeta_pow(3, a).neg();
        points.push([el(3, 0), el(3, 1), w.clone()]);
        points.push([w.clone(), el(3, 0), el(3, 1)]);
        points.push([el(3, 1), w, el(3, 0)]);
    }
    // Every pair of inflection points spans one of the 12 Hesse lines.
    let mut lines: Vec<ProjLine> = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let p = &points[i];
            let q = &points[j];
            let mul = |a: &CycloElement, b: &CycloElement| a.try_mul(b).unwrap();
            let line = ProjLine::new([
                mul(&p[1], &q[2]).try_sub(&mul(&p[2], &q[1])).unwrap(),
                mul(&p[2], &q[0]).try_sub(&mul(&p[0], &q[2])).unwrap(),
                mul(&p[0], &q[1]).try_sub(&mul(&p[1], &q[0])).unwrap(),
            ]);
            let canon = line.canonical();
            if !lines.iter().any(|l| l.canonical() == canon) {
                lines.push(line);
            }
        }
    }
    debug_assert_eq!(lines.len(), 12);
    Arrangement::new(3, lines, Some("hesse_family".into())).expect("hesse data is valid")
}

/// G26: the 12 Hesse lines together with the 9 lines of Ceva(3)
/// (21 lines over Q(zeta_3)).
fn g26() -> Arrangement {
    let mut lines = hesse_family().lines().to_vec();
    lines.extend(ceva(3).unwrap().lines().iter().cloned());
    Arrangement::new(3, lines, Some("g26".into())).expect("g26 data is valid")
}

fn from_table(name: &str, table: &str) -> Arrangement {
    let json: ArrangementJson =
        serde_json::from_str(table).expect("embedded catalog table parses");
    let mut arr = Arrangement::from_json(&json).expect("embedded catalog table is valid");
    if arr.name().is_none() {
        arr = Arrangement::new(
            arr.field_order(),
            arr.lines().to_vec(),
            Some(name.to_string()),
        )
        .expect("revalidation");
    }
    arr
}

/// The Klein (G24) arrangement: 21 lines over Q(zeta_7), shipped as an
/// exact coefficient table.
fn klein() -> Arrangement {
    from_table("klein", include_str!("catalog_data/klein.json"))
}

/// The Valentiner (G27) arrangement: 45 lines over Q(zeta_15), shipped as
/// an exact coefficient table.
fn valentiner() -> Arrangement {
    from_table("valentiner", include_str!("catalog_data/valentiner.json"))
}

/// Builds one of the five exceptional reflection arrangements by name.
pub fn exceptional(name: &str) -> Result<Arrangement, CatalogError> {
    match name.to_ascii_lowercase().as_str() {
        "icosahedral" | "g23" => Ok(icosahedral()),
        "klein" | "g24" => Ok(klein()),
        "hesse_family" | "hesse" | "g25" => Ok(hesse_family()),
        "g26" => Ok(g26()),
        "valentiner" | "g27" => Ok(valentiner()),
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

/// Stored combinatorial signature of a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub line_count: usize,
    /// (multiplicity, number of points) pairs, sorted by multiplicity.
    pub multiplicities: Vec<(usize, usize)>,
    pub hirzebruch_n: Option<usize>,
}

impl CatalogEntry {
    /// Rebuilds the arrangement and checks it reproduces the signature.
    pub fn verify(&self) -> Result<(), String> {
        let arr = by_name(&self.name).map_err(|e| e.to_string())?;
        if arr.line_count() != self.line_count {
            return Err(format!(
                "{}: line count {} != expected {}",
                self.name,
                arr.line_count(),
                self.line_count
            ));
        }
        let inc = incidence(&arr);
        let multiset = inc.multiplicity_multiset();
        if multiset != self.multiplicities {
            return Err(format!(
                "{}: multiplicities {:?} != expected {:?}",
                self.name, multiset, self.multiplicities
            ));
        }
        let h = hirzebruch_check(&arr, &inc);
        if h.n != self.hirzebruch_n {
            return Err(format!(
                "{}: hirzebruch {:?} != expected {:?}",
                self.name, h.n, self.hirzebruch_n
            ));
        }
        Ok(())
    }
}

fn entry(
    name: &str,
    description: &str,
    line_count: usize,
    multiplicities: &[(usize, usize)],
    hirzebruch_n: Option<usize>,
) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        description: description.to_string(),
        line_count,
        multiplicities: multiplicities.to_vec(),
        hirzebruch_n,
    }
}

/// The named entries with their expected signatures.
pub fn list() -> Vec<CatalogEntry> {
    let mut out = vec![entry("triangle", "three coordinate lines", 3, &[(2, 3)], Some(1))];
    out.push(entry(
        "ceva2",
        "A_2^0 (below the paper's m >= 3 range)",
        6,
        &[(2, 3), (3, 4)],
        Some(2),
    ));
    for m in 3..=8usize {
        let mults = if m == 3 {
            vec![(3, 12)] // coordinate points also have multiplicity 3
        } else {
            vec![(3, m * m), (m, 3)]
        };
        out.push(entry(
            &format!("ceva{m}"),
            "Ceva family A_m^0",
            3 * m,
            &mults,
            Some(m),
        ));
    }
    for m in 2..=4usize {
        out.push(entry(
            &format!("extended_ceva{m}"),
            "extended Ceva family A_m^3",
            3 * m + 3,
            &if m == 2 {
                vec![(2, 6), (3, 4), (4, 3)]
            } else {
                vec![(2, 3 * m), (3, m * m), (m + 2, 3)]
            },
            Some(m + 1),
        ));
    }
    out.push(entry(
        "icosahedral",
        "G23 reflection arrangement",
        15,
        &[(2, 15), (3, 10), (5, 6)],
        Some(5),
    ));
    out.push(entry(
        "klein",
        "G24 reflection arrangement",
        21,
        &[(3, 28), (4, 21)],
        Some(7),
    ));
    out.push(entry(
        "hesse_family",
        "G25 reflection arrangement",
        12,
        &[(2, 12), (4, 9)],
        Some(4),
    ));
    out.push(entry(
        "g26",
        "G26 reflection arrangement",
        21,
        &[(2, 36), (4, 9), (5, 12)],
        Some(7),
    ));
    out.push(entry(
        "valentiner",
        "G27 reflection arrangement",
        45,
        &[(3, 120), (4, 45), (5, 36)],
        Some(15),
    ));
    out
}

/// Resolves a catalog name: `triangle`, `ceva<m>`, `extended_ceva<m>`,
/// `pencil<k>`, or an exceptional-arrangement name.
pub fn by_name(name: &str) -> Result<Arrangement, CatalogError> {
    let lower = name.to_ascii_lowercase();
    if lower == "triangle" {
        return Ok(triangle());
    }
    if let Some(m) = lower.strip_prefix("extended_ceva") {
        let m: u32 = m
            .parse()
            .map_err(|_| CatalogError::UnknownName(name.to_string()))?;
        return extended_ceva(m);
    }
    if let Some(m) = lower.strip_prefix("ceva") {
        let m: u32 = m
            .parse()
            .map_err(|_| CatalogError::UnknownName(name.to_string()))?;
        return ceva(m);
    }
    if let Some(k) = lower.strip_prefix("pencil") {
        let k: u32 = k
            .parse()
            .map_err(|_| CatalogError::UnknownName(name.to_string()))?;
        return pencil(k);
    }
    exceptional(&lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{hirzebruch_check, incidence};

    #[test]
    fn ceva3_signature() {
        let arr = ceva(3).unwrap();
        assert_eq!(arr.line_count(), 9);
        let inc = incidence(&arr);
        assert_eq!(inc.multiplicity_multiset(), vec![(3, 12)]);
        let h = hirzebruch_check(&arr, &inc);
        assert_eq!(h.n, Some(3));
    }

    #[test]
    fn ceva4_signature() {
        let inc = incidence(&ceva(4).unwrap());
        assert_eq!(inc.multiplicity_multiset(), vec![(3, 16), (4, 3)]);
    }

    #[test]
    fn ceva2_has_double_points() {
        let inc = incidence(&ceva(2).unwrap());
        assert_eq!(inc.multiplicity_multiset(), vec![(2, 3), (3, 4)]);
        assert!(ceva_warning(2).is_some());
        assert!(ceva_warning(3).is_none());
    }

    #[test]
    fn ceva1_rejected() {
        assert!(matches!(ceva(1), Err(CatalogError::InvalidParameter(_))));
    }

    #[test]
    fn extended_ceva_counts() {
        assert_eq!(extended_ceva(2).unwrap().line_count(), 9);
        assert_eq!(extended_ceva(4).unwrap().line_count(), 15);
        let arr = extended_ceva(3).unwrap();
        assert_eq!(arr.line_count(), 12);
        let inc = incidence(&arr);
        let h = hirzebruch_check(&arr, &inc);
        assert_eq!(h.n, Some(4));
    }

    #[test]
    fn pencil_concentrates_multiplicity() {
        let inc = incidence(&pencil(4).unwrap());
        assert_eq!(inc.multiplicity_multiset(), vec![(4, 1)]);
    }

    #[test]
    fn generic_random_is_generic_and_deterministic() {
        let a = generic_random(5, 42).unwrap();
        let b = generic_random(5, 42).unwrap();
        assert_eq!(a, b);
        let inc = incidence(&a);
        assert_eq!(inc.multiplicity_multiset(), vec![(2, 10)]);
    }

    #[test]
    fn icosahedral_signature() {
        let arr = exceptional("icosahedral").unwrap();
        assert_eq!(arr.line_count(), 15);
        let inc = incidence(&arr);
        assert_eq!(inc.multiplicity_multiset(), vec![(2, 15), (3, 10), (5, 6)]);
        let h = hirzebruch_check(&arr, &inc);
        assert_eq!(h.n, Some(5));
    }

    #[test]
    fn hesse_signature() {
        let arr = exceptional("g25").unwrap();
        assert_eq!(arr.line_count(), 12);
        let inc = incidence(&arr);
        assert_eq!(inc.multiplicity_multiset(), vec![(2, 12), (4, 9)]);
        assert_eq!(hirzebruch_check(&arr, &inc).n, Some(4));
    }

    #[test]
    fn g26_signature() {
        let arr = exceptional("g26").unwrap();
        assert_eq!(arr.line_count(), 21);
        let inc = incidence(&arr);
        assert_eq!(inc.multiplicity_multiset(), vec![(2, 36), (4, 9), (5, 12)]);
        assert_eq!(hirzebruch_check(&arr, &inc).n, Some(7));
    }

    #[test]
    fn klein_signature() {
        let arr = exceptional("klein").unwrap();
        assert_eq!(arr.line_count(), 21);
        assert_eq!(arr.field_order(), 7);
        let inc = incidence(&arr);
        assert_eq!(inc.multiplicity_multiset(), vec![(3, 28), (4, 21)]);
        let h = hirzebruch_check(&arr, &inc);
        assert_eq!(h.n, Some(7));
        assert!(h.per_line_point_counts.iter().all(|&c| c == 8));
    }

    #[test]
    fn valentiner_signature() {
        let arr = exceptional("valentiner").unwrap();
        assert_eq!(arr.line_count(), 45);
        assert_eq!(arr.field_order(), 15);
        let inc = incidence(&arr);
        assert_eq!(
            inc.multiplicity_multiset(),
            vec![(3, 120), (4, 45), (5, 36)]
        );
        assert_eq!(hirzebruch_check(&arr, &inc).n, Some(15));
    }

    #[test]
    fn catalog_entries_reproduce_signatures() {
        for e in list() {
            e.verify().unwrap();
        }
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(
            exceptional("g99"),
            Err(CatalogError::UnknownName(_))
        ));
        assert!(by_name("cevaX").is_err());
    }
}
