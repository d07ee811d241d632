//! Deciding between near pencil, Ã₂ and Ã₂⁰ from a finite window.
//!
//! A verdict only states that the window is consistent with the class: a
//! finite truncation can refute membership but never prove it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arrangement::{
    self, near_pencil_in, report_for_cells, to_chart, Arrangement, Cell, CellKind, Chart, CoxeterDiagram,
    NearPencilWitness, SimplicialReport, Vertex, Window,
};
use crate::curves::{Conic, ConicKind, Cubic, CubicFactorType, CubicFit, LineConicMeet};
use crate::error::{Error, Result};
use crate::families::order_on_conic;
use crate::linalg;
use crate::proj::{four_point_map, HLine, HPoint, Projectivity};

/// Smallest arrangement the curve-based steps look at.
pub const MIN_LINES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unsupported {
    SmallInstance { lines: usize },
    NotSimplicial { violations: usize },
    FitUnderdetermined { dimension: usize },
    NoCubic,
    NonConcurrentLines,
    WeightNotThree { vertex: HPoint, weight: usize },
    SecantConic,
    DisjointConic,
    TangentAwayFromBoundary { point: HPoint },
    StrayWeightTwoVertex { vertex: HPoint },
    IrrationalLinePair { kind: ConicKind },
    NoRationalLinearFactor,
}

impl Unsupported {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Self::SmallInstance { .. } => "small-instance",
            Self::NotSimplicial { .. } => "not-simplicial",
            Self::FitUnderdetermined { .. } => "fit-underdetermined",
            Self::NoCubic => "no-cubic",
            Self::NonConcurrentLines => "non-concurrent-lines",
            Self::WeightNotThree { .. } => "weight-not-three",
            Self::SecantConic => "secant-conic",
            Self::DisjointConic => "disjoint-conic",
            Self::TangentAwayFromBoundary { .. } => "tangent-away-from-boundary",
            Self::StrayWeightTwoVertex { .. } => "stray-weight-two-vertex",
            Self::IrrationalLinePair { .. } => "irrational-line-pair",
            Self::NoRationalLinearFactor => "no-rational-linear-factor",
        }
    }
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SmallInstance { lines } => write!(f, "only {lines} lines, need at least {MIN_LINES}"),
            Self::NotSimplicial { violations } => write!(f, "{violations} interior cells are not triangles"),
            Self::FitUnderdetermined { dimension } => write!(f, "cubic fit has a {dimension}-dimensional solution space"),
            Self::NoCubic => write!(f, "dual points lie on no cubic"),
            Self::NonConcurrentLines => write!(f, "dual points lie on three non-concurrent lines"),
            Self::WeightNotThree { vertex, weight } => write!(f, "vertex {vertex} has weight {weight}, expected 3"),
            Self::SecantConic => write!(f, "line component meets the conic in two points"),
            Self::DisjointConic => write!(f, "line component misses the conic"),
            Self::TangentAwayFromBoundary { point } => write!(f, "tangency point {point} is not the boundary's dual point"),
            Self::StrayWeightTwoVertex { vertex } => write!(f, "weight-two vertex {vertex} is on no pencil line"),
            Self::IrrationalLinePair { kind } => write!(f, "cofactor conic is a {kind:?} without rational lines"),
            Self::NoRationalLinearFactor => write!(f, "cubic has no linear factor among the candidate lines"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    NearPencil,
    AffineA2,
    AffineA2Zero,
    Unsupported(Unsupported),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NearPencil => "NearPencil",
            Self::AffineA2 => "AffineA2",
            Self::AffineA2Zero => "AffineA2Zero",
            Self::Unsupported(_) => "Unsupported",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub cubic: Option<Cubic>,
    pub factor: Option<CubicFactorType>,
    pub simplicial: SimplicialReport,
    pub near_pencil: Option<NearPencilWitness>,
    pub reducible_chamber: Option<CoxeterDiagram>,
    pub normalizer: Option<Projectivity>,
}

/// Lines spanned by two dual points and containing at least four of them.
pub fn candidate_lines(points: &[HPoint]) -> Vec<HLine> {
    let mut spans = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if let Ok(l) = points[i].join(&points[j]) {
                spans.insert(l);
            }
        }
    }
    spans.into_iter().filter(|l| points.iter().filter(|p| l.contains(p)).count() >= 4).collect()
}

fn unsupported(reason: Unsupported) -> Verdict {
    Verdict::Unsupported(reason)
}

pub fn classify(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<Classification> {
    let vertices = arrangement::vertices_in_window(arr, chart, window)?;
    let cells = arrangement::cells_in_window(arr, chart, window)?;
    let lines = to_chart(arr, chart)?;
    let simplicial = report_for_cells(arr, chart, &lines, &cells);
    let mut out = Classification {
        verdict: unsupported(Unsupported::NoCubic),
        cubic: None,
        factor: None,
        simplicial: simplicial.clone(),
        near_pencil: None,
        reducible_chamber: None,
        normalizer: None,
    };
    if !simplicial.is_simplicial() {
        out.verdict = unsupported(Unsupported::NotSimplicial { violations: simplicial.violations.len() });
        return Ok(out);
    }

    out.near_pencil = near_pencil_in(&vertices, &lines);
    out.reducible_chamber = first_reducible(arr, &cells)?;
    if out.near_pencil.is_some() || out.reducible_chamber.is_some() {
        out.verdict = Verdict::NearPencil;
        return Ok(out);
    }
    if arr.len() < MIN_LINES {
        out.verdict = unsupported(Unsupported::SmallInstance { lines: arr.len() });
        return Ok(out);
    }

    let duals = arr.dual_points();
    let cubic = match Cubic::fit(&duals)? {
        CubicFit::Unique(c) => c,
        CubicFit::Underdetermined(dimension) => {
            out.verdict = unsupported(Unsupported::FitUnderdetermined { dimension });
            return Ok(out);
        }
        CubicFit::NoCubic => return Ok(out),
    };
    let factor = cubic.factor_type(&candidate_lines(&duals));
    out.cubic = Some(cubic);
    out.factor = Some(factor.clone());
    out.verdict = match factor {
        CubicFactorType::ThreeLines { concurrent: false, .. } => unsupported(Unsupported::NonConcurrentLines),
        CubicFactorType::ThreeLines { .. } => match vertices.iter().find(|v| !v.on_boundary && v.weight != 3) {
            Some(v) => unsupported(Unsupported::WeightNotThree { vertex: v.point.clone(), weight: v.weight }),
            None => Verdict::AffineA2,
        },
        CubicFactorType::ConicPlusLine { relation, line, .. } => match relation {
            LineConicMeet::Disjoint => unsupported(Unsupported::DisjointConic),
            LineConicMeet::Secant(_) => unsupported(Unsupported::SecantConic),
            LineConicMeet::Tangent(point) if point != arr.boundary().dual() => {
                unsupported(Unsupported::TangentAwayFromBoundary { point })
            }
            LineConicMeet::Tangent(_) => {
                let apex = line.dual();
                match stray_weight_two(arr, &vertices, &apex) {
                    Some(v) => unsupported(Unsupported::StrayWeightTwoVertex { vertex: v.point.clone() }),
                    None => Verdict::AffineA2Zero,
                }
            }
        },
        CubicFactorType::LineTimesIrrationalPair { kind, .. } => unsupported(Unsupported::IrrationalLinePair { kind }),
        CubicFactorType::NoRationalLinearFactor => unsupported(Unsupported::NoRationalLinearFactor),
    };
    if out.verdict == Verdict::AffineA2Zero {
        out.normalizer = recognize_a2tilde0(arr).ok();
    }
    Ok(out)
}

fn first_reducible(arr: &Arrangement, cells: &[Cell]) -> Result<Option<CoxeterDiagram>> {
    for cell in cells.iter().filter(|c| c.kind == CellKind::Interior) {
        let d = arrangement::coxeter_diagram(arr, cell)?;
        if !d.is_irreducible() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// A weight-two window vertex on no line through the pencil apex.
fn stray_weight_two<'a>(arr: &Arrangement, vertices: &'a [Vertex], apex: &HPoint) -> Option<&'a Vertex> {
    vertices
        .iter()
        .filter(|v| v.weight == 2)
        .find(|v| !v.lines.iter().any(|&i| arr.lines()[i].contains(apex)))
}

fn canonical_conic_point(k: i64) -> HPoint {
    HPoint::new(BigInt::from(k), BigInt::from(k * (k - 1) / 2), 1).expect("nonzero")
}

fn tag_index(tag: &str) -> Option<i64> {
    tag.strip_prefix("conic:k=")?.parse().ok()
}

/// The projectivity carrying an arrangement of type Ã₂⁰ onto the model
/// family `kX + k(k-1)/2 Y + Z`, `2X + kY`.
///
/// Conic-family lines are indexed by their `conic:k=K` tags when every one
/// carries such a tag; otherwise by their order on the dual conic, starting
/// at zero. The three lowest indices fix the map together with the
/// boundary's dual point.
pub fn recognize_a2tilde0(arr: &Arrangement) -> Result<Projectivity> {
    let fail = |msg: String| Error::NotA2TildeZero(msg);
    let duals = arr.dual_points();
    let cubic = match Cubic::fit(&duals) {
        Ok(CubicFit::Unique(c)) => c,
        other => return Err(fail(format!("cubic fit: {other:?}"))),
    };
    let (conic, line) = match cubic.factor_type(&candidate_lines(&duals)) {
        CubicFactorType::ConicPlusLine { relation: LineConicMeet::Tangent(t), conic, line } if t == arr.boundary().dual() => {
            (conic, line)
        }
        other => return Err(fail(format!("factor type {other:?}"))),
    };
    let bd = arr.boundary().dual();

    let on_conic: Vec<usize> = (0..duals.len()).filter(|&i| conic.contains(&duals[i])).collect();
    let tagged: Option<BTreeMap<i64, HPoint>> = on_conic
        .iter()
        .map(|&i| tag_index(&arr.tags()[i]).map(|k| (k, duals[i].clone())))
        .collect();
    let indexed = match tagged {
        Some(m) if m.len() == on_conic.len() => m,
        _ => {
            let pts: Vec<HPoint> = on_conic.iter().map(|&i| duals[i].clone()).collect();
            let order = order_on_conic(&conic, &bd, &pts).map_err(|e| fail(e.to_string()))?;
            order.into_iter().enumerate().map(|(k, (p, _))| (k as i64, p)).collect()
        }
    };
    let k0 = *indexed.keys().next().ok_or_else(|| fail("no conic points".into()))?;
    let pick = |k: i64| indexed.get(&k).ok_or_else(|| fail(format!("no conic point with index {k}")));
    let from = [&bd, pick(k0)?, pick(k0 + 1)?, pick(k0 + 2)?];
    let targets = [HPoint::new(0, 1, 0)?, canonical_conic_point(k0), canonical_conic_point(k0 + 1), canonical_conic_point(k0 + 2)];
    let s = four_point_map(from, [&targets[0], &targets[1], &targets[2], &targets[3]]).map_err(|e| fail(e.to_string()))?;

    if s.apply_line(&line) != HLine::new(0, 0, 1)? {
        return Err(fail(format!("apex maps to {}", s.apply_line(&line).dual())));
    }
    for (k, p) in &indexed {
        let q = s.apply_point(p);
        if q != canonical_conic_point(*k) {
            return Err(fail(format!("conic point {k} maps to {q}")));
        }
    }
    for (i, p) in duals.iter().enumerate() {
        if on_conic.contains(&i) {
            continue;
        }
        let q = s.apply_point(p);
        let [a, b, c] = q.coords();
        let in_pencil = c.is_zero() && !a.is_zero() && (BigInt::from(2) * b % a).is_zero();
        if !in_pencil {
            return Err(fail(format!("dual point {p} maps to {q}, not a pencil point")));
        }
    }
    // Dual points move by S, so lines move by S and points by S^-T.
    let inv = linalg::inverse3(&s.rational_matrix()).expect("invertible");
    Projectivity::from_rational(&linalg::transpose3(&inv))
}

/// Which weight bound a curve of dual points implies.
#[derive(Debug, Clone)]
pub enum AuditCurve {
    /// All dual points on one irreducible conic.
    Conic(Conic),
    Cubic(CubicFactorType),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAudit {
    pub bound: usize,
    /// Vertices above the bound that the bound allows (the pencil apex).
    pub exempt: Vec<(HPoint, usize)>,
    /// Boundary vertices above the bound, reported without counting against it.
    pub informational: Vec<(HPoint, usize)>,
    pub violations: Vec<(HPoint, usize)>,
}

impl WeightAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn bezout_weight_audit(arr: &Arrangement, curve: &AuditCurve) -> WeightAudit {
    let vertices = arr.all_vertices();
    let (bound, apex) = match curve {
        AuditCurve::Conic(_) => (2, None),
        AuditCurve::Cubic(CubicFactorType::ConicPlusLine { line, .. }) => (3, Some(line.dual())),
        AuditCurve::Cubic(_) => (3, None),
    };
    let mut audit = WeightAudit { bound, exempt: Vec::new(), informational: Vec::new(), violations: Vec::new() };
    for (p, w) in vertices {
        if w <= bound {
            continue;
        }
        if apex.as_ref() == Some(&p) {
            audit.exempt.push((p, w));
        } else if matches!(curve, AuditCurve::Cubic(CubicFactorType::ThreeLines { .. })) && arr.boundary().contains(&p) {
            audit.informational.push((p, w));
        } else {
            audit.violations.push((p, w));
        }
    }
    audit
}

/// Index `k` of a pencil dual point `(1 : k/2 : 0)` of the model, if it is one.
pub fn model_pencil_index(p: &HPoint) -> Option<i64> {
    let [a, b, c] = p.coords();
    if !c.is_zero() || a.is_zero() {
        return None;
    }
    let two_b = BigInt::from(2) * b;
    (&two_b % a).is_zero().then(|| (two_b / a).to_i64()).flatten()
}
