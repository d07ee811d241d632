//! Generators for near pencils and the two affine families, the four-point
//! recurrence on a conic, and cyclic order of points on a conic.
//!
//! The affine family of type Ã₂⁰ has dual points `(k : k(k-1)/2 : 1)` on the
//! conic `X² - XZ - 2YZ` and `(1 : k/2 : 0)` on its tangent line `Z = 0`.
//! In the primal plane the first set are the tangent lines
//! `kX + k(k-1)/2 Y + Z` of the conic `4X² - 4XY + Y² - 8YZ`, the second the
//! pencil `2X + kY` through `(0:0:1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arrangement::{Arrangement, Window};
use crate::curves::{Conic, LineConicMeet};
use crate::error::{Error, Result};
use crate::linalg::{self, Rational};
use crate::proj::{collinear, HLine, HPoint, Projectivity};

/// Four consecutive dual points on a conic with the dual point of the pencil
/// line and of the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedQuadruple {
    points: [HPoint; 4],
    apex: HPoint,
    boundary_dual: HPoint,
    conic: Conic,
}

fn seed_err(e: Error) -> Error {
    match e {
        Error::DegenerateSeed(_) => e,
        other => Error::DegenerateSeed(other.to_string()),
    }
}

impl SeedQuadruple {
    pub fn new(points: [HPoint; 4], apex: HPoint, boundary_dual: HPoint) -> Result<Self> {
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if collinear(&points[i], &points[j], &points[k]) {
                return Err(Error::DegenerateSeed(format!("points {i}, {j}, {k} are collinear")));
            }
        }
        let l = apex.dual();
        if let Some(p) = points.iter().find(|p| l.contains(p)) {
            return Err(Error::DegenerateSeed(format!("seed point {p} lies on the dual line of the apex")));
        }
        let five = [boundary_dual.clone(), points[0].clone(), points[1].clone(), points[2].clone(), points[3].clone()];
        let conic = Conic::through_five(&five).map_err(seed_err)?;
        if !conic.is_nondegenerate() {
            return Err(Error::DegenerateSeed(format!("conic {conic} is degenerate")));
        }
        let tangent = conic.tangent_line(&boundary_dual).map_err(seed_err)?;
        if tangent != apex.dual() {
            return Err(Error::DegenerateSeed(format!("tangent {tangent} at {boundary_dual} is not the dual of {apex}")));
        }
        Ok(Self { points, apex, boundary_dual, conic })
    }

    /// Seed from four points and the apex alone. The boundary dual point is
    /// recovered as the tangency point of the apex's dual line with the conic
    /// through `p0..p4`.
    pub fn from_points_and_apex(points: [HPoint; 4], apex: HPoint) -> Result<Self> {
        let p4 = forward_point(&points, &apex)?;
        let five = [points[0].clone(), points[1].clone(), points[2].clone(), points[3].clone(), p4];
        let conic = Conic::through_five(&five).map_err(seed_err)?;
        match conic.line_intersection(&apex.dual()).map_err(seed_err)? {
            LineConicMeet::Tangent(bd) => Self::new(points, apex, bd),
            other => Err(Error::DegenerateSeed(format!("dual line of the apex is not tangent: {other:?}"))),
        }
    }

    /// `(0:0:1), (1:0:1), (2:1:1), (3:3:1)` with apex `(0:0:1)` and boundary
    /// dual `(0:1:0)`.
    pub fn canonical() -> Self {
        let p = |x: i64, y: i64, z: i64| HPoint::new(x, y, z).expect("nonzero");
        Self::new([p(0, 0, 1), p(1, 0, 1), p(2, 1, 1), p(3, 3, 1)], p(0, 0, 1), p(0, 1, 0)).expect("canonical seed")
    }

    pub fn points(&self) -> &[HPoint; 4] {
        &self.points
    }

    pub fn apex(&self) -> &HPoint {
        &self.apex
    }

    pub fn boundary_dual(&self) -> &HPoint {
        &self.boundary_dual
    }

    /// The conic through the boundary dual point and the four seed points.
    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    /// Moves the points by `t`. The apex only enters through its dual line,
    /// so it moves with the line.
    pub fn transformed(&self, t: &Projectivity) -> Result<Self> {
        let apex = t.apply_line(&self.apex.dual()).dual();
        Self::new(self.points.clone().map(|p| t.apply_point(&p)), apex, t.apply_point(&self.boundary_dual))
    }

    /// `(p1, p2, p3, p4)`.
    pub fn shifted_forward(&self) -> Result<Self> {
        let p4 = lemma5_forward(self)?;
        let [_, a, b, c] = self.points.clone();
        Self::new([a, b, c, p4], self.apex.clone(), self.boundary_dual.clone())
    }

    /// `(p-1, p0, p1, p2)`.
    pub fn shifted_backward(&self) -> Result<Self> {
        let pm = lemma5_backward(self)?;
        let [a, b, c, _] = self.points.clone();
        Self::new([pm, a, b, c], self.apex.clone(), self.boundary_dual.clone())
    }
}

fn forward_point(p: &[HPoint; 4], apex: &HPoint) -> Result<HPoint> {
    let l = apex.dual();
    let step = || -> Result<HPoint> {
        let a = p[0].join(&l.meet(&p[1].join(&p[3])?)?)?;
        let b = p[1].join(&l.meet(&p[2].join(&p[3])?)?)?;
        a.meet(&b)
    };
    step().map_err(seed_err)
}

fn backward_point(p: &[HPoint; 4], apex: &HPoint) -> Result<HPoint> {
    let l = apex.dual();
    let step = || -> Result<HPoint> {
        let a = p[2].join(&l.meet(&p[0].join(&p[1])?)?)?;
        let b = p[3].join(&l.meet(&p[0].join(&p[2])?)?)?;
        a.meet(&b)
    };
    step().map_err(seed_err)
}

/// The next point `p4` after `p0..p3`.
pub fn lemma5_forward(s: &SeedQuadruple) -> Result<HPoint> {
    let p4 = forward_point(&s.points, &s.apex)?;
    if !s.conic.contains(&p4) {
        return Err(Error::NotOnCurve(p4.to_string()));
    }
    Ok(p4)
}

/// The point `p-1` before `p0..p3`.
pub fn lemma5_backward(s: &SeedQuadruple) -> Result<HPoint> {
    let pm = backward_point(&s.points, &s.apex)?;
    if !s.conic.contains(&pm) {
        return Err(Error::NotOnCurve(pm.to_string()));
    }
    Ok(pm)
}

/// Dual points `p_k` for `k` in `[k_min, k_max]`, with the seed points at
/// `k = 0..3`.
pub fn lemma5_points(s: &SeedQuadruple, k_min: i64, k_max: i64) -> Result<BTreeMap<i64, HPoint>> {
    let mut out: BTreeMap<i64, HPoint> = (0..4).map(|i| (i, s.points[i as usize].clone())).collect();
    let mut fwd = s.clone();
    for k in 4..=k_max {
        let p = lemma5_forward(&fwd)?;
        out.insert(k, p);
        fwd = fwd.shifted_forward()?;
    }
    let mut back = s.clone();
    for k in (k_min..0).rev() {
        let p = lemma5_backward(&back)?;
        out.insert(k, p);
        back = back.shifted_backward()?;
    }
    out.retain(|k, _| (k_min..=k_max).contains(k));
    Ok(out)
}

fn check_range(k_min: i64, k_max: i64) -> Result<()> {
    if k_min >= k_max {
        return Err(Error::InvalidRange(k_min, k_max));
    }
    Ok(())
}

/// Primal line of the conic family with index `k`.
pub fn a2tilde0_conic_line(k: i64) -> HLine {
    HLine::new(BigInt::from(k), BigInt::from(k * (k - 1) / 2), 1).expect("nonzero")
}

/// Primal line of the pencil family with index `k`.
pub fn a2tilde0_pencil_line(k: i64) -> HLine {
    HLine::new(2, k, 0).expect("nonzero")
}

/// Both families for `k` in `[k_min, k_max]`, conic family first, boundary `Y = 0`.
pub fn gen_a2tilde0(k_min: i64, k_max: i64) -> Result<Arrangement> {
    check_range(k_min, k_max)?;
    let mut lines = Vec::new();
    let mut tags = Vec::new();
    for k in k_min..=k_max {
        lines.push(a2tilde0_conic_line(k));
        tags.push(format!("conic:k={k}"));
    }
    for k in k_min..=k_max {
        lines.push(a2tilde0_pencil_line(k));
        tags.push(format!("pencil:k={k}"));
    }
    Arrangement::with_tags(lines, HLine::new(0, 1, 0)?, tags)
}

/// Integer ranges of the two Ã₂⁰ families whose lines meet a window of the
/// boundary-at-infinity chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteRange {
    pub pencil: Option<(i64, i64)>,
    pub conic: Option<(i64, i64)>,
    /// Smallest range containing both, widened to at least two values.
    pub hull: (i64, i64),
}

fn floor_i64(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("window bound fits in i64")
}

fn ceil_i64(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("window bound fits in i64")
}

/// Height of the conic-family line `k` at `u` in the chart `(u : 1 : w)`.
fn tangent_height(k: i64, u: &Rational) -> Rational {
    let k = linalg::rat(k);
    -(&k * u) - &k * (&k - linalg::rat(1)) / linalg::rat(2)
}

pub fn window_complete_range(window: &Window) -> CompleteRange {
    let two = linalg::rat(2);
    let lo = ceil_i64(&(-&two * &window.u_max));
    let hi = floor_i64(&(-&two * &window.u_min));
    let pencil = (lo <= hi).then_some((lo, hi));

    // The superlevel set {k : w(k, u) >= w_min} is contained in
    // |k| <= |1 - 2u| + sqrt(8 |w_min|) + 1, so scanning that range is exact.
    let slope = |u: &Rational| (linalg::rat(1) - &two * u).abs();
    let spread = slope(&window.u_min).max(slope(&window.u_max));
    let depth = (linalg::rat(8) * window.w_min.abs()).ceil().to_integer();
    let bound = ceil_i64(&spread) + depth.sqrt().to_i64().expect("fits") + 2;
    let meets = |k: i64| {
        let a = tangent_height(k, &window.u_min);
        let b = tangent_height(k, &window.u_max);
        let (top, bottom) = if a >= b { (a, b) } else { (b, a) };
        top >= window.w_min && bottom <= window.w_max
    };
    let hits: Vec<i64> = (-bound..=bound).filter(|&k| meets(k)).collect();
    let conic = hits.first().map(|&a| (a, *hits.last().expect("nonempty")));

    let ends: Vec<i64> = pencil.iter().chain(conic.iter()).flat_map(|&(a, b)| [a, b]).collect();
    let (mut a, mut b) = match (ends.iter().min(), ends.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 1),
    };
    if a == b {
        b += 1;
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    CompleteRange { pencil, conic, hull: (a, b) }
}

/// Window-complete truncation of the Ã₂⁰ family.
pub fn gen_a2tilde0_for_window(window: &Window) -> Result<Arrangement> {
    let (a, b) = window_complete_range(window).hull;
    gen_a2tilde0(a, b)
}

/// Lines `x = k`, `y = k`, `x + y = k` in the chart `Z = 1`, boundary `Z = 0`.
pub fn gen_affine_a2(k_min: i64, k_max: i64) -> Result<Arrangement> {
    check_range(k_min, k_max)?;
    let mut lines = Vec::new();
    let mut tags = Vec::new();
    for (name, a, b) in [("x", 1, 0), ("y", 0, 1), ("xy", 1, 1)] {
        for k in k_min..=k_max {
            lines.push(HLine::new(a, b, -k)?);
            tags.push(format!("{name}:k={k}"));
        }
    }
    Arrangement::with_tags(lines, HLine::new(0, 0, 1)?, tags)
}

/// `n - 1` lines through `(0:0:1)` plus `Z = 0`.
///
/// The pencil is `Y` and `X - kY` for `k = 0..n-3`. The boundary
/// `X + Y + Z` misses every vertex: it takes the values `1` at `(0:0:1)` and
/// at `(1:0:0)`, and `k + 1` at `(k:1:0)`.
pub fn gen_near_pencil(n: usize) -> Result<Arrangement> {
    if n < 3 {
        return Err(Error::InsufficientLines(n));
    }
    let mut lines = vec![HLine::new(0, 1, 0)?];
    let mut tags = vec!["pencil:y".to_string()];
    for k in 0..(n as i64 - 2) {
        lines.push(HLine::new(1, -k, 0)?);
        tags.push(format!("pencil:k={k}"));
    }
    lines.push(HLine::new(0, 0, 1)?);
    tags.push("transversal".to_string());
    Arrangement::with_tags(lines, HLine::new(1, 1, 1)?, tags)
}

/// Ã₂⁰-type arrangement grown from an arbitrary seed by the recurrence.
///
/// Pencil dual point `k` is the meet of the apex's dual line with the chord
/// `p_a p_b`, `a = floor(k/2)`, `b = k + 1 - a`. For the canonical seed this
/// reproduces [`gen_a2tilde0`] line for line.
pub fn gen_lemma5(seed: &SeedQuadruple, k_min: i64, k_max: i64) -> Result<Arrangement> {
    check_range(k_min, k_max)?;
    let chord = |k: i64| {
        let a = k.div_euclid(2);
        (a, k + 1 - a)
    };
    let lo = k_min.min(chord(k_min).0);
    let hi = k_max.max(chord(k_max).1);
    let pts = lemma5_points(seed, lo, hi)?;
    let l = seed.apex().dual();
    let mut lines = Vec::new();
    let mut tags = Vec::new();
    for k in k_min..=k_max {
        lines.push(pts[&k].dual());
        tags.push(format!("conic:k={k}"));
    }
    for k in k_min..=k_max {
        let (a, b) = chord(k);
        let q = l.meet(&pts[&a].join(&pts[&b])?)?;
        lines.push(q.dual());
        tags.push(format!("pencil:k={k}"));
    }
    Arrangement::with_tags(lines, seed.boundary_dual().dual(), tags)
}

/// Points of a conic sorted by their stereographic parameter from `base`,
/// with the point at parameter infinity last. Adjacent entries (cyclically)
/// are consecutive.
pub fn order_on_conic(conic: &Conic, base: &HPoint, points: &[HPoint]) -> Result<Vec<(HPoint, Option<Rational>)>> {
    let param = conic.parametrization(base)?;
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        out.push((p.clone(), param.parameter(p)?));
    }
    out.sort_by(|a, b| match (&a.1, &b.1) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateInput(format!("point {} appears twice", w[0].0)));
    }
    Ok(out)
}

/// Whether the point is `(k : k(k-1)/2 : 1)` for an integer `k`; returns `k`.
pub fn a2tilde0_conic_index(p: &HPoint) -> Option<i64> {
    let [x, y, z] = p.coords();
    if z != &BigInt::from(1) {
        return None;
    }
    let k = x.to_i64()?;
    (y == &BigInt::from(k * (k - 1) / 2)).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use crate::proj::{line, point};

    #[test]
    fn forward_from_canonical_seed() {
        let s = SeedQuadruple::canonical();
        assert_eq!(lemma5_forward(&s).unwrap(), point(4, 6, 1));
        assert_eq!(lemma5_forward(&s.shifted_forward().unwrap()).unwrap(), point(5, 10, 1));
        assert_eq!(lemma5_backward(&s).unwrap(), point(-1, 1, 1));
    }

    #[test]
    fn intermediate_values() {
        let (p1, p3, apex) = (point(1, 0, 1), point(3, 3, 1), point(0, 0, 1));
        let chord = p1.join(&p3).unwrap();
        assert_eq!(chord, line(3, -2, -3));
        let m = apex.dual().meet(&chord).unwrap();
        assert_eq!(m, point(2, 3, 0));
        assert_eq!(point(0, 0, 1).join(&m).unwrap(), line(3, -2, 0));
    }

    #[test]
    fn round_trip() {
        let s = SeedQuadruple::canonical().shifted_forward().unwrap();
        assert_eq!(lemma5_backward(&s).unwrap(), point(0, 0, 1));
    }

    #[test]
    fn degenerate_seeds() {
        let p = [point(0, 0, 1), point(1, 0, 1), point(2, 1, 1), point(1, 0, 1)];
        assert!(matches!(SeedQuadruple::new(p, point(0, 0, 1), point(0, 1, 0)), Err(Error::DegenerateSeed(_))));
        let p = [point(0, 0, 1), point(1, 0, 1), point(2, 1, 1), point(3, 3, 1)];
        assert!(matches!(SeedQuadruple::new(p.clone(), point(1, 0, 0), point(0, 1, 0)), Err(Error::DegenerateSeed(_))));
        assert!(matches!(SeedQuadruple::new(p, point(1, 1, 1), point(0, 1, 0)), Err(Error::DegenerateSeed(_))));
    }

    #[test]
    fn seed_from_apex() {
        let c = SeedQuadruple::canonical();
        let s = SeedQuadruple::from_points_and_apex(c.points().clone(), c.apex().clone()).unwrap();
        assert_eq!(s, c);
    }

    #[test]
    fn a2tilde0_small() {
        let arr = gen_a2tilde0(0, 1).unwrap();
        let expected = vec![line(0, 0, 1), line(1, 0, 1), line(1, 0, 0), line(2, 1, 0)];
        assert_eq!(arr.lines(), &expected[..]);
        assert_eq!(arr.boundary(), &line(0, 1, 0));
        assert!(gen_a2tilde0(0, 4).unwrap().lines().contains(&line(4, 6, 1)));
        assert!(matches!(gen_a2tilde0(3, 3), Err(Error::InvalidRange(3, 3))));
    }

    #[test]
    fn conic_lines_are_tangent() {
        let envelope = Conic::from_int_coeffs([4, -4, 0, 1, -8, 0]).unwrap();
        assert_eq!(Conic::from_int_coeffs([1, 0, -1, 0, -2, 0]).unwrap().dual().unwrap(), envelope);
        for k in -6..=6 {
            assert!(matches!(envelope.line_intersection(&a2tilde0_conic_line(k)).unwrap(), LineConicMeet::Tangent(_)));
        }
    }

    #[test]
    fn seeded_generator_matches_model() {
        assert_eq!(gen_lemma5(&SeedQuadruple::canonical(), -5, 7).unwrap(), gen_a2tilde0(-5, 7).unwrap());
    }

    #[test]
    fn complete_range_examples() {
        let w = Window::from_ints(-1, 1, -1, 3).unwrap();
        let r = window_complete_range(&w);
        assert_eq!(r.pencil, Some((-2, 2)));
        // Oracle: scan a wide integer range directly.
        let hits: Vec<i64> = (-100..=100)
            .filter(|&k| {
                let a = tangent_height(k, &w.u_min);
                let b = tangent_height(k, &w.u_max);
                a.clone().max(b.clone()) >= w.w_min && a.min(b) <= w.w_max
            })
            .collect();
        assert_eq!(r.conic, Some((hits[0], *hits.last().unwrap())));

        // Above the envelope between two consecutive pencil lines.
        let w = Window::new(linalg::rat(0), ratio(1, 2), ratio(1, 8), linalg::rat(1)).unwrap();
        let r = window_complete_range(&w);
        assert_eq!(r.pencil, Some((-1, 0)));
        assert_eq!(r.conic, None);
    }

    #[test]
    fn affine_a2_small() {
        let arr = gen_affine_a2(0, 1).unwrap();
        assert_eq!(arr.len(), 6);
        assert_eq!(arr.lines()[1].dual(), point(1, 0, -1));
    }

    #[test]
    fn near_pencil_weights() {
        let arr = gen_near_pencil(3).unwrap();
        assert!(arr.all_vertices().iter().all(|(_, w)| *w == 2));
        let arr = gen_near_pencil(4).unwrap();
        for (p, w) in arr.all_vertices() {
            assert_eq!(w, if p == point(0, 0, 1) { 3 } else { 2 });
        }
        assert!(matches!(gen_near_pencil(2), Err(Error::InsufficientLines(2))));
        let n10 = gen_near_pencil(10).unwrap();
        assert_eq!(n10.len(), 10);
        assert!(n10.all_vertices().iter().all(|(p, _)| !n10.boundary().contains(p)));
    }

    #[test]
    fn circle_order() {
        let circle = Conic::from_int_coeffs([1, 0, 0, 1, 0, -1]).unwrap();
        let pts = [point(1, 0, 1), point(0, 1, 1), point(-1, 0, 1)];
        let order = order_on_conic(&circle, &point(0, -1, 1), &pts).unwrap();
        let seq: Vec<HPoint> = order.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(seq, vec![point(-1, 0, 1), point(0, 1, 1), point(1, 0, 1)]);
        assert_eq!(order[1].1, Some(linalg::rat(0)));
        let dup = [point(1, 0, 1), point(1, 0, 1)];
        assert!(order_on_conic(&circle, &point(0, -1, 1), &dup).is_err());
        assert!(matches!(order_on_conic(&circle, &point(0, -1, 1), &[point(1, 1, 1)]), Err(Error::NotOnCurve(_))));
    }

    #[test]
    fn model_order_is_increasing_k() {
        let dual = Conic::from_int_coeffs([1, 0, -1, 0, -2, 0]).unwrap();
        let pts: Vec<HPoint> = [3, 0, 4, 1, 2].iter().map(|&k| point(k, k * (k - 1) / 2, 1)).collect();
        let order = order_on_conic(&dual, &point(0, 1, 0), &pts).unwrap();
        let ks: Vec<i64> = order.iter().map(|(p, _)| a2tilde0_conic_index(p).unwrap()).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4]);
    }
}
