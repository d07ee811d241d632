//! Homogeneous coordinates on the real projective plane, restricted to the
//! rationals.
//!
//! Points and lines share one representation, a primitive integer triple with
//! a positive leading nonzero entry, so projective equality is plain equality.
//! The role (point or line) is carried in the type; duality swaps it.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointRole;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LineRole;

pub trait Role: Clone + Copy + fmt::Debug + Eq + Ord + std::hash::Hash + Default {
    const NAME: &'static str;
}

impl Role for PointRole {
    const NAME: &'static str = "point";
}

impl Role for LineRole {
    const NAME: &'static str = "line";
}

/// A canonical homogeneous triple with a role marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homogeneous<R: Role> {
    coords: [BigInt; 3],
    _role: PhantomData<R>,
}

pub type HPoint = Homogeneous<PointRole>;
pub type HLine = Homogeneous<LineRole>;

/// Canonical primitive representative of a nonzero rational triple.
pub fn normalize(v: &[Rational; 3]) -> Result<[BigInt; 3]> {
    let p = linalg::primitive(v).ok_or_else(|| Error::DegenerateInput("zero triple".into()))?;
    Ok([p[0].clone(), p[1].clone(), p[2].clone()])
}

impl<R: Role> Homogeneous<R> {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Result<Self> {
        Self::from_ints([x.into(), y.into(), z.into()])
    }

    pub fn from_ints(v: [BigInt; 3]) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateInput("zero triple".into()));
        }
        let p = linalg::primitive_int(&v);
        Ok(Self::raw([p[0].clone(), p[1].clone(), p[2].clone()]))
    }

    pub fn from_rationals(v: &[Rational; 3]) -> Result<Self> {
        Ok(Self::raw(normalize(v)?))
    }

    fn raw(coords: [BigInt; 3]) -> Self {
        Self { coords, _role: PhantomData }
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.coords
    }

    pub fn to_rationals(&self) -> [Rational; 3] {
        std::array::from_fn(|i| Rational::from_integer(self.coords[i].clone()))
    }

    /// The standard bilinear pairing with a triple of either role.
    pub fn pair<S: Role>(&self, other: &Homogeneous<S>) -> BigInt {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    fn raw_cross<S: Role>(&self, other: &Homogeneous<S>) -> [BigInt; 3] {
        let (a, b) = (&self.coords, &other.coords);
        [
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    }

    fn swap_role<S: Role>(&self) -> Homogeneous<S> {
        Homogeneous::raw(self.coords.clone())
    }
}

impl HPoint {
    /// The line through two distinct points.
    pub fn join(&self, other: &HPoint) -> Result<HLine> {
        HLine::from_ints(self.raw_cross(other))
            .map_err(|_| Error::DegenerateInput(format!("points {self} and {other} coincide")))
    }

    pub fn dual(&self) -> HLine {
        self.swap_role()
    }

    pub fn lies_on(&self, line: &HLine) -> bool {
        self.pair(line).is_zero()
    }
}

impl HLine {
    /// The intersection point of two distinct lines.
    pub fn meet(&self, other: &HLine) -> Result<HPoint> {
        HPoint::from_ints(self.raw_cross(other))
            .map_err(|_| Error::DegenerateInput(format!("lines {self} and {other} coincide")))
    }

    pub fn dual(&self) -> HPoint {
        self.swap_role()
    }

    pub fn contains(&self, point: &HPoint) -> bool {
        self.pair(point).is_zero()
    }

    /// Two distinct points spanning the line, deterministic for a given line.
    pub fn basis_points(&self) -> (HPoint, HPoint) {
        let axes = [HLine::new(1, 0, 0), HLine::new(0, 1, 0), HLine::new(0, 0, 1)];
        let mut found: Vec<HPoint> = Vec::with_capacity(2);
        for axis in axes.into_iter().map(|a| a.expect("unit vector")) {
            if let Ok(p) = self.meet(&axis) {
                if !found.contains(&p) {
                    found.push(p);
                }
            }
            if found.len() == 2 {
                break;
            }
        }
        (found[0].clone(), found[1].clone())
    }
}

/// Vector product in the role-appropriate sense: two points give the joining
/// line, two lines give their intersection point.
pub trait Cross {
    type Output;
    fn cross(&self, other: &Self) -> Result<Self::Output>;
}

impl Cross for HPoint {
    type Output = HLine;
    fn cross(&self, other: &Self) -> Result<HLine> {
        self.join(other)
    }
}

impl Cross for HLine {
    type Output = HPoint;
    fn cross(&self, other: &Self) -> Result<HPoint> {
        self.meet(other)
    }
}

pub fn cross<T: Cross>(u: &T, v: &T) -> Result<T::Output> {
    u.cross(v)
}

pub fn incident(p: &HPoint, l: &HLine) -> bool {
    p.lies_on(l)
}

/// Whether three lines pass through a common point.
pub fn concurrent(a: &HLine, b: &HLine, c: &HLine) -> bool {
    let m = [a.coords.clone(), b.coords.clone(), c.coords.clone()];
    linalg::det3(&m).is_zero()
}

pub fn collinear(a: &HPoint, b: &HPoint, c: &HPoint) -> bool {
    let m = [a.coords.clone(), b.coords.clone(), c.coords.clone()];
    linalg::det3(&m).is_zero()
}

impl<R: Role> fmt::Display for Homogeneous<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "({x}:{y}:{z})")
    }
}

/// An invertible projective transformation of the plane.
///
/// Stored as a primitive integer matrix whose first nonzero entry in
/// column-major order is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Projectivity {
    matrix: [[BigInt; 3]; 3],
}

impl Projectivity {
    pub fn from_rational(m: &Mat3) -> Result<Self> {
        if linalg::det3(m).is_zero() {
            return Err(Error::DegenerateInput("singular matrix".into()));
        }
        let column_major: Vec<Rational> = (0..3).flat_map(|j| (0..3).map(move |i| (i, j))).map(|(i, j)| m[i][j].clone()).collect();
        let p = linalg::primitive(&column_major).expect("nonsingular matrix is nonzero");
        Ok(Self { matrix: std::array::from_fn(|i| std::array::from_fn(|j| p[3 * j + i].clone())) })
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::from_rational(&std::array::from_fn(|i| std::array::from_fn(|j| linalg::rat(m[i][j]))))
    }

    pub fn identity() -> Self {
        Self::from_rational(&linalg::identity3()).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &[[BigInt; 3]; 3] {
        &self.matrix
    }

    pub fn rational_matrix(&self) -> Mat3 {
        linalg::to_rational_mat(&self.matrix)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::det3(&self.matrix)
    }

    pub fn inverse(&self) -> Self {
        let adj = linalg::transpose3(&linalg::cofactor3(&self.matrix));
        Self::from_rational(&linalg::to_rational_mat(&adj)).expect("adjugate of invertible matrix")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Projectivity) -> Self {
        let m = linalg::mat_mul3(&self.rational_matrix(), &other.rational_matrix());
        Self::from_rational(&m).expect("product of invertible matrices")
    }

    /// Matrix acting on line coordinates: the cofactor matrix, proportional to
    /// the inverse transpose.
    pub fn line_matrix(&self) -> [[BigInt; 3]; 3] {
        linalg::cofactor3(&self.matrix)
    }

    pub fn apply_point(&self, p: &HPoint) -> HPoint {
        HPoint::from_ints(mul_int(&self.matrix, p.coords())).expect("invertible map")
    }

    pub fn apply_line(&self, l: &HLine) -> HLine {
        HLine::from_ints(mul_int(&self.line_matrix(), l.coords())).expect("invertible map")
    }

    pub fn apply<T: Transform>(&self, x: &T) -> T {
        x.transformed(self)
    }
}

fn mul_int(m: &[[BigInt; 3]; 3], v: &[BigInt; 3]) -> [BigInt; 3] {
    std::array::from_fn(|i| (0..3).map(|k| &m[i][k] * &v[k]).sum())
}

/// Objects that a projectivity acts on.
pub trait Transform {
    fn transformed(&self, t: &Projectivity) -> Self;
}

impl Transform for HPoint {
    fn transformed(&self, t: &Projectivity) -> Self {
        t.apply_point(self)
    }
}

impl Transform for HLine {
    fn transformed(&self, t: &Projectivity) -> Self {
        t.apply_line(self)
    }
}

impl fmt::Display for Projectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// The projectivity sending the standard frame `e1, e2, e3, e1+e2+e3` to
/// `a, b, c, d`.
pub fn frame_map(a: &HPoint, b: &HPoint, c: &HPoint, d: &HPoint) -> Result<Projectivity> {
    let pts = [a, b, c, d];
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if collinear(pts[i], pts[j], pts[k]) {
            return Err(Error::DegenerateFrame(i, j, k));
        }
    }
    let cols = [a.to_rationals(), b.to_rationals(), c.to_rationals()];
    let basis: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
    let inv = linalg::inverse3(&basis).expect("non-collinear columns");
    let lambda = linalg::mat_vec3(&inv, &d.to_rationals());
    let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| &cols[j][i] * &lambda[j]));
    Projectivity::from_rational(&m)
}

/// Projectivity sending the four points `from` to the four points `to`.
pub fn four_point_map(from: [&HPoint; 4], to: [&HPoint; 4]) -> Result<Projectivity> {
    let f = frame_map(from[0], from[1], from[2], from[3])?;
    let g = frame_map(to[0], to[1], to[2], to[3])?;
    Ok(g.compose(&f.inverse()))
}

pub fn point(x: i64, y: i64, z: i64) -> HPoint {
    HPoint::new(x, y, z).expect("nonzero point")
}

pub fn line(a: i64, b: i64, c: i64) -> HLine {
    HLine::new(a, b, c).expect("nonzero line")
}
