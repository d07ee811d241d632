//! Conics and ternary cubics with exact rational coefficients.
//!
//! A conic is stored by its six form coefficients in the order
//! `X², XY, XZ, Y², YZ, Z²`, a cubic by ten coefficients in the order
//! `X³, X²Y, X²Z, XY², XYZ, XZ², Y³, Y²Z, YZ², Z³`. Both are kept as
//! primitive integer vectors with a positive leading coefficient, so equal
//! curves compare equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Rational};
use crate::proj::{concurrent, HLine, HPoint, Projectivity};

type Exp = (u8, u8, u8);

const CONIC_MONOMIALS: [Exp; 6] = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)];

/// Exponents of the cubic coefficients, in storage order.
pub const CUBIC_MONOMIALS: [Exp; 10] = [
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
];

fn monomial(p: &[BigInt; 3], e: Exp) -> BigInt {
    num_traits::pow(p[0].clone(), e.0 as usize) * num_traits::pow(p[1].clone(), e.1 as usize) * num_traits::pow(p[2].clone(), e.2 as usize)
}

fn eval_form(coeffs: &[BigInt], monomials: &[Exp], p: &HPoint) -> BigInt {
    coeffs.iter().zip(monomials).map(|(c, &e)| c * monomial(p.coords(), e)).sum()
}

fn monomial_row(monomials: &[Exp], p: &HPoint) -> Vec<Rational> {
    monomials.iter().map(|&e| Rational::from_integer(monomial(p.coords(), e))).collect()
}

fn write_form(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], monomials: &[Exp]) -> fmt::Result {
    let mut first = true;
    for (c, &(a, b, d)) in coeffs.iter().zip(monomials) {
        if c.is_zero() {
            continue;
        }
        let mut name = String::new();
        for (var, k) in [("X", a), ("Y", b), ("Z", d)] {
            match k {
                0 => {}
                1 => name.push_str(var),
                _ => name.push_str(&format!("{var}^{k}")),
            }
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        if mag == BigInt::from(1) {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag}{name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A ternary quadratic form up to nonzero scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conic {
    coeffs: [BigInt; 6],
}

/// How a line meets a conic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineConicMeet {
    Disjoint,
    /// Double point of contact; always rational.
    Tangent(HPoint),
    /// Two real points; `None` when they are irrational.
    Secant(Option<(HPoint, HPoint)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicKind {
    IrreducibleReal,
    IrreducibleEmpty,
    TwoRealLines,
    ConjugateLinePair,
    DoubleLine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicClass {
    pub rank: usize,
    /// `(positive, negative)` counts, ordered so that `positive >= negative`.
    pub signature: (usize, usize),
    pub kind: ConicKind,
    /// Rational line components for reducible real conics.
    pub components: Vec<HLine>,
}

impl Conic {
    /// Coefficients in the order `X², XY, XZ, Y², YZ, Z²`.
    pub fn from_coeffs(c: &[Rational; 6]) -> Result<Self> {
        let p = linalg::primitive(c).ok_or_else(|| Error::DegenerateInput("zero conic".into()))?;
        Ok(Self { coeffs: std::array::from_fn(|i| p[i].clone()) })
    }

    pub fn from_int_coeffs(c: [i64; 6]) -> Result<Self> {
        Self::from_coeffs(&c.map(linalg::rat))
    }

    /// From a symmetric matrix `M`, the form being `pᵀ M p`.
    pub fn from_matrix(m: &Mat3) -> Result<Self> {
        let two = linalg::rat(2);
        Self::from_coeffs(&[
            m[0][0].clone(),
            &m[0][1] * &two,
            &m[0][2] * &two,
            m[1][1].clone(),
            &m[1][2] * &two,
            m[2][2].clone(),
        ])
    }

    pub fn coeffs(&self) -> &[BigInt; 6] {
        &self.coeffs
    }

    /// The symmetric matrix of the form, with halves off the diagonal.
    pub fn matrix(&self) -> Mat3 {
        let d = self.doubled_matrix();
        std::array::from_fn(|i| std::array::from_fn(|j| Rational::new(d[i][j].clone(), BigInt::from(2))))
    }

    /// Twice the symmetric matrix; integral. `2Mp` is the gradient at `p`.
    fn doubled_matrix(&self) -> [[BigInt; 3]; 3] {
        let [a, b, c, d, e, f] = &self.coeffs;
        let two = BigInt::from(2);
        [
            [&two * a, b.clone(), c.clone()],
            [b.clone(), &two * d, e.clone()],
            [c.clone(), e.clone(), &two * f],
        ]
    }

    pub fn eval(&self, p: &HPoint) -> Rational {
        Rational::from_integer(eval_form(&self.coeffs, &CONIC_MONOMIALS, p))
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.eval(p).is_zero()
    }

    fn gradient(&self, p: &HPoint) -> [BigInt; 3] {
        let m = self.doubled_matrix();
        std::array::from_fn(|i| (0..3).map(|k| &m[i][k] * &p.coords()[k]).sum())
    }

    /// `pᵀ (2M) q`.
    fn polar(&self, p: &HPoint, q: &HPoint) -> BigInt {
        self.gradient(p).iter().zip(q.coords()).map(|(g, x)| g * x).sum()
    }

    /// The unique conic through five points imposing independent conditions.
    pub fn through_five(points: &[HPoint; 5]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = points.iter().map(|p| monomial_row(&CONIC_MONOMIALS, p)).collect();
        let ns = linalg::nullspace(&rows, 6);
        if ns.len() != 1 {
            return Err(Error::UnderdeterminedFit { dimension: ns.len() });
        }
        Self::from_coeffs(&std::array::from_fn(|i| ns[0][i].clone()))
    }

    pub fn tangent_line(&self, p: &HPoint) -> Result<HLine> {
        if !self.contains(p) {
            return Err(Error::NotOnCurve(p.to_string()));
        }
        HLine::from_ints(self.gradient(p)).map_err(|_| Error::SingularPoint(p.to_string()))
    }

    /// Intersection of a line with the conic, classified by the discriminant of
    /// the restricted binary form.
    pub fn line_intersection(&self, l: &HLine) -> Result<LineConicMeet> {
        let (p, q) = l.basis_points();
        let a = eval_form(&self.coeffs, &CONIC_MONOMIALS, &p);
        let c = eval_form(&self.coeffs, &CONIC_MONOMIALS, &q);
        let b = self.polar(&p, &q);
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::ComponentLine(l.to_string()));
        }
        // Restricted form: a s² + b s t + c t² on the point s p + t q.
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        let combine = |s: BigInt, t: BigInt| -> HPoint {
            let v: [BigInt; 3] = std::array::from_fn(|i| &s * &p.coords()[i] + &t * &q.coords()[i]);
            HPoint::from_ints(v).expect("distinct basis points")
        };
        if disc.is_negative() {
            return Ok(LineConicMeet::Disjoint);
        }
        let two_a = BigInt::from(2) * &a;
        if disc.is_zero() {
            let pt = if a.is_zero() { p.clone() } else { combine(-b.clone(), two_a) };
            return Ok(LineConicMeet::Tangent(pt));
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            return Ok(LineConicMeet::Secant(None));
        }
        let (u, v) = if a.is_zero() {
            (p.clone(), combine(-c.clone(), b.clone()))
        } else {
            (combine(-&b + &root, two_a.clone()), combine(-&b - &root, two_a))
        };
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        Ok(LineConicMeet::Secant(Some((u, v))))
    }

    /// Rank and signature by symmetric congruence reduction.
    pub fn classify(&self) -> ConicClass {
        let (pos, neg) = congruence_signature(&self.matrix());
        let rank = pos + neg;
        let signature = (pos.max(neg), pos.min(neg));
        let kind = match (rank, signature) {
            (3, (2, 1)) => ConicKind::IrreducibleReal,
            (3, _) => ConicKind::IrreducibleEmpty,
            (2, (1, 1)) => ConicKind::TwoRealLines,
            (2, _) => ConicKind::ConjugateLinePair,
            _ => ConicKind::DoubleLine,
        };
        let components = match kind {
            ConicKind::DoubleLine => {
                let m = self.doubled_matrix();
                let row = m.iter().find(|r| r.iter().any(|x| !x.is_zero())).expect("nonzero conic");
                vec![HLine::from_ints(row.clone()).expect("nonzero row")]
            }
            ConicKind::TwoRealLines => self.line_pair_components(),
            _ => Vec::new(),
        };
        ConicClass { rank, signature, kind, components }
    }

    fn line_pair_components(&self) -> Vec<HLine> {
        let rows: Vec<Vec<Rational>> = self.matrix().iter().map(|r| r.to_vec()).collect();
        let ns = linalg::nullspace(&rows, 3);
        let singular = HPoint::from_rationals(&std::array::from_fn(|i| ns[0][i].clone())).expect("rank two");
        let axis = (0..3).find(|&i| !singular.coords()[i].is_zero()).expect("nonzero point");
        let mut v = [0i64; 3];
        v[axis] = 1;
        let transversal = HLine::new(v[0], v[1], v[2]).expect("unit line");
        match self.line_intersection(&transversal) {
            Ok(LineConicMeet::Secant(Some((a, b)))) => {
                let mut out = vec![singular.join(&a).expect("distinct"), singular.join(&b).expect("distinct")];
                out.sort();
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        !linalg::det3(&self.doubled_matrix()).is_zero()
    }

    /// The dual conic (adjugate matrix): the locus of tangent lines.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateConic { rank: self.classify().rank });
        }
        let adj = linalg::cofactor3(&self.matrix());
        Self::from_matrix(&adj)
    }

    /// Image under a projectivity acting on points.
    pub fn transformed(&self, t: &Projectivity) -> Self {
        let c = linalg::to_rational_mat(&t.line_matrix());
        let m = linalg::mat_mul3(&linalg::mat_mul3(&c, &self.matrix()), &linalg::transpose3(&c));
        Self::from_matrix(&m).expect("congruence preserves nonzero forms")
    }

    /// Rational parametrization by lines through a rational `base` point.
    pub fn parametrization(&self, base: &HPoint) -> Result<ConicParametrization> {
        if !self.contains(base) {
            return Err(Error::NotOnCurve(base.to_string()));
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateConic { rank: self.classify().rank });
        }
        let axis = (0..3).find(|&i| !base.coords()[i].is_zero()).expect("nonzero point");
        let mut v = [0i64; 3];
        v[axis] = 1;
        Ok(ConicParametrization {
            conic: self.clone(),
            base: base.clone(),
            screen: HLine::new(v[0], v[1], v[2]).expect("unit line"),
            axis,
        })
    }
}

/// Stereographic projection of a nondegenerate conic from a rational point
/// onto a coordinate line not through that point.
#[derive(Debug, Clone)]
pub struct ConicParametrization {
    conic: Conic,
    base: HPoint,
    screen: HLine,
    axis: usize,
}

impl ConicParametrization {
    fn screen_axes(&self) -> (usize, usize) {
        match self.axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }

    /// Parameter of a point on the conic; `None` stands for infinity.
    pub fn parameter(&self, p: &HPoint) -> Result<Option<Rational>> {
        if !self.conic.contains(p) {
            return Err(Error::NotOnCurve(p.to_string()));
        }
        if p == &self.base {
            return Err(Error::DegenerateInput(format!("point {p} is the base point")));
        }
        let q = self.base.join(p)?.meet(&self.screen)?;
        let (j, k) = self.screen_axes();
        let (num, den) = (&q.coords()[j], &q.coords()[k]);
        Ok((!den.is_zero()).then(|| Rational::new(num.clone(), den.clone())))
    }

    /// Point with a given parameter; `None` stands for infinity.
    pub fn point(&self, t: Option<&Rational>) -> HPoint {
        let (j, k) = self.screen_axes();
        let mut v: [Rational; 3] = std::array::from_fn(|_| Rational::zero());
        match t {
            Some(t) => {
                v[j] = t.clone();
                v[k] = linalg::rat(1);
            }
            None => v[j] = linalg::rat(1),
        }
        let q = HPoint::from_rationals(&v).expect("nonzero");
        let fq = self.conic.eval(&q);
        let pol = Rational::from_integer(self.conic.polar(&self.base, &q));
        let b = self.base.to_rationals();
        let qr = q.to_rationals();
        let out: [Rational; 3] = std::array::from_fn(|i| &fq * &b[i] - &pol * &qr[i]);
        HPoint::from_rationals(&out).unwrap_or_else(|_| self.base.clone())
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_form(f, &self.coeffs, &CONIC_MONOMIALS)
    }
}

/// Signature `(positive, negative)` of a symmetric rational matrix via
/// simultaneous row and column elimination.
pub fn congruence_signature(m: &Mat3) -> (usize, usize) {
    let mut a = m.clone();
    let n = 3;
    let (mut pos, mut neg) = (0, 0);
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // Hyperbolic plane: adding row/column j to i makes the pivot 2 a[i][j].
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = a[i][i].clone();
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &pivot;
            for k in 0..n {
                let v = &f * &a[i][k];
                a[j][k] -= v;
            }
            for k in 0..n {
                let v = &f * &a[k][i];
                a[k][j] -= v;
            }
        }
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    (pos, neg)
}

/// A ternary cubic form up to nonzero scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cubic {
    coeffs: [BigInt; 10],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicFit {
    Unique(Cubic),
    /// Dimension of the solution space when it exceeds one.
    Underdetermined(usize),
    /// Only the zero form vanishes at all points.
    NoCubic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicFactorType {
    ThreeLines {
        lines: Vec<HLine>,
        concurrent: bool,
        /// Common point when the lines are concurrent and not all equal.
        point: Option<HPoint>,
    },
    ConicPlusLine {
        relation: LineConicMeet,
        conic: Conic,
        line: HLine,
    },
    /// A rational line times a reducible conic without rational components.
    LineTimesIrrationalPair { line: HLine, conic: Conic, kind: ConicKind },
    NoRationalLinearFactor,
}

impl Cubic {
    pub fn from_coeffs(c: &[Rational; 10]) -> Result<Self> {
        let p = linalg::primitive(c).ok_or_else(|| Error::DegenerateInput("zero cubic".into()))?;
        Ok(Self { coeffs: std::array::from_fn(|i| p[i].clone()) })
    }

    pub fn from_int_coeffs(c: [i64; 10]) -> Result<Self> {
        Self::from_coeffs(&c.map(linalg::rat))
    }

    pub fn coeffs(&self) -> &[BigInt; 10] {
        &self.coeffs
    }

    pub fn line_times_conic(l: &HLine, q: &Conic) -> Self {
        let mut acc: BTreeMap<Exp, BigInt> = BTreeMap::new();
        for (i, a) in l.coords().iter().enumerate() {
            for (c, &(x, y, z)) in q.coeffs().iter().zip(&CONIC_MONOMIALS) {
                let e = (x + (i == 0) as u8, y + (i == 1) as u8, z + (i == 2) as u8);
                *acc.entry(e).or_insert_with(BigInt::zero) += a * c;
            }
        }
        let c: [Rational; 10] = std::array::from_fn(|i| {
            Rational::from_integer(acc.get(&CUBIC_MONOMIALS[i]).cloned().unwrap_or_default())
        });
        Self::from_coeffs(&c).expect("product of nonzero forms")
    }

    pub fn product_of_lines(a: &HLine, b: &HLine, c: &HLine) -> Self {
        let [a0, a1, a2] = a.coords().clone();
        let [b0, b1, b2] = b.coords().clone();
        // a·b as a conic: X², XY, XZ, Y², YZ, Z².
        let ab = [
            &a0 * &b0,
            &a0 * &b1 + &a1 * &b0,
            &a0 * &b2 + &a2 * &b0,
            &a1 * &b1,
            &a1 * &b2 + &a2 * &b1,
            &a2 * &b2,
        ];
        let q = Conic::from_coeffs(&ab.map(Rational::from_integer)).expect("nonzero product");
        Self::line_times_conic(c, &q)
    }

    pub fn eval(&self, p: &HPoint) -> Rational {
        Rational::from_integer(eval_form(&self.coeffs, &CUBIC_MONOMIALS, p))
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Exact nullspace fit of a cubic through at least nine points.
    pub fn fit(points: &[HPoint]) -> Result<CubicFit> {
        if points.len() < 9 {
            return Err(Error::InsufficientData { needed: 9, got: points.len() });
        }
        let rows: Vec<Vec<Rational>> = points.iter().map(|p| monomial_row(&CUBIC_MONOMIALS, p)).collect();
        let ns = linalg::nullspace(&rows, 10);
        Ok(match ns.len() {
            0 => CubicFit::NoCubic,
            1 => CubicFit::Unique(Self::from_coeffs(&std::array::from_fn(|i| ns[0][i].clone()))?),
            d => CubicFit::Underdetermined(d),
        })
    }

    /// Whether `l` divides the cubic: the restriction to `l` is a binary cubic,
    /// so vanishing at four distinct points of `l` decides it.
    pub fn linear_factor_test(&self, l: &HLine) -> bool {
        line_test_points(l).iter().all(|p| self.contains(p))
    }

    /// Quadratic cofactor `Q` with `self = l · Q`, by solving the linear system
    /// on the coefficients of `Q`.
    pub fn divide_by_line(&self, l: &HLine) -> Option<Conic> {
        let mut rows = vec![vec![Rational::zero(); 6]; 10];
        for (j, &(x, y, z)) in CONIC_MONOMIALS.iter().enumerate() {
            for (i, a) in l.coords().iter().enumerate() {
                let e = (x + (i == 0) as u8, y + (i == 1) as u8, z + (i == 2) as u8);
                let r = CUBIC_MONOMIALS.iter().position(|&m| m == e).expect("degree three");
                rows[r][j] += Rational::from_integer(a.clone());
            }
        }
        let rhs: Vec<Rational> = self.coeffs.iter().cloned().map(Rational::from_integer).collect();
        let q = linalg::solve(&rows, &rhs, 6)?;
        Conic::from_coeffs(&std::array::from_fn(|i| q[i].clone())).ok()
    }

    /// Evaluation test with division as cross-check; returns the cofactor.
    pub fn linear_factor(&self, l: &HLine) -> Option<Conic> {
        let by_eval = self.linear_factor_test(l);
        let by_division = self.divide_by_line(l);
        assert_eq!(by_eval, by_division.is_some(), "divisibility tests disagree for {l}");
        by_division
    }

    /// Factor type relative to a finite set of candidate line components.
    pub fn factor_type(&self, candidates: &[HLine]) -> CubicFactorType {
        let Some((line, cofactor)) = candidates.iter().find_map(|l| self.linear_factor(l).map(|q| (l.clone(), q))) else {
            return CubicFactorType::NoRationalLinearFactor;
        };
        let class = cofactor.classify();
        match class.kind {
            ConicKind::IrreducibleReal | ConicKind::IrreducibleEmpty => {
                let relation = cofactor.line_intersection(&line).expect("irreducible conic has no line component");
                CubicFactorType::ConicPlusLine { relation, conic: cofactor, line }
            }
            ConicKind::DoubleLine => three_lines(line, class.components[0].clone(), class.components[0].clone()),
            ConicKind::TwoRealLines if class.components.len() == 2 => {
                three_lines(line, class.components[0].clone(), class.components[1].clone())
            }
            kind => CubicFactorType::LineTimesIrrationalPair { line, conic: cofactor, kind },
        }
    }
}

fn three_lines(a: HLine, b: HLine, c: HLine) -> CubicFactorType {
    let is_concurrent = concurrent(&a, &b, &c);
    let point = if is_concurrent {
        [(&a, &b), (&a, &c), (&b, &c)].iter().find_map(|(u, v)| u.meet(v).ok())
    } else {
        None
    };
    CubicFactorType::ThreeLines { lines: vec![a, b, c], concurrent: is_concurrent, point }
}

/// Four distinct rational points on a line.
pub fn line_test_points(l: &HLine) -> [HPoint; 4] {
    let (p, q) = l.basis_points();
    let combo = |s: i64, t: i64| {
        let v: [BigInt; 3] = std::array::from_fn(|i| BigInt::from(s) * &p.coords()[i] + BigInt::from(t) * &q.coords()[i]);
        HPoint::from_ints(v).expect("distinct basis points")
    };
    [p.clone(), q.clone(), combo(1, 1), combo(1, -1)]
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_form(f, &self.coeffs, &CUBIC_MONOMIALS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::proj::{line, point};

    fn circle() -> Conic {
        Conic::from_int_coeffs([1, 0, 0, 1, 0, -1]).unwrap()
    }

    fn a2t0_dual_conic() -> Conic {
        // X² - XZ - 2YZ
        Conic::from_int_coeffs([1, 0, -1, 0, -2, 0]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(circle().eval(&point(1, 0, 1)), rat(0));
        assert_eq!(circle().eval(&point(0, 0, 1)), rat(-1));
        assert_eq!(a2t0_dual_conic().eval(&point(3, 3, 1)), rat(0));
    }

    #[test]
    fn five_point_fits() {
        let case2 = Conic::through_five(&[point(0, 1, 0), point(9, 0, 5), point(1, 0, 1), point(2, 1, 1), point(3, 3, 1)]).unwrap();
        let expected = Conic::from_coeffs(&[ratio(-10, 3), rat(2), ratio(28, 3), rat(0), ratio(-10, 3), rat(-6)]).unwrap();
        assert_eq!(case2, expected);
        assert_eq!(case2, Conic::from_int_coeffs([5, -3, -14, 0, 5, 9]).unwrap());

        let unit = Conic::through_five(&[point(1, 0, 1), point(-1, 0, 1), point(0, 1, 1), point(0, -1, 1), point(3, 4, 5)]).unwrap();
        assert_eq!(unit, circle());

        let pts: Vec<HPoint> = (0..5).map(|k| point(k, k * (k - 1) / 2, 1)).collect();
        let fitted = Conic::through_five(&[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone(), pts[4].clone()]).unwrap();
        assert_eq!(fitted, a2t0_dual_conic());
    }

    #[test]
    fn five_point_fit_rejects_collinear_quadruple() {
        let pts = [point(0, 0, 1), point(1, 0, 1), point(2, 0, 1), point(3, 0, 1), point(0, 1, 1)];
        assert!(matches!(Conic::through_five(&pts), Err(Error::UnderdeterminedFit { dimension: 2 })));
    }

    #[test]
    fn tangent_examples() {
        assert_eq!(circle().tangent_line(&point(1, 0, 1)).unwrap(), line(1, 0, -1));
        // (-a : -b : 1) with (a, b) = (3/5, 4/5): tangent is the dual of (a : b : 1).
        assert_eq!(circle().tangent_line(&point(-3, -4, 5)).unwrap(), point(3, 4, 5).dual());
        let primal = Conic::from_int_coeffs([4, -4, 0, 1, -8, 0]).unwrap();
        assert_eq!(primal.tangent_line(&point(0, 0, 1)).unwrap(), line(0, 1, 0));
        assert!(matches!(circle().tangent_line(&point(0, 0, 1)), Err(Error::NotOnCurve(_))));
        let pair = Conic::from_int_coeffs([0, 1, 0, 0, 0, 0]).unwrap();
        assert!(matches!(pair.tangent_line(&point(0, 0, 1)), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn line_conic_examples() {
        assert_eq!(circle().line_intersection(&line(0, 0, 1)).unwrap(), LineConicMeet::Disjoint);
        assert_eq!(a2t0_dual_conic().line_intersection(&line(0, 0, 1)).unwrap(), LineConicMeet::Tangent(point(0, 1, 0)));
        match circle().line_intersection(&line(0, 1, 0)).unwrap() {
            LineConicMeet::Secant(Some((a, b))) => {
                let mut got = vec![a, b];
                got.sort();
                let mut want = vec![point(1, 0, 1), point(-1, 0, 1)];
                want.sort();
                assert_eq!(got, want);
            }
            other => panic!("expected secant, got {other:?}"),
        }
        assert_eq!(circle().line_intersection(&line(1, 1, -1)).unwrap(), LineConicMeet::Secant(Some((point(0, 1, 1), point(1, 0, 1)))));
        // x = 1/2 meets the circle at irrational y.
        assert_eq!(circle().line_intersection(&line(2, 0, -1)).unwrap(), LineConicMeet::Secant(None));
        let pair = Conic::from_int_coeffs([0, 1, 0, 0, 0, 0]).unwrap();
        assert!(matches!(pair.line_intersection(&line(1, 0, 0)), Err(Error::ComponentLine(_))));
    }

    #[test]
    fn classify_examples() {
        let c = circle().classify();
        assert_eq!((c.rank, c.signature, c.kind), (3, (2, 1), ConicKind::IrreducibleReal));
        let xy = Conic::from_int_coeffs([0, 1, 0, 0, 0, 0]).unwrap().classify();
        assert_eq!((xy.rank, xy.signature, xy.kind), (2, (1, 1), ConicKind::TwoRealLines));
        assert_eq!(xy.components, vec![line(0, 1, 0), line(1, 0, 0)]);
        let d = Conic::from_int_coeffs([1, 0, 0, 1, 0, 0]).unwrap().classify();
        assert_eq!((d.rank, d.signature, d.kind), (2, (2, 0), ConicKind::ConjugateLinePair));
        let empty = Conic::from_int_coeffs([1, 0, 0, 1, 0, 1]).unwrap().classify();
        assert_eq!(empty.kind, ConicKind::IrreducibleEmpty);
        let double = Conic::from_int_coeffs([1, 2, 0, 1, 0, 0]).unwrap().classify();
        assert_eq!((double.rank, double.kind), (1, ConicKind::DoubleLine));
        assert_eq!(double.components, vec![line(1, 1, 0)]);
        // Zero diagonal throughout exercises the hyperbolic pivot.
        let hyper = Conic::from_int_coeffs([0, 1, 1, 0, 1, 0]).unwrap().classify();
        assert_eq!((hyper.rank, hyper.signature), (3, (2, 1)));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(circle().dual().unwrap(), circle());
        assert_eq!(a2t0_dual_conic().dual().unwrap(), Conic::from_int_coeffs([4, -4, 0, 1, -8, 0]).unwrap());
        let sphere = Conic::from_int_coeffs([1, 0, 0, 1, 0, 1]).unwrap();
        assert_eq!(sphere.dual().unwrap(), sphere);
        let pair = Conic::from_int_coeffs([0, 1, 0, 0, 0, 0]).unwrap();
        assert!(matches!(pair.dual(), Err(Error::DegenerateConic { rank: 2 })));
    }

    #[test]
    fn cubic_fit_examples() {
        let mut pts = Vec::new();
        for k in -1..=2 {
            pts.push(point(1, 0, -k));
            pts.push(point(0, 1, -k));
            pts.push(point(1, 1, -k));
        }
        let expected = Cubic::from_int_coeffs([0, 1, 0, -1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(Cubic::fit(&pts).unwrap(), CubicFit::Unique(expected));

        let mut pts: Vec<HPoint> = (-2..=6).map(|k| point(k, k * (k - 1) / 2, 1)).collect();
        pts.extend((0..=2).map(|k| HPoint::from_rationals(&[rat(1), ratio(k, 2), rat(0)]).unwrap()));
        let expected = Cubic::line_times_conic(&line(0, 0, 1), &a2t0_dual_conic());
        assert_eq!(expected, Cubic::from_int_coeffs([0, 0, 1, 0, 0, -1, 0, 0, -2, 0]).unwrap());
        assert_eq!(Cubic::fit(&pts).unwrap(), CubicFit::Unique(expected));

        let on_line: Vec<HPoint> = (0..9).map(|k| point(1, k, 0)).collect();
        match Cubic::fit(&on_line).unwrap() {
            CubicFit::Underdetermined(d) => assert!(d >= 4),
            other => panic!("expected underdetermined, got {other:?}"),
        }
        assert!(matches!(Cubic::fit(&on_line[..8]), Err(Error::InsufficientData { needed: 9, got: 8 })));
    }

    #[test]
    fn linear_factor_examples() {
        let a2t0 = Cubic::line_times_conic(&line(0, 0, 1), &a2t0_dual_conic());
        assert_eq!(a2t0.linear_factor(&line(0, 0, 1)), Some(a2t0_dual_conic()));
        let xy = Cubic::from_int_coeffs([0, 1, 0, -1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(xy.linear_factor(&line(1, -1, 0)), Some(Conic::from_int_coeffs([0, 1, 0, 0, 0, 0]).unwrap()));
        let fermat = Cubic::from_int_coeffs([1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        assert!(!fermat.linear_factor_test(&line(0, 0, 1)));
        let values: Vec<Rational> = line_test_points(&line(0, 0, 1)).iter().map(|p| fermat.eval(p)).collect();
        assert_eq!(values, vec![rat(1), rat(1), rat(2), rat(0)]);
        assert_eq!(fermat.linear_factor(&line(0, 0, 1)), None);
    }

    #[test]
    fn factor_type_examples() {
        let xy = Cubic::product_of_lines(&line(1, 0, 0), &line(0, 1, 0), &line(1, -1, 0));
        let cands = [line(1, 0, 0), line(0, 1, 0), line(1, -1, 0), line(1, 1, 0)];
        match xy.factor_type(&cands) {
            CubicFactorType::ThreeLines { concurrent, point: p, lines } => {
                assert!(concurrent);
                assert_eq!(p, Some(point(0, 0, 1)));
                assert_eq!(lines.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }

        let a2t0 = Cubic::line_times_conic(&line(0, 0, 1), &a2t0_dual_conic());
        match a2t0.factor_type(&[line(0, 0, 1)]) {
            CubicFactorType::ConicPlusLine { relation, conic, line: l } => {
                assert_eq!(relation, LineConicMeet::Tangent(point(0, 1, 0)));
                assert_eq!(conic, a2t0_dual_conic());
                assert_eq!(l, line(0, 0, 1));
            }
            other => panic!("unexpected {other:?}"),
        }

        let fermat = Cubic::from_int_coeffs([1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let pts = [point(1, -1, 0), point(1, 0, -1), point(0, 1, -1), point(1, 1, 1)];
        let mut cands = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                cands.push(pts[i].join(&pts[j]).unwrap());
            }
        }
        assert_eq!(fermat.factor_type(&cands), CubicFactorType::NoRationalLinearFactor);
    }

    #[test]
    fn parametrization_round_trip() {
        let param = circle().parametrization(&point(0, -1, 1)).unwrap();
        assert_eq!(param.parameter(&point(1, 0, 1)).unwrap(), Some(rat(1)));
        assert_eq!(param.parameter(&point(0, 1, 1)).unwrap(), Some(rat(0)));
        assert_eq!(param.parameter(&point(-1, 0, 1)).unwrap(), Some(rat(-1)));
        for t in [ratio(1, 2), ratio(-7, 3), rat(5)] {
            let p = param.point(Some(&t));
            assert!(circle().contains(&p));
            assert_eq!(param.parameter(&p).unwrap(), Some(t));
        }
    }
}
