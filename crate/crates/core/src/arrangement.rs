//! Finite line arrangements analysed inside a rectangular window of an
//! affine chart.
//!
//! Vertices carry weights counted over every line of the arrangement, not
//! only those meeting the window. Cells come from splitting the window
//! rectangle by each line in turn; a cell touching the window frame is
//! `Clipped` and never enters simpliciality verdicts, since its true shape
//! depends on lines outside the window. Thinness holds automatically for
//! such line-induced subdivisions and is not checked separately.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Rational};
use crate::proj::{HLine, HPoint, Projectivity};

/// Distinct lines plus a boundary line that is not one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    lines: Vec<HLine>,
    boundary: HLine,
    tags: Vec<String>,
}

impl Arrangement {
    pub fn new(lines: Vec<HLine>, boundary: HLine) -> Result<Self> {
        let tags = vec![String::new(); lines.len()];
        Self::with_tags(lines, boundary, tags)
    }

    pub fn with_tags(lines: Vec<HLine>, boundary: HLine, tags: Vec<String>) -> Result<Self> {
        if tags.len() != lines.len() {
            return Err(Error::InvalidArrangement(format!("{} tags for {} lines", tags.len(), lines.len())));
        }
        let mut seen = BTreeMap::new();
        for (i, l) in lines.iter().enumerate() {
            if let Some(j) = seen.insert(l.clone(), i) {
                return Err(Error::InvalidArrangement(format!("line {l} appears at positions {j} and {i}")));
            }
        }
        if let Some(i) = seen.get(&boundary) {
            return Err(Error::InvalidArrangement(format!("boundary {boundary} is line {i} of the arrangement")));
        }
        Ok(Self { lines, boundary, tags })
    }

    pub fn lines(&self) -> &[HLine] {
        &self.lines
    }

    pub fn boundary(&self) -> &HLine {
        &self.boundary
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Dual points `l*` of all lines, in line order.
    pub fn dual_points(&self) -> Vec<HPoint> {
        self.lines.iter().map(HLine::dual).collect()
    }

    pub fn transformed(&self, t: &Projectivity) -> Self {
        Self {
            lines: self.lines.iter().map(|l| t.apply_line(l)).collect(),
            boundary: t.apply_line(&self.boundary),
            tags: self.tags.clone(),
        }
    }

    pub fn without_line(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.lines.remove(index);
        out.tags.remove(index);
        out
    }

    /// Arrangement with one more line; fails if it duplicates a member or the boundary.
    pub fn with_line(&self, line: HLine, tag: &str) -> Result<Self> {
        let mut lines = self.lines.clone();
        let mut tags = self.tags.clone();
        lines.push(line);
        tags.push(tag.to_string());
        Self::with_tags(lines, self.boundary.clone(), tags)
    }

    pub fn lines_through(&self, p: &HPoint) -> Vec<usize> {
        self.lines.iter().enumerate().filter(|(_, l)| l.contains(p)).map(|(i, _)| i).collect()
    }

    /// Number of lines through `p`.
    pub fn weight(&self, p: &HPoint) -> usize {
        self.lines.iter().filter(|l| l.contains(p)).count()
    }

    /// Every intersection point of two or more lines with its weight, sorted.
    pub fn all_vertices(&self) -> Vec<(HPoint, usize)> {
        let mut points = BTreeMap::new();
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let p = self.lines[i].meet(&self.lines[j]).expect("distinct lines");
                points.entry(p).or_insert(());
            }
        }
        points.into_keys().map(|p| {
            let w = self.weight(&p);
            (p, w)
        }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Which line plays the role of the line at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartKind {
    /// The arrangement's boundary line.
    BoundaryAtInfinity,
    /// `X = 1`, `Y = 1` or `Z = 1`.
    Coordinate(Axis),
    Custom(HLine),
}

/// An affine chart: the complement of a line with coordinates `(u, w)`.
///
/// For a line with first nonzero coefficient at index `i`, the chart
/// coordinates are the two remaining homogeneous coordinates divided by the
/// line's form, in index order. A boundary `Y = 0` thus gives `(u : 1 : w)`
/// and `Z = 0` gives the usual `z = 1` picture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    line: HLine,
    /// Rows: the forms `u`, `w` and the chart line.
    to_chart: Mat3,
    from_chart: Mat3,
}

/// `a u + b w + c = 0` in chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLine {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

/// Explicit form of an affine line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineForm {
    /// `u = constant`.
    Vertical { u: Rational },
    /// `w = slope · u + intercept`.
    Graph { slope: Rational, intercept: Rational },
}

impl AffineLine {
    pub fn eval(&self, u: &Rational, w: &Rational) -> Rational {
        &self.a * u + &self.b * w + &self.c
    }

    pub fn form(&self) -> AffineForm {
        if self.b.is_zero() {
            AffineForm::Vertical { u: -&self.c / &self.a }
        } else {
            AffineForm::Graph { slope: -&self.a / &self.b, intercept: -&self.c / &self.b }
        }
    }

    pub fn is_parallel(&self, other: &AffineLine) -> bool {
        (&self.a * &other.b - &self.b * &other.a).is_zero()
    }

    /// Monotone coordinate along the line, used to order points on it.
    fn along(&self, u: &Rational, w: &Rational) -> Rational {
        if self.b.is_zero() {
            w.clone()
        } else {
            u.clone()
        }
    }
}

impl Chart {
    pub fn new(kind: &ChartKind, arr: &Arrangement) -> Self {
        match kind {
            ChartKind::BoundaryAtInfinity => Self::at_infinity(arr.boundary()),
            ChartKind::Coordinate(axis) => {
                let l = match axis {
                    Axis::X => HLine::new(1, 0, 0),
                    Axis::Y => HLine::new(0, 1, 0),
                    Axis::Z => HLine::new(0, 0, 1),
                };
                Self::at_infinity(&l.expect("unit line"))
            }
            ChartKind::Custom(l) => Self::at_infinity(l),
        }
    }

    /// The chart in which `line` is the line at infinity.
    pub fn at_infinity(line: &HLine) -> Self {
        let i = (0..3).find(|&i| !line.coords()[i].is_zero()).expect("nonzero line");
        let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let unit = |k: usize| -> [Rational; 3] { std::array::from_fn(|j| linalg::rat((j == k) as i64)) };
        let to_chart: Mat3 = [unit(others[0]), unit(others[1]), line.to_rationals()];
        let from_chart = linalg::inverse3(&to_chart).expect("completion of a line is a basis");
        Self { line: line.clone(), to_chart, from_chart }
    }

    pub fn line(&self) -> &HLine {
        &self.line
    }

    /// Chart for the transformed plane giving every transformed object the
    /// same chart coordinates as the original.
    pub fn transformed(&self, t: &Projectivity) -> Self {
        let inv = t.inverse().rational_matrix();
        let to_chart = linalg::mat_mul3(&self.to_chart, &inv);
        let from_chart = linalg::inverse3(&to_chart).expect("invertible");
        Self { line: t.apply_line(&self.line), to_chart, from_chart }
    }

    pub fn to_affine(&self, p: &HPoint) -> Option<(Rational, Rational)> {
        let q = linalg::mat_vec3(&self.to_chart, &p.to_rationals());
        if q[2].is_zero() {
            return None;
        }
        Some((&q[0] / &q[2], &q[1] / &q[2]))
    }

    pub fn from_affine(&self, u: &Rational, w: &Rational) -> HPoint {
        let p = linalg::mat_vec3(&self.from_chart, &[u.clone(), w.clone(), linalg::rat(1)]);
        HPoint::from_rationals(&p).expect("invertible chart")
    }

    pub fn affine_line(&self, l: &HLine) -> Result<AffineLine> {
        let lr = l.to_rationals();
        let m = &self.from_chart;
        let coef = |k: usize| (0..3).fold(Rational::zero(), |acc, i| acc + &m[i][k] * &lr[i]);
        let (a, b, c) = (coef(0), coef(1), coef(2));
        if a.is_zero() && b.is_zero() {
            return Err(Error::ChartCollision(l.to_string()));
        }
        Ok(AffineLine { a, b, c })
    }
}

/// All lines of the arrangement in chart coordinates.
pub fn to_chart(arr: &Arrangement, chart: &Chart) -> Result<Vec<AffineLine>> {
    arr.lines().iter().map(|l| chart.affine_line(l)).collect()
}

/// Closed rectangle `[u_min, u_max] × [w_min, w_max]` of chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub u_min: Rational,
    pub u_max: Rational,
    pub w_min: Rational,
    pub w_max: Rational,
}

impl Window {
    pub fn new(u_min: Rational, u_max: Rational, w_min: Rational, w_max: Rational) -> Result<Self> {
        if u_min >= u_max || w_min >= w_max {
            return Err(Error::InvalidWindow(format!("[{u_min}, {u_max}] x [{w_min}, {w_max}] has no interior")));
        }
        Ok(Self { u_min, u_max, w_min, w_max })
    }

    pub fn from_ints(u_min: i64, u_max: i64, w_min: i64, w_max: i64) -> Result<Self> {
        Self::new(linalg::rat(u_min), linalg::rat(u_max), linalg::rat(w_min), linalg::rat(w_max))
    }

    pub fn contains(&self, u: &Rational, w: &Rational) -> bool {
        &self.u_min <= u && u <= &self.u_max && &self.w_min <= w && w <= &self.w_max
    }

    pub fn area(&self) -> Rational {
        (&self.u_max - &self.u_min) * (&self.w_max - &self.w_min)
    }

    fn rectangle(&self) -> Polygon {
        let c = |u: &Rational, w: &Rational| (u.clone(), w.clone());
        Polygon {
            corners: vec![
                c(&self.u_min, &self.w_min),
                c(&self.u_max, &self.w_min),
                c(&self.u_max, &self.w_max),
                c(&self.u_min, &self.w_max),
            ],
            edges: vec![
                EdgeLabel::Window(WindowSide::Bottom),
                EdgeLabel::Window(WindowSide::Right),
                EdgeLabel::Window(WindowSide::Top),
                EdgeLabel::Window(WindowSide::Left),
            ],
        }
    }
}

/// An intersection point of arrangement lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: HPoint,
    pub weight: usize,
    pub on_boundary: bool,
    pub u: Rational,
    pub w: Rational,
    /// Indices of the lines through the vertex.
    pub lines: Vec<usize>,
}

/// Vertices inside the closed window, sorted by `(u, w)`, with weights counted
/// over all lines.
pub fn vertices_in_window(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<Vec<Vertex>> {
    to_chart(arr, chart)?;
    let mut found: BTreeMap<HPoint, (Rational, Rational)> = BTreeMap::new();
    let lines = arr.lines();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let p = lines[i].meet(&lines[j]).expect("distinct lines");
            if found.contains_key(&p) {
                continue;
            }
            if let Some((u, w)) = chart.to_affine(&p) {
                if window.contains(&u, &w) {
                    found.insert(p, (u, w));
                }
            }
        }
    }
    let mut out: Vec<Vertex> = found
        .into_iter()
        .map(|(point, (u, w))| {
            let through = arr.lines_through(&point);
            Vertex { weight: through.len(), on_boundary: arr.boundary().contains(&point), lines: through, point, u, w }
        })
        .collect();
    out.sort_by(|a, b| (&a.u, &a.w).cmp(&(&b.u, &b.w)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WindowSide {
    Bottom,
    Right,
    Top,
    Left,
}

/// What supports one edge of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Index into the arrangement's lines.
    Line(usize),
    Window(WindowSide),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Interior,
    Clipped,
}

/// A convex cell of the windowed subdivision.
///
/// `corners` run counter-clockwise starting at the lowest corner (smallest
/// `w`, then smallest `u`); `edges[i]` supports the edge from `corners[i]`
/// to `corners[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub corners: Vec<(Rational, Rational)>,
    pub edges: Vec<EdgeLabel>,
    pub kind: CellKind,
}

impl Cell {
    /// Exact shoelace area.
    pub fn area(&self) -> Rational {
        let n = self.corners.len();
        let twice: Rational = (0..n)
            .map(|i| {
                let (u0, w0) = &self.corners[i];
                let (u1, w1) = &self.corners[(i + 1) % n];
                u0 * w1 - u1 * w0
            })
            .sum();
        twice / linalg::rat(2)
    }

    pub fn is_triangle(&self) -> bool {
        self.corners.len() == 3
    }

    /// Distinct arrangement lines supporting edges, in walk order.
    pub fn walls(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for e in &self.edges {
            if let EdgeLabel::Line(i) = e {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
        }
        out
    }

    pub fn touches_window(&self) -> bool {
        self.edges.iter().any(|e| matches!(e, EdgeLabel::Window(_)))
    }
}

#[derive(Debug, Clone)]
struct Polygon {
    corners: Vec<(Rational, Rational)>,
    edges: Vec<EdgeLabel>,
}

impl Polygon {
    /// Part of the polygon where `sign · f >= 0`.
    fn clip(&self, f: &AffineLine, sign: i32, label: EdgeLabel, values: &[Rational]) -> Polygon {
        let n = self.corners.len();
        let side = |v: &Rational| if sign > 0 { v.clone() } else { -v.clone() };
        let mut corners = Vec::new();
        let mut edges = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let (sp, sq) = (side(&values[i]), side(&values[j]));
            let e = self.edges[i];
            if !sp.is_negative() && !sq.is_negative() {
                corners.push(self.corners[i].clone());
                edges.push(e);
            } else if !sp.is_negative() {
                // Leaving the half-plane.
                if sp.is_zero() {
                    corners.push(self.corners[i].clone());
                    edges.push(label);
                } else {
                    corners.push(self.corners[i].clone());
                    edges.push(e);
                    corners.push(crossing(&self.corners[i], &self.corners[j], &values[i], &values[j]));
                    edges.push(label);
                }
            } else if sq.is_positive() {
                // Entering the half-plane.
                corners.push(crossing(&self.corners[i], &self.corners[j], &values[i], &values[j]));
                edges.push(e);
            }
        }
        let _ = f;
        Polygon { corners, edges }
    }

    /// Splits by a line when it crosses the interior; `None` otherwise.
    fn split(&self, f: &AffineLine, label: EdgeLabel) -> Option<(Polygon, Polygon)> {
        let values: Vec<Rational> = self.corners.iter().map(|(u, w)| f.eval(u, w)).collect();
        let any_pos = values.iter().any(Signed::is_positive);
        let any_neg = values.iter().any(Signed::is_negative);
        if !(any_pos && any_neg) {
            return None;
        }
        Some((self.clip(f, 1, label, &values), self.clip(f, -1, label, &values)))
    }

    fn into_cell(self) -> Cell {
        let n = self.corners.len();
        let start = (0..n)
            .min_by(|&a, &b| lowest_first(&self.corners[a], &self.corners[b]))
            .expect("nonempty polygon");
        let corners: Vec<_> = (0..n).map(|k| self.corners[(start + k) % n].clone()).collect();
        let edges: Vec<_> = (0..n).map(|k| self.edges[(start + k) % n]).collect();
        let kind = if edges.iter().any(|e| matches!(e, EdgeLabel::Window(_))) { CellKind::Clipped } else { CellKind::Interior };
        Cell { corners, edges, kind }
    }
}

fn lowest_first(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    (&a.1, &a.0).cmp(&(&b.1, &b.0))
}

fn crossing(p: &(Rational, Rational), q: &(Rational, Rational), fp: &Rational, fq: &Rational) -> (Rational, Rational) {
    let t = fp / (fp - fq);
    (&p.0 + &t * (&q.0 - &p.0), &p.1 + &t * (&q.1 - &p.1))
}

/// Convex cells of the window cut by every arrangement line, ordered by
/// their corner walks.
pub fn cells_in_window(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<Vec<Cell>> {
    let lines = to_chart(arr, chart)?;
    let mut polys = vec![window.rectangle()];
    for (i, l) in lines.iter().enumerate() {
        let mut next = Vec::with_capacity(polys.len() + 8);
        for poly in polys {
            match poly.split(l, EdgeLabel::Line(i)) {
                Some((a, b)) => {
                    next.push(a);
                    next.push(b);
                }
                None => next.push(poly),
            }
        }
        polys = next;
    }
    let mut cells: Vec<Cell> = polys.into_iter().map(Polygon::into_cell).collect();
    cells.sort_by(|a, b| {
        let ka = a.corners.iter().map(|(u, w)| (w, u));
        let kb = b.corners.iter().map(|(u, w)| (w, u));
        ka.cmp(kb)
    });
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index into the cell list of the window.
    pub cell: usize,
    pub corners: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialReport {
    pub interior_cells: usize,
    pub triangles: usize,
    pub violations: Vec<Violation>,
    /// Clipped cells accepted as chambers with an edge on the line at
    /// infinity: two parallel walls and a single floor segment.
    pub strip_chambers: usize,
}

impl SimplicialReport {
    pub fn is_simplicial(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every interior cell for being a triangle whose corners are
/// arrangement vertices.
pub fn simplicial_report(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<SimplicialReport> {
    let cells = cells_in_window(arr, chart, window)?;
    let lines = to_chart(arr, chart)?;
    Ok(report_for_cells(arr, chart, &lines, &cells))
}

pub(crate) fn report_for_cells(arr: &Arrangement, chart: &Chart, lines: &[AffineLine], cells: &[Cell]) -> SimplicialReport {
    let mut report = SimplicialReport { interior_cells: 0, triangles: 0, violations: Vec::new(), strip_chambers: 0 };
    for (idx, cell) in cells.iter().enumerate() {
        if cell.kind == CellKind::Clipped {
            if is_strip_chamber(cell, lines) {
                report.strip_chambers += 1;
            }
            continue;
        }
        report.interior_cells += 1;
        let walls = cell.walls();
        let bad_corner = cell.corners.iter().find(|(u, w)| arr.weight(&chart.from_affine(u, w)) < 2);
        if let Some((u, w)) = bad_corner {
            report.violations.push(Violation {
                cell: idx,
                corners: cell.corners.len(),
                reason: format!("corner ({u}, {w}) is not an arrangement vertex"),
            });
        } else if cell.corners.len() != 3 || walls.len() != 3 {
            report.violations.push(Violation {
                cell: idx,
                corners: cell.corners.len(),
                reason: format!("{} corners and {} walls", cell.corners.len(), walls.len()),
            });
        } else {
            report.triangles += 1;
        }
    }
    report
}

fn is_strip_chamber(cell: &Cell, lines: &[AffineLine]) -> bool {
    let n = cell.edges.len();
    let window_edges: Vec<usize> = (0..n).filter(|&i| matches!(cell.edges[i], EdgeLabel::Window(_))).collect();
    if window_edges.len() != 1 || n != 4 {
        return false;
    }
    let k = window_edges[0];
    let (EdgeLabel::Line(before), EdgeLabel::Line(after), EdgeLabel::Line(_floor)) =
        (cell.edges[(k + n - 1) % n], cell.edges[(k + 1) % n], cell.edges[(k + 2) % n])
    else {
        return false;
    };
    lines[before].is_parallel(&lines[after])
}

/// An edge of a Coxeter diagram between two walls meeting in a vertex of weight > 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoxeterEdge {
    pub a: usize,
    pub b: usize,
    pub weight: usize,
}

/// The Coxeter diagram of a triangular chamber. Nodes are the three walls as
/// line indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDiagram {
    pub nodes: [usize; 3],
    pub edges: Vec<CoxeterEdge>,
}

impl CoxeterDiagram {
    /// Connected graph on three nodes.
    pub fn is_irreducible(&self) -> bool {
        self.edges.len() >= 2
    }

    /// Edges as drawn: weights below four are left unlabeled.
    pub fn display_labels(&self) -> Vec<(usize, usize, Option<usize>)> {
        self.edges.iter().map(|e| (e.a, e.b, (e.weight >= 4).then_some(e.weight))).collect()
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nodes {:?}", self.nodes)?;
        for (a, b, label) in self.display_labels() {
            match label {
                Some(w) => write!(f, ", {a}-{b} ({w})")?,
                None => write!(f, ", {a}-{b}")?,
            }
        }
        Ok(())
    }
}

pub fn coxeter_diagram(arr: &Arrangement, cell: &Cell) -> Result<CoxeterDiagram> {
    let walls = cell.walls();
    if cell.kind != CellKind::Interior || !cell.is_triangle() || walls.len() != 3 {
        return Err(Error::NotSimplicial(format!("{} corners, {:?}", cell.corners.len(), cell.kind)));
    }
    let nodes = [walls[0], walls[1], walls[2]];
    let lines = arr.lines();
    let edges = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (nodes[i], nodes[j]);
            let v = lines[a].meet(&lines[b]).expect("distinct walls");
            let weight = arr.weight(&v);
            (weight > 2).then_some(CoxeterEdge { a, b, weight })
        })
        .collect();
    Ok(CoxeterDiagram { nodes, edges })
}

/// Vertices in the window lying on line `index`, ordered along it.
fn vertices_along<'a>(vertices: &'a [Vertex], lines: &[AffineLine], index: usize) -> Vec<&'a Vertex> {
    let mut on: Vec<&Vertex> = vertices.iter().filter(|v| v.lines.contains(&index)).collect();
    on.sort_by(|a, b| lines[index].along(&a.u, &a.w).cmp(&lines[index].along(&b.u, &b.w)));
    on
}

/// Two weight-two vertices adjacent along a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearPencilWitness {
    pub line: usize,
    pub v1: HPoint,
    pub v2: HPoint,
}

/// Searches each line for two consecutive weight-two vertices inside the window.
pub fn near_pencil_probe(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<Option<NearPencilWitness>> {
    let vertices = vertices_in_window(arr, chart, window)?;
    let lines = to_chart(arr, chart)?;
    Ok(near_pencil_in(&vertices, &lines))
}

pub(crate) fn near_pencil_in(vertices: &[Vertex], lines: &[AffineLine]) -> Option<NearPencilWitness> {
    (0..lines.len()).find_map(|i| {
        vertices_along(vertices, lines, i)
            .windows(2)
            .find(|pair| pair[0].weight == 2 && pair[1].weight == 2)
            .map(|pair| NearPencilWitness { line: i, v1: pair[0].point.clone(), v2: pair[1].point.clone() })
    })
}

/// A weight-two vertex whose four neighbours along its lines have weight three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma3Witness {
    pub vertex: HPoint,
    /// Neighbours on the first line (both sides), then on the second.
    pub neighbours: [HPoint; 4],
}

/// Neighbouring vertices are the nearest vertices along each of the two
/// lines through `v`, one on each side, taken in chart order.
pub fn lemma3_probe(arr: &Arrangement, chart: &Chart, window: &Window) -> Result<Option<Lemma3Witness>> {
    let vertices = vertices_in_window(arr, chart, window)?;
    let lines = to_chart(arr, chart)?;
    Ok(lemma3_in(&vertices, &lines))
}

pub(crate) fn lemma3_in(vertices: &[Vertex], lines: &[AffineLine]) -> Option<Lemma3Witness> {
    for v in vertices.iter().filter(|v| v.weight == 2) {
        let mut neighbours = Vec::with_capacity(4);
        for &line in &v.lines {
            let along = vertices_along(vertices, lines, line);
            let pos = along.iter().position(|x| x.point == v.point).expect("vertex lies on its line");
            if pos == 0 || pos + 1 == along.len() {
                break;
            }
            neighbours.push(along[pos - 1]);
            neighbours.push(along[pos + 1]);
        }
        if neighbours.len() == 4 && neighbours.iter().all(|n| n.weight == 3) {
            return Some(Lemma3Witness {
                vertex: v.point.clone(),
                neighbours: std::array::from_fn(|i| neighbours[i].point.clone()),
            });
        }
    }
    None
}

/// Vertices lying on the boundary line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryVertexReport {
    pub count: usize,
    /// Each boundary vertex with the number of lines through it.
    pub vertices: Vec<(HPoint, usize)>,
}

pub fn boundary_vertex_check(arr: &Arrangement) -> BoundaryVertexReport {
    let mut hits: BTreeMap<HPoint, usize> = BTreeMap::new();
    for l in arr.lines() {
        let p = l.meet(arr.boundary()).expect("boundary is not a member line");
        *hits.entry(p).or_default() += 1;
    }
    let vertices: Vec<(HPoint, usize)> = hits.into_iter().filter(|(_, m)| *m >= 2).collect();
    BoundaryVertexReport { count: vertices.len(), vertices }
}

/// Face counts of the arrangement in the whole projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl FaceCounts {
    /// Every face is a triangle exactly when `3 f2 = 2 f1`.
    pub fn is_simplicial(&self) -> bool {
        3 * self.faces == 2 * self.edges
    }
}

/// `f0`, `f1 = Σ w(v)` and `f2 = f1 - f0 + 1` from the Euler characteristic of
/// the projective plane. Needs at least two lines.
pub fn projective_face_counts(lines: &[HLine]) -> FaceCounts {
    let mut points = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            points.entry(lines[i].meet(&lines[j]).expect("distinct lines")).or_insert(());
        }
    }
    let f0 = points.len();
    let f1: usize = points.keys().map(|p| lines.iter().filter(|l| l.contains(p)).count()).sum();
    FaceCounts { vertices: f0, edges: f1, faces: f1 + 1 - f0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::proj::{line, point};

    fn z1() -> Chart {
        Chart::at_infinity(&line(0, 0, 1))
    }

    fn affine_a2_unit() -> Arrangement {
        // x ∈ {0,1}, y ∈ {0,1}, x + y ∈ {1,2}
        let lines = vec![line(1, 0, 0), line(1, 0, -1), line(0, 1, 0), line(0, 1, -1), line(1, 1, -1), line(1, 1, -2)];
        Arrangement::new(lines, line(0, 0, 1)).unwrap()
    }

    fn near_pencil4() -> Arrangement {
        Arrangement::new(vec![line(1, 0, 0), line(0, 1, 0), line(1, -1, 0), line(0, 0, 1)], line(1, 1, 1)).unwrap()
    }

    #[test]
    fn arrangement_validation() {
        assert!(Arrangement::new(vec![line(1, 0, 0), line(2, 0, 0)], line(0, 0, 1)).is_err());
        assert!(Arrangement::new(vec![line(1, 0, 0)], line(1, 0, 0)).is_err());
    }

    #[test]
    fn chart_examples() {
        let boundary = line(0, 1, 0);
        let chart = Chart::at_infinity(&boundary);
        // Pencil line X + (k/2) Y = 0 for k = 3 becomes u = -3/2.
        let pencil = chart.affine_line(&line(2, 3, 0)).unwrap();
        assert_eq!(pencil.form(), AffineForm::Vertical { u: ratio(-3, 2) });
        // Conic-family line kX + k(k-1)/2 Y + Z = 0 for k = 3: w = -3u - 3.
        let tangent = chart.affine_line(&line(3, 3, 1)).unwrap();
        assert_eq!(tangent.form(), AffineForm::Graph { slope: rat(-3), intercept: rat(-3) });
        assert!(matches!(z1().affine_line(&line(0, 0, 2)), Err(Error::ChartCollision(_))));
        assert_eq!(chart.to_affine(&point(-1, 1, 1)), Some((rat(-1), rat(1))));
        assert_eq!(chart.from_affine(&rat(-1), &rat(1)), point(-1, 1, 1));
        assert_eq!(chart.to_affine(&point(0, 0, 1)), None);
    }

    #[test]
    fn concurrent_vertex_weight() {
        let arr = Arrangement::new(vec![line(1, 0, 0), line(0, 1, 0), line(1, -1, 0)], line(0, 0, 1)).unwrap();
        let vs = vertices_in_window(&arr, &z1(), &Window::from_ints(-1, 1, -1, 1).unwrap()).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!((vs[0].point.clone(), vs[0].weight), (point(0, 0, 1), 3));
    }

    #[test]
    fn cell_counts() {
        let window = Window::from_ints(-2, 2, -2, 2).unwrap();
        let empty = Arrangement::new(vec![], line(0, 0, 1)).unwrap();
        let cells = cells_in_window(&empty, &z1(), &window).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].kind, CellKind::Clipped);
        assert_eq!(cells[0].area(), rat(16));

        let one = Arrangement::new(vec![line(1, 1, 0)], line(0, 0, 1)).unwrap();
        let cells = cells_in_window(&one, &z1(), &window).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.kind == CellKind::Clipped));
        assert_eq!(cells.iter().map(Cell::area).sum::<Rational>(), rat(16));
    }

    #[test]
    fn unit_square_triangles() {
        let window = Window::new(ratio(-1, 4), ratio(5, 4), ratio(-1, 4), ratio(5, 4)).unwrap();
        let arr = affine_a2_unit();
        let cells = cells_in_window(&arr, &z1(), &window).unwrap();
        let interior: Vec<&Cell> = cells.iter().filter(|c| c.kind == CellKind::Interior).collect();
        assert_eq!(interior.len(), 2);
        assert!(interior.iter().all(|c| c.is_triangle() && c.area() == ratio(1, 2)));
        let report = simplicial_report(&arr, &z1(), &window).unwrap();
        assert_eq!((report.interior_cells, report.triangles), (2, 2));
        assert!(report.is_simplicial());
    }

    #[test]
    fn square_without_diagonal_is_not_simplicial() {
        let arr = Arrangement::new(vec![line(1, 0, 0), line(1, 0, -1), line(0, 1, 0), line(0, 1, -1)], line(0, 0, 1)).unwrap();
        let window = Window::from_ints(-1, 2, -1, 2).unwrap();
        let report = simplicial_report(&arr, &z1(), &window).unwrap();
        assert_eq!(report.interior_cells, 1);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].corners, 4);
    }

    #[test]
    fn near_pencil_window() {
        let arr = near_pencil4();
        let chart = Chart::at_infinity(arr.boundary());
        let window = Window::from_ints(-1, 2, -1, 2).unwrap();
        let report = simplicial_report(&arr, &chart, &window).unwrap();
        assert!(report.interior_cells > 0);
        assert!(report.is_simplicial());
        let witness = near_pencil_probe(&arr, &chart, &window).unwrap().expect("witness");
        assert_eq!(witness.line, 3);
        let cells = cells_in_window(&arr, &chart, &window).unwrap();
        for cell in cells.iter().filter(|c| c.kind == CellKind::Interior) {
            let d = coxeter_diagram(&arr, cell).unwrap();
            assert!(!d.is_irreducible());
            assert_eq!(d.edges.len(), 1);
            assert_eq!(d.edges[0].weight, 3);
        }
    }

    #[test]
    fn coxeter_of_grid_triangle() {
        let window = Window::new(ratio(-1, 4), ratio(5, 4), ratio(-1, 4), ratio(5, 4)).unwrap();
        // Full grid through the unit square: each corner has weight three.
        let mut lines = vec![];
        for k in -1..=2 {
            lines.push(line(1, 0, -k));
            lines.push(line(0, 1, -k));
        }
        for k in -1..=3 {
            lines.push(line(1, 1, -k));
        }
        let arr = Arrangement::new(lines, line(0, 0, 1)).unwrap();
        let cells = cells_in_window(&arr, &z1(), &window).unwrap();
        let lower = cells
            .iter()
            .find(|c| c.kind == CellKind::Interior && c.corners.contains(&(rat(0), rat(0))))
            .unwrap();
        let d = coxeter_diagram(&arr, lower).unwrap();
        assert_eq!(d.edges.len(), 3);
        assert!(d.is_irreducible());
        assert!(d.display_labels().iter().all(|(_, _, l)| l.is_none()));
    }

    #[test]
    fn three_generic_lines_are_reducible() {
        let arr = Arrangement::new(vec![line(1, 0, 0), line(0, 1, 0), line(1, 1, -1)], line(0, 0, 1)).unwrap();
        let window = Window::from_ints(-1, 2, -1, 2).unwrap();
        let cells = cells_in_window(&arr, &z1(), &window).unwrap();
        let interior: Vec<_> = cells.iter().filter(|c| c.kind == CellKind::Interior).collect();
        assert_eq!(interior.len(), 1);
        let d = coxeter_diagram(&arr, interior[0]).unwrap();
        assert!(d.edges.is_empty());
        assert!(!d.is_irreducible());
        let clipped = cells.iter().find(|c| c.kind == CellKind::Clipped).unwrap();
        assert!(matches!(coxeter_diagram(&arr, clipped), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn boundary_vertices() {
        let a2 = affine_a2_unit();
        let report = boundary_vertex_check(&a2);
        assert_eq!(report.count, 3);
        assert!(report.vertices.iter().all(|(_, m)| *m == 2));
        let generic = Arrangement::new(vec![line(1, 0, -1), line(0, 1, -1)], line(0, 0, 1)).unwrap();
        assert_eq!(boundary_vertex_check(&generic).count, 0);
    }

    #[test]
    fn face_counts() {
        assert!(projective_face_counts(near_pencil4().lines()).is_simplicial());
        // Four generic lines: 6 vertices, 12 edges, 7 faces (4 triangles, 3 quadrilaterals).
        let generic = [line(1, 0, 0), line(0, 1, 0), line(0, 0, 1), line(1, 1, 1)];
        let fc = projective_face_counts(&generic);
        assert_eq!((fc.vertices, fc.edges, fc.faces), (6, 12, 7));
        assert!(!fc.is_simplicial());
        let pencil = [line(1, 0, 0), line(0, 1, 0), line(1, 1, 0)];
        assert!(!projective_face_counts(&pencil).is_simplicial());
    }
}
