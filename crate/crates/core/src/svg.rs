//! Deterministic SVG drawings of an arrangement inside a chart window.
//!
//! Geometry stays exact until the last step; coordinates are printed as
//! decimals with a fixed number of significant digits. The `w` axis points
//! up in the picture.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arrangement::{self, AffineLine, Arrangement, Chart, Window};
use crate::curves::Conic;
use crate::error::Result;
use crate::linalg::{self, Rational};
use crate::proj::HPoint;

pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Clone)]
pub struct SvgStyle {
    /// Mark vertices with circles sized by weight.
    pub vertices: bool,
    /// Conic drawn underneath, with a rational point on it for the parametrization.
    pub conic_overlay: Option<(Conic, HPoint)>,
    /// Significant digits of printed coordinates.
    pub precision: usize,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { vertices: false, conic_overlay: None, precision: DEFAULT_PRECISION }
    }
}

/// Decimal string of `x` rounded (half away from zero) to `sig` significant digits.
pub fn decimal(x: &Rational, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sig = sig.max(1);
    let a = x.abs();
    let ten = BigInt::from(10);
    // Exponent e with 10^e <= a < 10^(e+1).
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    while pow(e) > a {
        e -= 1;
    }
    while pow(e + 1) <= a {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow(shift);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut digits = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if digits.to_string().len() > sig {
        digits /= &ten;
        shift -= 1;
    }
    let mut s = digits.to_string();
    if shift <= 0 {
        s.push_str(&"0".repeat((-shift) as usize));
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        s.insert(s.len() - shift, '.');
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        s = trimmed.to_string();
    }
    if x.is_negative() {
        s.insert(0, '-');
    }
    s
}

/// Part of an affine line inside the closed window, if it is a proper segment.
pub fn clip_line(l: &AffineLine, window: &Window) -> Option<[(Rational, Rational); 2]> {
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    let mut push = |p: (Rational, Rational)| {
        if window.contains(&p.0, &p.1) && !pts.contains(&p) {
            pts.push(p);
        }
    };
    if !l.b.is_zero() {
        for u in [&window.u_min, &window.u_max] {
            push((u.clone(), -(&l.a * u + &l.c) / &l.b));
        }
    }
    if !l.a.is_zero() {
        for w in [&window.w_min, &window.w_max] {
            push((-(&l.b * w + &l.c) / &l.a, w.clone()));
        }
    }
    pts.sort();
    (pts.len() >= 2).then(|| [pts[0].clone(), pts[pts.len() - 1].clone()])
}

/// Parameters covering `[-16, 16]` finely and `16 < |t| <= 4096` coarsely, sorted.
fn parameter_samples() -> Vec<Rational> {
    let mut out: Vec<Rational> = (-256..=256).map(|k| linalg::ratio(k, 16)).collect();
    out.extend((1..256).flat_map(|k| [linalg::ratio(4096, k), linalg::ratio(-4096, k)]));
    out.sort();
    out.dedup();
    out
}

type Sample = (Rational, Option<(Rational, Rational)>);

/// Bisects a parameter interval that is long in the picture or crosses the
/// window frame, pushing the interior points in order.
fn refine(
    at: &dyn Fn(&Option<Rational>) -> Option<(Rational, Rational)>,
    inside: &dyn Fn(&Option<(Rational, Rational)>) -> bool,
    step: &Rational,
    a: Sample,
    b: Sample,
    depth: usize,
    out: &mut Vec<Option<(Rational, Rational)>>,
) {
    if depth == 0 || !(inside(&a.1) || inside(&b.1)) {
        return;
    }
    let split = match (&a.1, &b.1) {
        (Some(p), Some(q)) => inside(&a.1) != inside(&b.1) || (&p.0 - &q.0).abs().max((&p.1 - &q.1).abs()) > *step,
        _ => true,
    };
    if !split {
        return;
    }
    let tm = (&a.0 + &b.0) / linalg::rat(2);
    let pm = at(&Some(tm.clone()));
    refine(at, inside, step, a, (tm.clone(), pm.clone()), depth - 1, out);
    out.push(pm.clone());
    refine(at, inside, step, (tm, pm), b, depth - 1, out);
}

pub fn render_svg(arr: &Arrangement, chart: &Chart, window: &Window, style: &SvgStyle) -> Result<String> {
    let lines = arrangement::to_chart(arr, chart)?;
    let p = style.precision;
    let x = |u: &Rational| decimal(u, p);
    let y = |w: &Rational| decimal(&-w.clone(), p);
    let width = &window.u_max - &window.u_min;
    let height = &window.w_max - &window.w_min;
    let unit = width.clone().min(height.clone()) / linalg::rat(400);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        x(&window.u_min),
        y(&window.w_max),
        decimal(&width, p),
        decimal(&height, p)
    )
    .unwrap();
    let frame = format!(
        "M {a} {b} L {c} {b} L {c} {d} L {a} {d} Z",
        a = x(&window.u_min),
        b = y(&window.w_min),
        c = x(&window.u_max),
        d = y(&window.w_max)
    );
    writeln!(s, r#"<path d="{frame}" fill="none" stroke="gray" stroke-width="{}"/>"#, decimal(&unit, p)).unwrap();

    if let Some((conic, base)) = &style.conic_overlay {
        let param = conic.parametrization(base)?;
        let at = |t: &Option<Rational>| chart.to_affine(&param.point(t.as_ref()));
        let inside = |p: &Option<(Rational, Rational)>| p.as_ref().is_some_and(|(u, w)| window.contains(u, w));
        let step = &unit * linalg::rat(4);
        let params: Vec<Option<Rational>> = parameter_samples().into_iter().map(Some).chain([None]).collect();
        let mut seq: Vec<Option<(Rational, Rational)>> = Vec::new();
        for pair in params.windows(2) {
            let (p0, p1) = (at(&pair[0]), at(&pair[1]));
            seq.push(p0.clone());
            if let (Some(t0), Some(t1)) = (&pair[0], &pair[1]) {
                refine(&at, &inside, &step, (t0.clone(), p0), (t1.clone(), p1), 16, &mut seq);
            }
        }
        seq.push(at(&None));
        let mut runs: Vec<Vec<(Rational, Rational)>> = vec![Vec::new()];
        for p in seq {
            match p.filter(|(u, w)| window.contains(u, w)) {
                Some(pt) => runs.last_mut().expect("nonempty").push(pt),
                None => runs.push(Vec::new()),
            }
        }
        // The samples run once around the conic; close up through infinity.
        if runs.len() > 1 && !runs[0].is_empty() && !runs[runs.len() - 1].is_empty() {
            let head = runs.remove(0);
            runs.last_mut().expect("nonempty").extend(head);
        }
        for run in runs.iter().filter(|r| r.len() >= 2) {
            let d: Vec<String> = run
                .iter()
                .enumerate()
                .map(|(i, (u, w))| format!("{} {} {}", if i == 0 { "M" } else { "L" }, x(u), y(w)))
                .collect();
            writeln!(s, r#"<path d="{}" fill="none" stroke="red" stroke-width="{}"/>"#, d.join(" "), decimal(&(&unit * linalg::rat(2)), p)).unwrap();
        }
    }

    for (i, l) in lines.iter().enumerate() {
        if let Some([a, b]) = clip_line(l, window) {
            writeln!(
                s,
                r#"<path d="M {} {} L {} {}" stroke="black" stroke-width="{}" data-line="{i}"/>"#,
                x(&a.0),
                y(&a.1),
                x(&b.0),
                y(&b.1),
                decimal(&unit, p)
            )
            .unwrap();
        }
    }

    if style.vertices {
        for v in arrangement::vertices_in_window(arr, chart, window)? {
            let r = &unit * linalg::rat(v.weight as i64 + 1);
            writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="blue"/>"#, x(&v.u), y(&v.w), decimal(&r, p)).unwrap();
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
