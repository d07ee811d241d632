use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tits_arrangement::arrangement::{self, Arrangement, Axis, Chart, ChartKind, Window};
use tits_arrangement::classify::{self, Verdict};
use tits_arrangement::curves::{Conic, CubicFactorType, LineConicMeet};
use tits_arrangement::families::{self, SeedQuadruple};
use tits_arrangement::io::{self, IoError};
use tits_arrangement::svg::{self, SvgStyle};
use tits_arrangement::{HLine, HPoint, Rational};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PARSE: u8 = 3;

/// Like `println!`, but a closed pipe (`tits ... | head`) is not an error.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "tits", version, about = "Exact rank-three line arrangements: generate, verify, classify, render")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    NearPencil,
    A2tilde,
    A2tilde0,
    Lemma5,
}

#[derive(clap::Args)]
struct View {
    /// Input arrangement file.
    file: PathBuf,
    /// boundary-infinity, x1, y1, z1 or custom:a,b,c
    #[arg(long, allow_hyphen_values = true)]
    chart: String,
    /// u0,w0,u1,w1
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Ignore unknown keys in the input file.
    #[arg(long)]
    lenient: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write a finite piece of one of the families.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// K_MIN..K_MAX; for near-pencil the line count is K_MAX - K_MIN + 1.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// p0,p1,p2,p3,apex as x:y:z triples (lemma5 only).
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check simpliciality of the interior cells in a window.
    Verify {
        #[command(flatten)]
        view: View,
        #[arg(long)]
        json: bool,
    },
    /// Decide near pencil, Ã₂ or Ã₂⁰.
    Classify {
        #[command(flatten)]
        view: View,
        #[arg(long)]
        json: bool,
    },
    /// Draw the arrangement inside a window.
    Render {
        #[command(flatten)]
        view: View,
        #[arg(long)]
        svg: PathBuf,
        /// Mark vertices, sized by weight.
        #[arg(long)]
        vertices: bool,
        /// Draw the conic enveloped by the conic-family lines.
        #[arg(long)]
        conic_overlay: bool,
    },
    /// Write the dual points of all lines.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        lenient: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Runtime(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse { .. } => Failure::Parse(e.to_string()),
            IoError::Io(_) => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<tits_arrangement::Error> for Failure {
    fn from(e: tits_arrangement::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    Rational::from_str(s.trim()).map_err(|_| Failure::Parse(format!("malformed rational {s:?}")))
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Parse(format!("malformed range {s:?}, expected K_MIN..K_MAX"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_triple(s: &str, sep: char) -> Result<[Rational; 3], Failure> {
    let parts: Vec<&str> = s.split(sep).collect();
    if parts.len() != 3 {
        return Err(Failure::Parse(format!("expected three values in {s:?}")));
    }
    Ok([parse_rational(parts[0])?, parse_rational(parts[1])?, parse_rational(parts[2])?])
}

fn parse_chart(s: &str, arr: &Arrangement) -> Result<Chart, Failure> {
    let kind = match s {
        "boundary-infinity" => ChartKind::BoundaryAtInfinity,
        "x1" => ChartKind::Coordinate(Axis::X),
        "y1" => ChartKind::Coordinate(Axis::Y),
        "z1" => ChartKind::Coordinate(Axis::Z),
        _ => {
            let coeffs = s.strip_prefix("custom:").ok_or_else(|| Failure::Parse(format!("unknown chart {s:?}")))?;
            let l = HLine::from_rationals(&parse_triple(coeffs, ',')?).map_err(|e| Failure::Parse(e.to_string()))?;
            ChartKind::Custom(l)
        }
    };
    Ok(Chart::new(&kind, arr))
}

fn parse_window(s: &str) -> Result<Window, Failure> {
    let v: Vec<Rational> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    let [u0, w0, u1, w1]: [Rational; 4] = v.try_into().map_err(|_| Failure::Parse(format!("window {s:?} needs u0,w0,u1,w1")))?;
    Window::new(u0, u1, w0, w1).map_err(|e| Failure::Parse(e.to_string()))
}

fn parse_seed(s: &str) -> Result<SeedQuadruple, Failure> {
    let pts: Vec<HPoint> = s
        .split(',')
        .map(|t| parse_triple(t, ':').and_then(|r| HPoint::from_rationals(&r).map_err(|e| Failure::Parse(e.to_string()))))
        .collect::<Result<_, _>>()?;
    let [p0, p1, p2, p3, apex]: [HPoint; 5] = pts.try_into().map_err(|_| Failure::Parse("seed needs five points".into()))?;
    Ok(SeedQuadruple::from_points_and_apex([p0, p1, p2, p3], apex)?)
}

fn load_view(view: &View) -> Result<(Arrangement, Chart, Window), Failure> {
    let file = io::load(&view.file, !view.lenient)?;
    let chart = parse_chart(&view.chart, &file.arrangement)?;
    let window = parse_window(&view.window)?;
    Ok((file.arrangement, chart, window))
}

fn strings<R: tits_arrangement::proj::Role>(h: &tits_arrangement::proj::Homogeneous<R>) -> Value {
    json!(h.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn gen(family: Family, range: &str, seed: Option<&str>, out: &Path) -> Result<u8, Failure> {
    let (a, b) = parse_range(range)?;
    let arr = match family {
        Family::NearPencil => {
            let n = usize::try_from(b - a + 1).map_err(|_| Failure::Parse(format!("empty range {range:?}")))?;
            families::gen_near_pencil(n)?
        }
        Family::A2tilde => families::gen_affine_a2(a, b)?,
        Family::A2tilde0 => families::gen_a2tilde0(a, b)?,
        Family::Lemma5 => {
            let seed = match seed {
                Some(s) => parse_seed(s)?,
                None => SeedQuadruple::canonical(),
            };
            families::gen_lemma5(&seed, a, b)?
        }
    };
    io::save(out, &arr, None)?;
    Ok(0)
}

fn verify(view: &View, as_json: bool) -> Result<u8, Failure> {
    let (arr, chart, window) = load_view(view)?;
    let report = arrangement::simplicial_report(&arr, &chart, &window)?;
    let vertices = arrangement::vertices_in_window(&arr, &chart, &window)?;
    let witness = arrangement::near_pencil_probe(&arr, &chart, &window)?;
    let boundary = arrangement::boundary_vertex_check(&arr);
    if as_json {
        let v = json!({
            "simplicial": report.is_simplicial(),
            "interior_cells": report.interior_cells,
            "triangles": report.triangles,
            "strip_chambers": report.strip_chambers,
            "violations": report.violations.iter().map(|v| json!({"cell": v.cell, "corners": v.corners, "reason": v.reason})).collect::<Vec<_>>(),
            "vertices": vertices.len(),
            "max_weight": vertices.iter().map(|v| v.weight).max().unwrap_or(0),
            "near_pencil_witness": witness.as_ref().map(|w| json!({"line": w.line, "v1": strings(&w.v1), "v2": strings(&w.v2)})),
            "boundary_vertices": boundary.count,
        });
        out!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        out!("interior cells: {}, triangles: {}, violations: {}", report.interior_cells, report.triangles, report.violations.len());
        for v in &report.violations {
            out!("  cell {}: {}", v.cell, v.reason);
        }
        out!("vertices in window: {}", vertices.len());
        if let Some(w) = &witness {
            out!("near-pencil witness on line {}: {} and {}", w.line, w.v1, w.v2);
        }
        out!("boundary vertices: {}", boundary.count);
    }
    Ok(if report.is_simplicial() { 0 } else { EXIT_VALIDATION })
}

fn factor_json(f: &CubicFactorType) -> Value {
    match f {
        CubicFactorType::ThreeLines { lines, concurrent, point } => json!({
            "type": "ThreeLines",
            "lines": lines.iter().map(strings).collect::<Vec<_>>(),
            "concurrent": concurrent,
            "point": point.as_ref().map(strings),
        }),
        CubicFactorType::ConicPlusLine { relation, conic, line } => {
            let (rel, pts) = match relation {
                LineConicMeet::Disjoint => ("Disjoint", vec![]),
                LineConicMeet::Tangent(p) => ("Tangent", vec![strings(p)]),
                LineConicMeet::Secant(Some((p, q))) => ("Secant", vec![strings(p), strings(q)]),
                LineConicMeet::Secant(None) => ("Secant", vec![]),
            };
            json!({
                "type": "ConicPlusLine",
                "relation": rel,
                "points": pts,
                "conic": conic.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "line": strings(line),
            })
        }
        CubicFactorType::LineTimesIrrationalPair { line, kind, .. } => {
            json!({"type": "LineTimesIrrationalPair", "line": strings(line), "kind": format!("{kind:?}")})
        }
        CubicFactorType::NoRationalLinearFactor => json!({"type": "NoRationalLinearFactor"}),
    }
}

fn classify_cmd(view: &View, as_json: bool) -> Result<u8, Failure> {
    let (arr, chart, window) = load_view(view)?;
    let c = classify::classify(&arr, &chart, &window)?;
    let reason = match &c.verdict {
        Verdict::Unsupported(r) => Some(r),
        _ => None,
    };
    if as_json {
        let v = json!({
            "verdict": c.verdict.name(),
            "reason": reason.map(|r| r.code()),
            "detail": reason.map(|r| r.to_string()),
            "cubic": c.cubic.as_ref().map(|q| q.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "factor": c.factor.as_ref().map(factor_json),
            "near_pencil_witness": c.near_pencil.as_ref().map(|w| json!({"line": w.line, "v1": strings(&w.v1), "v2": strings(&w.v2)})),
            "reducible_chamber": c.reducible_chamber.as_ref().map(|d| json!(d.nodes.to_vec())),
            "normalizer": c.normalizer.as_ref().map(|t| json!(t.matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())),
        });
        out!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        out!("verdict: {}", c.verdict.name());
        if let Some(r) = reason {
            out!("reason: {} ({r})", r.code());
        }
        if let Some(q) = &c.cubic {
            out!("cubic: {q}");
        }
        if let Some(w) = &c.near_pencil {
            out!("near-pencil witness on line {}: {} and {}", w.line, w.v1, w.v2);
        }
        if let Some(d) = &c.reducible_chamber {
            out!("reducible chamber: {d}");
        }
        if let Some(t) = &c.normalizer {
            out!("normalizing projectivity: {t}");
        }
    }
    Ok(if reason.is_some() { EXIT_VALIDATION } else { 0 })
}

/// Envelope of the conic-family lines with a rational point on it.
fn envelope(arr: &Arrangement) -> Option<(Conic, HPoint)> {
    let duals = arr.dual_points();
    let cubic = match tits_arrangement::Cubic::fit(&duals).ok()? {
        tits_arrangement::curves::CubicFit::Unique(c) => c,
        _ => return None,
    };
    let CubicFactorType::ConicPlusLine { conic, .. } = cubic.factor_type(&classify::candidate_lines(&duals)) else {
        return None;
    };
    let env = conic.dual().ok()?;
    let tangent = arr.lines().iter().find(|l| conic.contains(&l.dual()))?;
    match env.line_intersection(tangent).ok()? {
        LineConicMeet::Tangent(p) => Some((env, p)),
        _ => None,
    }
}

fn render(view: &View, out: &Path, vertices: bool, overlay: bool) -> Result<u8, Failure> {
    let (arr, chart, window) = load_view(view)?;
    let conic_overlay = if overlay {
        Some(envelope(&arr).ok_or_else(|| Failure::Runtime("no conic envelope among the lines".into()))?)
    } else {
        None
    };
    let style = SvgStyle { vertices, conic_overlay, ..SvgStyle::default() };
    std::fs::write(out, svg::render_svg(&arr, &chart, &window, &style)?).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(0)
}

fn dual(file: &Path, out: &Path, lenient: bool) -> Result<u8, Failure> {
    let f = io::load(file, !lenient)?;
    io::save_points(out, &io::dual_point_file(&f.arrangement))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen { family, range, seed, out } => gen(*family, range, seed.as_deref(), out),
        Command::Verify { view, json } => verify(view, *json),
        Command::Classify { view, json } => classify_cmd(view, *json),
        Command::Render { view, svg, vertices, conic_overlay } => render(view, svg, *vertices, *conic_overlay),
        Command::Dual { file, out, lenient } => dual(file, out, *lenient),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
