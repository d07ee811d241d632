//! JSON files for arrangements and point sets.
//!
//! All numbers are strings: integers or `p/q` rationals on input, canonical
//! integers on output. Unknown keys are rejected unless parsing is lenient.

use std::marker::PhantomData;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arrangement::Arrangement;
use crate::curves::Cubic;
use crate::linalg::Rational;
use crate::proj::{HLine, HPoint};

pub const ARRANGEMENT_FORMAT: &str = "tits-arrangement/1";
pub const POINTS_FORMAT: &str = "tits-points/1";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return IoError::Io(e.into());
        }
        // serde_json appends " at line L column C" to its messages.
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        IoError::Parse { line: e.line(), column: e.column(), message }
    }
}

/// An arrangement with an optional cubic through its dual points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementFile {
    pub arrangement: Arrangement,
    pub fitted_cubic: Option<Cubic>,
}

/// A set of tagged points, as produced by dualizing an arrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFile {
    pub points: Vec<HPoint>,
    pub tags: Vec<String>,
}

struct Coeff(Rational);

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("malformed rational {s:?}"));
        let t = s.trim();
        if t.is_empty() || t != s || t.ends_with("/0") || t.contains(char::is_whitespace) {
            return Err(bad());
        }
        Rational::from_str(t).map(Coeff).map_err(|_| bad())
    }
}

fn triple<R: crate::proj::Role>(v: &[Coeff; 3]) -> Result<crate::proj::Homogeneous<R>, String> {
    let r: [Rational; 3] = std::array::from_fn(|i| v[i].0.clone());
    crate::proj::Homogeneous::from_rationals(&r).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    coeffs: [Coeff; 3],
    #[serde(default)]
    tag: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrangement {
    format: String,
    boundary: [Coeff; 3],
    lines: Vec<RawLine>,
    #[serde(default)]
    fitted_cubic: Option<Vec<Coeff>>,
}

/// Deserializes an object as `R` and validates it inside the map visitor, so
/// that validation errors carry the position of the object's end.
fn validated<'de, D, R, T>(d: D, check: fn(R) -> Result<T, String>) -> Result<T, D::Error>
where
    D: serde::Deserializer<'de>,
    R: Deserialize<'de>,
{
    struct Visit<R, T>(fn(R) -> Result<T, String>, PhantomData<R>);

    impl<'de, R: Deserialize<'de>, T> serde::de::Visitor<'de> for Visit<R, T> {
        type Value = T;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an object")
        }

        fn visit_map<A: serde::de::MapAccess<'de>>(self, map: A) -> Result<T, A::Error> {
            let raw = R::deserialize(serde::de::value::MapAccessDeserializer::new(map))?;
            (self.0)(raw).map_err(serde::de::Error::custom)
        }
    }

    d.deserialize_map(Visit(check, PhantomData))
}

struct Checked(ArrangementFile);

impl<'de> Deserialize<'de> for Checked {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        validated(d, check_arrangement).map(Checked)
    }
}

fn check_arrangement(raw: RawArrangement) -> Result<ArrangementFile, String> {
    if raw.format != ARRANGEMENT_FORMAT {
        return Err(format!("unsupported format {:?}, expected {ARRANGEMENT_FORMAT:?}", raw.format));
    }
    let boundary: HLine = triple(&raw.boundary).map_err(|e| format!("boundary: {e}"))?;
    let mut lines = Vec::with_capacity(raw.lines.len());
    let mut tags = Vec::with_capacity(raw.lines.len());
    for (i, l) in raw.lines.iter().enumerate() {
        lines.push(triple(&l.coeffs).map_err(|e| format!("line {i}: {e}"))?);
        tags.push(l.tag.clone());
    }
    let arrangement = Arrangement::with_tags(lines, boundary, tags).map_err(|e| e.to_string())?;
    let fitted_cubic = match raw.fitted_cubic {
        None => None,
        Some(c) if c.len() == 10 => {
            let r: [Rational; 10] = std::array::from_fn(|i| c[i].0.clone());
            Some(Cubic::from_coeffs(&r).map_err(|e| format!("fitted_cubic: {e}"))?)
        }
        Some(c) => return Err(format!("fitted_cubic has {} coefficients, expected 10", c.len())),
    };
    Ok(ArrangementFile { arrangement, fitted_cubic })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    coords: [Coeff; 3],
    #[serde(default)]
    tag: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoints {
    format: String,
    points: Vec<RawPoint>,
}

struct CheckedPoints(PointFile);

impl<'de> Deserialize<'de> for CheckedPoints {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        validated(d, check_points).map(CheckedPoints)
    }
}

fn check_points(raw: RawPoints) -> Result<PointFile, String> {
    if raw.format != POINTS_FORMAT {
        return Err(format!("unsupported format {:?}, expected {POINTS_FORMAT:?}", raw.format));
    }
    let mut points = Vec::new();
    let mut tags = Vec::new();
    for (i, p) in raw.points.iter().enumerate() {
        points.push(triple(&p.coords).map_err(|e| format!("point {i}: {e}"))?);
        tags.push(p.tag.clone());
    }
    Ok(PointFile { points, tags })
}

/// Keys each object level may carry, for lenient parsing.
fn strip_unknown(v: &mut Value, points: bool) {
    let keep = |obj: &mut serde_json::Map<String, Value>, keys: &[&str]| obj.retain(|k, _| keys.contains(&k.as_str()));
    let Value::Object(top) = v else { return };
    let (top_keys, list, item_keys): (&[&str], &str, &[&str]) = if points {
        (&["format", "points"], "points", &["coords", "tag"])
    } else {
        (&["format", "boundary", "lines", "fitted_cubic"], "lines", &["coeffs", "tag"])
    };
    keep(top, top_keys);
    if let Some(Value::Array(items)) = top.get_mut(list) {
        for item in items {
            if let Value::Object(o) = item {
                keep(o, item_keys);
            }
        }
    }
}

fn relaxed<T: for<'de> Deserialize<'de>>(text: &str, points: bool) -> Result<T, IoError> {
    let mut v: Value = serde_json::from_str(text)?;
    strip_unknown(&mut v, points);
    Ok(serde_json::from_value(v)?)
}

/// Parses an arrangement file. With `strict` unset, unknown keys are ignored.
pub fn parse_arrangement(text: &str, strict: bool) -> Result<ArrangementFile, IoError> {
    if strict {
        Ok(serde_json::from_str::<Checked>(text)?.0)
    } else {
        Ok(relaxed::<Checked>(text, false)?.0)
    }
}

pub fn parse_points(text: &str, strict: bool) -> Result<PointFile, IoError> {
    if strict {
        Ok(serde_json::from_str::<CheckedPoints>(text)?.0)
    } else {
        Ok(relaxed::<CheckedPoints>(text, true)?.0)
    }
}

#[derive(Serialize)]
struct OutLine {
    coeffs: [String; 3],
    tag: String,
}

#[derive(Serialize)]
struct OutArrangement {
    format: &'static str,
    boundary: [String; 3],
    lines: Vec<OutLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_cubic: Option<Vec<String>>,
}

#[derive(Serialize)]
struct OutPoint {
    coords: [String; 3],
    tag: String,
}

#[derive(Serialize)]
struct OutPoints {
    format: &'static str,
    points: Vec<OutPoint>,
}

fn strings<R: crate::proj::Role>(h: &crate::proj::Homogeneous<R>) -> [String; 3] {
    h.coords().clone().map(|c| c.to_string())
}

pub fn arrangement_to_json(arr: &Arrangement, fitted_cubic: Option<&Cubic>) -> String {
    let out = OutArrangement {
        format: ARRANGEMENT_FORMAT,
        boundary: strings(arr.boundary()),
        lines: arr
            .lines()
            .iter()
            .zip(arr.tags())
            .map(|(l, t)| OutLine { coeffs: strings(l), tag: t.clone() })
            .collect(),
        fitted_cubic: fitted_cubic.map(|c| c.coeffs().iter().map(|x| x.to_string()).collect()),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("serializable");
    s.push('\n');
    s
}

pub fn points_to_json(points: &PointFile) -> String {
    let out = OutPoints {
        format: POINTS_FORMAT,
        points: points
            .points
            .iter()
            .zip(&points.tags)
            .map(|(p, t)| OutPoint { coords: strings(p), tag: t.clone() })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("serializable");
    s.push('\n');
    s
}

/// Dual points of all lines, tags kept.
pub fn dual_point_file(arr: &Arrangement) -> PointFile {
    PointFile { points: arr.dual_points(), tags: arr.tags().to_vec() }
}

pub fn load(path: &Path, strict: bool) -> Result<ArrangementFile, IoError> {
    parse_arrangement(&std::fs::read_to_string(path)?, strict)
}

pub fn save(path: &Path, arr: &Arrangement, fitted_cubic: Option<&Cubic>) -> Result<(), IoError> {
    std::fs::write(path, arrangement_to_json(arr, fitted_cubic))?;
    Ok(())
}

pub fn load_points(path: &Path, strict: bool) -> Result<PointFile, IoError> {
    parse_points(&std::fs::read_to_string(path)?, strict)
}

pub fn save_points(path: &Path, points: &PointFile) -> Result<(), IoError> {
    std::fs::write(path, points_to_json(points))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gen_near_pencil;
    use crate::proj::line;

    #[test]
    fn round_trip() {
        let arr = gen_near_pencil(3).unwrap();
        let text = arrangement_to_json(&arr, None);
        let back = parse_arrangement(&text, true).unwrap();
        assert_eq!(back.arrangement, arr);
        assert_eq!(arrangement_to_json(&back.arrangement, None), text);
    }

    #[test]
    fn rational_coefficients() {
        let text = r#"{"format":"tits-arrangement/1","boundary":["0","1","0"],
            "lines":[{"coeffs":["1","0","1"],"tag":"a"},{"coeffs":["1/2","-3/4","0"]}]}"#;
        let f = parse_arrangement(text, true).unwrap();
        assert_eq!(f.arrangement.lines(), &[line(1, 0, 1), line(2, -3, 0)][..]);
        assert_eq!(f.arrangement.tags(), &["a".to_string(), String::new()][..]);
    }

    #[test]
    fn validation_errors_have_positions() {
        let dup = r#"{"format":"tits-arrangement/1","boundary":["1","0","1"],
"lines":[{"coeffs":["1","0","1"]}]}"#;
        match parse_arrangement(dup, true) {
            Err(IoError::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("boundary"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let bad = r#"{"format":"tits-arrangement/1","boundary":["0","1","0"],
"lines":[{"coeffs":["1","x","1"]}]}"#;
        assert!(matches!(parse_arrangement(bad, true), Err(IoError::Parse { line: 2, .. })));
        let zero_den = r#"{"format":"tits-arrangement/1","boundary":["0","1","0"],"lines":[{"coeffs":["1/0","1","1"]}]}"#;
        assert!(parse_arrangement(zero_den, true).is_err());
        let twice = r#"{"format":"tits-arrangement/1","boundary":["0","1","0"],"lines":[{"coeffs":["1","0","1"]},{"coeffs":["2","0","2"]}]}"#;
        assert!(parse_arrangement(twice, true).is_err());
    }

    #[test]
    fn unknown_fields() {
        let text = r#"{"format":"tits-arrangement/1","boundary":["0","1","0"],"lines":[{"coeffs":["1","0","1"],"color":"red"}],"note":1}"#;
        assert!(parse_arrangement(text, true).is_err());
        assert_eq!(parse_arrangement(text, false).unwrap().arrangement.len(), 1);
    }

    #[test]
    fn cubic_and_points() {
        let arr = gen_near_pencil(4).unwrap();
        let cubic = Cubic::from_int_coeffs([0, 1, 0, -1, 0, 0, 0, 0, 0, 0]).unwrap();
        let text = arrangement_to_json(&arr, Some(&cubic));
        assert_eq!(parse_arrangement(&text, true).unwrap().fitted_cubic, Some(cubic));
        let pf = dual_point_file(&arr);
        assert_eq!(parse_points(&points_to_json(&pf), true).unwrap(), pf);
    }
}
