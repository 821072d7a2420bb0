//! Matrix files.
//!
//! Two formats are understood. JSON is an object
//! `{"rows": m, "cols": n, "data": [[[re, im], ...], ...]}` with one inner
//! array per row. Text starts with a line `m n`, followed by `m` lines of `n`
//! whitespace-separated complex tokens: `a`, `bi`, `a+bi` or `a-bi`, where
//! `a` and `b` are decimals with an optional exponent and a bare `i` means
//! `1i`. Blank lines and lines starting with `#` are ignored.
//!
//! Serialization writes every float in its shortest round-trip form, so
//! `parse(serialize(m)) == m` bit for bit in both formats.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use numrad_core::matrix::ComplexMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    /// `.json` files are JSON; otherwise content starting with `{` is JSON
    /// and everything else is text.
    pub fn detect(path: Option<&Path>, content: &str) -> Format {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            Some(e) if e.eq_ignore_ascii_case("txt") => Format::Text,
            _ if content.trim_start().starts_with('{') => Format::Json,
            _ => Format::Text,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(format!("unknown matrix format {s:?} (expected json or text)")),
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse_matrix(content: &str, format: Format) -> Result<ComplexMatrix, ParseError> {
    match format {
        Format::Json => parse_json(content),
        Format::Text => parse_text(content),
    }
}

pub fn serialize_matrix(m: &ComplexMatrix, format: Format) -> String {
    match format {
        Format::Json => to_json(m),
        Format::Text => to_text(m),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

struct CheckedJson(ComplexMatrix);

// Validating inside the map visitor lets serde_json attach a position to
// shape errors.
impl<'de> Deserialize<'de> for CheckedJson {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = CheckedJson;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a matrix object with rows, cols and data")
            }

            fn visit_map<A: serde::de::MapAccess<'de>>(self, map: A) -> Result<CheckedJson, A::Error> {
                let raw = RawJson::deserialize(serde::de::value::MapAccessDeserializer::new(map))?;
                CheckedJson::try_from(raw).map_err(serde::de::Error::custom)
            }
        }
        d.deserialize_map(V)
    }
}

impl TryFrom<RawJson> for CheckedJson {
    type Error = String;

    fn try_from(raw: RawJson) -> Result<Self, String> {
        if raw.rows == 0 || raw.cols == 0 {
            return Err(format!("dimensions must be positive, got {}x{}", raw.rows, raw.cols));
        }
        if raw.data.len() != raw.rows {
            return Err(format!("expected {} rows in data, found {}", raw.rows, raw.data.len()));
        }
        let mut entries = Vec::with_capacity(raw.rows * raw.cols);
        for (i, row) in raw.data.iter().enumerate() {
            if row.len() != raw.cols {
                return Err(format!("row {} has {} entries, expected {}", i + 1, row.len(), raw.cols));
            }
            entries.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
        }
        ComplexMatrix::from_vec(raw.rows, raw.cols, entries)
            .map(CheckedJson)
            .map_err(|e| e.to_string())
    }
}

fn parse_json(content: &str) -> Result<ComplexMatrix, ParseError> {
    serde_json::from_str::<CheckedJson>(content)
        .map(|c| c.0)
        .map_err(|e| {
            // serde_json appends " at line L column C" to the message
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
            ParseError::new(e.line(), e.column(), message)
        })
}

fn to_json(m: &ComplexMatrix) -> String {
    let data = (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let doc = JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        data,
    };
    // serde_json writes floats with ryu, which is shortest round-trip
    serde_json::to_string(&doc).expect("finite entries serialize")
}

fn parse_real(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
        && s.bytes().any(|b| b.is_ascii_digit());
    ok.then(|| s.parse().ok()).flatten().filter(|x: &f64| x.is_finite())
}

/// Parses one complex token.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let Some(body) = token.strip_suffix('i') else {
        return parse_real(token).map(|re| Complex64::new(re, 0.0));
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s)?,
    };
    Some(Complex64::new(re, im))
}

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let len = rest[start..].find(char::is_whitespace).unwrap_or(rest.len() - start);
        let column = line[..offset + start].chars().count() + 1;
        let token = &rest[start..start + len];
        offset += start + len;
        rest = &rest[start + len..];
        Some((column, token))
    })
}

fn parse_text(content: &str) -> Result<ComplexMatrix, ParseError> {
    let mut lines = content
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (header_line, header) = lines.next().ok_or_else(|| ParseError::new(1, 1, "empty matrix file"))?;
    let dims: Vec<(usize, &str)> = tokens(header).collect();
    if dims.len() != 2 {
        let col = dims.get(2).map_or(1, |t| t.0);
        return Err(ParseError::new(header_line, col, "header must be \"rows cols\""));
    }
    let dim = |(col, tok): (usize, &str)| match tok.parse::<usize>() {
        Ok(0) | Err(_) => Err(ParseError::new(header_line, col, format!("invalid dimension {tok:?}"))),
        Ok(d) => Ok(d),
    };
    let (rows, cols) = (dim(dims[0])?, dim(dims[1])?);

    let mut entries = Vec::with_capacity(rows * cols);
    let mut last_line = header_line;
    for r in 0..rows {
        let Some((line_no, line)) = lines.next() else {
            return Err(ParseError::new(
                last_line + 1,
                1,
                format!("expected {rows} rows, found {r}"),
            ));
        };
        last_line = line_no;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == cols {
                return Err(ParseError::new(line_no, col, format!("row {} has more than {cols} entries", r + 1)));
            }
            let z = parse_complex(tok).ok_or_else(|| ParseError::new(line_no, col, format!("malformed complex number {tok:?}")))?;
            entries.push(z);
            count += 1;
        }
        if count != cols {
            let end = line.chars().count() + 1;
            return Err(ParseError::new(line_no, end, format!("row {} has {count} entries, expected {cols}", r + 1)));
        }
    }
    if let Some((line_no, line)) = lines.next() {
        let col = tokens(line).next().map_or(1, |t| t.0);
        return Err(ParseError::new(line_no, col, format!("expected {rows} rows, found more")));
    }
    ComplexMatrix::from_vec(rows, cols, entries).map_err(|e| ParseError::new(header_line, 1, e.to_string()))
}

/// Shortest round-trip decimal, switching to exponent form for very large or
/// small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.to_bits() == 0 {
        return fmt_f64(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

fn to_text(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| fmt_complex(z)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_tokens() {
        let cases = [
            ("1", c(1.0, 0.0)),
            ("-2.5", c(-2.5, 0.0)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("1i", c(0.0, 1.0)),
            ("3-4i", c(3.0, -4.0)),
            ("1e-3+2E+2i", c(1e-3, 200.0)),
            ("-1e5-i", c(-1e5, -1.0)),
            ("+2+i", c(2.0, 1.0)),
            (".5-.25i", c(0.5, -0.25)),
        ];
        for (tok, z) in cases {
            assert_eq!(parse_complex(tok), Some(z), "{tok}");
        }
        for bad in ["", "x", "1+", "ii", "1+2", "inf", "nan", "1e", "2i3", "1++2i", "--1"] {
            assert_eq!(parse_complex(bad), None, "{bad}");
        }
    }

    #[test]
    fn text_examples() {
        let shift = parse_matrix("2 2\n0 1\n0 0", Format::Text).unwrap();
        assert_eq!(shift, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap());
        let d = parse_matrix("2 2\n1i 0\n0 1\n", Format::Text).unwrap();
        assert_eq!(d, ComplexMatrix::diag(&[c(0.0, 1.0), c(1.0, 0.0)]));
        let commented = parse_matrix("# shift\n2 2\n\n0 1\n0 0\n", Format::Text).unwrap();
        assert_eq!(commented, shift);
    }

    #[test]
    fn text_errors_carry_positions() {
        let e = parse_matrix("2 2\n0 1x\n0 0", Format::Text).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("1x"));
        let e = parse_matrix("2 2\n0 1\n0", Format::Text).unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));
        let e = parse_matrix("2 2\n0 1 2\n0 0", Format::Text).unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_matrix("2 2\n0 1", Format::Text).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix("2 x\n0 1", Format::Text).unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        let e = parse_matrix("1 1\n1\n2", Format::Text).unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert!(parse_matrix("", Format::Text).is_err());
        assert!(parse_matrix("0 2\n", Format::Text).is_err());
    }

    #[test]
    fn json_examples() {
        let m = parse_matrix(r#"{"rows": 1, "cols": 2, "data": [[[1, 0], [0, -1.5]]]}"#, Format::Json).unwrap();
        assert_eq!(m, ComplexMatrix::from_vec(1, 2, vec![c(1.0, 0.0), c(0.0, -1.5)]).unwrap());

        let e = parse_matrix(r#"{"rows": 2, "cols": 1, "data": [[[1, 0]]]}"#, Format::Json).unwrap_err();
        assert!(e.message.contains("expected 2 rows") && e.message.contains("found 1"), "{e}");
        assert_eq!(e.line, 1);
        let e = parse_matrix("{\"rows\": 1,\n \"cols\": 1, \"data\": [[[1]]]}", Format::Json).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_matrix(r#"{"rows": 1, "cols": 2, "data": [[[1, 0]]]}"#, Format::Json).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1, "data": [[[1, 0]]], "x": 1}"#, Format::Json).is_err());
    }

    #[test]
    fn round_trips_awkward_values() {
        let vals = [0.0, -0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e300, 5e-324, f64::MAX, 123456789.123, 1e16, 1e-5];
        let entries: Vec<Complex64> = vals.iter().zip(vals.iter().rev()).map(|(&a, &b)| c(a, b)).collect();
        let m = ComplexMatrix::from_vec(1, entries.len(), entries).unwrap();
        for f in [Format::Json, Format::Text] {
            let back = parse_matrix(&serialize_matrix(&m, f), f).unwrap();
            let bits = |m: &ComplexMatrix| m.as_slice().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
            assert_eq!(bits(&back), bits(&m), "{f:?}");
        }
    }

    #[test]
    fn detects_format() {
        assert_eq!(Format::detect(Some(Path::new("a.JSON")), "2 2"), Format::Json);
        assert_eq!(Format::detect(Some(Path::new("a.txt")), "{"), Format::Text);
        assert_eq!(Format::detect(None, "  {\"rows\""), Format::Json);
        assert_eq!(Format::detect(Some(Path::new("a")), "2 2\n"), Format::Text);
    }
}
