//! Text and raster formats.
//!
//! Curve CSV: one metadata line `nu,n,kernel,side` (values, e.g.
//! `0,2,unit,4`), then one `i,x,y` line per step.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurvePath, GridPoint, PathError};
use crate::decimal::{format_f64, format_ratio};
use crate::locality::{BarrierMask, DiffStats, DifferenceMap, Rational};

/// What a curve file says about where the curve came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMeta {
    pub nu: u8,
    pub order: u32,
    pub kernel: String,
}

pub fn write_curve_csv<W: Write>(w: W, meta: &CurveMeta, path: &CurvePath) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().flexible(true).from_writer(w);
    let side = path.side().to_string();
    out.write_record([
        &meta.nu.to_string(),
        &meta.order.to_string(),
        &meta.kernel,
        &side,
    ])?;
    for (i, c) in path.cells().iter().enumerate() {
        out.write_record([i.to_string(), c.x.to_string(), c.y.to_string()])?;
    }
    out.flush()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveCsvError {
    #[error("Malformed: line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("InvalidCurve: {0}")]
    InvalidCurve(PathError),
}

fn bad(line: u64, message: impl Into<String>) -> CurveCsvError {
    CurveCsvError::Malformed {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    what: &str,
    line: u64,
) -> Result<T, CurveCsvError> {
    let raw = rec.get(i).unwrap_or_default();
    raw.trim()
        .parse()
        .map_err(|_| bad(line, format!("bad {what} {raw:?}")))
}

/// Reads a curve CSV and checks the path invariants.
pub fn parse_curve_csv(text: &str) -> Result<(CurveMeta, CurvePath), CurveCsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| bad(1, "empty file"))?
        .map_err(|e| bad(1, e.to_string()))?;
    if header.len() != 4 {
        return Err(bad(1, "expected nu,n,kernel,side"));
    }
    let meta = CurveMeta {
        nu: field(&header, 0, "nu", 1)?,
        order: field(&header, 1, "order", 1)?,
        kernel: header[2].trim().to_string(),
    };
    let side: u32 = field(&header, 3, "side", 1)?;
    if !side.is_power_of_two() || side > 1 << 12 {
        return Err(CurveCsvError::InvalidCurve(PathError::InvalidSide(
            u64::from(side),
        )));
    }
    let expected = side as usize * side as usize;
    let mut cells = Vec::with_capacity(expected.min(1 << 16));
    for (i, rec) in records.enumerate() {
        let line = i as u64 + 2;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        if rec.len() != 3 {
            return Err(bad(line, "expected i,x,y"));
        }
        let index: usize = field(&rec, 0, "index", line)?;
        if index != i {
            return Err(bad(line, format!("index {index}, expected {i}")));
        }
        if cells.len() == expected {
            return Err(CurveCsvError::InvalidCurve(PathError::WrongLength {
                expected: expected as u64,
                found: expected as u64 + 1,
            }));
        }
        cells.push(GridPoint::new(
            field(&rec, 1, "x", line)?,
            field(&rec, 2, "y", line)?,
        ));
    }
    let path = CurvePath::new(side, cells).map_err(CurveCsvError::InvalidCurve)?;
    Ok((meta, path))
}

/// Difference-map values as a matrix, top row first.
pub fn write_diffmap_csv<W: Write>(w: W, map: &DifferenceMap) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for y in (0..map.side()).rev() {
        out.write_record((0..map.side()).map(|x| format_ratio(map.value(x, y))))?;
    }
    out.flush()
}

/// `k,value` rows of a boundary profile.
pub fn write_profile_csv<W: Write>(w: W, profile: &[Rational]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "value"])?;
    for (k, v) in profile.iter().enumerate() {
        out.write_record([k.to_string(), format_ratio(*v)])?;
    }
    out.flush()
}

/// Log-scaled gray levels, row-major from the top row.
fn gray_levels(map: &DifferenceMap) -> Vec<u8> {
    let side = map.side();
    let mut values = Vec::with_capacity(side as usize * side as usize);
    for y in (0..side).rev() {
        for x in 0..side {
            let v = map.value(x, y);
            values.push(*v.numer() as f64 / *v.denom() as f64);
        }
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    let span = (hi / lo).ln();
    values
        .into_iter()
        .map(|v| {
            if span > 0.0 {
                (255.0 * (v / lo).ln() / span).round() as u8
            } else {
                128
            }
        })
        .collect()
}

/// Binary 8-bit PGM, gray level proportional to `ln(value)`.
pub fn pgm_bytes(map: &DifferenceMap) -> Vec<u8> {
    let side = map.side();
    let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
    out.extend(gray_levels(map));
    out
}

/// Binary PPM of the log-gray map with barrier cells in blue.
pub fn ppm_bytes(map: &DifferenceMap, mask: &BarrierMask) -> Vec<u8> {
    let side = map.side();
    let mut out = format!("P6\n{side} {side}\n255\n").into_bytes();
    let grays = gray_levels(map);
    let rows = (0..side).rev().flat_map(|y| (0..side).map(move |x| (x, y)));
    for ((x, y), g) in rows.zip(grays) {
        if mask.is_flagged(x, y) {
            out.extend([0, 0, 255]);
        } else {
            out.extend([g, g, g]);
        }
    }
    out
}

fn number(s: String) -> f64 {
    s.parse().expect("six-digit decimal")
}

/// Statistics of one curve as a flat key/value record.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StatsRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<u8>,
    pub kernel: String,
    pub order: u32,
    pub side: u32,
    pub convention: String,
    pub stddev: &'static str,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub median: f64,
    pub entropy_bits: f64,
    pub pct_below_mean: f64,
}

impl StatsRecord {
    /// Numbers are rounded to six significant digits first, so the record
    /// text does not depend on float formatting details.
    pub fn new(meta: &CurveMeta, map: &DifferenceMap, stats: &DiffStats) -> StatsRecord {
        StatsRecord {
            nu: Some(meta.nu),
            kernel: meta.kernel.clone(),
            order: meta.order,
            side: map.side(),
            convention: map.convention().name().to_string(),
            stddev: "population",
            mean: number(format_ratio(stats.mean)),
            max: number(format_ratio(stats.max)),
            min: number(format_ratio(stats.min)),
            median: number(format_ratio(stats.median)),
            entropy_bits: number(format_f64(stats.entropy_bits)),
            pct_below_mean: number(format_ratio(stats.pct_below_mean)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::build_curve;
    use crate::kernel::KernelSpec;
    use crate::locality::{barrier_mask, diff_stats, difference_map, Convention};

    fn meta() -> CurveMeta {
        CurveMeta {
            nu: 0,
            order: 1,
            kernel: "unit".into(),
        }
    }

    #[test]
    fn curve_csv_round_trip() {
        let path = KernelSpec::unit().path().clone();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &meta(), &path).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "0,1,unit,2\n0,0,0\n1,0,1\n2,1,1\n3,1,0\n");
        assert_eq!(parse_curve_csv(&text).unwrap(), (meta(), path));
    }

    #[test]
    fn curve_csv_errors() {
        let cases = [
            "",
            "0,1,unit\n",
            "0,1,unit,2\n0,0,0\n2,0,1\n",
            "0,1,unit,2\n0,0,0\n1,0\n",
            "x,1,unit,2\n",
            "0,1,unit,2\n0,0,-1\n",
        ];
        for text in cases {
            assert!(
                matches!(parse_curve_csv(text), Err(CurveCsvError::Malformed { .. })),
                "{text:?}"
            );
        }
        for text in [
            "0,1,unit,3\n",
            "0,1,unit,2\n0,0,0\n1,0,1\n2,1,1\n",
            "0,1,unit,2\n0,0,0\n1,1,1\n2,0,1\n3,1,0\n4,0,0\n",
            "0,1,unit,2\n0,0,0\n1,1,1\n2,0,1\n3,5,0\n",
        ] {
            assert!(
                matches!(parse_curve_csv(text), Err(CurveCsvError::InvalidCurve(_))),
                "{text:?}"
            );
        }
    }

    #[test]
    fn rasters_have_one_sample_per_cell() {
        let path = build_curve(0, 3, &KernelSpec::unit()).unwrap();
        let map = difference_map(&path, Convention::default());
        let mask = barrier_mask(&map).unwrap();
        let pgm = pgm_bytes(&map);
        assert!(pgm.starts_with(b"P5\n8 8\n255\n"));
        assert_eq!(pgm.len(), 11 + 64);
        let ppm = ppm_bytes(&map, &mask);
        assert!(ppm.starts_with(b"P6\n8 8\n255\n"));
        assert_eq!(ppm.len(), 11 + 3 * 64);
        let blue = ppm[11..].chunks(3).filter(|p| p == &[0, 0, 255]).count();
        assert_eq!(blue, mask.flagged_count());
    }

    #[test]
    fn diffmap_csv_top_row_first() {
        let map = difference_map(KernelSpec::unit().path(), Convention::ExistingNeighbors);
        let mut buf = Vec::new();
        write_diffmap_csv(&mut buf, &map).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1.33333,1.33333\n2,2\n");
    }

    #[test]
    fn record_field_names() {
        let map = difference_map(KernelSpec::unit().path(), Convention::ExistingNeighbors);
        let stats = diff_stats(&map).unwrap();
        let json = StatsRecord::new(&meta(), &map, &stats).to_json();
        assert_eq!(
            json,
            r#"{"nu":0,"kernel":"unit","order":1,"side":2,"convention":"existing","stddev":"population","mean":1.66667,"max":2.0,"min":1.33333,"median":1.66667,"entropy_bits":1.0,"pct_below_mean":50.0}"#
        );
    }
}
