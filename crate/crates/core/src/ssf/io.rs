use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{Jump, PointStatus, SsfCurve, SsfPoint};
use crate::error::{Result, SsfError};

/// `# key=value` lines preceding the CSV table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurveHeader {
    pub entries: BTreeMap<String, String>,
}

impl CurveHeader {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }
}

fn format_jumps(jumps: &[Jump]) -> String {
    jumps.iter().map(|j| format!("{:.16e}:{}", j.lambda, j.size)).collect::<Vec<_>>().join(";")
}

fn parse_jumps(s: &str) -> Result<Vec<Jump>> {
    s.split(';')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (l, n) = t.split_once(':').ok_or_else(|| SsfError::InvalidInput(format!("bad jump entry {t:?}")))?;
            let bad = || SsfError::InvalidInput(format!("bad jump entry {t:?}"));
            Ok(Jump { lambda: l.parse().map_err(|_| bad())?, size: n.parse().map_err(|_| bad())? })
        })
        .collect()
}

/// Writes the curve as `lambda,xi,err_est,converged` with 17 significant
/// digits. The header carries the caller's entries plus the jump list.
pub fn write_curve_csv<W: Write>(mut out: W, curve: &SsfCurve, header: &CurveHeader) -> Result<()> {
    for (k, v) in &header.entries {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "# jumps={}", format_jumps(&curve.jumps))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "xi", "err_est", "converged"])?;
    for p in &curve.points {
        w.write_record([
            format!("{:.16e}", p.lambda),
            format!("{:.16e}", p.xi),
            format!("{:.16e}", p.err),
            p.converged().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a curve table back. Points are marked `Excluded` when they lie within
/// `exclusion_radius` of zero or a listed jump.
pub fn read_curve_csv<R: BufRead>(input: R, exclusion_radius: f64) -> Result<(CurveHeader, Vec<SsfPoint>, Vec<Jump>)> {
    let mut header = CurveHeader::default();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        match line.strip_prefix('#') {
            Some(rest) => {
                if let Some((k, v)) = rest.trim().split_once('=') {
                    header.insert(k.trim(), v.trim());
                }
            }
            None => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    let jumps = parse_jumps(header.get("jumps").unwrap_or(""))?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut points = Vec::new();
    for record in reader.deserialize() {
        let (lambda, xi, err, converged): (f64, f64, f64, bool) = record?;
        let near = std::iter::once(0.0).chain(jumps.iter().map(|j| j.lambda)).any(|p| (lambda - p).abs() < exclusion_radius);
        let status = match (near, converged) {
            (true, _) => PointStatus::Excluded,
            (false, true) => PointStatus::Converged,
            (false, false) => PointStatus::NotConverged,
        };
        points.push(SsfPoint { lambda, xi, err, status });
    }
    Ok((header, points, jumps))
}
