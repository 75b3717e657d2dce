//! Text formats: field descriptors, flat `key=value` configs, point clouds,
//! graymaps and decider reports. Files are written atomically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_bigint::BigInt;

use crate::embedding::RepresentationSpace;
use crate::numberfield::PisotField;
use crate::periodicity::{summarize, Agreement, PeriodicityReport};
use crate::poly;
use crate::rauzy::{FractalApprox, MembershipVerdict, Raster, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("empty field descriptor")]
    Empty,
}

/// Minimal-polynomial coefficients, constant term first, separated by
/// whitespace or commas. `#` starts a comment.
pub fn parse_field_descriptor(s: &str) -> Result<Vec<BigInt>, ParseError> {
    let mut out = Vec::new();
    for (n, line) in s.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v = tok.parse::<BigInt>().map_err(|_| ParseError::Syntax {
                line: n + 1,
                msg: format!("not an integer: {tok:?}"),
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

pub fn format_field_descriptor(field: &PisotField) -> String {
    let c: Vec<String> = field.minpoly().iter().map(|c| c.to_string()).collect();
    c.join(" ")
}

/// Flat `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(s: &str) -> Result<BTreeMap<String, String>, ParseError> {
    let mut out = BTreeMap::new();
    for (n, line) in s.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| ParseError::Syntax {
            line: n + 1,
            msg: "expected key = value".into(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(ParseError::Syntax { line: n + 1, msg: "empty key".into() });
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

/// Plain (`P2`) portable graymap with one shade per piece.
pub fn raster_to_pgm(r: &Raster) -> String {
    let mut s = format!("P2\n{} {}\n255\n", r.width, r.height);
    for row in r.pixels.chunks(r.width) {
        let line: Vec<String> = row.iter().map(|&p| r.shade(p).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Point-cloud file: a header naming the field, depth and places, then one
/// `piece coordinates` record per point.
pub fn point_cloud_text(space: &RepresentationSpace, approx: &FractalApprox) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# field: {}", poly::format(space.field().minpoly()));
    let _ = writeln!(s, "# depth: {}", approx.depth);
    let places: Vec<String> = space.descriptors().iter().map(|d| d.label()).collect();
    let _ = writeln!(s, "# places: {}", places.join("; "));
    for (i, c) in approx.pieces.iter().enumerate() {
        for k in 0..c.len() {
            let _ = writeln!(s, "{} {}", i + 1, space.format_point(&c.point(space, k)));
        }
    }
    s
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::In => "In",
        Verdict::Out => "Out",
        Verdict::BoundaryUnknown => "BoundaryUnknown",
    }
}

pub fn agreement_name(a: Agreement) -> &'static str {
    match a {
        Agreement::Agree => "Agree",
        Agreement::GeometricUndecided => "GeometricUndecided",
        Agreement::Conflict => "CONFLICT",
    }
}

pub fn format_verdict(v: &MembershipVerdict) -> String {
    format!(
        "{} distance={:.6e} depth={} tol_in={:.3e} tol_out={:.3e}",
        verdict_name(v.verdict),
        v.distance,
        v.depth,
        v.tol_in,
        v.tol_out
    )
}

/// One record per `x`, then a summary block.
pub fn report_text(reports: &[PeriodicityReport]) -> String {
    let mut s = String::from("# x\texact\tperiod\tgeometric\tdistance\tdepth\tagreement\n");
    for r in reports {
        let x = match r.fraction {
            Some((p, q)) => format!("{p}/{q}"),
            None => r.x.to_string(),
        };
        let _ = writeln!(
            s,
            "{x}\t{}\t{}\t{}\t{:.6e}\t{}\t{}",
            r.exact_verdict,
            r.exact_period,
            verdict_name(r.geometric.verdict),
            r.geometric.distance,
            r.geometric.depth,
            agreement_name(r.agreement)
        );
    }
    let sum = summarize(reports);
    let _ = writeln!(s, "# tested: {}", sum.tested);
    let _ = writeln!(s, "# Agree: {}", sum.agree);
    let _ = writeln!(s, "# GeometricUndecided: {}", sum.undecided);
    let _ = writeln!(s, "# CONFLICT: {}", sum.conflicts);
    s
}
