//! Plain-text point files: one point per line, `x y u` for sources and
//! `x y` for targets. Blank lines and lines starting with `#` are skipped.
//! Values are written in Rust's shortest round-trip decimal form.

use std::io::{BufRead, Write};

use crate::fmm::{Source, Target};
use crate::{Error, Result};

fn parse_fields(line: &str, line_no: usize, expected: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: {f:?}"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse { line: line_no, message: format!("non-finite value {f:?}") })
            }
        })
        .collect()
}

fn read_records<R: BufRead>(reader: R, expected: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(parse_fields(trimmed, i + 1, expected)?);
    }
    Ok(out)
}

pub fn read_sources<R: BufRead>(reader: R) -> Result<Vec<Source>> {
    Ok(read_records(reader, 3)?.into_iter().map(|f| Source::new(f[0], f[1], f[2])).collect())
}

pub fn read_targets<R: BufRead>(reader: R) -> Result<Vec<Target>> {
    Ok(read_records(reader, 2)?.into_iter().map(|f| Target::new(f[0], f[1])).collect())
}

pub fn write_sources<W: Write>(mut writer: W, sources: &[Source]) -> Result<()> {
    writeln!(writer, "# x y u")?;
    for s in sources {
        writeln!(writer, "{} {} {}", s.position.re, s.position.im, s.strength)?;
    }
    Ok(())
}

pub fn write_targets<W: Write>(mut writer: W, targets: &[Target]) -> Result<()> {
    writeln!(writer, "# x y")?;
    for t in targets {
        writeln!(writer, "{} {}", t.position.re, t.position.im)?;
    }
    Ok(())
}
