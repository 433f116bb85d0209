//! File formats shared by the command line tool and the bindings.
//!
//! - signals: CSV `index,re,im`, or binary `GDK1`: a 16-byte header (magic
//!   `GDK1`, `u32` length `K`, `u32` flags, 4 reserved zero bytes) followed by
//!   little-endian `f64` values, interleaved `re, im` when flag bit 0 is set
//!   and real parts only otherwise;
//! - DGT coefficients: CSV `l,k,re,im`;
//! - dual samples: `# key=value` header lines, then CSV `q,t,gamma_value`;
//! - iteration traces: CSV `variant,k,error,gamma_norm`.
//!
//! Floats are written with 17 significant digits, so files round-trip
//! exactly.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;

use crate::discrete::DgtCoefficients;
use crate::dual::DualSamples;
use crate::schulz::IterationTrace;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"GDK1";
const FLAG_COMPLEX: u32 = 1;

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

fn parse<T: std::str::FromStr>(field: Option<&str>, what: &str, line: usize) -> Result<T> {
    let s = field.ok_or_else(|| Error::Format(format!("record {line}: missing {what}")))?;
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("record {line}: cannot parse {what} from {s:?}")))
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r)
}

pub fn write_signal_csv<W: Write>(w: W, v: &[Complex64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["index", "re", "im"]).map_err(csv_err)?;
    for (i, c) in v.iter().enumerate() {
        out.write_record([i.to_string(), fmt_float(c.re), fmt_float(c.im)])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads `index,re,im` rows; indices must be `0, 1, 2, ...` in order. A
/// missing `im` column is read as zero.
pub fn read_signal_csv<R: Read>(r: R) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (line, rec) in reader(r).records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let idx: usize = parse(rec.get(0), "index", line + 1)?;
        if idx != out.len() {
            return Err(Error::Format(format!(
                "record {}: expected index {}, found {idx}",
                line + 1,
                out.len()
            )));
        }
        let re: f64 = parse(rec.get(1), "re", line + 1)?;
        let im: f64 = match rec.get(2) {
            Some(s) if !s.is_empty() => parse(Some(s), "im", line + 1)?,
            _ => 0.0,
        };
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

/// Writes the binary format; real vectors (all imaginary parts zero) are
/// stored without the imaginary parts.
pub fn write_signal_bin<W: Write>(mut w: W, v: &[Complex64]) -> Result<()> {
    let len = u32::try_from(v.len()).map_err(|_| Error::Format("signal too long for GDK1".into()))?;
    let complex = v.iter().any(|c| c.im != 0.0);
    w.write_all(MAGIC)?;
    w.write_all(&len.to_le_bytes())?;
    w.write_all(&(if complex { FLAG_COMPLEX } else { 0 }).to_le_bytes())?;
    w.write_all(&[0u8; 4])?;
    for c in v {
        w.write_all(&c.re.to_le_bytes())?;
        if complex {
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal_bin<R: Read>(mut r: R) -> Result<Vec<Complex64>> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| Error::Format("truncated GDK1 header".into()))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("missing GDK1 magic".into()));
    }
    let len = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes")) as usize;
    let flags = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes"));
    let complex = flags & FLAG_COMPLEX != 0;
    let per = if complex { 2 } else { 1 };
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != len * per * 8 {
        return Err(Error::Format(format!(
            "GDK1 body has {} bytes, expected {}",
            body.len(),
            len * per * 8
        )));
    }
    let vals: Vec<f64> = body
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
        .collect();
    Ok(if complex {
        vals.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
    } else {
        vals.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
    })
}

/// Reads a signal, choosing the format from the leading magic bytes.
pub fn read_signal(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if bytes.starts_with(MAGIC) {
        read_signal_bin(bytes)
    } else {
        read_signal_csv(bytes)
    }
}

pub fn write_dgt_csv<W: Write>(w: W, c: &DgtCoefficients) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["l", "k", "re", "im"]).map_err(csv_err)?;
    for l in 0..c.channels() {
        for k in 0..c.positions() {
            let v = c.get(l, k);
            out.write_record([l.to_string(), k.to_string(), fmt_float(v.re), fmt_float(v.im)])
                .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads `l,k,re,im` rows into an `M × N` grid sized by the largest indices.
pub fn read_dgt_csv<R: Read>(r: R) -> Result<DgtCoefficients> {
    let mut entries = Vec::new();
    for (line, rec) in reader(r).records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let l: usize = parse(rec.get(0), "l", line + 1)?;
        let k: usize = parse(rec.get(1), "k", line + 1)?;
        let re: f64 = parse(rec.get(2), "re", line + 1)?;
        let im: f64 = parse(rec.get(3), "im", line + 1)?;
        entries.push((l, k, Complex64::new(re, im)));
    }
    let m = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let n = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let mut out = DgtCoefficients::zeros(m, n);
    for (l, k, v) in entries {
        out.set(l, k, v);
    }
    Ok(out)
}

/// Writes dual samples with `# key=value` header lines. `alpha`, `beta`,
/// `a` and `L` are always written; `extra` entries (e.g. the window) follow.
pub fn write_samples_csv<W: Write>(mut w: W, s: &DualSamples, extra: &[(&str, String)]) -> Result<()> {
    writeln!(w, "# alpha={}", fmt_float(s.alpha))?;
    writeln!(w, "# beta={}", fmt_float(s.beta))?;
    writeln!(w, "# a={}", s.a)?;
    writeln!(w, "# L={}", s.l)?;
    for (k, v) in extra {
        writeln!(w, "# {k}={v}")?;
    }
    let mut out = writer(w);
    out.write_record(["q", "t", "gamma_value"]).map_err(csv_err)?;
    for (i, v) in s.values.iter().enumerate() {
        let q = s.first + i as i64;
        out.write_record([q.to_string(), fmt_float(q as f64 * s.step()), fmt_float(*v)])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a sample file; returns the samples and every header entry.
pub fn read_samples_csv<R: Read>(mut r: R) -> Result<(DualSamples, BTreeMap<String, String>)> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let header: BTreeMap<String, String> = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let get = |key: &str| -> Result<&String> {
        header
            .get(key)
            .ok_or_else(|| Error::Format(format!("sample file lacks the header entry {key}")))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?
            .parse()
            .map_err(|_| Error::Format(format!("header entry {key} is not a number")))
    };
    let int = |key: &str| -> Result<usize> {
        get(key)?
            .parse()
            .map_err(|_| Error::Format(format!("header entry {key} is not an integer")))
    };
    let mut rows: Vec<(i64, f64)> = Vec::new();
    for (line, rec) in reader(text.as_bytes()).records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        rows.push((parse(rec.get(0), "q", line + 1)?, parse(rec.get(2), "gamma_value", line + 1)?));
    }
    let first = rows.first().map_or(0, |r| r.0);
    for (i, (q, _)) in rows.iter().enumerate() {
        if *q != first + i as i64 {
            return Err(Error::Format(format!("sample indices are not consecutive at q = {q}")));
        }
    }
    let samples = DualSamples {
        alpha: num("alpha")?,
        beta: num("beta")?,
        a: int("a")?,
        l: int("L")?,
        first,
        values: rows.into_iter().map(|r| r.1).collect(),
    };
    Ok((samples, header))
}

/// Plain table with a header row; cells are written as given.
pub fn write_table_csv<W: Write>(w: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header).map_err(csv_err)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::DimensionMismatch(format!(
                "row of {} cells under a header of {}",
                row.len(),
                header.len()
            )));
        }
        out.write_record(row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(w: W, traces: &[IterationTrace]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["variant", "k", "error", "gamma_norm"]).map_err(csv_err)?;
    for t in traces {
        for r in &t.records {
            out.write_record([
                t.variant.name().to_string(),
                r.k.to_string(),
                fmt_float(r.error),
                fmt_float(r.gamma_norm),
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}
