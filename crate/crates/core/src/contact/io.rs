use std::io::{BufRead, Write};

use super::{ContactError, ExtinctionRecord};
use crate::stats::SurvivalPoint;

pub const RECORDS_HEADER: &str = "replica,seed,tau,censored,events,peak_infected";

fn comments<W: Write>(out: &mut W, header: &[String]) -> std::io::Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub fn write_records<W: Write>(records: &[ExtinctionRecord], header: &[String], out: W) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(out);
    comments(&mut out, header)?;
    writeln!(out, "{RECORDS_HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{},{},{},{}", r.replica, r.seed, r.tau, u8::from(r.censored), r.events, r.peak_infected)?;
    }
    out.flush()
}

pub fn write_survival<W: Write>(curve: &[SurvivalPoint], header: &[String], out: W) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(out);
    comments(&mut out, header)?;
    writeln!(out, "t,survival,at_risk")?;
    for p in curve {
        writeln!(out, "{},{},{}", p.t, p.survival, p.at_risk)?;
    }
    out.flush()
}

/// Reads a records file written by [`write_records`]; `#` lines are skipped.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<ExtinctionRecord>, ContactError> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (i, line) in input.lines().enumerate() {
        let err = |message: String| ContactError::Parse { line: i + 1, message };
        let line = line.map_err(|e| err(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != RECORDS_HEADER {
                return Err(err(format!("expected header `{RECORDS_HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", f.len())));
        }
        let bad = |name: &str| err(format!("bad {name} `{line}`"));
        out.push(ExtinctionRecord {
            replica: f[0].parse().map_err(|_| bad("replica"))?,
            seed: f[1].parse().map_err(|_| bad("seed"))?,
            tau: f[2].parse().map_err(|_| bad("tau"))?,
            censored: match f[3] {
                "0" => false,
                "1" => true,
                _ => return Err(bad("censored flag")),
            },
            events: f[4].parse().map_err(|_| bad("events"))?,
            peak_infected: f[5].parse().map_err(|_| bad("peak_infected"))?,
        });
    }
    if !seen_header {
        return Err(ContactError::Parse { line: 0, message: "missing header".into() });
    }
    Ok(out)
}
