use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::text::{join, Record};

/// Re-checkable evidence that a window set belongs to a family at the given
/// horizon. See [`super::validate`] for the independent checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyCertificate {
    Syndetic(SyndeticCert),
    Thick(ThickCert),
    PiecewiseSyndetic(PiecewiseSyndeticCert),
    ThicklySyndetic(ThicklySyndeticCert),
    Density(DensityCert),
}

/// Every length-`gap` interval inside the window meets the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndeticCert {
    pub gap: usize,
}

/// Maximal runs `(start, length)` and the longest run length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickCert {
    pub runs: Vec<(usize, usize)>,
    pub max_run: usize,
}

/// `[interval.0, interval.1)` on which the set is `gap`-syndetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseSyndeticCert {
    pub gap: usize,
    pub interval: (usize, usize),
}

/// `(n, g_n)`: starts of length-`n` runs are `g_n`-syndetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThicklySyndeticCert {
    pub entries: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCert {
    pub window_length: usize,
    pub upper_banach: Ratio<u64>,
    pub upper_density: Ratio<u64>,
}

impl ThickCert {
    /// Thick at scale `len` on the window.
    pub fn is_thick_at(&self, len: usize) -> bool {
        self.max_run >= len
    }
}

impl PiecewiseSyndeticCert {
    pub fn length(&self) -> usize {
        self.interval.1 - self.interval.0
    }
}

fn fmt_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_ratio(s: &str, line: usize) -> Result<Ratio<u64>> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::parse(line, format!("bad rational {s:?}")))?;
    let n: u64 = n.trim().parse().map_err(|_| Error::parse(line, "bad numerator"))?;
    let d: u64 = d.trim().parse().map_err(|_| Error::parse(line, "bad denominator"))?;
    if d == 0 {
        return Err(Error::parse(line, "zero denominator"));
    }
    Ok(Ratio::new(n, d))
}

fn parse_pairs(s: &str, sep: char, line: usize) -> Result<Vec<(usize, usize)>> {
    s.split_whitespace()
        .map(|t| {
            let (a, b) = t
                .split_once(sep)
                .ok_or_else(|| Error::parse(line, format!("bad pair {t:?}")))?;
            let a = a.parse().map_err(|_| Error::parse(line, format!("bad pair {t:?}")))?;
            let b = b.parse().map_err(|_| Error::parse(line, format!("bad pair {t:?}")))?;
            Ok((a, b))
        })
        .collect()
}

impl FamilyCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilyCertificate::Syndetic(_) => "SyndeticCert",
            FamilyCertificate::Thick(_) => "ThickCert",
            FamilyCertificate::PiecewiseSyndetic(_) => "PiecewiseSyndeticCert",
            FamilyCertificate::ThicklySyndetic(_) => "ThicklySyndeticCert",
            FamilyCertificate::Density(_) => "DensityCert",
        }
    }

    pub fn to_record(&self) -> Record {
        let r = Record::new().with("kind", self.kind());
        match self {
            FamilyCertificate::Syndetic(c) => r.with("gap", c.gap),
            FamilyCertificate::Thick(c) => r
                .with("max_run", c.max_run)
                .with("runs", join(c.runs.iter().map(|(s, l)| format!("{s}+{l}")))),
            FamilyCertificate::PiecewiseSyndetic(c) => r
                .with("gap", c.gap)
                .with("interval", format!("{} {}", c.interval.0, c.interval.1)),
            FamilyCertificate::ThicklySyndetic(c) => r.with(
                "entries",
                join(c.entries.iter().map(|(n, g)| format!("{n}:{g}"))),
            ),
            FamilyCertificate::Density(c) => r
                .with("window_length", c.window_length)
                .with("upper_banach", fmt_ratio(&c.upper_banach))
                .with("upper_density", fmt_ratio(&c.upper_density)),
        }
    }

    pub fn from_record(rec: &Record) -> Result<Self> {
        let line = rec.line();
        Ok(match rec.require("kind")? {
            "SyndeticCert" => FamilyCertificate::Syndetic(SyndeticCert {
                gap: rec.parse("gap")?,
            }),
            "ThickCert" => FamilyCertificate::Thick(ThickCert {
                max_run: rec.parse("max_run")?,
                runs: parse_pairs(rec.require("runs")?, '+', line)?,
            }),
            "PiecewiseSyndeticCert" => {
                let iv: Vec<usize> = rec.parse_list("interval")?;
                if iv.len() != 2 {
                    return Err(Error::parse(line, "interval needs two endpoints"));
                }
                FamilyCertificate::PiecewiseSyndetic(PiecewiseSyndeticCert {
                    gap: rec.parse("gap")?,
                    interval: (iv[0], iv[1]),
                })
            }
            "ThicklySyndeticCert" => FamilyCertificate::ThicklySyndetic(ThicklySyndeticCert {
                entries: parse_pairs(rec.require("entries")?, ':', line)?,
            }),
            "DensityCert" => FamilyCertificate::Density(DensityCert {
                window_length: rec.parse("window_length")?,
                upper_banach: parse_ratio(rec.require("upper_banach")?, line)?,
                upper_density: parse_ratio(rec.require("upper_density")?, line)?,
            }),
            other => return Err(Error::parse(line, format!("unknown certificate kind {other:?}"))),
        })
    }
}
