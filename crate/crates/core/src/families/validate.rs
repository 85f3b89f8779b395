//! Independent certificate checker.
//!
//! Works from the indicator and prefix counts only, never from the hole/run
//! lists the detectors use, so a detector bug cannot hide behind a shared
//! helper.

use num_rational::Ratio;
use thiserror::Error;

use super::{
    DensityCert, FamilyCertificate, PiecewiseSyndeticCert, SyndeticCert, ThickCert,
    ThicklySyndeticCert, WindowSet, SYNDETIC_EVIDENCE,
};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{kind} rejected: {reason}")]
pub struct Invalid {
    pub kind: &'static str,
    pub reason: String,
}

fn reject<T>(kind: &'static str, reason: impl Into<String>) -> Result<T, Invalid> {
    Err(Invalid {
        kind,
        reason: reason.into(),
    })
}

struct Counts {
    prefix: Vec<usize>,
}

impl Counts {
    fn new(ind: &[bool]) -> Self {
        let mut prefix = Vec::with_capacity(ind.len() + 1);
        prefix.push(0);
        let mut c = 0;
        for &b in ind {
            c += b as usize;
            prefix.push(c);
        }
        Counts { prefix }
    }

    fn horizon(&self) -> usize {
        self.prefix.len() - 1
    }

    fn count(&self, a: usize, b: usize) -> usize {
        self.prefix[b] - self.prefix[a]
    }

    /// Every length-`g` window in `[lo, hi)` is hit.
    fn covers(&self, lo: usize, hi: usize, g: usize) -> bool {
        hi >= lo + g && (lo..=hi - g).all(|i| self.count(i, i + g) > 0)
    }
}

pub fn validate(set: &WindowSet, cert: &FamilyCertificate) -> Result<(), Invalid> {
    let ind = set.indicator();
    match cert {
        FamilyCertificate::Syndetic(c) => check_syndetic(&ind, c),
        FamilyCertificate::Thick(c) => check_thick(&ind, c),
        FamilyCertificate::PiecewiseSyndetic(c) => check_piecewise(&ind, c),
        FamilyCertificate::ThicklySyndetic(c) => check_thickly(&ind, c),
        FamilyCertificate::Density(c) => check_density(&ind, c),
    }
}

fn syndetic_ok(ind: &[bool], g: usize) -> Result<(), String> {
    let counts = Counts::new(ind);
    let h = counts.horizon();
    if g == 0 {
        return Err("gap must be positive".into());
    }
    if SYNDETIC_EVIDENCE * g > h {
        return Err(format!("gap {g} too large for window {h}"));
    }
    if !counts.covers(0, h, g) {
        return Err(format!("some length-{g} interval misses the set"));
    }
    if g > 1 && counts.covers(0, h, g - 1) {
        return Err(format!("gap {} already works", g - 1));
    }
    Ok(())
}

fn check_syndetic(ind: &[bool], c: &SyndeticCert) -> Result<(), Invalid> {
    syndetic_ok(ind, c.gap).or_else(|r| reject("SyndeticCert", r))
}

fn check_thick(ind: &[bool], c: &ThickCert) -> Result<(), Invalid> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < ind.len() {
        if ind[i] {
            let start = i;
            while i < ind.len() && ind[i] {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    if runs != c.runs {
        return reject("ThickCert", "run list differs from a direct scan");
    }
    let max = runs.iter().map(|r| r.1).max().unwrap_or(0);
    if max != c.max_run {
        return reject("ThickCert", format!("max_run is {max}, not {}", c.max_run));
    }
    Ok(())
}

fn check_piecewise(ind: &[bool], c: &PiecewiseSyndeticCert) -> Result<(), Invalid> {
    const K: &str = "PiecewiseSyndeticCert";
    let counts = Counts::new(ind);
    let h = counts.horizon();
    let (g, (a, b)) = (c.gap, c.interval);
    if g == 0 || a >= b || b > h {
        return reject(K, "malformed interval or gap");
    }
    if b - a < 2 * g {
        return reject(K, format!("interval length {} below 2g = {}", b - a, 2 * g));
    }
    if !ind[a] {
        return reject(K, format!("interval start {a} is not in the set"));
    }
    if !counts.covers(a, b, g) {
        return reject(K, "set is not g-syndetic on the interval");
    }
    // Longest (leftmost on ties) over every member start.
    let empty_at = |i: usize| i + g <= h && counts.count(i, i + g) == 0;
    let mut best: Option<(usize, usize)> = None;
    let mut next_empty = h;
    let mut ends = vec![h; h];
    for i in (0..h).rev() {
        if empty_at(i) {
            next_empty = i;
        }
        ends[i] = if next_empty == h { h } else { (next_empty + g - 1).min(h) };
    }
    for start in (0..h).filter(|&i| ind[i]) {
        let end = ends[start];
        if end - start >= 2 * g && best.is_none_or(|(s, e)| end - start > e - s) {
            best = Some((start, end));
        }
    }
    if best != Some((a, b)) {
        return reject(K, format!("expected longest interval {best:?}"));
    }
    Ok(())
}

fn check_thickly(ind: &[bool], c: &ThicklySyndeticCert) -> Result<(), Invalid> {
    const K: &str = "ThicklySyndeticCert";
    let counts = Counts::new(ind);
    let h = counts.horizon();
    for (idx, &(n, g)) in c.entries.iter().enumerate() {
        if n != idx + 1 {
            return reject(K, "entries must list n = 1, 2, ... in order");
        }
        if n >= h {
            return reject(K, format!("run length {n} does not fit"));
        }
        let starts: Vec<bool> = (0..h - n).map(|i| counts.count(i, i + n) == n).collect();
        syndetic_ok(&starts, g).or_else(|r| reject(K, format!("n = {n}: {r}")))?;
    }
    Ok(())
}

fn check_density(ind: &[bool], c: &DensityCert) -> Result<(), Invalid> {
    const K: &str = "DensityCert";
    let counts = Counts::new(ind);
    let h = counts.horizon();
    let l = c.window_length;
    if l == 0 || l > h {
        return reject(K, "window length out of range");
    }
    let banach = (0..=h - l).map(|i| counts.count(i, i + l)).max().unwrap_or(0);
    if Ratio::new(banach as u64, l as u64) != c.upper_banach {
        return reject(K, format!("upper Banach density is {banach}/{l}"));
    }
    let density = (l..=h)
        .map(|n| Ratio::new(counts.count(0, n) as u64, n as u64))
        .max()
        .unwrap_or_default();
    if density != c.upper_density {
        return reject(K, format!("upper density is {density}"));
    }
    Ok(())
}
