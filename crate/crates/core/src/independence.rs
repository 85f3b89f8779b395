//! Independence sets on subshift prefixes and the syndetic-independence
//! probe.
//!
//! `J` is an independence set for blocks `A_0, ..., A_{r-1}` (all of one
//! length) if every assignment `s: J -> {0..r}` is realised: some position
//! `i` has `A_{s(j)}` at `i + j` for all `j ∈ J`.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::subshift::{find_all, PointPrefix, Word};

/// Default cap on `|J|`.
pub const DEFAULT_J_CAP: usize = 12;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct IndependenceQuery {
    x: PointPrefix,
    blocks: Vec<Word>,
    j: Vec<usize>,
}

impl IndependenceQuery {
    pub fn new(x: PointPrefix, blocks: Vec<Word>, j: Vec<usize>) -> Result<Self> {
        Self::with_cap(x, blocks, j, DEFAULT_J_CAP)
    }

    pub fn with_cap(x: PointPrefix, blocks: Vec<Word>, mut j: Vec<usize>, cap: usize) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::Precondition("at least two blocks are needed".into()));
        }
        let len = blocks[0].len();
        if len == 0 || blocks.iter().any(|b| b.len() != len) {
            return Err(Error::Precondition("blocks must be nonempty and of equal length".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if blocks[..i].contains(b) {
                return Err(Error::Precondition(format!("block {b} is listed twice")));
            }
        }
        j.sort_unstable();
        j.dedup();
        if j.is_empty() || j.len() > cap {
            return Err(Error::OutOfRange {
                what: "|J|",
                value: j.len(),
                bound: cap,
            });
        }
        let span = j[j.len() - 1] + len;
        if span > x.horizon() {
            return Err(Error::BlockTooLong {
                block: span,
                horizon: x.horizon(),
            });
        }
        Ok(IndependenceQuery { x, blocks, j })
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    /// `r^|J|`, saturating.
    pub fn pattern_count(&self) -> u64 {
        (self.blocks.len() as u64)
            .checked_pow(self.j.len() as u32)
            .unwrap_or(u64::MAX)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    /// First realising position for every pattern, patterns in
    /// lexicographic order.
    Independent { witnesses: Vec<usize> },
    /// Lexicographically first unrealised pattern (block indices).
    Missing { pattern: Vec<usize> },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent { .. })
    }
}

/// Block index starting at each position (`NONE` where no block starts).
fn block_codes(x: &PointPrefix, blocks: &[Word]) -> Vec<u32> {
    let mut code = vec![NONE; x.horizon()];
    for (k, b) in blocks.iter().enumerate() {
        for p in find_all(x.symbols(), b.symbols()) {
            code[p] = k as u32;
        }
    }
    code
}

fn decode(mut idx: usize, r: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % r;
        idx /= r;
    }
    out
}

pub fn check_independence(q: &IndependenceQuery, budget: u64) -> Result<Independence> {
    check_independence_with(q, budget, Execution::default())
}

pub fn check_independence_with(q: &IndependenceQuery, budget: u64, exec: Execution) -> Result<Independence> {
    let needed = q.pattern_count();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let codes = block_codes(&q.x, &q.blocks);
    Ok(realised(&codes, q, needed as usize, exec))
}

fn realised(codes: &[u32], q: &IndependenceQuery, patterns: usize, exec: Execution) -> Independence {
    let r = q.blocks.len();
    let len = q.blocks[0].len();
    let j = &q.j;
    let positions = q.x.horizon() - len - j[j.len() - 1] + 1;
    let pattern_at = |i: usize| -> Option<usize> {
        j.iter().try_fold(0usize, |acc, &t| {
            let c = codes[i + t];
            (c != NONE).then(|| acc * r + c as usize)
        })
    };
    // Per-chunk first-hit tables only pay off for small pattern spaces.
    let exec = if patterns <= 1 << 16 { exec } else { Execution::Sequential };
    let first = exec.fold_reduce(
        0..positions,
        || vec![usize::MAX; patterns],
        |mut acc, i| {
            if let Some(p) = pattern_at(i) {
                acc[p] = acc[p].min(i);
            }
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x = (*x).min(y);
            }
            a
        },
    );
    match first.iter().position(|&p| p == usize::MAX) {
        Some(missing) => Independence::Missing {
            pattern: decode(missing, r, j.len()),
        },
        None => Independence::Independent { witnesses: first },
    }
}

/// Re-checks a claimed witness table by direct comparison.
pub fn witnesses_valid(q: &IndependenceQuery, witnesses: &[usize]) -> bool {
    let r = q.blocks.len();
    let len = q.blocks[0].len();
    let s = q.x.symbols();
    witnesses.len() as u64 == q.pattern_count()
        && witnesses.iter().enumerate().all(|(idx, &i)| {
            decode(idx, r, q.j.len())
                .iter()
                .zip(&q.j)
                .all(|(&k, &t)| i + t + len <= s.len() && s[i + t..i + t + len] == *q.blocks[k].symbols())
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Found { j: Vec<usize>, checked: u64 },
    /// Every candidate was checked and none is an independence set.
    Exhausted { checked: u64 },
    /// The budget ran out first; `next` is the first unchecked candidate.
    Partial { checked: u64, total: u64, next: Vec<usize> },
}

/// Candidate number `idx` (lexicographic): first element `< g`, gaps in
/// `[1, g]`.
fn candidate(idx: u64, g: usize, m: usize) -> Vec<usize> {
    let mut digits = vec![0usize; m];
    let mut rest = idx;
    for d in digits.iter_mut().rev() {
        *d = (rest % g as u64) as usize;
        rest /= g as u64;
    }
    let mut out = Vec::with_capacity(m);
    for (t, d) in digits.into_iter().enumerate() {
        out.push(if t == 0 { d } else { out[t - 1] + 1 + d });
    }
    out
}

/// Searches the size-`m` candidates with first element `< g` and
/// consecutive gaps `<= g`, in lexicographic order, for an independence
/// set. At most `budget` candidates are checked.
pub fn syndetic_independence_probe(x: &PointPrefix, blocks: &[Word], g: usize, m: usize, budget: u64) -> Result<Probe> {
    syndetic_independence_probe_with(x, blocks, g, m, budget, Execution::default())
}

pub fn syndetic_independence_probe_with(
    x: &PointPrefix,
    blocks: &[Word],
    g: usize,
    m: usize,
    budget: u64,
    exec: Execution,
) -> Result<Probe> {
    if g == 0 || m == 0 {
        return Err(Error::OutOfRange {
            what: if g == 0 { "gap" } else { "size" },
            value: 0,
            bound: 1,
        });
    }
    let r = blocks.len() as u64;
    let patterns = r.checked_pow(m as u32).unwrap_or(u64::MAX);
    if patterns > budget {
        return Err(Error::BudgetExceeded {
            needed: patterns,
            budget,
        });
    }
    // Validate blocks once on the smallest candidate.
    let base = IndependenceQuery::with_cap(x.clone(), blocks.to_vec(), candidate(0, g, m), m.max(DEFAULT_J_CAP))?;
    let codes = block_codes(x, blocks);
    let total = (g as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    let limit = total.min(budget);
    let len = blocks[0].len();
    let check = |idx: u64| -> Option<Vec<usize>> {
        let j = candidate(idx, g, m);
        if j[m - 1] + len > x.horizon() {
            return None;
        }
        let q = IndependenceQuery { j, ..base.clone() };
        realised(&codes, &q, patterns as usize, Execution::Sequential)
            .is_independent()
            .then_some(q.j)
    };
    let found = exec.find_map_first(0..limit as usize, |idx| check(idx as u64).map(|j| (idx, j)));
    Ok(match found {
        Some((idx, j)) => Probe::Found {
            j,
            checked: idx as u64 + 1,
        },
        None if limit == total => Probe::Exhausted { checked: total },
        None => Probe::Partial {
            checked: limit,
            total,
            next: candidate(limit, g, m),
        },
    })
}
