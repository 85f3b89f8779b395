//! Binary words and the return-time calculus of their orbit closures, read
//! off a finite prefix.
//!
//! The language of the orbit closure is approximated by the set of blocks
//! occurring in the prefix. Every answer here is "on the window" and makes
//! no claim about the infinite point.

pub mod generators;
mod suffix;
mod word;

use std::collections::BTreeMap;

pub use suffix::SuffixIndex;
pub use word::{PointPrefix, Word};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::WindowSet;

/// All start positions of `pat` in `text` (overlapping), by KMP.
pub fn find_all(text: &[u8], pat: &[u8]) -> Vec<usize> {
    let m = pat.len();
    if m == 0 {
        return (0..=text.len()).collect();
    }
    if m > text.len() {
        return Vec::new();
    }
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pat[i] != pat[k] {
            k = fail[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && c != pat[q] {
            q = fail[q - 1];
        }
        if c == pat[q] {
            q += 1;
        }
        if q == m {
            out.push(i + 1 - m);
            q = fail[q - 1];
        }
    }
    out
}

fn check_fits(x: &PointPrefix, len: usize) -> Result<()> {
    if len > x.horizon() {
        return Err(Error::BlockTooLong {
            block: len,
            horizon: x.horizon(),
        });
    }
    Ok(())
}

/// `N(x, [A])` on the window: positions `n <= H - |A|` where `A` occurs.
/// The result has horizon `H - |A| + 1`.
pub fn occurrences(x: &PointPrefix, a: &Word) -> Result<WindowSet> {
    check_fits(x, a.len())?;
    WindowSet::new(x.horizon() - a.len() + 1, find_all(x.symbols(), a.symbols()))
}

/// Prefix approximation of `N([A], [B])`: all `n >= 0` such that `A` occurs
/// at some `i` and `B` at `i + n`. Horizon `H`.
pub fn hitting_times(x: &PointPrefix, a: &Word, b: &Word) -> Result<WindowSet> {
    hitting_times_with(x, a, b, Execution::default())
}

pub fn hitting_times_with(x: &PointPrefix, a: &Word, b: &Word, exec: Execution) -> Result<WindowSet> {
    let occ_a = occurrences(x, a)?;
    let occ_b = occurrences(x, b)?;
    Ok(shift_or_differences(&occ_a, &occ_b, x.horizon(), exec))
}

/// `{ j - i : i ∈ from, j ∈ to, j >= i }` as a set on `[0, h)`.
pub(crate) fn shift_or_differences(from: &WindowSet, to: &WindowSet, h: usize, exec: Execution) -> WindowSet {
    let mut to_bits = BitSet::new(h);
    for j in to.iter() {
        to_bits.insert(j);
    }
    let starts = from.elements();
    let acc = exec.fold_reduce(
        0..starts.len(),
        || BitSet::new(h),
        |mut acc, i| {
            acc.or_shifted_down(&to_bits, starts[i]);
            acc
        },
        |mut a, b| {
            a.union_with(&b);
            a
        },
    );
    WindowSet::from_bits(&acc)
}

/// Block complexity at one length.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockStats {
    pub k: usize,
    /// `B_k`, the number of distinct length-`k` blocks.
    pub count: usize,
    /// `(1/k) ln B_k` (natural logarithm).
    pub entropy_estimate: f64,
}

impl BlockStats {
    fn new(k: usize, count: usize) -> Self {
        BlockStats {
            k,
            count,
            entropy_estimate: (count as f64).ln() / k as f64,
        }
    }
}

fn check_block_len(x: &PointPrefix, k: usize) -> Result<()> {
    if k == 0 || k > x.horizon() {
        return Err(Error::OutOfRange {
            what: "block length",
            value: k,
            bound: x.horizon(),
        });
    }
    Ok(())
}

/// Distinct `k`-blocks of the prefix, in lexicographic order.
pub fn block_set(x: &PointPrefix, k: usize) -> Result<(Vec<Word>, BlockStats)> {
    check_block_len(x, k)?;
    let idx = SuffixIndex::new(x.symbols());
    let words: Vec<Word> = idx
        .representatives(k)
        .into_iter()
        .map(|p| x.word().slice(p, p + k))
        .collect();
    let stats = BlockStats::new(k, words.len());
    Ok((words, stats))
}

/// `B_k` only; does not materialise the blocks.
pub fn block_count(x: &PointPrefix, k: usize) -> Result<BlockStats> {
    check_block_len(x, k)?;
    Ok(BlockStats::new(k, SuffixIndex::new(x.symbols()).distinct_count(k)))
}

/// Block statistics for `k = 1..=k_max`; requires `k_max <= H/4`.
pub fn entropy_curve(x: &PointPrefix, k_max: usize) -> Result<Vec<BlockStats>> {
    let bound = x.horizon() / 4;
    if k_max == 0 || k_max > bound {
        return Err(Error::OutOfRange {
            what: "k_max",
            value: k_max,
            bound,
        });
    }
    let counts = SuffixIndex::new(x.symbols()).distinct_counts(k_max);
    Ok((1..=k_max).map(|k| BlockStats::new(k, counts[k])).collect())
}

/// First return times of the prefix cylinders `[x[0..k')]`, `k' = 1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCert {
    /// `first_returns[k' - 1]`: least `t > 0` with `x[t..t+k') = x[0..k')`.
    pub first_returns: Vec<Option<usize>>,
}

impl RecurrenceCert {
    /// Recurrent to the full depth on the window.
    pub fn is_recurrent(&self) -> bool {
        self.first_returns.iter().all(Option::is_some)
    }

    pub fn depth(&self) -> usize {
        self.first_returns.len()
    }
}

/// Z-function: `z[i]` = length of the longest common prefix of `s` and
/// `s[i..]` (`z[0] = n`).
fn z_function(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

pub fn recurrence_certificate(x: &PointPrefix, k: usize) -> Result<RecurrenceCert> {
    let bound = x.horizon() / 2;
    if k == 0 || k > bound {
        return Err(Error::OutOfRange {
            what: "depth",
            value: k,
            bound,
        });
    }
    let z = z_function(x.symbols());
    let mut first_returns = vec![None; k];
    let mut filled = 0;
    for (t, &zt) in z.iter().enumerate().skip(1) {
        while filled < k && zt > filled {
            first_returns[filled] = Some(t);
            filled += 1;
        }
        if filled == k {
            break;
        }
    }
    Ok(RecurrenceCert { first_returns })
}

/// Occurrence gaps of one block on the window of possible starts
/// `[0, N)`, `N = H - |u| + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGap {
    pub block: Word,
    pub occurrences: usize,
    /// First occurrence.
    pub head: usize,
    /// Largest difference between consecutive occurrences.
    pub max_interior: Option<usize>,
    /// `N - 1 - last occurrence`.
    pub tail: usize,
}

impl BlockGap {
    fn from_occurrences(block: Word, occ: &WindowSet) -> Option<Self> {
        let first = occ.first()?;
        let last = occ.last()?;
        Some(BlockGap {
            block,
            occurrences: occ.len(),
            head: first,
            max_interior: occ.elements().windows(2).map(|w| w[1] - w[0]).max(),
            tail: occ.horizon() - 1 - last,
        })
    }

    /// Covering constant on the window: every `gap` consecutive start
    /// positions contain an occurrence.
    pub fn gap(&self) -> usize {
        (self.head + 1)
            .max(self.max_interior.unwrap_or(0))
            .max(self.tail + 1)
    }

    /// Recurs with gaps at most `bound`, margins included.
    pub fn certified(&self, bound: usize) -> bool {
        self.occurrences >= 2 && self.gap() <= bound
    }
}

/// Gap profile of a single block, `None` if it does not occur.
pub fn block_gaps(x: &PointPrefix, a: &Word) -> Result<Option<BlockGap>> {
    let occ = occurrences(x, a)?;
    Ok(BlockGap::from_occurrences(a.clone(), &occ))
}

/// Gap profiles of every block of length `<= k` occurring in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub depth: usize,
    pub blocks: Vec<BlockGap>,
}

impl MinimalityReport {
    /// Largest covering gap over all blocks (`None` when some block occurs
    /// only once).
    pub fn bound(&self) -> Option<usize> {
        self.blocks
            .iter()
            .map(|b| (b.occurrences >= 2).then(|| b.gap()))
            .try_fold(0, |acc, g| g.map(|g| acc.max(g)))
    }

    pub fn is_certified(&self, bound: usize) -> bool {
        self.blocks.iter().all(|b| b.certified(bound))
    }
}

/// Largest block length handled by packed enumeration.
pub const MAX_PACKED_BLOCK: usize = 64;

fn packed_blocks(s: &[u8], len: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
    let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let mut v = 0u64;
    s.iter().enumerate().filter_map(move |(i, &b)| {
        v = ((v << 1) | b as u64) & mask;
        (i + 1 >= len).then(|| (i + 1 - len, v))
    })
}

fn unpack(v: u64, len: usize) -> Word {
    Word::new((0..len).rev().map(|i| (v >> i & 1) as u8).collect()).expect("binary")
}

pub fn minimality_certificate(x: &PointPrefix, k: usize) -> Result<MinimalityReport> {
    let bound = (x.horizon() / 4).min(MAX_PACKED_BLOCK);
    if k == 0 || k > bound {
        return Err(Error::OutOfRange {
            what: "depth",
            value: k,
            bound,
        });
    }
    let h = x.horizon();
    let mut blocks = Vec::new();
    for len in 1..=k {
        // first, last, count, max interior difference
        let mut stats: BTreeMap<u64, (usize, usize, usize, Option<usize>)> = BTreeMap::new();
        for (pos, v) in packed_blocks(x.symbols(), len) {
            stats
                .entry(v)
                .and_modify(|e| {
                    let d = pos - e.1;
                    e.3 = Some(e.3.map_or(d, |m| m.max(d)));
                    e.1 = pos;
                    e.2 += 1;
                })
                .or_insert((pos, pos, 1, None));
        }
        let n = h - len + 1;
        blocks.extend(stats.into_iter().map(|(v, (first, last, count, max_interior))| BlockGap {
            block: unpack(v, len),
            occurrences: count,
            head: first,
            max_interior,
            tail: n - 1 - last,
        }));
    }
    Ok(MinimalityReport { depth: k, blocks })
}

/// Least `s >= 1` with `s, s + 1` both in `set`.
pub fn consecutive_pair(set: &WindowSet) -> Option<usize> {
    set.elements()
        .windows(2)
        .find(|w| w[0] >= 1 && w[1] == w[0] + 1)
        .map(|w| w[0])
}

/// For each occurring `k`-block `A`, the least `s >= 1` with
/// `{s, s + 1} ⊆ N([A], [A])`.
pub fn weak_mixing_witness(x: &PointPrefix, k: usize) -> Result<Vec<(Word, Option<usize>)>> {
    weak_mixing_witness_with(x, k, Execution::default())
}

pub fn weak_mixing_witness_with(x: &PointPrefix, k: usize, exec: Execution) -> Result<Vec<(Word, Option<usize>)>> {
    let bound = x.horizon() / 4;
    if k == 0 || k > bound {
        return Err(Error::OutOfRange {
            what: "block length",
            value: k,
            bound,
        });
    }
    let (blocks, _) = block_set(x, k)?;
    let h = x.horizon();
    let out = exec.map(0..blocks.len(), |i| {
        let a = &blocks[i];
        let occ = WindowSet::new(h - k + 1, find_all(x.symbols(), a.symbols()))
            .expect("KMP positions are increasing");
        let hits = shift_or_differences(&occ, &occ, h, Execution::Sequential);
        (a.clone(), consecutive_pair(&hits))
    });
    Ok(out)
}

/// Least `k >= 1` (up to `H/4`) such that `0, k, 2k, ...` all lie in
/// `N(x, [A])` on the window.
pub fn regular_minimal_witness(x: &PointPrefix, a: &Word) -> Result<Option<usize>> {
    let occ = occurrences(x, a)?;
    if !occ.contains(0) {
        return Ok(None);
    }
    let n = occ.horizon();
    let max_k = x.horizon() / 4;
    let member = occ.to_bits();
    Ok(Execution::default().find_first(1..max_k + 1, |k| (0..n).step_by(k).all(|p| member.contains(p))))
}
