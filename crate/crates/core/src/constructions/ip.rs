use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::{fs_set, FsGenerators};
use crate::subshift::{recurrence_certificate, PointPrefix};

/// Largest depth accepted by [`extract_ip`]; the verification sets have
/// `2^d - 1` elements.
const MAX_IP_DEPTH: usize = 24;

/// Z-function of `s`, with `z[0] = |s|`.
fn prefix_matches(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
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

/// Superincreasing generators `p_1 < ... < p_d` such that for every
/// `n <= d` all of `FS({p_n, ..., p_d})` lies in `N(x, [x[0..n)])`.
///
/// Each `p_{j+1}` is the least integer above `p_1 + ... + p_j` that keeps
/// every constraint of the induction satisfied.
pub fn extract_ip(x: &PointPrefix, depth: usize) -> Result<FsGenerators> {
    if depth == 0 || depth > MAX_IP_DEPTH {
        return Err(Error::OutOfRange {
            what: "depth",
            value: depth,
            bound: MAX_IP_DEPTH,
        });
    }
    if !recurrence_certificate(x, depth)?.is_recurrent() {
        return Err(Error::NotRecurrent { depth });
    }
    let h = x.horizon();
    let z = prefix_matches(x.symbols());
    let occurs = |t: u64, n: usize| (t as usize) < h && z[t as usize] >= n;

    let mut gens: Vec<u64> = Vec::with_capacity(depth);
    // fs[n] = FS({p_{n+1}, ..., p_j}) (0-based n), grown as generators arrive.
    let mut fs: Vec<Vec<u64>> = Vec::with_capacity(depth);
    let mut total: u64 = 0;
    for j in 0..depth {
        let p = (total + 1..h as u64).find(|&p| {
            occurs(p, j + 1)
                && fs
                    .iter()
                    .enumerate()
                    .all(|(n, sums)| sums.iter().all(|&m| occurs(m + p, n + 1)))
        });
        let Some(p) = p else {
            return Err(Error::WindowExhausted {
                stage: j + 1,
                reason: format!("no generator above {total} satisfies the return constraints"),
            });
        };
        fs.push(Vec::new());
        for sums in fs.iter_mut() {
            let shifted: Vec<u64> = sums.iter().map(|&m| m + p).collect();
            sums.push(p);
            sums.extend(shifted);
        }
        gens.push(p);
        total += p;
    }
    FsGenerators::superincreasing(gens)
}

/// Brute-force audit of [`extract_ip`]'s guarantee: every `(n, sum)` with
/// `sum ∈ FS({p_n..p_d})` but `x[sum..sum+n) != x[0..n)`.
pub fn ip_violations(x: &PointPrefix, gens: &FsGenerators) -> Result<Vec<(usize, u64)>> {
    let s = x.symbols();
    let mut bad = Vec::new();
    for n in 1..=gens.len() {
        let tail = gens.tail(n - 1)?;
        let cap = tail.total().unwrap_or(u64::MAX).saturating_add(1);
        for t in fs_set(&tail, cap.min(usize::MAX as u64) as usize)?.iter() {
            if t + n > s.len() || s[t..t + n] != s[..n] {
                bad.push((n, t as u64));
            }
        }
    }
    Ok(bad)
}

/// Sub-generators `q_1..q_m`, each a sum over a block of `gens`, blocks
/// pairwise disjoint and ordered by their least index, with
/// `FS({q_1..q_m})` monochromatic. `Ok(None)` means the finite search came
/// up empty, which says nothing about Hindman's theorem.
pub fn hindman_search<C>(gens: &FsGenerators, coloring: C, m: usize, budget: u64) -> Result<Option<Vec<u64>>>
where
    C: Fn(u64) -> Option<u32> + Sync,
{
    hindman_search_with(gens, coloring, m, budget, Execution::default())
}

pub fn hindman_search_with<C>(
    gens: &FsGenerators,
    coloring: C,
    m: usize,
    budget: u64,
    exec: Execution,
) -> Result<Option<Vec<u64>>>
where
    C: Fn(u64) -> Option<u32> + Sync,
{
    if !gens.is_superincreasing() {
        return Err(Error::Precondition("Hindman search needs superincreasing generators".into()));
    }
    let d = gens.len();
    if m == 0 || d > 30 {
        return Err(Error::OutOfRange {
            what: if m == 0 { "size" } else { "generator count" },
            value: if m == 0 { 0 } else { d },
            bound: 30,
        });
    }
    let needed = (m as u64 + 1).checked_pow(d as u32).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let total = gens.total().ok_or(Error::BudgetExceeded {
        needed: u64::MAX,
        budget,
    })?;
    let mut colors = std::collections::HashMap::new();
    for e in fs_set(gens, total as usize + 1)?.iter() {
        let c = coloring(e as u64).ok_or(Error::ColoringNotTotal(e as u64))?;
        colors.insert(e as u64, c);
    }
    let block_sums: Vec<u64> = (0..1u64 << d)
        .map(|mask| {
            (0..d)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| gens.gens()[i])
                .sum()
        })
        .collect();
    let search = Search {
        d,
        m,
        block_sums: &block_sums,
        colors: &colors,
    };
    Ok(exec.find_map_first(1..1 << d, |first| {
        let q = block_sums[first];
        let mut chosen = vec![q];
        let mut sums = vec![q];
        search
            .extend(first as u64, first.trailing_zeros(), colors[&q], &mut chosen, &mut sums)
            .then_some(chosen)
    }))
}

struct Search<'a> {
    d: usize,
    m: usize,
    block_sums: &'a [u64],
    colors: &'a std::collections::HashMap<u64, u32>,
}

impl Search<'_> {
    fn extend(&self, used: u64, last_min: u32, color: u32, chosen: &mut Vec<u64>, sums: &mut Vec<u64>) -> bool {
        if chosen.len() == self.m {
            return true;
        }
        for mask in 1..1u64 << self.d {
            if mask & used != 0 || mask.trailing_zeros() <= last_min {
                continue;
            }
            let q = self.block_sums[mask as usize];
            let fresh: Vec<u64> = std::iter::once(q).chain(sums.iter().map(|&s| s + q)).collect();
            if fresh.iter().any(|s| self.colors[s] != color) {
                continue;
            }
            let before = sums.len();
            sums.extend(&fresh);
            chosen.push(q);
            if self.extend(used | mask, mask.trailing_zeros(), color, chosen, sums) {
                return true;
            }
            chosen.pop();
            sums.truncate(before);
        }
        false
    }
}
