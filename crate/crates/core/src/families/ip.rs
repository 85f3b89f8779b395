use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::exec::Execution;

use super::WindowSet;

/// Generators `p_1, ..., p_d` of the finite-depth IP set `FS({p_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FsGenerators {
    gens: Vec<u64>,
    superincreasing: bool,
}

impl FsGenerators {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if let Some(index) = gens.iter().position(|&p| p == 0) {
            return Err(Error::ZeroGenerator { index });
        }
        let superincreasing = first_non_superincreasing(&gens).is_none();
        Ok(FsGenerators {
            gens,
            superincreasing,
        })
    }

    /// Requires `p_{j+1} > p_1 + ... + p_j` for every `j`.
    pub fn superincreasing(gens: Vec<u64>) -> Result<Self> {
        let g = FsGenerators::new(gens)?;
        match first_non_superincreasing(&g.gens) {
            Some(index) => Err(Error::NotSuperincreasing { index }),
            None => Ok(g),
        }
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_superincreasing(&self) -> bool {
        self.superincreasing
    }

    /// `p_1 + ... + p_d`, or `None` on overflow.
    pub fn total(&self) -> Option<u64> {
        self.gens.iter().try_fold(0u64, |acc, &p| acc.checked_add(p))
    }

    /// Generators `p_from, ..., p_d` (0-based `from`).
    pub fn tail(&self, from: usize) -> Result<FsGenerators> {
        FsGenerators::new(self.gens[from..].to_vec())
    }
}

fn first_non_superincreasing(gens: &[u64]) -> Option<usize> {
    let mut sum: u64 = 0;
    for (i, &p) in gens.iter().enumerate() {
        if i > 0 && p <= sum {
            return Some(i);
        }
        sum = sum.checked_add(p)?;
    }
    None
}

/// All nonempty subset sums of the generators that are `< cap`, as a set
/// with horizon `cap`.
pub fn fs_set(gens: &FsGenerators, cap: usize) -> Result<WindowSet> {
    if cap == 0 {
        return Err(Error::EmptyHorizon);
    }
    let cap64 = cap as u64;
    let mut sums: Vec<u64> = Vec::new();
    for &p in gens.gens() {
        if p >= cap64 {
            continue;
        }
        // Sums only grow, so anything at or past the cap can be dropped.
        let extended: Vec<u64> = sums
            .iter()
            .filter_map(|&s| s.checked_add(p).filter(|&t| t < cap64))
            .collect();
        sums.push(p);
        sums.extend(extended);
        sums.sort_unstable();
        sums.dedup();
    }
    WindowSet::new(cap, sums.into_iter().map(|s| s as usize).collect())
}

/// `{ b - a : a, b ∈ S, b > a }` with the horizon of `S`.
pub fn difference_set(s: &WindowSet) -> WindowSet {
    difference_set_with(s, Execution::default())
}

pub fn difference_set_with(s: &WindowSet, exec: Execution) -> WindowSet {
    let h = s.horizon();
    let bits = s.to_bits();
    let elems = s.elements();
    let acc = exec.fold_reduce(
        0..elems.len(),
        || BitSet::new(h),
        |mut acc, i| {
            acc.or_shifted_down(&bits, elems[i]);
            acc
        },
        |mut a, b| {
            a.union_with(&b);
            a
        },
    );
    // Shifting by an element maps that element itself to 0.
    let diffs = acc.ones().filter(|&d| d > 0).collect();
    WindowSet::new(h, diffs).expect("bitset positions are increasing and in range")
}

/// For each generator list, whether `S ∩ FS` is nonempty. All-true is finite
/// evidence toward IP*-membership, not a proof.
pub fn ip_star_probe(s: &WindowSet, batch: &[FsGenerators]) -> Result<Vec<bool>> {
    batch
        .iter()
        .map(|g| {
            let total = g.total().unwrap_or(u64::MAX);
            if total >= s.horizon() as u64 {
                return Err(Error::OutOfRange {
                    what: "generator sum",
                    value: total.min(usize::MAX as u64) as usize,
                    bound: s.horizon() - 1,
                });
            }
            let fs = fs_set(g, s.horizon())?;
            let hit = fs.iter().any(|e| s.contains(e));
            Ok(hit)
        })
        .collect()
}
