use crate::bits::BitSet;
use crate::error::{Error, Result};

/// A finite subset of `[0, horizon)`, read as a subset of the non-negative
/// integers truncated at the horizon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WindowSet {
    horizon: usize,
    elements: Vec<usize>,
}

impl WindowSet {
    /// Builds a set from strictly increasing elements inside the window.
    pub fn new(horizon: usize, elements: Vec<usize>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::EmptyHorizon);
        }
        for (i, w) in elements.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::NotIncreasing { index: i + 1 });
            }
        }
        if let Some(&last) = elements.last() {
            if last >= horizon {
                return Err(Error::OutOfWindow {
                    element: last,
                    horizon,
                });
            }
        }
        Ok(WindowSet { horizon, elements })
    }

    /// Sorts and deduplicates; still rejects out-of-window elements.
    pub fn from_unsorted<I: IntoIterator<Item = usize>>(horizon: usize, items: I) -> Result<Self> {
        let mut elements: Vec<usize> = items.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        WindowSet::new(horizon, elements)
    }

    pub fn from_predicate(horizon: usize, mut member: impl FnMut(usize) -> bool) -> Result<Self> {
        WindowSet::new(horizon, (0..horizon).filter(|&i| member(i)).collect())
    }

    pub fn full(horizon: usize) -> Result<Self> {
        WindowSet::new(horizon, (0..horizon).collect())
    }

    pub fn empty(horizon: usize) -> Result<Self> {
        WindowSet::new(horizon, Vec::new())
    }

    pub(crate) fn from_bits(bits: &BitSet) -> Self {
        WindowSet {
            horizon: bits.len().max(1),
            elements: bits.ones().collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.elements.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.elements.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn to_bits(&self) -> BitSet {
        BitSet::from_positions(self.horizon, self.iter())
    }

    pub fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.horizon];
        for e in self.iter() {
            v[e] = true;
        }
        v
    }

    /// Complement inside `[0, horizon)`.
    pub fn complement(&self) -> WindowSet {
        let mut out = Vec::with_capacity(self.horizon - self.len());
        let mut it = self.elements.iter().peekable();
        for i in 0..self.horizon {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        WindowSet {
            horizon: self.horizon,
            elements: out,
        }
    }

    /// Intersection on the common horizon `min(H, H')`.
    pub fn intersection(&self, other: &WindowSet) -> WindowSet {
        let horizon = self.horizon.min(other.horizon);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        let (a, b) = (&self.elements, &other.elements);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i] < horizon {
                        out.push(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        WindowSet {
            horizon,
            elements: out,
        }
    }

    /// Union of `self` with `extra` (which must lie in the window).
    pub fn with_elements<I: IntoIterator<Item = usize>>(&self, extra: I) -> Result<WindowSet> {
        WindowSet::from_unsorted(self.horizon, self.iter().chain(extra))
    }

    pub fn is_subset_of(&self, other: &WindowSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    /// Elements not contained in `other`.
    pub fn difference_from(&self, other: &WindowSet) -> Vec<usize> {
        self.iter().filter(|&e| !other.contains(e)).collect()
    }

    /// `S ∩ [a, b)` shifted to start at 0, with horizon `b - a`.
    pub fn restrict(&self, a: usize, b: usize) -> Result<WindowSet> {
        if a >= b || b > self.horizon {
            return Err(Error::OutOfRange {
                what: "interval end",
                value: b,
                bound: self.horizon,
            });
        }
        let lo = self.elements.partition_point(|&e| e < a);
        let hi = self.elements.partition_point(|&e| e < b);
        Ok(WindowSet {
            horizon: b - a,
            elements: self.elements[lo..hi].iter().map(|&e| e - a).collect(),
        })
    }

    /// Maximal runs of non-members as `(start, length)`, including the
    /// leading and trailing holes of the window.
    pub fn holes(&self) -> Vec<(usize, usize)> {
        let mut holes = Vec::new();
        let mut next = 0;
        for e in self.iter() {
            if e > next {
                holes.push((next, e - next));
            }
            next = e + 1;
        }
        if next < self.horizon {
            holes.push((next, self.horizon - next));
        }
        holes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(WindowSet::new(0, vec![]), Err(Error::EmptyHorizon)));
        assert!(matches!(
            WindowSet::new(5, vec![1, 1]),
            Err(Error::NotIncreasing { index: 1 })
        ));
        assert!(matches!(
            WindowSet::new(5, vec![5]),
            Err(Error::OutOfWindow { element: 5, .. })
        ));
    }

    #[test]
    fn complement_and_holes() {
        let s = WindowSet::new(10, vec![2, 3, 4, 9]).unwrap();
        assert_eq!(s.complement().elements(), &[0, 1, 5, 6, 7, 8]);
        assert_eq!(s.holes(), vec![(0, 2), (5, 4)]);
        assert_eq!(WindowSet::empty(4).unwrap().holes(), vec![(0, 4)]);
    }

    #[test]
    fn restrict_shifts() {
        let s = WindowSet::new(10, vec![1, 4, 6, 8]).unwrap();
        let r = s.restrict(4, 8).unwrap();
        assert_eq!(r.horizon(), 4);
        assert_eq!(r.elements(), &[0, 2]);
    }
}
