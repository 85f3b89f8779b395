//! Finite-horizon detectors and certificates for the Furstenberg families:
//! syndetic, thick, piecewise syndetic, thickly syndetic, density, IP.
//!
//! All statements are about the window `[0, H)`. "g-syndetic on the window"
//! means every interval `[i, i + g)` contained in `[0, H)` meets the set.

mod certificate;
mod ip;
pub mod validate;
mod window;

use num_rational::Ratio;

pub use certificate::{
    DensityCert, FamilyCertificate, PiecewiseSyndeticCert, SyndeticCert, ThickCert,
    ThicklySyndeticCert,
};
pub use ip::{difference_set, difference_set_with, fs_set, ip_star_probe, FsGenerators};
pub use window::WindowSet;

use crate::error::{Error, Result};

/// A syndetic certificate needs this many disjoint length-`g` intervals of
/// window: `g` is reported only when `SYNDETIC_EVIDENCE * g <= H`.
pub const SYNDETIC_EVIDENCE: usize = 4;

/// Minimal `g` such that every `[i, i + g) ⊆ [0, H)` meets `S`, without the
/// evidence requirement. `None` for the empty set.
pub fn covering_gap(s: &WindowSet) -> Option<usize> {
    let first = s.first()?;
    let last = s.last()?;
    let interior = s
        .elements()
        .windows(2)
        .map(|w| w[1] - w[0])
        .max()
        .unwrap_or(1);
    Some((first + 1).max(interior).max(s.horizon() - last))
}

/// Syndeticity constant of `S` on its window, or `None` when the set is
/// empty or the window is too short to hold [`SYNDETIC_EVIDENCE`] intervals
/// of that length.
pub fn syndetic_gap(s: &WindowSet) -> Option<usize> {
    covering_gap(s).filter(|&g| SYNDETIC_EVIDENCE * g <= s.horizon())
}

pub fn syndetic_certificate(s: &WindowSet) -> Option<SyndeticCert> {
    syndetic_gap(s).map(|gap| SyndeticCert { gap })
}

/// Maximal runs of consecutive elements.
pub fn run_profile(s: &WindowSet) -> ThickCert {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for e in s.iter() {
        match runs.last_mut() {
            Some((start, len)) if *start + *len == e => *len += 1,
            _ => runs.push((e, 1)),
        }
    }
    let max_run = runs.iter().map(|r| r.1).max().unwrap_or(0);
    ThickCert { runs, max_run }
}

/// Longest interval `[a, b)` on which `S` is `g`-syndetic (every length-`g`
/// sub-interval meets `S`). Intervals start at an element of `S`; one
/// qualifies only if `b - a >= 2g`. Ties go to the leftmost interval.
pub fn piecewise_syndetic_witness(s: &WindowSet, g: usize) -> Result<Option<PiecewiseSyndeticCert>> {
    if g == 0 {
        return Err(Error::OutOfRange {
            what: "gap",
            value: 0,
            bound: 1,
        });
    }
    let h = s.horizon();
    // Holes of length >= g contain an empty length-g window and split the
    // window into segments.
    let blocking: Vec<(usize, usize)> = s.holes().into_iter().filter(|&(_, l)| l >= g).collect();
    let mut best: Option<(usize, usize)> = None;
    let mut seg_start = 0;
    let mut consider = |seg_start: usize, seg_end: usize| {
        let idx = s.elements().partition_point(|&e| e < seg_start);
        if let Some(&a) = s.elements().get(idx) {
            if a < seg_end && seg_end - a >= 2 * g && best.is_none_or(|(ba, bb)| seg_end - a > bb - ba) {
                best = Some((a, seg_end));
            }
        }
    };
    for &(h0, len) in &blocking {
        consider(seg_start, (h0 + g - 1).min(h));
        seg_start = h0 + len;
    }
    consider(seg_start, h);
    Ok(best.map(|interval| PiecewiseSyndeticCert { gap: g, interval }))
}

/// Starts of length-`n` runs of `S`, as a set on the window `[0, H - n)`.
pub fn run_starts(s: &WindowSet, n: usize) -> Option<WindowSet> {
    let h = s.horizon();
    if n == 0 || n >= h {
        return None;
    }
    let mut starts = Vec::new();
    for (start, len) in run_profile(s).runs {
        if len >= n {
            starts.extend((start..=start + len - n).take_while(|&i| i < h - n));
        }
    }
    WindowSet::new(h - n, starts).ok()
}

/// For each `n <= n_max`, the syndeticity constant of the starts of
/// length-`n` runs. `None` as soon as one length has no constant.
pub fn thickly_syndetic_profile(s: &WindowSet, n_max: usize) -> Result<Option<ThicklySyndeticCert>> {
    if n_max == 0 {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: 0,
            bound: 1,
        });
    }
    let mut entries = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        match run_starts(s, n).as_ref().and_then(syndetic_gap) {
            Some(g) => entries.push((n, g)),
            None => return Ok(None),
        }
    }
    Ok(Some(ThicklySyndeticCert { entries }))
}

/// Sliding-window maximum density at interval length `ell`, and the maximal
/// prefix density over `n ∈ [ell, H]`.
pub fn density_report(s: &WindowSet, ell: usize) -> Result<DensityCert> {
    let h = s.horizon();
    if ell == 0 || ell > h {
        return Err(Error::OutOfRange {
            what: "window length",
            value: ell,
            bound: h,
        });
    }
    let ind = s.indicator();
    let mut count = ind[..ell].iter().filter(|&&b| b).count();
    let mut best = count;
    for i in ell..h {
        count += ind[i] as usize;
        count -= ind[i - ell] as usize;
        best = best.max(count);
    }
    let upper_banach = Ratio::new(best as u64, ell as u64);

    let mut prefix = ind[..ell].iter().filter(|&&b| b).count() as u64;
    let mut upper_density = Ratio::new(prefix, ell as u64);
    for n in ell + 1..=h {
        prefix += ind[n - 1] as u64;
        let d = Ratio::new(prefix, n as u64);
        if d > upper_density {
            upper_density = d;
        }
    }
    Ok(DensityCert {
        window_length: ell,
        upper_banach,
        upper_density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(h: usize, f: impl Fn(usize) -> bool) -> WindowSet {
        WindowSet::from_predicate(h, f).unwrap()
    }

    #[test]
    fn syndetic_gap_examples() {
        assert_eq!(syndetic_gap(&WindowSet::full(100).unwrap()), Some(1));
        assert_eq!(syndetic_gap(&set(99, |i| i % 3 == 0)), Some(3));
        // Exhaustive scan gives 41 here, but the window only holds two such
        // intervals.
        let two_blocks = set(100, |i| i < 10 || (50..60).contains(&i));
        assert_eq!(covering_gap(&two_blocks), Some(41));
        assert_eq!(syndetic_gap(&two_blocks), None);
        assert_eq!(syndetic_gap(&WindowSet::empty(10).unwrap()), None);
    }

    #[test]
    fn covering_gap_brute_force() {
        let s = set(100, |i| i < 10 || (50..60).contains(&i));
        let brute = (1..=100)
            .find(|&g| (0..=100 - g).all(|i| (i..i + g).any(|j| s.contains(j))))
            .unwrap();
        assert_eq!(covering_gap(&s), Some(brute));
    }

    #[test]
    fn run_profile_examples() {
        let p = run_profile(&WindowSet::empty(5).unwrap());
        assert!(p.runs.is_empty());
        assert_eq!(p.max_run, 0);
        let p = run_profile(&WindowSet::new(10, vec![2, 3, 4, 9]).unwrap());
        assert_eq!(p.runs, vec![(2, 3), (9, 1)]);
        assert_eq!(p.max_run, 3);
        // Runs of length j at 2^j.
        let h = 1 << 12;
        let s = WindowSet::from_unsorted(
            h,
            (1..12).flat_map(|j| (1usize << j)..(1usize << j) + j),
        )
        .unwrap();
        assert_eq!(run_profile(&s).max_run, 11);
        assert!(run_profile(&s).is_thick_at(11));
    }

    #[test]
    fn piecewise_examples() {
        let full = WindowSet::full(50).unwrap();
        assert_eq!(piecewise_syndetic_witness(&full, 1).unwrap().unwrap().interval, (0, 50));
        let evens = set(100, |i| i % 2 == 0);
        assert_eq!(piecewise_syndetic_witness(&evens, 2).unwrap().unwrap().interval, (0, 100));
        let local = set(100, |i| (40..80).contains(&i) && i % 2 == 0);
        assert_eq!(piecewise_syndetic_witness(&local, 2).unwrap().unwrap().interval, (40, 80));
        assert!(piecewise_syndetic_witness(&WindowSet::new(20, vec![5]).unwrap(), 3)
            .unwrap()
            .is_none());
        assert!(piecewise_syndetic_witness(&evens, 0).is_err());
    }

    #[test]
    fn thickly_syndetic_examples() {
        let full = WindowSet::full(200).unwrap();
        let c = thickly_syndetic_profile(&full, 5).unwrap().unwrap();
        assert!(c.entries.iter().all(|&(_, g)| g == 1));
        let co100 = set(2000, |i| i % 100 != 0);
        let c = thickly_syndetic_profile(&co100, 10).unwrap().unwrap();
        assert_eq!(c.entries.len(), 10);
        assert!(c.entries.iter().all(|&(_, g)| g <= 100));
        let evens = set(200, |i| i % 2 == 0);
        assert!(thickly_syndetic_profile(&evens, 2).unwrap().is_none());
    }

    #[test]
    fn density_examples() {
        let full = WindowSet::full(100).unwrap();
        let d = density_report(&full, 10).unwrap();
        assert_eq!(d.upper_banach, Ratio::from_integer(1));
        assert_eq!(d.upper_density, Ratio::from_integer(1));
        let evens = set(100, |i| i % 2 == 0);
        assert_eq!(density_report(&evens, 10).unwrap().upper_banach, Ratio::new(1, 2));
        assert!(density_report(&evens, 0).is_err());
        assert!(density_report(&evens, 101).is_err());
    }

    #[test]
    fn density_powers_of_two_sliding_window() {
        let h = 1 << 14;
        let s = set(h, |i| i.is_power_of_two());
        // Brute force over every window of length 64.
        let brute = (0..=h - 64)
            .map(|i| (i..i + 64).filter(|j| j.is_power_of_two()).count())
            .max()
            .unwrap();
        assert_eq!(brute, 7); // {1, 2, 4, 8, 16, 32} plus 64 in [1, 65)
        assert_eq!(density_report(&s, 64).unwrap().upper_banach, Ratio::new(7, 64));
    }
}
