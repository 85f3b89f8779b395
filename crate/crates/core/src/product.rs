//! Return times in product systems and the counterexample demos built from
//! the md and sm constructions.

use crate::constructions::{
    md_point, minimality_rows, rapid_ip, sm_point, validate_md, validate_sm, FsGenerators, GapRow, MdTrace, SmTrace,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::families::{difference_set, fs_set, piecewise_syndetic_witness, syndetic_gap, WindowSet};
use crate::subshift::{hitting_times, occurrences, PointPrefix, Word};

/// A pair of points with one cylinder each.
#[derive(Clone, Debug)]
pub struct ProductScenario {
    pub x: PointPrefix,
    pub a: Word,
    pub y: PointPrefix,
    pub b: Word,
}

impl ProductScenario {
    pub fn new(x: PointPrefix, a: Word, y: PointPrefix, b: Word) -> Result<Self> {
        for (p, w) in [(&x, &a), (&y, &b)] {
            if w.len() > p.horizon() {
                return Err(Error::BlockTooLong {
                    block: w.len(),
                    horizon: p.horizon(),
                });
            }
        }
        Ok(ProductScenario { x, a, y, b })
    }

    /// Common window of possible joint return times.
    pub fn horizon(&self) -> usize {
        (self.x.horizon() - self.a.len() + 1).min(self.y.horizon() - self.b.len() + 1)
    }
}

/// `N((x, y), [A] × [B]) = N(x, [A]) ∩ N(y, [B])` on the common window.
pub fn joint_return_times(s: &ProductScenario) -> Result<WindowSet> {
    let nx = occurrences(&s.x, &s.a)?;
    let ny = occurrences(&s.y, &s.b)?;
    Ok(nx.intersection(&ny))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemoTrace {
    Md(MdTrace),
    Sm(SmTrace),
}

impl DemoTrace {
    pub fn stop(&self) -> Option<&crate::constructions::Stop> {
        match self {
            DemoTrace::Md(t) => t.stop.as_ref(),
            DemoTrace::Sm(t) => t.stop.as_ref(),
        }
    }
}

/// Outcome of the fps or fs demo: the set `{0} ∪ (Z+ \ N(x, [A]))`, the
/// point `y` built inside it, and `N(x, [A]) ∩ N(y, [1])`.
#[derive(Clone, Debug)]
pub struct CounterexampleDemo {
    pub target: PointPrefix,
    pub point: PointPrefix,
    pub trace: DemoTrace,
    pub joint: WindowSet,
    /// Positions where `y` has a `1` outside the target.
    pub subset_violations: Vec<usize>,
    /// Trace replay result.
    pub replay: std::result::Result<(), crate::constructions::TraceError>,
    /// Stage-wise recurrence of `A_m` (fs demo only).
    pub minimality: Vec<GapRow>,
}

impl CounterexampleDemo {
    pub fn joint_within_zero(&self) -> bool {
        self.joint.iter().all(|n| n == 0)
    }

    /// Every certificate in the demo checks out.
    pub fn holds(&self) -> bool {
        self.subset_violations.is_empty()
            && self.joint_within_zero()
            && self.replay.is_ok()
            && self.minimality.iter().all(GapRow::holds)
    }
}

/// `{0} ∪` the complement of `N(x, [A])`, as an indicator.
fn adjoin_zero_complement(occ: &WindowSet, label: &str) -> Result<PointPrefix> {
    let c = occ.complement().with_elements([0])?;
    Ok(PointPrefix::indicator(&c, label))
}

fn finish(x: &PointPrefix, a: &Word, target: PointPrefix, point: PointPrefix) -> Result<(WindowSet, Vec<usize>)> {
    let one = Word::ones(1);
    let joint = joint_return_times(&ProductScenario::new(x.clone(), a.clone(), point.clone(), one)?)?;
    let violations = point.support().difference_from(&target.support());
    Ok((joint, violations))
}

/// If `N(x, [A])` is not syndetic on the window, `{0} ∪ Z+ \ N(x, [A])` is
/// thick there and hosts an md-point `y` whose return set to `[1]` meets
/// `N(x, [A])` only at 0.
pub fn fps_counterexample(x: &PointPrefix, a: &Word, stages: usize) -> Result<CounterexampleDemo> {
    let occ = occurrences(x, a)?;
    if let Some(g) = syndetic_gap(&occ) {
        return Err(Error::Precondition(format!(
            "N(x, [{a}]) is {g}-syndetic on the window of {}; the demo needs a non-syndetic return set",
            occ.horizon()
        )));
    }
    let target = adjoin_zero_complement(&occ, &format!("C({})", x.label()))?;
    let (point, trace) = md_point(&target, stages)?;
    let (joint, subset_violations) = finish(x, a, target.clone(), point.clone())?;
    let replay = validate_md(&target, &point, &trace);
    Ok(CounterexampleDemo {
        target,
        point,
        trace: DemoTrace::Md(trace),
        joint,
        subset_violations,
        replay,
        minimality: Vec::new(),
    })
}

/// Default gap bound for the fs precondition: `N/16` on a window of `N`.
pub fn default_gap_bound(window: usize) -> usize {
    (window / 16).max(1)
}

/// If `N(x, [A])` shows no long piecewise-syndetic stretch up to gap
/// `gap_bound`, its complement with 0 adjoined is thickly syndetic on the
/// window and hosts an sm-point `y` with `N(x, [A]) ∩ N(y, [1]) ⊆ {0}`.
///
/// "No long stretch" means the witness at `gap_bound` is absent or shorter
/// than a quarter of the window; witnesses only grow with the gap, so one
/// check covers every smaller gap.
pub fn fs_counterexample(x: &PointPrefix, a: &Word, stages: usize, gap_bound: Option<usize>) -> Result<CounterexampleDemo> {
    let occ = occurrences(x, a)?;
    let n = occ.horizon();
    let g = gap_bound.unwrap_or_else(|| default_gap_bound(n));
    if let Some(w) = piecewise_syndetic_witness(&occ, g)? {
        if w.length() >= n / 4 {
            return Err(Error::Precondition(format!(
                "N(x, [{a}]) is {g}-syndetic on [{}, {}), a quarter of the window or more",
                w.interval.0, w.interval.1
            )));
        }
    }
    let target = adjoin_zero_complement(&occ, &format!("F({})", x.label()))?;
    let (point, trace) = sm_point(&target, stages)?;
    let (joint, subset_violations) = finish(x, a, target.clone(), point.clone())?;
    let replay = validate_sm(&target, &point, &trace);
    let minimality = minimality_rows(&point, &trace)?;
    Ok(CounterexampleDemo {
        target,
        point,
        trace: DemoTrace::Sm(trace),
        joint,
        subset_violations,
        replay,
        minimality,
    })
}

/// One separately asserted fact of the desert demo.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct DesertDemo {
    pub gens: [FsGenerators; 2],
    pub sums: [WindowSet; 2],
    pub differences: [WindowSet; 2],
    /// Positive `n` in both `N([1], [1])` sets.
    pub joint: WindowSet,
    pub checks: Vec<Check>,
}

impl DesertDemo {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Two disjoint thick sets, a rapid IP set inside each, and the product of
/// the two FS indicators never returning `[1] × [1]` to itself at a
/// positive time.
pub fn recurrence_desert(f1: &PointPrefix, f2: &PointPrefix, depth: usize) -> Result<DesertDemo> {
    recurrence_desert_with(f1, f2, depth, Execution::default())
}

pub fn recurrence_desert_with(f1: &PointPrefix, f2: &PointPrefix, depth: usize, exec: Execution) -> Result<DesertDemo> {
    let s1 = f1.support();
    let s2 = f2.support();
    let overlap = s1.intersection(&s2);
    if !overlap.is_empty() {
        return Err(Error::Precondition(format!(
            "the two sets overlap ({} common elements, first {})",
            overlap.len(),
            overlap.first().unwrap_or(0)
        )));
    }
    let build = |f: &PointPrefix, i: usize| -> Result<(FsGenerators, WindowSet, WindowSet, WindowSet)> {
        let r = rapid_ip(f, depth)?;
        if let Some(stop) = r.stop {
            return Err(Error::Precondition(format!("F{i} is too thin: {stop}")));
        }
        let sums = fs_set(&r.gens, f.horizon())?;
        let x = PointPrefix::indicator(&sums, format!("FS{i}"));
        let one = Word::ones(1);
        let hits = hitting_times(&x, &one, &one)?;
        let diffs = difference_set(&sums);
        Ok((r.gens, sums, diffs, hits))
    };
    let (r1, r2) = exec.join(|| build(f1, 1), || build(f2, 2));
    let (g1, fs1, d1, h1) = r1?;
    let (g2, fs2, d2, h2) = r2?;
    let positive = |h: &WindowSet| h.restrict(1, h.horizon());
    let joint = positive(&h1)?.intersection(&positive(&h2)?);
    let mut checks = vec![Check {
        name: "F1 ∩ F2 = ∅".into(),
        holds: overlap.is_empty(),
    }];
    for (i, (fs, d, h, s)) in [(&fs1, &d1, &h1, &s1), (&fs2, &d2, &h2, &s2)].into_iter().enumerate() {
        let i = i + 1;
        checks.push(Check {
            name: format!("FS{i} ⊆ F{i}"),
            holds: fs.is_subset_of(s),
        });
        checks.push(Check {
            name: format!("FS{i} - FS{i} ⊆ F{i}"),
            holds: d.is_subset_of(s),
        });
        checks.push(Check {
            name: format!("N([1],[1]) of FS{i} = differences ∪ {{0}}"),
            holds: h.elements() == d.with_elements([0])?.restrict(0, h.horizon())?.elements(),
        });
    }
    checks.push(Check {
        name: "positive joint returns = ∅".into(),
        holds: joint.is_empty(),
    });
    Ok(DesertDemo {
        gens: [g1, g2],
        sums: [fs1, fs2],
        differences: [d1, d2],
        joint,
        checks,
    })
}
