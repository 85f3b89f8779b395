use crate::error::{Error, Result};
use crate::subshift::{PointPrefix, SuffixIndex, Word};
use crate::text::{join, Record};

use super::{trace_err, Stop, TraceError};

/// One stage of the md construction: `A_k` and the gap `a_k` used to build
/// it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdStage {
    pub k: usize,
    pub gap: usize,
    pub word: Word,
}

impl MdStage {
    /// `m_k = |A_k|`.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdTrace {
    pub horizon: usize,
    pub requested: usize,
    pub stages: Vec<MdStage>,
    pub stop: Option<Stop>,
}

impl MdTrace {
    pub fn is_complete(&self) -> bool {
        self.stop.is_none()
    }

    pub fn last(&self) -> &MdStage {
        self.stages.last().expect("a trace has at least one stage")
    }
}

/// `A_k A_{k-1}^{m_k/m_{k-1}} ... A_1^{m_k/m_1}`: the part of `A_{k+1}`
/// after the zero gap.
fn tail_word(words: &[Word]) -> Word {
    let top = words.last().expect("nonempty");
    let mut t = top.clone();
    for w in words[..words.len() - 1].iter().rev() {
        t.push_word(&w.repeat(top.len() / w.len()));
    }
    t
}

fn first_word(gap: usize) -> Word {
    let mut w = Word::ones(1);
    w.push_zeros(gap);
    w.push_word(&Word::ones(1));
    w
}

/// Builds `y` with `N(y, [1]) ⊆ C` and `A_1, ..., A_K` prefixes of `y`,
/// where
///
/// ```text
/// A_1     = 1 0^{a_1} 1
/// A_{k+1} = A_k 0^{a_{k+1}} A_k A_{k-1}^{m_k/m_{k-1}} ... A_1^{m_k/m_1}
/// ```
///
/// with `a_{k+1} > a_k`, `m_k | a_{k+1}` and every `1` of `A_{k+1}` landing
/// in `C`. `y` is `A_K` padded with zeros to the horizon of `C`.
pub fn md_point(c: &PointPrefix, stages: usize) -> Result<(PointPrefix, MdTrace)> {
    if stages == 0 {
        return Err(Error::OutOfRange {
            what: "stages",
            value: 0,
            bound: 1,
        });
    }
    if c.at(0) != 1 {
        return Err(Error::Precondition("the thick set must contain 0".into()));
    }
    let h = c.horizon();
    let cs = c.symbols();
    let a1 = (1..h.saturating_sub(1))
        .find(|&a| cs[a + 1] == 1)
        .ok_or_else(|| Error::WindowExhausted {
            stage: 1,
            reason: "the set has no element besides 0".into(),
        })?;
    let mut words = vec![first_word(a1)];
    let mut stages_out = vec![MdStage {
        k: 1,
        gap: a1,
        word: words[0].clone(),
    }];
    let mut stop = None;
    while stages_out.len() < stages {
        let k = stages_out.len();
        let prev = &stages_out[k - 1];
        let m = prev.len();
        let tail = tail_word(&words);
        let ones: Vec<usize> = tail.ones_positions().collect();
        let first_gap = (prev.gap / m + 1) * m;
        let gap = (first_gap..)
            .step_by(m)
            .take_while(|&a| m + a + tail.len() <= h)
            .find(|&a| ones.iter().all(|&i| cs[m + a + i] == 1));
        let Some(gap) = gap else {
            stop = Some(Stop {
                stage: k + 1,
                reason: format!(
                    "no admissible gap: a block of length {} with {} ones must fit after a multiple of {m} inside the window of {h}",
                    tail.len(),
                    ones.len()
                ),
            });
            break;
        };
        let mut word = prev.word.clone();
        word.push_zeros(gap);
        word.push_word(&tail);
        words.push(word.clone());
        stages_out.push(MdStage { k: k + 1, gap, word });
    }
    let mut y = stages_out.last().expect("stage 1 exists").word.clone();
    y.push_zeros(h - y.len());
    let trace = MdTrace {
        horizon: h,
        requested: stages,
        stages: stages_out,
        stop,
    };
    Ok((PointPrefix::new(y, format!("md({})", c.label()))?, trace))
}

/// Replays the trace from its gaps alone and checks it against `y` and `C`.
pub fn validate_md(c: &PointPrefix, y: &PointPrefix, trace: &MdTrace) -> std::result::Result<(), TraceError> {
    if trace.stages.is_empty() {
        return Err(trace_err(0, "empty trace"));
    }
    if c.horizon() != trace.horizon || y.horizon() != trace.horizon {
        return Err(trace_err(0, "horizon mismatch"));
    }
    let mut rebuilt: Vec<Word> = Vec::new();
    for (i, st) in trace.stages.iter().enumerate() {
        if st.k != i + 1 {
            return Err(trace_err(st.k, "stages out of order"));
        }
        let w = if i == 0 {
            if st.gap == 0 {
                return Err(trace_err(1, "a_1 must be positive"));
            }
            first_word(st.gap)
        } else {
            let prev = &trace.stages[i - 1];
            if st.gap <= prev.gap || st.gap % prev.len() != 0 {
                return Err(trace_err(st.k, "gap must exceed the previous one and be a multiple of m_k"));
            }
            let mut w = rebuilt[i - 1].clone();
            w.push_zeros(st.gap);
            // Tail built directly from the definition.
            let m = prev.len();
            for j in (0..i).rev() {
                for _ in 0..m / rebuilt[j].len() {
                    w.push_word(&rebuilt[j]);
                }
            }
            w
        };
        if w != st.word {
            return Err(trace_err(st.k, "recorded word differs from its replay"));
        }
        if rebuilt.iter().any(|r| w.len() % r.len() != 0) {
            return Err(trace_err(st.k, "m_j does not divide m_k"));
        }
        rebuilt.push(w);
    }
    let last = rebuilt.last().expect("nonempty");
    let ys = y.symbols();
    if ys[..last.len()] != *last.symbols() || ys[last.len()..].iter().any(|&b| b != 0) {
        return Err(trace_err(trace.stages.len(), "y is not A_K padded with zeros"));
    }
    if let Some(i) = y.word().ones_positions().find(|&i| c.at(i) != 1) {
        return Err(trace_err(trace.stages.len(), format!("y({i}) = 1 outside C")));
    }
    Ok(())
}

/// One row of the zero-entropy audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyRow {
    pub k: usize,
    pub m: usize,
    /// `B_{m_k}(y)`.
    pub count: usize,
    /// `(m_k + 1)^3`.
    pub bound: u128,
}

impl EntropyRow {
    pub fn holds(&self) -> bool {
        self.count as u128 <= self.bound
    }
}

/// `B_{m_k}(y)` against `(m_k + 1)^3` for every stage of an md trace.
pub fn entropy_bound_check(y: &PointPrefix, trace: &MdTrace) -> Result<Vec<EntropyRow>> {
    let m_max = trace.last().len();
    let bound = y.horizon() / 4;
    if m_max > bound {
        return Err(Error::OutOfRange {
            what: "m_K",
            value: m_max,
            bound,
        });
    }
    let counts = SuffixIndex::new(y.symbols()).distinct_counts(m_max);
    Ok(trace
        .stages
        .iter()
        .map(|st| {
            let m = st.len();
            EntropyRow {
                k: st.k,
                m,
                count: counts[m],
                bound: (m as u128 + 1).pow(3),
            }
        })
        .collect())
}

impl MdTrace {
    pub fn to_records(&self) -> Vec<Record> {
        let mut head = Record::new()
            .with("kind", "md")
            .with("horizon", self.horizon)
            .with("requested", self.requested)
            .with("completed", self.stages.len());
        if let Some(s) = &self.stop {
            head.push("stop_stage", s.stage);
            head.push("stop_reason", &s.reason);
        }
        let mut out = vec![head];
        for st in &self.stages {
            out.push(
                Record::new()
                    .with("stage", st.k)
                    .with("a", st.gap)
                    .with("length", st.len())
                    .with("word", st.word.to_hex()),
            );
        }
        out
    }

    pub fn from_records(recs: &[Record]) -> Result<Self> {
        let (head, rest) = recs.split_first().ok_or_else(|| Error::parse(0, "empty trace"))?;
        if head.require("kind")? != "md" {
            return Err(Error::parse(head.line(), "not an md trace"));
        }
        let stop = match head.get("stop_stage") {
            Some(_) => Some(Stop {
                stage: head.parse("stop_stage")?,
                reason: head.require("stop_reason")?.to_string(),
            }),
            None => None,
        };
        let stages = rest
            .iter()
            .map(|r| {
                Ok(MdStage {
                    k: r.parse("stage")?,
                    gap: r.parse("a")?,
                    word: Word::from_hex(r.parse("length")?, r.require("word")?)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if stages.len() != head.parse::<usize>("completed")? {
            return Err(Error::parse(head.line(), "stage count does not match `completed`"));
        }
        Ok(MdTrace {
            horizon: head.parse("horizon")?,
            requested: head.parse("requested")?,
            stages,
            stop,
        })
    }

    /// Stage summary `k:a_k:m_k` for reports.
    pub fn summary(&self) -> String {
        join(self.stages.iter().map(|s| format!("{}:{}:{}", s.k, s.gap, s.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{piecewise_syndetic_witness, WindowSet};
    use crate::subshift::{block_count, generators, occurrences};
    use crate::text::{format_records, parse_records};

    fn four_power_runs(h: usize) -> PointPrefix {
        let mut members = vec![0];
        let mut p = 4;
        while p < h {
            members.extend((p..p + p / 4).filter(|&i| i < h));
            p *= 4;
        }
        PointPrefix::indicator(&WindowSet::from_unsorted(h, members).unwrap(), "4^j")
    }

    #[test]
    fn all_ones_gives_101() {
        let c = generators::ones(1000).unwrap();
        let (y, trace) = md_point(&c, 2).unwrap();
        assert_eq!(trace.stages[0].word.to_string(), "101");
        assert_eq!(trace.stages[1].word.to_string(), "101000101");
        assert!(trace.is_complete());
        validate_md(&c, &y, &trace).unwrap();
    }

    #[test]
    fn four_power_runs_stages() {
        let c = four_power_runs(1 << 18);
        let (y, trace) = md_point(&c, 3).unwrap();
        let summary: Vec<(usize, usize)> = trace.stages.iter().map(|s| (s.gap, s.len())).collect();
        assert_eq!(summary, vec![(3, 5), (60, 70), (980, 1190)]);
        assert!(y.support().is_subset_of(&c.support()));
        validate_md(&c, &y, &trace).unwrap();
        for st in &trace.stages {
            assert_eq!(y.word().prefix(st.len()), st.word);
        }
        // A_1 recurs with gap m_1 on a long stretch.
        let occ = occurrences(&y, &trace.stages[0].word).unwrap();
        let w = piecewise_syndetic_witness(&occ, 5).unwrap().unwrap();
        assert!(w.length() >= 50);
    }

    #[test]
    fn thin_runs_give_partial() {
        // Runs of length 3 only: A_2's tail cannot be hosted.
        let h = 4000;
        let c = WindowSet::from_predicate(h, |i| i == 0 || i % 100 < 3).unwrap();
        let c = PointPrefix::indicator(&c, "thin");
        let (y, trace) = md_point(&c, 3).unwrap();
        assert!(!trace.is_complete());
        let stop = trace.stop.as_ref().unwrap();
        assert_eq!(stop.stage, trace.stages.len() + 1);
        validate_md(&c, &y, &trace).unwrap();
    }

    #[test]
    fn precondition_failures() {
        let c = PointPrefix::new("0111".parse().unwrap(), "").unwrap();
        assert!(matches!(md_point(&c, 1), Err(Error::Precondition(_))));
        let c = generators::single_one(50).unwrap();
        assert!(matches!(md_point(&c, 1), Err(Error::WindowExhausted { stage: 1, .. })));
    }

    #[test]
    fn validator_catches_tampering() {
        let c = four_power_runs(1 << 14);
        let (y, trace) = md_point(&c, 2).unwrap();
        let mut bad = trace.clone();
        bad.stages[1].gap += 5;
        assert!(validate_md(&c, &y, &bad).is_err());
        let mut w = y.word().clone().into_symbols();
        let last = w.len() - 1;
        w[last] = 1;
        let y2 = PointPrefix::new(Word::new(w).unwrap(), "").unwrap();
        assert!(validate_md(&c, &y2, &trace).is_err());
    }

    #[test]
    fn trace_roundtrip() {
        let c = four_power_runs(1 << 14);
        let (_, trace) = md_point(&c, 3).unwrap();
        let text = format_records(&trace.to_records());
        let back = MdTrace::from_records(&parse_records(&text).unwrap()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn entropy_bound() {
        let c = generators::ones(4000).unwrap();
        let (y, trace) = md_point(&c, 2).unwrap();
        let rows = entropy_bound_check(&y, &trace).unwrap();
        assert!(rows.iter().all(EntropyRow::holds));
        assert_eq!(rows[0].bound, 64);
        // Periodic control: (A_1)^∞ has exactly |A_1| blocks of length m_1.
        let a1: Word = "10001".parse().unwrap();
        let p = generators::periodic(&a1, 1000).unwrap();
        assert_eq!(block_count(&p, 5).unwrap().count, 5);
    }
}
