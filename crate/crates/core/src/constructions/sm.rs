use crate::error::{Error, Result};
use crate::families::WindowSet;
use crate::subshift::{block_gaps, PointPrefix, Word};
use crate::text::{join, Record};

use super::{run_lengths, trace_err, Stop, TraceError};

/// One rewritten run at stage `m + 1`: `[start, end)` receives
/// `B_{m+1} B_m^{p_m} ... B_1^{p_1} 0^{leftover}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmFill {
    /// Start `w` of the run of `F` hosting the rewrite.
    pub run: usize,
    pub start: usize,
    pub end: usize,
    /// `p_m, ..., p_1`.
    pub counts: Vec<usize>,
    pub leftover: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmStage {
    pub m: usize,
    /// `A_m`; `a_m = |A_m|`.
    pub word: Word,
    pub b: usize,
    pub r: usize,
    pub l: usize,
    /// `W_m`: starts of the runs of length `r_m` used at this stage.
    pub runs: WindowSet,
    /// `u^m`: positions of `B_m`.
    pub placements: WindowSet,
    /// Empty at stage 1, where `u^1 = W_1`.
    pub fills: Vec<SmFill>,
}

impl SmStage {
    pub fn a(&self) -> usize {
        self.word.len()
    }

    /// `B_m = A_m A_m 0 A_m`.
    pub fn block(&self) -> Word {
        doubled(&self.word)
    }
}

fn doubled(a: &Word) -> Word {
    let mut b = a.repeat(2);
    b.push_zeros(1);
    b.push_word(a);
    b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmTrace {
    pub horizon: usize,
    pub requested: usize,
    pub stages: Vec<SmStage>,
    pub stop: Option<Stop>,
}

impl SmTrace {
    pub fn is_complete(&self) -> bool {
        self.stop.is_none()
    }
}

fn write(y: &mut [u8], at: usize, w: &Word) {
    y[at..at + w.len()].copy_from_slice(w.symbols());
}

/// Greedy choice of run starts: each admissible start at least `2r` past
/// the previous one, `w >= first` and `w + r <= H`.
fn choose_runs<T>(
    runs: &[usize],
    r: usize,
    first: usize,
    mut admissible: impl FnMut(usize) -> Option<T>,
) -> Vec<(usize, T)> {
    let h = runs.len();
    let mut out = Vec::new();
    let mut p = first;
    while p + r <= h {
        if runs[p] >= r {
            if let Some(t) = admissible(p) {
                out.push((p, t));
                p += 2 * r;
                continue;
            }
        }
        p += 1;
    }
    out
}

fn gap_bound(runs: &[usize]) -> usize {
    let interior = runs.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    runs[0].max(interior)
}

/// Builds `y` with `N(y, [1]) ⊆ F` in which every `A_m` recurs with gaps
/// at most `l_m`.
///
/// `A_1 = 1`, `B_m = A_m A_m 0 A_m`. Stage 1 writes `B_1` at the starts of
/// runs of length `r_1 = b_1`. Stage `m + 1` sets `A_{m+1} = y[0..u^m_1 +
/// b_m)`, picks runs of length `r_{m+1} = 2 l_m + 2 b_m + b_{m+1}` and, in
/// each, keeps the first and last `B_m` and rewrites what lies between them
/// with `B_{m+1}` followed by as many `B_m`, then `B_{m-1}`, ..., `B_1` as
/// fit, and zeros.
pub fn sm_point(f: &PointPrefix, stages: usize) -> Result<(PointPrefix, SmTrace)> {
    if stages == 0 {
        return Err(Error::OutOfRange {
            what: "stages",
            value: 0,
            bound: 1,
        });
    }
    if f.at(0) != 1 {
        return Err(Error::Precondition("the thickly syndetic set must contain 0".into()));
    }
    let h = f.horizon();
    let runs = run_lengths(f.symbols());
    let mut y = vec![0u8; h];
    y[0] = 1;

    // Stage 1.
    let a1 = Word::ones(1);
    let b1 = doubled(&a1);
    let r1 = b1.len();
    let w1: Vec<usize> = choose_runs(&runs, r1, 2 * a1.len(), |_| Some(()))
        .into_iter()
        .map(|(w, _)| w)
        .collect();
    if w1.len() < 2 {
        return Err(Error::WindowExhausted {
            stage: 1,
            reason: format!("fewer than two runs of length {r1} in the window"),
        });
    }
    for &u in &w1 {
        write(&mut y, u, &b1);
    }
    let l1 = gap_bound(&w1);
    let mut blocks = vec![b1.clone()];
    let mut out = vec![SmStage {
        m: 1,
        word: a1,
        b: b1.len(),
        r: r1,
        l: l1,
        runs: WindowSet::new(h, w1.clone())?,
        placements: WindowSet::new(h, w1)?,
        fills: Vec::new(),
    }];

    let mut stop = None;
    while out.len() < stages {
        let prev = out.last().expect("stage 1 exists");
        let m = prev.m;
        let u = prev.placements.elements();
        let bm = prev.b;
        let a_next = u[0] + bm;
        let word = Word::new(y[..a_next].to_vec())?;
        let block = doubled(&word);
        let b_next = block.len();
        let r_next = 2 * prev.l + 2 * bm + b_next;
        // In the run [w, w + r): k = first B_m at or after w, j = last B_m
        // ending inside the run; B_{m+1} must fit strictly between them.
        let chosen = choose_runs(&runs, r_next, 2 * a_next, |w| {
            let k = u.partition_point(|&x| x < w);
            let j = u.partition_point(|&x| x + bm <= w + r_next).checked_sub(1)?;
            (k < u.len() && j > k && u[k] + bm + b_next <= u[j]).then_some((u[k] + bm, u[j]))
        });
        if chosen.len() < 2 {
            stop = Some(Stop {
                stage: m + 1,
                reason: format!("fewer than two usable runs of length {r_next} at or after {}", 2 * a_next),
            });
            break;
        }
        let mut fills = Vec::with_capacity(chosen.len());
        for &(w, (start, end)) in &chosen {
            write(&mut y, start, &block);
            let mut pos = start + b_next;
            let mut counts = Vec::with_capacity(m);
            for bi in blocks.iter().rev() {
                let p = (end - pos) / bi.len();
                for _ in 0..p {
                    write(&mut y, pos, bi);
                    pos += bi.len();
                }
                counts.push(p);
            }
            y[pos..end].fill(0);
            fills.push(SmFill {
                run: w,
                start,
                end,
                counts,
                leftover: end - pos,
            });
        }
        let ws: Vec<usize> = chosen.iter().map(|c| c.0).collect();
        let l_next = gap_bound(&ws) + prev.l + bm;
        let placements = WindowSet::new(h, fills.iter().map(|f| f.start).collect())?;
        blocks.push(block);
        out.push(SmStage {
            m: m + 1,
            word,
            b: b_next,
            r: r_next,
            l: l_next,
            runs: WindowSet::new(h, ws)?,
            placements,
            fills,
        });
    }
    let trace = SmTrace {
        horizon: h,
        requested: stages,
        stages: out,
        stop,
    };
    Ok((PointPrefix::new(Word::new(y)?, format!("sm({})", f.label()))?, trace))
}

/// Replays the placements recorded in the trace on an empty word and checks
/// every stated relation along the way.
pub fn validate_sm(f: &PointPrefix, y: &PointPrefix, trace: &SmTrace) -> std::result::Result<(), TraceError> {
    let h = trace.horizon;
    if f.horizon() != h || y.horizon() != h {
        return Err(trace_err(0, "horizon mismatch"));
    }
    let Some(first) = trace.stages.first() else {
        return Err(trace_err(0, "empty trace"));
    };
    let fs = f.symbols();
    let in_f = |a: usize, b: usize| b <= h && fs[a..b].iter().all(|&s| s == 1);
    let mut z = vec![0u8; h];
    if first.word.symbols() != [1] {
        return Err(trace_err(1, "A_1 must be the word 1"));
    }
    z[0] = 1;
    let mut blocks: Vec<Word> = Vec::new();
    for (i, st) in trace.stages.iter().enumerate() {
        let m = i + 1;
        if st.m != m {
            return Err(trace_err(st.m, "stages out of order"));
        }
        let a = st.a();
        if st.b != 3 * a + 1 {
            return Err(trace_err(m, "b != 3a + 1"));
        }
        let block = st.block();
        let w = st.runs.elements();
        if w.is_empty() || w[0] < 2 * a {
            return Err(trace_err(m, "first run starts before 2a"));
        }
        if w.windows(2).any(|p| p[1] - p[0] < 2 * st.r) {
            return Err(trace_err(m, "runs closer than 2r"));
        }
        if let Some(&bad) = w.iter().find(|&&p| !in_f(p, p + st.r)) {
            return Err(trace_err(m, format!("run at {bad} leaves F")));
        }
        if i == 0 {
            if st.r != st.b || st.placements != st.runs || !st.fills.is_empty() {
                return Err(trace_err(1, "stage 1 must place B_1 at the run starts"));
            }
            if st.l != gap_bound(w) {
                return Err(trace_err(1, "l_1 mismatch"));
            }
            for &u in w {
                write(&mut z, u, &block);
            }
        } else {
            let prev = &trace.stages[i - 1];
            let u = prev.placements.elements();
            if a != u[0] + prev.b || st.word.symbols() != &z[..a] {
                return Err(trace_err(m, "A_m is not the current prefix of length u_1 + b"));
            }
            if st.r != 2 * prev.l + 2 * prev.b + st.b {
                return Err(trace_err(m, "r != 2l + 2b + b'"));
            }
            if st.l != gap_bound(w) + prev.l + prev.b {
                return Err(trace_err(m, "l mismatch"));
            }
            if st.fills.len() != w.len() || st.placements.len() != w.len() {
                return Err(trace_err(m, "one fill per run expected"));
            }
            for (fill, (&run, &place)) in st.fills.iter().zip(w.iter().zip(st.placements.elements())) {
                if fill.run != run || fill.start != place {
                    return Err(trace_err(m, "fill does not match its run or placement"));
                }
                let k_ok = fill.start >= prev.b && {
                    let k = fill.start - prev.b;
                    u.binary_search(&k).is_ok() && k >= run && u.partition_point(|&x| x < run) == u.partition_point(|&x| x < k)
                };
                let j_ok = u.binary_search(&fill.end).is_ok_and(|j| {
                    fill.end + prev.b <= run + st.r && u.get(j + 1).is_none_or(|&n| n + prev.b > run + st.r)
                });
                if !k_ok || !j_ok {
                    return Err(trace_err(m, format!("fill at {} not anchored on B_{}", fill.start, m - 1)));
                }
                if fill.counts.len() != blocks.len() {
                    return Err(trace_err(m, "wrong number of fill counts"));
                }
                let used: usize = st.b
                    + fill
                        .counts
                        .iter()
                        .zip(blocks.iter().rev())
                        .map(|(p, b)| p * b.len())
                        .sum::<usize>();
                if fill.start + used + fill.leftover != fill.end || fill.leftover >= blocks[0].len() {
                    return Err(trace_err(m, format!("fill at {} has the wrong length", fill.start)));
                }
                // Greedy: no further copy of a block fits in what remains.
                let mut rest = fill.end - fill.start - st.b;
                for (p, b) in fill.counts.iter().zip(blocks.iter().rev()) {
                    if rest / b.len() != *p {
                        return Err(trace_err(m, format!("fill at {} is not greedy", fill.start)));
                    }
                    rest -= p * b.len();
                }
                write(&mut z, fill.start, &block);
                let mut pos = fill.start + st.b;
                for (p, b) in fill.counts.iter().zip(blocks.iter().rev()) {
                    for _ in 0..*p {
                        write(&mut z, pos, b);
                        pos += b.len();
                    }
                }
                z[pos..fill.end].fill(0);
            }
        }
        blocks.push(block);
    }
    if z != y.symbols() {
        let at = z.iter().zip(y.symbols()).position(|(a, b)| a != b).unwrap_or(0);
        return Err(trace_err(trace.stages.len(), format!("replay differs from y at {at}")));
    }
    if let Some(i) = y.word().ones_positions().find(|&i| fs[i] != 1) {
        return Err(trace_err(trace.stages.len(), format!("y({i}) = 1 outside F")));
    }
    Ok(())
}

impl SmTrace {
    pub fn to_records(&self) -> Vec<Record> {
        let mut head = Record::new()
            .with("kind", "sm")
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
                    .with("stage", st.m)
                    .with("a", st.a())
                    .with("word", st.word.to_hex())
                    .with("b", st.b)
                    .with("r", st.r)
                    .with("l", st.l)
                    .with("runs", join(st.runs.iter()))
                    .with("placements", join(st.placements.iter()))
                    .with(
                        "fills",
                        join(st.fills.iter().map(|f| {
                            format!(
                                "{}:{}:{}:{}:{}",
                                f.run,
                                f.start,
                                f.end,
                                f.leftover,
                                f.counts.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                            )
                        })),
                    ),
            );
        }
        out
    }

    pub fn from_records(recs: &[Record]) -> Result<Self> {
        let (head, rest) = recs.split_first().ok_or_else(|| Error::parse(0, "empty trace"))?;
        if head.require("kind")? != "sm" {
            return Err(Error::parse(head.line(), "not an sm trace"));
        }
        let h: usize = head.parse("horizon")?;
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
                let fills = r
                    .parse_list::<String>("fills")?
                    .iter()
                    .map(|f| parse_fill(f).ok_or_else(|| Error::parse(r.line(), format!("bad fill `{f}`"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SmStage {
                    m: r.parse("stage")?,
                    word: Word::from_hex(r.parse("a")?, r.require("word")?)?,
                    b: r.parse("b")?,
                    r: r.parse("r")?,
                    l: r.parse("l")?,
                    runs: WindowSet::new(h, r.parse_list("runs")?)?,
                    placements: WindowSet::new(h, r.parse_list("placements")?)?,
                    fills,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if stages.len() != head.parse::<usize>("completed")? {
            return Err(Error::parse(head.line(), "stage count does not match `completed`"));
        }
        Ok(SmTrace {
            horizon: h,
            requested: head.parse("requested")?,
            stages,
            stop,
        })
    }

    /// Stage summary `m:a_m:b_m:r_m:l_m` for reports.
    pub fn summary(&self) -> String {
        join(
            self.stages
                .iter()
                .map(|s| format!("{}:{}:{}:{}:{}", s.m, s.a(), s.b, s.r, s.l)),
        )
    }
}

/// Observed recurrence of `A_m` in `y` against the trace bound `l_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapRow {
    pub m: usize,
    pub bound: usize,
    pub occurrences: usize,
    pub head: Option<usize>,
    pub max_interior: Option<usize>,
    /// Truncated by the window; reported, not checked.
    pub tail: Option<usize>,
}

impl GapRow {
    pub fn holds(&self) -> bool {
        self.occurrences >= 2
            && self.head.is_some_and(|h| h < self.bound)
            && self.max_interior.is_some_and(|g| g <= self.bound)
    }
}

/// One [`GapRow`] per stage of the trace.
pub fn minimality_rows(y: &PointPrefix, trace: &SmTrace) -> Result<Vec<GapRow>> {
    trace
        .stages
        .iter()
        .map(|st| {
            let g = block_gaps(y, &st.word)?;
            Ok(GapRow {
                m: st.m,
                bound: st.l,
                occurrences: g.as_ref().map_or(0, |g| g.occurrences),
                head: g.as_ref().map(|g| g.head),
                max_interior: g.as_ref().and_then(|g| g.max_interior),
                tail: g.as_ref().map(|g| g.tail),
            })
        })
        .collect()
}

fn parse_fill(s: &str) -> Option<SmFill> {
    let mut it = s.split(':');
    let mut num = || it.next()?.parse::<usize>().ok();
    let (run, start, end, leftover) = (num()?, num()?, num()?, num()?);
    let counts = it
        .next()?
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect::<Option<Vec<usize>>>()?;
    Some(SmFill {
        run,
        start,
        end,
        counts,
        leftover,
    })
}
