use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use recforge::constructions::{
    entropy_bound_check, extract_ip, ip_violations, md_point, minimality_rows, rapid_ip, sm_point, validate_md,
    validate_sm,
};
use recforge::families::validate::validate;
use recforge::families::{
    covering_gap, density_report, difference_set, fs_set, piecewise_syndetic_witness, run_profile,
    syndetic_certificate, thickly_syndetic_profile, FamilyCertificate,
};
use recforge::independence::{
    check_independence, syndetic_independence_probe, Independence as IndResult, IndependenceQuery, Probe,
};
use recforge::product::{
    default_gap_bound, fps_counterexample, fs_counterexample, recurrence_desert, CounterexampleDemo, DemoTrace,
};
use recforge::subshift::{
    block_gaps, entropy_curve, minimality_certificate, occurrences, recurrence_certificate, regular_minimal_witness,
    weak_mixing_witness,
};
use recforge::text::{format_records, format_set, format_word, join, Record};
use recforge::{PointPrefix, Word};

use crate::args::{Command, Construct, Demo, Independence};
use crate::error::{code, CliError, CliResult};
use crate::input::{load_point, load_set, parse_blocks, parse_positions};

pub struct Settings {
    pub budget: u64,
    pub no_header: bool,
}

/// Everything a command produces: the report body, the other bundle files
/// and the exit status.
pub struct Outcome {
    pub report: String,
    pub files: BTreeMap<String, String>,
    pub status: i32,
}

struct Report {
    text: String,
    files: BTreeMap<String, String>,
    status: i32,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report {
            text: String::new(),
            files: BTreeMap::new(),
            status: code::OK,
        };
        r.line("command", command);
        r
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}: {value}");
    }

    fn blank(&mut self) {
        self.text.push('\n');
    }

    fn check(&mut self, name: &str, holds: bool) {
        self.line(name, if holds { "holds" } else { "FAILS" });
        if !holds {
            self.status = code::INVALID;
        }
    }

    /// Raises the status to `partial` unless something already failed.
    fn partial(&mut self) {
        if self.status == code::OK {
            self.status = code::PARTIAL;
        }
    }

    fn file(&mut self, name: &str, contents: String) {
        self.files.insert(name.to_string(), contents);
    }

    fn finish(mut self) -> Outcome {
        let status = match self.status {
            code::OK => "ok",
            code::PARTIAL => "partial",
            _ => "certificate validation failed",
        };
        self.line("status", status);
        Outcome {
            report: self.text,
            files: self.files,
            status: self.status,
        }
    }
}

fn describe(p: &PointPrefix) -> String {
    format!("{} (H = {})", p.label(), p.horizon())
}

pub fn run(cmd: &Command, settings: &Settings) -> CliResult<Outcome> {
    match cmd {
        Command::FamiliesCheck(a) => families(&a.input, a.gap, a.kmax, a.window),
        Command::SubshiftAnalyze(a) => analyze(&a.word, a.kmax, a.depth, &a.blocks),
        Command::Construct { kind } => match kind {
            Construct::Md(a) => construct_md(&a.input, a.stages),
            Construct::Sm(a) => construct_sm(&a.input, a.stages),
            Construct::RapidIp(a) => construct_rapid(&a.input, a.depth),
            Construct::IpExtract(a) => construct_ip(&a.input, a.depth),
        },
        Command::Demo { kind } => match kind {
            Demo::Fps(a) => demo_counter(&a.input, &a.block, a.stages, None, false),
            Demo::Fs(a) => demo_counter(&a.input, &a.block, a.stages, a.gap, true),
            Demo::Desert(a) => demo_desert(&a.input, a.depth),
        },
        Command::Independence { kind } => match kind {
            Independence::Check(a) => independence_check(&a.word, &a.blocks, &a.set, settings.budget),
            Independence::Probe(a) => independence_probe(&a.word, &a.blocks, a.gap, a.size, settings.budget),
        },
        Command::Generate(_) => Err(CliError::usage("generate does not produce a bundle")),
    }
}

fn positive(what: &str, v: usize) -> CliResult<()> {
    if v == 0 {
        return Err(CliError::range(format!("--{what} must be at least 1")));
    }
    Ok(())
}

fn families(input: &Path, gap: usize, kmax: usize, window: Option<usize>) -> CliResult<Outcome> {
    positive("gap", gap)?;
    positive("kmax", kmax)?;
    let s = load_set(input)?;
    let h = s.horizon();
    let mut r = Report::new("families-check");
    let name = input.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    r.line("input", format!("{name} (H = {h}, |S| = {})", s.len()));
    let mut certs = Vec::new();

    match syndetic_certificate(&s) {
        Some(c) => {
            r.line("syndetic", format!("gap {}", c.gap));
            certs.push(FamilyCertificate::Syndetic(c));
        }
        None => r.line(
            "syndetic",
            format!(
                "absent on window (covering gap {})",
                covering_gap(&s).map_or("none".into(), |g| g.to_string())
            ),
        ),
    }
    let thick = run_profile(&s);
    r.line("thick", format!("max run {} over {} runs", thick.max_run, thick.runs.len()));
    certs.push(FamilyCertificate::Thick(thick));
    match piecewise_syndetic_witness(&s, gap)? {
        Some(c) => {
            r.line(
                "piecewise syndetic",
                format!("gap {} on [{}, {})", c.gap, c.interval.0, c.interval.1),
            );
            certs.push(FamilyCertificate::PiecewiseSyndetic(c));
        }
        None => r.line("piecewise syndetic", format!("no witness at gap {gap}")),
    }
    match thickly_syndetic_profile(&s, kmax)? {
        Some(c) => {
            r.line(
                "thickly syndetic",
                join(c.entries.iter().map(|(n, g)| format!("{n}:{g}"))),
            );
            certs.push(FamilyCertificate::ThicklySyndetic(c));
        }
        None => r.line("thickly syndetic", format!("fails for some n <= {kmax}")),
    }
    let ell = window.unwrap_or(h.min(100));
    let d = density_report(&s, ell)?;
    r.line(
        "density",
        format!("upper Banach at {ell}: {}, upper density: {}", d.upper_banach, d.upper_density),
    );
    certs.push(FamilyCertificate::Density(d));
    r.blank();
    for c in &certs {
        let res = validate(&s, c);
        r.check(&format!("validator {}", c.kind()), res.is_ok());
    }
    r.file("certificates.txt", format_records(certs.iter().map(FamilyCertificate::to_record).collect::<Vec<_>>().iter()));
    Ok(r.finish())
}

fn analyze(word: &Path, kmax: Option<usize>, depth: Option<usize>, blocks: &[String]) -> CliResult<Outcome> {
    let x = load_point(word)?;
    let h = x.horizon();
    let kmax = kmax.unwrap_or((h / 4).min(16));
    let depth = depth.unwrap_or((h / 4).min(8));
    positive("depth", depth)?;
    let mut r = Report::new("subshift-analyze");
    r.line("word", describe(&x));
    let mut recs = Vec::new();

    let curve = entropy_curve(&x, kmax)?;
    r.line("entropy base", "natural log");
    let mut table = String::from("k\tB_k\t(1/k) ln B_k\n");
    for s in &curve {
        let _ = writeln!(table, "{}\t{}\t{:.6}", s.k, s.count, s.entropy_estimate);
    }
    r.text.push_str(&table);
    recs.push(
        Record::new()
            .with("kind", "entropy")
            .with("kmax", kmax)
            .with("counts", join(curve.iter().map(|s| s.count))),
    );

    let rec = recurrence_certificate(&x, depth)?;
    let returns = join(rec.first_returns.iter().map(|t| t.map_or("-".into(), |t| t.to_string())));
    r.line("first returns", &returns);
    r.line("recurrent to depth", format!("{depth}: {}", if rec.is_recurrent() { "yes" } else { "no" }));
    recs.push(
        Record::new()
            .with("kind", "recurrence")
            .with("depth", depth)
            .with("first_returns", returns),
    );

    let mdepth = depth.min(64);
    let min = minimality_certificate(&x, mdepth)?;
    let bound = min.bound();
    r.line(
        "minimality",
        format!(
            "{} blocks of length <= {mdepth}, gap bound {}",
            min.blocks.len(),
            bound.map_or("none (a block occurs once)".into(), |b| b.to_string())
        ),
    );
    recs.push(
        Record::new()
            .with("kind", "minimality")
            .with("depth", mdepth)
            .with("blocks", min.blocks.len())
            .with("bound", bound.map_or("none".into(), |b| b.to_string())),
    );

    let wk = depth.min(3);
    let wm = weak_mixing_witness(&x, wk)?;
    let pairs = join(wm.iter().map(|(a, s)| format!("{a}:{}", s.map_or("-".into(), |s| s.to_string()))));
    r.line(&format!("weak mixing witnesses (k = {wk})"), &pairs);
    recs.push(Record::new().with("kind", "weak_mixing").with("k", wk).with("witnesses", pairs));

    for b in blocks {
        let a: Word = b.parse().map_err(|e| CliError::range(format!("block {b:?}: {e}")))?;
        let gaps = block_gaps(&x, &a)?;
        let reg = regular_minimal_witness(&x, &a)?;
        let mut rec = Record::new().with("kind", "block").with("word", &a);
        match &gaps {
            Some(g) => {
                r.line(
                    &format!("block {a}"),
                    format!(
                        "{} occurrences, head {}, max interior gap {}, tail {}",
                        g.occurrences,
                        g.head,
                        g.max_interior.map_or("-".into(), |v| v.to_string()),
                        g.tail
                    ),
                );
                rec.push("occurrences", g.occurrences);
                rec.push("head", g.head);
                rec.push("max_interior", g.max_interior.map_or("-".into(), |v| v.to_string()));
                rec.push("tail", g.tail);
            }
            None => {
                r.line(&format!("block {a}"), "does not occur");
                rec.push("occurrences", 0);
            }
        }
        let reg = reg.map_or("-".into(), |k| k.to_string());
        r.line(&format!("block {a} regular period"), &reg);
        rec.push("regular", reg);
        recs.push(rec);
    }
    r.file("certificates.txt", format_records(&recs));
    Ok(r.finish())
}

fn construct_md(input: &Path, stages: usize) -> CliResult<Outcome> {
    positive("stages", stages)?;
    let c = load_point(input)?;
    let (y, trace) = md_point(&c, stages)?;
    let mut r = Report::new("construct md");
    r.line("input", describe(&c));
    r.line("stages", format!("{} of {}", trace.stages.len(), stages));
    r.line("stages k:a_k:m_k", trace.summary());
    if let Some(stop) = &trace.stop {
        r.line("stopped", stop);
        r.partial();
    }
    let mut recs = Vec::new();
    let violations = y.support().difference_from(&c.support());
    r.blank();
    r.check("N(y, [1]) ⊆ C", violations.is_empty());
    r.check("trace replay", validate_md(&c, &y, &trace).is_ok());
    recs.push(
        Record::new()
            .with("kind", "subset")
            .with("violations", violations.len()),
    );
    let k_count = trace.stages.len();
    for st in trace.stages.iter().take(k_count.saturating_sub(2)) {
        let occ = occurrences(&y, &st.word)?;
        let w = piecewise_syndetic_witness(&occ, st.len())?;
        let mut rec = Record::new().with("kind", "piecewise").with("stage", st.k).with("gap", st.len());
        match w {
            Some(w) => {
                r.line(
                    &format!("A_{} piecewise witness", st.k),
                    format!("gap {} on [{}, {}), length {}", st.len(), w.interval.0, w.interval.1, w.length()),
                );
                rec.push("interval", format!("{} {}", w.interval.0, w.interval.1));
            }
            None => {
                r.check(&format!("A_{} piecewise witness", st.k), false);
                rec.push("interval", "none");
            }
        }
        recs.push(rec);
    }
    match entropy_bound_check(&y, &trace) {
        Ok(rows) => {
            for row in &rows {
                r.check(
                    &format!("B_{}(y) = {} <= (m_{} + 1)^3 = {}", row.m, row.count, row.k, row.bound),
                    row.holds(),
                );
                recs.push(
                    Record::new()
                        .with("kind", "entropy_bound")
                        .with("stage", row.k)
                        .with("m", row.m)
                        .with("count", row.count)
                        .with("bound", row.bound),
                );
            }
        }
        Err(e) => r.line("entropy bound", format!("skipped: {e}")),
    }
    r.file("word.txt", format_word(y.word()));
    r.file("trace.txt", format_records(&trace.to_records()));
    r.file("certificates.txt", format_records(&recs));
    Ok(r.finish())
}

fn construct_sm(input: &Path, stages: usize) -> CliResult<Outcome> {
    positive("stages", stages)?;
    let f = load_point(input)?;
    let (y, trace) = sm_point(&f, stages)?;
    let mut r = Report::new("construct sm");
    r.line("input", describe(&f));
    r.line("stages", format!("{} of {}", trace.stages.len(), stages));
    r.line("stages m:a:b:r:l", trace.summary());
    if let Some(stop) = &trace.stop {
        r.line("stopped", stop);
        r.partial();
    }
    let violations = y.support().difference_from(&f.support());
    r.blank();
    r.check("N(y, [1]) ⊆ F", violations.is_empty());
    r.check("trace replay", validate_sm(&f, &y, &trace).is_ok());
    let mut recs = vec![Record::new().with("kind", "subset").with("violations", violations.len())];
    sm_rows(&mut r, &mut recs, &y, &trace)?;
    r.file("word.txt", format_word(y.word()));
    r.file("trace.txt", format_records(&trace.to_records()));
    r.file("certificates.txt", format_records(&recs));
    Ok(r.finish())
}

fn sm_rows(r: &mut Report, recs: &mut Vec<Record>, y: &PointPrefix, trace: &recforge::constructions::SmTrace) -> CliResult<()> {
    for row in minimality_rows(y, trace)? {
        let interior = row.max_interior.map_or("-".into(), |v| v.to_string());
        r.check(
            &format!("A_{} gaps <= l_{} = {} (max interior {interior})", row.m, row.m, row.bound),
            row.holds(),
        );
        recs.push(
            Record::new()
                .with("kind", "gaps")
                .with("stage", row.m)
                .with("bound", row.bound)
                .with("occurrences", row.occurrences)
                .with("max_interior", interior)
                .with("tail", row.tail.map_or("-".into(), |v| v.to_string())),
        );
    }
    for st in &trace.stages {
        let hits = recforge::subshift::hitting_times(y, &st.word, &st.word)?;
        let a = st.a();
        r.check(
            &format!("{{{a}, {}}} ⊆ N([A_{m}], [A_{m}])", a + 1, m = st.m),
            hits.contains(a) && hits.contains(a + 1),
        );
    }
    Ok(())
}

fn construct_rapid(input: &Path, depth: usize) -> CliResult<Outcome> {
    positive("depth", depth)?;
    let f = load_point(input)?;
    let res = rapid_ip(&f, depth)?;
    let mut r = Report::new("construct rapid-ip");
    r.line("input", describe(&f));
    r.line("generators", join(res.gens.gens()));
    if let Some(stop) = &res.stop {
        r.line("stopped", stop);
        r.partial();
    }
    let support = f.support();
    let fs = fs_set(&res.gens, f.horizon())?;
    let diffs = difference_set(&fs);
    r.blank();
    r.check(&format!("FS ({} sums) ⊆ F", fs.len()), fs.is_subset_of(&support));
    r.check(&format!("FS - FS ({} differences) ⊆ F", diffs.len()), diffs.is_subset_of(&support));
    r.file("fs.txt", format_set(&fs));
    r.file(
        "certificates.txt",
        format_records(&[Record::new()
            .with("kind", "rapid_ip")
            .with("gens", join(res.gens.gens()))
            .with("sums", fs.len())
            .with("differences", diffs.len())]),
    );
    Ok(r.finish())
}

fn construct_ip(input: &Path, depth: usize) -> CliResult<Outcome> {
    positive("depth", depth)?;
    let x = load_point(input)?;
    let gens = extract_ip(&x, depth)?;
    let mut r = Report::new("construct ip-extract");
    r.line("input", describe(&x));
    r.line("generators", join(gens.gens()));
    let bad = ip_violations(&x, &gens)?;
    r.blank();
    r.check("FS(p_n..p_d) ⊆ N(x, [x[0..n)]) for every n", bad.is_empty());
    r.file(
        "certificates.txt",
        format_records(&[Record::new()
            .with("kind", "ip_extract")
            .with("depth", depth)
            .with("gens", join(gens.gens()))
            .with("violations", bad.len())]),
    );
    Ok(r.finish())
}

fn demo_counter(input: &Path, block: &str, stages: usize, gap: Option<usize>, fs: bool) -> CliResult<Outcome> {
    positive("stages", stages)?;
    if let Some(g) = gap {
        positive("gap", g)?;
    }
    let x = load_point(input)?;
    let a: Word = block.parse().map_err(|e| CliError::range(format!("block {block:?}: {e}")))?;
    let demo = if fs {
        fs_counterexample(&x, &a, stages, gap)?
    } else {
        fps_counterexample(&x, &a, stages)?
    };
    let mut r = Report::new(if fs { "demo fs" } else { "demo fps" });
    r.line("input", describe(&x));
    r.line("block", &a);
    let window = demo.target.horizon();
    r.line("window", window);
    if fs {
        r.line("precondition gap bound", gap.unwrap_or_else(|| default_gap_bound(window)));
    }
    match &demo.trace {
        DemoTrace::Md(t) => r.line("md stages k:a_k:m_k", t.summary()),
        DemoTrace::Sm(t) => r.line("sm stages m:a:b:r:l", t.summary()),
    }
    if let Some(stop) = demo.trace.stop() {
        r.line("stopped", stop);
        r.partial();
    }
    counter_checks(&mut r, &demo, fs)?;
    Ok(r.finish())
}

fn counter_checks(r: &mut Report, demo: &CounterexampleDemo, fs: bool) -> CliResult<()> {
    r.line("joint return set", format!("{{{}}}", join(demo.joint.iter()).replace(' ', ", ")));
    r.blank();
    r.check("N(y, [1]) ⊆ target", demo.subset_violations.is_empty());
    r.check("trace replay", demo.replay.is_ok());
    r.check("joint ⊆ {0}", demo.joint_within_zero());
    let mut recs = vec![Record::new()
        .with("kind", "joint")
        .with("elements", join(demo.joint.iter()))
        .with("subset_violations", demo.subset_violations.len())];
    if fs {
        if let DemoTrace::Sm(t) = &demo.trace {
            sm_rows(r, &mut recs, &demo.point, t)?;
        }
    }
    let trace = match &demo.trace {
        DemoTrace::Md(t) => t.to_records(),
        DemoTrace::Sm(t) => t.to_records(),
    };
    r.file("target.txt", format_set(&demo.target.support()));
    r.file("word.txt", format_word(demo.point.word()));
    r.file("trace.txt", format_records(&trace));
    r.file("joint.txt", format_set(&demo.joint));
    r.file("certificates.txt", format_records(&recs));
    Ok(())
}

fn demo_desert(inputs: &[std::path::PathBuf], depth: usize) -> CliResult<Outcome> {
    positive("depth", depth)?;
    let [p1, p2] = inputs else {
        return Err(CliError::usage("demo desert needs exactly two --input files"));
    };
    let f1 = load_point(p1)?;
    let f2 = load_point(p2)?;
    let d = recurrence_desert(&f1, &f2, depth)?;
    let mut r = Report::new("demo desert");
    r.line("F1", describe(&f1));
    r.line("F2", describe(&f2));
    let mut recs = Vec::new();
    for i in 0..2 {
        r.line(&format!("generators {}", i + 1), join(d.gens[i].gens()));
        recs.push(
            Record::new()
                .with("kind", "rapid_ip")
                .with("side", i + 1)
                .with("gens", join(d.gens[i].gens()))
                .with("sums", d.sums[i].len())
                .with("differences", d.differences[i].len()),
        );
    }
    r.line("positive joint returns", d.joint.len());
    r.blank();
    for c in &d.checks {
        r.check(&c.name, c.holds);
    }
    recs.push(Record::new().with("kind", "joint").with("elements", join(d.joint.iter())));
    r.file("fs1.txt", format_set(&d.sums[0]));
    r.file("fs2.txt", format_set(&d.sums[1]));
    r.file("certificates.txt", format_records(&recs));
    Ok(r.finish())
}

fn independence_check(word: &Path, blocks: &str, set: &str, budget: u64) -> CliResult<Outcome> {
    let x = load_point(word)?;
    let q = IndependenceQuery::new(x.clone(), parse_blocks(blocks)?, parse_positions(set)?)?;
    let res = check_independence(&q, budget)?;
    let mut r = Report::new("independence check");
    r.line("word", describe(&x));
    r.line("blocks", join(q.blocks()));
    r.line("J", join(q.j()));
    let rec = Record::new()
        .with("kind", "independence")
        .with("blocks", join(q.blocks()))
        .with("j", join(q.j()));
    let rec = match &res {
        IndResult::Independent { witnesses } => {
            r.line("independent", format!("yes, all {} patterns realised", witnesses.len()));
            rec.with("independent", "yes").with("witnesses", join(witnesses))
        }
        IndResult::Missing { pattern } => {
            r.line("independent", format!("no, missing pattern ({})", join(pattern).replace(' ', ", ")));
            rec.with("independent", "no").with("missing", join(pattern))
        }
    };
    r.file("certificates.txt", format_records(&[rec]));
    Ok(r.finish())
}

fn independence_probe(word: &Path, blocks: &str, gap: usize, size: usize, budget: u64) -> CliResult<Outcome> {
    positive("gap", gap)?;
    positive("size", size)?;
    let x = load_point(word)?;
    let blocks = parse_blocks(blocks)?;
    let res = syndetic_independence_probe(&x, &blocks, gap, size, budget)?;
    let mut r = Report::new("independence probe");
    r.line("word", describe(&x));
    r.line("blocks", join(&blocks));
    r.line("gap", gap);
    r.line("size", size);
    let rec = Record::new()
        .with("kind", "probe")
        .with("blocks", join(&blocks))
        .with("gap", gap)
        .with("size", size);
    let rec = match &res {
        Probe::Found { j, checked } => {
            r.line("found", format!("J = {{{}}} after {checked} candidates", join(j).replace(' ', ", ")));
            rec.with("result", "found").with("j", join(j)).with("checked", checked)
        }
        Probe::Exhausted { checked } => {
            r.line("found", format!("none; all {checked} candidates fail"));
            rec.with("result", "exhausted").with("checked", checked)
        }
        Probe::Partial { checked, total, next } => {
            r.line("found", format!("none in {checked} of {total} candidates; budget exhausted"));
            r.line("next candidate", join(next));
            r.partial();
            rec.with("result", "partial")
                .with("checked", checked)
                .with("total", total)
                .with("next", join(next))
        }
    };
    r.file("certificates.txt", format_records(&[rec]));
    Ok(r.finish())
}
