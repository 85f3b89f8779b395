//! `--verify DIR`: rerun the recorded command on the bundled inputs, compare
//! every file byte for byte, then re-check the certificates with direct
//! scans that share no code with the detectors.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use clap::Parser;
use recforge::constructions::{ip_violations, validate_md, validate_sm, FsGenerators, MdTrace, SmTrace};
use recforge::families::validate::validate;
use recforge::independence::{witnesses_valid, IndependenceQuery};
use recforge::text::{parse_records, parse_set, parse_word, Record};
use recforge::{FamilyCertificate, PointPrefix, WindowSet, Word};

use crate::args::{Cli, Command, Construct, Demo, Independence};
use crate::bundle::{read_manifest, resolve, REPORT};
use crate::commands::{self, Settings};
use crate::error::{code, CliError, CliResult};
use crate::input::{load_point, load_set, parse_blocks, parse_positions, read};

struct Log {
    ok: bool,
}

impl Log {
    fn check(&mut self, name: &str, holds: bool) {
        println!("{name}: {}", if holds { "ok" } else { "MISMATCH" });
        self.ok &= holds;
    }
}

fn strip_header(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("# "))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn run(dir: &Path) -> CliResult<i32> {
    let m = read_manifest(dir)?;
    let mut argv = resolve(dir, &m.args);
    argv.push("--no-header".into());
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::range(format!("manifest arguments: {e}")))?;
    let cmd = cli
        .command
        .ok_or_else(|| CliError::range("manifest has no command"))?;
    let settings = Settings {
        budget: m.budget,
        no_header: true,
    };
    let outcome = commands::run(&cmd, &settings)?;
    let mut log = Log { ok: true };

    let stored = read(&dir.join(REPORT))?;
    log.check(REPORT, strip_header(&stored) == outcome.report);
    let names: Vec<&String> = outcome.files.keys().collect();
    log.check("file list", names.iter().map(|s| s.as_str()).eq(m.files.iter().map(|s| s.as_str())));
    for (name, contents) in &outcome.files {
        let on_disk = fs::read_to_string(dir.join(name)).unwrap_or_default();
        log.check(name, &on_disk == contents);
    }
    independent(&cmd, dir, &mut log)?;
    println!("verify: {}", if log.ok { "ok" } else { "FAILED" });
    Ok(if log.ok { code::OK } else { code::INVALID })
}

fn records(dir: &Path, name: &str) -> CliResult<Vec<Record>> {
    Ok(parse_records(&read(&dir.join(name))?)?)
}

fn word_file(dir: &Path, name: &str) -> CliResult<PointPrefix> {
    Ok(PointPrefix::new(parse_word(&read(&dir.join(name))?)?, name)?)
}

fn set_file(dir: &Path, name: &str) -> CliResult<WindowSet> {
    Ok(parse_set(&read(&dir.join(name))?)?)
}

fn find(s: &[u8], a: &[u8], at: usize) -> bool {
    at + a.len() <= s.len() && &s[at..at + a.len()] == a
}

fn subset(y: &PointPrefix, target: &WindowSet) -> bool {
    y.symbols()
        .iter()
        .enumerate()
        .all(|(i, &b)| b == 0 || target.contains(i))
}

fn independent(cmd: &Command, dir: &Path, log: &mut Log) -> CliResult<()> {
    match cmd {
        Command::FamiliesCheck(a) => {
            let s = load_set(&a.input)?;
            for rec in records(dir, "certificates.txt")? {
                let c = FamilyCertificate::from_record(&rec)?;
                log.check(&format!("revalidate {}", c.kind()), validate(&s, &c).is_ok());
            }
        }
        Command::SubshiftAnalyze(a) => {
            let x = load_point(&a.word)?;
            let recs = records(dir, "certificates.txt")?;
            let ent = recs
                .iter()
                .find(|r| r.get("kind") == Some("entropy"))
                .ok_or_else(|| CliError::range("no entropy record"))?;
            let counts: Vec<usize> = ent.parse_list("counts")?;
            for (i, &c) in counts.iter().enumerate().take(20) {
                let k = i + 1;
                let distinct: HashSet<&[u8]> = x.symbols().windows(k).collect();
                log.check(&format!("recount B_{k}"), distinct.len() == c);
            }
        }
        Command::Construct { kind } => match kind {
            Construct::Md(a) => {
                let c = load_point(&a.input)?;
                let y = word_file(dir, "word.txt")?;
                let t = MdTrace::from_records(&records(dir, "trace.txt")?)?;
                log.check("support inside C", subset(&y, &c.support()));
                log.check("md trace replay", validate_md(&c, &y, &t).is_ok());
            }
            Construct::Sm(a) => {
                let f = load_point(&a.input)?;
                let y = word_file(dir, "word.txt")?;
                let t = SmTrace::from_records(&records(dir, "trace.txt")?)?;
                log.check("support inside F", subset(&y, &f.support()));
                log.check("sm trace replay", validate_sm(&f, &y, &t).is_ok());
            }
            Construct::RapidIp(a) => {
                let f = load_set(&a.input)?;
                let fs = set_file(dir, "fs.txt")?;
                let rec = &records(dir, "certificates.txt")?[0];
                let gens: Vec<u64> = rec.parse_list("gens")?;
                log.check("fs.txt = subset sums", fs.elements() == brute_sums(&gens, f.horizon()));
                log.check("sums inside F", fs.iter().all(|e| f.contains(e)));
                let e = fs.elements();
                let diffs_ok = e
                    .iter()
                    .enumerate()
                    .all(|(i, &lo)| e[i + 1..].iter().all(|&hi| f.contains(hi - lo)));
                log.check("differences inside F", diffs_ok);
            }
            Construct::IpExtract(a) => {
                let x = load_point(&a.input)?;
                let rec = &records(dir, "certificates.txt")?[0];
                let gens = FsGenerators::new(rec.parse_list("gens")?)?;
                log.check("ip memberships", ip_violations(&x, &gens)?.is_empty());
            }
        },
        Command::Demo { kind } => match kind {
            Demo::Fps(a) | Demo::Fs(a) => {
                let x = load_point(&a.input)?;
                let block: Word = a.block.parse().map_err(|e| CliError::range(format!("{e}")))?;
                let b = block.symbols();
                let target = set_file(dir, "target.txt")?;
                let n = x.horizon() - b.len() + 1;
                let brute: Vec<usize> = (0..n).filter(|&t| find(x.symbols(), b, t)).collect();
                let complement: Vec<usize> = (0..n).filter(|&t| t == 0 || !find(x.symbols(), b, t)).collect();
                log.check("target = {0} ∪ complement of N(x, [A])", target.horizon() == n && target.elements() == complement);
                let y = word_file(dir, "word.txt")?;
                log.check("support inside target", subset(&y, &target));
                let joint: Vec<usize> = brute.iter().copied().filter(|&t| y.at(t) == 1).collect();
                let stored = set_file(dir, "joint.txt")?;
                log.check("joint recomputed", stored.elements() == joint);
                log.check("joint inside {0}", joint.iter().all(|&t| t == 0));
                let c = PointPrefix::indicator(&target, "target");
                let trace = records(dir, "trace.txt")?;
                let replay = match trace.first().and_then(|r| r.get("kind")) {
                    Some("md") => validate_md(&c, &y, &MdTrace::from_records(&trace)?).is_ok(),
                    _ => validate_sm(&c, &y, &SmTrace::from_records(&trace)?).is_ok(),
                };
                log.check("trace replay", replay);
            }
            Demo::Desert(a) => {
                let mut hits: Vec<HashSet<usize>> = Vec::new();
                for (i, input) in a.input.iter().enumerate() {
                    let f = load_set(input)?;
                    let fs = set_file(dir, &format!("fs{}.txt", i + 1))?;
                    log.check(&format!("FS{} inside F{}", i + 1, i + 1), fs.iter().all(|e| f.contains(e)));
                    let e = fs.elements();
                    let mut d = HashSet::new();
                    for (j, &lo) in e.iter().enumerate() {
                        for &hi in &e[j + 1..] {
                            d.insert(hi - lo);
                        }
                    }
                    log.check(
                        &format!("FS{0} - FS{0} inside F{0}", i + 1),
                        d.iter().all(|&v| f.contains(v)),
                    );
                    hits.push(d);
                }
                log.check("positive joint returns empty", hits[0].is_disjoint(&hits[1]));
            }
        },
        Command::Independence { kind } => match kind {
            Independence::Check(a) => {
                let x = load_point(&a.word)?;
                let blocks = parse_blocks(&a.blocks)?;
                let j = parse_positions(&a.set)?;
                let rec = &records(dir, "certificates.txt")?[0];
                match rec.get("independent") {
                    Some("yes") => {
                        let q = IndependenceQuery::new(x, blocks, j)?;
                        log.check("witness table", witnesses_valid(&q, &rec.parse_list::<usize>("witnesses")?));
                    }
                    _ => {
                        let pattern: Vec<usize> = rec.parse_list("missing")?;
                        log.check("pattern unrealised", !realised(&x, &blocks, &j, &pattern));
                    }
                }
            }
            Independence::Probe(a) => {
                let x = load_point(&a.word)?;
                let blocks = parse_blocks(&a.blocks)?;
                let rec = &records(dir, "certificates.txt")?[0];
                if rec.get("result") == Some("found") {
                    let j: Vec<usize> = rec.parse_list("j")?;
                    let shape = j.len() == a.size
                        && j[0] < a.gap
                        && j.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= a.gap);
                    log.check("candidate shape", shape);
                    let r = blocks.len();
                    let all = (0..r.pow(j.len() as u32)).all(|idx| {
                        let mut p = vec![0; j.len()];
                        let mut rest = idx;
                        for s in p.iter_mut().rev() {
                            *s = rest % r;
                            rest /= r;
                        }
                        realised(&x, &blocks, &j, &p)
                    });
                    log.check("every pattern realised", all);
                }
            }
        },
        Command::Generate(_) => {}
    }
    Ok(())
}

fn realised(x: &PointPrefix, blocks: &[Word], j: &[usize], pattern: &[usize]) -> bool {
    let s = x.symbols();
    (0..s.len()).any(|n| {
        j.iter()
            .zip(pattern)
            .all(|(&t, &k)| find(s, blocks[k].symbols(), n + t))
    })
}

fn brute_sums(gens: &[u64], cap: usize) -> Vec<usize> {
    let d = gens.len().min(30);
    let mut out: Vec<usize> = (1u64..1 << d)
        .filter_map(|m| {
            (0..d)
                .filter(|i| m >> i & 1 == 1)
                .try_fold(0u64, |acc, i| acc.checked_add(gens[i]))
        })
        .filter(|&s| s < cap as u64)
        .map(|s| s as usize)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
