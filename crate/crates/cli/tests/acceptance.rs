//! Acceptance battery. One line per criterion:
//! `[PASS] criterion N: <name> (<seconds>s)` or `[FAIL] ...: <reason>`.
//! Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recforge::constructions::{
    entropy_bound_check, extract_ip, md_point, minimality_rows, sm_point, validate_md, validate_sm,
};
use recforge::families::validate::validate;
use recforge::families::{
    covering_gap, density_report, piecewise_syndetic_witness, run_profile, syndetic_certificate, syndetic_gap,
    thickly_syndetic_profile, FamilyCertificate,
};
use recforge::independence::{check_independence, syndetic_independence_probe, Independence, IndependenceQuery, Probe};
use recforge::product::recurrence_desert;
use recforge::subshift::{block_count, generators, hitting_times, occurrences};
use recforge::text::{format_set, parse_set};
use recforge::{PointPrefix, WindowSet, Word, DEFAULT_BUDGET};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: f64, what: &str) -> Outcome {
    let s = start.elapsed().as_secs_f64();
    ensure(s < limit, || format!("{what} took {s:.2}s, limit {limit}s"))
}

fn set_point(h: usize, members: impl IntoIterator<Item = usize>, label: String) -> PointPrefix {
    PointPrefix::indicator(&WindowSet::from_unsorted(h, members).unwrap(), label)
}

fn four_power_runs(h: usize) -> PointPrefix {
    let mut m = vec![0];
    let mut p = 4;
    while p < h {
        m.extend((p..p + p / 4).take_while(|&i| i < h));
        p *= 4;
    }
    set_point(h, m, "4^j runs".into())
}

fn growing_runs(seed: u64, h: usize) -> PointPrefix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![0];
    let mut p: usize = rng.gen_range(3..=12);
    let mut first = true;
    while p < h {
        let len = if first { (p / 4).max(1) } else { p / rng.gen_range(2..=3) };
        m.extend((p..p + len).take_while(|&i| i < h));
        p *= rng.gen_range(12..=20);
        first = false;
    }
    set_point(h, m, format!("random runs #{seed}"))
}

fn md_soundness() -> Outcome {
    let h = 200_000;
    let specs = std::iter::once(four_power_runs(h)).chain((0..24).map(|s| growing_runs(100 + s, h)));
    for c in specs {
        let t = Instant::now();
        let (y, trace) = md_point(&c, 3).map_err(|e| format!("{}: {e}", c.label()))?;
        ensure(trace.is_complete(), || format!("{}: stopped {:?}", c.label(), trace.stop))?;
        let bad = y.support().difference_from(&c.support());
        ensure(bad.is_empty(), || format!("{}: {} violations", c.label(), bad.len()))?;
        ensure(validate_md(&c, &y, &trace).is_ok(), || format!("{}: replay", c.label()))?;
        let a1 = &trace.stages[0];
        let occ = occurrences(&y, &a1.word).map_err(|e| e.to_string())?;
        let w = piecewise_syndetic_witness(&occ, a1.len()).map_err(|e| e.to_string())?;
        let len = w.map_or(0, |w| w.length());
        ensure(len >= 10 * a1.len(), || format!("{}: witness {len} < 10 * {}", c.label(), a1.len()))?;
        within(t, 5.0, c.label())?;
    }
    Ok(())
}

fn sm_soundness() -> Outcome {
    let h = 300_000;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + seed);
        let q = rng.gen_range(500..3000);
        let r = rng.gen_range(1..q);
        let f = PointPrefix::indicator(
            &WindowSet::from_predicate(h, |i| i == 0 || i % q != r).unwrap(),
            format!("complement of {q}Z+{r}"),
        );
        let t = Instant::now();
        let (y, trace) = sm_point(&f, 3).map_err(|e| format!("{}: {e}", f.label()))?;
        ensure(trace.is_complete(), || format!("{}: stopped {:?}", f.label(), trace.stop))?;
        ensure(y.support().is_subset_of(&f.support()), || format!("{}: escapes F", f.label()))?;
        ensure(validate_sm(&f, &y, &trace).is_ok(), || format!("{}: replay", f.label()))?;
        for row in minimality_rows(&y, &trace).map_err(|e| e.to_string())? {
            ensure(row.holds(), || format!("{}: A_{} gap exceeds {}", f.label(), row.m, row.bound))?;
        }
        for st in &trace.stages {
            let hits = hitting_times(&y, &st.word, &st.word).map_err(|e| e.to_string())?;
            ensure(hits.contains(st.a()) && hits.contains(st.a() + 1), || {
                format!("{}: weak-mixing pair missing at stage {}", f.label(), st.m)
            })?;
        }
        within(t, 30.0, f.label())?;
    }
    Ok(())
}

fn entropy_bound() -> Outcome {
    let h = 300_000;
    let c = four_power_runs(h);
    let (y, trace) = md_point(&c, 4).map_err(|e| e.to_string())?;
    ensure(trace.is_complete(), || format!("stopped {:?}", trace.stop))?;
    let rows = entropy_bound_check(&y, &trace).map_err(|e| e.to_string())?;
    ensure(rows.len() == 4, || format!("{} rows", rows.len()))?;
    for r in &rows {
        ensure(r.holds(), || format!("B_{} = {} > {}", r.m, r.count, r.bound))?;
    }
    let db = generators::de_bruijn_prefix(10, h).map_err(|e| e.to_string())?;
    for k in 1..=10 {
        let e = block_count(&db, k).map_err(|e| e.to_string())?.entropy_estimate;
        ensure(e >= 0.6, || format!("de Bruijn estimate at k = {k} is {e:.4}"))?;
    }
    let m3 = trace.stages[2].len();
    let e = block_count(&y, m3).map_err(|e| e.to_string())?.entropy_estimate;
    ensure(e < 0.1, || format!("md estimate at k = m_3 = {m3} is {e:.4}"))
}

fn ip_extraction() -> Outcome {
    let h = 1 << 14;
    let points = [
        generators::zeros(h).unwrap(),
        generators::periodic(&"01".parse().unwrap(), h).unwrap(),
        generators::thue_morse(h).unwrap(),
    ];
    for x in &points {
        let gens = extract_ip(x, 4).map_err(|e| format!("{}: {e}", x.label()))?;
        let p = gens.gens();
        let s = x.symbols();
        for n in 1..=4 {
            let tail = &p[n - 1..];
            let mut checked = 0;
            for mask in 1u32..1 << tail.len() {
                let sum: u64 = (0..tail.len()).filter(|i| mask >> i & 1 == 1).map(|i| tail[i]).sum();
                let t = sum as usize;
                ensure(t + n <= s.len() && s[t..t + n] == s[..n], || {
                    format!("{}: {t} not a return to the {n}-prefix", x.label())
                })?;
                checked += 1;
            }
            ensure(checked == (1 << (4 - n + 1)) - 1, || format!("{checked} memberships at n = {n}"))?;
        }
    }
    Ok(())
}

fn octaves(h: usize, parity: u32) -> PointPrefix {
    let f = WindowSet::from_predicate(h, |i| i > 0 && i.ilog2() % 2 == parity).unwrap();
    PointPrefix::indicator(&f, format!("octaves {parity}"))
}

fn desert() -> Outcome {
    let h = 1 << 16;
    let (f1, f2) = (octaves(h, 0), octaves(h, 1));
    let d = recurrence_desert(&f1, &f2, 6).map_err(|e| e.to_string())?;
    for c in &d.checks {
        ensure(c.holds, || format!("{} fails", c.name))?;
    }
    // Full enumeration, independent of the library's set algebra.
    let mut diffs = [Vec::new(), Vec::new()];
    for (i, f) in [&f1, &f2].into_iter().enumerate() {
        let g = d.gens[i].gens();
        ensure(g.len() == 6, || format!("F{} depth {}", i + 1, g.len()))?;
        let sums: Vec<usize> = (1u32..64)
            .map(|m| (0..6).filter(|j| m >> j & 1 == 1).map(|j| g[j] as usize).sum())
            .collect();
        ensure(sums.iter().all(|&s| s < h && f.at(s) == 1), || format!("FS{} escapes F{}", i + 1, i + 1))?;
        for &a in &sums {
            for &b in &sums {
                if b > a {
                    ensure(f.at(b - a) == 1, || format!("{} - {a} escapes F{}", b, i + 1))?;
                    diffs[i].push(b - a);
                }
            }
        }
    }
    let common = diffs[0].iter().filter(|d| diffs[1].contains(d)).count();
    ensure(common == 0 && d.joint.is_empty(), || format!("{common} common positive returns"))
}

fn random_set(rng: &mut ChaCha8Rng, h: usize) -> WindowSet {
    let mut member = vec![false; h];
    let mut i = 0;
    let mode = rng.gen_range(0..3);
    while i < h {
        // Alternating blocks of members and holes with varied lengths.
        let (on, off) = match mode {
            0 => (rng.gen_range(1..20), rng.gen_range(0..20)),
            1 => (rng.gen_range(1..400), rng.gen_range(0..6)),
            _ => (rng.gen_range(1..5), rng.gen_range(0..3000)),
        };
        for m in member.iter_mut().skip(i).take(on) {
            *m = true;
        }
        i += on + off;
    }
    WindowSet::from_predicate(h, |j| member[j]).unwrap()
}

fn duality() -> Outcome {
    let h = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut syndetic = 0;
    for n in 0..200 {
        let s = random_set(&mut rng, h);
        let comp_run = run_profile(&s.complement()).max_run;
        if let Some(g) = syndetic_gap(&s) {
            syndetic += 1;
            ensure(comp_run < g, || format!("set {n}: gap {g} but complement run {comp_run}"))?;
        }
        // Converse: a longest hole of length r forces a covering gap of r + 1.
        if !s.is_empty() {
            ensure(covering_gap(&s) == Some(comp_run + 1), || {
                format!("set {n}: covering gap {:?}, complement run {comp_run}", covering_gap(&s))
            })?;
        }
        let mut certs = vec![FamilyCertificate::Thick(run_profile(&s))];
        certs.extend(syndetic_certificate(&s).map(FamilyCertificate::Syndetic));
        for g in [2, 8, 32] {
            if let Some(c) = piecewise_syndetic_witness(&s, g).map_err(|e| e.to_string())? {
                certs.push(FamilyCertificate::PiecewiseSyndetic(c));
            }
        }
        if let Some(c) = thickly_syndetic_profile(&s, 4).map_err(|e| e.to_string())? {
            certs.push(FamilyCertificate::ThicklySyndetic(c));
        }
        certs.push(FamilyCertificate::Density(density_report(&s, 100).map_err(|e| e.to_string())?));
        for c in &certs {
            validate(&s, c).map_err(|e| format!("set {n}: {} rejected: {e}", c.kind()))?;
        }
    }
    ensure(syndetic > 20, || format!("only {syndetic} syndetic samples"))
}

fn independence() -> Outcome {
    let per = generators::periodic(&"01".parse().unwrap(), 1000).unwrap();
    let blocks: Vec<Word> = vec!["0".parse().unwrap(), "1".parse().unwrap()];
    let q = IndependenceQuery::new(per.clone(), blocks.clone(), vec![0, 1]).map_err(|e| e.to_string())?;
    match check_independence(&q, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
        Independence::Missing { pattern } => ensure(pattern == [0, 0], || format!("missing {pattern:?}"))?,
        other => return Err(format!("periodic prefix: {other:?}")),
    }
    let db = generators::de_bruijn_prefix(12, 1 << 13).unwrap();
    let mut count = 0;
    for mask in 1u32..1 << 11 {
        if mask.count_ones() > 4 {
            continue;
        }
        let j: Vec<usize> = (0..11).filter(|i| mask >> i & 1 == 1).collect();
        let q = IndependenceQuery::new(db.clone(), blocks.clone(), j.clone()).map_err(|e| e.to_string())?;
        let r = check_independence(&q, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(r.is_independent(), || format!("de Bruijn prefix fails J = {j:?}"))?;
        count += 1;
    }
    ensure(count == 561, || format!("{count} sets checked"))?;
    match syndetic_independence_probe(&per, &blocks, 2, 2, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
        Probe::Exhausted { checked: 4 } => Ok(()),
        other => Err(format!("probe: {other:?}")),
    }
}

fn recforge(dir: &Path, args: &[&str]) -> Result<(i32, String), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_recforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("RECFORGE_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    let text = format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
    Ok((o.status.code().unwrap_or(-1), text))
}

fn write_point(dir: &Path, name: &str, p: &PointPrefix) {
    fs::write(dir.join(name), format_set(&p.support())).unwrap();
}

fn demos(dir: &Path) -> Outcome {
    write_point(dir, "p2.ind", &generators::powers_of_two(1 << 16).unwrap());
    write_point(dir, "fact.ind", &generators::factorials(300_000).unwrap());
    for (kind, input, out) in [("fps", "p2.ind", "fps"), ("fs", "fact.ind", "fs")] {
        let (code, text) = recforge(dir, &["demo", kind, "--input", input, "--out", out, "--no-header"])?;
        ensure(code == 0, || format!("{kind} exit {code}: {text}"))?;
        let joint = parse_set(&fs::read_to_string(dir.join(out).join("joint.txt")).unwrap()).map_err(|e| e.to_string())?;
        if kind == "fps" {
            ensure(joint.elements() == [0], || format!("fps joint {:?}", joint.elements()))?;
        } else {
            ensure(joint.iter().all(|t| t == 0), || format!("fs joint {:?}", joint.elements()))?;
        }
        let (code, text) = recforge(dir, &["--verify", out])?;
        ensure(code == 0, || format!("{kind} verify exit {code}: {text}"))?;
    }
    Ok(())
}

/// Every command once, bundles written with `--no-header`.
fn battery(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let h = 1 << 16;
    write_point(dir, "c.ind", &four_power_runs(200_000));
    write_point(dir, "f.ind", &PointPrefix::indicator(&WindowSet::from_predicate(300_000, |i| i == 0 || i % 997 != 0).unwrap(), "f"));
    write_point(dir, "o0.ind", &octaves(h, 0));
    write_point(dir, "o1.ind", &octaves(h, 1));
    fs::write(dir.join("tm.txt"), format!("{}\n", generators::thue_morse(1 << 14).unwrap().word())).unwrap();
    fs::write(dir.join("db.txt"), format!("{}\n", generators::de_bruijn_prefix(10, 4096).unwrap().word())).unwrap();
    demos(dir)?;
    let runs: &[&[&str]] = &[
        &["families-check", "--input", "c.ind", "--out", "b-families"],
        &["subshift-analyze", "--word", "tm.txt", "--kmax", "12", "--out", "b-analyze"],
        &["construct", "md", "--input", "c.ind", "--out", "b-md"],
        &["construct", "sm", "--input", "f.ind", "--out", "b-sm"],
        &["construct", "rapid-ip", "--input", "o0.ind", "--depth", "6", "--out", "b-rapid"],
        &["construct", "ip-extract", "--input", "tm.txt", "--out", "b-ip"],
        &["demo", "desert", "--input", "o0.ind", "--input", "o1.ind", "--out", "b-desert"],
        &["independence", "check", "--word", "db.txt", "--set", "0,2,5,9", "--out", "b-check"],
        &["independence", "probe", "--word", "db.txt", "--gap", "3", "--size", "4", "--out", "b-probe"],
    ];
    for args in runs {
        let mut a = args.to_vec();
        a.push("--no-header");
        let (code, text) = recforge(dir, &a)?;
        ensure(code == 0, || format!("{args:?} exit {code}: {text}"))?;
        let (code, text) = recforge(dir, &["--verify", args[args.len() - 1]])?;
        ensure(code == 0, || format!("verify {args:?}: {text}"))?;
    }
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).map_err(|e| e.to_string())? {
            let p = e.map_err(|e| e.to_string())?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.insert(rel, fs::read(&p).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(files)
}

fn determinism(suite_start: Instant) -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fa = battery(a.path())?;
    let fb = battery(b.path())?;
    ensure(fa.len() > 40, || format!("only {} files", fa.len()))?;
    ensure(fa.keys().eq(fb.keys()), || "file lists differ".into())?;
    for (name, bytes) in &fa {
        ensure(fb[name] == *bytes, || format!("{name} differs"))?;
    }
    within(suite_start, 300.0, "whole suite")
}

fn main() {
    let suite = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("md construction soundness on 25 thick sets", Box::new(md_soundness)),
        ("sm construction soundness on 10 complements", Box::new(sm_soundness)),
        ("entropy bound and de Bruijn control", Box::new(entropy_bound)),
        ("IP extraction at depth 4", Box::new(ip_extraction)),
        ("rapid IP sets and recurrence desert", Box::new(desert)),
        ("family duality on 200 random sets", Box::new(duality)),
        ("independence sets and probe", Box::new(independence)),
        (
            "counterexample demos through the CLI",
            Box::new(|| {
                let d = tempfile::tempdir().map_err(|e| e.to_string())?;
                demos(d.path())
            }),
        ),
        ("bundle determinism and suite time", Box::new(move || determinism(suite))),
    ];
    let limits = [f64::INFINITY, f64::INFINITY, 60.0, 5.0, 5.0, 10.0, 30.0, 20.0, f64::INFINITY];
    let mut failed = 0;
    for (i, ((name, f), limit)) in criteria.iter().zip(limits).enumerate() {
        let t = Instant::now();
        let mut r = f();
        let secs = t.elapsed().as_secs_f64();
        if r.is_ok() && secs >= limit {
            r = Err(format!("took {secs:.2}s, limit {limit}s"));
        }
        match r {
            Ok(()) => println!("[PASS] criterion {}: {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2}s", criteria.len() - failed, criteria.len(), suite.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
