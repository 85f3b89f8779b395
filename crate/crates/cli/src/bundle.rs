//! Bundle layout: `report.txt`, the command's files, copies of the inputs
//! under `inputs/<i>/` and `manifest.txt`, which records enough to rerun
//! the command from inside the bundle.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use recforge::text::{format_records, parse_records, Record};

use crate::args::{Command, Construct, Demo, Independence};
use crate::commands::{Outcome, Settings};
use crate::error::{code, CliError, CliResult};
use crate::input::read;

pub const MANIFEST: &str = "manifest.txt";
pub const REPORT: &str = "report.txt";

/// Flags whose value is an input file.
const PATH_FLAGS: [&str; 2] = ["--input", "--word"];
/// Flags that do not affect the result.
const DROP_WITH_VALUE: [&str; 3] = ["--out", "--threads", "--budget"];
const DROP_BARE: [&str; 1] = ["--no-header"];

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(code::IO, format!("{}: {e}", path.display()))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

pub fn out_dir(cmd: &Command) -> Option<&Path> {
    let o = match cmd {
        Command::FamiliesCheck(a) => &a.output,
        Command::SubshiftAnalyze(a) => &a.output,
        Command::Construct { kind } => match kind {
            Construct::Md(a) | Construct::Sm(a) => &a.output,
            Construct::RapidIp(a) | Construct::IpExtract(a) => &a.output,
        },
        Command::Demo { kind } => match kind {
            Demo::Fps(a) | Demo::Fs(a) => &a.output,
            Demo::Desert(a) => &a.output,
        },
        Command::Independence { kind } => match kind {
            Independence::Check(a) => &a.output,
            Independence::Probe(a) => &a.output,
        },
        Command::Generate(_) => return None,
    };
    o.out.as_deref()
}

/// The argument list with result-neutral flags removed and input paths
/// replaced by their bundle copies. Returns the rewritten list and the
/// `(source, bundle-relative)` copies to make.
fn rewrite(args: &[String]) -> (Vec<String>, Vec<(PathBuf, String)>) {
    let mut out = Vec::new();
    let mut copies = Vec::new();
    let mut it = args.iter();
    let copy = |src: &str, copies: &mut Vec<(PathBuf, String)>| {
        let src = PathBuf::from(src);
        let name = src
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        let rel = format!("inputs/{}/{name}", copies.len());
        copies.push((src, rel.clone()));
        rel
    };
    while let Some(a) = it.next() {
        let (flag, inline) = match a.split_once('=') {
            Some((f, v)) if f.starts_with("--") => (f, Some(v.to_string())),
            _ => (a.as_str(), None),
        };
        if DROP_BARE.contains(&flag) {
            continue;
        }
        if DROP_WITH_VALUE.contains(&flag) {
            if inline.is_none() {
                it.next();
            }
            continue;
        }
        if PATH_FLAGS.contains(&flag) {
            let value = inline.or_else(|| it.next().cloned()).unwrap_or_default();
            out.push(flag.to_string());
            out.push(copy(&value, &mut copies));
            continue;
        }
        out.push(a.clone());
    }
    (out, copies)
}

pub fn write(dir: &Path, args: &[String], settings: &Settings, outcome: &Outcome) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let (args, copies) = rewrite(args);
    for (src, rel) in &copies {
        let text = read(src)?;
        write_file(&dir.join(rel), &text)?;
    }
    let mut report = String::new();
    if !settings.no_header {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.push_str(&format!("# recforge {} report\n# unix time {secs}\n", env!("CARGO_PKG_VERSION")));
    }
    report.push_str(&outcome.report);
    write_file(&dir.join(REPORT), &report)?;
    for (name, contents) in &outcome.files {
        write_file(&dir.join(name), contents)?;
    }
    let mut m = Record::new()
        .with("tool", format!("recforge {}", env!("CARGO_PKG_VERSION")))
        .with("budget", settings.budget);
    for a in &args {
        m.push("arg", a);
    }
    for name in outcome.files.keys() {
        m.push("file", name);
    }
    write_file(&dir.join(MANIFEST), &format_records([&m]))
}

pub struct Manifest {
    pub budget: u64,
    pub args: Vec<String>,
    pub files: Vec<String>,
}

pub fn read_manifest(dir: &Path) -> CliResult<Manifest> {
    let path = dir.join(MANIFEST);
    let text = read(&path)?;
    let recs = parse_records(&text)?;
    let [rec] = recs.as_slice() else {
        return Err(CliError::range(format!("{}: expected one record", path.display())));
    };
    let values = |key: &str| -> Vec<String> {
        rec.entries()
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .collect()
    };
    Ok(Manifest {
        budget: rec.parse("budget")?,
        args: values("arg"),
        files: values("file"),
    })
}

/// Manifest arguments with the bundle copies resolved against `dir`.
pub fn resolve(dir: &Path, args: &[String]) -> Vec<String> {
    let mut out = vec!["recforge".to_string()];
    let mut prev_is_path = false;
    for a in args {
        if prev_is_path {
            out.push(dir.join(a).to_string_lossy().into_owned());
        } else {
            out.push(a.clone());
        }
        prev_is_path = PATH_FLAGS.contains(&a.as_str());
    }
    out
}
