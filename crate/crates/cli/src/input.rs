use std::fs;
use std::path::Path;

use recforge::text::{parse_set, parse_word};
use recforge::{PointPrefix, WindowSet, Word};

use crate::error::{code, CliError, CliResult};

/// Smallest horizon the commands accept.
pub const MIN_HORIZON: usize = 16;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::new(code::NO_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn is_set_file(text: &str) -> bool {
    text.trim_start().starts_with("#horizon")
}

/// A set file or a 0/1 indicator file, as a point.
pub fn load_point(path: &Path) -> CliResult<PointPrefix> {
    let text = read(path)?;
    let p = if is_set_file(&text) {
        PointPrefix::indicator(&parse_set(&text)?, label(path))
    } else {
        PointPrefix::new(parse_word(&text)?, label(path))?
    };
    if p.horizon() < MIN_HORIZON {
        return Err(CliError::range(format!(
            "{}: horizon {} is below the minimum {MIN_HORIZON}",
            path.display(),
            p.horizon()
        )));
    }
    Ok(p)
}

pub fn load_set(path: &Path) -> CliResult<WindowSet> {
    Ok(load_point(path)?.support())
}

/// Comma- or whitespace-separated items.
pub fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

pub fn parse_blocks(s: &str) -> CliResult<Vec<Word>> {
    split_list(s)
        .map(|t| t.parse::<Word>().map_err(|e| CliError::range(format!("block {t:?}: {e}"))))
        .collect()
}

pub fn parse_positions(s: &str) -> CliResult<Vec<usize>> {
    split_list(s)
        .map(|t| t.parse::<usize>().map_err(|e| CliError::range(format!("position {t:?}: {e}"))))
        .collect()
}
