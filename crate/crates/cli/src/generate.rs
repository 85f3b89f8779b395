use recforge::subshift::generators;
use recforge::{PointPrefix, Word, WindowSet};

use crate::args::{GenerateArgs, Kind};
use crate::error::{CliError, CliResult};
use crate::input::MIN_HORIZON;

fn indicator(h: usize, label: &str, member: impl FnMut(usize) -> bool) -> CliResult<PointPrefix> {
    Ok(PointPrefix::indicator(&WindowSet::from_predicate(h, member)?, label))
}

/// `{0}` and runs `[4^j, 4^j + 4^(j-1))` for `j >= 1`.
pub fn four_power_runs(h: usize) -> CliResult<PointPrefix> {
    let mut runs = Vec::new();
    let mut p = 4usize;
    while p < h {
        runs.push((p, p + p / 4));
        p = match p.checked_mul(4) {
            Some(q) => q,
            None => break,
        };
    }
    indicator(h, "four-power-runs", |i| i == 0 || runs.iter().any(|&(a, b)| (a..b).contains(&i)))
}

pub fn point(a: &GenerateArgs) -> CliResult<PointPrefix> {
    let h = a.size;
    if h < MIN_HORIZON {
        return Err(CliError::range(format!("--size {h} is below the minimum {MIN_HORIZON}")));
    }
    Ok(match a.kind {
        Kind::ThueMorse => generators::thue_morse(h)?,
        Kind::DeBruijn => {
            if a.order == 0 || a.order > 24 {
                return Err(CliError::range("--order must be in 1..=24"));
            }
            generators::de_bruijn_prefix(a.order, h)?
        }
        Kind::Periodic => {
            let w: Word = a.pattern.parse().map_err(|e| CliError::range(format!("--pattern: {e}")))?;
            generators::periodic(&w, h)?
        }
        Kind::PowersOfTwo => generators::powers_of_two(h)?,
        Kind::Factorials => generators::factorials(h)?,
        Kind::Zeros => generators::zeros(h)?,
        Kind::Ones => generators::ones(h)?,
        Kind::SingleOne => generators::single_one(h)?,
        Kind::FourPowerRuns => four_power_runs(h)?,
        Kind::ArithmeticComplement => {
            let q = a.modulus;
            if q < 2 || a.residue >= q {
                return Err(CliError::range("need --modulus >= 2 and --residue < --modulus"));
            }
            indicator(h, "arithmetic-complement", |i| i == 0 || i % q != a.residue)?
        }
        Kind::Octaves => {
            if a.residue > 1 {
                return Err(CliError::range("octave parity must be 0 or 1"));
            }
            indicator(h, "octaves", |i| i > 0 && (i.ilog2() as usize) % 2 == a.residue)?
        }
    })
}
