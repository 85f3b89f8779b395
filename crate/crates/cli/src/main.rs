mod args;
mod bundle;
mod commands;
mod error;
mod generate;
mod input;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Settings;
use error::{code, CliError, CliResult};

fn budget(cli: &Cli) -> CliResult<u64> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var("RECFORGE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::range(format!("RECFORGE_BUDGET={v:?} is not a non-negative integer"))),
        Err(_) => Ok(recforge::DEFAULT_BUDGET),
    }
}

fn threads(n: Option<usize>) -> CliResult<()> {
    let Some(n) = n else { return Ok(()) };
    if n == 0 {
        return Err(CliError::range("--threads must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new(code::IO, format!("thread pool: {e}")))?;
    Ok(())
}

fn real_main(argv: Vec<String>) -> CliResult<i32> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return Ok(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => code::OK,
                _ => code::USAGE,
            });
        }
    };
    threads(cli.threads)?;
    let budget = budget(&cli)?;
    if let Some(dir) = &cli.verify {
        return verify::run(dir);
    }
    let Some(cmd) = &cli.command else {
        return Err(CliError::usage("no command given; see --help"));
    };
    if let Command::Generate(g) = cmd {
        let p = generate::point(g)?;
        bundle::write_file(&g.out, &recforge::text::format_word(p.word()))?;
        println!("wrote {} (H = {})", g.out.display(), p.horizon());
        return Ok(code::OK);
    }
    let settings = Settings {
        budget,
        no_header: cli.no_header,
    };
    let outcome = commands::run(cmd, &settings)?;
    print!("{}", outcome.report);
    if let Some(out) = bundle::out_dir(cmd) {
        bundle::write(out, &argv[1..], &settings, &outcome)?;
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let code = match real_main(std::env::args().collect()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("recforge: {e}");
            e.code
        }
    };
    ExitCode::from(code as u8)
}
