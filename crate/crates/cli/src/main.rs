use std::io::Write;

use clap::Parser;
use unchained_cli::{io, run, Failure, RunConfig, CAP_ENV};

fn main() {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return;
        }
        Err(e) => {
            let f = Failure::Parse(e.to_string().trim_end().to_string());
            eprint!("{}", io::to_pretty(&f.to_json()));
            std::process::exit(f.exit_code());
        }
    };
    let env = std::env::var(CAP_ENV).ok();
    let out = run(&cfg, env.as_deref());
    std::io::stdout().write_all(out.stdout.as_bytes()).expect("stdout is writable");
    std::io::stderr().write_all(out.stderr.as_bytes()).expect("stderr is writable");
    std::process::exit(out.exit);
}
