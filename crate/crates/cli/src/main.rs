use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = compat_cli::run(std::env::args_os().skip(1));
    let _ = std::io::stdout().write_all(&out.stdout);
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
