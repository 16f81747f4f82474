use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = cyclequiv::cli::run(std::env::args_os());
    // clap's own messages are plain text; reports are JSON on stdout
    let _ = if code == cyclequiv::cli::EXIT_USAGE && !out.starts_with('{') {
        writeln!(std::io::stderr(), "{out}")
    } else {
        writeln!(std::io::stdout(), "{out}")
    };
    ExitCode::from(code as u8)
}
