use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, stdout, stderr) = heatzeta::run_args(std::env::args_os());
    if !stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        if out
            .write_all(stdout.as_bytes())
            .and_then(|_| out.flush())
            .is_err()
        {
            return ExitCode::from(2);
        }
    }
    if !stderr.is_empty() {
        eprint!("{stderr}");
    }
    ExitCode::from(code)
}
