use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = pseudosum_cli::run(std::env::args_os());
    if out.code == 0 {
        print!("{}", out.text);
        std::io::stdout().flush().ok();
    } else {
        eprint!("{}", out.text);
    }
    ExitCode::from(out.code as u8)
}
