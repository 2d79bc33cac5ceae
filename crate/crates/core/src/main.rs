use std::io::Write;

fn main() {
    // unlocked handles: worker threads report progress on stderr
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = pentaq::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
