use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = backflow::cli::run(&args);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = lock.write_all(out.stdout.as_bytes());
    let _ = lock.flush();
    if out.code != 0 {
        eprintln!("backflow: exited with code {}", out.code);
    }
    std::process::exit(out.code);
}
