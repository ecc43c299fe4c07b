fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = nls_waveguide::cli::run(std::env::args_os().collect(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
