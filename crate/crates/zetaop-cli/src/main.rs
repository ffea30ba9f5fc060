fn main() {
    let report = zetaop_cli::run(std::env::args().skip(1));
    std::process::exit(report.exit_code);
}
