use std::io;

fn main() {
    let code = curie_weiss::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
