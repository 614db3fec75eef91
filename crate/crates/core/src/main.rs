fn main() {
    let (code, report) = clonebench::cli::run(std::env::args_os());
    if code >= 2 {
        eprint!("{report}");
    } else {
        print!("{report}");
    }
    std::process::exit(code);
}
