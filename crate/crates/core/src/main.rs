fn main() {
    std::process::exit(sympflow::cli::dispatch(std::env::args_os()));
}
