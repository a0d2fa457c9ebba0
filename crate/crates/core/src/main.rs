fn main() {
    std::process::exit(paxos_hist::cli::run_from(std::env::args_os()));
}
