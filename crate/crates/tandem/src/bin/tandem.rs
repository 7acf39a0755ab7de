fn main() {
    // Die quietly on a closed pipe (`tandem ... | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(tandem::cli::run_cli(std::env::args_os()));
}
