fn main() -> std::process::ExitCode {
    varexp::cli::main()
}
