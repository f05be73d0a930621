fn main() -> std::process::ExitCode {
    vlasov_bridge::cli::main()
}
