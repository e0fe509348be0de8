fn main() -> std::process::ExitCode {
    let code = monosense::cli::run(std::env::args_os());
    std::process::ExitCode::from(code as u8)
}
