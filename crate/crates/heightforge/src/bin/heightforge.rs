use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = heightforge::cli::run(&args);
    print!("{}", result.text());
    ExitCode::from(result.exit_code as u8)
}
