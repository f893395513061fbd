use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(cabledeg::cli::LOG_ENV, "warn")).init();
    cabledeg::cli::main(std::env::args_os())
}
