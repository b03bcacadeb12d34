use std::process::ExitCode;

fn main() -> ExitCode {
    let result = vacuumlab_cli::resolve(std::env::args_os()).and_then(|cfg| {
        let out = std::io::stdout().lock();
        vacuumlab_cli::execute(&cfg, out)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        // prints help, version or the usage error and picks the exit code
        Err(vacuumlab_cli::CliError::Usage(e)) => e.exit(),
        // reader went away, as with `| head`
        Err(vacuumlab_cli::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vacuumlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
