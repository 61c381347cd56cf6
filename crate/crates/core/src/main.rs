use std::path::PathBuf;
use std::process::ExitCode;

use linekit::cli;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [path] = args.as_slice() else {
        eprintln!("usage: linekit <config-path>");
        return ExitCode::from(1);
    };
    let result = cli::configure_threads().and_then(|()| cli::run_file(&PathBuf::from(path)));
    match result {
        Ok(report) => {
            print!("{}", report.stdout);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("linekit: verification failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("linekit: {}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
