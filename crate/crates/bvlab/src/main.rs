use std::io::Write;
use std::process::ExitCode;

use bvlab::cli::run;

fn main() -> ExitCode {
    let code = match run(std::env::args_os()) {
        Ok(report) => match report.to_json() {
            Ok(json) => {
                let mut out = std::io::stdout().lock();
                match out.write_all(json.as_bytes()).and_then(|_| out.flush()) {
                    Ok(()) => report.exit_code(),
                    Err(e) => {
                        eprintln!("bvlab: {e}");
                        1
                    }
                }
            }
            Err(e) => {
                eprintln!("bvlab: {e}");
                e.exit_code()
            }
        },
        Err(bvlab::CliError::Clap(e)) => {
            let _ = e.print();
            bvlab::CliError::Clap(e).exit_code()
        }
        Err(e) => {
            eprintln!("bvlab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
