use clap::Parser;

use toroid_vdw_cli::config::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = toroid_vdw_cli::run(cli) {
        eprintln!("toroid-vdw: {e}");
        std::process::exit(e.exit_code());
    }
}
