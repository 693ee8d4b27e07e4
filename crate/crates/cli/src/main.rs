use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = gravidec_cli::Cli::parse();
    let result = gravidec_cli::init_threads().and_then(|_| gravidec_cli::run(cli));
    if let Err(e) = result {
        if e != gravidec_cli::Failure::Verification {
            eprintln!("gravidec: {e}");
        } else {
            eprintln!("gravidec: one or more checks failed; see the report");
        }
        std::process::exit(e.exit_code());
    }
}
