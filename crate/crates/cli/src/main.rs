mod cli;
mod commands;
mod manifest;
mod settings;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use cli::{Cli, Command};
use settings::{FileConfig, Settings};

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!(
        "{}",
        json!({ "error": { "kind": kind, "message": message } })
    );
    ExitCode::from(code)
}

fn run(cli: &Cli) -> topicclass::Result<()> {
    let settings = Settings {
        file: FileConfig::load(cli.config.as_deref())?,
        seed_flag: cli.seed,
    };
    match &cli.command {
        Command::Ingest(a) => commands::ingest(&settings, a),
        Command::Vocab(a) => commands::vocab(&settings, a),
        Command::Vectorize(a) => commands::vectorize_cmd(&settings, a),
        Command::TrainLda(a) => commands::train_lda_cmd(&settings, a),
        Command::Infer(a) => commands::infer(&settings, a),
        Command::TrainClf(a) => commands::train_clf(&settings, a),
        Command::Predict(a) => commands::predict(&settings, a),
        Command::Evaluate(a) => commands::evaluate(&settings, a),
        Command::Sweep(a) => commands::sweep(&settings, a),
        Command::Synth(a) => commands::synth(&settings, a),
        Command::TopWords(a) => commands::top_words_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end(), 2),
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string(), 1),
    }
}
