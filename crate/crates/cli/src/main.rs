//! `qgen`: validate, repair, generate and report on accreditation-aligned
//! exam questions.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use chrono::Utc;
use clap::{Parser, Subcommand, ValueEnum};
use qgen_core::blueprint::{BackendFiller, BlueprintRequirement, Filler};
use qgen_core::config::Config;
use qgen_core::formats::{read_bank, read_course, serialize_report, ReportFile};
use qgen_core::generator::Backend;
use qgen_core::validator::{validate_bank_against, BankValidation};
use qgen_core::{
    assemble, validate_bank, CompletionClient, Error, GenerationRequest, ScriptedClient, SubpointId,
};
use qgen_server::{AppState, BankStore, CourseStore};

#[derive(Parser, Debug)]
#[command(name = "qgen", version, about = "Accreditation-aware exam question tooling")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClientKind {
    Offline,
    Http,
    /// Replays a `client-script.v1` file given with `--script`.
    Scripted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every bank question against its targets (or one subpoint).
    Validate {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        course: PathBuf,
        #[arg(long)]
        subpoint: Option<String>,
    },
    /// List the approved verbs for a subpoint.
    Suggest {
        #[arg(long)]
        subpoint: String,
    },
    /// Generate questions for one subpoint of a course.
    Generate {
        #[arg(long)]
        course: PathBuf,
        #[arg(long)]
        subpoint: String,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "offline")]
        client: ClientKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the course's first topic.
        #[arg(long)]
        topic: Option<String>,
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long)]
        max_retries: Option<u32>,
    },
    /// Assemble an exam with N questions per course subpoint.
    Blueprint {
        #[arg(long)]
        course: PathBuf,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        per_subpoint: usize,
        #[arg(long, value_enum)]
        fill: Option<ClientKind>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Write a report.v1 document (and optionally the coverage CSV).
    Report {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        course: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the HTTP JSON API.
    Serve {
        #[arg(long)]
        port: u16,
        /// Directory holding `banks/*.jsonl` and `courses/*.json`.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "offline")]
        client: ClientKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        script: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("qgen: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let config = Config::from_env()?;
    let taxonomy = config.taxonomy()?;
    let json = cli.json;

    match cli.command {
        Command::Validate { bank, course, subpoint } => {
            read_course(&course)?;
            let bank = read_bank(&bank)?;
            let result = match subpoint {
                Some(id) => validate_bank_against(&bank, SubpointId::parse(&id)?, &taxonomy),
                None => validate_bank(&bank, &taxonomy),
            };
            if json {
                print_json(&result);
            } else {
                print_validation(&result);
            }
            Ok(if result.all_compliant() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::Suggest { subpoint } => {
            let verbs = taxonomy.verbs_for_subpoint(&subpoint)?;
            if json {
                print_json(&verbs);
            } else {
                for verb in verbs {
                    println!("{verb}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Generate { course, subpoint, count, client, seed, topic, script, max_retries } => {
            let course = read_course(&course)?;
            let subpoint = SubpointId::parse(&subpoint)?;
            let topic = topic.unwrap_or_else(|| course.default_topic().to_string());
            let mut req = GenerationRequest::new(&course.code, topic, subpoint, count);
            req.client_params = config.client.params.clone();
            if let Some(n) = max_retries {
                req.client_params.max_retries = n;
            }
            let backend = backend(client, seed, script.as_deref(), &config)?;
            let result = backend.generate(&req, &taxonomy)?;
            if json {
                print_json(&result);
            } else {
                for q in &result.questions {
                    println!("{}\t{}", q.id, q.text);
                }
                for note in &result.diagnostics {
                    eprintln!("note: {note}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Blueprint { course, bank, per_subpoint, fill, seed, script } => {
            let course = read_course(&course)?;
            let bank = read_bank(&bank)?;
            let requirement = BlueprintRequirement::uniform(&course, per_subpoint)?;
            let backend = fill.map(|kind| backend(kind, seed, script.as_deref(), &config)).transpose()?;
            let filler = backend.as_ref().map(|backend| BackendFiller { taxonomy: &taxonomy, course: &course, backend });
            let exam = assemble(&course, &requirement, &bank, filler.as_ref().map(|f| f as &dyn Filler), &taxonomy);
            if json {
                print_json(&exam);
            } else {
                for slot in &exam.slots {
                    println!("{}\t{}\t{}", slot.subpoint, slot.question.id, slot.question.text);
                }
                for (id, missing) in &exam.deficits {
                    eprintln!("deficit: {id} needs {missing} more");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Report { bank, course, out, csv } => {
            let course = read_course(&course)?;
            let bank = read_bank(&bank)?;
            let reports = validate_bank(&bank, &taxonomy).reports;
            let report = ReportFile::new(course, reports, Utc::now());
            std::fs::write(&out, serialize_report(&report))?;
            if let Some(csv) = csv {
                std::fs::write(csv, report.matrix.to_csv()?)?;
            }
            if json {
                print_json(&report.matrix);
            } else {
                println!(
                    "{} compliant pairs, uncovered: {}",
                    report.matrix.total,
                    join(report.matrix.uncovered.iter().map(ToString::to_string))
                );
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Serve { port, data_dir, client, seed, script } => {
            let backend = backend(client, seed, script.as_deref(), &config)?;
            let mut state = AppState::new(taxonomy, backend);
            if let Some(dir) = data_dir {
                state.banks = BankStore::open(&dir)?;
                state.courses = CourseStore::open(&dir)?;
            }
            let runtime = tokio::runtime::Runtime::new()?;
            eprintln!("qgen: listening on port {port}");
            runtime.block_on(qgen_server::serve(port, Arc::new(state)))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn backend(kind: ClientKind, seed: u64, script: Option<&Path>, config: &Config) -> Result<Backend, Error> {
    let client: Arc<dyn CompletionClient> = match kind {
        ClientKind::Offline => return Ok(Backend::Offline { seed }),
        ClientKind::Http => Arc::new(config.http_client()?),
        ClientKind::Scripted => {
            let path = script.ok_or_else(|| Error::InvalidRequest("--client scripted needs --script".into()))?;
            Arc::new(ScriptedClient::from_file(path)?)
        }
    };
    Ok(Backend::Client(client))
}

fn print_json<T: serde::Serialize + ?Sized>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn join(items: impl Iterator<Item = String>) -> String {
    let joined = items.collect::<Vec<_>>().join(", ");
    if joined.is_empty() {
        "none".to_string()
    } else {
        joined
    }
}

fn print_validation(result: &BankValidation) {
    for r in &result.reports {
        let verb = r.primary_verb.as_ref().map_or("-", |h| h.span.lemma.as_str());
        let levels = join(r.matched_levels.iter().map(ToString::to_string));
        let level_domain = r.level_domain.map_or("-".to_string(), |d| d.to_string());
        let verdict = if r.compliant { "ok  " } else { "FAIL" };
        println!(
            "{verdict} {} [{}] verb={verb} levels={levels} domains={}/{level_domain}",
            r.question_id, r.target_subpoint, r.table_domain
        );
        if !r.compliant {
            println!("     try: {}", r.suggestions.join(", "));
            for note in &r.diagnostics {
                println!("     {note}");
            }
        }
    }
    for (id, count) in &result.summary {
        println!("{id}: {} compliant, {} non-compliant", count.compliant, count.non_compliant);
    }
}
