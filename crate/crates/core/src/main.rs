use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dsusy::config::{ConfigError, OutputFormat, ScenarioConfig};
use dsusy::emit::{a_table, a_table_latex, derivation_latex, derivation_rows};
use dsusy::report::Report;
use dsusy::scenarios::{Scenario, BUILTIN_SCENARIOS};
use dsusy::suites::{run_suites, SuiteId};
use dsusy::superfields::{Derivation, Engine};
use dsusy::susy::tagged::{closed_form, evaluate_closed_form, CLOSED_FORM_NAMES, CORRECTED_FORMS};
use dsusy::susy::words::{expand_correction, CorrectionWord, Leaf};

#[derive(Parser)]
#[command(
    name = "dsusy",
    version,
    about = "Run exact verification suites on supersymmetric backgrounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites on a config file or a built-in scenario.
    Run {
        /// Path to a JSON config, or a built-in scenario name.
        config: String,
        #[arg(long = "suite")]
        suites: Vec<SuiteId>,
        #[arg(long)]
        q_max: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// List built-in scenarios and the configs in a directory.
    List {
        #[arg(long, default_value = "scenarios")]
        dir: PathBuf,
    },
    /// Print a computed object: `a_table`, a closed form such as `X3_1`,
    /// or a nested word such as `word:iDD` evaluated on parallel spinors.
    Export {
        id: String,
        #[arg(long)]
        scenario: String,
        #[arg(long, value_enum, default_value = "latex")]
        format: OutputFormat,
        #[arg(long)]
        seed: Option<u64>,
        /// Indices into the parallel spinor basis, one per argument.
        #[arg(long, value_delimiter = ',')]
        args: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

fn resolve(spec: &str) -> Result<ScenarioConfig, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        Ok(ScenarioConfig::load(path)?)
    } else if BUILTIN_SCENARIOS.contains(&spec) {
        Ok(ScenarioConfig::for_builtin(spec))
    } else {
        Err(CliError::Usage(format!(
            "{spec} is neither a config file nor a built-in scenario ({})",
            BUILTIN_SCENARIOS.join(", ")
        )))
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            // a closed pipe (`| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Write {
                path: "stdout".into(),
                source: e,
            }),
            _ => Ok(()),
        },
    }
}

fn run(
    config: &str,
    suites: Vec<SuiteId>,
    q_max: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
) -> Result<bool, CliError> {
    let cfg = resolve(config)?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let scenario = cfg.build(seed)?;
    let mut opts = cfg.options(seed);
    if let Some(q) = q_max {
        opts.q_max = q;
    }
    let ids = if !suites.is_empty() {
        suites
    } else if !cfg.suites.is_empty() {
        cfg.suites.clone()
    } else {
        SuiteId::ALL.to_vec()
    };
    let report = Report::new(
        &scenario.name,
        seed,
        opts.q_max,
        run_suites(&ids, &scenario, &opts),
    );
    let format = format.or(cfg.output.format).unwrap_or_default();
    let out = out.or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    emit(&report.render(format), out.as_deref())?;
    Ok(report.passed)
}

fn list(dir: &Path) -> Result<(), CliError> {
    let mut out = String::new();
    for name in BUILTIN_SCENARIOS {
        out.push_str(&format!("builtin  {name}\n"));
    }
    if let Ok(entries) = std::fs::read_dir(dir) {
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            match ScenarioConfig::load(&p) {
                Ok(cfg) => out.push_str(&format!("config   {}  {}\n", cfg.name, p.display())),
                Err(e) => eprintln!("skipping {e}"),
            }
        }
    }
    emit(&out, None)
}

fn parse_word(letters: &str) -> Result<CorrectionWord, CliError> {
    let leaves = letters
        .chars()
        .map(|c| match c {
            'D' => Ok(Leaf::DPair),
            'i' | 'ι' => Ok(Leaf::Iota),
            other => Err(CliError::Usage(format!(
                "word letters are D and i, found {other}"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if leaves.len() < 2 {
        return Err(CliError::Usage("a word needs at least two leaves".into()));
    }
    Ok(CorrectionWord::new(leaves))
}

fn arguments(
    scenario: &Scenario,
    arity: usize,
    picks: Option<Vec<usize>>,
) -> Result<(Vec<usize>, Vec<Vec<dsusy::exactla::Scalar>>), CliError> {
    let k1 = &scenario.k1;
    if k1.is_empty() {
        return Err(CliError::Usage(format!(
            "{} has no parallel spinors",
            scenario.name
        )));
    }
    let picks = picks.unwrap_or_else(|| (0..arity).map(|i| i % k1.len()).collect());
    if picks.len() != arity {
        return Err(CliError::Usage(format!(
            "expected {arity} argument indices, got {}",
            picks.len()
        )));
    }
    if let Some(bad) = picks.iter().find(|&&i| i >= k1.len()) {
        return Err(CliError::Usage(format!(
            "argument index {bad} out of range for {} parallel spinors",
            k1.len()
        )));
    }
    let args = picks.iter().map(|&i| k1[i].clone()).collect();
    Ok((picks, args))
}

fn render_derivation(
    id: &str,
    scenario: &Scenario,
    picks: &[usize],
    symbolic: Option<String>,
    d: &Derivation,
    format: OutputFormat,
) -> String {
    let dim = scenario.background.dim();
    match format {
        OutputFormat::Json => {
            let value = serde_json::json!({
                "id": id,
                "scenario": scenario.name,
                "arguments": picks,
                "closed_form": symbolic,
                "terms": derivation_rows(d, dim),
            });
            serde_json::to_string_pretty(&value).expect("rows serialize") + "\n"
        }
        OutputFormat::Latex | OutputFormat::Text => derivation_latex(d, dim) + "\n",
    }
}

fn export(
    id: &str,
    scenario_spec: &str,
    format: OutputFormat,
    seed: Option<u64>,
    picks: Option<Vec<usize>>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if id == "a_table" {
        let text = match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(&a_table()).expect("rows serialize") + "\n"
            }
            OutputFormat::Latex => a_table_latex() + "\n",
            OutputFormat::Text => a_table()
                .iter()
                .map(|r| format!("k={} {:?} total {}\n", r.k, r.counts, r.total))
                .collect(),
        };
        return emit(&text, out.as_deref());
    }
    let cfg = resolve(scenario_spec)?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let scenario = cfg.build(seed)?;
    let known = CLOSED_FORM_NAMES.contains(&id) || CORRECTED_FORMS.iter().any(|(_, c)| *c == id);
    let text = if known {
        let form = closed_form(id).map_err(|e| CliError::Usage(e.to_string()))?;
        let (picks, args) = arguments(&scenario, form.arity, picks)?;
        let d = evaluate_closed_form(&scenario.background, &form, &args)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        render_derivation(id, &scenario, &picks, Some(form.to_latex()), &d, format)
    } else if let Some(letters) = id.strip_prefix("word:") {
        let word = parse_word(letters)?;
        let (picks, args) = arguments(&scenario, word.arity(), picks)?;
        let engine = Engine::new(&scenario.background);
        let d =
            expand_correction(&engine, &word, &args).map_err(|e| CliError::Usage(e.to_string()))?;
        render_derivation(id, &scenario, &picks, Some(word.to_string()), &d, format)
    } else {
        return Err(CliError::Usage(format!("unknown export id {id}")));
    };
    emit(&text, out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            suites,
            q_max,
            seed,
            out,
            format,
        } => run(&config, suites, q_max, seed, out, format),
        Command::List { dir } => list(&dir).map(|_| true),
        Command::Export {
            id,
            scenario,
            format,
            seed,
            args,
            out,
        } => export(&id, &scenario, format, seed, args, out).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
