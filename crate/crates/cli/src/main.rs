use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sisa_core::classifier::{Aggregation, Classifier, ClassifierOptions, Polarity};
use sisa_core::conllu::{parse_document, Document};
use sisa_core::eval::{compare_configs, evaluate, ConfigId, CorpusManifest, EvaluationSummary, RunConfig};
use sisa_core::format::format_so;
use sisa_core::lexicon::{declared_scale, merge_lexica, scale_senticon, Scale, SentimentLexicon, WordLists};
use sisa_core::ops::{load_rules, OperationDefinition};
use sisa_core::Error;

/// Syntax-aware polarity classification over CoNLL-U dependency trees.
#[derive(Parser)]
#[command(name = "sisa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label documents or sentences as positive or negative.
    Classify(ClassifyArgs),
    /// Print the step-by-step SO computation for one document.
    Trace(EngineArgs),
    /// Average several lexica into one.
    MergeLexicon(MergeArgs),
    /// Rescale raw ML-Senticon values to the SFU scale.
    ScaleSenticon(ScaleArgs),
    /// Score SL/ML -O/+O configurations against a labeled corpus.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct EngineArgs {
    /// Sentiment lexicon (tab-separated entry, pos, so).
    #[arg(long)]
    lexicon: PathBuf,
    /// Rule file; without it no operations are applied.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Directory of word lists referenced by the rules.
    #[arg(long)]
    lists: Option<PathBuf>,
    /// CoNLL-U input, `-` for stdin.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    lists: Option<PathBuf>,
    /// CoNLL-U inputs, `-` for stdin. Each file is one document.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = GranularityArg::Doc)]
    granularity: GranularityArg,
    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Args)]
struct ScoringArgs {
    /// How sentence SOs combine into a document SO.
    #[arg(long, value_enum, default_value_t = AggArg::Sum)]
    agg: AggArg,
    /// Label for an SO of exactly zero.
    #[arg(long, value_enum, default_value_t = TieArg::Pos)]
    tie: TieArg,
}

#[derive(Args)]
struct MergeArgs {
    /// Input lexica, at least one.
    #[arg(long, required = true)]
    lexicon: Vec<PathBuf>,
    /// Rescale inputs declared as `# scale: senticon_raw` before merging.
    #[arg(long)]
    scale: bool,
    #[arg(long, default_value = "merged")]
    name: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    /// Raw ML-Senticon lexicon.
    #[arg(long, conflicts_with = "value", required_unless_present = "value")]
    lexicon: Option<PathBuf>,
    /// A single raw value.
    #[arg(long, allow_negative_numbers = true)]
    value: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Manifest of `path<TAB>positive|negative` lines.
    #[arg(long)]
    corpus: PathBuf,
    /// Single-language lexicon, optionally followed by the merged one.
    #[arg(long, required = true, num_args = 1)]
    lexicon: Vec<PathBuf>,
    /// Rules for the +O configurations.
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Write a JSON summary here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print one line per item.
    #[arg(long)]
    verbose: bool,
    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum GranularityArg {
    Doc,
    Sentence,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggArg {
    Sum,
    Mean,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Pos,
    Neg,
}

impl ScoringArgs {
    fn options(&self) -> ClassifierOptions {
        ClassifierOptions {
            aggregation: match self.agg {
                AggArg::Sum => Aggregation::Sum,
                AggArg::Mean => Aggregation::Mean,
            },
            tie: match self.tie {
                TieArg::Pos => Polarity::Positive,
                TieArg::Neg => Polarity::Negative,
            },
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Io { .. } => 2,
        Error::Parse { .. }
        | Error::Structure { .. }
        | Error::Range { .. }
        | Error::InvalidValue { .. }
        | Error::Config { .. } => 3,
        Error::Usage(_) | Error::ScaleMismatch(_) | Error::InFile { .. } => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .format_target(false)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Classify(args) => classify(&args, &mut out),
        Command::Trace(args) => trace(&args, &mut out),
        Command::MergeLexicon(args) => merge(&args, &mut out),
        Command::ScaleSenticon(args) => rescale(&args, &mut out),
        Command::Evaluate(args) => run_evaluation(&args, &mut out),
    };
    let flushed = out.flush();

    match result {
        Ok(()) => match flushed {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("sisa: error: {e}");
                ExitCode::FAILURE
            }
        },
        Err(CliError::Core(e)) => {
            eprintln!("sisa: error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(CliError::Output(e)) => {
            eprintln!("sisa: error: writing output: {e}");
            ExitCode::FAILURE
        }
    }
}

enum CliError {
    Core(Error),
    Output(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e)
    }
}

type CliResult = Result<(), CliError>;

fn read_input(path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

fn read_document(path: &Path) -> Result<Document, Error> {
    if path == Path::new("-") {
        parse_document(&read_input(path)?, "stdin")
    } else {
        Document::read(path)
    }
}

/// Loads a lexicon on the scale its header declares (SFU by default).
fn read_lexicon(path: &Path, rescale: bool) -> Result<SentimentLexicon, Error> {
    let text = read_input(path)?;
    let scale = declared_scale(&text).unwrap_or(Scale::Sfu);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let parsed = if rescale {
        SentimentLexicon::parse(&text, &name, scale)
    } else {
        SentimentLexicon::parse_unscaled(&text, &name, scale)
    };
    parsed.map_err(|e| e.in_file(path))
}

fn read_rules(rules: Option<&Path>, lists: Option<&Path>) -> Result<Vec<OperationDefinition>, Error> {
    let Some(rules) = rules else {
        return Ok(Vec::new());
    };
    let lists = match lists {
        Some(dir) => WordLists::load_dir(dir)?,
        None => WordLists::new(),
    };
    load_rules(rules, &lists)
}

fn classify(args: &ClassifyArgs, out: &mut impl Write) -> CliResult {
    let lexicon = read_lexicon(&args.lexicon, true)?;
    let rules = read_rules(args.rules.as_deref(), args.lists.as_deref())?;
    let classifier = Classifier::new(&lexicon, &rules).with_options(args.scoring.options());

    for path in &args.input {
        let doc = read_document(path)?;
        match args.granularity {
            GranularityArg::Doc => {
                let result = classifier.classify_document(&doc)?;
                writeln!(out, "{}\t{}\t{}", doc.source_id, format_so(result.so), result.label)?;
            }
            GranularityArg::Sentence => {
                for (idx, tree) in doc.sentences.iter().enumerate() {
                    let result = classifier.classify_sentence(tree);
                    writeln!(
                        out,
                        "{}:{}\t{}\t{}",
                        doc.source_id,
                        idx + 1,
                        format_so(result.so),
                        result.label
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn trace(args: &EngineArgs, out: &mut impl Write) -> CliResult {
    let lexicon = read_lexicon(&args.lexicon, true)?;
    let rules = read_rules(args.rules.as_deref(), args.lists.as_deref())?;
    let doc = read_document(&args.input)?;
    let result = Classifier::new(&lexicon, &rules).classify_document(&doc)?;
    for (idx, trace) in result.traces.iter().enumerate() {
        writeln!(out, "# {} sentence {}", doc.source_id, idx + 1)?;
        write!(out, "{trace}")?;
    }
    Ok(())
}

fn merge(args: &MergeArgs, out: &mut impl Write) -> CliResult {
    let sources = args
        .lexicon
        .iter()
        .map(|p| read_lexicon(p, args.scale))
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_lexica(&sources, &args.name)?;

    let tsv = merged.to_tsv();
    match &args.output {
        Some(path) => fs::write(path, tsv).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?,
        None => out.write_all(tsv.as_bytes())?,
    }

    let sizes: Vec<String> = merged
        .size_by_pos()
        .into_iter()
        .filter(|&(pos, n)| pos != "*" || n > 0)
        .map(|(pos, n)| format!("{pos}={n}"))
        .collect();
    let neutralized = merged.entries().filter(|(_, _, e)| e.is_neutralized()).count();
    eprintln!(
        "{}: {} entries ({}), {} neutralized",
        merged.name,
        merged.len(),
        sizes.join(" "),
        neutralized
    );
    Ok(())
}

fn rescale(args: &ScaleArgs, out: &mut impl Write) -> CliResult {
    if let Some(value) = args.value {
        writeln!(out, "{}", format_so(scale_senticon(value)?))?;
        return Ok(());
    }
    let path = args.lexicon.as_deref().expect("clap requires --lexicon or --value");
    let text = read_input(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let lexicon = SentimentLexicon::parse(&text, &name, Scale::SenticonRaw).map_err(|e| e.in_file(path))?;
    let tsv = lexicon.to_tsv();
    match &args.output {
        Some(p) => fs::write(p, tsv).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        })?,
        None => out.write_all(tsv.as_bytes())?,
    }
    Ok(())
}

fn run_evaluation(args: &EvaluateArgs, out: &mut impl Write) -> CliResult {
    if args.lexicon.len() > 2 {
        return Err(Error::Usage("evaluate takes one or two lexica (single, then merged)".into()).into());
    }
    let manifest = CorpusManifest::load(&args.corpus)?;
    let lexica = args
        .lexicon
        .iter()
        .map(|p| read_lexicon(p, true))
        .collect::<Result<Vec<_>, _>>()?;
    let rules = read_rules(args.rules.as_deref(), args.lists.as_deref())?;

    let mut reports = Vec::new();
    for id in ConfigId::ALL {
        let lexicon = match (id.uses_merged_lexicon(), lexica.get(1)) {
            (false, _) => &lexica[0],
            (true, Some(ml)) => ml,
            (true, None) => continue,
        };
        if id.uses_operations() && args.rules.is_none() {
            continue;
        }
        let cfg = RunConfig {
            id,
            lexicon,
            rules: if id.uses_operations() { &rules } else { &[] },
            options: args.scoring.options(),
        };
        let report = evaluate(&manifest, &cfg)?;
        if report.errored > 0 {
            log::warn!("{id}: {} item(s) could not be read and were excluded", report.errored);
        }
        out.write_all(report.to_tsv(args.verbose).as_bytes())?;
        reports.push(report);
    }

    let impact = if reports.len() == ConfigId::ALL.len() {
        let table = compare_configs(&reports)?;
        out.write_all(table.to_tsv().as_bytes())?;
        Some(table)
    } else {
        None
    };

    if let Some(path) = &args.report {
        let summary = EvaluationSummary { reports, impact };
        fs::write(path, summary.to_json() + "\n").map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
    }
    Ok(())
}
