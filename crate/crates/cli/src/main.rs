//! `rtm`: generate data, train, evaluate, explain and export relational
//! Tsetlin machines from the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rtm_core::encoder::Mode;
use rtm_core::experiment::{check_settings, datasets, parse_dataset, Experiment, Trained};
use rtm_core::forge::{read_babi, write_babi, Dataset, GenConfig};
use rtm_core::inspect::{
    cost_estimate, export_horn, global_dump, kb_metrics, local_snapshot, CostParams, FeatureNames,
    RunReport,
};
use rtm_core::model::{read_model, write_model};
use rtm_core::qa::{ParsedInstance, Task};

#[derive(Parser)]
#[command(name = "rtm", version, about = "Relational Tsetlin machine for story question answering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded train and test story files.
    Generate(GenerateArgs),
    /// Train a model, on story files or on freshly generated data.
    Train(TrainArgs),
    /// Score a saved model on a story file.
    Eval(EvalArgs),
    /// Show the clauses that fire on one instance.
    Explain(ExplainArgs),
    /// Print the positive clauses of a generalized model as Horn rules.
    ExportHorn(ExportArgs),
    /// Feature widths, compaction ratio and training cost.
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        matches!(self, Switch::On)
    }
}

fn parse_task(s: &str) -> Result<Task, String> {
    s.parse().map_err(|e: rtm_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: rtm_core::Error| e.to_string())
}

#[derive(Args, Clone)]
struct DataArgs {
    /// movement (default), parentage (grandparent questions) or child.
    #[arg(long, value_parser = parse_task)]
    task: Option<Task>,
    /// Comma-separated names, or a count for generated names.
    #[arg(long)]
    persons: Option<String>,
    /// Comma-separated names, or a count for generated names.
    #[arg(long)]
    locations: Option<String>,
    /// Largest number of statements per story.
    #[arg(long)]
    statements: Option<usize>,
    /// Training stories to generate.
    #[arg(long)]
    train_size: Option<usize>,
    /// Test stories to generate.
    #[arg(long)]
    test_size: Option<usize>,
    /// Share of training answers replaced by a wrong one.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, env = "RTM_SEED", default_value_t = 42)]
    seed: u64,
    /// Generator settings file with key=value lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn vocabulary(spec: &str, stem: &str) -> Vec<String> {
    match spec.parse::<usize>() {
        Ok(n) => (1..=n).map(|k| format!("{stem}{k}")).collect(),
        Err(_) => spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    }
}

impl DataArgs {
    fn gen_config(&self) -> Result<GenConfig> {
        let mut c = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                GenConfig::parse(&text)?
            }
            None => GenConfig::for_task(self.task.unwrap_or(Task::Movement)),
        };
        if let Some(task) = self.task {
            if task != c.task {
                // the vocabulary of a different task does not carry over
                c = GenConfig::for_task(task);
            }
        }
        if let Some(p) = &self.persons {
            c.persons = vocabulary(p, "person");
        }
        if let Some(l) = &self.locations {
            c.locations = vocabulary(l, "place");
        }
        if let Some(s) = self.statements {
            c.statements = s;
        }
        if let Some(n) = self.train_size {
            c.train = n;
        }
        if let Some(n) = self.test_size {
            c.test = n;
        }
        c.noise = self.noise;
        c.seed = self.seed;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Directory for train.txt, test.txt and config.txt.
    #[arg(long, default_value = "rtm-out")]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Training stories; generated from the data flags when absent.
    #[arg(long)]
    train: Option<PathBuf>,
    /// Test stories; with --train absent the generated test split is used.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode, default_value = "generalized")]
    mode: Mode,
    /// Convolution over permutation windows; defaults to on for yes/no tasks.
    #[arg(long, value_enum)]
    conv: Option<Switch>,
    /// Allow negated literals in clauses (movement requires --order-tags on).
    #[arg(long, value_enum, default_value = "off")]
    negative_literals: Switch,
    /// Tag statements with their position in the story.
    #[arg(long, value_enum, default_value = "off")]
    order_tags: Switch,
    /// Clauses per class, half of each polarity.
    #[arg(long, default_value_t = 200)]
    clauses: usize,
    /// Voting target T.
    #[arg(long, default_value_t = 15)]
    threshold: i32,
    /// Specificity s; 10 for movement, 3 otherwise.
    #[arg(long)]
    specificity: Option<f64>,
    /// States per automaton action N.
    #[arg(long, default_value_t = 100)]
    states: u16,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, value_enum, default_value = "off")]
    boost: Switch,
    /// Directory for model.rtm, clauses.txt and report.json.
    #[arg(long, default_value = "rtm-out")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Where to write report.json; printed only when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[arg(long)]
    model: PathBuf,
    /// Story file holding the instance.
    #[arg(long)]
    data: PathBuf,
    /// Position of the story in the file, from 0.
    #[arg(long, default_value_t = 0)]
    instance: usize,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    model: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Story file to count atoms in; the generated training split otherwise.
    #[arg(long)]
    train: Option<PathBuf>,
    /// Clauses per class for the cost estimate.
    #[arg(long, default_value_t = 200)]
    clauses: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
}

fn load(path: &Path) -> Result<Dataset> {
    read_babi(path).with_context(|| format!("reading {}", path.display()))
}

fn parsed(task: Task, data: &Dataset, path: &str) -> Result<Vec<ParsedInstance>> {
    parse_dataset(task, data).with_context(|| format!("parsing {path} as {task} stories"))
}

fn config_echo(t: &Trained) -> BTreeMap<String, String> {
    let p = t.machine.params();
    let s = t.encoder.settings();
    let on = |b: bool| if b { "on" } else { "off" }.to_string();
    BTreeMap::from([
        ("task".into(), s.task.to_string()),
        ("mode".into(), s.mode.to_string()),
        ("conv".into(), on(s.conv)),
        ("order_tags".into(), on(s.order_tags)),
        ("negative_literals".into(), on(p.negative_literals)),
        ("clauses".into(), p.clauses.to_string()),
        ("threshold".into(), p.threshold.to_string()),
        ("specificity".into(), p.specificity.to_string()),
        ("states".into(), p.states_per_action.to_string()),
        ("epochs".into(), p.epochs.to_string()),
        ("boost".into(), on(p.boost_true_positive)),
    ])
}

fn report(t: &Trained, test: &[ParsedInstance], started: Instant) -> Result<RunReport> {
    let metrics = t.evaluate(test)?;
    Ok(RunReport::new(
        config_echo(t),
        t.machine.params().seed,
        &metrics,
        t.machine.features(),
        t.machine.params().clauses,
        started.elapsed().as_secs_f64(),
    ))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let config = args.data.gen_config()?;
    let (train, test, corrupted) = datasets(&config)?;
    fs::create_dir_all(&args.out)?;
    write_babi(&train, &args.out.join("train.txt"))?;
    write_babi(&test, &args.out.join("test.txt"))?;
    fs::write(args.out.join("config.txt"), config.to_string())?;
    println!(
        "wrote {} train and {} test stories to {} ({corrupted} noisy answers)",
        train.len(),
        test.len(),
        args.out.display()
    );
    Ok(())
}

fn train(args: TrainArgs) -> Result<()> {
    let started = Instant::now();
    let task = args.data.gen_config()?.task;
    let mut exp = Experiment::new(task);
    exp.settings.mode = args.mode;
    exp.settings.order_tags = args.order_tags.on();
    if let Some(c) = args.conv {
        exp.settings.conv = c.on();
    }
    let p = &mut exp.params;
    p.clauses = args.clauses;
    p.threshold = args.threshold;
    if let Some(s) = args.specificity {
        p.specificity = s;
    }
    p.states_per_action = args.states;
    p.epochs = args.epochs;
    p.boost_true_positive = args.boost.on();
    p.negative_literals = args.negative_literals.on();
    p.seed = args.data.seed;
    check_settings(&exp.settings, &exp.params)?;

    let (train, test, schema) = match &args.train {
        Some(path) => {
            let train = parsed(task, &load(path)?, &path.display().to_string())?;
            let test = match &args.test {
                Some(t) => Some(parsed(task, &load(t)?, &t.display().to_string())?),
                None => None,
            };
            let schema = task.infer_schema(train.iter().chain(test.iter().flatten()))?;
            (train, test, schema)
        }
        None => {
            let config = args.data.gen_config()?;
            let (train, test, _) = datasets(&config)?;
            let schema = rtm_core::experiment::schema_for(&config)?;
            (parse_dataset(task, &train)?, Some(parse_dataset(task, &test)?), schema)
        }
    };
    let mut trained = Trained::init(exp.settings, exp.params.clone(), schema, &train)?;
    trained.train(&train)?;

    fs::create_dir_all(&args.out)?;
    write_model(&trained, &args.out.join("model.rtm"))?;
    let names = FeatureNames::from_index(trained.encoder.index());
    fs::write(args.out.join("clauses.txt"), global_dump(&trained.machine, &names))?;
    if let Some(test) = test {
        let r = report(&trained, &test, started)?;
        r.write(&args.out.join("report.json"))?;
        print_summary(&r);
    }
    println!("model written to {}", args.out.join("model.rtm").display());
    Ok(())
}

fn print_summary(r: &RunReport) {
    println!(
        "accuracy {:.4}  macro-F {:.4}  micro-F {:.4}  features {}  clauses {}  {:.1}s",
        r.accuracy, r.f_macro, r.f_micro, r.features, r.clauses, r.wall_time_secs
    );
}

fn eval(args: EvalArgs) -> Result<()> {
    let started = Instant::now();
    let trained = read_model(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    let task = trained.encoder.settings().task;
    let test = parsed(task, &load(&args.test)?, &args.test.display().to_string())?;
    let r = report(&trained, &test, started)?;
    print_summary(&r);
    match args.out {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            r.write(&dir.join("report.json"))?;
        }
        None => println!("{}", r.to_json()),
    }
    Ok(())
}

fn explain(args: ExplainArgs) -> Result<()> {
    let trained = read_model(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    let task = trained.encoder.settings().task;
    let data = load(&args.data)?;
    let Some(instance) = data.instances.get(args.instance) else {
        bail!("{} holds {} stories, no instance {}", args.data.display(), data.len(), args.instance);
    };
    let p = rtm_core::qa::parse_instance(instance, &task.lexicon())?;
    let encoded = trained.encoder.encode(&p)?;
    let names = FeatureNames::from_index(trained.encoder.index());
    let snapshot = local_snapshot(&trained.machine, &encoded.windows, &names)?;
    for s in &instance.statements {
        println!("{s}");
    }
    println!("{}  (expected {})\n", instance.question, instance.answer);
    print!("{snapshot}");
    let winner = snapshot.winner_label();
    if let Ok(answer) = encoded.label_map.to_constant(winner) {
        if answer != winner {
            println!("answer {answer}");
        }
    }
    Ok(())
}

fn export(args: ExportArgs) -> Result<()> {
    let trained = read_model(&args.model).with_context(|| format!("reading {}", args.model.display()))?;
    let export = export_horn(&trained.machine, &trained.encoder)?;
    if export.skipped_empty > 0 {
        eprintln!("warning: {} empty clauses skipped", export.skipped_empty);
    }
    match args.out {
        Some(path) => fs::write(path, export.text())?,
        None => print!("{}", export.text()),
    }
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<()> {
    let config = args.data.gen_config()?;
    let task = config.task;
    let data = match &args.train {
        Some(path) => parsed(task, &load(path)?, &path.display().to_string())?,
        None => parse_dataset(task, &datasets(&config)?.0)?,
    };
    let schema = rtm_core::experiment::schema_for(&config)?;
    let kb = kb_metrics(task, &schema, &data)?;
    println!("constants width    {}", kb.constants_width);
    println!("generalized width  {}", kb.generalized_width);
    println!("constants atoms    {} seen", kb.constants_atoms_seen);
    println!("generalized atoms  {} seen", kb.generalized_atoms_seen);
    println!("compaction ratio   {:.2}", kb.ratio);
    let params = CostParams { alpha: args.alpha, beta: args.beta, gamma: args.gamma };
    let d = data.len() as f64;
    let m = args.clauses as f64;
    for (name, width) in [("constants", kb.constants_width), ("generalized", kb.generalized_width)] {
        let cost = cost_estimate(d, width as f64, m, 0, params, false)?;
        println!("cost {name:<12} {cost:.3e}");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Explain(a) => explain(a),
        Command::ExportHorn(a) => export(a),
        Command::Metrics(a) => metrics(a),
    }
}
