use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qipwsd::eval::{compare_runs, run_pipeline, EvalReport};
use qipwsd::instance::{load_corpus, write_corpus, Assignment};
use qipwsd::model::{build_model, SolverConfig, Variant};
use qipwsd::similarity::{build_sim_tables, RelatednessParams};
use qipwsd::solvers::{solve_qip_r, SolveOptions, Solver};
use qipwsd::synth::SynthSpec;
use qipwsd::{demonstrate_order_dependence, Error};

#[derive(Parser)]
#[command(name = "qipwsd", version, about = "Word sense disambiguation by quadratic 0-1 programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every instance of a corpus and write a JSON report.
    Solve(SolveArgs),
    /// Compare two reports over the same corpus.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Write the diff here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path length of one assignment under every word order.
    OrderDemo(OrderDemoArgs),
    /// Write a seeded synthetic corpus.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Adjacent,
    Qipr,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Brute,
    Bnb,
    Dp,
    Qipr,
    Local,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda1: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda2: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda3: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
    /// Margin threshold in [0, 1]; 1 disables fixing.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, value_enum, default_value = "full")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "bnb")]
    solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also dump the similarity tables of every instance to this file.
    #[arg(long)]
    dump_tables: Option<PathBuf>,
}

#[derive(Args)]
struct OrderDemoArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 0)]
    instance: usize,
    /// CSV output with one `order,length` row per word order.
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated sense indices; defaults to gold, else the per-word
    /// argmax of similarity.
    #[arg(long, value_delimiter = ',')]
    assignment: Option<Vec<usize>>,
    /// Orders to sample when the instance is too large to enumerate.
    #[arg(long, default_value_t = 5000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    min_words: usize,
    #[arg(long, default_value_t = 6)]
    max_words: usize,
    #[arg(long, default_value_t = 1)]
    min_senses: usize,
    #[arg(long, default_value_t = 5)]
    max_senses: usize,
    #[arg(long, default_value_t = 8)]
    dimension: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Adjacent => Variant::Adjacent,
            VariantArg::Qipr => Variant::QipR,
        }
    }
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Brute => Solver::Brute,
            SolverArg::Bnb => Solver::Bnb,
            SolverArg::Dp => Solver::Dp,
            SolverArg::Qipr => Solver::QipR,
            SolverArg::Local => Solver::Local,
        }
    }
}

fn write_json(path: &PathBuf, value: &impl serde::Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn solve_cmd(args: SolveArgs) -> Result<(), Error> {
    let cfg = SolverConfig {
        beta: args.beta,
        theta: args.theta,
        params: RelatednessParams::new(args.lambda1, args.lambda2, args.lambda3),
        variant: args.variant.into(),
    };
    let opts = SolveOptions {
        seed: args.seed,
        restarts: args.restarts,
        ..Default::default()
    };
    if let Some(path) = &args.dump_tables {
        let corpus = load_corpus(&args.corpus)?;
        let dumps: Vec<_> = corpus.iter().map(|i| build_sim_tables(i).dump()).collect();
        write_json(path, &dumps)?;
    }
    let report = run_pipeline(&args.corpus, &cfg, args.solver.into(), &opts, Some(&args.out))?;
    let agg = &report.aggregate;
    match agg.accuracy {
        Some(acc) => eprintln!(
            "solved {} instances ({} words), accuracy {:.4}",
            agg.instances, agg.words, acc
        ),
        None => eprintln!("solved {} instances ({} words)", agg.instances, agg.words),
    }
    Ok(())
}

fn compare_cmd(a: PathBuf, b: PathBuf, out: Option<PathBuf>) -> Result<(), Error> {
    let diff = compare_runs(&EvalReport::load(&a)?, &EvalReport::load(&b)?)?;
    match out {
        Some(path) => write_json(&path, &diff)?,
        None => println!("{}", serde_json::to_string_pretty(&diff)?),
    }
    eprintln!(
        "agreement {:.4} over {} words, {} disagreements",
        diff.agreement_rate,
        diff.words,
        diff.disagreements.len()
    );
    Ok(())
}

fn order_demo_cmd(args: OrderDemoArgs) -> Result<(), Error> {
    let corpus = load_corpus(&args.corpus)?;
    let inst = corpus.get(args.instance).ok_or_else(|| {
        Error::OutOfRange(format!(
            "instance {} of a {}-instance corpus",
            args.instance,
            corpus.len()
        ))
    })?;
    let tables = build_sim_tables(inst);
    let assignment = match args.assignment {
        Some(choices) => Assignment::new(choices),
        None => match inst.gold_assignment() {
            Some(gold) => gold,
            None => {
                let cfg = SolverConfig {
                    variant: Variant::QipR,
                    ..Default::default()
                };
                solve_qip_r(&build_model(inst, &tables, &cfg)?)?.assignment
            }
        },
    };
    let report = demonstrate_order_dependence(inst, &tables, &assignment, args.samples, args.seed)?;

    let mut writer = csv::Writer::from_path(&args.out)?;
    writer.write_record(["order", "length"])?;
    for entry in &report.entries {
        let order = entry
            .order
            .iter()
            .map(|&w| inst.word(w).word_id.as_str())
            .collect::<Vec<_>>()
            .join(">");
        writer.write_record([order, entry.length.to_string()])?;
    }
    writer.flush().map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })?;
    eprintln!(
        "{} orders ({}), lengths in [{:.6}, {:.6}], spread {:.6}, {} distinct",
        report.entries.len(),
        if report.exhaustive { "all" } else { "sampled" },
        report.min,
        report.max,
        report.spread,
        report.distinct
    );
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), Error> {
    if args.min_words == 0
        || args.min_senses == 0
        || args.dimension == 0
        || args.min_words > args.max_words
        || args.min_senses > args.max_senses
    {
        return Err(Error::Config("empty word, sense or dimension range".into()));
    }
    let spec = SynthSpec::new(
        args.min_words..=args.max_words,
        args.min_senses..=args.max_senses,
        args.dimension,
    );
    write_corpus(&args.out, &spec.corpus(args.seed, args.count))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve_cmd(args),
        Command::Compare { a, b, out } => compare_cmd(a, b, out),
        Command::OrderDemo(args) => order_demo_cmd(args),
        Command::Generate(args) => generate_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
