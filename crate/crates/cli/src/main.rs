use clap::{Parser, ValueEnum};
use whk::{Format, Invocation, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Exact checks for weak Hopf algebras, groupoid actions, smash products and Lie algebroid actions.
#[derive(Debug, Parser)]
#[command(name = "whk", version)]
struct Args {
    /// check-groupoid, groupoid-algebra, check-weak-hopf, counital, grouplikes, gamma,
    /// local-units, check-module-algebra, decompose, ideal, inner-faithful, smash, der,
    /// check-lie-action, envelope-consistency or report
    command: String,
    /// Definition file (JSON).
    file: String,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Word-length bound for envelope-consistency.
    #[arg(long, default_value_t = whk_core::lie::DEFAULT_DEGREE)]
    degree: usize,
    /// Cap on primitive idempotents examined by gamma.
    #[arg(long, default_value_t = whk_core::grouplike::DEFAULT_MAX_IDEMPOTENTS)]
    max_idempotents: usize,
    /// Block to run on; defaults to the last block the command applies to.
    #[arg(long)]
    target: Option<String>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn main() {
    let args = Args::parse();
    if let Some(n) = std::env::var("WHK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let inv = Invocation {
        command: args.command,
        file: args.file,
        format: match args.format {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        },
        options: Options { degree: args.degree, max_idempotents: args.max_idempotents, target: args.target },
        timing: args.timing,
    };
    let out = whk::run(&inv);
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
