use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;
mod report;

use report::{render, Format};

const GRAMMAR: &str = "\
Curve specs:
  parabola(a=A)          y = A x^2
  family(a=A,c=C)        the open parabola A x^2 - 2 sqrt(A) C x y + C^2 y^2 - y = 0 through the origin
  circle(r=R)            lower arc R - sqrt(R^2 - x^2), |x| < R
  ellipse(p=P,q=Q)       lower arc Q (1 - sqrt(1 - x^2/P^2)), |x| < P
  expshift               e^x - 1 - x
  piecewise(a=A,b=B)     A x^2 for x < 0, B x^2 for x >= 0
  expr(EXPRESSION)       any expression in x

Expressions use numbers, x, + - * / ^, parentheses and the functions
sin cos exp log sqrt cosh sinh. `^` is right-associative and binds tighter
than unary minus, so -x^2 is -(x^2) and 2^3^2 is 2^9.

Exit codes: 0 success (classify: Parabola), 1 NotParabola, 2 usage or
evaluation error, 3 Inconclusive.";

#[derive(Parser)]
#[command(name = "trilab", version, about = "Contact and tangent triangle areas on convex curves")]
#[command(after_long_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    out: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out_file: Option<PathBuf>,
    /// Worker threads for scans (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Args, Clone)]
pub struct CurveArg {
    /// Curve spec, e.g. "circle(r=1)" or "expr(cosh(x) - 1)".
    #[arg(long)]
    pub curve: String,
}

#[derive(Subcommand)]
enum Command {
    /// Chord, triangle and auxiliary limits as h -> 0 at one base point.
    Limits {
        #[command(flatten)]
        curve: CurveArg,
        /// Base point parameter.
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        /// Largest height (default: a quarter of the frame probe radius).
        #[arg(long)]
        h0: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// U/T for the chord at height h over one base point.
    Ratio {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long)]
        h: f64,
    },
    /// U/T at a fixed height across evenly spaced base points.
    Scan {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        h: f64,
    },
    /// Characterization residuals at tangential offsets in the frame at a base point.
    Residuals {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        /// Comma-separated offsets.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-0.5,-0.25,0.25,0.5")]
        t: Vec<f64>,
    },
    /// Decide whether a curve (or a point set) is an open part of a parabola.
    Classify(commands::ClassifyArgs),
    /// Integrate the characterization ODE from t0 against the closed-form family.
    OdeCheck {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        t0: f64,
        #[arg(long, default_value_t = 3.0)]
        t_end: f64,
        /// Output grid spacing.
        #[arg(long, default_value_t = 0.05)]
        dx: f64,
    },
}

fn run(cli: Cli) -> anyhow::Result<(report::RunReport, u8)> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()?;
    }
    let start = Instant::now();
    let (mut report, code) = match cli.command {
        Command::Limits { curve, at, h0, ratio, steps } => {
            (commands::limits(&curve.curve, at, h0, ratio, steps)?, 0)
        }
        Command::Ratio { curve, at, h } => (commands::ratio(&curve.curve, at, h)?, 0),
        Command::Scan { curve, from, to, samples, h } => {
            (commands::scan(&curve.curve, from, to, samples, h)?, 0)
        }
        Command::Residuals { curve, at, t } => (commands::residuals(&curve.curve, at, &t)?, 0),
        Command::Classify(args) => commands::classify(&args)?,
        Command::OdeCheck { a, c, t0, t_end, dx } => (commands::ode_check(a, c, t0, t_end, dx)?, 0),
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((report, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.out;
    let target = cli.out_file.clone();
    let (report, code) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &target {
        Some(path) => File::create(path)
            .map_err(anyhow::Error::from)
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                render(&report, format, &mut w)?;
                w.flush()?;
                Ok(())
            }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            render(&report, format, &mut lock)
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
