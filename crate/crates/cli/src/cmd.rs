use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rspd::construct::{generate_rspd, LatticeChoice, RspdOptions, DEFAULT_MAX_CANDIDATES};
use rspd::criteria::{evaluate as evaluate_design, Criterion, EvalOptions, FillOptions};
use rspd::io::{self, Format, ReadOptions, WriteOptions};
use rspd::magic2d;

use crate::CliError;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LatticeArg {
    Astar,
    Magic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Dimension.
    #[arg(long)]
    pub p: usize,
    /// Run size.
    #[arg(long)]
    pub n: usize,
    /// Random rotations compared (forced to 1 for the magic lattice).
    #[arg(long, default_value_t = 100)]
    pub w: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to magic for p = 2 and astar otherwise.
    #[arg(long, value_enum)]
    pub lattice: Option<LatticeArg>,
    /// Output path; the design goes to stdout as CSV when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to json for a .json path and csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write an x1,...,xp header line.
    #[arg(long)]
    pub header: bool,
    /// Cap on enumerated candidate rows.
    #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES)]
    pub max_candidates: f64,
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let lattice = match args.lattice {
        None => LatticeChoice::Auto,
        Some(LatticeArg::Astar) => LatticeChoice::AStar,
        Some(LatticeArg::Magic) => LatticeChoice::Magic,
    };
    let mut opts = RspdOptions::new(args.p, args.n)
        .w(args.w)
        .seed(args.seed)
        .lattice(lattice);
    opts.config.max_candidates = args.max_candidates;
    let design = generate_rspd(&opts)?;
    match &args.out {
        None => {
            std::io::stdout().write_all(io::design_to_csv(&design, args.header).as_bytes())?;
        }
        Some(path) => {
            let format = match args.format {
                Some(FormatArg::Csv) => Format::Csv,
                Some(FormatArg::Json) => Format::Json,
                None => Format::from_path(path),
            };
            io::write_design(
                &design,
                path,
                &WriteOptions {
                    format,
                    header: args.header,
                },
            )?;
        }
    }
    Ok(())
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Design file (CSV, or JSON when the name ends in .json).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated criteria: mindist, fill, psi, projmindist:h, cl2c, l2,
    /// extreme, imspe, imspe-inner, maximspe:h, genz-continuous,
    /// genz-gauss-peak.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "mindist,fill,psi,cl2c,l2,extreme"
    )]
    pub criteria: Vec<Criterion>,
    /// Correlation decay for every IMSPE-type criterion (default: table value).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Seed for randomized estimators.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accept coordinates outside [0, 1].
    #[arg(long)]
    pub allow_out_of_range: bool,
    /// Grid points per axis for the fill distance (p <= 3).
    #[arg(long, default_value_t = 201)]
    pub grid_resolution: usize,
    /// Quasi-random points for the fill distance (p >= 4).
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Random restarts for the extreme discrepancy when p >= 3.
    #[arg(long, default_value_t = 200)]
    pub extreme_effort: usize,
    /// Decay scale of the Genz integrands.
    #[arg(long, default_value_t = 5.0)]
    pub genz_scale: f64,
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let design = io::read_design(
        &args.input,
        &ReadOptions {
            allow_out_of_range: args.allow_out_of_range,
        },
    )?;
    let opts = EvalOptions {
        theta: args.theta,
        seed: args.seed,
        fill: FillOptions {
            grid_resolution: args.grid_resolution,
            samples: args.samples,
            ..FillOptions::default()
        },
        extreme_effort: args.extreme_effort,
        genz_scale: args.genz_scale,
        ..EvalOptions::default()
    };
    let report = evaluate_design(&design, &args.criteria, &opts)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(rspd::Error::from)?;
    text.push('\n');
    match &args.out {
        None => std::io::stdout().write_all(text.as_bytes())?,
        Some(path) => std::fs::write(path, text)?,
    }
    Ok(())
}

/// Inclusive integer range written `a..b` (or a single value).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl std::str::FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected a range like 2..50, got '{s}'");
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
            None => (s, s),
        };
        let start: usize = a.trim().parse().map_err(|_| bad())?;
        let end: usize = b.trim().parse().map_err(|_| bad())?;
        if start > end {
            return Err(bad());
        }
        Ok(IntRange { start, end })
    }
}

impl IntRange {
    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

#[derive(Args)]
pub struct MagicCheckArgs {
    /// Run sizes to build and check, inclusive.
    #[arg(long, default_value = "2..200")]
    pub n_range: IntRange,
    /// Number of minimum vectors checked.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Coefficient bound of the brute-force lattice search.
    #[arg(long, default_value_t = 200)]
    pub fbound: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check this two-column design instead of building magic designs.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

pub fn magic_check(args: &MagicCheckArgs) -> Result<(), CliError> {
    let mut failures = Vec::new();
    let checks = match &args.input {
        Some(path) => {
            let design = io::read_design(path, &ReadOptions::default())?;
            if design.p() != 2 {
                return Err(CliError::Usage(format!(
                    "magic-check needs a two-column design, {} has {}",
                    path.display(),
                    design.p()
                )));
            }
            println!("design {}: n = {}", path.display(), design.n());
            magic2d::check_gaps(&design)?
        }
        None => {
            if args.n_range.start < 2 {
                return Err(CliError::Usage("--n-range must start at 2 or more".into()));
            }
            let prop1 = magic2d::verify_prop1(args.kmax, args.fbound, 1.0);
            println!(
                "minimum vectors (k <= {}, |f| <= {}): {}",
                args.kmax,
                args.fbound,
                if prop1 { "ok" } else { "FAILED" }
            );
            if !prop1 {
                failures.push(format!(
                    "minimum-vector property fails for k_max = {}",
                    args.kmax
                ));
            }
            let checks = magic2d::gap_sweep(args.n_range.iter(), args.seed)?;
            println!(
                "built {} magic designs for n = {}..{}",
                args.n_range.iter().count(),
                args.n_range.start,
                args.n_range.end
            );
            checks
        }
    };
    for c in &checks {
        if !c.ok {
            let (lo, hi) = magic2d::gap_bounds(c.n);
            failures.push(format!(
                "n = {}, x{}: gaps [{:.6e}, {:.6e}] outside [{lo:.6e}, {hi:.6e}]",
                c.n,
                c.coord + 1,
                c.stats.min_gap,
                c.stats.max_gap
            ));
        }
    }
    println!(
        "gap checks: {} passed, {} failed",
        checks.iter().filter(|c| c.ok).count(),
        checks.iter().filter(|c| !c.ok).count()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Property(format!(
            "bound violations:\n  {}",
            failures.join("\n  ")
        )))
    }
}
