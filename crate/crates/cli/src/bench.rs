use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use rspd::baselines::{hammersley, random_lhd};
use rspd::construct::{generate_rspd, LatticeChoice, RspdOptions};
use rspd::criteria::{evaluate, Criterion, EvalOptions};
use rspd::io::format_g17;
use rspd::{seeded_rng, Design};

use crate::cmd::IntRange;
use crate::CliError;

pub const HEADER: [&str; 7] = [
    "method",
    "p",
    "n",
    "criterion",
    "value",
    "runtime_s",
    "seed",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// A_p* lattice, random rotations, best of w by ψ.
    Rspd,
    /// Magic-angle lattice (p = 2 only).
    Rspdm,
    Hammersley,
    /// Random Latin hypercube.
    Lhd,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Rspd => "rspd",
            Method::Rspdm => "rspdm",
            Method::Hammersley => "hammersley",
            Method::Lhd => "lhd",
        }
    }
}

/// Run size as a function of the dimension: `<k>p` or a fixed integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NRule {
    PerDim(usize),
    Fixed(usize),
}

impl std::str::FromStr for NRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected a run-size rule like 10p or 20, got '{s}'");
        let s = s.trim();
        let rule = match s.strip_suffix('p') {
            Some(k) => NRule::PerDim(k.parse().map_err(|_| bad())?),
            None => NRule::Fixed(s.parse().map_err(|_| bad())?),
        };
        match rule {
            NRule::PerDim(0) | NRule::Fixed(0) => Err(bad()),
            r => Ok(r),
        }
    }
}

impl NRule {
    fn n(self, p: usize) -> usize {
        match self {
            NRule::PerDim(k) => k * p,
            NRule::Fixed(n) => n,
        }
    }
}

#[derive(Args)]
pub struct BenchmarkArgs {
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "rspd,rspdm,hammersley,lhd"
    )]
    pub methods: Vec<Method>,
    /// Dimensions, inclusive.
    #[arg(long, default_value = "2..5")]
    pub p_range: IntRange,
    /// Run size per dimension: `<k>p` or a fixed integer.
    #[arg(long, default_value = "10p")]
    pub n_rule: NRule,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Base seed; replicate r uses seed + r * 2^32.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "mindist,fill,psi,cl2c,l2,imspe,imspe-inner,genz-continuous,genz-gauss-peak"
    )]
    pub criteria: Vec<Criterion>,
    /// Random rotations compared per RSPD build.
    #[arg(long, default_value_t = 100)]
    pub w: usize,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Record generation wall time; without it runtime_s is 0 so reruns
    /// produce identical files.
    #[arg(long)]
    pub timing: bool,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Cell {
    method: Method,
    p: usize,
    n: usize,
    seed: u64,
}

fn build(cell: &Cell, w: usize) -> rspd::Result<Design> {
    match cell.method {
        Method::Rspd => generate_rspd(
            &RspdOptions::new(cell.p, cell.n)
                .w(w)
                .seed(cell.seed)
                .lattice(LatticeChoice::AStar),
        ),
        Method::Rspdm => generate_rspd(
            &RspdOptions::new(cell.p, cell.n)
                .seed(cell.seed)
                .lattice(LatticeChoice::Magic),
        ),
        Method::Hammersley => hammersley(cell.n, cell.p),
        Method::Lhd => random_lhd(cell.n, cell.p, &mut seeded_rng(cell.seed)),
    }
}

pub fn run(args: &BenchmarkArgs) -> Result<(), CliError> {
    if args.p_range.start < 2 {
        return Err(CliError::Usage("--p-range must start at 2 or more".into()));
    }
    let mut cells = Vec::new();
    for &method in &args.methods {
        for p in args.p_range.iter() {
            if method == Method::Rspdm && p != 2 {
                log::warn!("rspdm exists only for p = 2; skipping p = {p}");
                continue;
            }
            for r in 0..args.reps {
                cells.push(Cell {
                    method,
                    p,
                    n: args.n_rule.n(p),
                    seed: args.seed.wrapping_add((r as u64) << 32),
                });
            }
        }
    }

    let rows: Vec<Vec<[String; 7]>> = cells
        .par_iter()
        .map(|cell| -> Result<Vec<[String; 7]>, CliError> {
            let start = Instant::now();
            let design = build(cell, args.w)?;
            let runtime = if args.timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            };
            let opts = EvalOptions {
                theta: args.theta,
                seed: cell.seed,
                ..EvalOptions::default()
            };
            let report = evaluate(&design, &args.criteria, &opts)?;
            Ok(args
                .criteria
                .iter()
                .map(|c| {
                    let name = c.to_string();
                    let value = report
                        .get(&name)
                        .expect("every requested criterion is reported");
                    [
                        cell.method.name().to_string(),
                        cell.p.to_string(),
                        cell.n.to_string(),
                        name,
                        format_g17(value),
                        format_g17(runtime),
                        cell.seed.to_string(),
                    ]
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;

    let sink: Box<dyn std::io::Write> = match &args.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::Core(rspd::Error::Io(std::io::Error::other(e)));
    writer.write_record(HEADER).map_err(csv_err)?;
    for row in rows.iter().flatten() {
        writer.write_record(row).map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}
