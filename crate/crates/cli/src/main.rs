//! `mtdirac evaluate|verify|scatter`: batch front-end over the core library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod table;
mod verify;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mtdirac::conservation::{component_masses, QuadratureSpec};
use mtdirac::geometry::classify;
use mtdirac::interaction::{schmidt_spectrum, single_time_slice, SliceGrid};
use mtdirac::scenario::config::{ScatterWindow, ScenarioConfig};
use mtdirac::scenario::Support;
use mtdirac::{Configuration, Error, Scenario, WaveFunction};
use rayon::prelude::*;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use table::{g17, Csv};

#[derive(Parser)]
#[command(name = "mtdirac", version, about = "Two-time Dirac solutions with contact interaction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the solution at given configurations.
    Evaluate(Common),
    /// Run every verification suite and write verify.json.
    Verify(Common),
    /// Component masses and Schmidt spectra of single-time slices over time.
    Scatter(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature panels per axis.
    #[arg(long)]
    panels: Option<usize>,
    /// Points per axis of evaluation grids and slices.
    #[arg(long)]
    grid: Option<usize>,
    /// CSV of `t1,z1,t2,z2` rows for `evaluate`.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Common time of the equal-time grid used by `evaluate` without `--points`.
    #[arg(long, default_value_t = 0.0)]
    time: f64,
}

const DEFAULT_EVAL_GRID: usize = 64;
const DEFAULT_SCATTER_STEPS: usize = 21;
const VERIFY_SAMPLES: usize = 400;

/// Failure classes mapped to the exit-code contract.
enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

struct Loaded {
    echo: String,
    config: ScenarioConfig,
    scenario: Scenario,
}

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = ScenarioConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let scenario = config.build().with_context(|| format!("building {}", path.display()))?;
    Ok(Loaded {
        echo: config.echo(),
        config,
        scenario,
    })
}

fn quadrature(args: &Common) -> anyhow::Result<QuadratureSpec> {
    let q = QuadratureSpec::default();
    match args.panels {
        Some(0) => bail!("--panels must be positive"),
        Some(n) => Ok(q.with_panels(n)),
        None => Ok(q),
    }
}

fn parse_points(path: &Path) -> anyhow::Result<Vec<Configuration>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 4 => out.push(Configuration::new(v[0], v[1], v[2], v[3])),
            Err(_) if out.is_empty() && fields.len() == 4 => continue, // header row
            _ => bail!("{}:{}: expected four numbers t1,z1,t2,z2", path.display(), n + 1),
        }
    }
    Ok(out)
}

/// Data support hull widened by one unit on each side.
fn spatial_range(s: &Scenario) -> (f64, f64) {
    match s.initial.support() {
        Support::Box(a, b) => {
            let h = a.hull(&b);
            (h.lo - 1.0, h.hi + 1.0)
        }
        _ => (-5.0, 5.0),
    }
}

fn equal_time_grid(s: &Scenario, t: f64, n: usize) -> Vec<Configuration> {
    let (lo, hi) = spatial_range(s);
    let (lo, hi) = (lo - t.abs(), hi + t.abs());
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    let z = |k: usize| lo + step * k as f64;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| Configuration::equal_time(t, z(i), z(j))))
        .collect()
}

fn write(out: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn evaluate(args: &Common) -> Result<(), Failure> {
    let l = load(&args.scenario)?;
    let configs = match &args.points {
        Some(p) => parse_points(p)?,
        None => equal_time_grid(&l.scenario, args.time, args.grid.unwrap_or(DEFAULT_EVAL_GRID)),
    };
    let values: Vec<_> = configs.par_iter().map(|c| l.scenario.evaluate(c)).collect();
    let mut header = vec!["t1", "z1", "t2", "z2", "region"];
    let names = [
        "re_psi1", "im_psi1", "re_psi2", "im_psi2", "re_psi3", "im_psi3", "re_psi4", "im_psi4",
    ];
    header.extend(names);
    let mut csv = Csv::new(&l.echo, &header);
    for (c, v) in configs.iter().zip(values) {
        let mut row: Vec<String> = c.as_array().iter().map(|x| g17(*x)).collect();
        row.push(classify(c, 0.0).as_str().to_string());
        match v {
            Ok(psi) => {
                for z in psi.to_array() {
                    row.push(g17(z.re));
                    row.push(g17(z.im));
                }
            }
            Err(Error::OutsideDomain { .. }) => row.extend(std::iter::repeat_n(String::new(), 8)),
            Err(e) => return Err(anyhow::Error::new(e).into()),
        }
        csv.row(&row);
    }
    write(&args.out, "evaluate.csv", &csv.into_string())?;
    Ok(())
}

fn scatter_window(l: &Loaded) -> ScatterWindow {
    l.config.scatter.unwrap_or_else(|| {
        let (lo, hi) = spatial_range(&l.scenario);
        ScatterWindow {
            t_start: 0.0,
            t_end: 0.5 * (hi - lo),
            steps: DEFAULT_SCATTER_STEPS,
        }
    })
}

fn scatter(args: &Common) -> Result<(), Failure> {
    let l = load(&args.scenario)?;
    let q = quadrature(args)?;
    let w = scatter_window(&l);
    if w.steps == 0 || !(w.t_end >= w.t_start) {
        return Err(Failure::Usage(anyhow::anyhow!("scatter window needs steps > 0 and t_end >= t_start")));
    }
    let reach = w.t_start.abs().max(w.t_end.abs());
    let grid = SliceGrid::covering(&l.scenario, reach, args.grid.unwrap_or(SliceGrid::DEFAULT_POINTS))
        .map_err(anyhow::Error::new)?;
    let times: Vec<f64> = (0..w.steps)
        .map(|k| match w.steps {
            1 => w.t_start,
            n => w.t_start + (w.t_end - w.t_start) * k as f64 / (n - 1) as f64,
        })
        .collect();
    let rows: Vec<anyhow::Result<Vec<String>>> = times
        .par_iter()
        .map(|&t| {
            let m = component_masses(&l.scenario, t, &q)?;
            let sigma = match schmidt_spectrum(&single_time_slice(&l.scenario, t, grid)?) {
                Ok(s) => s.values,
                Err(Error::ZeroSlice) => Vec::new(),
                Err(e) => return Err(e.into()),
            };
            let mut row = vec![g17(t)];
            row.extend(m.iter().map(|x| g17(*x)));
            row.push(g17(m.iter().sum()));
            row.extend((0..4).map(|k| g17(sigma.get(k).copied().unwrap_or(0.0))));
            Ok(row)
        })
        .collect();
    let header = [
        "t", "mass_psi1", "mass_psi2", "mass_psi3", "mass_psi4", "mass_total", "sigma1", "sigma2", "sigma3",
        "sigma4",
    ];
    let mut csv = Csv::new(&l.echo, &header);
    for r in rows {
        csv.row(&r?);
    }
    write(&args.out, "scatter.csv", &csv.into_string())?;
    Ok(())
}

fn run_verify(args: &Common) -> Result<(), Failure> {
    let l = load(&args.scenario)?;
    let settings = verify::Settings {
        seed: args.seed,
        samples: VERIFY_SAMPLES,
        quadrature: quadrature(args)?,
        grid_points: args.grid.unwrap_or(SliceGrid::DEFAULT_POINTS / 2),
        probe_time: scatter_window(&l).t_end.max(0.5),
    };
    let report = verify::run(&l.scenario, &settings);
    let mut json = serde_json::to_string_pretty(&report).context("serializing report")?;
    json.push('\n');
    write(&args.out, "verify.json", &json)?;
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MTDIRAC_THREADS") {
        let n: usize = v.parse().with_context(|| format!("MTDIRAC_THREADS={v} is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().map_err(Failure::Usage).and_then(|()| match &cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Verify(a) => run_verify(a),
        Command::Scatter(a) => scatter(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed; see verify.json");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
