//! Command-line front end. Every subcommand prints one JSON [`CommandReport`].
//!
//! Exit codes: 0 ok, 1 failed check / uncertifiable input / I/O failure,
//! 2 usage or parse error.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certificates::{
    certify_with_bounds, figure_data, filling_bounds, Figure, FigureTable,
    DERIVED_THRESHOLD_SQUARED, THRESHOLD,
};
use crate::envelope::{min_tube_z, standard_envelope, Branch};
use crate::error::Error;
use crate::lattice::{enumerate_short_slopes, CuspShape};
use crate::packing::{area_floor, min_tube_radius, PackingConstants};
use crate::weitzenboeck::{min_boundary_form, BoundaryCurvature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|computed − expected| ≤ tolerance`.
    pub fn near(name: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            computed,
            expected,
            tolerance,
            pass: (computed - expected).abs() <= tolerance,
        }
    }

    /// Passes when `computed ≥ expected − tolerance`.
    pub fn at_least(name: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            computed,
            expected,
            tolerance,
            pass: computed >= expected - tolerance,
        }
    }

    /// Passes when `computed > expected`.
    pub fn above(name: &str, computed: f64, expected: f64) -> Self {
        Check {
            name: name.to_string(),
            computed,
            expected,
            tolerance: 0.0,
            pass: computed > expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub checks: Vec<Check>,
}

impl CommandReport {
    fn new(command: &str, payload: Value, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(|c| c.pass) {
            Status::Ok
        } else {
            Status::Error
        };
        CommandReport {
            command: command.to_string(),
            status,
            payload,
            checks,
        }
    }

    fn failed(command: &str, message: &str) -> Self {
        CommandReport {
            command: command.to_string(),
            status: Status::Error,
            payload: json!({ "error": message }),
            checks: Vec::new(),
        }
    }
}

/// Result of one invocation, before anything is written to the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "dehnfill",
    version,
    about = "Certified bounds for hyperbolic Dehn filling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute the published constants and compare.
    Constants,
    /// Decide certification for one or more cusps.
    Certify {
        /// Normalized lengths, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["shape", "slope"])]
        lhat: Vec<f64>,
        /// Cusp shape `re,im`; repeat once per cusp.
        #[arg(long, allow_hyphen_values = true, requires = "slope")]
        shape: Vec<String>,
        /// Filling slope `p,q`; one per --shape.
        #[arg(long, allow_hyphen_values = true, requires = "shape")]
        slope: Vec<String>,
    },
    /// Volume, visual-area and core-length bounds for one normalized length.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        lhat: f64,
    },
    /// List primitive slopes with normalized length at most the cutoff.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        shape: String,
        #[arg(long, allow_hyphen_values = true)]
        cutoff: f64,
    },
    /// Scan the boundary form over random 1-forms.
    Weitz {
        #[arg(long, allow_hyphen_values = true)]
        k1: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Write figure data as CSV.
    Figure {
        #[arg(long)]
        which: u32,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Orientation(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn parse_slope(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("expected slope \"p,q\" with integers, got {s:?}"));
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse::<i64>().map_err(|_| bad())?;
    let q = q.trim().parse::<i64>().map_err(|_| bad())?;
    if p == 0 && q == 0 {
        return Err(Failure::Usage("slope must be nonzero".into()));
    }
    Ok((p, q))
}

fn parse_shape(s: &str) -> Result<CuspShape, Failure> {
    s.parse::<CuspShape>().map_err(Failure::from)
}

fn constants() -> Result<CommandReport, Failure> {
    let env = standard_envelope();
    let c_squared = TAU * TAU / env.profile(Branch::Upper, min_tube_z())?;
    let b = filling_bounds(env, THRESHOLD)?;
    let k = PackingConstants::standard();
    let floor_at_min_radius = area_floor(min_tube_radius())?;
    let checks = vec![
        Check::near("C", c_squared.sqrt(), THRESHOLD, 5e-4),
        Check::near("C_squared", c_squared, DERIVED_THRESHOLD_SQUARED, 5e-3),
        Check::near("volume_drop_hi", b.volume_drop.hi, 0.197816, 5e-5),
        Check::near(
            "area_floor_at_min_radius",
            floor_at_min_radius,
            0.980254,
            1e-5,
        ),
        Check::near(
            "visual_area_hi",
            b.visual_area.hi,
            floor_at_min_radius,
            1e-4,
        ),
        Check::near("core_length_hi", b.core_length_hi, 0.156012, 1e-5),
        Check::near("inverse_S", 1.0 / k.s_constant, 0.980257, 5e-6),
        Check::near(
            "area_floor_coefficient",
            2.0 * 3f64.sqrt() * k.axis_coefficient,
            k.area_floor_coefficient,
            5e-4,
        ),
    ];
    let payload = json!({
        "threshold": THRESHOLD,
        "threshold_squared": c_squared,
        "min_tube_radius": min_tube_radius(),
        "area_floor_at_min_radius": floor_at_min_radius,
        "packing": k,
        "bounds_at_threshold": b,
    });
    Ok(CommandReport::new("constants", payload, checks))
}

fn certify(
    lhat: Vec<f64>,
    shape: Vec<String>,
    slope: Vec<String>,
) -> Result<CommandReport, Failure> {
    let mut cusps = Vec::new();
    let lhats = if !lhat.is_empty() {
        lhat
    } else {
        if shape.len() != slope.len() {
            return Err(Failure::Usage(format!(
                "need one --slope per --shape, got {} shapes and {} slopes",
                shape.len(),
                slope.len()
            )));
        }
        if shape.is_empty() {
            return Err(Failure::Usage(
                "certify needs --lhat or --shape/--slope".into(),
            ));
        }
        let mut out = Vec::new();
        for (s, t) in shape.iter().zip(&slope) {
            let cusp = parse_shape(s)?;
            let (p, q) = parse_slope(t)?;
            let l = cusp.slope_length(p, q)?;
            cusps.push(json!({ "shape": [cusp.re(), cusp.im()], "slope": [p, q], "lhat": l }));
            out.push(l);
        }
        out
    };
    let cert = certify_with_bounds(standard_envelope(), &lhats)?;
    let check = Check::above("margin", cert.margin, 0.0);
    let mut payload = serde_json::to_value(&cert).expect("certificate serializes");
    if !cusps.is_empty() {
        payload["cusps"] = Value::Array(cusps);
    }
    Ok(CommandReport::new("certify", payload, vec![check]))
}

fn bounds(lhat: f64) -> Result<CommandReport, Failure> {
    let b = filling_bounds(standard_envelope(), lhat)?;
    let mut payload = serde_json::to_value(b).expect("bounds serialize");
    payload["lhat"] = json!(lhat);
    let checks = vec![
        Check::at_least(
            "volume_drop_order",
            b.volume_drop.hi - b.volume_drop.lo,
            0.0,
            0.0,
        ),
        Check::at_least(
            "visual_area_order",
            b.visual_area.hi - b.visual_area.lo,
            0.0,
            0.0,
        ),
    ];
    Ok(CommandReport::new("bounds", payload, checks))
}

fn enumerate(shape: &str, cutoff: f64) -> Result<CommandReport, Failure> {
    let cusp = parse_shape(shape)?;
    let slopes = enumerate_short_slopes(cusp, cutoff)?;
    let payload = json!({
        "shape": [cusp.re(), cusp.im()],
        "cutoff": cutoff,
        "count": slopes.len(),
        "slopes": slopes,
    });
    Ok(CommandReport::new("enumerate", payload, Vec::new()))
}

fn weitz(k1: f64, eps: f64, seed: u64, trials: usize) -> Result<CommandReport, Failure> {
    if !(k1 > 0.0) {
        return Err(Failure::Usage(format!("--k1 must be positive, got {k1}")));
    }
    let curv = BoundaryCurvature::new(k1, 1.0 / k1, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_b = min_boundary_form(&curv, &mut rng, trials)?;
    let in_range = curv.in_positive_range();
    let payload = json!({
        "k1": curv.k1(),
        "k2": curv.k2(),
        "eps": eps,
        "seed": seed,
        "trials": trials,
        "in_positive_range": in_range,
        "min_b": if trials > 0 { json!(min_b) } else { Value::Null },
    });
    let checks = if in_range && trials > 0 {
        vec![Check::at_least("min_b", min_b, 0.0, 1e-9)]
    } else {
        Vec::new()
    };
    Ok(CommandReport::new("weitz", payload, checks))
}

/// Writes a figure table as CSV: header row, then 17 significant digits per
/// value, LF line endings.
pub fn write_figure_csv<W: Write>(table: &FigureTable, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", table.header.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn render_figure_csv(table: &FigureTable, path: &Path) -> std::io::Result<()> {
    write_figure_csv(table, BufWriter::new(File::create(path)?))
}

fn figure(which: u32, samples: usize, out: &Path) -> Result<CommandReport, Failure> {
    let fig = Figure::try_from(which)?;
    let table = figure_data(standard_envelope(), fig, samples)?;
    render_figure_csv(&table, out)
        .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", out.display())))?;
    let payload = json!({
        "figure": which,
        "samples": samples,
        "path": out.display().to_string(),
        "columns": table.header,
    });
    Ok(CommandReport::new("figure", payload, Vec::new()))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constants => "constants",
        Command::Certify { .. } => "certify",
        Command::Bounds { .. } => "bounds",
        Command::Enumerate { .. } => "enumerate",
        Command::Weitz { .. } => "weitz",
        Command::Figure { .. } => "figure",
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("error")
        .to_string()
}

fn to_json(report: &CommandReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    exit_code: 0,
                    stdout: e.render().to_string(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: first_line(&e.render().to_string()) + "\n",
                },
            };
        }
    };
    let name = command_name(&cli.command);
    let result = match cli.command {
        Command::Constants => constants(),
        Command::Certify { lhat, shape, slope } => certify(lhat, shape, slope),
        Command::Bounds { lhat } => bounds(lhat),
        Command::Enumerate { shape, cutoff } => enumerate(&shape, cutoff),
        Command::Weitz {
            k1,
            eps,
            seed,
            trials,
        } => weitz(k1, eps, seed, trials),
        Command::Figure {
            which,
            samples,
            out,
        } => figure(which, samples, &out),
    };
    match result {
        Ok(report) => Outcome {
            exit_code: if report.status == Status::Ok { 0 } else { 1 },
            stdout: to_json(&report),
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            exit_code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", first_line(&msg)),
        },
        Err(Failure::Runtime(msg)) => Outcome {
            exit_code: 1,
            stdout: to_json(&CommandReport::failed(name, &msg)),
            stderr: format!("error: {}\n", first_line(&msg)),
        },
    }
}
