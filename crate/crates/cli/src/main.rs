use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fueter_cli::{error_json, parse_box, scan_csv, verify, ComponentsJson, Options, PropertyReport};
use fueter_core::lift::LiftedSolution;
use fueter_core::singular::{self, Box4};
use fueter_core::{sampling, Error, Quaternion, RationalSeed};
use serde_json::json;

/// Radially symmetric solutions of the modified Fueter-Dirac equation lifted
/// from rational seeds F(z).
#[derive(Parser)]
#[command(name = "fueter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the property suite and print one report per property.
    Verify {
        #[arg(allow_hyphen_values = true)]
        seed: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the Jacobian of the lift on a regular grid.
    Scan {
        #[arg(allow_hyphen_values = true)]
        seed: String,
        #[command(flatten)]
        common: Common,
        /// Grid points per axis.
        #[arg(long, default_value_t = 5)]
        res: usize,
    },
    /// Certified component count of the imaginary slice minus the zero set.
    Components {
        #[arg(allow_hyphen_values = true)]
        seed: String,
        #[command(flatten)]
        common: Common,
    },
    /// Seed class and dichotomy verdict.
    Classify {
        #[arg(allow_hyphen_values = true)]
        seed: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the lift at a point given as t,x,y,z.
    Eval {
        #[arg(allow_hyphen_values = true)]
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Tolerance for the finite-difference residual checks.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=4))]
    stencil_order: u8,
    /// Fixed stencil step (default 1e-2 * (1 + |q|)).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Random points per check.
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// lo:hi for every axis, or four comma-separated intervals.
    #[arg(long = "box", default_value = "-2:2", allow_hyphen_values = true)]
    region: String,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

enum Failure {
    Usage(Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl Common {
    fn options(&self) -> Result<Options, Failure> {
        if self.stencil_order == 3 {
            return Err(Failure::Usage(Error::InvalidArgument("stencil order must be 2 or 4".into())));
        }
        Ok(Options {
            tol: self.tol,
            stencil_order: self.stencil_order,
            h: self.h,
            rng_seed: self.rng_seed,
            points: self.points,
            region: parse_box(&self.region).map_err(Failure::Usage)?,
        })
    }
}

fn parse(seed: &str) -> Result<RationalSeed, Failure> {
    seed.parse().map_err(Failure::Usage)
}

fn reports_csv(reports: &[PropertyReport]) -> String {
    let mut out = String::from("property,points_tested,max_residual,tolerance,pass\n");
    for r in reports {
        out += &format!("{},{},{:e},{:e},{}\n", r.property, r.points_tested, r.max_residual, r.tolerance, r.pass);
    }
    out
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Returns stdout text and whether every check passed.
fn run(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Verify { seed, common } => {
            let o = common.options()?;
            let reports = verify(&parse(&seed)?, &o)?;
            let ok = reports.iter().all(|r| r.pass);
            Ok((if common.csv { reports_csv(&reports) } else { pretty(&reports) }, ok))
        }
        Command::Scan { seed, common, res } => {
            let o = common.options()?;
            let f = LiftedSolution::new(parse(&seed)?);
            let stencil = o.stencil_override().map_err(Failure::Usage)?;
            let region: Box4 = o.region;
            let result = singular::scan(&f, region, res, stencil).map_err(|e| match e {
                Error::InvalidArgument(_) => Failure::Usage(e),
                e => Failure::Run(e),
            })?;
            if common.json {
                let rows: Vec<_> = result
                    .samples
                    .iter()
                    .map(|s| {
                        json!({
                            "point": s.point.to_array(), "u": s.u, "v": s.v,
                            "det_fd": s.det_fd, "det_analytic": s.det_analytic,
                            "locus": s.locus.name(),
                            "residual_left": s.residual_left, "residual_right": s.residual_right,
                        })
                    })
                    .collect();
                Ok((pretty(&json!({ "samples": rows, "skipped": result.skipped })), true))
            } else {
                Ok((scan_csv(&result.samples), true))
            }
        }
        Command::Components { seed, common } => {
            let o = common.options()?;
            let report = singular::component_report(&parse(&seed)?, &mut sampling::rng(o.rng_seed))?;
            let out = ComponentsJson::from(&report);
            Ok((pretty(&out), out.verified_by_sampling))
        }
        Command::Classify { seed, common } => {
            let o = common.options()?;
            let seed = parse(&seed)?;
            let class = format!("{:?}", seed.classify());
            let out = match singular::dichotomy_verdict(&seed, &mut sampling::rng(o.rng_seed), singular::DICHOTOMY_SAMPLES) {
                Ok(r) => json!({
                    "seed": seed.to_string(), "class": class,
                    "dichotomy": format!("{:?}", r.verdict),
                    "nonsingular_fraction": r.nonsingular_fraction,
                }),
                Err(e) => return Err(Failure::Run(e)),
            };
            Ok((pretty(&out), true))
        }
        Command::Eval { seed, at, .. } => {
            let f = LiftedSolution::new(parse(&seed)?);
            let coords: Vec<f64> = at
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .ok()
                .filter(|v: &Vec<f64>| v.len() == 4)
                .ok_or_else(|| Failure::Usage(Error::InvalidArgument(format!("point {at:?} (expected t,x,y,z)"))))?;
            let q = Quaternion::new(coords[0], coords[1], coords[2], coords[3]);
            let value = f.eval(q)?;
            let mut out = json!({ "point": q.to_array(), "value": value.to_array() });
            if let Ok((u, v)) = f.project(q) {
                out["u"] = json!(u);
                out["v"] = json!(v);
            }
            Ok((pretty(&out), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((text, ok)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(Failure::Usage(e)) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(2)
        }
    }
}
