use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lelong_cli::config::{RunConfig, Tolerances, DEFAULT_SAMPLES, DEFAULT_SEED};
use lelong_cli::report::emit;
use lelong_cli::run_verify_suite;
use lelong_core::catalog::{catalog, parse_function_spec, Spec};
use lelong_core::exponent::{integrability_exponent, tail_exponent, CompactRegion};
use lelong_core::lelong::{
    calibrate_kappa, geometric_grid, lelong_function, lelong_jensen, lelong_number_from_profile, mean_value_ratios,
    sup_growth, DEFAULT_POINTS, DEFAULT_RMAX, DEFAULT_RMIN,
};
use lelong_core::{Error, MCConfig, ModelFunction, Point, Setting, SimpleCurrent};
use serde_json::json;

#[derive(Parser)]
#[command(name = "lelong", version, about = "Lelong numbers, mean values and integrability exponents of model m-subharmonic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Complex dimension.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Positivity index, 1 <= m < n.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo samples per shell.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Target {
    /// Function spec, e.g. "fund()" or "sum(1*fund(), 2*fund(center=1,0,0,0,0,0))".
    #[arg(long = "fn")]
    function: Option<String>,
    /// Current spec, e.g. "cur(coef=fund(), ddc=fund()^(m-1))".
    #[arg(long)]
    current: Option<String>,
    /// Base point as 2n comma-separated reals (origin if omitted).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Lelong function profile and Lelong number of a current (dd^c of --fn if given).
    Lelong {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_RMIN)]
        rmin: f64,
        #[arg(long, default_value_t = DEFAULT_RMAX)]
        rmax: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
    /// Integrability exponent of a function on a ball around --center.
    Exponent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        /// Radius of the ball.
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
    },
    /// Both sides of the Lelong-Jensen identity between --r1 and --r2.
    Jensen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0.1)]
        r1: f64,
        #[arg(long, default_value_t = 0.4)]
        r2: f64,
    },
    /// Supremum growth and mean-value limits of a function.
    Sup {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 32)]
        points: usize,
    },
    /// Runs the verification suite; exit code 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Criteria to run (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// JSON file overriding acceptance tolerances.
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
    /// Lists catalog entries with their known facts.
    Catalog {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::InvalidSetting(_) | Error::Syntax { .. } | Error::Semantic(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

type Outcome = Result<i32, Failure>;

impl Common {
    fn setting(&self) -> Result<Setting, Failure> {
        Ok(Setting::new(self.n, self.m)?)
    }

    fn mc(&self) -> Result<MCConfig, Failure> {
        if self.samples < 2 {
            return Err(Failure::Usage(format!("--samples must be at least 2, got {}", self.samples)));
        }
        Ok(MCConfig::new(self.seed, self.samples))
    }

    fn write_json(&self, value: &serde_json::Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("json value serializes") + "\n";
        emit(&text, self.out.as_deref())?;
        Ok(())
    }
}

impl Target {
    fn center(&self, st: &Setting) -> Result<Point, Failure> {
        match &self.center {
            None => Ok(Point::origin(st.n())),
            Some(v) if v.len() == 2 * st.n() => Ok(Point::from_reals(v)?),
            Some(v) => Err(Failure::Usage(format!("--center needs {} reals, got {}", 2 * st.n(), v.len()))),
        }
    }

    fn function(&self, st: &Setting) -> Result<ModelFunction, Failure> {
        let text = self.function.as_deref().ok_or_else(|| Failure::Usage("--fn is required".into()))?;
        match parse_function_spec(text, st)? {
            Spec::Function(f) => Ok(f),
            Spec::Current(_) => Err(Failure::Usage("--fn expects a function, got a current".into())),
        }
    }

    /// `--current`, or `dd^c` of `--fn`.
    fn current(&self, st: &Setting) -> Result<SimpleCurrent, Failure> {
        match (&self.current, &self.function) {
            (Some(text), None) => match parse_function_spec(text, st)? {
                Spec::Current(t) => Ok(t),
                Spec::Function(f) => Ok(SimpleCurrent::ddc_power(f, 1)?),
            },
            (None, Some(_)) => Ok(SimpleCurrent::ddc_power(self.function(st)?, 1)?),
            _ => Err(Failure::Usage("give exactly one of --fn or --current".into())),
        }
    }
}

fn lelong_cmd(common: &Common, target: &Target, rmin: f64, rmax: f64, points: usize) -> Outcome {
    let st = common.setting()?;
    let t = target.current(&st)?;
    let a = target.center(&st)?;
    let radii = geometric_grid(rmin, rmax, points)?;
    let profile = lelong_function(&st, &t, &a, &radii, &common.mc()?)?;
    match common.format {
        Format::Csv => emit(&profile.to_csv(), common.out.as_deref())?,
        Format::Json => {
            let estimate = lelong_number_from_profile(&profile);
            common.write_json(&json!({ "setting": { "n": st.n(), "m": st.m() }, "estimate": estimate, "profile": profile }))?
        }
    }
    Ok(0)
}

fn exponent_cmd(common: &Common, target: &Target, radius: f64) -> Outcome {
    let st = common.setting()?;
    let f = target.function(&st)?;
    let k = CompactRegion::ball(target.center(&st)?, radius)?;
    let mc = common.mc()?;
    let tail = tail_exponent(&f, &k, &mc)?;
    let scan = integrability_exponent(&f, &k, &mc)?;
    match common.format {
        Format::Csv => emit(&tail.to_csv(), common.out.as_deref())?,
        Format::Json => common.write_json(&json!({
            "setting": { "n": st.n(), "m": st.m() },
            "region": k,
            "tailSlope": tail.estimate(),
            "tailFit": tail.fit,
            "integralScan": scan,
            "samples": tail.samples,
        }))?,
    }
    Ok(0)
}

fn jensen_cmd(common: &Common, target: &Target, r1: f64, r2: f64) -> Outcome {
    let st = common.setting()?;
    let rep = lelong_jensen(&st, &target.current(&st)?, &target.center(&st)?, r1, r2, &common.mc()?)?;
    common.write_json(&json!({ "setting": { "n": st.n(), "m": st.m() }, "jensen": rep }))?;
    Ok(0)
}

fn sup_cmd(common: &Common, target: &Target, points: usize) -> Outcome {
    let st = common.setting()?;
    let f = target.function(&st)?;
    let a = target.center(&st)?;
    let mc = common.mc()?;
    let kappa = calibrate_kappa(&st, &mc)?;
    let sup = sup_growth(&st, &f, &a, kappa, points)?;
    let means = mean_value_ratios(&st, &f, &a, kappa, &mc)?;
    common.write_json(&json!({ "setting": { "n": st.n(), "m": st.m() }, "kappa": kappa, "supGrowth": sup, "meanValues": means }))?;
    Ok(0)
}

fn verify_cmd(common: &Common, checks: &Option<Vec<String>>, tolerances: &Option<PathBuf>) -> Outcome {
    let mut cfg = RunConfig::new(common.n, common.m)?;
    cfg.seed = common.seed;
    cfg.samples = common.samples;
    if let Some(c) = checks {
        let ids: Vec<&str> = c.iter().map(String::as_str).collect();
        cfg = cfg.with_checks(&ids)?;
    }
    if let Some(p) = tolerances {
        cfg.tolerances = Tolerances::from_file(p)?;
    }
    let report = run_verify_suite(&cfg)?;
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, common.out.as_deref())?;
    for c in report.checks.iter() {
        eprintln!("{:<9} {}", format!("{:?}", c.status).to_lowercase(), c.id);
    }
    Ok(report.exit_code())
}

fn catalog_cmd(common: &Common) -> Outcome {
    let st = common.setting()?;
    let entries: Vec<serde_json::Value> = catalog(&st)
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "summary": e.summary,
                "spec": e.spec,
                "reference": e.reference.to_reals(),
                "facts": e.facts,
                "provenance": e.provenance,
            })
        })
        .collect();
    match common.format {
        Format::Json => common.write_json(&json!({ "setting": { "n": st.n(), "m": st.m() }, "entries": entries }))?,
        Format::Csv => {
            let mut text = String::from("name,spec,lelong_at_pole,provenance\n");
            for e in catalog(&st) {
                let nu = e.facts.lelong_at_pole.map_or(String::new(), |v| format!("{v:.16e}"));
                let prov = serde_json::to_value(e.provenance).expect("provenance serializes");
                text.push_str(&format!("{},\"{}\",{},{}\n", e.name, e.spec, nu, prov.as_str().unwrap_or_default()));
            }
            emit(&text, common.out.as_deref())?
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Lelong { common, target, rmin, rmax, points } => lelong_cmd(common, target, *rmin, *rmax, *points),
        Command::Exponent { common, target, radius } => exponent_cmd(common, target, *radius),
        Command::Jensen { common, target, r1, r2 } => jensen_cmd(common, target, *r1, *r2),
        Command::Sup { common, target, points } => sup_cmd(common, target, *points),
        Command::Verify { common, checks, tolerances } => verify_cmd(common, checks, tolerances),
        Command::Catalog { common } => catalog_cmd(common),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
