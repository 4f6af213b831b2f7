//! Command-line front end. Every number is printed as `{:.16e}` (17
//! significant digits) and output is a pure function of the flags.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::agm::{constants_for, EllipticConstants};
use crate::error::{Error, Result};
use crate::landen::{build_chain, r_infinity, Decomposition, DeepDecomposition, Step4, MAX_DECOMPOSITION_DEPTH};
use crate::oracle::{integrate_at, IntegratorConfig};
use crate::pendulum::{Method, PendulumParams};
use crate::series::{elegantissima_partial_sum, theta_circ_at, theta_osc_at};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// Header shared by `trajectory` and `compare`.
pub const CSV_HEADER: &str = "t,theta_closed,theta_series,theta_ode,err_series,err_ode";

/// RK4 steps per period for the `ode` method.
const ODE_STEPS_PER_PERIOD: u32 = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "pendulum-elliptic",
    version,
    about = "Exact pendulum motions, nome series and Landen chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print k, k′, K, K′, q, q′.
    Constants {
        #[arg(long)]
        k: f64,
    },
    /// Sample θ(t) with the selected methods.
    Trajectory(TrajectoryArgs),
    /// Sample θ(t) and report absolute errors against the closed form.
    Compare(TrajectoryArgs),
    /// Partial sums of the arctan series for arcsin(k)/4.
    Elegantissima {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
    /// Landen chain table and decomposition residuals of a revolution.
    Landen {
        #[arg(long)]
        k: f64,
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Sample times per residual sweep.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Osc,
    Circ,
}

/// A time given in seconds or as a multiple of the period, e.g. `T`, `-0.5T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeArg {
    Seconds(f64),
    Periods(f64),
}

impl TimeArg {
    fn resolve(self, period: f64) -> f64 {
        match self {
            TimeArg::Seconds(s) => s,
            TimeArg::Periods(p) => p * period,
        }
    }
}

impl FromStr for TimeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("`{s}` is neither seconds nor a multiple of T");
        match s.strip_suffix('T') {
            Some("") | Some("+") => Ok(TimeArg::Periods(1.0)),
            Some("-") => Ok(TimeArg::Periods(-1.0)),
            Some(coeff) => coeff.parse().map(TimeArg::Periods).map_err(|_| bad()),
            None => s.parse().map(TimeArg::Seconds).map_err(|_| bad()),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct TrajectoryArgs {
    #[arg(long, value_enum)]
    regime: RegimeArg,
    #[arg(long)]
    k: f64,
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    t0: TimeArg,
    #[arg(long, default_value = "T", allow_hyphen_values = true)]
    t1: TimeArg,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Comma-separated subset of closed,series,ode, or `all`.
    #[arg(long, default_value = "all")]
    methods: String,
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Validated settings of a `trajectory` or `compare` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub regime: RegimeArg,
    pub k: f64,
    pub r: f64,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub methods: Vec<Method>,
    pub tol: f64,
}

enum Failure {
    Usage(String),
    Library(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_methods(list: &str) -> std::result::Result<Vec<Method>, String> {
    if list == "all" {
        return Ok(vec![Method::Closed, Method::Series, Method::Ode]);
    }
    let mut methods = Vec::new();
    for part in list.split(',') {
        let m: Method = part.trim().parse().map_err(|e: Error| e.to_string())?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    Ok(methods)
}

fn motion(regime: RegimeArg, k: f64, r: f64) -> Result<PendulumParams> {
    match regime {
        RegimeArg::Osc => PendulumParams::oscillatory(k, r),
        RegimeArg::Circ => PendulumParams::circulatory(k, r),
    }
}

impl RunConfig {
    fn from_args(args: &TrajectoryArgs) -> std::result::Result<Self, Failure> {
        let methods = parse_methods(&args.methods).map_err(Failure::Usage)?;
        if args.samples < 2 {
            return Err(Failure::Usage(format!("--samples must be ≥ 2, got {}", args.samples)));
        }
        if !(1e-14..=1e-3).contains(&args.tol) {
            return Err(Failure::Usage(format!("--tol must lie in [1e-14, 1e-3], got {}", args.tol)));
        }
        let period = motion(args.regime, args.k, args.r)?.period()?;
        let (t0, t1) = (args.t0.resolve(period), args.t1.resolve(period));
        if !(t0 < t1) {
            return Err(Failure::Usage(format!("--t0 ({t0}) must be below --t1 ({t1})")));
        }
        Ok(Self {
            regime: args.regime,
            k: args.k,
            r: args.r,
            t0,
            t1,
            samples: args.samples,
            methods,
            tol: args.tol,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        let n = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| self.t0 + (self.t1 - self.t0) * i as f64 / n)
            .collect()
    }
}

/// θ columns for every selected method, in `Method` order.
struct Columns {
    closed: Option<Vec<f64>>,
    series: Option<Vec<f64>>,
    ode: Option<Vec<f64>>,
}

fn evaluate(cfg: &RunConfig, times: &[f64]) -> Result<Columns> {
    let params = motion(cfg.regime, cfg.k, cfg.r)?;
    let constants: EllipticConstants = *params.constants().expect("elliptic regime");
    let closed = cfg
        .methods
        .contains(&Method::Closed)
        .then(|| times.iter().map(|&t| params.theta(t)).collect());
    let series = if cfg.methods.contains(&Method::Series) {
        let eval = match cfg.regime {
            RegimeArg::Osc => theta_osc_at,
            RegimeArg::Circ => theta_circ_at,
        };
        Some(
            times
                .iter()
                .map(|&t| eval(t, &constants, cfg.r, cfg.tol))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let ode = if cfg.methods.contains(&Method::Ode) {
        let config = IntegratorConfig::per_period(params.period()?, ODE_STEPS_PER_PERIOD)?;
        Some(integrate_at(params.initial_velocity(), cfg.r, times, config)?.theta)
    } else {
        None
    };
    Ok(Columns { closed, series, ode })
}

fn cell(col: &Option<Vec<f64>>, i: usize) -> String {
    col.as_ref().map(|v| num(v[i])).unwrap_or_default()
}

fn trajectory_csv(cfg: &RunConfig, with_errors: bool) -> Result<String> {
    let times = cfg.times();
    let cols = evaluate(cfg, &times)?;
    let err = |other: &Option<Vec<f64>>, i: usize| -> Option<f64> {
        match (with_errors, &cols.closed, other) {
            (true, Some(c), Some(o)) => Some((o[i] - c[i]).abs()),
            _ => None,
        }
    };
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let (mut max_series, mut max_ode): (Option<f64>, Option<f64>) = (None, None);
    for (i, &t) in times.iter().enumerate() {
        let es = err(&cols.series, i);
        let eo = err(&cols.ode, i);
        max_series = es.map(|e| max_series.map_or(e, |m: f64| m.max(e)));
        max_ode = eo.map(|e| max_ode.map_or(e, |m: f64| m.max(e)));
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(t),
            cell(&cols.closed, i),
            cell(&cols.series, i),
            cell(&cols.ode, i),
            es.map(num).unwrap_or_default(),
            eo.map(num).unwrap_or_default(),
        )
        .expect("write to string");
    }
    if with_errors {
        writeln!(
            out,
            "max_abs_error,,,,{},{}",
            max_series.map(num).unwrap_or_default(),
            max_ode.map(num).unwrap_or_default()
        )
        .expect("write to string");
    }
    Ok(out)
}

fn constants_table(k: f64) -> Result<String> {
    let c = constants_for(k)?;
    let rows = [
        ("k", c.k()),
        ("k_prime", c.k_prime()),
        ("K", c.quarter_period),
        ("K_prime", c.quarter_period_prime),
        ("q", c.nome),
        ("q_prime", c.nome_prime),
    ];
    let mut out = String::from("quantity,value\n");
    for (name, v) in rows {
        writeln!(out, "{name},{}", num(v)).expect("write to string");
    }
    Ok(out)
}

fn elegantissima_table(k: f64, terms: usize) -> Result<String> {
    let nome = constants_for(k)?.nome;
    let target = k.asin() / 4.0;
    let mut out = String::from("n,partial_sum,tail_bound,abs_error\n");
    for n in 1..=terms {
        let s = elegantissima_partial_sum(nome, n)?;
        writeln!(
            out,
            "{n},{},{},{}",
            num(s.value),
            num(s.tail_bound),
            num((s.value - target).abs())
        )
        .expect("write to string");
    }
    writeln!(out, "arcsin_k_over_4,{},,", num(target)).expect("write to string");
    Ok(out)
}

fn max_over(samples: usize, t0: f64, t1: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = (samples.max(2) - 1) as f64;
    (0..samples.max(2))
        .map(|i| f(t0 + (t1 - t0) * i as f64 / n))
        .fold(0.0, f64::max)
}

fn landen_table(k: f64, r: f64, depth: usize, samples: usize) -> Result<String> {
    let chain = build_chain(k, r, depth)?;
    let mut out = String::from("j,k_j,k_prime_j,R_j,T_j,a_j,b_j\n");
    for j in 0..=chain.depth() {
        writeln!(
            out,
            "{j},{},{},{},{},{},{}",
            num(chain.k_seq[j]),
            num(chain.k_prime_seq[j]),
            num(chain.r_seq[j]),
            num(chain.t_seq[j]),
            num(chain.a_seq[j]),
            num(chain.b_seq[j])
        )
        .expect("write to string");
    }
    writeln!(out, "R_infinity,{}", num(r_infinity(k, r)?)).expect("write to string");

    out.push_str("\ncheck,max_residual\n");
    let pair = Decomposition::new(k, r)?;
    let t1 = pair.next.period()?;
    let dcirc = max_over(samples, 0.0, 2.0 * t1, |t| pair.residual(t));
    writeln!(out, "two_revolutions,{}", num(dcirc)).expect("write to string");
    for d in 1..=MAX_DECOMPOSITION_DEPTH {
        // Deep levels can push k_j′ below the representable margin.
        let value = match DeepDecomposition::new(k, r, d) {
            Ok(deep) => {
                let period = deep.base.period()?;
                num(max_over(samples, -period, 2.0 * period, |t| deep.residual(t)))
            }
            Err(Error::Domain(_)) => String::new(),
            Err(e) => return Err(e),
        };
        writeln!(out, "depth_{d},{value}").expect("write to string");
    }
    let step4 = Step4::new(chain_level_one(k)?, r / k)?;
    let period = step4.oscillation.period()?;
    let s4 = max_over(samples, -period, period, |t| step4.residual(t));
    writeln!(out, "counter_running,{}", num(s4)).expect("write to string");
    Ok(out)
}

fn chain_level_one(k: f64) -> Result<f64> {
    Ok(crate::landen::ascend_modulus(k)?.0)
}

fn emit(text: &str, output: &Option<PathBuf>, out: &mut dyn Write) -> io::Result<()> {
    match output {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Constants { k } => emit(&constants_table(k)?, &None, out)?,
        Command::Trajectory(args) => {
            let cfg = RunConfig::from_args(&args)?;
            emit(&trajectory_csv(&cfg, false)?, &args.output, out)?;
        }
        Command::Compare(args) => {
            let cfg = RunConfig::from_args(&args)?;
            if !cfg.methods.contains(&Method::Closed) || cfg.methods.len() < 2 {
                return Err(Failure::Usage(
                    "compare needs `closed` and at least one other method".into(),
                ));
            }
            emit(&trajectory_csv(&cfg, true)?, &args.output, out)?;
        }
        Command::Elegantissima { k, terms } => {
            if terms == 0 {
                return Err(Failure::Usage("--terms must be ≥ 1".into()));
            }
            emit(&elegantissima_table(k, terms)?, &None, out)?;
        }
        Command::Landen {
            k,
            r,
            depth,
            samples,
            output,
        } => emit(&landen_table(k, r, depth, samples)?, &output, out)?,
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 success, 2 flag error, 3 domain error, 4 convergence error.
pub fn run<S: AsRef<str>>(args: &[S], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                eprint!("{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) => EXIT_DOMAIN,
                Error::Convergence(_) | Error::Resource(_) => EXIT_CONVERGENCE,
            }
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["pendulum-elliptic"];
        full.extend_from_slice(args);
        let code = run(&full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn time_arguments() {
        assert_eq!("T".parse::<TimeArg>().unwrap(), TimeArg::Periods(1.0));
        assert_eq!("-T".parse::<TimeArg>().unwrap(), TimeArg::Periods(-1.0));
        assert_eq!("2.5T".parse::<TimeArg>().unwrap(), TimeArg::Periods(2.5));
        assert_eq!("-0.3".parse::<TimeArg>().unwrap(), TimeArg::Seconds(-0.3));
        assert!("xT".parse::<TimeArg>().is_err());
    }

    #[test]
    fn method_lists() {
        assert_eq!(parse_methods("all").unwrap().len(), 3);
        assert_eq!(parse_methods("closed,series,closed").unwrap(), vec![Method::Closed, Method::Series]);
        assert!(parse_methods("closed,euler").is_err());
    }

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(num(-0.00125), "-1.2500000000000000e-3");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["constants", "--k", "0.5"]).0, EXIT_OK);
        assert_eq!(call(&["constants", "--bogus", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["constants", "--k", "1.5"]).0, EXIT_DOMAIN);
        assert_eq!(call(&["trajectory", "--regime", "osc", "--k", "0.5", "--samples", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["trajectory", "--regime", "osc", "--k", "0.5", "--tol", "1e-20"]).0, EXIT_USAGE);
        assert_eq!(call(&["trajectory", "--regime", "osc", "--k", "0.5", "--t0", "T", "--t1", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["compare", "--regime", "osc", "--k", "0.5", "--methods", "series,ode"]).0, EXIT_USAGE);
        assert_eq!(call(&["elegantissima", "--k", "0.5", "--terms", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["landen", "--k", "0.5", "--depth", "41"]).0, EXIT_DOMAIN);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn trajectory_leaves_error_columns_empty() {
        let (code, text) = call(&[
            "trajectory", "--regime", "circ", "--k", "0.6", "--samples", "3", "--methods", "closed,ode",
        ]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 6);
        assert!(fields[2].is_empty() && fields[4].is_empty() && fields[5].is_empty());
        assert_eq!(fields[1], num(std::f64::consts::PI));
    }

    #[test]
    fn landen_table_shape() {
        let (code, text) = call(&["landen", "--k", "0.5", "--depth", "4", "--samples", "20"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.starts_with("j,k_j,k_prime_j,R_j,T_j,a_j,b_j\n"));
        assert!(text.contains("R_infinity,"));
        for label in ["two_revolutions,", "depth_1,", "depth_2,", "depth_3,", "counter_running,"] {
            let line = text.lines().find(|l| l.starts_with(label)).unwrap();
            let v: f64 = line[label.len()..].parse().unwrap();
            assert!(v <= 1e-8, "{line}");
        }
    }
}
