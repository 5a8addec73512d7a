//! Command-line interface for the hard-wall ensemble library: exact kernel
//! evaluation, asymptotic predictions, figure diagnostics, exact sampling,
//! reference integrals, and the self-test battery.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardwall::asymptotics::{
    integral_i, integrals_i1_to_i4, predict_hard_micro, predict_r1r1_macro, predict_r1r2_macro,
    predict_semi_hard_micro,
};
use hardwall::model::equilibrium;
use hardwall::specfun::AccuracyConfig;
use hardwall::{
    default_n_grid, figure_diag, sample_configuration, selftest, FigureKind, Kernel, ModelParams,
    PlanePoint, Prediction, SampleConfig, Scenario, SelfTestLevel,
};
use serde_json::json;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

/// Hard-wall Mittag-Leffler ensemble: kernels, asymptotics, sampling.
#[derive(Parser)]
#[command(name = "hardwall", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the exact finite-n kernel K_n(z, w) at two points.
    EvalKernel(EvalKernelArgs),
    /// Evaluate an asymptotic kernel prediction and its term breakdown.
    Predict(PredictArgs),
    /// Tabulate a figure diagnostic over a grid of n into a CSV file.
    Figure(FigureArgs),
    /// Draw one exact n-point configuration into a CSV file.
    Sample(SampleArgs),
    /// Print the reference integrals and their identity residuals as JSON.
    Integrals,
    /// Run the invariant battery; exit nonzero if any check fails.
    Selftest(SelftestArgs),
}

/// Ensemble parameters shared by the subcommands. The rim radii can be
/// given either as fractions of the droplet radius b^(-1/(2b)) or as
/// absolute values; mixing the two forms is rejected.
#[derive(Args)]
struct ModelFlags {
    /// Exponent of the radial confinement |z|^(2b).
    #[arg(long, default_value_t = 1.3)]
    b: f64,
    /// Weight of the point charge at the origin (> -1).
    #[arg(long, default_value_t = 1.26)]
    alpha: f64,
    /// Inner rim as a fraction of the droplet radius [default: 0.42].
    #[arg(long = "r1-frac", value_name = "F")]
    r1_frac: Option<f64>,
    /// Outer rim as a fraction of the droplet radius [default: 0.67].
    #[arg(long = "r2-frac", value_name = "F")]
    r2_frac: Option<f64>,
    /// Inner rim radius (absolute; requires --r2).
    #[arg(long, value_name = "F")]
    r1: Option<f64>,
    /// Outer rim radius (absolute; requires --r1).
    #[arg(long, value_name = "F")]
    r2: Option<f64>,
}

impl ModelFlags {
    /// Build validated parameters. `require_radii` makes one of the two
    /// radius pairs mandatory (eval-kernel); otherwise missing fractions
    /// fall back to the reference configuration 0.42/0.67.
    fn resolve(&self, n: usize, require_radii: bool) -> Result<ModelParams, String> {
        let absolute = self.r1.is_some() || self.r2.is_some();
        let fractional = self.r1_frac.is_some() || self.r2_frac.is_some();
        if absolute && fractional {
            return Err("give either --r1-frac/--r2-frac or --r1/--r2, not both".into());
        }
        if absolute {
            let (Some(r1), Some(r2)) = (self.r1, self.r2) else {
                return Err("absolute radii need both --r1 and --r2".into());
            };
            return ModelParams::new(self.b, self.alpha, r1, r2, n).map_err(|e| e.to_string());
        }
        if require_radii && !fractional {
            return Err("this subcommand needs --r1-frac/--r2-frac or --r1/--r2".into());
        }
        let f1 = self.r1_frac.unwrap_or(0.42);
        let f2 = self.r2_frac.unwrap_or(0.67);
        if require_radii && (self.r1_frac.is_none() || self.r2_frac.is_none()) {
            return Err("fractional radii need both --r1-frac and --r2-frac".into());
        }
        ModelParams::from_fractions(self.b, self.alpha, f1, f2, n).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct EvalKernelArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Number of particles.
    #[arg(long)]
    n: usize,
    /// First point as R,THETA (modulus, angle in radians).
    #[arg(long, value_name = "R,THETA", value_parser = parse_point, allow_hyphen_values = true)]
    z: PlanePoint,
    /// Second point as R,THETA.
    #[arg(long, value_name = "R,THETA", value_parser = parse_point, allow_hyphen_values = true)]
    w: PlanePoint,
    /// Emit JSON instead of human-readable text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremId {
    /// Hard-edge microscopic pair (diagonal angles).
    #[value(name = "1.1")]
    HardMicro,
    /// Semi-hard microscopic pair (diagonal angles).
    #[value(name = "1.2")]
    SemiHardMicro,
    /// Inner-outer wall pair at macroscopic angle separation.
    #[value(name = "1.3")]
    R1R2Macro,
    /// Same-wall pair at macroscopic angle separation.
    #[value(name = "1.4")]
    R1R1Macro,
}

#[derive(Args)]
struct PredictArgs {
    /// Which asymptotic result to evaluate.
    #[arg(long, value_enum)]
    theorem: TheoremId,
    /// Hard-edge depth of the first point (theorems 1.1, 1.3, 1.4).
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Hard-edge depth of the second point (theorems 1.1, 1.3, 1.4).
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<f64>,
    /// Semi-hard depth of the first point (theorem 1.2).
    #[arg(long, allow_hyphen_values = true)]
    s1: Option<f64>,
    /// Semi-hard depth of the second point (theorem 1.2).
    #[arg(long, allow_hyphen_values = true)]
    s2: Option<f64>,
    /// Angle of the first point in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta1: f64,
    /// Angle of the second point in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta2: f64,
    /// Number of particles.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct FigureArgs {
    /// Which diagnostic to tabulate.
    #[arg(long, value_parser = clap::value_parser!(FigureKind))]
    which: FigureKind,
    /// Comma-separated ascending n values [default: 256,362,...,4096].
    #[arg(long = "n-grid", value_name = "CSV-INTS", value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    #[command(flatten)]
    model: ModelFlags,
    /// Output CSV path.
    #[arg(long, value_name = "PATH.csv")]
    out: String,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of particles.
    #[arg(long)]
    n: usize,
    /// RNG seed (the configuration is a deterministic function of it).
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    model: ModelFlags,
    /// Output CSV path.
    #[arg(long, value_name = "PATH.csv")]
    out: String,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run the full battery (figure grids, sampler statistics) instead of
    /// the quick one.
    #[arg(long)]
    full: bool,
}

fn parse_point(s: &str) -> Result<PlanePoint, String> {
    let (r_str, theta_str) = s
        .split_once(',')
        .ok_or_else(|| format!("expected R,THETA, got '{s}'"))?;
    let r: f64 = r_str
        .trim()
        .parse()
        .map_err(|e| format!("bad modulus '{r_str}': {e}"))?;
    let theta: f64 = theta_str
        .trim()
        .parse()
        .map_err(|e| format!("bad angle '{theta_str}': {e}"))?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(format!("modulus must be finite and >= 0, got {r}"));
    }
    if !theta.is_finite() {
        return Err(format!("angle must be finite, got {theta}"));
    }
    Ok(PlanePoint { r, theta })
}

/// 17-significant-digit float for CSV cells.
fn csv_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::EvalKernel(args) => cmd_eval_kernel(&args),
        Command::Predict(args) => cmd_predict(&args),
        Command::Figure(args) => cmd_figure(&args),
        Command::Sample(args) => cmd_sample(&args),
        Command::Integrals => cmd_integrals(),
        Command::Selftest(args) => return cmd_selftest(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_eval_kernel(args: &EvalKernelArgs) -> Result<(), String> {
    let params = args.model.resolve(args.n, true)?;
    let kernel = Kernel::new(params);
    let eval = kernel.kernel_eval(&args.z, &args.w);
    if args.json {
        let out = json!({
            "value_re": eval.value.re,
            "value_im": eval.value.im,
            "n": args.n,
            "terms_summed": eval.terms_summed,
            "dropped_terms": eval.dropped_terms,
            "max_term_log": eval.max_term_log,
        });
        println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
    } else {
        println!(
            "K_{}(z, w) = {:+.16e} {:+.16e} i",
            args.n, eval.value.re, eval.value.im
        );
        println!(
            "summed {} of {} modes (largest log-magnitude {:.3}, {} dropped)",
            eval.terms_summed, args.n, eval.max_term_log, eval.dropped_terms
        );
    }
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> Result<(), String> {
    let params = ModelFlags {
        b: 1.3,
        alpha: 1.26,
        r1_frac: None,
        r2_frac: None,
        r1: None,
        r2: None,
    }
    .resolve(args.n, false)?;
    let eq = equilibrium(&params);
    let depth_pair = |a: Option<f64>, b: Option<f64>, name: &str| -> Result<(f64, f64), String> {
        match (a, b) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(format!("this theorem needs both --{name}1 and --{name}2")),
        }
    };
    let forbid = |a: Option<f64>, name: &str| -> Result<(), String> {
        if a.is_some() {
            Err(format!("--{name} does not apply to this theorem"))
        } else {
            Ok(())
        }
    };
    let prediction: Prediction = match args.theorem {
        TheoremId::HardMicro => {
            forbid(args.s1, "s1")?;
            forbid(args.s2, "s2")?;
            let (t1, t2) = depth_pair(args.t1, args.t2, "t")?;
            if args.theta1 != args.theta2 {
                return Err("theorem 1.1 is a diagonal-angle result; \
                            --theta1 must equal --theta2"
                    .into());
            }
            predict_hard_micro(&params, &eq, t1, t2)
        }
        TheoremId::SemiHardMicro => {
            forbid(args.t1, "t1")?;
            forbid(args.t2, "t2")?;
            let (s1, s2) = depth_pair(args.s1, args.s2, "s")?;
            if args.theta1 != args.theta2 {
                return Err("theorem 1.2 is a diagonal-angle result; \
                            --theta1 must equal --theta2"
                    .into());
            }
            predict_semi_hard_micro(&params, &eq, s1, s2).map_err(|e| e.to_string())?
        }
        TheoremId::R1R2Macro => {
            forbid(args.s1, "s1")?;
            forbid(args.s2, "s2")?;
            let (t1, t2) = depth_pair(args.t1, args.t2, "t")?;
            predict_r1r2_macro(&params, &eq, t1, t2, args.theta1, args.theta2)
                .map_err(|e| e.to_string())?
        }
        TheoremId::R1R1Macro => {
            forbid(args.s1, "s1")?;
            forbid(args.s2, "s2")?;
            let (t1, t2) = depth_pair(args.t1, args.t2, "t")?;
            predict_r1r1_macro(&params, &eq, t1, t2, args.theta1, args.theta2)
                .map_err(|e| e.to_string())?
        }
    };
    let breakdown: serde_json::Map<String, serde_json::Value> = prediction
        .breakdown
        .iter()
        .map(|(name, v)| (name.clone(), json!({ "re": v.re, "im": v.im })))
        .collect();
    let out = json!({
        "value_re": prediction.value.re,
        "value_im": prediction.value.im,
        "breakdown": breakdown,
        "error_order": prediction.error_order,
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
    Ok(())
}

fn cmd_figure(args: &FigureArgs) -> Result<(), String> {
    let grid = args.n_grid.clone().unwrap_or_else(default_n_grid);
    let base = args.model.resolve(*grid.first().ok_or("empty n grid")?, false)?;
    let scenario = Scenario::default_for(args.which);
    let rows = figure_diag(args.which, &base, &scenario, &grid).map_err(|e| e.to_string())?;
    let mut csv = String::new();
    csv.push_str("n,exact_re,exact_im,predicted_re,predicted_im,diagnostic,wall_time_ms\n");
    for row in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            row.n,
            csv_f64(row.exact.re),
            csv_f64(row.exact.im),
            csv_f64(row.predicted.re),
            csv_f64(row.predicted.im),
            csv_f64(row.diagnostic),
            csv_f64(row.wall_time_ms),
        );
    }
    fs::write(&args.out, csv).map_err(|e| format!("writing {}: {e}", args.out))?;
    println!(
        "{}: {} rows ({}) -> {}",
        args.which,
        rows.len(),
        args.which.diagnostic_label(),
        args.out
    );
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<(), String> {
    let params = args.model.resolve(args.n, false)?;
    let kernel = Kernel::new(params);
    let config = SampleConfig::new(args.seed, args.n);
    let points = sample_configuration(&kernel, &config).map_err(|e| e.to_string())?;
    let mut csv = String::new();
    csv.push_str("j,r,theta,x,y\n");
    for (idx, p) in points.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            idx + 1,
            csv_f64(p.r),
            csv_f64(p.theta),
            csv_f64(p.r * p.theta.cos()),
            csv_f64(p.r * p.theta.sin()),
        );
    }
    fs::write(&args.out, csv).map_err(|e| format!("writing {}: {e}", args.out))?;
    println!("{} points (seed {}) -> {}", points.len(), args.seed, args.out);
    Ok(())
}

fn cmd_integrals() -> Result<(), String> {
    let cfg = AccuracyConfig::default();
    let i = integral_i(&cfg).map_err(|e| e.to_string())?;
    let (i1, i2, i3, i4) = integrals_i1_to_i4(&cfg).map_err(|e| e.to_string())?;
    let out = json!({
        "I": i,
        "I1": i1,
        "I2": i2,
        "I3": i3,
        "I4": i4,
        "identity_residuals": {
            "I1_minus_half_log_2sqrtpi": i1 - 0.5 * (2.0 * PI.sqrt()).ln(),
            "I3_minus_I": i3 - i,
            "I4_minus_I2_plus_I": i4 - (i2 - i),
        },
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
    Ok(())
}

fn cmd_selftest(args: &SelftestArgs) -> ExitCode {
    let level = if args.full {
        SelfTestLevel::Full
    } else {
        SelfTestLevel::Quick
    };
    let report = selftest(level);
    print!("{report}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
