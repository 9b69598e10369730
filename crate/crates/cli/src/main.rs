use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use betadiv_core::betapower::{density_f, g_eval, gb2_density};
use betadiv_core::classify::{classify, in_elp_region, region_grid, ClassificationReport};
use betadiv_core::levy::{
    count_sign_changes, jump_measure, killing_rate, psi_exact, rho, rho_prime_at_zero, tail_constant, HyperExpMixture,
    TailConstant,
};
use betadiv_core::sim::{ks_two_sample, sample_direct, simulate_gp_perpetuity, simulate_perpetuity, SampleBatch, SimConfig};
use betadiv_core::verify::{run_all, run_suite, VerificationReport, VerifyConfig};
use betadiv_core::{Error, Params};

#[derive(Parser)]
#[command(name = "betadiv", version, about = "Infinite divisibility of negative powers of Beta random variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Triple {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Membership verdicts for the six classes, with C1 and C2.
    Classify {
        #[command(flatten)]
        p: Triple,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate a density on a geometric grid as CSV.
    Density {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        p: Triple,
        #[arg(long, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary of the spectral side: killing rate, tail regime, jump measure.
    Levy {
        #[command(flatten)]
        p: Triple,
        /// Points at which to report the Laplace exponent.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
        u: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Draw samples of β^{-s} directly or through a perpetuity.
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Perpetuity)]
        mode: Mode,
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        stop_level: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exit status 1 if any case fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative distortion of ρ, for checking that the harness notices.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_rho: f64,
    },
    /// Verdict grid over (s, b) at fixed a, as CSV.
    Regions {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        b_max: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        s_max: f64,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Kind {
    F,
    G,
    Gb2,
    Rho,
    Nu,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Mode {
    Perpetuity,
    Direct,
    Gp,
}

#[derive(ValueEnum, Clone, Copy)]
enum Suite {
    Psi,
    Symmetry,
    Malmsten,
    Limits,
    Stieltjes,
    Thorin,
    Probes,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Psi => "psi",
            Suite::Symmetry => "symmetry",
            Suite::Malmsten => "malmsten",
            Suite::Limits => "limits",
            Suite::Stieltjes => "stieltjes",
            Suite::Thorin => "thorin",
            Suite::Probes => "probes",
            Suite::All => "all",
        }
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn params(t: Triple) -> Result<Params, Failure> {
    Params::new(t.a, t.b, t.s).map_err(|e| Failure::Usage(e.to_string()))
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) })
        .collect()
}

fn print_report(r: &ClassificationReport) {
    let q = r.params;
    println!("a = {}, b = {}, s = {}", q.a(), q.b(), q.s());
    for (name, v) in r.verdicts() {
        println!("{name:<4} {:<10} {}", v.status.to_string(), v.reason);
    }
    println!("C1 = {}", r.c1);
    println!("C2 = {}", r.c2);
}

fn run_classify(t: Triple, json: bool) -> Outcome {
    let r = classify(params(t)?);
    if json {
        println!("{}", serde_json::to_string_pretty(&r)?);
    } else {
        print_report(&r);
    }
    Ok(ExitCode::SUCCESS)
}

fn run_density(kind: Kind, t: Triple, x_min: f64, x_max: f64, points: usize, out: &Option<PathBuf>) -> Outcome {
    let q = params(t)?;
    if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) {
        return Err(Failure::Usage(format!("need 0 < x-min < x-max, got {x_min}, {x_max}")));
    }
    if points < 2 {
        return Err(Failure::Usage("points must be at least 2".into()));
    }
    let jm = match kind {
        Kind::Nu => Some(jump_measure(q)?),
        _ => None,
    };
    let eval = |x: f64| -> betadiv_core::Result<f64> {
        match kind {
            Kind::F => density_f(q, x),
            Kind::G => g_eval(q, x),
            Kind::Gb2 => gb2_density(q, x),
            Kind::Rho => rho(q, x),
            Kind::Nu => jm.as_ref().expect("built above").density(x),
        }
    };
    let rows = geometric_grid(x_min, x_max, points)
        .into_iter()
        .map(|x| Ok((x, eval(x)?)))
        .collect::<betadiv_core::Result<Vec<_>>>()?;
    let mut w = output(out)?;
    writeln!(w, "x,value")?;
    for (x, v) in rows {
        writeln!(w, "{x:.16e},{v:.16e}")?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LevySummary {
    params: Params,
    killing_rate: f64,
    rho_at_zero: f64,
    rho_prime_at_zero: f64,
    tail: TailConstant,
    rho_sign_changes: usize,
    in_elp_region: bool,
    jump_rate: Option<f64>,
    hyperexponential: Option<HyperExpMixture>,
    psi: Vec<(f64, f64)>,
}

fn run_levy(t: Triple, us: &[f64], json: bool) -> Outcome {
    let q = params(t)?;
    if us.iter().any(|u| !(u.is_finite() && *u >= 0.0)) {
        return Err(Failure::Usage("u values must be non-negative".into()));
    }
    let jm = if in_elp_region(q) { Some(jump_measure(q)?) } else { None };
    let summary = LevySummary {
        params: q,
        killing_rate: killing_rate(q),
        rho_at_zero: q.b() * q.s(),
        rho_prime_at_zero: rho_prime_at_zero(q),
        tail: tail_constant(q),
        rho_sign_changes: count_sign_changes(|x| rho(q, x).unwrap_or(f64::NAN), 1e-6, 60.0, 4000),
        in_elp_region: jm.is_some(),
        jump_rate: jm.as_ref().map(|j| j.total_rate()),
        hyperexponential: jm.as_ref().and_then(|j| j.closed_form().cloned()),
        psi: us.iter().map(|&u| Ok((u, psi_exact(q, u)?))).collect::<betadiv_core::Result<_>>()?,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        println!("a = {}, b = {}, s = {}", q.a(), q.b(), q.s());
        println!("killing rate        {}", summary.killing_rate);
        println!("rho(0)              {}", summary.rho_at_zero);
        println!("rho'(0)             {}", summary.rho_prime_at_zero);
        println!("tail                {:?} {}", summary.tail.kind, summary.tail.value);
        println!("rho sign changes    {}", summary.rho_sign_changes);
        match &summary.jump_rate {
            Some(r) => println!("jump rate           {r}"),
            None => println!("jump measure        not a measure: outside b ∧ s <= 1 <= 2a + b + s + bs"),
        }
        if let Some(m) = &summary.hyperexponential {
            for t in m.terms() {
                println!("  term              {} exp(-{} x)", t.weight, t.rate);
            }
        }
        for (u, v) in &summary.psi {
            println!("{:<20}{v}", format!("Psi({u})"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(a: f64, b: f64, s: f64, n: usize, seed: u64, mode: Mode, stop_level: f64, out: &Option<PathBuf>) -> Outcome {
    let q = params(Triple { a, b, s })?;
    let cfg = SimConfig::new(n, seed).with_stop_level(stop_level);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let batch = match mode {
        Mode::Direct => sample_direct(q, &cfg)?,
        Mode::Perpetuity => {
            if !in_elp_region(q) {
                return Err(Error::NotInElp { a, b, s }.into());
            }
            simulate_perpetuity(q, &cfg)?
        }
        Mode::Gp => {
            if s != 1.0 {
                return Err(Failure::Usage(format!("gp mode simulates β^-1 and needs s = 1, got {s}")));
            }
            if b <= 1.0 {
                return Err(Failure::Run(format!("gp mode needs b > 1, got {b}")));
            }
            simulate_gp_perpetuity(a, b, &cfg)?
        }
    };
    let comparison = if mode == Mode::Direct {
        None
    } else {
        let direct = sample_direct(q, &SimConfig::new(n, seed ^ 0x9e37_79b9_7f4a_7c15))?;
        Some(ks_two_sample(&batch, &direct)?)
    };
    write_batch(&batch, &cfg, out)?;
    let mut summary: Box<dyn Write> = if out.is_some() { Box::new(io::stdout()) } else { Box::new(io::stderr()) };
    writeln!(summary, "generator {}", batch.generator_label)?;
    writeln!(summary, "n {}", batch.values.len())?;
    writeln!(summary, "mean {:.10}", batch.mean())?;
    writeln!(summary, "se {:.10}", batch.standard_error())?;
    writeln!(summary, "truncation_bias_bound {:e}", batch.truncation_bias_bound)?;
    if let Some(ks) = comparison {
        writeln!(summary, "ks_vs_direct {:.6}", ks.statistic)?;
        writeln!(summary, "ks_critical_001 {:.6}", ks.critical_001)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn write_batch(batch: &SampleBatch, cfg: &SimConfig, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut w = output(out)?;
    writeln!(
        w,
        "# generator_label={},seed={},truncation_bias_bound={:e}",
        batch.generator_label, cfg.seed, batch.truncation_bias_bound
    )?;
    writeln!(w, "value")?;
    for v in &batch.values {
        writeln!(w, "{v:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    passed: bool,
    reports: &'a [VerificationReport],
}

fn run_verify(suite: Suite, out: &Option<PathBuf>, perturb_rho: f64) -> Outcome {
    if !perturb_rho.is_finite() {
        return Err(Failure::Usage("perturbation must be finite".into()));
    }
    let cfg = VerifyConfig { rho_perturbation: perturb_rho, ..VerifyConfig::default() };
    let reports = match suite {
        Suite::All => run_all(&cfg),
        one => vec![run_suite(one.name(), &cfg).expect("suite names match")],
    };
    let passed = reports.iter().all(|r| r.passed());
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, &VerifyOutput { passed, reports: &reports })?;
    writeln!(w)?;
    w.flush()?;
    for r in &reports {
        for c in r.failures() {
            eprintln!("FAIL [{}] {}: discrepancy {:e} > tolerance {:e}", r.suite, c.label, c.discrepancy, c.tolerance);
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_regions(a: f64, b_max: f64, s_max: f64, resolution: usize, out: &Option<PathBuf>) -> Outcome {
    if !(a > 0.0 && b_max > 0.0 && s_max > 0.0 && a.is_finite() && b_max.is_finite() && s_max.is_finite()) {
        return Err(Failure::Usage("a, b-max and s-max must be positive".into()));
    }
    if resolution < 16 {
        return Err(Failure::Usage(format!("resolution must be at least 16, got {resolution}")));
    }
    let cells = region_grid(a, b_max, s_max, resolution)?;
    let mut w = output(out)?;
    writeln!(w, "s,b,m,hcm,elp,sd,ggc")?;
    for c in cells {
        let r = &c.report;
        writeln!(
            w,
            "{:.16e},{:.16e},{},{},{},{},{}",
            c.s,
            c.b,
            r.m_class.status.code(),
            r.hcm_class.status.code(),
            r.elp_class.status.code(),
            r.sd_class.status.code(),
            r.ggc_class.status.code()
        )?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("BETADIV_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::Usage(format!("BETADIV_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Failure::Usage("BETADIV_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Classify { p, json } => run_classify(p, json),
        Command::Density { kind, p, x_min, x_max, points, out } => run_density(kind, p, x_min, x_max, points, &out),
        Command::Levy { p, u, json } => run_levy(p, &u, json),
        Command::Simulate { a, b, s, n, seed, mode, stop_level, out } => run_simulate(a, b, s, n, seed, mode, stop_level, &out),
        Command::Verify { suite, out, perturb_rho } => run_verify(suite, &out, perturb_rho),
        Command::Regions { a, b_max, s_max, resolution, out } => run_regions(a, b_max, s_max, resolution, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
