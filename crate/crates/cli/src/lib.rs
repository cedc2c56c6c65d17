//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code: 0 on success, 2 on usage errors, 1 on
//! runtime failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};

use clap::{Args, Parser, Subcommand};
use dilution_core::noise::prior_of;
use dilution_core::oracle::{
    cavity_discrepancy_closed, cavity_discrepancy_exact, error_correcting_radius_capped,
    theorem_lower_bound,
};
use dilution_core::sim::{
    iteration_histogram, nonconvergence_sweep, parse_grid, run_sweep_with, EpsChoice,
    PatternChoice, CSV_HEADER,
};
use dilution_core::strip::BlockExperimentResult;
use dilution_core::{
    block_experiment, sparsify, xz_coupling, Decoder, DecoderConfig, Error, MpMode, NoiseKind,
    NoiseModel, PatternFamily, PhiMode, Prior, SparsificationPattern, SurfaceCode, SweepSpec,
    Syndrome, TieRule,
};

#[derive(Parser, Debug)]
#[command(
    name = "dilution",
    version,
    about = "Surface-code decoding with graph dilution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo sweep over distances and error rates, written as CSV.
    Sweep(SweepArgs),
    /// Decode one syndrome read from a file or stdin and print the result as JSON.
    Decode(DecodeArgs),
    /// Exhaustive single-X error-correcting radius of a diluted lattice, as JSON.
    Radius(RadiusArgs),
    /// Cavity discrepancy of the X/Z coupling for a grid of priors, as CSV.
    Cavity(CavityArgs),
    /// Block-to-cell experiment on the ladder strip, as CSV.
    Strip(StripArgs),
    /// Export a diluted decoding graph as DOT or an edge list.
    Graph(GraphArgs),
}

#[derive(Args, Debug)]
struct DecoderFlags {
    /// Noise model: x (single-X) or depolarizing.
    #[arg(long, default_value = "depolarizing")]
    noise: String,
    /// Pattern family: dv, dh, cv, ch, or auto (dv for depolarizing, ch for x).
    #[arg(long, default_value = "auto")]
    pattern: String,
    /// Damping: auto, one value, or per-distance pairs such as `5=0.15,33=0.1`.
    #[arg(long, default_value = "auto")]
    eps: String,
    /// Message-passing rule: minsum or sumproduct.
    #[arg(long, default_value = "minsum")]
    mode: String,
    /// Correlation message: max or sum.
    #[arg(long, default_value = "max")]
    phi: String,
    /// Total iteration cap (default 10(K+1)(K+2)).
    #[arg(long)]
    budget: Option<usize>,
    /// Decode on the full graph only, with the whole budget.
    #[arg(long)]
    no_dilution: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Distances, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    /// Error rates: a single value, a comma list, or start:stop:step.
    #[arg(long, required = true)]
    p: String,
    #[command(flatten)]
    decoder: DecoderFlags,
    /// Trials per (d, p) point.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the four dilution/damping variants instead of one configuration.
    #[arg(long, conflicts_with = "histogram")]
    nonconv: bool,
    /// Emit an iteration histogram (`iterations,count`) for a single (d, p).
    #[arg(long)]
    histogram: bool,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    d: usize,
    /// Error rate used for the prior.
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    decoder: DecoderFlags,
    /// Syndrome file, or `-` for stdin. Whitespace-separated bits, Z-checks
    /// then X-checks, each in row-major order.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct RadiusArgs {
    #[arg(long)]
    d: usize,
    /// Pattern family: dv, dh, cv or ch.
    #[arg(long)]
    pattern: String,
    /// Sparsification ratio.
    #[arg(long)]
    s: usize,
    /// Largest error weight to enumerate (default floor((d-1)/2) + 1).
    #[arg(long)]
    max_weight: Option<usize>,
    /// Tie rule: strict (a tie counts as a failure) or favorable.
    #[arg(long, default_value = "strict")]
    ties: String,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct CavityArgs {
    /// Depolarizing rates: a single value, a comma list, or start:stop:step.
    #[arg(long, conflicts_with = "prior")]
    p: Option<String>,
    /// Explicit prior `p_I,p_X,p_Y,p_Z`.
    #[arg(long, value_delimiter = ',')]
    prior: Option<Vec<f64>>,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct StripArgs {
    /// Stage of the block.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Input block weights, comma separated.
    #[arg(long = "nb", value_delimiter = ',', required = true)]
    n_b: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Weight of samples whose decimated rung is correct.
    #[arg(long, default_value_t = 1.0)]
    w_corr: f64,
    /// Weight of samples whose decimated rung is wrong.
    #[arg(long, default_value_t = 1.0)]
    w_wrong: f64,
    /// Prior error rate seen by the decoder.
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    d: usize,
    /// Pattern family: dv, dh, cv or ch.
    #[arg(long, default_value = "dv")]
    pattern: String,
    /// Sparsification ratio (0 keeps the full graph).
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// dot or edges.
    #[arg(long, default_value = "edges")]
    format: String,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Config(_)
            | Error::InvalidDistance(_)
            | Error::InvalidRatio { .. }
            | Error::InvalidProbability(_)
            | Error::InvalidPrior(_)
            | Error::UnknownFormat(_)
            | Error::NotApplicable(_)
            | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse `args` (including the program name), run the subcommand and return
/// the exit code. Output sent to `-` goes to `stdout`; `-` as input reads `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
            } else {
                let _ = e.print();
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a, stdout),
        Command::Decode(a) => decode(a, stdin, stdout),
        Command::Radius(a) => radius(a, stdout),
        Command::Cavity(a) => cavity(a, stdout),
        Command::Strip(a) => strip(a, stdout),
        Command::Graph(a) => graph(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn open_out<'a>(path: &str, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    if path == "-" {
        Ok(Box::new(stdout))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> CliResult<T> {
    Ok(s.parse::<T>()?)
}

struct Resolved {
    noise: NoiseKind,
    pattern: PatternChoice,
    eps: EpsChoice,
    mode: MpMode,
    phi: PhiMode,
}

fn resolve(flags: &DecoderFlags) -> CliResult<Resolved> {
    Ok(Resolved {
        noise: parse(&flags.noise)?,
        pattern: parse(&flags.pattern)?,
        eps: parse(&flags.eps)?,
        mode: parse(&flags.mode)?,
        phi: parse(&flags.phi)?,
    })
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let r = resolve(&a.decoder)?;
    let mut spec = SweepSpec::new(a.d.clone(), parse_grid(&a.p)?, r.noise, a.trials);
    spec.pattern = r.pattern;
    spec.eps = r.eps;
    spec.seed = a.seed;
    spec.mode = r.mode;
    spec.phi_mode = r.phi;
    spec.budget = a.decoder.budget;
    spec.dilution = !a.decoder.no_dilution;
    spec.validate()?;
    let mut out = open_out(&a.out, stdout)?;

    if a.histogram {
        if spec.distances.len() != 1 || spec.ps.len() != 1 {
            return Err(Failure::Usage(
                "--histogram needs exactly one distance and one p".into(),
            ));
        }
        let h = iteration_histogram(&spec, spec.distances[0], spec.ps[0])?;
        let starts: Vec<String> = h.stage_starts.iter().map(|s| s.to_string()).collect();
        writeln!(
            out,
            "# d {} p {} nonconverged {} stage_starts {}",
            h.d,
            h.p,
            h.nonconverged,
            starts.join(",")
        )?;
        writeln!(out, "iterations,count")?;
        for (i, c) in h.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            writeln!(out, "{i},{c}")?;
        }
        out.flush()?;
        return Ok(());
    }

    writeln!(out, "{CSV_HEADER}")?;
    if a.nonconv {
        for row in nonconvergence_sweep(&spec)? {
            writeln!(out, "{}", row.csv_row())?;
        }
    } else {
        let mut io_err = None;
        run_sweep_with(&spec, |row| {
            let written = writeln!(out, "{}", row.csv_row()).and_then(|_| out.flush());
            if let Err(e) = written {
                io_err = Some(e);
                return Err(Error::Config("output closed".into()));
            }
            Ok(())
        })
        .map_err(|e| match io_err.take() {
            Some(io) => Failure::from(io),
            None => Failure::from(e),
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Whitespace-separated 0/1 tokens, Z-checks first. The `Z:... X:...`
/// form printed by the library is accepted too.
fn read_syndrome(text: &str, code: &SurfaceCode) -> CliResult<Syndrome> {
    if text.contains("Z:") {
        return Ok(Syndrome::from_bit_string(text)?);
    }
    let bits = text
        .split_whitespace()
        .map(|t| match t {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Failure::Usage(format!("invalid syndrome bit `{other}`"))),
        })
        .collect::<CliResult<Vec<bool>>>()?;
    let nz = code.z_checks.len();
    let nx = code.x_checks.len();
    if bits.len() != nz + nx {
        return Err(Failure::Usage(format!(
            "syndrome has {} bits, distance {} needs {} ({nz} Z-checks then {nx} X-checks)",
            bits.len(),
            code.d,
            nz + nx
        )));
    }
    Ok(Syndrome {
        z_checks: bits[..nz].to_vec(),
        x_checks: bits[nz..].to_vec(),
    })
}

fn decode(a: DecodeArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> CliResult<()> {
    let r = resolve(&a.decoder)?;
    let code = SurfaceCode::new(a.d)?;
    let prior = prior_of(&NoiseModel::new(r.noise, a.p)?)?;
    let mut text = String::new();
    if a.input == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        File::open(&a.input)?.read_to_string(&mut text)?;
    }
    let syn = read_syndrome(&text, &code)?;
    let family = r.pattern.resolve(r.noise);
    let config = DecoderConfig {
        mode: r.mode,
        phi_mode: r.phi,
        damping: r.eps.resolve(r.noise, a.d),
        dilution: !a.decoder.no_dilution,
        budget: a.decoder.budget,
    };
    let out = Decoder::with_family(&code, family, config)?.decode(&syn, &prior)?;
    let json = serde_json::json!({
        "d": a.d,
        "pattern": family.name(),
        "converged": out.converged,
        "stage_of_convergence": out.stage_of_convergence,
        "total_iterations": out.total_iterations,
        "per_stage_iterations": out.per_stage_iterations,
        "weight": out.estimate.weight(),
        "estimate": out.estimate.to_string(),
    });
    let mut w = open_out(&a.out, stdout)?;
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(&json).expect("json value")
    )?;
    w.flush()?;
    Ok(())
}

fn radius(a: RadiusArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let code = SurfaceCode::new(a.d)?;
    let family: PatternFamily = parse(&a.pattern)?;
    let ties = match a.ties.to_ascii_lowercase().as_str() {
        "strict" => TieRule::Strict,
        "favorable" | "favourable" => TieRule::Favorable,
        other => return Err(Failure::Usage(format!("unknown tie rule `{other}`"))),
    };
    let pattern = SparsificationPattern::new(family, a.s);
    let cap = a.max_weight.unwrap_or((a.d - 1) / 2 + 1);
    let report = error_correcting_radius_capped(&code, pattern, ties, cap, 4)?;
    debug_assert_eq!(
        report.theorem_lower_bound,
        theorem_lower_bound(a.d, pattern)
    );
    let mut w = open_out(&a.out, stdout)?;
    writeln!(w, "{}", report.to_json())?;
    w.flush()?;
    Ok(())
}

fn cavity(a: CavityArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let priors: Vec<(String, Prior)> = match (&a.p, &a.prior) {
        (_, Some(v)) if v.len() == 4 => vec![("".into(), Prior::new(v[0], v[1], v[2], v[3])?)],
        (_, Some(v)) => {
            return Err(Failure::Usage(format!(
                "--prior needs 4 values, got {}",
                v.len()
            )))
        }
        (Some(grid), None) => parse_grid(grid)?
            .into_iter()
            .map(|p| Ok((p.to_string(), prior_of(&NoiseModel::depolarizing(p)?)?)))
            .collect::<dilution_core::Result<_>>()?,
        (None, None) => return Err(Failure::Usage("give --p or --prior".into())),
    };
    let mut w = open_out(&a.out, stdout)?;
    writeln!(
        w,
        "p,p_I,p_X,p_Y,p_Z,kappa,delta_sigma0,delta_sigma1,delta_sigma0_enum,delta_sigma1_enum"
    )?;
    for (label, prior) in priors {
        let [pi, px, py, pz] = prior.as_array();
        let cell =
            |r: dilution_core::Result<f64>| r.map_or("nan".to_string(), |v| format!("{v:.12e}"));
        writeln!(
            w,
            "{label},{pi},{px},{py},{pz},{:.12e},{},{},{},{}",
            xz_coupling(&prior),
            cell(cavity_discrepancy_closed(&prior, false)),
            cell(cavity_discrepancy_closed(&prior, true)),
            cell(cavity_discrepancy_exact(&prior, false)),
            cell(cavity_discrepancy_exact(&prior, true)),
        )?;
    }
    w.flush()?;
    Ok(())
}

fn strip(a: StripArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut w = open_out(&a.out, stdout)?;
    writeln!(w, "{}", BlockExperimentResult::CSV_HEADER)?;
    for &n_b in &a.n_b {
        let r = block_experiment(a.k, n_b, a.samples, a.w_corr, a.w_wrong, a.p, a.seed)?;
        writeln!(w, "{}", r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn graph(a: GraphArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let code = SurfaceCode::new(a.d)?;
    let family: PatternFamily = parse(&a.pattern)?;
    let g = sparsify(&code, SparsificationPattern::new(family, a.s))?;
    let text = g.export(&a.format)?;
    let mut w = open_out(&a.out, stdout)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}
