mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use concat_codes::compiler::{
    compile, count_resources, resource_csv_row, verify_sequence, CompileMode, ConcatenatedTarget,
    RESOURCE_CSV_HEADER,
};
use concat_codes::enumerate::enumerate_single_emitter_progenitors;
use concat_codes::fusion::{
    erasure_analysis, error_analysis, optimize_failure_bases, Decoding, FusionSpec,
};
use concat_codes::threshold::{
    co_optimal, correctable_region, enumerate_codes, search_best_code, BiasMode,
    ThresholdConfigFile,
};
use concat_codes::{Error, GraphCode, GraphState};
use serde::Serialize;

use output::{csv_bytes, digest, Outputs, RunManifest};

#[derive(Parser)]
#[command(name = "concat-codes", version, about = "Graph-code fusion analysis and emitter compilation")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate single-emitter progenitor graphs with n code qubits.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Erasure and error analysis of one code.
    Analyze(AnalyzeArgs),
    /// Best failure-basis vector for every code of a size.
    OptimizeW {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 0.95)]
        eta: f64,
        #[arg(long, default_value_t = 0.5)]
        p_fail: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Best loss threshold per code size.
    Threshold {
        #[arg(long)]
        config: Option<PathBuf>,
        /// A size or an inclusive range such as `2..8`.
        #[arg(long, value_parser = parse_range)]
        n: NRange,
        #[arg(long, value_enum, default_value_t = Bias::Randomized)]
        bias: Bias,
        #[arg(long, default_value_t = 0.5)]
        p_fail: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Correctable (loss, depolarizing) region of one code.
    Region(RegionArgs),
    /// Compile an outer graph encoded in an inner code to a spin sequence.
    Compile(CompileArgs),
    /// Dual of every code of a size.
    Duals {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Code id such as `n4-2`.
    #[arg(long)]
    code: String,
    /// Failure-basis vector (bit j set: pair j keeps XX). Default: best for `eta`.
    #[arg(long)]
    w: Option<u64>,
    #[arg(long, default_value_t = 0.95)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    p_fail: f64,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = DecodingArg::Ml)]
    decoding: DecodingArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    config: PathBuf,
    /// Code id; defaults to the best code of size `n`.
    #[arg(long, required_unless_present = "n")]
    code: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long, default_value_t = 0.1)]
    gamma_max: f64,
    #[arg(long, default_value_t = 21)]
    gamma_steps: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon_max: f64,
    #[arg(long, default_value_t = 0.5)]
    p_fail: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompileArgs {
    /// Outer graph JSON (`n`, `edges`, `emitter`).
    #[arg(long)]
    outer: PathBuf,
    /// Inner code id such as `n3-1`.
    #[arg(long)]
    code: String,
    #[arg(long, value_enum, default_value_t = Mode::TwoEmitter)]
    mode: Mode,
    #[arg(long)]
    out: PathBuf,
    /// Drops the instruction at this index before verification.
    #[arg(long, hide = true)]
    inject_fault: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bias {
    Randomized,
    Passive,
}

impl From<Bias> for BiasMode {
    fn from(b: Bias) -> Self {
        match b {
            Bias::Randomized => BiasMode::Randomized,
            Bias::Passive => BiasMode::Passive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    TwoEmitter,
    EmitterMemory,
}

impl From<Mode> for CompileMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::TwoEmitter => CompileMode::TwoEmitter,
            Mode::EmitterMemory => CompileMode::EmitterMemory,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecodingArg {
    Ml,
    Raw,
}

#[derive(Clone, Copy, Debug, Serialize)]
struct NRange {
    start: usize,
    end: usize,
}

fn parse_range(s: &str) -> Result<NRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size `{t}`"));
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if start == 0 || start > end {
        return Err(format!("`{s}` is not a range of sizes ≥ 1"));
    }
    Ok(NRange { start, end })
}

enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io(_) => 1,
            CliError::Lib(e) => match e {
                Error::OutOfRange { .. } => 2,
                Error::Config(_) | Error::Parse(_) | Error::NotGeneratable(_) => 3,
                Error::ResourceCap { .. } => 4,
                Error::Verification { .. } => 5,
                _ => 1,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// Parsed configuration and the digest of its canonical form.
fn load_config(path: Option<&Path>) -> CliResult<(ThresholdConfigFile, String)> {
    let cfg = match path {
        None => ThresholdConfigFile::default_config(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(io_err(p))?;
            ThresholdConfigFile::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
    };
    let canonical = serde_json::to_string(&cfg).expect("serializable");
    Ok((cfg, digest(&canonical)))
}

fn find_code(id: &str) -> CliResult<GraphCode> {
    let n = id
        .strip_prefix('n')
        .and_then(|r| r.split_once('-'))
        .and_then(|(n, _)| n.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("code id `{id}` is not of the form n<size>-<index>")))?;
    enumerate_codes(n)?
        .into_iter()
        .find(|(i, _)| i == id)
        .map(|(_, c)| c)
        .ok_or_else(|| CliError::Usage(format!("no code with id `{id}`")))
}

fn check_unit(name: &str, v: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} = {v} must lie in [0, 1]")))
    }
}

fn cmd_enumerate(n: usize, out: &Path) -> CliResult<()> {
    let graphs = enumerate_single_emitter_progenitors(n)?;
    #[derive(Serialize)]
    struct Entry<'a> {
        id: String,
        graph: &'a GraphState,
    }
    let mut files = Outputs::default();
    let library: Vec<Entry> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| Entry {
            id: format!("n{n}-{i}"),
            graph: g,
        })
        .collect();
    for e in &library {
        files.add(format!("{}.dot", e.id), e.graph.to_dot(&e.id.replace('-', "_")));
    }
    files.json("library.json", &library);
    let manifest = RunManifest::new("enumerate").param("n", n).param("count", graphs.len());
    files.commit(out, &manifest).map_err(io_err(out))
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    check_unit("eta", a.eta)?;
    check_unit("p-fail", a.p_fail)?;
    if let Some(e) = a.epsilon {
        check_unit("epsilon", e)?;
    }
    let code = find_code(&a.code)?;
    let n = code.n_code();
    let w = match a.w {
        Some(w) if w >> n != 0 => {
            return Err(CliError::Usage(format!("--w {w} has bits beyond {n} pairs")))
        }
        Some(w) => w,
        None => {
            let (eta, p) = (a.eta, a.p_fail);
            optimize_failure_bases(&code, |x, z| (x.evaluate(eta, p) + z.evaluate(eta, p)) / 2.0)?.w
        }
    };
    let spec = FusionSpec::new(a.eta, a.p_fail, w, n)?;
    let erasure = erasure_analysis(&code, &spec)?;
    let decoding = match a.decoding {
        DecodingArg::Ml => Decoding::MaximumLikelihood,
        DecodingArg::Raw => Decoding::Uncorrected,
    };
    let error = a
        .epsilon
        .map(|e| error_analysis(&code, &spec, e, decoding))
        .transpose()?;
    #[derive(Serialize)]
    struct Analysis<'a> {
        code: concat_codes::code::CodeDescriptor,
        w: u64,
        success_xx: f64,
        success_zz: f64,
        erasure: &'a concat_codes::fusion::ErasureReport,
        error: Option<concat_codes::fusion::ErrorReport>,
    }
    let mut files = Outputs::default();
    files.json(
        "analysis.json",
        &Analysis {
            code: code.descriptor(&a.code)?,
            w,
            success_xx: erasure.success_xx(),
            success_zz: erasure.success_zz(),
            erasure: &erasure,
            error,
        },
    );
    let manifest = RunManifest::new("analyze")
        .param("code", &a.code)
        .param("w", w)
        .param("eta", a.eta)
        .param("p_fail", a.p_fail)
        .param("epsilon", a.epsilon)
        .param("decoding", format!("{decoding:?}"));
    files.commit(&a.out, &manifest).map_err(io_err(&a.out))
}

fn cmd_optimize_w(n: usize, eta: f64, p_fail: f64, out: &Path) -> CliResult<()> {
    check_unit("eta", eta)?;
    check_unit("p-fail", p_fail)?;
    #[derive(Serialize)]
    struct Row {
        code_id: String,
        w: u64,
        p_success_xx: f64,
        p_success_zz: f64,
        score: f64,
    }
    let mut rows = Vec::new();
    for (id, code) in enumerate_codes(n)? {
        let best = optimize_failure_bases(&code, |x, z| {
            (x.evaluate(eta, p_fail) + z.evaluate(eta, p_fail)) / 2.0
        })?;
        rows.push(Row {
            code_id: id,
            w: best.w,
            p_success_xx: best.p_success_xx.evaluate(eta, p_fail),
            p_success_zz: best.p_success_zz.evaluate(eta, p_fail),
            score: best.score,
        });
    }
    let mut files = Outputs::default();
    files.add("optimize_w.csv", csv_bytes(&rows));
    let manifest = RunManifest::new("optimize-w")
        .param("n", n)
        .param("eta", eta)
        .param("p_fail", p_fail)
        .param("objective", "mean success probability of XX and ZZ");
    files.commit(out, &manifest).map_err(io_err(out))
}

fn cmd_threshold(
    config: Option<&Path>,
    range: NRange,
    bias: Bias,
    p_fail: f64,
    out: &Path,
) -> CliResult<()> {
    check_unit("p-fail", p_fail)?;
    let (cfg, config_digest) = load_config(config)?;
    let bias_cfg = cfg.bias(bias.into())?;
    #[derive(Serialize)]
    struct Row {
        n: usize,
        code_id: String,
        w: u64,
        gamma_star: f64,
        erase_xx: f64,
        erase_zz: f64,
        bias_ratio: f64,
        feasible: bool,
        co_optimal: String,
    }
    let mut rows = Vec::new();
    let mut winners = Vec::new();
    for n in range.start..=range.end {
        let results = search_best_code(n, &bias_cfg, p_fail)?;
        let best = &results[0];
        let ties = co_optimal(&results, 1e-8).join(";");
        if let Some(d) = &best.diagnostic {
            eprintln!("warning: n = {n}: {d}");
        }
        let code = find_code(&best.code_id)?;
        winners.push(code.descriptor(&best.code_id)?);
        rows.push(Row {
            n,
            code_id: best.code_id.clone(),
            w: best.w,
            gamma_star: best.gamma_star,
            erase_xx: best.erase_xx,
            erase_zz: best.erase_zz,
            bias_ratio: best.bias_ratio,
            feasible: best.feasible,
            co_optimal: ties,
        });
    }
    let mut files = Outputs::default();
    files.add("thresholds.csv", csv_bytes(&rows));
    files.json("winners.json", &winners);
    let mut manifest = RunManifest::new("threshold")
        .param("n", range)
        .param("bias", BiasMode::from(bias).to_string())
        .param("p_fail", p_fail)
        .param("config", config.map(|p| p.display().to_string()));
    manifest.config_digest = Some(config_digest);
    files.commit(out, &manifest).map_err(io_err(out))
}

fn cmd_region(a: &RegionArgs) -> CliResult<()> {
    check_unit("p-fail", a.p_fail)?;
    check_unit("gamma-max", a.gamma_max)?;
    check_unit("epsilon-max", a.epsilon_max)?;
    if a.gamma_steps < 2 {
        return Err(CliError::Usage("--gamma-steps must be at least 2".into()));
    }
    let (cfg, config_digest) = load_config(Some(&a.config))?;
    let err = cfg.error_thresholds()?.ok_or_else(|| {
        CliError::Config(format!("{}: missing field `epsilon_M`", a.config.display()))
    })?;
    let bias = cfg.bias(BiasMode::Randomized)?;
    let id = match (&a.code, a.n) {
        (Some(id), _) => id.clone(),
        (None, Some(n)) => search_best_code(n as usize, &bias, a.p_fail)?[0].code_id.clone(),
        (None, None) => unreachable!("clap requires one of --code and --n"),
    };
    let code = find_code(&id)?;
    let gammas: Vec<f64> = (0..a.gamma_steps)
        .map(|i| a.gamma_max * i as f64 / (a.gamma_steps - 1) as f64)
        .collect();
    let curve = correctable_region(&code, &bias, &err, a.p_fail, &gammas, a.epsilon_max)?;
    if let Some(d) = &curve.diagnostic {
        eprintln!("warning: {d}");
    } else if curve.is_empty() {
        eprintln!("warning: the correctable region of {id} is empty");
    }
    #[derive(Serialize)]
    struct Row<'a> {
        code_id: &'a str,
        w: u64,
        gamma_star: f64,
        gamma: f64,
        erase_rate: f64,
        epsilon_m: f64,
        epsilon_boundary: f64,
    }
    let rows: Vec<Row> = curve
        .points
        .iter()
        .map(|p| Row {
            code_id: &id,
            w: curve.w,
            gamma_star: curve.gamma_star,
            gamma: p.gamma,
            erase_rate: p.erase_rate,
            epsilon_m: p.epsilon_m,
            epsilon_boundary: p.epsilon_boundary,
        })
        .collect();
    let mut files = Outputs::default();
    files.add("region.csv", csv_bytes(&rows));
    let mut manifest = RunManifest::new("region")
        .param("code", &id)
        .param("gamma_max", a.gamma_max)
        .param("gamma_steps", a.gamma_steps)
        .param("epsilon_max", a.epsilon_max)
        .param("p_fail", a.p_fail)
        .param("config", a.config.display().to_string());
    manifest.config_digest = Some(config_digest);
    files.commit(&a.out, &manifest).map_err(io_err(&a.out))
}

fn cmd_compile(a: &CompileArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&a.outer).map_err(io_err(&a.outer))?;
    let outer = GraphState::from_json(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", a.outer.display())))?;
    let inner = find_code(&a.code)?;
    let mode = CompileMode::from(a.mode);
    let mut seq = compile(&outer, &inner, mode)?;
    if let Some(step) = a.inject_fault {
        if step >= seq.ops.len() {
            return Err(CliError::Usage(format!("no instruction {step} to drop")));
        }
        seq.ops.remove(step);
    }
    let target = ConcatenatedTarget::new(outer, inner.clone());
    let report = verify_sequence(&seq, &target)?;
    let resources = count_resources(&seq);
    let mut files = Outputs::default();
    files.add("sequence.json", seq.to_json() + "\n");
    files.add("schedule.txt", seq.schedule_text());
    files.add(
        "resources.csv",
        format!("{RESOURCE_CSV_HEADER}\n{}\n", resource_csv_row(inner.n_code(), &resources)),
    );
    files.json("verification.json", &report);
    let manifest = RunManifest::new("compile")
        .param("outer", a.outer.display().to_string())
        .param("outer_digest", digest(&text))
        .param("code", &a.code)
        .param("mode", mode.to_string())
        .param("inject_fault", a.inject_fault);
    files.commit(&a.out, &manifest).map_err(io_err(&a.out))
}

fn cmd_duals(n: usize, out: &Path) -> CliResult<()> {
    let codes = enumerate_codes(n)?;
    #[derive(Serialize)]
    struct Row {
        code_id: String,
        dual_pivot: usize,
        dual_id: String,
        dual_progenitor: String,
        swap_verified: bool,
    }
    let mut rows = Vec::new();
    for (id, code) in &codes {
        let dual = code.dual_code()?;
        let dual_id = codes
            .iter()
            .find(|(_, c)| c.progenitor().is_marked_isomorphic(dual.progenitor()))
            .map(|(i, _)| i.clone())
            .unwrap_or_default();
        let mut swap_verified = true;
        for w in 0..1u64 << n {
            let a = erasure_analysis(code, &FusionSpec::standard(1.0, w, n)?)?;
            let wd = code.dual_failure_basis(w);
            let b = erasure_analysis(&dual, &FusionSpec::standard(1.0, wd, n)?)?;
            swap_verified &= a.p_success_xx == b.p_success_zz && a.p_success_zz == b.p_success_xx;
        }
        rows.push(Row {
            code_id: id.clone(),
            dual_pivot: code.dual_pivot(),
            dual_id,
            dual_progenitor: serde_json::to_string(dual.progenitor()).expect("serializable"),
            swap_verified,
        });
    }
    let mut files = Outputs::default();
    files.add("duals.csv", csv_bytes(&rows));
    let manifest = RunManifest::new("duals").param("n", n);
    files.commit(out, &manifest).map_err(io_err(out))
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Enumerate { n, out } => cmd_enumerate(*n as usize, out),
        Command::Analyze(a) => cmd_analyze(a),
        Command::OptimizeW {
            n,
            eta,
            p_fail,
            out,
        } => cmd_optimize_w(*n as usize, *eta, *p_fail, out),
        Command::Threshold {
            config,
            n,
            bias,
            p_fail,
            out,
        } => cmd_threshold(config.as_deref(), *n, *bias, *p_fail, out),
        Command::Region(a) => cmd_region(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Duals { n, out } => cmd_duals(*n as usize, out),
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
