//! `sidonlab`: command-line access to the verifiers and calculators.
//!
//! Subcommands map one-to-one onto library entry points and emit CSV
//! (counting suites, curve grids, regime tables) or JSON (single
//! reports). Exit codes: 0 all checks pass, 1 a mathematical violation
//! was found, 2 usage or parse error, 3 an enumeration cap stopped a
//! required check. `SIDONLAB_CAP` overrides the enumeration cap.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use sidonlab::bleiverify::{blei_sides, BleiVariant};
use sidonlab::boundcalc::{
    aa_regimes, bound_boolean, bound_bps, bound_complex, chebyshev_l, hc_constant,
    optimal_k_complex, BoundConfig,
};
use sidonlab::indexcomb::{
    extension_expectation_suite, power_comparison_suite, ratio_identity_suite, CheckStatus, SuiteRow,
};
use sidonlab::norms::{
    bh_ratio, coeff_lq_norm, supnorm_cube_exact, supnorm_torus_estimate, supnorm_torus_grid,
    SupNormEstimate, Witness,
};
use sidonlab::polyform::{from_json, Domain, UnimodularPolynomial};
use sidonlab::EnumCap;

/// Slack below which a side comparison counts as violated.
const SLACK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "sidonlab", version, about = "verifiers and bound calculators for unimodular polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact counting suites over a (d, n) range; CSV of every triple.
    VerifyLemmas {
        #[arg(long)]
        d_max: usize,
        #[arg(long)]
        n_max: usize,
        /// Corrupt one closed form to prove failures surface as exit 1.
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate both sides of a splitting inequality for a polynomial file.
    Blei {
        #[arg(long)]
        file: PathBuf,
        /// Outer block size, 1 <= k <= d.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[command(flatten)]
        output: Output,
    },
    /// Sup-norm of a polynomial file: exact sweep on the cube, multistart
    /// ascent or dense grid on the torus.
    Supnorm {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        method: MethodOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate the bound curves over a degree grid; CSV, one row per d.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        d_grid: Vec<usize>,
        #[command(flatten)]
        config: ConfigOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate regime crossovers over a variable-count grid; CSV, one row per n.
    Aa {
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        #[command(flatten)]
        config: ConfigOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Critical coefficient norm divided by the sup-norm of a polynomial file.
    BhRatio {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        method: MethodOpts,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Complex,
    Boolean,
    BooleanStrengthened,
}

impl VariantArg {
    fn library(self) -> BleiVariant {
        match self {
            VariantArg::Complex => BleiVariant::Complex,
            VariantArg::Boolean => BleiVariant::Boolean,
            VariantArg::BooleanStrengthened => BleiVariant::BooleanStrengthened,
        }
    }

    fn name(self) -> &'static str {
        match self {
            VariantArg::Complex => "complex",
            VariantArg::Boolean => "boolean",
            VariantArg::BooleanStrengthened => "boolean-strengthened",
        }
    }
}

/// Torus search knobs; ignored for cube files, where the sweep is exact.
#[derive(Args)]
struct MethodOpts {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    iters: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Use a dense grid with this many points per dimension instead of ascent.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct ConfigOpts {
    /// JSON file of constants; absent fields keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one constant, e.g. --set tau=0.2 (repeatable).
    #[arg(long = "set", value_name = "FIELD=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a run manifest (command, parameters, seed, versions, outputs) here.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// Everything needed to reproduce a run byte for byte.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    seed: u64,
    versions: Versions,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct Versions {
    tool: &'static str,
    config_sha256: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_for(&err)
        }
    }
}

/// Cap overruns are exit 3; every other error is a usage/parse problem.
fn exit_for(err: &anyhow::Error) -> ExitCode {
    for cause in err.chain() {
        if let Some(sidonlab::Error::CapExceeded { .. }) = cause.downcast_ref::<sidonlab::Error>() {
            return ExitCode::from(3);
        }
    }
    ExitCode::from(2)
}

fn run(cmd: Command) -> anyhow::Result<ExitCode> {
    let cap = enum_cap_from_env()?;
    match cmd {
        Command::VerifyLemmas { d_max, n_max, inject_fault, output } => {
            cmd_verify_lemmas(d_max, n_max, inject_fault, cap, &output)
        }
        Command::Blei { file, k, variant, output } => cmd_blei(&file, k, variant, cap, &output),
        Command::Supnorm { file, method, output } => cmd_supnorm(&file, &method, &output),
        Command::Bounds { d_grid, config, output } => cmd_bounds(&d_grid, &config, &output),
        Command::Aa { n_grid, config, output } => cmd_aa(&n_grid, &config, &output),
        Command::BhRatio { file, method, output } => cmd_bh_ratio(&file, &method, &output),
    }
}

fn enum_cap_from_env() -> anyhow::Result<EnumCap> {
    match std::env::var("SIDONLAB_CAP") {
        Ok(s) => {
            let cap = s
                .parse()
                .with_context(|| format!("SIDONLAB_CAP must be an unsigned integer, got {s:?}"))?;
            Ok(EnumCap(cap))
        }
        Err(_) => Ok(EnumCap::default()),
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn csv_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_polynomial(path: &PathBuf) -> anyhow::Result<UnimodularPolynomial> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let p = from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(p)
}

fn emit(
    command: &str,
    parameters: BTreeMap<String, String>,
    seed: u64,
    cfg: &BoundConfig,
    text: &str,
    output: &Output,
) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    if let Some(path) = &output.manifest {
        let manifest = RunManifest {
            command: command.into(),
            parameters,
            seed,
            versions: Versions {
                tool: env!("CARGO_PKG_VERSION"),
                config_sha256: config_hash(cfg),
            },
            outputs: output.out.iter().map(|p| p.display().to_string()).collect(),
        };
        let body = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn config_hash(cfg: &BoundConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serialises");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    format!("{:x}", hasher.finalize())
}

fn resolve_config(opts: &ConfigOpts) -> anyhow::Result<BoundConfig> {
    let mut cfg: BoundConfig = match &opts.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => BoundConfig::default(),
    };
    if !opts.set.is_empty() {
        let mut value = serde_json::to_value(cfg).expect("config serialises");
        let fields = value.as_object_mut().expect("config is an object");
        for assignment in &opts.set {
            let Some((key, raw)) = assignment.split_once('=') else {
                bail!("--set expects FIELD=VALUE, got {assignment:?}");
            };
            if !fields.contains_key(key) {
                bail!("unknown config field {key:?}");
            }
            let parsed: serde_json::Value = serde_json::from_str(raw)
                .with_context(|| format!("value for {key} must be a number, got {raw:?}"))?;
            fields.insert(key.to_string(), parsed);
        }
        cfg = serde_json::from_value(value).context("applying --set overrides")?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_verify_lemmas(
    d_max: usize,
    n_max: usize,
    inject_fault: bool,
    cap: EnumCap,
    output: &Output,
) -> anyhow::Result<ExitCode> {
    let mut rows: Vec<SuiteRow> = Vec::new();
    if d_max > 0 && n_max > 0 {
        rows.extend(extension_expectation_suite(d_max, n_max, cap, inject_fault));
        rows.extend(power_comparison_suite(n_max));
        rows.extend(ratio_identity_suite(n_max));
    }
    let mut text = String::from("check,d,n,k,subset,lhs,rhs,status\n");
    for row in &rows {
        let subset = match &row.subset {
            Some(slots) => slots
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            None => "-".into(),
        };
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.check,
            row.d,
            row.n,
            row.k,
            subset,
            row.lhs,
            row.rhs,
            row.status.as_str()
        ));
    }
    let parameters = BTreeMap::from([
        ("d_max".to_string(), d_max.to_string()),
        ("n_max".to_string(), n_max.to_string()),
        ("inject_fault".to_string(), inject_fault.to_string()),
    ]);
    emit("verify-lemmas", parameters, 0, &BoundConfig::default(), &text, output)?;
    let failed = rows.iter().filter(|r| r.status == CheckStatus::Fail).count();
    let skipped = rows.iter().filter(|r| r.status == CheckStatus::Skipped).count();
    if skipped > 0 {
        eprintln!("{skipped} checks skipped at the enumeration cap");
    }
    if failed > 0 {
        eprintln!("{failed} checks failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_blei(
    file: &PathBuf,
    k: usize,
    variant: VariantArg,
    cap: EnumCap,
    output: &Output,
) -> anyhow::Result<ExitCode> {
    let p = read_polynomial(file)?;
    let sides = blei_sides(p.coefficients(), k, variant.library(), cap)?;
    let report = json!({
        "variant": variant.name(),
        "n": p.n(),
        "d": p.d(),
        "k": k,
        "lhs": sides.lhs,
        "rhs": sides.rhs,
        "slack": sides.slack(),
        "holds": sides.holds(SLACK_TOL),
        "per_subset": sides
            .factors
            .iter()
            .map(|f| json!({ "inner_slots": f.inner_slots, "factor": f.factor }))
            .collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    let parameters = BTreeMap::from([
        ("file".to_string(), file.display().to_string()),
        ("k".to_string(), k.to_string()),
        ("variant".to_string(), variant.name().to_string()),
    ]);
    emit("blei", parameters, 0, &BoundConfig::default(), &text, output)?;
    if sides.holds(SLACK_TOL) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("violated: lhs {} exceeds rhs {}", sides.lhs, sides.rhs);
        Ok(ExitCode::from(1))
    }
}

fn estimate_supnorm(
    p: &UnimodularPolynomial,
    method: &MethodOpts,
) -> anyhow::Result<(SupNormEstimate, &'static str)> {
    match p.domain() {
        Domain::Cube => Ok((supnorm_cube_exact(p)?, "cube-sweep")),
        Domain::Torus => match method.grid {
            Some(points) => Ok((supnorm_torus_grid(p, points)?, "torus-grid")),
            None => Ok((
                supnorm_torus_estimate(p, method.restarts, method.iters, method.tol, method.seed)?,
                "torus-ascent",
            )),
        },
    }
}

fn witness_json(witness: &Witness) -> serde_json::Value {
    match witness {
        Witness::Cube(signs) => json!({ "domain": "cube", "signs": signs }),
        Witness::Torus(theta) => json!({ "domain": "torus", "theta": theta }),
    }
}

fn method_parameters(file: &PathBuf, method: &MethodOpts) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("file".to_string(), file.display().to_string()),
        ("restarts".to_string(), method.restarts.to_string()),
        ("iters".to_string(), method.iters.to_string()),
        ("tol".to_string(), csv_f64(method.tol)),
        ("seed".to_string(), method.seed.to_string()),
        (
            "grid".to_string(),
            method.grid.map_or_else(|| "-".to_string(), |g| g.to_string()),
        ),
    ])
}

fn cmd_supnorm(file: &PathBuf, method: &MethodOpts, output: &Output) -> anyhow::Result<ExitCode> {
    let p = read_polynomial(file)?;
    let (est, method_name) = estimate_supnorm(&p, method)?;
    let report = json!({
        "method": method_name,
        "n": p.n(),
        "d": p.d(),
        "value": est.value,
        "witness": witness_json(&est.witness),
        "evaluations": est.evaluations,
        "converged": est.converged,
        "certified": est.exact,
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    emit(
        "supnorm",
        method_parameters(file, method),
        method.seed,
        &BoundConfig::default(),
        &text,
        output,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(d_grid: &[usize], config: &ConfigOpts, output: &Output) -> anyhow::Result<ExitCode> {
    let cfg = resolve_config(config)?;
    let mut text = String::from(
        "d,bound_complex,ln_bound_complex,bound_bps,ln_bound_bps,\
         boolean_strengthened,boolean_unstrengthened,k_formula,k_exhaustive,\
         k_boolean,hc_at_k_boolean,step_numerator_at_k_boolean\n",
    );
    for &d in d_grid {
        let complex = bound_complex(d, &cfg)?;
        let bps = bound_bps(d, &cfg).with_context(|| format!("d_grid entry {d}"))?;
        let k = optimal_k_complex(d, &cfg)?;
        let boolean = bound_boolean(d, &cfg)?;
        let hc = hc_constant(d, boolean.argmin_k)?;
        let step = chebyshev_l(d, boolean.argmin_k)?;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            d,
            csv_f64(complex.value),
            csv_f64(complex.ln_value),
            csv_f64(bps.value),
            csv_f64(bps.ln_value),
            csv_f64(boolean.strengthened),
            csv_f64(boolean.unstrengthened),
            k.formula,
            k.exhaustive,
            boolean.argmin_k,
            csv_f64(hc),
            step
        ));
    }
    let parameters = grid_parameters("d_grid", d_grid, config);
    emit("bounds", parameters, 0, &cfg, &text, output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_aa(n_grid: &[usize], config: &ConfigOpts, output: &Output) -> anyhow::Result<ExitCode> {
    let cfg = resolve_config(config)?;
    let mut text = String::from(
        "n,d_star,ln_trivial_bound,ln_spectral_bound,required_factor,\
         gap_lower,gap_upper,gap_nonempty\n",
    );
    for &n in n_grid {
        let r = aa_regimes(n, &cfg)?;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            n,
            r.d_star,
            csv_f64(r.trivial_bound_ln),
            csv_f64(r.spectral_bound_ln),
            csv_f64(r.required_factor),
            r.d_star,
            csv_f64(r.gap_upper),
            r.gap_nonempty
        ));
    }
    let parameters = grid_parameters("n_grid", n_grid, config);
    emit("aa", parameters, 0, &cfg, &text, output)?;
    Ok(ExitCode::SUCCESS)
}

fn grid_parameters(
    name: &str,
    grid: &[usize],
    config: &ConfigOpts,
) -> BTreeMap<String, String> {
    BTreeMap::from([
        (
            name.to_string(),
            grid.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        ),
        (
            "config".to_string(),
            config
                .config
                .as_ref()
                .map_or_else(|| "-".to_string(), |p| p.display().to_string()),
        ),
        ("set".to_string(), config.set.join(" ")),
    ])
}

fn cmd_bh_ratio(file: &PathBuf, method: &MethodOpts, output: &Output) -> anyhow::Result<ExitCode> {
    let p = read_polynomial(file)?;
    let (est, method_name) = estimate_supnorm(&p, method)?;
    let q = 2.0 * p.d() as f64 / (p.d() as f64 + 1.0);
    let coeff_norm = coeff_lq_norm(&p, q)?;
    let ratio = bh_ratio(&p, est.value)?;
    let report = json!({
        "n": p.n(),
        "d": p.d(),
        "q": q,
        "coeff_norm": coeff_norm,
        "supnorm": {
            "method": method_name,
            "value": est.value,
            "converged": est.converged,
            "certified": est.exact,
        },
        "ratio": ratio,
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    emit(
        "bh-ratio",
        method_parameters(file, method),
        method.seed,
        &BoundConfig::default(),
        &text,
        output,
    )?;
    Ok(ExitCode::SUCCESS)
}
