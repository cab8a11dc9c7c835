//! coble-forge: Heisenberg-invariant forms, theta embeddings, and the
//! numerical recovery of the Coble cubic and quartic.
//!
//! Every subcommand writes one document to stdout (or `--output`): JSON by
//! default, CSV for the two tabular reports. Each document embeds the
//! schema version and the fully resolved run configuration, and is
//! byte-stable for fixed arguments and seed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use coble_forge_core::coble::{
    coble_hypersurface, dimension_report, verify_uniqueness_full_space, DimensionReport,
    HypersurfaceKind, RankOptions,
};
use coble_forge_core::exact::intertwiner_dimension;
use coble_forge_core::json::{
    form_to_json, ComplexJson, DimensionReportJson, FormJson, NullspaceReportJson, SCHEMA_VERSION,
};
use coble_forge_core::lattice::{KPoint, Lattice};
use coble_forge_core::monomial::{
    invariant_basis, isotypic_table, verify_prop1, MonomialModule,
};
use coble_forge_core::theta::{
    equivariance_selftest, quasi_periodicity_selftest, sample_points, theta_char,
    truncation_radius, PeriodMatrix, DEFAULT_TOL,
};
use coble_forge_core::{canonical_level, Error, Result};

/// Keeps the randomized self-test draws on a stream separate from the
/// sample points themselves.
const SELFTEST_SALT: u64 = 0x7365_6c66_7465_7374;

#[derive(Parser)]
#[command(
    name = "coble-forge",
    version,
    about = "Heisenberg-invariant forms, theta embeddings, and the Coble cubic/quartic"
)]
struct Cli {
    /// Worker thread cap; COBLE_FORGE_THREADS is honored when absent, and
    /// all cores are used when neither is set.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format; csv is available for the tabular reports only
    /// (isotypic, dim-report).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact basis of the Heisenberg-invariant forms of a given degree.
    Invariants {
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        degree: u32,
    },

    /// Character multiplicity table of the degree-d forms under the
    /// torsion group K x K (requires the center to act trivially).
    Isotypic {
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        degree: u32,
    },

    /// Rank check of the derivative map h restricted to invariants.
    VerifyProp1 {
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        g: u32,
        /// Symmetric-power degree; defaults to the canonical level for nu.
        #[arg(long)]
        n: Option<u32>,
    },

    /// dim Hom(V*, S^(n-1) V) from the generator equations; equals
    /// dim S^(n-1) V / N when the answer is a multiple of V*.
    IntertwinerDim {
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        g: u32,
    },

    /// Evaluate theta[a;b](z, Omega) once.
    ThetaEval {
        /// Period matrix JSON file ({"g","re","im"}); a generic matrix is
        /// drawn from --seed when absent.
        #[arg(long)]
        period: Option<PathBuf>,
        /// Genus; required without --period, checked against it otherwise.
        #[arg(long)]
        g: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Characteristic a, comma-separated reals (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Characteristic b, comma-separated reals (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        /// Re(z), comma-separated (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z_re: Vec<f64>,
        /// Im(z), comma-separated (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z_im: Vec<f64>,
        /// Truncation tolerance for the lattice sum.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },

    /// Quasi-periodicity and embedding-equivariance checks at random
    /// points; fails (exit 3) when any deviation exceeds the threshold.
    ThetaSelftest {
        /// Embedding level (2 or 3).
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        g: u32,
        /// Period matrix JSON file; a generic one is drawn from --seed when
        /// absent.
        #[arg(long)]
        period: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random points to test.
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Largest acceptable relative deviation.
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
    },

    /// Recover the invariant hypersurface singular along the embedded
    /// abelian variety (cubic: g=2 in P^8; quartic: g=3 in P^7).
    Coble {
        /// cubic or quartic.
        #[arg(long)]
        kind: HypersurfaceKind,
        /// Period matrix JSON file; a generic one is drawn from --seed when
        /// absent.
        #[arg(long)]
        period: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum number of sample points; the solver enforces its own
        /// lower bound on top.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },

    /// Re-run the singularity system over the full monomial basis and
    /// check that its unique nullvector matches the invariant recovery.
    Uniqueness {
        /// cubic or quartic.
        #[arg(long)]
        kind: HypersurfaceKind,
        /// Period matrix JSON file; a generic one is drawn from --seed when
        /// absent.
        #[arg(long)]
        period: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },

    /// Numerical dimension census for the degree-n ideal at genus g,
    /// compared with the closed formulas where known.
    DimReport {
        /// Ideal degree (3 or 4); also fixes nu through n = canonical level.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        /// Period matrix JSON file; a generic one is drawn from --seed when
        /// absent.
        #[arg(long)]
        period: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Invariants { .. } => "invariants",
            Command::Isotypic { .. } => "isotypic",
            Command::VerifyProp1 { .. } => "verify-prop1",
            Command::IntertwinerDim { .. } => "intertwiner-dim",
            Command::ThetaEval { .. } => "theta-eval",
            Command::ThetaSelftest { .. } => "theta-selftest",
            Command::Coble { .. } => "coble",
            Command::Uniqueness { .. } => "uniqueness",
            Command::DimReport { .. } => "dim-report",
        }
    }
}

/// The resolved configuration echoed into every output document. Fields
/// that do not apply to a command stay null.
#[derive(Serialize)]
struct RunConfig {
    command: String,
    nu: Option<u32>,
    g: Option<u32>,
    n: Option<u32>,
    degree: Option<u32>,
    kind: Option<String>,
    period: Option<String>,
    period_seed: Option<u64>,
    samples: Option<usize>,
    seed: Option<u64>,
    theta_tol: Option<f64>,
    rank_cutoff: Option<f64>,
    gap_threshold: Option<f64>,
    threads: usize,
    format: String,
    output: Option<String>,
}

impl RunConfig {
    fn new(command: &str, threads: usize, format: Format, output: &Option<PathBuf>) -> Self {
        RunConfig {
            command: command.to_string(),
            nu: None,
            g: None,
            n: None,
            degree: None,
            kind: None,
            period: None,
            period_seed: None,
            samples: None,
            seed: None,
            theta_tol: None,
            rank_cutoff: None,
            gap_threshold: None,
            threads,
            format: format.name().to_string(),
            output: output.as_ref().map(|p| p.display().to_string()),
        }
    }

    fn with_rank_defaults(&mut self) {
        let opts = RankOptions::default();
        self.rank_cutoff = Some(opts.rel_cutoff);
        self.gap_threshold = Some(opts.gap_threshold);
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    config: &'a RunConfig,
    result: &'a T,
}

fn render_json<T: Serialize>(config: &RunConfig, result: &T) -> Result<String> {
    let doc = Envelope {
        schema_version: SCHEMA_VERSION,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::structural(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// CSV with the schema version and configuration in `#` comment lines;
/// cells are numeric or space-separated coordinates, so no escaping is
/// ever needed.
fn render_csv(config: &RunConfig, header: &str, rows: &[String]) -> Result<String> {
    let cfg = serde_json::to_string(config)
        .map_err(|e| Error::structural(format!("serialization failed: {e}")))?;
    let mut text = format!("# schema_version={SCHEMA_VERSION}\n# config={cfg}\n{header}\n");
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    Ok(text)
}

fn require_json(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::parameter(format!(
            "{command} has no CSV form; only isotypic and dim-report support --format csv"
        )));
    }
    Ok(())
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::parameter(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Caps rayon's global pool from --threads or COBLE_FORGE_THREADS and
/// returns the effective worker count.
fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    let requested = match flag {
        Some(t) => Some(t),
        None => match std::env::var("COBLE_FORGE_THREADS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                Error::parameter(format!("COBLE_FORGE_THREADS must be a positive integer, got '{s}'"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(t) = requested {
        if t == 0 {
            return Err(Error::parameter("thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::parameter(format!("thread pool setup failed: {e}")))?;
    }
    Ok(rayon::current_num_threads())
}

fn load_period(path: &PathBuf) -> Result<PeriodMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parameter(format!("cannot read {}: {e}", path.display())))?;
    PeriodMatrix::from_json_str(&text)
}

/// File if given, else a generic draw at the stated genus; the config
/// records which of the two happened.
fn resolve_period(
    path: &Option<PathBuf>,
    g: u32,
    seed: u64,
    config: &mut RunConfig,
) -> Result<PeriodMatrix> {
    match path {
        Some(p) => {
            let m = load_period(p)?;
            if m.g() != g as usize {
                return Err(Error::parameter(format!(
                    "period matrix in {} has g = {}, expected {g}",
                    p.display(),
                    m.g()
                )));
            }
            config.period = Some(p.display().to_string());
            Ok(m)
        }
        None => {
            config.period_seed = Some(seed);
            PeriodMatrix::random_generic(g as usize, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parameter(_) => 2u8,
                Error::Capacity(_) => 4,
                _ => 3,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = resolve_threads(cli.threads)?;
    let mut config = RunConfig::new(cli.command.name(), threads, cli.format, &cli.output);
    let text = dispatch(cli.command, cli.format, &mut config)?;
    write_output(&cli.output, &text)
}

fn dispatch(command: Command, format: Format, config: &mut RunConfig) -> Result<String> {
    match command {
        Command::Invariants { nu, g, degree } => {
            require_json(format, "invariants")?;
            cmd_invariants(config, nu, g, degree)
        }
        Command::Isotypic { nu, g, degree } => cmd_isotypic(config, format, nu, g, degree),
        Command::VerifyProp1 { nu, g, n } => {
            require_json(format, "verify-prop1")?;
            cmd_verify_prop1(config, nu, g, n)
        }
        Command::IntertwinerDim { nu, g } => {
            require_json(format, "intertwiner-dim")?;
            cmd_intertwiner_dim(config, nu, g)
        }
        Command::ThetaEval {
            period,
            g,
            seed,
            a,
            b,
            z_re,
            z_im,
            tol,
        } => {
            require_json(format, "theta-eval")?;
            cmd_theta_eval(config, period, g, seed, a, b, z_re, z_im, tol)
        }
        Command::ThetaSelftest {
            nu,
            g,
            period,
            seed,
            points,
            tol,
            threshold,
        } => {
            require_json(format, "theta-selftest")?;
            cmd_theta_selftest(config, nu, g, period, seed, points, tol, threshold)
        }
        Command::Coble {
            kind,
            period,
            seed,
            samples,
        } => {
            require_json(format, "coble")?;
            cmd_coble(config, kind, period, seed, samples)
        }
        Command::Uniqueness {
            kind,
            period,
            seed,
            samples,
        } => {
            require_json(format, "uniqueness")?;
            cmd_uniqueness(config, kind, period, seed, samples)
        }
        Command::DimReport { n, g, period, seed } => {
            cmd_dim_report(config, format, n, g, period, seed)
        }
    }
}

fn cmd_invariants(config: &mut RunConfig, nu: u32, g: u32, degree: u32) -> Result<String> {
    config.nu = Some(nu);
    config.g = Some(g);
    config.degree = Some(degree);
    config.n = Some(canonical_level(nu));
    let module = MonomialModule::symmetric_power(nu, g, degree)?;
    let forms = invariant_basis(&module)?;

    #[derive(Serialize)]
    struct Out {
        n: u32,
        module_dim: usize,
        dim: usize,
        forms: Vec<FormJson>,
    }
    let out = Out {
        n: module.n(),
        module_dim: module.dim(),
        dim: forms.len(),
        forms: forms.iter().map(form_to_json).collect(),
    };
    render_json(config, &out)
}

fn cmd_isotypic(
    config: &mut RunConfig,
    format: Format,
    nu: u32,
    g: u32,
    degree: u32,
) -> Result<String> {
    config.nu = Some(nu);
    config.g = Some(g);
    config.degree = Some(degree);
    config.n = Some(canonical_level(nu));
    let module = MonomialModule::symmetric_power(nu, g, degree)?;
    let table = isotypic_table(&module)?;
    let lattice = Lattice::new(nu, g)?;
    let coords = |idx: u32| lattice.point(idx).coords().to_vec();

    #[derive(Serialize)]
    struct Row {
        alpha: Vec<u32>,
        beta: Vec<u32>,
        multiplicity: usize,
    }
    let rows: Vec<Row> = table
        .dense()
        .into_iter()
        .filter(|&(_, m)| m > 0)
        .map(|((a, b), m)| Row {
            alpha: coords(a),
            beta: coords(b),
            multiplicity: m,
        })
        .collect();

    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                n: u32,
                total_dim: usize,
                trivial_multiplicity: usize,
                nontrivial_multiplicities: Vec<usize>,
                entries: Vec<Row>,
            }
            let out = Out {
                n: module.n(),
                total_dim: table.total_dim(),
                trivial_multiplicity: table.trivial_multiplicity(),
                nontrivial_multiplicities: table.nontrivial_multiplicities(),
                entries: rows,
            };
            render_json(config, &out)
        }
        Format::Csv => {
            let cells: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{}",
                        join_coords(&r.alpha),
                        join_coords(&r.beta),
                        r.multiplicity
                    )
                })
                .collect();
            render_csv(config, "alpha,beta,multiplicity", &cells)
        }
    }
}

fn join_coords(coords: &[u32]) -> String {
    coords
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_verify_prop1(config: &mut RunConfig, nu: u32, g: u32, n: Option<u32>) -> Result<String> {
    let n = n.unwrap_or_else(|| canonical_level(nu));
    config.nu = Some(nu);
    config.g = Some(g);
    config.n = Some(n);
    let report = verify_prop1(nu, g, n)?;
    render_json(config, &report)
}

fn cmd_intertwiner_dim(config: &mut RunConfig, nu: u32, g: u32) -> Result<String> {
    let n = canonical_level(nu);
    config.nu = Some(nu);
    config.g = Some(g);
    config.n = Some(n);
    let sym = MonomialModule::symmetric_power(nu, g, n - 1)?;
    let dual = MonomialModule::dual_standard(nu, g)?;
    let k = intertwiner_dimension(&dual, &sym)?;

    #[derive(Serialize)]
    struct Out {
        n: u32,
        dim_dual_standard: usize,
        dim_sym_nm1: usize,
        intertwiner_dim: usize,
        sym_dim_over_n: usize,
    }
    let out = Out {
        n,
        dim_dual_standard: dual.dim(),
        dim_sym_nm1: sym.dim(),
        intertwiner_dim: k,
        sym_dim_over_n: sym.dim() / dual.dim(),
    };
    render_json(config, &out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_theta_eval(
    config: &mut RunConfig,
    period_path: Option<PathBuf>,
    g_flag: Option<u32>,
    seed: u64,
    a: Vec<f64>,
    b: Vec<f64>,
    z_re: Vec<f64>,
    z_im: Vec<f64>,
    tol: f64,
) -> Result<String> {
    let g = match (&period_path, g_flag) {
        (None, None) => {
            return Err(Error::parameter("--g is required when --period is absent"))
        }
        (None, Some(g)) => g,
        (Some(p), flag) => {
            let file_g = load_period(p)?.g() as u32;
            if let Some(g) = flag {
                if g != file_g {
                    return Err(Error::parameter(format!(
                        "--g {g} contradicts the period matrix (g = {file_g})"
                    )));
                }
            }
            file_g
        }
    };
    let period = resolve_period(&period_path, g, seed, config)?;
    config.g = Some(g);
    config.seed = Some(seed);
    config.theta_tol = Some(tol);

    let fill = |v: Vec<f64>, what: &str| -> Result<Vec<f64>> {
        if v.is_empty() {
            Ok(vec![0.0; g as usize])
        } else if v.len() == g as usize {
            Ok(v)
        } else {
            Err(Error::parameter(format!(
                "{what} must have {g} comma-separated entries, got {}",
                v.len()
            )))
        }
    };
    let a = fill(a, "--a")?;
    let b = fill(b, "--b")?;
    let z_re = fill(z_re, "--z-re")?;
    let z_im = fill(z_im, "--z-im")?;
    let z: Vec<Complex64> = z_re
        .iter()
        .zip(&z_im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();

    let value = theta_char(&a, &b, &z, &period, tol)?;
    #[derive(Serialize)]
    struct Out {
        g: u32,
        a: Vec<f64>,
        b: Vec<f64>,
        z: Vec<ComplexJson>,
        truncation_radius: f64,
        value: ComplexJson,
    }
    let out = Out {
        g,
        truncation_radius: truncation_radius(&a, period.min_im_eigenvalue(), tol),
        z: z.iter().map(|&c| c.into()).collect(),
        a,
        b,
        value: value.into(),
    };
    render_json(config, &out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_theta_selftest(
    config: &mut RunConfig,
    nu: u32,
    g: u32,
    period_path: Option<PathBuf>,
    seed: u64,
    points: usize,
    tol: f64,
    threshold: f64,
) -> Result<String> {
    if points == 0 {
        return Err(Error::parameter("--points must be at least 1"));
    }
    config.nu = Some(nu);
    config.g = Some(g);
    config.seed = Some(seed);
    config.samples = Some(points);
    config.theta_tol = Some(tol);
    let period = resolve_period(&period_path, g, seed, config)?;

    // Torsion directions to test: each unit a- and b-translation, plus one
    // mixed pair.
    let zero = KPoint::zero(nu, g);
    let mut pairs: Vec<(KPoint, KPoint)> = Vec::new();
    for i in 0..g {
        pairs.push((KPoint::unit(nu, g, i), zero.clone()));
        pairs.push((zero.clone(), KPoint::unit(nu, g, i)));
    }
    pairs.push((KPoint::unit(nu, g, 0), KPoint::unit(nu, g, 0)));

    let zs = sample_points(points, &period, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ SELFTEST_SALT);
    let mut qp_max: f64 = 0.0;
    let mut eq_max: f64 = 0.0;
    for z in &zs {
        let ca: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
        let cb: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
        let p: Vec<i64> = (0..g).map(|_| rng.gen_range(-2i64..=2)).collect();
        let q: Vec<i64> = (0..g).map(|_| rng.gen_range(-2i64..=2)).collect();
        qp_max = qp_max.max(quasi_periodicity_selftest(&ca, &cb, z, &p, &q, &period, tol)?);
        for (ka, kb) in &pairs {
            eq_max = eq_max.max(equivariance_selftest(nu, &period, z, ka, kb, tol)?);
        }
    }
    if qp_max > threshold || eq_max > threshold {
        return Err(Error::structural(format!(
            "theta self-test failed: quasi-periodicity {qp_max:.3e}, \
             equivariance {eq_max:.3e}, threshold {threshold:.3e}"
        )));
    }

    #[derive(Serialize)]
    struct Out {
        points: usize,
        pairs_per_point: usize,
        threshold: f64,
        quasi_periodicity_max: f64,
        equivariance_max: f64,
        pass: bool,
    }
    let out = Out {
        points,
        pairs_per_point: pairs.len(),
        threshold,
        quasi_periodicity_max: qp_max,
        equivariance_max: eq_max,
        pass: true,
    };
    render_json(config, &out)
}

fn set_coble_config(
    config: &mut RunConfig,
    kind: HypersurfaceKind,
    seed: u64,
    samples: usize,
) {
    config.nu = Some(kind.nu());
    config.g = Some(kind.g());
    config.n = Some(kind.degree());
    config.degree = Some(kind.degree());
    config.kind = Some(
        match kind {
            HypersurfaceKind::Cubic => "cubic",
            HypersurfaceKind::Quartic => "quartic",
        }
        .to_string(),
    );
    config.seed = Some(seed);
    config.samples = Some(samples);
    config.theta_tol = Some(DEFAULT_TOL);
    config.with_rank_defaults();
}

fn cmd_coble(
    config: &mut RunConfig,
    kind: HypersurfaceKind,
    period_path: Option<PathBuf>,
    seed: u64,
    samples: usize,
) -> Result<String> {
    set_coble_config(config, kind, seed, samples);
    let period = resolve_period(&period_path, kind.g(), seed, config)?;
    let (form, report) = coble_hypersurface(kind, &period, samples, seed)?;

    #[derive(Serialize)]
    struct Out {
        big_n: usize,
        invariant_coefficients: Vec<ComplexJson>,
        singular_values: Vec<f64>,
        form: FormJson,
        report: NullspaceReportJson,
    }
    let out = Out {
        big_n: kind.big_n(),
        invariant_coefficients: report.nullspace[0].iter().map(|&c| c.into()).collect(),
        singular_values: report.singular_values.clone(),
        form: form_to_json(&form),
        report: (&report).into(),
    };
    render_json(config, &out)
}

fn cmd_uniqueness(
    config: &mut RunConfig,
    kind: HypersurfaceKind,
    period_path: Option<PathBuf>,
    seed: u64,
    samples: usize,
) -> Result<String> {
    set_coble_config(config, kind, seed, samples);
    let period = resolve_period(&period_path, kind.g(), seed, config)?;
    let report = verify_uniqueness_full_space(kind, &period, samples, seed)?;

    #[derive(Serialize)]
    struct Out {
        full_space_cols: usize,
        report: NullspaceReportJson,
    }
    let out = Out {
        full_space_cols: report.cols,
        report: (&report).into(),
    };
    render_json(config, &out)
}

fn cmd_dim_report(
    config: &mut RunConfig,
    format: Format,
    n: u32,
    g: u32,
    period_path: Option<PathBuf>,
    seed: u64,
) -> Result<String> {
    config.n = Some(n);
    config.g = Some(g);
    config.seed = Some(seed);
    config.theta_tol = Some(DEFAULT_TOL);
    config.with_rank_defaults();
    let period = resolve_period(&period_path, g, seed, config)?;
    let report = dimension_report(n, g, &period, seed)?;
    config.nu = Some(report.nu);

    match format {
        Format::Json => render_json(config, &DimensionReportJson::from(&report)),
        Format::Csv => render_csv(config, "quantity,value,expected", &dim_report_rows(&report)),
    }
}

fn dim_report_rows(r: &DimensionReport) -> Vec<String> {
    fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
        v.as_ref().map(|x| x.to_string()).unwrap_or_default()
    }
    let mut rows = vec![
        format!("n,{},", r.n),
        format!("nu,{},", r.nu),
        format!("g,{},", r.g),
        format!("big_n,{},", r.big_n),
        format!("points_used,{},", r.points_used),
        format!("dim_invariant_forms,{},", r.dim_invariant_forms),
        format!("m,{},{}", r.m_computed, r.m_formula),
        format!("eval_cols_nm1,{},", r.eval_cols_nm1),
        format!("eval_rank_nm1,{},", r.eval_rank_nm1),
        format!(
            "dim_ideal_nm1,{},{}",
            r.dim_ideal_nm1,
            opt(&r.expected_dim_ideal_nm1)
        ),
        format!(
            "dim_ideal_n_invariant,{},{}",
            r.dim_ideal_n_invariant,
            opt(&r.expected_dim_ideal_n_invariant)
        ),
    ];
    if let Some(pr) = r.polar_rank {
        rows.push(format!("polar_rank,{pr},"));
    }
    if let Some(ps) = r.polars_span_ideal {
        rows.push(format!("polars_span_ideal,{ps},"));
    }
    if let Some(p3) = &r.prop3 {
        rows.push(format!("prop3_hom_v_v,{},", p3.hom_v_v));
        rows.push(format!(
            "prop3_surjection_possible,{},",
            p3.surjection_possible
        ));
    }
    rows
}
