//! `semiquant` subcommands.
//!
//! Exit codes: 0 success or reproduction, 1 internal error, 2 bad input,
//! 3 the computation ran but disagreed with the predicted outcome.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use semiquant_core::algebra::{bracket, jacobiator, leibniz_defect, BracketKind};
use semiquant_core::hybridfield::{self, default_k_grid, FieldParams, SimConfig};
use semiquant_core::nogo::run_verification;
use semiquant_core::planewave::{self, FKind};
use semiquant_core::{Dims, FieldError};

use crate::exprio::{format, parse, ParseError};
use crate::grid::read_k_grid;
use crate::parallel::simulate_parallel;
use crate::report::{
    BracketResult, Defect, Envelope, FieldReport, ModeSummary, NoGoSummary, ParamsSummary, Payload, PositivitySummary,
    ScanChecks, ScanRowSummary, ScanSummary, SimulationSummary, SpectrumSummary, WitnessTriple,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEVIATION: i32 = 3;

pub const SEED_ENV: &str = "SEMIQUANT_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "semiquant",
    version,
    about = "Verifiers for hybrid quantum-classical dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Output {
    /// Write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Include wall time in the JSON report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a bracket of two observables.
    Bracket(BracketArgs),
    /// Run the bracket-table induction.
    Nogo(NogoArgs),
    /// Two coupled quadratic fields.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Numerical checks of the plane-wave structure functions.
    PlanewaveCheck(PlanewaveArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    /// (A,B)_q = [A,B]/(i hbar)
    Q,
    /// Poisson bracket
    C,
    /// standard hybrid bracket
    S,
    /// quantum plus Poisson, not antisymmetrized
    A,
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::Q => "q",
            KindArg::C => "c",
            KindArg::S => "s",
            KindArg::A => "a",
        }
    }

    fn kind(self) -> BracketKind {
        match self {
            KindArg::Q => BracketKind::Quantum,
            KindArg::C => BracketKind::Poisson,
            KindArg::S => BracketKind::StandardHybrid,
            KindArg::A => BracketKind::AndersonHybrid,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct BracketArgs {
    pub a: String,
    pub b: String,
    #[arg(long, value_enum, default_value = "s")]
    pub kind: KindArg,
    /// Also report the jacobiator with this third observable.
    #[arg(long, value_name = "C")]
    pub jacobi: Option<String>,
    /// Also report the Leibniz defect (AB,H) - (A,H)B - A(B,H).
    #[arg(long, value_name = "H")]
    pub leibniz: Option<String>,
    /// Number of quantum degrees of freedom.
    #[arg(long, default_value_t = 1)]
    pub nq: usize,
    /// Number of classical degrees of freedom.
    #[arg(long, default_value_t = 1)]
    pub nc: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct NogoArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub steps: u8,
    /// Alias of the global --json.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FieldArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m1sq: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m2sq: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hbar1: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hbar2: f64,
}

impl FieldArgs {
    fn params(&self) -> Result<FieldParams, FieldError> {
        FieldParams::new(self.m1sq, self.m2sq, self.g, self.hbar1, self.hbar2)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SimArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    /// Comma-separated k^2 values.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "grid_file",
        allow_hyphen_values = true
    )]
    pub k2: Vec<f64>,
    /// File with one k^2 value per line.
    #[arg(long, value_name = "PATH")]
    pub grid_file: Option<PathBuf>,
    #[arg(long, env = SEED_ENV, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.003)]
    pub dtau: f64,
    #[arg(long, default_value_t = 100_000)]
    pub n_steps: usize,
    #[arg(long, default_value_t = 5_000)]
    pub n_burnin: usize,
    #[arg(long, default_value_t = 20)]
    pub batches: usize,
    /// Worker threads; defaults to the rayon default.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct FieldOnly {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Subcommand, Debug)]
pub enum FieldCommand {
    /// Masses, residues and the degenerate flag.
    Spectrum(FieldOnly),
    /// Reflection-positivity verdict with a witness.
    Positivity(FieldOnly),
    /// Mode-wise Langevin simulation against the closed-form propagator.
    Simulate(SimArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct PlanewaveArgs {
    #[arg(long, env = SEED_ENV, default_value_t = planewave::DEFAULT_SEED)]
    pub seed: u64,
    /// Random triples per Jacobi check.
    #[arg(long, default_value_t = 1000)]
    pub triples: usize,
    /// Sample points on [-pi, pi] for the postulate scan.
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Matrix(m) => Failure::Internal(m),
            e => Failure::Input(e.to_string()),
        }
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub text: String,
    pub envelope: Envelope,
    pub deviation: bool,
}

fn parse_expr(label: &str, src: &str, dims: Dims) -> Result<semiquant_core::Observable, Failure> {
    parse(src, dims).map_err(|e: ParseError| Failure::Input(format!("{label}: {}", e.diagnostic(src))))
}

fn params_json<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

pub fn cmd_bracket(args: &BracketArgs) -> Result<Outcome, Failure> {
    let dims = Dims {
        quantum: args.nq,
        classical: args.nc,
    };
    let kind = args.kind.kind();
    let a = parse_expr("A", &args.a, dims)?;
    let b = parse_expr("B", &args.b, dims)?;
    let result = bracket(kind, &a, &b);
    let name = args.kind.name();
    let mut text = format!("({}, {})_{name} = {}\n", format(&a), format(&b), format(&result));
    let jacobi = match &args.jacobi {
        Some(src) => {
            let c = parse_expr("C", src, dims)?;
            let j = jacobiator(kind, &a, &b, &c);
            text.push_str(&format!("jacobiator with {} = {}\n", format(&c), format(&j)));
            Some(Defect {
                argument: format(&c),
                defect: format(&j),
                vanishes: j.is_zero(),
            })
        }
        None => None,
    };
    let leibniz = match &args.leibniz {
        Some(src) => {
            let h = parse_expr("H", src, dims)?;
            let l = leibniz_defect(kind, &a, &b, &h);
            text.push_str(&format!("leibniz defect with {} = {}\n", format(&h), format(&l)));
            Some(Defect {
                argument: format(&h),
                defect: format(&l),
                vanishes: l.is_zero(),
            })
        }
        None => None,
    };
    let payload = Payload::Bracket(BracketResult {
        bracket: name.to_string(),
        dims: [args.nq, args.nc],
        a: format(&a),
        b: format(&b),
        result: format(&result),
        jacobi,
        leibniz,
    });
    Ok(Outcome {
        text,
        envelope: Envelope::new("bracket", params_json(args), payload),
        deviation: false,
    })
}

pub fn cmd_nogo(args: &NogoArgs) -> Result<Outcome, Failure> {
    let report = run_verification(args.steps as usize).map_err(|e| Failure::Internal(e.to_string()))?;
    let summary = NoGoSummary::from(&report);
    let mut text = String::new();
    for s in &summary.steps {
        text.push_str(&format!(
            "step {}: {} pairs, {} unknowns, {} equations, {}",
            s.index, s.pairs, s.unknowns, s.equations, s.outcome
        ));
        if let Some(m) = s.matches_standard_hybrid {
            text.push_str(&format!(", equals (,)_s: {m}"));
        }
        if let Some(c) = &s.check {
            text.push_str(&format!(", check {} {}/{} failing", c.class, c.failures, c.triples));
        }
        text.push('\n');
        if let Some(c) = &s.certificate {
            text.push_str(&format!(
                "  certificate: jacobiator({}, {}, {}) = {}  [with hbar: {}]\n",
                c.triple[0], c.triple[1], c.triple[2], c.residual, c.residual_symbolic
            ));
        }
    }
    text.push_str(&format!(
        "unknown counts {:?}, verdict {} at step {}, matches prediction: {}\n",
        summary.unknown_counts, summary.verdict, summary.verdict_step, summary.matches_prediction
    ));
    let deviation = !summary.matches_prediction;
    Ok(Outcome {
        text,
        envelope: Envelope::new("nogo", params_json(args), Payload::Nogo(summary)),
        deviation,
    })
}

fn spectrum_text(s: &SpectrumSummary) -> String {
    format!(
        "R = {}\nm+^2 = {}\nm-^2 = {}\nm3^2 = {}\nQ+ = {:?}\nQ- = {:?}\nQ3 = {:?}\ndegenerate = {}\n",
        s.r, s.mplussq, s.mminussq, s.m3sq, s.qplus, s.qminus, s.q3, s.degenerate
    )
}

pub fn cmd_field(cmd: &FieldCommand) -> Result<Outcome, Failure> {
    match cmd {
        FieldCommand::Spectrum(a) => {
            let p = a.field.params()?;
            let spectrum = SpectrumSummary::from(&hybridfield::residues(&p));
            Ok(Outcome {
                text: spectrum_text(&spectrum),
                envelope: Envelope::new(
                    "field spectrum",
                    params_json(a),
                    Payload::Field(FieldReport::Spectrum {
                        params: ParamsSummary::from(&p),
                        spectrum,
                    }),
                ),
                deviation: false,
            })
        }
        FieldCommand::Positivity(a) => {
            let p = a.field.params()?;
            let spectrum = SpectrumSummary::from(&hybridfield::residues(&p));
            let positivity = PositivitySummary::from(&hybridfield::reflection_positivity(&p));
            let mut text = match &positivity.witness {
                None => "Positive\n".to_string(),
                Some(w) => format!(
                    "NotPositive: {} = {:?} has eigenvalue {} along {:?}\n",
                    w.residue, w.matrix, w.eigenvalue, w.eigenvector
                ),
            };
            text.push_str(&spectrum_text(&spectrum));
            Ok(Outcome {
                text,
                envelope: Envelope::new(
                    "field positivity",
                    params_json(a),
                    Payload::Field(FieldReport::Positivity {
                        params: ParamsSummary::from(&p),
                        spectrum,
                        positivity,
                    }),
                ),
                deviation: false,
            })
        }
        FieldCommand::Simulate(a) => {
            let p = a.field.params()?;
            let k_grid = match (&a.grid_file, a.k2.is_empty()) {
                (Some(path), _) => read_k_grid(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                (None, false) => a.k2.clone(),
                (None, true) => default_k_grid(),
            };
            let mut cfg = SimConfig::new(k_grid, a.dtau, a.n_steps, a.n_burnin, a.seed);
            cfg.n_batches = a.batches;
            cfg.validate(&p)?;
            let rep = match a.threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Failure::Internal(e.to_string()))?
                    .install(|| simulate_parallel(&p, &cfg))?,
                None => simulate_parallel(&p, &cfg)?,
            };
            let modes: Vec<ModeSummary> = rep.modes.iter().map(|m| ModeSummary::new(&p, m)).collect();
            let within = modes.iter().flat_map(|m| m.z_scores).filter(|z| z.abs() <= 4.0).count();
            let agreement_fraction = within as f64 / (3 * modes.len()) as f64;
            let mut text = String::from("k^2    entry  sampled          propagator       z\n");
            for m in &modes {
                for (n, (i, j)) in [(0, 0), (0, 1), (1, 1)].into_iter().enumerate() {
                    text.push_str(&format!(
                        "{:<6} {}{}     {:<16.9} {:<16.9} {:+.2}\n",
                        m.ksq,
                        i + 1,
                        j + 1,
                        m.covariance[i][j],
                        m.propagator[i][j],
                        m.z_scores[n]
                    ));
                }
            }
            for m in &modes {
                text.push_str(&format!(
                    "k^2 = {}: connected 4-point {:+.4} +- {:.4}, {:+.4} +- {:.4}\n",
                    m.ksq, m.connected4[0], m.connected4_se[0], m.connected4[1], m.connected4_se[1]
                ));
            }
            text.push_str(&format!("agreement within 4 SE: {:.3}\n", agreement_fraction));
            let simulation = SimulationSummary {
                seed: cfg.seed,
                dtau: cfg.dtau,
                n_steps: cfg.n_steps,
                n_burnin: cfg.n_burnin,
                n_batches: cfg.n_batches,
                stability_bound: cfg.stability_bound(&p),
                modes,
                agreement_fraction,
            };
            Ok(Outcome {
                text,
                envelope: Envelope::new(
                    "field simulate",
                    params_json(a),
                    Payload::Field(FieldReport::Simulate {
                        params: ParamsSummary::from(&p),
                        simulation,
                    }),
                ),
                deviation: false,
            })
        }
    }
}

/// The `h` grid `0.1, 0.2, ..., 2.0` used for the ODE check.
pub fn ode_h_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 10.0).collect()
}

pub fn cmd_planewave(args: &PlanewaveArgs) -> Result<Outcome, Failure> {
    let (qq, _) = planewave::max_jacobi_residual(FKind::QuantumQuantum, args.triples, args.seed);
    let (lin, _) = planewave::max_jacobi_residual(FKind::Linear, args.triples, args.seed);
    let witness = planewave::find_jacobi_witness(FKind::StandardS, 1e-3, args.triples, args.seed);
    let h_grid = ode_h_grid();
    let ode = h_grid
        .iter()
        .flat_map(|&h| (-20..=20).map(move |j| planewave::ode_residual(FKind::SineFamily(h), j as f64 * 0.25).abs()))
        .fold(0.0, f64::max);
    let scan = planewave::postulate_scan(&planewave::default_h_grid(), args.samples);
    let checks = ScanChecks {
        qq_jacobi: qq < 1e-10,
        linear_jacobi: lin < 1e-10,
        standard_s_violation: witness.is_some(),
        ode: ode < 1e-9,
        postulates_incompatible: scan.incompatible(0.1),
    };
    let ok = checks.qq_jacobi
        && checks.linear_jacobi
        && checks.standard_s_violation
        && checks.ode
        && checks.postulates_incompatible;
    let text = format!(
        "F^qq max Jacobi residual over {} triples: {:e}\nF=u+v max Jacobi residual: {:e}\nF^s witness: {}\n\
         ODE max residual on h in 0.1..2.0: {:e}\npostulate scan min-max error: {:.6} (best h = {})\nmatches prediction: {}\n",
        args.triples,
        qq,
        lin,
        witness.map_or("none".to_string(), |(_, r)| format!("residual {r:.6}")),
        ode,
        scan.min_max_error,
        scan.best.h.map_or("linear".to_string(), |h| h.to_string()),
        ok
    );
    let summary = ScanSummary {
        seed: args.seed,
        triples: args.triples,
        qq_max_residual: qq,
        linear_max_residual: lin,
        standard_s_witness: witness.map(|(t, r)| WitnessTriple::new(&t, r)),
        ode_h_grid: h_grid,
        ode_max_residual: ode,
        samples: scan.samples,
        scan: scan.rows.iter().map(ScanRowSummary::from).collect(),
        min_max_error: scan.min_max_error,
        checks,
        matches_prediction: ok,
    };
    Ok(Outcome {
        text,
        envelope: Envelope::new("planewave-check", params_json(args), Payload::Scan(summary)),
        deviation: !ok,
    })
}

fn output_of(cmd: &Command) -> Output {
    match cmd {
        Command::Bracket(a) => a.out.clone(),
        Command::Nogo(a) => Output {
            json: a.out.clone().or_else(|| a.output.json.clone()),
            timing: a.output.timing,
        },
        Command::Field { command } => match command {
            FieldCommand::Spectrum(a) | FieldCommand::Positivity(a) => a.out.clone(),
            FieldCommand::Simulate(a) => a.out.clone(),
        },
        Command::PlanewaveCheck(a) => a.out.clone(),
    }
}

/// Run with explicit streams; returns the exit code.
pub fn run_with<O: Write, E: Write>(args: impl IntoIterator<Item = OsString>, stdout: &mut O, stderr: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Bracket(a) => cmd_bracket(a),
        Command::Nogo(a) => cmd_nogo(a),
        Command::Field { command } => cmd_field(command),
        Command::PlanewaveCheck(a) => cmd_planewave(a),
    };
    let mut outcome = match result {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            return EXIT_INTERNAL;
        }
    };
    let output = output_of(&cli.command);
    if output.timing {
        outcome.envelope.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    if stdout.write_all(outcome.text.as_bytes()).is_err() {
        return EXIT_INTERNAL;
    }
    if let Some(path) = &output.json {
        if let Err(e) = std::fs::write(path, outcome.envelope.to_json()) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    if outcome.deviation {
        let _ = writeln!(stderr, "deviation: the computed outcome differs from the predicted one");
        return EXIT_DEVIATION;
    }
    EXIT_OK
}

pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut out, &mut err)
}
