//! JSON report documents. The layout is described by
//! `schema/report.schema.json`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use semiquant_core::hybridfield::{self, FieldParams, Mat2, ModeEstimate, Positivity, Residue, SpectralData};
use semiquant_core::nogo::{Certificate, Family, NoGoReport, SolveOutcome, StepRecord, Verdict, DIMS};
use semiquant_core::planewave::{ScanRow, WaveVector};
use semiquant_core::Monomial;

use crate::exprio::{format_gaussian, format_monomial, format_unit};

pub const SCHEMA_VERSION: &str = "1.0";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: String,
    pub tool_version: String,
    pub command: String,
    pub parameters: Value,
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Envelope {
    pub fn new(command: &str, parameters: Value, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            parameters,
            payload,
            wall_time_s: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Bracket(BracketResult),
    Nogo(NoGoSummary),
    Scan(ScanSummary),
    Field(FieldReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub argument: String,
    pub defect: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketResult {
    pub bracket: String,
    pub dims: [usize; 2],
    pub a: String,
    pub b: String,
    pub result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<Defect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leibniz: Option<Defect>,
}

fn mono(m: &Monomial) -> String {
    format_monomial(DIMS, m)
}

fn family(f: Family) -> String {
    f.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConstant {
    pub unknown: String,
    pub pair: [String; 2],
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub class: String,
    pub triples: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub class: String,
    pub triple: [String; 3],
    pub residual: String,
    pub residual_symbolic: String,
    pub witness_monomial: String,
    pub witness_value: String,
}

impl From<&Certificate> for CertificateSummary {
    fn from(c: &Certificate) -> Self {
        Self {
            class: c.class.to_string(),
            triple: [mono(&c.triple[0]), mono(&c.triple[1]), mono(&c.triple[2])],
            residual: format_unit(&c.residual),
            residual_symbolic: crate::exprio::format(&c.residual_symbolic),
            witness_monomial: mono(&c.witness_monomial),
            witness_value: format_gaussian(&c.witness_value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InconsistentRow {
    pub class: String,
    pub triple: [String; 3],
    pub monomial: String,
    pub reduced_constant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub index: usize,
    pub pairs: String,
    pub unknowns: usize,
    pub determining: [String; 2],
    pub equations: usize,
    /// `unique`, `underdetermined` or `inconsistent`
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inconsistent_row: Option<InconsistentRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches_standard_hybrid: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolved: Vec<ResolvedConstant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
}

impl From<&StepRecord> for StepSummary {
    fn from(s: &StepRecord) -> Self {
        let outcome = match s.outcome() {
            semiquant_core::nogo::StepOutcome::Unique => "unique",
            semiquant_core::nogo::StepOutcome::Underdetermined => "underdetermined",
            semiquant_core::nogo::StepOutcome::Inconsistent => "inconsistent",
        };
        let mut out = StepSummary {
            index: s.index,
            pairs: format!("{} x {}", family(s.pair_class.0), family(s.pair_class.1)),
            unknowns: s.unknown_count(),
            determining: [s.determining[0].to_string(), s.determining[1].to_string()],
            equations: s.equations,
            outcome: outcome.into(),
            rank: None,
            free: Vec::new(),
            inconsistent_row: None,
            check: s.check.as_ref().map(|c| CheckSummary {
                class: c.class.to_string(),
                triples: c.triples,
                failures: c.failures,
            }),
            matches_standard_hybrid: s.matches_standard_hybrid,
            resolved: Vec::new(),
            certificate: s.certificate.as_ref().map(CertificateSummary::from),
        };
        match &s.solve {
            SolveOutcome::Unique(values) => {
                out.rank = Some(values.len());
                out.resolved = s
                    .unknowns
                    .iter()
                    .zip(&s.pairs)
                    .map(|(u, (a, b))| ResolvedConstant {
                        unknown: u.to_string(),
                        pair: [mono(a), mono(b)],
                        value: format_gaussian(&values[u]),
                    })
                    .collect();
            }
            SolveOutcome::Underdetermined { free, rank } => {
                out.rank = Some(*rank);
                out.free = free.iter().map(|u| u.to_string()).collect();
            }
            SolveOutcome::Inconsistent { equation, constant } => {
                let p = &equation.provenance;
                out.inconsistent_row = Some(InconsistentRow {
                    class: p.class.to_string(),
                    triple: [mono(&p.triple[0]), mono(&p.triple[1]), mono(&p.triple[2])],
                    monomial: mono(&p.monomial),
                    reduced_constant: format_gaussian(constant),
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoGoSummary {
    pub requested_steps: usize,
    pub unknown_counts: Vec<usize>,
    /// `consistent`, `obstructed` or `undetermined`
    pub verdict: String,
    pub verdict_step: usize,
    pub matches_prediction: bool,
    pub steps: Vec<StepSummary>,
}

impl From<&NoGoReport> for NoGoSummary {
    fn from(r: &NoGoReport) -> Self {
        let (verdict, verdict_step) = match r.verdict {
            Verdict::Consistent { through_step } => ("consistent", through_step),
            Verdict::Obstructed { step } => ("obstructed", step),
            Verdict::Undetermined { step } => ("undetermined", step),
        };
        Self {
            requested_steps: r.requested_steps,
            unknown_counts: r.unknown_counts(),
            verdict: verdict.into(),
            verdict_step,
            matches_prediction: r.matches_prediction(),
            steps: r.steps.iter().map(StepSummary::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessTriple {
    /// Each vector as `[q, p, x, k]`.
    pub triple: [[f64; 4]; 3],
    pub residual: f64,
}

impl WitnessTriple {
    pub fn new(t: &[WaveVector; 3], residual: f64) -> Self {
        let v = |w: &WaveVector| [w.q, w.p, w.x, w.k];
        Self {
            triple: [v(&t[0]), v(&t[1]), v(&t[2])],
            residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRowSummary {
    /// `null` for the linear member.
    pub h: Option<f64>,
    pub err_u: f64,
    pub err_v: f64,
}

impl From<&ScanRow> for ScanRowSummary {
    fn from(r: &ScanRow) -> Self {
        Self {
            h: r.h,
            err_u: r.err_u,
            err_v: r.err_v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanChecks {
    pub qq_jacobi: bool,
    pub linear_jacobi: bool,
    pub standard_s_violation: bool,
    pub ode: bool,
    pub postulates_incompatible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub seed: u64,
    pub triples: usize,
    pub qq_max_residual: f64,
    pub linear_max_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_s_witness: Option<WitnessTriple>,
    pub ode_h_grid: Vec<f64>,
    pub ode_max_residual: f64,
    pub samples: usize,
    pub scan: Vec<ScanRowSummary>,
    pub min_max_error: f64,
    pub checks: ScanChecks,
    pub matches_prediction: bool,
}

pub type Matrix = [[f64; 2]; 2];

pub fn matrix(m: &Mat2) -> Matrix {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub m1sq: f64,
    pub m2sq: f64,
    pub g: f64,
    pub hbar1: f64,
    pub hbar2: f64,
}

impl From<&FieldParams> for ParamsSummary {
    fn from(p: &FieldParams) -> Self {
        Self {
            m1sq: p.m1sq(),
            m2sq: p.m2sq(),
            g: p.g(),
            hbar1: p.hbar1(),
            hbar2: p.hbar2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub r: f64,
    pub mplussq: f64,
    pub mminussq: f64,
    pub m3sq: f64,
    pub qplus: Matrix,
    pub qminus: Matrix,
    pub q3: Matrix,
    pub degenerate: bool,
}

impl From<&SpectralData> for SpectrumSummary {
    fn from(s: &SpectralData) -> Self {
        Self {
            r: s.spectrum.r,
            mplussq: s.spectrum.mplussq,
            mminussq: s.spectrum.mminussq,
            m3sq: s.spectrum.m3sq,
            qplus: matrix(&s.qplus),
            qminus: matrix(&s.qminus),
            q3: matrix(&s.q3),
            degenerate: s.degenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityWitnessSummary {
    /// `Q+`, `Q-` or `Q3`
    pub residue: String,
    pub matrix: Matrix,
    pub eigenvalue: f64,
    pub eigenvector: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivitySummary {
    /// `positive` or `not_positive`
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PositivityWitnessSummary>,
}

impl From<&Positivity> for PositivitySummary {
    fn from(p: &Positivity) -> Self {
        match p {
            Positivity::Positive => Self {
                verdict: "positive".into(),
                witness: None,
            },
            Positivity::NotPositive(w) => Self {
                verdict: "not_positive".into(),
                witness: Some(PositivityWitnessSummary {
                    residue: match w.residue {
                        Residue::Plus => "Q+",
                        Residue::Minus => "Q-",
                        Residue::Three => "Q3",
                    }
                    .into(),
                    matrix: matrix(&w.matrix),
                    eigenvalue: w.eigenvalue,
                    eigenvector: [w.eigenvector[0], w.eigenvector[1]],
                }),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub ksq: f64,
    pub mean: [f64; 2],
    pub mean_se: [f64; 2],
    pub covariance: Matrix,
    pub covariance_se: Matrix,
    pub propagator: Matrix,
    /// `(cov - W)/se` for the entries `11`, `12`, `22`.
    pub z_scores: [f64; 3],
    /// Connected four-point function per component; zero for a Gaussian process.
    pub connected4: [f64; 2],
    pub connected4_se: [f64; 2],
}

impl ModeSummary {
    pub fn new(p: &FieldParams, m: &ModeEstimate) -> Self {
        let w = hybridfield::propagator(p, m.ksq);
        let z = |i: usize, j: usize| {
            let d = m.cov[(i, j)] - w[(i, j)];
            if m.cov_se[(i, j)] > 0.0 {
                d / m.cov_se[(i, j)]
            } else if d == 0.0 {
                0.0
            } else {
                f64::MAX.copysign(d)
            }
        };
        Self {
            ksq: m.ksq,
            mean: m.mean,
            mean_se: m.mean_se,
            covariance: matrix(&m.cov),
            covariance_se: matrix(&m.cov_se),
            propagator: matrix(&w),
            z_scores: [z(0, 0), z(0, 1), z(1, 1)],
            connected4: m.connected4,
            connected4_se: m.connected4_se,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub seed: u64,
    pub dtau: f64,
    pub n_steps: usize,
    pub n_burnin: usize,
    pub n_batches: usize,
    pub stability_bound: f64,
    pub modes: Vec<ModeSummary>,
    /// Fraction of `(entry, k)` pairs within 4 standard errors of `W(k)`.
    pub agreement_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum FieldReport {
    Spectrum {
        params: ParamsSummary,
        spectrum: SpectrumSummary,
    },
    Positivity {
        params: ParamsSummary,
        spectrum: SpectrumSummary,
        positivity: PositivitySummary,
    },
    Simulate {
        params: ParamsSummary,
        simulation: SimulationSummary,
    },
}
