//! File formats: matrix / QP / simulation JSON inputs, certificate /
//! report / solution JSON outputs, trajectory CSV. All reals are written
//! with 17 significant digits so parsing them back is bit-exact.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certify::{CertificateCase, ContractionCertificate, Model};
use crate::dynamics::{ActivationKind, NetworkModel, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{SymmetricMatrix, WeightLabel};
use crate::polytope::{OptimalityReport, Verdict};
use crate::qp::{QpProblem, QpSolution};

/// Asymmetry gate on all matrix inputs.
pub const SYMMETRY_TOL: f64 = 1e-9;

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with every float in scientific notation at full precision.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Parse(format!("non-utf8 output: {e}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    data: Vec<f64>,
}

/// Reads {n, data: row-major n^2 reals}; rejects asymmetry beyond 1e-9 and
/// non-finite entries, then symmetrizes.
pub fn parse_matrix_json(path: &Path) -> Result<SymmetricMatrix> {
    let f: MatrixFile = read_json(path)?;
    if f.data.len() != f.n * f.n {
        return Err(Error::Parse(format!(
            "{}: data has {} entries, expected n^2 = {}",
            path.display(),
            f.data.len(),
            f.n * f.n
        )));
    }
    let m = crate::mat::Mat::from_rows(f.n, f.n, &f.data);
    SymmetricMatrix::new_checked(m, SYMMETRY_TOL)
}

#[derive(Debug, Serialize, Deserialize)]
struct QpFile {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<f64>,
    u: Vec<f64>,
    mu: Vec<f64>,
    nu: Vec<f64>,
}

pub fn parse_qp_json(path: &Path) -> Result<QpProblem> {
    let f: QpFile = read_json(path)?;
    if f.a.len() != f.n * f.n {
        return Err(Error::Parse(format!(
            "{}: A has {} entries, expected {}",
            path.display(),
            f.a.len(),
            f.n * f.n
        )));
    }
    let m = crate::mat::Mat::from_rows(f.n, f.n, &f.a);
    let a = SymmetricMatrix::new_checked(m, SYMMETRY_TOL)?;
    QpProblem::new(a, f.u, f.mu, f.nu)
}

#[derive(Debug, Serialize, Deserialize)]
struct ActivationFile {
    kind: String,
    #[serde(default)]
    mu: Option<Vec<f64>>,
    #[serde(default)]
    nu: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SimulationFile {
    n: usize,
    #[serde(rename = "W")]
    w: Vec<f64>,
    u: Vec<f64>,
    model: Option<String>,
    activation: ActivationFile,
    x0: Vec<f64>,
}

fn parse_model(s: &str) -> Result<Model> {
    match s {
        "fnn" => Ok(Model::Fnn),
        "hnn" => Ok(Model::Hnn),
        other => Err(Error::Parse(format!("unknown model '{other}'"))),
    }
}

fn parse_activation(f: &ActivationFile) -> Result<ActivationKind> {
    match f.kind.as_str() {
        "relu" => Ok(ActivationKind::ReLU),
        "logistic" => Ok(ActivationKind::Logistic),
        "tanh" => Ok(ActivationKind::Tanh),
        "saturation" => {
            let mu = f
                .mu
                .clone()
                .ok_or_else(|| Error::Parse("saturation needs 'mu'".into()))?;
            let nu = f
                .nu
                .clone()
                .ok_or_else(|| Error::Parse("saturation needs 'nu'".into()))?;
            ActivationKind::saturation(mu, nu)
        }
        other => Err(Error::Parse(format!("unknown activation '{other}'"))),
    }
}

/// Reads {n, W, u, model?, activation: {kind, mu?, nu?}, x0}. A model given
/// on the command line overrides the file.
pub fn parse_simulation_json(
    path: &Path,
    model_override: Option<Model>,
) -> Result<(NetworkModel, Vec<f64>)> {
    let f: SimulationFile = read_json(path)?;
    if f.w.len() != f.n * f.n {
        return Err(Error::Parse(format!(
            "{}: W has {} entries, expected {}",
            path.display(),
            f.w.len(),
            f.n * f.n
        )));
    }
    let w = SymmetricMatrix::new_checked(crate::mat::Mat::from_rows(f.n, f.n, &f.w), SYMMETRY_TOL)?;
    let model = match model_override {
        Some(m) => m,
        None => parse_model(
            f.model
                .as_deref()
                .ok_or_else(|| Error::Parse("no model in file and none given".into()))?,
        )?,
    };
    let activation = parse_activation(&f.activation)?;
    if f.x0.len() != f.n {
        return Err(Error::Parse(format!(
            "{}: x0 has {} entries, expected {}",
            path.display(),
            f.x0.len(),
            f.n
        )));
    }
    let m = NetworkModel::new(model, w, f.u, activation)?;
    Ok((m, f.x0))
}

fn model_str(m: Model) -> &'static str {
    match m {
        Model::Fnn => "fnn",
        Model::Hnn => "hnn",
    }
}

fn case_str(c: CertificateCase) -> &'static str {
    match c {
        CertificateCase::AlphaNeg => "AlphaNeg",
        CertificateCase::AlphaZeroEps => "AlphaZeroEps",
        CertificateCase::AlphaIn01 => "AlphaIn01",
        CertificateCase::AlphaOne => "AlphaOne",
        CertificateCase::SingularKernel => "SingularKernel",
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::LogOptimal => "LogOptimal",
        Verdict::LogEpsOptimal => "LogEpsOptimal",
        Verdict::Violated => "Violated",
    }
}

fn label_str(l: &WeightLabel) -> String {
    match l {
        WeightLabel::Qf(b) => format!("qf({b:.16e})"),
        WeightLabel::Qh(b) => format!("qh({b:.16e})"),
        WeightLabel::NegWSqrt => "neg-w-sqrt".into(),
        WeightLabel::NegWInvSqrt => "neg-w-inv-sqrt".into(),
        WeightLabel::Identity => "identity".into(),
        WeightLabel::Custom => "custom".into(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WeightJson {
    pub label: String,
    pub n: usize,
    /// row-major entries of the (symmetric, invertible) weight Q
    pub entries: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerificationJson {
    pub max_vertex_lognorm: f64,
    pub vertices_checked: u64,
    pub verdict: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub model: String,
    pub case: String,
    pub rate: f64,
    #[serde(rename = "alpha_W")]
    pub alpha_w: f64,
    pub epsilon: Option<f64>,
    pub weight: WeightJson,
    pub verification: VerificationJson,
}

pub fn certificate_json(c: &ContractionCertificate) -> CertificateJson {
    CertificateJson {
        model: model_str(c.model).into(),
        case: case_str(c.case).into(),
        rate: c.rate,
        alpha_w: c.alpha_w,
        epsilon: c.epsilon,
        weight: WeightJson {
            label: label_str(c.weight.label()),
            n: c.weight.n(),
            entries: c.weight.q().data().to_vec(),
        },
        verification: VerificationJson {
            max_vertex_lognorm: c.verification.max_vertex_lognorm,
            vertices_checked: c.verification.vertices_checked,
            verdict: verdict_str(c.verification.verdict).into(),
        },
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub max_vertex_lognorm: f64,
    pub max_vertex_abscissa: f64,
    pub claimed_bound: f64,
    pub epsilon_used: Option<f64>,
    pub vertices_checked: u64,
    pub verdict: String,
    pub sampled: bool,
}

pub fn report_json(r: &OptimalityReport) -> ReportJson {
    ReportJson {
        max_vertex_lognorm: r.max_vertex_lognorm,
        max_vertex_abscissa: r.max_vertex_abscissa,
        claimed_bound: r.claimed_bound,
        epsilon_used: r.epsilon_used,
        vertices_checked: r.vertices_checked,
        verdict: verdict_str(r.verdict).into(),
        sampled: r.sampled,
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionJson {
    pub x: Vec<f64>,
    pub objective: f64,
    pub kkt_residual: f64,
    pub rate: f64,
    pub steps: u64,
}

pub fn solution_json(s: &QpSolution) -> SolutionJson {
    SolutionJson {
        x: s.x_star.clone(),
        objective: s.objective,
        kkt_residual: s.kkt_residual,
        rate: s.certificate.rate,
        steps: s.iterations,
    }
}

/// Header `t,x1,...,xn`, one row per step.
pub fn trajectory_csv(t: &Trajectory) -> String {
    let n = t.states[0].len();
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for (k, s) in t.states.iter().enumerate() {
        out.push_str(&format!("{:.16e}", t.times[k]));
        for v in s {
            out.push_str(&format!(",{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

/// Writes to the path, or stdout when none is given.
pub fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => {
            std::fs::write(p, text)?;
        }
        None => {
            let mut so = std::io::stdout();
            so.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                so.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}
