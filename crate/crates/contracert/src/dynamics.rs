//! Slope-restricted activations, the firing-rate / Hopfield vector fields,
//! a fixed-step 4th-order integrator, and empirical contraction measurement.

use crate::certify::{ContractionCertificate, Model};
use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::mat::vec_sub;

/// Slack on empirical contraction rates, absorbing time discretization.
pub const TOL_DYN: f64 = 1e-3;

/// Elementwise activation with difference quotients in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub enum ActivationKind {
    ReLU,
    Logistic,
    Tanh,
    Saturation { mu: Vec<f64>, nu: Vec<f64> },
}

impl ActivationKind {
    pub fn saturation(mu: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if mu.len() != nu.len() {
            return Err(Error::DimensionMismatch(format!(
                "saturation bounds: {} vs {}",
                mu.len(),
                nu.len()
            )));
        }
        if mu.iter().zip(&nu).any(|(m, n)| m > n) {
            return Err(Error::Domain("saturation requires mu <= nu".into()));
        }
        Ok(Self::Saturation { mu, nu })
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if let Self::Saturation { mu, .. } = self {
            if mu.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "saturation dim {} vs input {}",
                    mu.len(),
                    n
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(z.len())?;
        Ok(match self {
            Self::ReLU => z.iter().map(|&v| v.max(0.0)).collect(),
            Self::Logistic => z.iter().map(|&v| 1.0 / (1.0 + (-v).exp())).collect(),
            Self::Tanh => z.iter().map(|&v| v.tanh()).collect(),
            Self::Saturation { mu, nu } => z
                .iter()
                .enumerate()
                .map(|(i, &v)| v.clamp(mu[i], nu[i]))
                .collect(),
        })
    }

    /// Almost-everywhere derivative; slope 0 at non-smooth points (ReLU at 0,
    /// saturation at its box corners) so results are deterministic.
    pub fn slope(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(z.len())?;
        Ok(match self {
            Self::ReLU => z.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect(),
            Self::Logistic => z
                .iter()
                .map(|&v| {
                    let s = 1.0 / (1.0 + (-v).exp());
                    s * (1.0 - s)
                })
                .collect(),
            Self::Tanh => z
                .iter()
                .map(|&v| {
                    let t = v.tanh();
                    1.0 - t * t
                })
                .collect(),
            Self::Saturation { mu, nu } => z
                .iter()
                .enumerate()
                .map(|(i, &v)| if v > mu[i] && v < nu[i] { 1.0 } else { 0.0 })
                .collect(),
        })
    }

    /// Whether the slope attains (or reaches in the limit, within f64) both
    /// 0 and 1 — needed for vertex-targeted tightness probing. The logistic
    /// slope tops out at 1/4.
    pub fn slope_reaches_extremes(&self) -> bool {
        !matches!(self, Self::Logistic)
    }

    /// A pre-activation whose slope pattern matches the given bits
    /// (1 = unit slope, 0 = flat), coordinate by coordinate.
    pub fn preactivation_for(&self, bits: &[u8]) -> Vec<f64> {
        bits.iter()
            .enumerate()
            .map(|(i, &b)| match self {
                Self::ReLU | Self::Logistic => {
                    if b == 1 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                // tanh'(0) = 1 exactly; tanh(40) rounds to 1.0 so the slope
                // underflows to exactly 0
                Self::Tanh => {
                    if b == 1 {
                        0.0
                    } else {
                        40.0
                    }
                }
                Self::Saturation { mu, nu } => {
                    if b == 1 {
                        0.5 * (mu[i] + nu[i])
                    } else {
                        nu[i] + 1.0
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct NetworkModel {
    pub model: Model,
    pub w: SymmetricMatrix,
    pub u: Vec<f64>,
    pub activation: ActivationKind,
}

impl NetworkModel {
    pub fn new(
        model: Model,
        w: SymmetricMatrix,
        u: Vec<f64>,
        activation: ActivationKind,
    ) -> Result<Self> {
        if u.len() != w.n() {
            return Err(Error::DimensionMismatch(format!(
                "stimulus dim {} vs matrix {}",
                u.len(),
                w.n()
            )));
        }
        activation.check_dim(w.n())?;
        Ok(Self {
            model,
            w,
            u,
            activation,
        })
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory is never empty")
    }
}

pub fn vector_field(m: &NetworkModel, x: &[f64]) -> Result<Vec<f64>> {
    let n = m.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs model {}",
            x.len(),
            n
        )));
    }
    match m.model {
        Model::Fnn => {
            let mut z = m.w.mat().matvec(x);
            for i in 0..n {
                z[i] += m.u[i];
            }
            let phi = m.activation.apply(&z)?;
            Ok((0..n).map(|i| -x[i] + phi[i]).collect())
        }
        Model::Hnn => {
            let phi = m.activation.apply(x)?;
            let wz = m.w.mat().matvec(&phi);
            Ok((0..n).map(|i| -x[i] + wz[i] + m.u[i]).collect())
        }
    }
}

/// One classical 4th-order step.
pub fn rk4_step(m: &NetworkModel, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = m.n();
    let k1 = vector_field(m, x)?;
    let xk = |ki: &[f64], h: f64| -> Vec<f64> { (0..n).map(|i| x[i] + h * ki[i]).collect() };
    let k2 = vector_field(m, &xk(&k1, step / 2.0))?;
    let k3 = vector_field(m, &xk(&k2, step / 2.0))?;
    let k4 = vector_field(m, &xk(&k3, step))?;
    let mut out = x.to_vec();
    for i in 0..n {
        out[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if !out[i].is_finite() {
            return Err(Error::NonFiniteState(out[i]));
        }
    }
    Ok(out)
}

/// Classical 4th-order fixed-step integration.
pub fn integrate(m: &NetworkModel, x0: &[f64], step: f64, horizon: f64) -> Result<Trajectory> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Domain(format!(
            "step must lie in (0, 0.1] for unit dissipation, got {step}"
        )));
    }
    if horizon < step {
        return Err(Error::Domain(format!(
            "horizon {horizon} shorter than step {step}"
        )));
    }
    let n = m.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "x0 dim {} vs model {}",
            x0.len(),
            n
        )));
    }
    let steps = (horizon / step).ceil() as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    states.push(x.clone());
    times.push(0.0);
    for k in 0..steps {
        x = rk4_step(m, &x, step)?;
        states.push(x.clone());
        times.push((k + 1) as f64 * step);
    }
    Ok(Trajectory {
        times,
        states,
        step,
    })
}

#[derive(Debug, Clone)]
pub struct ContractionMeasurement {
    /// sup over sampled t > 0 of ln(delta(t)/delta(0)) / t in the
    /// certificate norm.
    pub empirical_rate: f64,
    /// true if the empirical rate exceeds -cert.rate + TOL_DYN.
    pub violated: bool,
    pub delta0: f64,
    pub delta_final: f64,
}

/// Runs two trajectories and measures their separation in the certificate
/// norm against the certified exponential envelope.
pub fn measure_contraction(
    m: &NetworkModel,
    cert: &ContractionCertificate,
    x0: &[f64],
    y0: &[f64],
    step: f64,
    horizon: f64,
) -> Result<ContractionMeasurement> {
    let d0 = cert.delta_norm(&vec_sub(x0, y0))?;
    if d0 == 0.0 {
        return Err(Error::Domain("x0 and y0 must differ".into()));
    }
    let tx = integrate(m, x0, step, horizon)?;
    let ty = integrate(m, y0, step, horizon)?;
    let mut rate = f64::NEG_INFINITY;
    let mut d_final = d0;
    for k in 1..tx.states.len() {
        let d = cert.delta_norm(&vec_sub(&tx.states[k], &ty.states[k]))?;
        rate = rate.max((d / d0).ln() / tx.times[k]);
        d_final = d;
    }
    Ok(ContractionMeasurement {
        empirical_rate: rate,
        violated: rate > -cert.rate + TOL_DYN,
        delta0: d0,
        delta_final: d_final,
    })
}
