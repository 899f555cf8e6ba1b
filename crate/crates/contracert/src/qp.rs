//! Box-constrained quadratic programming by integrating the contracting
//! saturation network x' = -x + sat_{mu,nu}((I-A)x + u), with KKT
//! verification and an exhaustive active-set oracle for small instances.

use crate::certify::{certify_fnn, ContractionCertificate, Model};
use crate::dynamics::{rk4_step, vector_field, ActivationKind, NetworkModel};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, SymmetricMatrix, DEFAULT_EIG_TOL};
use crate::mat::Mat;

/// Default slack for the lambda_min(A) = 1 knife-edge.
pub const QP_EPS: f64 = 1e-3;
/// Absolute tolerance classifying a coordinate as sitting on a box face.
pub const KKT_BOUNDARY_TOL: f64 = 1e-7;

const DEFAULT_STEP: f64 = 1e-2;

/// min 1/2 y'Ay - u'y subject to mu <= y <= nu, with A positive definite.
#[derive(Debug, Clone)]
pub struct QpProblem {
    a: SymmetricMatrix,
    u: Vec<f64>,
    mu: Vec<f64>,
    nu: Vec<f64>,
    lambda_min: f64,
}

impl QpProblem {
    pub fn new(a: SymmetricMatrix, u: Vec<f64>, mu: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        let n = a.n();
        if u.len() != n || mu.len() != n || nu.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {n}x{n} but |u|={}, |mu|={}, |nu|={}",
                u.len(),
                mu.len(),
                nu.len()
            )));
        }
        if mu.iter().zip(&nu).any(|(m, v)| m > v) {
            return Err(Error::Domain("box requires mu <= nu".into()));
        }
        let eig = sym_eig(&a, DEFAULT_EIG_TOL)?;
        let lambda_min = eig.lambda()[n - 1];
        if lambda_min <= eig.rank_tol() {
            return Err(Error::NotPositiveDefinite(lambda_min));
        }
        Ok(Self {
            a,
            u,
            mu,
            nu,
            lambda_min,
        })
    }

    pub fn a(&self) -> &SymmetricMatrix {
        &self.a
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let ax = self.a.mat().matvec(x);
        let mut j = 0.0;
        for i in 0..x.len() {
            j += 0.5 * x[i] * ax[i] - self.u[i] * x[i];
        }
        j
    }
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x_star: Vec<f64>,
    pub kkt_residual: f64,
    pub iterations: u64,
    pub certificate: ContractionCertificate,
    pub objective: f64,
}

/// The saturation network of the problem: W = I - A, stimulus u, activation
/// sat_{mu,nu}. The contraction certificate comes out of the alpha(W)
/// dispatch: lambda_min(A) < 1 gives rate lambda_min(A) with weight
/// Q_F(1 - lambda_min(A)); lambda_min(A) = 1 gives rate 1 - eps;
/// lambda_min(A) > 1 gives rate 1 with weight (A - I)^{1/2}.
pub fn build_network(p: &QpProblem) -> Result<(NetworkModel, ContractionCertificate)> {
    let n = p.n();
    let mut wm = p.a.mat().scale(-1.0);
    for i in 0..n {
        wm[(i, i)] += 1.0;
    }
    let w = SymmetricMatrix::new(wm)?;
    let cert = certify_fnn(&w, Some(QP_EPS))?;
    let act = ActivationKind::saturation(p.mu.clone(), p.nu.clone())?;
    let model = NetworkModel::new(Model::Fnn, w, p.u.clone(), act)?;
    Ok((model, cert))
}

/// Integrates the saturation network to its unique equilibrium. Stops when
/// the field residual in the certificate norm drops below tol * rate, which
/// bounds the distance to the equilibrium by tol.
pub fn solve(
    p: &QpProblem,
    tol: f64,
    step: Option<f64>,
    max_horizon: Option<f64>,
) -> Result<QpSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let step = step.unwrap_or(DEFAULT_STEP);
    let (model, cert) = build_network(p)?;
    let c = cert.rate;
    let target = tol * c;
    let mut x = model.activation.apply(&p.u)?; // sat_{mu,nu}(u): feasible start
    let mut residual = cert.delta_norm(&vector_field(&model, &x)?)?;
    let horizon = max_horizon.unwrap_or_else(|| {
        if residual > tol {
            (residual / tol).ln() / c + 10.0
        } else {
            10.0
        }
    });
    let mut t = 0.0;
    let mut iterations = 0u64;
    while residual > target {
        if t > horizon {
            return Err(Error::HorizonExceeded {
                residual,
                target,
                horizon,
            });
        }
        x = rk4_step(&model, &x, step)?;
        t += step;
        iterations += 1;
        residual = cert.delta_norm(&vector_field(&model, &x)?)?;
    }
    for i in 0..p.n() {
        x[i] = x[i].clamp(p.mu[i], p.nu[i]);
    }
    let kkt_residual = kkt_check(p, &x, KKT_BOUNDARY_TOL)?;
    Ok(QpSolution {
        objective: p.objective(&x),
        kkt_residual,
        iterations,
        certificate: cert,
        x_star: x,
    })
}

/// Max signed violation of the box-KKT sign conditions: interior
/// coordinates contribute |(Ax-u)_i|, lower-active (u-Ax)_i^+, upper-active
/// (Ax-u)_i^+. Coordinates within tol of both faces (degenerate box) are
/// fixed and contribute nothing.
pub fn kkt_check(p: &QpProblem, x: &[f64], tol: f64) -> Result<f64> {
    let n = p.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "x dim {} vs problem {n}",
            x.len()
        )));
    }
    for i in 0..n {
        if x[i] < p.mu[i] - tol || x[i] > p.nu[i] + tol {
            return Err(Error::OutOfBox(i));
        }
    }
    let g: Vec<f64> = p
        .a
        .mat()
        .matvec(x)
        .iter()
        .zip(&p.u)
        .map(|(ax, u)| ax - u)
        .collect();
    let mut res = 0.0f64;
    for i in 0..n {
        let lower = (x[i] - p.mu[i]).abs() <= tol;
        let upper = (x[i] - p.nu[i]).abs() <= tol;
        let v = match (lower, upper) {
            (true, true) => 0.0,
            (true, false) => (-g[i]).max(0.0),
            (false, true) => g[i].max(0.0),
            (false, false) => g[i].abs(),
        };
        res = res.max(v);
    }
    Ok(res)
}

/// Exhaustive 3^n active-set enumeration: every coordinate is lower-active,
/// interior, or upper-active; interior coordinates solve the reduced normal
/// equations and the unique KKT-feasible candidate wins.
pub fn oracle_solve(p: &QpProblem) -> Result<QpSolution> {
    let n = p.n();
    if n > 12 {
        return Err(Error::TooLarge(n));
    }
    let feas_tol = 1e-9;
    let mut assignment = vec![0u8; n]; // 0 lower, 1 interior, 2 upper
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for a in assignment.iter_mut() {
            *a = (c % 3) as u8;
            c /= 3;
        }
        let interior: Vec<usize> = (0..n).filter(|&i| assignment[i] == 1).collect();
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = match assignment[i] {
                0 => p.mu[i],
                2 => p.nu[i],
                _ => 0.0,
            };
        }
        if !interior.is_empty() {
            let k = interior.len();
            let mut aii = Mat::zeros(k, k);
            let mut rhs = vec![0.0; k];
            for (r, &i) in interior.iter().enumerate() {
                rhs[r] = p.u[i];
                for (s, &j) in interior.iter().enumerate() {
                    aii[(r, s)] = p.a.mat()[(i, j)];
                }
                for j in 0..n {
                    if assignment[j] != 1 {
                        rhs[r] -= p.a.mat()[(i, j)] * x[j];
                    }
                }
            }
            let xi = match aii.solve(&rhs) {
                Ok(v) => v,
                Err(_) => continue, // singular principal submatrix cannot happen for A > 0
            };
            let mut ok = true;
            for (r, &i) in interior.iter().enumerate() {
                if xi[r] < p.mu[i] - feas_tol || xi[r] > p.nu[i] + feas_tol {
                    ok = false;
                    break;
                }
                x[i] = xi[r];
            }
            if !ok {
                continue;
            }
        }
        let g = p.a.mat().matvec(&x);
        let mut ok = true;
        for i in 0..n {
            let gi = g[i] - p.u[i];
            let viol = match assignment[i] {
                0 => (-gi).max(0.0),
                2 => gi.max(0.0),
                _ => 0.0,
            };
            if viol > feas_tol {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        for i in 0..n {
            x[i] = x[i].clamp(p.mu[i], p.nu[i]);
        }
        let (_, cert) = build_network(p)?;
        let kkt_residual = kkt_check(p, &x, KKT_BOUNDARY_TOL)?;
        return Ok(QpSolution {
            objective: p.objective(&x),
            kkt_residual,
            iterations: 0,
            certificate: cert,
            x_star: x,
        });
    }
    Err(Error::NoKktPoint)
}
