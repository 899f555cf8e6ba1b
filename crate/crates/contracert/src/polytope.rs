//! Vertex enumeration over the diagonal-scaling matrix polytopes
//! {[d]W : d in [0,1]^n} and {W[d] : d in [0,1]^n}, log-optimality
//! verification, and the optimal-norm checks for products of symmetric
//! matrices.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    sym_eig, weighted_lognorm, weighted_matrix_norm, NormWeight, SymmetricMatrix, WeightLabel,
    DEFAULT_EIG_TOL,
};
use crate::mat::Mat;
use crate::weights::{build_neg_w_inv_sqrt, build_neg_w_sqrt, build_qf, build_qh, DEFAULT_EPS};

/// Tolerance for verdict comparisons: one order looser than the eigensolver
/// contract, absorbing accumulation over up to 2^20 evaluations.
pub const VERDICT_TOL: f64 = 1e-7;

const EXHAUSTIVE_CAP: usize = 20;
const SAMPLE_COUNT: usize = 10_000;

/// Which side the diagonal scaling acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// [d]W — the firing-rate polytope.
    Left,
    /// W[d] — the Hopfield polytope.
    Right,
}

#[derive(Debug, Clone)]
pub struct PolytopeSpec {
    w: SymmetricMatrix,
    side: Side,
}

impl PolytopeSpec {
    pub fn new(w: SymmetricMatrix, side: Side) -> Self {
        PolytopeSpec { w, side }
    }

    pub fn w(&self) -> &SymmetricMatrix {
        &self.w
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LogOptimal,
    LogEpsOptimal,
    Violated,
}

#[derive(Debug, Clone)]
pub struct OptimalityReport {
    pub max_vertex_lognorm: f64,
    pub max_vertex_abscissa: f64,
    pub claimed_bound: f64,
    pub epsilon_used: Option<f64>,
    pub vertices_checked: u64,
    pub verdict: Verdict,
    pub sampled: bool,
}

/// How vertices are enumerated.
#[derive(Debug, Clone, Copy)]
pub enum EnumerationMode {
    /// All 2^n vertices; fails for n > 20.
    Exhaustive,
    /// Random binary vertices plus the two corners 0^n and 1^n.
    Sampled { samples: usize, seed: u64 },
    /// Exhaustive when n <= 20, otherwise sampled with the given seed.
    Auto { seed: u64 },
}

/// diag(v) W or W diag(v) for a binary vertex v.
pub fn vertex_matrix(spec: &PolytopeSpec, v: &[u8]) -> Result<Mat> {
    let n = spec.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vertex length {} vs n = {n}",
            v.len()
        )));
    }
    let mut out = spec.w.mat().clone();
    match spec.side {
        Side::Left => {
            for i in 0..n {
                if v[i] == 0 {
                    for j in 0..n {
                        out[(i, j)] = 0.0;
                    }
                }
            }
        }
        Side::Right => {
            for j in 0..n {
                if v[j] == 0 {
                    for i in 0..n {
                        out[(i, j)] = 0.0;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn bits_of(index: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((index >> i) & 1) as u8).collect()
}

/// Spectral abscissa of [v]W (equal to that of W[v]): the spectrum is the
/// spectrum of the principal submatrix on the support of v, padded with
/// zeros for the deselected coordinates.
fn vertex_abscissa(w: &SymmetricMatrix, v: &[u8]) -> Result<f64> {
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] == 1).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let sub = w.principal_submatrix(&support);
    let alpha = sym_eig(&sub, DEFAULT_EIG_TOL)?.alpha();
    if support.len() == v.len() {
        Ok(alpha)
    } else {
        Ok(alpha.max(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct VertexScan {
    pub max_lognorm: f64,
    pub max_abscissa: f64,
    pub vertices_checked: u64,
    pub sampled: bool,
}

/// Maximum weighted log-norm (and spectral abscissa) over the enumerated
/// binary vertices of the polytope. The reduction is a plain max, so the
/// result is independent of how rayon partitions the vertex range.
pub fn max_lognorm_over_vertices(
    spec: &PolytopeSpec,
    q: &NormWeight,
    mode: EnumerationMode,
) -> Result<VertexScan> {
    if q.n() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "weight dimension {} vs n = {}",
            q.n(),
            spec.n()
        )));
    }
    let n = spec.n();
    let (vertices, sampled): (Vec<Vec<u8>>, bool) = match mode {
        EnumerationMode::Exhaustive => {
            if n > EXHAUSTIVE_CAP {
                return Err(Error::TooManyVertices(n));
            }
            ((0..1u64 << n).map(|i| bits_of(i, n)).collect(), false)
        }
        EnumerationMode::Auto { seed } => {
            if n <= EXHAUSTIVE_CAP {
                ((0..1u64 << n).map(|i| bits_of(i, n)).collect(), false)
            } else {
                (sampled_vertices(n, SAMPLE_COUNT, seed), true)
            }
        }
        EnumerationMode::Sampled { samples, seed } => (sampled_vertices(n, samples, seed), true),
    };

    let count = vertices.len() as u64;
    let folded = vertices
        .par_iter()
        .map(|v| -> Result<(f64, f64)> {
            let m = vertex_matrix(spec, v)?;
            let mu = weighted_lognorm(&m, q)?;
            let ab = vertex_abscissa(&spec.w, v)?;
            Ok((mu, ab))
        })
        .try_reduce(
            || (f64::NEG_INFINITY, f64::NEG_INFINITY),
            |a, b| Ok((a.0.max(b.0), a.1.max(b.1))),
        )?;

    Ok(VertexScan {
        max_lognorm: folded.0,
        max_abscissa: folded.1,
        vertices_checked: count,
        sampled,
    })
}

fn sampled_vertices(n: usize, samples: usize, seed: u64) -> Vec<Vec<u8>> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples + 2);
    out.push(vec![0u8; n]);
    out.push(vec![1u8; n]);
    for _ in 0..samples {
        out.push((0..n).map(|_| rng.gen_range(0..=1u8)).collect());
    }
    out
}

/// Verifies the log-optimality claims of the weighted norms, dispatching on
/// the sign of alpha(W): Q_F/Q_H for alpha > 0, Q_F(eps) for alpha = 0
/// (left polytope only), (-W)^{1/2} for alpha < 0.
pub fn check_log_optimality(
    spec: &PolytopeSpec,
    eps: Option<f64>,
    mode: EnumerationMode,
) -> Result<OptimalityReport> {
    let eig = sym_eig(&spec.w, DEFAULT_EIG_TOL)?;
    let alpha = eig.alpha();
    if alpha > eig.rank_tol() {
        let q = match spec.side {
            Side::Left => build_qf(&eig, alpha)?,
            Side::Right => build_qh(&eig, alpha, eig.rank_tol())?,
        };
        let scan = max_lognorm_over_vertices(spec, &q, mode)?;
        let ok = (scan.max_lognorm - scan.max_abscissa).abs() <= VERDICT_TOL
            && (scan.max_abscissa - alpha).abs() <= VERDICT_TOL;
        Ok(OptimalityReport {
            max_vertex_lognorm: scan.max_lognorm,
            max_vertex_abscissa: scan.max_abscissa,
            claimed_bound: alpha,
            epsilon_used: None,
            vertices_checked: scan.vertices_checked,
            verdict: if ok { Verdict::LogOptimal } else { Verdict::Violated },
            sampled: scan.sampled,
        })
    } else if alpha >= -eig.rank_tol() {
        // alpha(W) = 0 implies a zero eigenvalue, so the right polytope has
        // no invertible weight and routes to the singular-kernel machinery.
        if spec.side == Side::Right {
            return Err(Error::SingularW(eig.rank_tol()));
        }
        let eps = eps.unwrap_or(DEFAULT_EPS);
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        let q = build_qf(&eig, eps)?;
        let scan = max_lognorm_over_vertices(spec, &q, mode)?;
        let ok = scan.max_lognorm <= eps + VERDICT_TOL && scan.max_lognorm >= -VERDICT_TOL;
        Ok(OptimalityReport {
            max_vertex_lognorm: scan.max_lognorm,
            max_vertex_abscissa: scan.max_abscissa,
            claimed_bound: eps,
            epsilon_used: Some(eps),
            vertices_checked: scan.vertices_checked,
            verdict: if ok {
                Verdict::LogEpsOptimal
            } else {
                Verdict::Violated
            },
            sampled: scan.sampled,
        })
    } else {
        let q = match spec.side {
            Side::Left => build_neg_w_sqrt(&eig)?,
            Side::Right => build_neg_w_inv_sqrt(&eig)?,
        };
        let scan = max_lognorm_over_vertices(spec, &q, mode)?;
        let ok = scan.max_lognorm.abs() <= VERDICT_TOL;
        Ok(OptimalityReport {
            max_vertex_lognorm: scan.max_lognorm,
            max_vertex_abscissa: scan.max_abscissa,
            claimed_bound: 0.0,
            epsilon_used: None,
            vertices_checked: scan.vertices_checked,
            verdict: if ok { Verdict::LogOptimal } else { Verdict::Violated },
            sampled: scan.sampled,
        })
    }
}

/// max(alpha(W), 0): the lower bound on the polytope's maximal spectral
/// abscissa, realized at the corners 0^n and 1^n.
pub fn abscissa_lower_bound(spec: &PolytopeSpec) -> Result<f64> {
    let eig = sym_eig(&spec.w, DEFAULT_EIG_TOL)?;
    Ok(eig.alpha().max(0.0))
}

/// Which side of the product S Q / Q S to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSide {
    SQ,
    QS,
}

/// Gaps measured by `product_sym_check`: all should vanish for products of
/// a symmetric matrix with a positive-definite one.
#[derive(Debug, Clone)]
pub struct ProductCheck {
    /// (negative, zero, positive) eigenvalue counts of S.
    pub inertia_s: (usize, usize, usize),
    /// Inertia of the product, via the similar symmetric matrix Q^{1/2} S Q^{1/2}.
    pub inertia_product: (usize, usize, usize),
    /// | ||A||_{2,Q^{1/2}} - rho(A) |
    pub norm_gap: f64,
    /// | mu_{2,Q^{1/2}}(A) - alpha(A) |
    pub lognorm_gap: f64,
}

fn inertia(lambda: &[f64], tol: f64) -> (usize, usize, usize) {
    let neg = lambda.iter().filter(|&&l| l < -tol).count();
    let zero = lambda.iter().filter(|&&l| l.abs() <= tol).count();
    let pos = lambda.iter().filter(|&&l| l > tol).count();
    (neg, zero, pos)
}

/// Checks that ||.||_{2,Q^{1/2}} is optimal and log-optimal for the product
/// of a symmetric S with a positive-definite Q, and that the product's real
/// spectrum has the inertia of S.
pub fn product_sym_check(
    s: &SymmetricMatrix,
    qm: &SymmetricMatrix,
    side: ProductSide,
) -> Result<ProductCheck> {
    if s.n() != qm.n() {
        return Err(Error::DimensionMismatch(format!(
            "S is {}x{} but Q is {}x{}",
            s.n(),
            s.n(),
            qm.n(),
            qm.n()
        )));
    }
    let qeig = sym_eig(qm, DEFAULT_EIG_TOL)?;
    let min = *qeig.lambda().last().unwrap();
    if min <= qeig.rank_tol() {
        return Err(Error::NotPositiveDefinite(min));
    }
    let qhalf = qeig.apply_spectral(f64::sqrt);
    // S Q is symmetrized by conjugation with Q^{1/2}; Q S needs Q^{-1/2}.
    let (a, wmat) = match side {
        ProductSide::SQ => (s.mat().mul(qm.mat()), qhalf.clone()),
        ProductSide::QS => (
            qm.mat().mul(s.mat()),
            qeig.apply_spectral(|l| 1.0 / l.sqrt()),
        ),
    };
    // Either way A is similar to Q^{1/2} S Q^{1/2}, so its spectrum is real
    // and shares the inertia of S by Sylvester's law.
    let sim = SymmetricMatrix::new(qhalf.mat().mul(s.mat()).mul(qhalf.mat()))?;
    let sim_eig = sym_eig(&sim, DEFAULT_EIG_TOL)?;
    let seig = sym_eig(s, DEFAULT_EIG_TOL)?;
    let tol = sim_eig.rank_tol().max(seig.rank_tol());

    let rho = sim_eig.lambda().iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let alpha = sim_eig.alpha();
    let weight = NormWeight::new(wmat.mat().clone(), WeightLabel::Custom)?;
    let norm_gap = (weighted_matrix_norm(&a, &weight)? - rho).abs();
    let lognorm_gap = (weighted_lognorm(&a, &weight)? - alpha).abs();
    Ok(ProductCheck {
        inertia_s: inertia(seig.lambda(), tol),
        inertia_product: inertia(sim_eig.lambda(), tol),
        norm_gap,
        lognorm_gap,
    })
}
