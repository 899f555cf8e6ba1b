//! Contraction certificates for the firing-rate and Hopfield models:
//! case dispatch on alpha(W), the singular-kernel route through the
//! interconnected-systems gain matrix, and the tightness probe.

use crate::dynamics::ActivationKind;
use crate::error::{Error, Result};
use crate::linalg::{
    is_hurwitz, sym_eig, weighted_lognorm, EigenDecomposition, NormWeight, SymmetricMatrix,
    WeightLabel, DEFAULT_EIG_TOL,
};
use crate::mat::Mat;
use crate::polytope::{
    max_lognorm_over_vertices, vertex_matrix, EnumerationMode, PolytopeSpec, Side, Verdict,
    VERDICT_TOL,
};
use crate::weights::{build_neg_w_inv_sqrt, build_neg_w_sqrt, build_qf, build_qh, theta, DEFAULT_EPS};

/// Knife-edge tolerance for alpha(W) = 1.
const ALPHA_ONE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Fnn,
    Hnn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateCase {
    AlphaNeg,
    AlphaZeroEps,
    AlphaIn01,
    AlphaOne,
    SingularKernel,
}

/// Brute-force evidence embedded in every certificate: the vertex maximum
/// of the Jacobian-polytope log-norm under the certificate weight.
#[derive(Debug, Clone)]
pub struct VerificationRecord {
    pub max_vertex_lognorm: f64,
    pub vertices_checked: u64,
    pub verdict: Verdict,
    pub sampled: bool,
}

/// Eigenbasis split of a singular W into the non-kernel subspace (par) and
/// the kernel (perp).
#[derive(Debug, Clone)]
pub struct SubspaceSplit {
    u_par: Mat,
    u_perp: Mat,
    lambda_par: Vec<f64>,
    /// theta_{alpha(W)}(lambda_i) for alpha(W) > 0; absent when alpha(W) = 0
    /// (theta_b needs b > 0).
    theta_par: Option<Vec<f64>>,
    /// Diagonal weight entries for the non-kernel block, in the U_par basis:
    /// theta/lambda for alpha(W) > 0, (-lambda)^{-1/2} when alpha(W) = 0.
    q_h_par: Vec<f64>,
}

impl SubspaceSplit {
    pub fn u_par(&self) -> &Mat {
        &self.u_par
    }

    pub fn u_perp(&self) -> &Mat {
        &self.u_perp
    }

    pub fn lambda_par(&self) -> &[f64] {
        &self.lambda_par
    }

    pub fn theta_par(&self) -> Option<&[f64]> {
        self.theta_par.as_deref()
    }

    pub fn q_h_par(&self) -> &[f64] {
        &self.q_h_par
    }

    pub fn n_par(&self) -> usize {
        self.lambda_par.len()
    }

    pub fn n_perp(&self) -> usize {
        self.u_perp.cols()
    }
}

/// 2x2 gain matrix of the kernel / non-kernel interconnection, with the
/// composite-norm weights eta solving the diagonal Lyapunov inequality.
#[derive(Debug, Clone)]
pub struct GainMatrix {
    gamma: Mat,
    c_perp: f64,
    c_par: f64,
    lip_cross: f64,
    eta: [f64; 2],
}

impl GainMatrix {
    pub fn gamma(&self) -> &Mat {
        &self.gamma
    }

    pub fn c_perp(&self) -> f64 {
        self.c_perp
    }

    pub fn c_par(&self) -> f64 {
        self.c_par
    }

    pub fn lip_cross(&self) -> f64 {
        self.lip_cross
    }

    pub fn eta(&self) -> [f64; 2] {
        self.eta
    }
}

#[derive(Debug, Clone)]
pub struct ContractionCertificate {
    pub model: Model,
    pub case: CertificateCase,
    pub weight: NormWeight,
    pub rate: f64,
    pub epsilon: Option<f64>,
    pub alpha_w: f64,
    pub verification: VerificationRecord,
    pub split: Option<SubspaceSplit>,
    pub gain: Option<GainMatrix>,
}

impl ContractionCertificate {
    /// Certified one-sided Lipschitz bound on the vector field.
    pub fn osl_bound(&self) -> f64 {
        -self.rate
    }

    /// Distance between two states in the certificate norm. For singular
    /// kernels the composite eta-norm has already been materialized into a
    /// full-space symmetric weight, so this is uniform across cases.
    pub fn delta_norm(&self, dx: &[f64]) -> Result<f64> {
        crate::linalg::weighted_vec_norm(dx, &self.weight)
    }
}

fn verify_jacobian_polytope(
    w: &SymmetricMatrix,
    side: Side,
    weight: &NormWeight,
    rate: f64,
    eps_case: bool,
    seed: u64,
) -> Result<VerificationRecord> {
    let spec = PolytopeSpec::new(w.clone(), side);
    let scan = max_lognorm_over_vertices(&spec, weight, EnumerationMode::Auto { seed })?;
    // translation property: mu(-I + M) = mu(M) - 1
    let max_jac = scan.max_lognorm - 1.0;
    let verdict = if eps_case {
        if max_jac <= -rate + VERDICT_TOL {
            Verdict::LogEpsOptimal
        } else {
            Verdict::Violated
        }
    } else if (max_jac + rate).abs() <= VERDICT_TOL {
        Verdict::LogOptimal
    } else {
        Verdict::Violated
    };
    Ok(VerificationRecord {
        max_vertex_lognorm: max_jac,
        vertices_checked: scan.vertices_checked,
        verdict,
        sampled: scan.sampled,
    })
}

/// Contraction certificate for the firing-rate network
/// dx/dt = -x + Phi(Wx + u), valid for every activation with slope in [0,1].
pub fn certify_fnn(w: &SymmetricMatrix, eps: Option<f64>) -> Result<ContractionCertificate> {
    let eig = sym_eig(w, DEFAULT_EIG_TOL)?;
    let alpha = eig.alpha();
    if alpha > 1.0 + ALPHA_ONE_TOL {
        return Err(Error::DegenerateRate(
            alpha,
            "the FNN bound requires alpha(W) <= 1".into(),
        ));
    }
    let (case, weight, rate, epsilon) = if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
        (CertificateCase::AlphaOne, build_qf(&eig, alpha)?, 0.0, None)
    } else if alpha > eig.rank_tol() {
        (
            CertificateCase::AlphaIn01,
            build_qf(&eig, alpha)?,
            1.0 - alpha,
            None,
        )
    } else if alpha >= -eig.rank_tol() {
        let e = eps.unwrap_or(DEFAULT_EPS);
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::Domain(format!("eps must lie in (0,1), got {e}")));
        }
        (
            CertificateCase::AlphaZeroEps,
            build_qf(&eig, e)?,
            1.0 - e,
            Some(e),
        )
    } else {
        (
            CertificateCase::AlphaNeg,
            build_neg_w_sqrt(&eig)?,
            1.0,
            None,
        )
    };
    let eps_case = case == CertificateCase::AlphaZeroEps;
    let verification = verify_jacobian_polytope(w, Side::Left, &weight, rate, eps_case, 0)?;
    Ok(ContractionCertificate {
        model: Model::Fnn,
        case,
        weight,
        rate,
        epsilon,
        alpha_w: alpha,
        verification,
        split: None,
        gain: None,
    })
}

/// Contraction certificate for the Hopfield network
/// dx/dt = -x + W Phi(x) + u. Singular W with 0 <= alpha(W) < 1 routes to
/// the kernel / non-kernel interconnection certificate.
pub fn certify_hnn(w: &SymmetricMatrix, eps: Option<f64>) -> Result<ContractionCertificate> {
    let eig = sym_eig(w, DEFAULT_EIG_TOL)?;
    let alpha = eig.alpha();
    if alpha > 1.0 + ALPHA_ONE_TOL {
        return Err(Error::DegenerateRate(
            alpha,
            "the HNN bound requires alpha(W) <= 1".into(),
        ));
    }
    if eig.is_singular() {
        if alpha >= 1.0 - ALPHA_ONE_TOL {
            return Err(Error::DegenerateRate(
                alpha,
                "singular W needs alpha(W) < 1".into(),
            ));
        }
        return certify_hnn_singular(w, &eig, eps);
    }
    let (case, weight, rate) = if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
        (
            CertificateCase::AlphaOne,
            build_qh(&eig, alpha, eig.rank_tol())?,
            0.0,
        )
    } else if alpha > eig.rank_tol() {
        (
            CertificateCase::AlphaIn01,
            build_qh(&eig, alpha, eig.rank_tol())?,
            1.0 - alpha,
        )
    } else {
        // An invertible symmetric W cannot have alpha(W) = 0 (a zero largest
        // eigenvalue would be a kernel), so the remaining case is alpha < 0.
        (
            CertificateCase::AlphaNeg,
            build_neg_w_inv_sqrt(&eig)?,
            1.0,
        )
    };
    let verification = verify_jacobian_polytope(w, Side::Right, &weight, rate, false, 0)?;
    Ok(ContractionCertificate {
        model: Model::Hnn,
        case,
        weight,
        rate,
        epsilon: None,
        alpha_w: alpha,
        verification,
        split: None,
        gain: None,
    })
}

fn certify_hnn_singular(
    w: &SymmetricMatrix,
    eig: &EigenDecomposition,
    eps: Option<f64>,
) -> Result<ContractionCertificate> {
    let n = w.n();
    let alpha = eig.alpha();
    let all_zero = eig.lambda().iter().all(|l| l.abs() <= eig.rank_tol());
    if all_zero {
        // W = 0: dx/dt = -x + u, contracting with rate 1 in the plain
        // Euclidean norm.
        let weight = NormWeight::identity(n);
        let verification = verify_jacobian_polytope(w, Side::Right, &weight, 1.0, false, 0)?;
        return Ok(ContractionCertificate {
            model: Model::Hnn,
            case: CertificateCase::SingularKernel,
            weight,
            rate: 1.0,
            epsilon: None,
            alpha_w: alpha,
            verification,
            split: Some(build_subspace_split(eig)?),
            gain: None,
        });
    }
    let alpha_eff = alpha.max(0.0);
    let e = eps.unwrap_or((1.0 - alpha_eff) / 10.0);
    if !(e > 0.0 && e < 1.0 - alpha_eff) {
        return Err(Error::Domain(format!(
            "eps must lie in (0, 1 - alpha(W)) = (0, {}), got {e}",
            1.0 - alpha_eff
        )));
    }
    let split = build_subspace_split(eig)?;
    // The cross coupling from the kernel into the non-kernel block is
    // ||W v|| <= rho(W) ||v||; rho(W) = alpha(W) only for positive
    // semidefinite W, so the spectral radius is used as the gain.
    let rho = eig.lambda().iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let gain = build_gain_matrix_with(alpha_eff, rho, e)?;
    let rate = 1.0 - alpha_eff - e;

    // Materialize ||x||^2 = eta1 ||U_perp^T x||^2 + eta2 ||Q_Hpar U_par^T x||^2
    // as a full-space symmetric weight.
    let [eta1, eta2] = gain.eta;
    let mut q = Mat::zeros(n, n);
    let s1 = eta1.sqrt();
    for k in 0..split.n_perp() {
        for i in 0..n {
            let v = split.u_perp[(i, k)] * s1;
            for j in 0..n {
                q[(i, j)] += v * split.u_perp[(j, k)];
            }
        }
    }
    let s2 = eta2.sqrt();
    for k in 0..split.n_par() {
        let d = s2 * split.q_h_par[k].abs();
        for i in 0..n {
            let v = split.u_par[(i, k)] * d;
            for j in 0..n {
                q[(i, j)] += v * split.u_par[(j, k)];
            }
        }
    }
    let weight = NormWeight::new(q, WeightLabel::Custom)?;
    let verification = verify_jacobian_polytope(w, Side::Right, &weight, rate, true, 0)?;
    Ok(ContractionCertificate {
        model: Model::Hnn,
        case: CertificateCase::SingularKernel,
        weight,
        rate,
        epsilon: Some(e),
        alpha_w: alpha,
        verification,
        split: Some(split),
        gain: Some(gain),
    })
}

/// Splits the eigenbasis of a singular W into kernel and non-kernel parts.
pub fn build_subspace_split(eig: &EigenDecomposition) -> Result<SubspaceSplit> {
    let n = eig.n();
    let kernel = eig.kernel_indices();
    if kernel.is_empty() {
        return Err(Error::NoKernel(eig.rank_tol()));
    }
    let par_idx: Vec<usize> = (0..n).filter(|i| !kernel.contains(i)).collect();
    let mut u_par = Mat::zeros(n, par_idx.len());
    let mut u_perp = Mat::zeros(n, kernel.len());
    for (c, &k) in par_idx.iter().enumerate() {
        for i in 0..n {
            u_par[(i, c)] = eig.u()[(i, k)];
        }
    }
    for (c, &k) in kernel.iter().enumerate() {
        for i in 0..n {
            u_perp[(i, c)] = eig.u()[(i, k)];
        }
    }
    let lambda_par: Vec<f64> = par_idx.iter().map(|&k| eig.lambda()[k]).collect();
    let alpha = eig.alpha();
    let (theta_par, q_h_par) = if alpha > eig.rank_tol() {
        let th: Vec<f64> = lambda_par
            .iter()
            .map(|&l| theta(alpha, l))
            .collect::<Result<_>>()?;
        let qh: Vec<f64> = th.iter().zip(&lambda_par).map(|(t, l)| t / l).collect();
        (Some(th), qh)
    } else {
        // alpha(W) = 0 with a kernel: the non-kernel spectrum is negative,
        // and (-Lambda_par)^{-1/2} gives the block rate 1.
        let qh: Vec<f64> = lambda_par.iter().map(|&l| 1.0 / (-l).sqrt()).collect();
        (None, qh)
    };
    Ok(SubspaceSplit {
        u_par,
        u_perp,
        lambda_par,
        theta_par,
        q_h_par,
    })
}

/// Gain matrix of the kernel / non-kernel interconnection with the cross
/// gain set to alpha(W), valid for positive-semidefinite W.
pub fn build_gain_matrix(alpha_w: f64) -> Result<GainMatrix> {
    build_gain_matrix_with(alpha_w, alpha_w, (1.0 - alpha_w.max(0.0)) / 10.0)
}

/// Gain matrix with an explicit cross-Lipschitz gain and slack. eta is the
/// closed-form solution of the 2x2 diagonal Lyapunov inequality
/// diag(eta) Gamma + Gamma^T diag(eta) < 0, normalized to eta_1 = 1 and
/// tuned so the composite log-norm bound is exactly -(1 - alpha - eps).
pub fn build_gain_matrix_with(alpha_w: f64, lip_cross: f64, eps: f64) -> Result<GainMatrix> {
    if !(0.0..1.0).contains(&alpha_w) {
        return Err(Error::NotHurwitz(alpha_w));
    }
    if !(eps > 0.0 && eps < 1.0 - alpha_w) {
        return Err(Error::Domain(format!(
            "eps must lie in (0, 1 - alpha(W)), got {eps}"
        )));
    }
    let gamma = Mat::from_rows(2, 2, &[-1.0, 0.0, lip_cross, -1.0 + alpha_w]);
    let (hurwitz, g_alpha) = is_hurwitz(&gamma, 0.0)?;
    // the quadratic formula loses ~sqrt(ulp) accuracy near the double root
    // at alpha = 0; the exact abscissa is the triangular diagonal -1 + alpha
    debug_assert!(hurwitz && (g_alpha - (-1.0 + alpha_w)).abs() < 1e-7);
    let eta2 = if lip_cross <= f64::MIN_POSITIVE {
        1.0
    } else {
        4.0 * eps * (eps + alpha_w) / (lip_cross * lip_cross)
    };
    let eta = [1.0, eta2];
    // negative-definiteness of diag(eta) Gamma + Gamma^T diag(eta) via the
    // 2x2 leading-minor test
    let h00 = -2.0 * eta[0];
    let h01 = eta[1] * lip_cross;
    let h11 = -2.0 * eta[1] * (1.0 - alpha_w);
    debug_assert!(h00 < 0.0 && h00 * h11 - h01 * h01 > 0.0);
    Ok(GainMatrix {
        gamma,
        c_perp: 1.0,
        c_par: 1.0 - alpha_w,
        lip_cross,
        eta,
    })
}

/// Empirical one-sided Lipschitz estimate and its gap to the certified bound.
#[derive(Debug, Clone)]
pub struct TightnessReport {
    pub estimated_osl: f64,
    pub bound: f64,
    /// bound - estimated_osl; >= 0 means the bound was never violated.
    pub gap: f64,
    pub samples: u64,
}

/// Estimates osL by maximizing the weighted log-norm of the Jacobian over
/// activation-slope patterns, targeting the extreme vertices d in {0,1}^n
/// through pre-activations that land each coordinate in the active or
/// inactive region independently. Requires an invertible W (so every
/// pre-activation pattern is realizable) and an activation whose slope
/// reaches both 0 and 1.
pub fn tightness_probe(
    w: &SymmetricMatrix,
    model: Model,
    activation: &ActivationKind,
    seed: u64,
) -> Result<TightnessReport> {
    if !activation.slope_reaches_extremes() {
        return Err(Error::UnsupportedActivation(format!("{activation:?}")));
    }
    let eig = sym_eig(w, DEFAULT_EIG_TOL)?;
    if eig.is_singular() {
        return Err(Error::SingularW(eig.rank_tol()));
    }
    let cert = match model {
        Model::Fnn => certify_fnn(w, None)?,
        Model::Hnn => certify_hnn(w, None)?,
    };
    let n = w.n();
    let side = match model {
        Model::Fnn => Side::Left,
        Model::Hnn => Side::Right,
    };
    let spec = PolytopeSpec::new(w.clone(), side);

    let mut patterns: Vec<Vec<f64>> = Vec::new();
    if n <= 12 {
        for idx in 0..(1u64 << n) {
            let bits: Vec<u8> = (0..n).map(|i| ((idx >> i) & 1) as u8).collect();
            patterns.push(activation.slope(&activation.preactivation_for(&bits))?);
        }
    }
    // random states on top of the targeted vertices
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        patterns.push(activation.slope(&z)?);
    }

    let mut est = f64::NEG_INFINITY;
    let mut count = 0u64;
    for d in &patterns {
        let v: Vec<u8> = d.iter().map(|&s| if s > 0.5 { 1 } else { 0 }).collect();
        // exact binary patterns go through the vertex matrix; fractional
        // slopes scale the rows/columns directly
        let jac = if d.iter().all(|&s| s == 0.0 || s == 1.0) {
            let mut m = vertex_matrix(&spec, &v)?;
            for i in 0..n {
                m[(i, i)] -= 1.0;
            }
            m
        } else {
            let mut m = w.mat().clone();
            for i in 0..n {
                for j in 0..n {
                    match side {
                        Side::Left => m[(i, j)] *= d[i],
                        Side::Right => m[(i, j)] *= d[j],
                    }
                }
            }
            for i in 0..n {
                m[(i, i)] -= 1.0;
            }
            m
        };
        est = est.max(weighted_lognorm(&jac, &cert.weight)?);
        count += 1;
    }
    let bound = cert.osl_bound();
    Ok(TightnessReport {
        estimated_osl: est,
        bound,
        gap: bound - est,
        samples: count,
    })
}
