//! Log-optimal norm weight construction: theta_b reweighting of the
//! eigenbasis (Q_F), its W^{-1}-scaled companion (Q_H), the (-W)^{1/2}
//! weight for negative-definite W, and the splitting identity check.

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, EigenDecomposition, NormWeight, SymmetricMatrix, WeightLabel, DEFAULT_EIG_TOL};

/// Default epsilon for the alpha(W) = 0 weight policy.
pub const DEFAULT_EPS: f64 = 1e-3;

/// theta_b(z) = 2b(1 + sqrt(1 - z/b)), defined for z <= b, b > 0.
///
/// Maps ]-inf, b] onto [2b, +inf[ and is strictly decreasing in z. The
/// radicand is clamped to 0 when rounding pushes it slightly negative.
pub fn theta(b: f64, z: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("theta requires b > 0, got b = {b}")));
    }
    let mut r = 1.0 - z / b;
    if r < 0.0 {
        if r >= -1e-14 {
            r = 0.0;
        } else {
            return Err(Error::Domain(format!(
                "theta_b undefined for z = {z} > b = {b}"
            )));
        }
    }
    Ok(2.0 * b * (1.0 + r.sqrt()))
}

/// g_b(z) = theta_b(z)/z, defined for z <= b, z != 0. These are the
/// eigenvalues of Q_H(b).
pub fn g(b: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::Domain("g_b undefined at z = 0".into()));
    }
    Ok(theta(b, z)? / z)
}

/// theta_b evaluated on the spectrum of W, with its domain checks.
#[derive(Debug, Clone)]
pub struct ThetaWeights {
    b: f64,
    values: Vec<f64>,
}

impl ThetaWeights {
    pub fn new(eig: &EigenDecomposition, b: f64) -> Result<Self> {
        if eig.alpha() > b + 1e-14 * b.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "theta_b requires alpha(W) = {} <= b = {b}",
                eig.alpha()
            )));
        }
        let values = eig
            .lambda()
            .iter()
            .map(|&l| theta(b, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThetaWeights { b, values })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Q_F(b) = U theta_b(Lambda) U^T, symmetric positive definite with
/// smallest eigenvalue >= 2b.
pub fn build_qf(eig: &EigenDecomposition, b: f64) -> Result<NormWeight> {
    let tw = ThetaWeights::new(eig, b)?;
    let q = eig.apply_spectral(|l| theta(tw.b, l).expect("domain checked above"));
    NormWeight::new(q.mat().clone(), WeightLabel::Qf(b))
}

/// Q_H(b) = Q_F(b) W^{-1} = U theta_b(Lambda) Lambda^{-1} U^T.
///
/// Requires W invertible at `rank_tol`; for W with negative eigenvalues the
/// result is indefinite but still an invertible symmetric weight.
pub fn build_qh(eig: &EigenDecomposition, b: f64, rank_tol: f64) -> Result<NormWeight> {
    for &l in eig.lambda() {
        if l.abs() <= rank_tol {
            return Err(Error::SingularW(rank_tol));
        }
    }
    let tw = ThetaWeights::new(eig, b)?;
    let q = eig.apply_spectral(|l| theta(tw.b, l).expect("domain checked above") / l);
    NormWeight::new(q.mat().clone(), WeightLabel::Qh(b))
}

/// (-W)^{1/2} for negative-definite W.
pub fn build_neg_w_sqrt(eig: &EigenDecomposition) -> Result<NormWeight> {
    if eig.alpha() >= 0.0 {
        return Err(Error::Domain(format!(
            "(-W)^(1/2) requires alpha(W) < 0, got {}",
            eig.alpha()
        )));
    }
    let q = eig.apply_spectral(|l| (-l).sqrt());
    NormWeight::new(q.mat().clone(), WeightLabel::NegWSqrt)
}

/// (-W)^{-1/2} for negative-definite W: the log-optimal weight for the
/// right-side polytope W[d]. (For products Q S with Q positive definite the
/// similarity Q^{-1/2}(QS)Q^{1/2} = Q^{1/2} S Q^{1/2} is symmetric, which is
/// what makes the norm and log-norm equalities exact; the left-side polytope
/// [d]W takes (-W)^{1/2} instead.)
pub fn build_neg_w_inv_sqrt(eig: &EigenDecomposition) -> Result<NormWeight> {
    if eig.alpha() >= 0.0 {
        return Err(Error::Domain(format!(
            "(-W)^(-1/2) requires alpha(W) < 0, got {}",
            eig.alpha()
        )));
    }
    let q = eig.apply_spectral(|l| 1.0 / (-l).sqrt());
    NormWeight::new(q.mat().clone(), WeightLabel::NegWInvSqrt)
}

/// Max-abs residual of the splitting identity W = Q_F(b) - Q_F(b)^2 / (4b).
pub fn verify_splitting(w: &SymmetricMatrix, b: f64) -> Result<f64> {
    let eig = sym_eig(w, DEFAULT_EIG_TOL)?;
    let qf = build_qf(&eig, b)?;
    let rebuilt = qf.q().sub(&qf.q().mul(qf.q()).scale(1.0 / (4.0 * b)));
    Ok(rebuilt.sub(w.mat()).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn theta_values() {
        assert!((theta(5.0, 5.0).unwrap() - 10.0).abs() < 1e-15);
        assert!((theta(5.0, 0.0).unwrap() - 20.0).abs() < 1e-15);
        let v = theta(5.0, -5.0).unwrap();
        assert!((v - 10.0 * (1.0 + 2.0f64.sqrt())).abs() < 1e-12);
        assert!(theta(5.0, 5.1).is_err());
        assert!(theta(0.0, -1.0).is_err());
        assert!(theta(-1.0, -2.0).is_err());
        // clamp at a radicand of -1e-17
        assert!(theta(1.0, 1.0 + 1e-17).is_ok());
    }

    #[test]
    fn qf_examples() {
        let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let qf = build_qf(&eig, 0.5).unwrap();
        let expect = Mat::diag(&[1.0, 1.0 + 3.0f64.sqrt()]);
        assert!(qf.q().sub(&expect).max_abs() < 1e-12);

        let w = SymmetricMatrix::from_diag(&[-1.0, -1.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let qf = build_qf(&eig, 1.0).unwrap();
        let v = 2.0 * (1.0 + 2.0f64.sqrt());
        assert!(qf.q().sub(&Mat::identity(2).scale(v)).max_abs() < 1e-12);

        let w = SymmetricMatrix::zeros(2);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let eps = 0.25;
        let qf = build_qf(&eig, eps).unwrap();
        assert!(qf.q().sub(&Mat::identity(2).scale(4.0 * eps)).max_abs() < 1e-14);

        // b below alpha(W) is out of domain
        let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert!(build_qf(&eig, 0.4).is_err());
    }

    #[test]
    fn qf_codomain_and_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = 2 + rng.gen_range(0..5usize);
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w = SymmetricMatrix::from_rows(n, &data).unwrap();
            let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
            let b = eig.alpha().abs().max(0.2) + 0.1;
            let qf = build_qf(&eig, b).unwrap();
            // min eigenvalue >= 2b
            let qeig = sym_eig(
                &SymmetricMatrix::new(qf.q().clone()).unwrap(),
                DEFAULT_EIG_TOL,
            )
            .unwrap();
            let min = qeig.lambda().last().copied().unwrap();
            assert!(min >= 2.0 * b - 1e-9, "min {min} vs 2b {}", 2.0 * b);
            // Q_F commutes with W (same eigenbasis)
            let comm = qf.q().mul(w.mat()).sub(&w.mat().mul(qf.q()));
            assert!(comm.max_abs() <= 1e-9);
        }
    }

    #[test]
    fn qh_examples() {
        let w = SymmetricMatrix::from_diag(&[0.5]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let qh = build_qh(&eig, 0.5, eig.rank_tol()).unwrap();
        assert!(qh.q().sub(&Mat::diag(&[2.0])).max_abs() < 1e-14);

        // W = cI with 0 < c < 1, b = c: Q_H = 2I
        let c = 0.3;
        let w = SymmetricMatrix::from_diag(&[c, c, c]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let qh = build_qh(&eig, c, eig.rank_tol()).unwrap();
        assert!(qh.q().sub(&Mat::identity(3).scale(2.0)).max_abs() < 1e-12);

        // indefinite Q_H for W with a negative eigenvalue
        let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let qh = build_qh(&eig, 0.5, eig.rank_tol()).unwrap();
        let expect = Mat::diag(&[2.0, -(1.0 + 3.0f64.sqrt())]);
        assert!(qh.q().sub(&expect).max_abs() < 1e-12);

        // singular W routes to the kernel-split certificate path
        let w = SymmetricMatrix::from_diag(&[0.5, 0.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert!(matches!(
            build_qh(&eig, 0.5, eig.rank_tol()),
            Err(Error::SingularW(_))
        ));
    }

    #[test]
    fn qh_times_w_is_qf() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 2 + rng.gen_range(0..4usize);
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w = SymmetricMatrix::from_rows(n, &data).unwrap();
            let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
            if eig.is_singular() {
                continue;
            }
            let b = eig.alpha().max(0.0) + 0.2;
            let qf = build_qf(&eig, b).unwrap();
            let qh = build_qh(&eig, b, eig.rank_tol()).unwrap();
            assert!(qh.q().mul(w.mat()).sub(qf.q()).max_abs() <= 1e-9);
        }
    }

    #[test]
    fn splitting_examples() {
        let w = SymmetricMatrix::from_diag(&[0.5]);
        assert!(verify_splitting(&w, 0.5).unwrap() < 1e-14);
        let w = SymmetricMatrix::zeros(2);
        assert!(verify_splitting(&w, 1.0).unwrap() < 1e-14);
    }

    #[test]
    fn splitting_random_100() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = 6;
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w = SymmetricMatrix::from_rows(n, &data).unwrap();
            let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
            let b = eig.alpha() + 0.1;
            let b = if b <= 0.0 { 0.05 } else { b };
            let res = verify_splitting(&w, b).unwrap();
            assert!(res <= 1e-10 * w.mat().max_abs().max(1.0), "residual {res}");
        }
    }

    #[test]
    fn splitting_domain_error() {
        let w = SymmetricMatrix::from_diag(&[2.0]);
        assert!(verify_splitting(&w, 1.0).is_err());
    }

    proptest! {
        // scalar splitting identity: z = theta_b(z) - theta_b(z)^2/(4b)
        #[test]
        fn scalar_splitting_identity(b in 1e-3..10.0f64, frac in -10.0..1.0f64) {
            let z = b * frac;
            let t = theta(b, z).unwrap();
            let back = t - t * t / (4.0 * b);
            prop_assert!((z - back).abs() <= 1e-12 * z.abs().max(1.0));
        }

        #[test]
        fn theta_monotone_decreasing(b in 1e-2..5.0f64, z1 in -5.0..0.99f64, dz in 1e-6..1.0f64) {
            let z1 = b * z1;
            let z2 = (z1 + dz).min(b);
            let t1 = theta(b, z1).unwrap();
            let t2 = theta(b, z2).unwrap();
            prop_assert!(t2 <= t1 + 1e-12);
            prop_assert!(t1 >= 2.0 * b - 1e-12);
        }
    }
}
