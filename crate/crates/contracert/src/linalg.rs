//! Dense symmetric linear algebra: Jacobi eigendecomposition, weighted
//! Euclidean norms, logarithmic norms, pseudo-inverse, and the 2x2 Hurwitz
//! test. Everything else in the crate sits on top of this module.

use crate::error::{Error, Result};
use crate::mat::Mat;

pub const DEFAULT_EIG_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Validated real symmetric matrix. Symmetrization (M + M^T)/2 is applied
/// at construction so the stored entries are exactly symmetric.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    m: Mat,
}

impl SymmetricMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.rows();
        Ok(SymmetricMatrix {
            n,
            m: m.symmetrize(),
        })
    }

    /// Rejects matrices whose asymmetry exceeds `tol` before symmetrizing.
    pub fn new_checked(m: Mat, tol: f64) -> Result<Self> {
        if m.is_square() {
            for i in 0..m.rows() {
                for j in 0..i {
                    let gap = (m[(i, j)] - m[(j, i)]).abs();
                    if gap > tol {
                        return Err(Error::NotSymmetric { i, j, gap });
                    }
                }
            }
        }
        SymmetricMatrix::new(m)
    }

    pub fn from_rows(n: usize, data: &[f64]) -> Result<Self> {
        SymmetricMatrix::new(Mat::from_rows(n, n, data))
    }

    pub fn from_diag(d: &[f64]) -> Self {
        SymmetricMatrix {
            n: d.len(),
            m: Mat::diag(d),
        }
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            m: Mat::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mat(&self) -> &Mat {
        &self.m
    }

    /// Principal submatrix on the index set `keep`.
    pub fn principal_submatrix(&self, keep: &[usize]) -> SymmetricMatrix {
        let k = keep.len();
        let mut sub = Mat::zeros(k, k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                sub[(a, b)] = self.m[(i, j)];
            }
        }
        SymmetricMatrix { n: k, m: sub }
    }
}

/// Orthogonal eigendecomposition W = U diag(lambda) U^T with eigenvalues
/// sorted in non-increasing order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    u: Mat,
    lambda: Vec<f64>,
    alpha: f64,
    rank_tol: f64,
}

impl EigenDecomposition {
    pub fn u(&self) -> &Mat {
        &self.u
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Spectral abscissa: the largest eigenvalue.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Indices of eigenvalues classified as zero at `rank_tol`.
    pub fn kernel_indices(&self) -> Vec<usize> {
        (0..self.lambda.len())
            .filter(|&i| self.lambda[i].abs() <= self.rank_tol)
            .collect()
    }

    pub fn is_singular(&self) -> bool {
        self.lambda.iter().any(|l| l.abs() <= self.rank_tol)
    }

    /// Reassembles U f(diag(lambda)) U^T for a spectral function f.
    pub fn apply_spectral<F: Fn(f64) -> f64>(&self, f: F) -> SymmetricMatrix {
        let n = self.lambda.len();
        let d: Vec<f64> = self.lambda.iter().map(|&l| f(l)).collect();
        let mut out = Mat::zeros(n, n);
        for k in 0..n {
            if d[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let uik = self.u[(i, k)] * d[k];
                for j in 0..n {
                    out[(i, j)] += uik * self.u[(j, k)];
                }
            }
        }
        SymmetricMatrix {
            n,
            m: out.symmetrize(),
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps rotate away each off-diagonal element in row-major order until the
/// off-diagonal Frobenius mass drops below `tol * ||W||_F`. Output is
/// deterministic: eigenvalues sorted descending, each eigenvector scaled so
/// its first nonzero component is positive.
pub fn sym_eig(w: &SymmetricMatrix, tol: f64) -> Result<EigenDecomposition> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = w.n();
    let mut a = w.mat().clone();
    let mut u = Mat::identity(n);
    let wf = a.frobenius();
    let target = tol * wf.max(f64::MIN_POSITIVE);

    let off = |a: &Mat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                off: off(&a),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Classic two-angle Jacobi rotation zeroing a[p][q].
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = c * ukp - s * ukq;
                    u[(k, q)] = s * ukp + c * ukq;
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap().then(i.cmp(&j)));

    let mut lambda = Vec::with_capacity(n);
    let mut usorted = Mat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        lambda.push(a[(k, k)]);
        // Sign convention: first nonzero component of each eigenvector positive.
        let mut sign = 1.0;
        for i in 0..n {
            if u[(i, k)] != 0.0 {
                if u[(i, k)] < 0.0 {
                    sign = -1.0;
                }
                break;
            }
        }
        for i in 0..n {
            usorted[(i, col)] = sign * u[(i, k)];
        }
    }

    let max_abs = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    // scale-relative zero-eigenvalue classification
    let rank_tol = 1e-10 * max_abs.max(1.0);
    let alpha = lambda[0];
    Ok(EigenDecomposition {
        u: usorted,
        lambda,
        alpha,
        rank_tol,
    })
}

/// Tags identifying how a norm weight was constructed.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightLabel {
    /// Q_F(b): eigenbasis reweighting by theta_b.
    Qf(f64),
    /// Q_H(b) = Q_F(b) W^{-1}.
    Qh(f64),
    /// (-W)^{1/2} for negative-definite W (left polytope / FNN).
    NegWSqrt,
    /// (-W)^{-1/2} for negative-definite W (right polytope / HNN).
    NegWInvSqrt,
    Identity,
    Custom,
}

/// Invertible symmetric weight Q defining ||x||_{2,Q} = ||Qx||_2, with the
/// positive-definite P = Q^2 cached for the LMI-form log-norm.
#[derive(Debug, Clone)]
pub struct NormWeight {
    q: Mat,
    p: Mat,
    n: usize,
    label: WeightLabel,
    min_abs_eig: f64,
}

impl NormWeight {
    pub fn new(q: Mat, label: WeightLabel) -> Result<Self> {
        let qs = SymmetricMatrix::new(q)?;
        let eig = sym_eig(&qs, DEFAULT_EIG_TOL)?;
        let min_abs = eig
            .lambda()
            .iter()
            .fold(f64::INFINITY, |m, l| m.min(l.abs()));
        if min_abs <= eig.rank_tol() {
            return Err(Error::SingularWeight(min_abs));
        }
        let q = qs.mat().clone();
        let p = q.mul(&q).symmetrize();
        Ok(NormWeight {
            n: q.rows(),
            q,
            p,
            label,
            min_abs_eig: min_abs,
        })
    }

    pub fn identity(n: usize) -> Self {
        NormWeight {
            q: Mat::identity(n),
            p: Mat::identity(n),
            n,
            label: WeightLabel::Identity,
            min_abs_eig: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Mat {
        &self.q
    }

    pub fn p(&self) -> &Mat {
        &self.p
    }

    pub fn label(&self) -> &WeightLabel {
        &self.label
    }

    pub fn min_abs_eig(&self) -> f64 {
        self.min_abs_eig
    }
}

/// ||x||_{2,Q} = ||Qx||_2.
pub fn weighted_vec_norm(x: &[f64], q: &NormWeight) -> Result<f64> {
    if x.len() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} vs weight dimension {}",
            x.len(),
            q.n()
        )));
    }
    let qx = q.q().matvec(x);
    Ok(qx.iter().map(|v| v * v).sum::<f64>().sqrt())
}

/// Largest generalized eigenvalue of (S, P) with P positive definite,
/// reduced through the Cholesky factor of P.
fn lambda_max_generalized(s: &Mat, p: &Mat) -> Result<f64> {
    let l = p.cholesky()?;
    // M = L^{-1} S L^{-T}, symmetric with the same generalized spectrum.
    let x = l.solve_lower(s);
    let y = l.solve_lower(&x.transpose());
    let m = SymmetricMatrix::new(y)?;
    let eig = sym_eig(&m, DEFAULT_EIG_TOL)?;
    Ok(eig.alpha())
}

/// Operator norm of A in ||.||_{2,Q}: sqrt(lambda_max(A^T P A, P)) with P = Q^2.
pub fn weighted_matrix_norm(a: &Mat, q: &NormWeight) -> Result<f64> {
    if !a.is_square() || a.rows() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} vs weight dimension {}",
            a.rows(),
            a.cols(),
            q.n()
        )));
    }
    let atpa = a.transpose().mul(q.p()).mul(a).symmetrize();
    let lm = lambda_max_generalized(&atpa, q.p())?;
    Ok(lm.max(0.0).sqrt())
}

/// Cross-check route: ||Q A Q^{-1}||_2 via explicit inversion of Q.
pub fn weighted_matrix_norm_direct(a: &Mat, q: &NormWeight) -> Result<f64> {
    let qinv = q.q().inverse()?;
    let b = q.q().mul(a).mul(&qinv);
    let btb = b.transpose().mul(&b).symmetrize();
    let eig = sym_eig(&SymmetricMatrix::new(btb)?, DEFAULT_EIG_TOL)?;
    Ok(eig.alpha().max(0.0).sqrt())
}

/// mu_2(A) = (1/2) lambda_max(A + A^T).
pub fn euclidean_lognorm(a: &Mat) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let s = SymmetricMatrix::new(a.add(&a.transpose()).scale(0.5))?;
    let eig = sym_eig(&s, DEFAULT_EIG_TOL)?;
    Ok(eig.alpha())
}

/// Weighted log-norm mu_{2,Q}(A) computed as the generalized symmetric
/// eigenproblem (1/2) lambda_max(PA + A^T P, P) with P = Q^2, avoiding an
/// explicit Q^{-1}.
pub fn weighted_lognorm(a: &Mat, q: &NormWeight) -> Result<f64> {
    if !a.is_square() || a.rows() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} vs weight dimension {}",
            a.rows(),
            a.cols(),
            q.n()
        )));
    }
    let s = q.p().mul(a).add(&a.transpose().mul(q.p())).scale(0.5);
    lambda_max_generalized(&s.symmetrize(), q.p())
}

/// Cross-check route: mu_2(Q A Q^{-1}).
pub fn weighted_lognorm_direct(a: &Mat, q: &NormWeight) -> Result<f64> {
    let qinv = q.q().inverse()?;
    euclidean_lognorm(&q.q().mul(a).mul(&qinv))
}

/// Moore-Penrose inverse via the spectral decomposition, zeroing eigenvalues
/// with |lambda_i| <= tol * max|lambda|.
pub fn pseudo_inverse(w: &SymmetricMatrix, tol: f64) -> Result<SymmetricMatrix> {
    assert!(tol > 0.0, "tolerance must be positive");
    let eig = sym_eig(w, DEFAULT_EIG_TOL)?;
    let max_abs = eig.lambda().iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cut = tol * max_abs;
    Ok(eig.apply_spectral(|l| if l.abs() <= cut { 0.0 } else { 1.0 / l }))
}

/// Hurwitz test with closed-form spectral abscissa for 1x1 and 2x2 matrices.
/// Returns (alpha(G) < -margin, alpha(G)).
pub fn is_hurwitz(g: &Mat, margin: f64) -> Result<(bool, f64)> {
    if !g.is_square() || g.rows() == 0 || g.rows() > 2 {
        return Err(Error::UnsupportedDimension(g.rows()));
    }
    let alpha = match g.rows() {
        1 => g[(0, 0)],
        2 => {
            let tr = g[(0, 0)] + g[(1, 1)];
            let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
            let disc = tr * tr - 4.0 * det;
            if disc >= 0.0 {
                0.5 * (tr + disc.sqrt())
            } else {
                0.5 * tr
            }
        }
        _ => unreachable!(),
    };
    Ok((alpha < -margin, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
        let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymmetricMatrix::new(Mat::from_rows(n, n, &data)).unwrap()
    }

    fn random_spd_weight(rng: &mut ChaCha8Rng, n: usize) -> NormWeight {
        let w = random_symmetric(rng, n);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        // Shift the spectrum into [0.5, ...] and take the square root.
        let min = eig.lambda().iter().cloned().fold(f64::INFINITY, f64::min);
        let q = eig.apply_spectral(|l| (l - min + 0.5).sqrt());
        NormWeight::new(q.mat().clone(), WeightLabel::Custom).unwrap()
    }

    #[test]
    fn exchange_matrix_eigenvalues() {
        let w = SymmetricMatrix::from_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert!((eig.lambda()[0] - 1.0).abs() < 1e-12);
        assert!((eig.lambda()[1] + 1.0).abs() < 1e-12);
        assert!((eig.alpha() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let w = SymmetricMatrix::from_diag(&[2.0, 3.0]);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert_eq!(eig.lambda(), &[3.0, 2.0]);
        // columns are identity columns up to permutation
        let rec = eig.apply_spectral(|l| l);
        assert!(rec.mat().sub(w.mat()).max_abs() < 1e-12);
    }

    #[test]
    fn rank_one_shift() {
        let w = SymmetricMatrix::from_rows(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert!((eig.lambda()[0] - 3.0).abs() < 1e-12);
        assert!((eig.lambda()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_reconstruction_500_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..500 {
            let n = 2 + (k % 7);
            let w = random_symmetric(&mut rng, n);
            let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
            let rec = eig.apply_spectral(|l| l);
            assert!(
                rec.mat().sub(w.mat()).max_abs() <= 1e-9,
                "reconstruction failed at sample {k}"
            );
            let utu = eig.u().transpose().mul(eig.u());
            assert!(utu.sub(&Mat::identity(n)).max_abs() <= 1e-10);
            for i in 1..n {
                assert!(eig.lambda()[i - 1] >= eig.lambda()[i]);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = random_symmetric(&mut rng, 5);
        let e1 = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        let e2 = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
        assert_eq!(e1.u().data(), e2.u().data());
        assert_eq!(e1.lambda(), e2.lambda());
    }

    #[test]
    fn weighted_vec_norm_examples() {
        let id = NormWeight::identity(2);
        assert!((weighted_vec_norm(&[3.0, 4.0], &id).unwrap() - 5.0).abs() < 1e-15);
        assert_eq!(weighted_vec_norm(&[0.0, 0.0], &id).unwrap(), 0.0);
        let q = NormWeight::new(Mat::diag(&[2.0, 1.0]), WeightLabel::Custom).unwrap();
        assert!((weighted_vec_norm(&[1.0, 0.0], &q).unwrap() - 2.0).abs() < 1e-15);
        assert!(weighted_vec_norm(&[1.0], &q).is_err());
    }

    #[test]
    fn weighted_matrix_norm_examples() {
        let q = NormWeight::new(Mat::diag(&[2.0, 1.0]), WeightLabel::Custom).unwrap();
        assert!((weighted_matrix_norm(&Mat::identity(2), &q).unwrap() - 1.0).abs() < 1e-10);
        let id = NormWeight::identity(2);
        let a = Mat::diag(&[2.0, -3.0]);
        assert!((weighted_matrix_norm(&a, &id).unwrap() - 3.0).abs() < 1e-10);
        // nilpotent example: ||Q A Q^{-1}||_2 with QAQ^{-1} = [[0,2],[0,0]]
        let a = Mat::from_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let v = weighted_matrix_norm(&a, &q).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        assert!((v - weighted_matrix_norm_direct(&a, &q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn euclidean_lognorm_examples() {
        assert!((euclidean_lognorm(&Mat::diag(&[-1.0, -2.0])).unwrap() + 1.0).abs() < 1e-12);
        let skew = Mat::from_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(euclidean_lognorm(&skew).unwrap().abs() < 1e-12);
        let a = Mat::from_rows(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!((euclidean_lognorm(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_lognorm_examples() {
        let id = NormWeight::identity(2);
        let a = Mat::from_rows(2, 2, &[0.3, -0.8, 0.1, -0.4]);
        assert!(
            (weighted_lognorm(&a, &id).unwrap() - euclidean_lognorm(&a).unwrap()).abs() < 1e-12
        );
        let q = NormWeight::new(Mat::diag(&[2.0, 1.0]), WeightLabel::Custom).unwrap();
        // A = aI maps to a for any valid Q.
        let ai = Mat::diag(&[0.7, 0.7]);
        assert!((weighted_lognorm(&ai, &q).unwrap() - 0.7).abs() < 1e-10);
        // mu of [[-1,4],[0,-1]] under diag(2,1): QAQ^{-1} = [[-1,8],[0,-1]],
        // (1/2) lambda_max([[-2,8],[8,-2]]) = 3.
        let a = Mat::from_rows(2, 2, &[-1.0, 4.0, 0.0, -1.0]);
        let v = weighted_lognorm(&a, &q).unwrap();
        assert!((v - 3.0).abs() < 1e-10, "got {v}");
        assert!((v - weighted_lognorm_direct(&a, &q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn lognorm_dominates_abscissa() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = 2 + rng.gen_range(0..5usize);
            let a = random_symmetric(&mut rng, n);
            let q = random_spd_weight(&mut rng, n);
            let alpha = sym_eig(&a, DEFAULT_EIG_TOL).unwrap().alpha();
            let mu = weighted_lognorm(a.mat(), &q).unwrap();
            assert!(mu >= alpha - 1e-9, "mu {mu} < alpha {alpha}");
        }
    }

    #[test]
    fn composition_property_diagonal_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let n = 3;
            let a = Mat::from_rows(
                n,
                n,
                &(0..n * n)
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect::<Vec<_>>(),
            );
            let d1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let d2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let q1 = NormWeight::new(Mat::diag(&d1), WeightLabel::Custom).unwrap();
            let q12: Vec<f64> = d1.iter().zip(&d2).map(|(a, b)| a * b).collect();
            let q12 = NormWeight::new(Mat::diag(&q12), WeightLabel::Custom).unwrap();
            let q2inv = Mat::diag(&d2.iter().map(|v| 1.0 / v).collect::<Vec<_>>());
            let conj = Mat::diag(&d2).mul(&a).mul(&q2inv);
            let lhs = weighted_lognorm(&a, &q12).unwrap();
            let rhs = weighted_lognorm(&conj, &q1).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn translation_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..50 {
            let n = 4;
            let a = Mat::from_rows(
                n,
                n,
                &(0..n * n)
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect::<Vec<_>>(),
            );
            let q = random_spd_weight(&mut rng, n);
            let shift = rng.gen_range(-2.0..2.0);
            let shifted = a.add(&Mat::identity(n).scale(shift));
            let lhs = weighted_lognorm(&shifted, &q).unwrap();
            let rhs = weighted_lognorm(&a, &q).unwrap() + shift;
            assert!((lhs - rhs).abs() <= 1e-9);
        }
    }

    #[test]
    fn pseudo_inverse_examples() {
        let w = SymmetricMatrix::from_diag(&[2.0, 0.0]);
        let pinv = pseudo_inverse(&w, 1e-10).unwrap();
        assert!(pinv.mat().sub(&Mat::diag(&[0.5, 0.0])).max_abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let w = random_symmetric(&mut rng, 4);
        let pinv = pseudo_inverse(&w, 1e-10).unwrap();
        // invertible case: W * W^+ = I
        let prod = w.mat().mul(pinv.mat());
        assert!(prod.sub(&Mat::identity(4)).max_abs() < 1e-8);

        let z = SymmetricMatrix::zeros(3);
        assert_eq!(pseudo_inverse(&z, 1e-10).unwrap().mat().max_abs(), 0.0);
    }

    #[test]
    fn penrose_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..20 {
            let n = 4;
            // rank-deficient: project out one eigendirection
            let w = random_symmetric(&mut rng, n);
            let eig = sym_eig(&w, DEFAULT_EIG_TOL).unwrap();
            let lam2 = eig.lambda()[2];
            let w = eig.apply_spectral(|l| if (l - lam2).abs() < 1e-14 { 0.0 } else { l });
            let p = pseudo_inverse(&w, 1e-10).unwrap();
            let a = w.mat();
            let ap = p.mat();
            let scale = a.max_abs().max(1.0);
            assert!(a.mul(ap).mul(a).sub(a).max_abs() <= 1e-8 * scale);
            assert!(ap.mul(a).mul(ap).sub(ap).max_abs() <= 1e-8 * scale);
            let apa = a.mul(ap);
            assert!(apa.sub(&apa.transpose()).max_abs() <= 1e-8 * scale);
            let paa = ap.mul(a);
            assert!(paa.sub(&paa.transpose()).max_abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn hurwitz_examples() {
        let g = Mat::from_rows(2, 2, &[-1.0, 0.0, 0.5, -0.5]);
        let (h, alpha) = is_hurwitz(&g, 0.0).unwrap();
        assert!(h);
        assert!((alpha + 0.5).abs() < 1e-15);

        let g = Mat::from_rows(2, 2, &[0.0, 0.0, 1.0, -1.0]);
        let (h, alpha) = is_hurwitz(&g, 0.0).unwrap();
        assert!(!h);
        assert_eq!(alpha, 0.0);

        // gain-matrix shape: eigenvalues -1 and -1+a
        let a = 0.25;
        let g = Mat::from_rows(2, 2, &[-1.0, 0.0, a, -1.0 + a]);
        let (h, alpha) = is_hurwitz(&g, 0.0).unwrap();
        assert!(h);
        assert!((alpha + 0.75).abs() < 1e-15);

        assert!(is_hurwitz(&Mat::identity(3), 0.0).is_err());
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Mat::from_rows(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(SymmetricMatrix::new_checked(m.clone(), 1e-9).is_err());
        // plain constructor symmetrizes instead
        let s = SymmetricMatrix::new(m).unwrap();
        assert_eq!(s.mat()[(0, 1)], 0.75);
        assert_eq!(s.mat()[(1, 0)], 0.75);
    }

    #[test]
    fn nonfinite_rejected() {
        let m = Mat::from_rows(1, 1, &[f64::NAN]);
        assert!(matches!(SymmetricMatrix::new(m), Err(Error::NonFinite)));
    }
}
