//! Hopfield certificate for a singular synaptic matrix: kernel /
//! non-kernel subspace split, the 2x2 interconnection gain matrix, and the
//! composite norm that certifies rate 1 - alpha(W) - eps.

use contracert::certify::certify_hnn;
use contracert::dynamics::{measure_contraction, ActivationKind, NetworkModel};
use contracert::certify::Model;
use contracert::linalg::SymmetricMatrix;
use contracert::mat::Mat;

fn main() {
    // rank-2 matrix on R^3: eigenvalues {0.6, -0.4, 0}
    let u1 = [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0];
    let u2 = [1.0 / 3.0, -2.0 / 3.0, 2.0 / 3.0];
    let mut m = Mat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = 0.6 * u1[i] * u1[j] - 0.4 * u2[i] * u2[j];
        }
    }
    let w = SymmetricMatrix::new(m).unwrap();

    let cert = certify_hnn(&w, None).unwrap();
    println!(
        "case {:?}: alpha(W) = {:.3}, eps = {:.3}, certified rate {:.3}",
        cert.case,
        cert.alpha_w,
        cert.epsilon.unwrap(),
        cert.rate
    );

    let split = cert.split.as_ref().unwrap();
    println!(
        "subspace split: {} non-kernel directions (lambda = {:?}), kernel dim {}",
        split.n_par(),
        split.lambda_par(),
        split.n_perp()
    );

    let gain = cert.gain.as_ref().unwrap();
    println!(
        "gain matrix {:?}: block rates ({}, {}), cross gain {:.3}, eta = {:?}",
        gain.gamma().data(),
        gain.c_perp(),
        gain.c_par(),
        gain.lip_cross(),
        gain.eta()
    );
    println!(
        "vertex scan in the composite norm: max log-norm {:+.6} <= {:+.6} ({:?})",
        cert.verification.max_vertex_lognorm,
        -cert.rate,
        cert.verification.verdict
    );

    // watch two trajectories close in at the certified rate
    let model = NetworkModel::new(
        Model::Hnn,
        w,
        vec![0.3, -0.1, 0.2],
        ActivationKind::Tanh,
    )
    .unwrap();
    let r = measure_contraction(
        &model,
        &cert,
        &[1.0, -0.5, 0.3],
        &[-0.4, 0.8, -0.2],
        0.01,
        5.0,
    )
    .unwrap();
    println!(
        "empirical rate over 5 time units: {:+.4} (certified {:+.4}, violated: {})",
        r.empirical_rate, -cert.rate, r.violated
    );
}
