//! Integrate trajectory pairs of certified networks and measure how fast
//! they close in, in the certificate norm. Prints CSV for the first pair so
//! the envelope can be plotted.

use contracert::certify::{certify_fnn, certify_hnn, Model};
use contracert::dynamics::{
    integrate, measure_contraction, ActivationKind, NetworkModel, TOL_DYN,
};
use contracert::io::trajectory_csv;
use contracert::linalg::SymmetricMatrix;
use contracert::mat::vec_sub;

fn main() {
    let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
    let cert = certify_fnn(&w, None).unwrap();
    let model = NetworkModel::new(
        Model::Fnn,
        w,
        vec![0.2, 0.4],
        ActivationKind::ReLU,
    )
    .unwrap();

    let x0 = [1.0, -0.5];
    let y0 = [-0.3, 0.8];
    let r = measure_contraction(&model, &cert, &x0, &y0, 0.01, 5.0).unwrap();
    println!(
        "firing-rate, ReLU: certified rate {:.3}, empirical sup rate {:+.4}, \
         violated (tol {TOL_DYN:.0e}): {}",
        cert.rate, r.empirical_rate, r.violated
    );
    println!(
        "separation {:.4} -> {:.4e} over 5 time units",
        r.delta0, r.delta_final
    );

    let traj = integrate(&model, &x0, 0.01, 0.05).unwrap();
    println!("first trajectory, first steps:\n{}", trajectory_csv(&traj));

    // Hopfield with tanh, indefinite weight matrix
    let w = SymmetricMatrix::from_rows(2, &[0.3, 0.2, 0.2, -0.6]).unwrap();
    let cert = certify_hnn(&w, None).unwrap();
    let model = NetworkModel::new(Model::Hnn, w, vec![0.1, -0.3], ActivationKind::Tanh).unwrap();
    let r = measure_contraction(&model, &cert, &[2.0, 0.0], &[0.0, 2.0], 0.01, 5.0).unwrap();
    println!(
        "hopfield, tanh: certified rate {:.4}, empirical {:+.4}, violated: {}",
        cert.rate, r.empirical_rate, r.violated
    );

    // weak case alpha(W) = 1: no expansion, but no decay guarantee either
    let w = SymmetricMatrix::from_diag(&[1.0, 0.3]);
    let cert = certify_fnn(&w, None).unwrap();
    let model = NetworkModel::new(Model::Fnn, w, vec![0.1, -0.2], ActivationKind::Tanh).unwrap();
    let x0 = [0.7, -0.4];
    let y0 = [-0.2, 0.5];
    let tx = integrate(&model, &x0, 0.01, 5.0).unwrap();
    let ty = integrate(&model, &y0, 0.01, 5.0).unwrap();
    let d0 = cert.delta_norm(&vec_sub(&x0, &y0)).unwrap();
    let dt = cert
        .delta_norm(&vec_sub(tx.final_state(), ty.final_state()))
        .unwrap();
    println!("weak case: delta(0) = {d0:.4}, delta(5) = {dt:.4} (never above delta(0))");
}
