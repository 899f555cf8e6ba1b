//! Solve a box-constrained QP by integrating its contracting saturation
//! network, then cross-check against the exhaustive active-set oracle and
//! the KKT sign conditions.

use contracert::io::{solution_json, to_json_string};
use contracert::linalg::SymmetricMatrix;
use contracert::qp::{build_network, kkt_check, oracle_solve, solve, QpProblem, KKT_BOUNDARY_TOL};

fn main() {
    // min 1/2 y'Ay - u'y on [0, 0.4]^2
    let a = SymmetricMatrix::from_rows(2, &[2.0, 0.5, 0.5, 1.0]).unwrap();
    let p = QpProblem::new(a, vec![1.0, 0.2], vec![0.0, 0.0], vec![0.4, 0.4]).unwrap();

    let (_, cert) = build_network(&p).unwrap();
    println!(
        "network: W = I - A, lambda_min(A) = {:.4} -> contraction rate {:.4} ({:?})",
        p.lambda_min(),
        cert.rate,
        cert.case
    );

    let sol = solve(&p, 1e-8, None, None).unwrap();
    println!(
        "solver:  x = {:?} after {} steps, J = {:.6}, kkt residual {:.2e}",
        sol.x_star, sol.iterations, sol.objective, sol.kkt_residual
    );

    let oracle = oracle_solve(&p).unwrap();
    println!(
        "oracle:  x = {:?} (active-set enumeration), J = {:.6}",
        oracle.x_star, oracle.objective
    );
    let gap = sol
        .x_star
        .iter()
        .zip(&oracle.x_star)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("agreement: {gap:.2e} in the max norm");

    println!("json: {}", to_json_string(&solution_json(&sol)).unwrap());

    // an infeasible stationary point fails the sign conditions
    let interior = [0.2, 0.2];
    println!(
        "kkt residual at a non-optimal interior point: {:.3}",
        kkt_check(&p, &interior, KKT_BOUNDARY_TOL).unwrap()
    );
}
