//! Contraction certificates for firing-rate networks across the alpha(W)
//! dispatch: positive, zero (eps-slack), negative, and the weak boundary
//! case alpha(W) = 1.

use contracert::certify::certify_fnn;
use contracert::io::{certificate_json, to_json_string};
use contracert::linalg::SymmetricMatrix;

fn show(name: &str, w: &SymmetricMatrix, eps: Option<f64>) {
    match certify_fnn(w, eps) {
        Ok(cert) => {
            println!(
                "{name}: case {:?}, alpha(W) = {:+.6}, certified rate {:.6}, \
                 vertex max log-norm {:+.3e} ({:?})",
                cert.case,
                cert.alpha_w,
                cert.rate,
                cert.verification.max_vertex_lognorm,
                cert.verification.verdict,
            );
            println!("  {}", to_json_string(&certificate_json(&cert)).unwrap());
        }
        Err(e) => println!("{name}: refused ({e})"),
    }
}

fn main() {
    let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
    show("diag(0.5, -1)", &w, None);

    let w = SymmetricMatrix::from_rows(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
    show("[[2,1],[1,2]] scaled into range", &SymmetricMatrix::new(w.mat().scale(0.3)).unwrap(), None);

    // alpha(W) = 0: log-eps-optimal weight, rate 1 - eps
    let w = SymmetricMatrix::from_diag(&[0.0, -0.7]);
    show("diag(0, -0.7) with eps = 1e-2", &w, Some(1e-2));

    // negative definite: rate 1 in the (-W)^{1/2} norm
    let w = SymmetricMatrix::from_rows(2, &[-2.0, 0.5, 0.5, -1.5]).unwrap();
    show("negative definite", &w, None);

    // alpha(W) = 1: weakly contracting, rate 0
    let w = SymmetricMatrix::from_diag(&[1.0, 0.3]);
    show("alpha(W) = 1", &w, None);

    // out of range: no certificate exists
    let w = SymmetricMatrix::from_diag(&[1.5, 0.0]);
    show("alpha(W) = 1.5", &w, None);
}
