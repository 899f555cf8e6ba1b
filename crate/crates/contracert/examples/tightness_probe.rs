//! Empirically probe how tight the certified one-sided Lipschitz bound is:
//! sample pre-activations that drive the activation slopes to every corner
//! of [0,1]^n and take the worst Jacobian log-norm in the certificate norm.

use contracert::certify::{tightness_probe, Model};
use contracert::dynamics::ActivationKind;
use contracert::linalg::SymmetricMatrix;

fn main() {
    let cases = [
        ("diag(0.5, -1), relu", SymmetricMatrix::from_diag(&[0.5, -1.0]), ActivationKind::ReLU),
        (
            "indefinite 3x3, tanh",
            SymmetricMatrix::from_rows(3, &[0.2, 0.3, -0.1, 0.3, 0.1, 0.2, -0.1, 0.2, -0.4])
                .unwrap(),
            ActivationKind::Tanh,
        ),
        (
            "negative definite, saturation",
            SymmetricMatrix::from_rows(2, &[-2.0, 0.5, 0.5, -1.5]).unwrap(),
            ActivationKind::saturation(vec![-1.0, -1.0], vec![3.0, 3.0]).unwrap(),
        ),
    ];

    for (name, w, act) in cases {
        for model in [Model::Fnn, Model::Hnn] {
            let r = tightness_probe(&w, model, &act, 0).unwrap();
            println!(
                "{name}, {model:?}: bound {:+.6}, best sampled log-norm {:+.6}, gap {:.2e} \
                 ({} slope patterns)",
                r.bound, r.estimated_osl, r.gap, r.samples
            );
        }
    }

    // the logistic slope never exceeds 1/4, so its vertices are out of reach
    let w = SymmetricMatrix::from_diag(&[0.5, -1.0]);
    match tightness_probe(&w, Model::Fnn, &ActivationKind::Logistic, 0) {
        Err(e) => println!("logistic: refused ({e})"),
        Ok(_) => unreachable!(),
    }
}
