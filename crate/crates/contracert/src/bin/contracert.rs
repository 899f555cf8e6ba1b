//! Command-line front end: certify networks, verify polytope optimality,
//! simulate trajectories, solve box QPs, and run the seeded selftest suite.
//!
//! Exit codes: 0 success, 1 domain/usage error, 2 a numerically violated
//! theory claim (treated as a defect signal).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use contracert::certify::{certify_fnn, certify_hnn, Model};
use contracert::dynamics::{integrate, measure_contraction, ActivationKind, NetworkModel};
use contracert::io;
use contracert::linalg::{sym_eig, SymmetricMatrix, DEFAULT_EIG_TOL};
use contracert::mat::Mat;
use contracert::polytope::{
    check_log_optimality, product_sym_check, EnumerationMode, PolytopeSpec, ProductSide, Side,
    Verdict,
};
use contracert::qp::{oracle_solve, solve, QpProblem};
use contracert::weights::verify_splitting;
use contracert::Error;

#[derive(Parser)]
#[command(name = "contracert", version, about = "Contraction certificates for symmetric-weight recurrent networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Fnn,
    Hnn,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fnn => Model::Fnn,
            ModelArg::Hnn => Model::Hnn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a contraction certificate for a weight matrix.
    Certify {
        input: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check log-optimality of the weighted norm over the matrix polytope.
    VerifyPolytope {
        input: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        eps: Option<f64>,
        /// Force exhaustive vertex enumeration (refused above n = 20).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Integrate a network and emit the trajectory as CSV.
    Simulate {
        input: PathBuf,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a box-constrained QP by integrating its saturation network.
    SolveQp {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the seeded property suite and report pass/fail counts.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("CONTRACERT_THREADS") {
        match v.parse::<usize>() {
            Ok(t) if t > 0 => {
                // ignore failure if a pool is already installed
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => eprintln!("warning: ignoring invalid CONTRACERT_THREADS={v}"),
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Certify {
            input,
            model,
            eps,
            output,
        } => {
            let w = io::parse_matrix_json(&input)?;
            let cert = match Model::from(model) {
                Model::Fnn => certify_fnn(&w, eps)?,
                Model::Hnn => certify_hnn(&w, eps)?,
            };
            let text = io::to_json_string(&io::certificate_json(&cert))?;
            io::emit(output.as_deref(), &text)?;
            Ok(if cert.verification.verdict == Verdict::Violated {
                2
            } else {
                0
            })
        }
        Command::VerifyPolytope {
            input,
            side,
            eps,
            exhaustive,
            seed,
            output,
        } => {
            let w = io::parse_matrix_json(&input)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let mode = if exhaustive {
                EnumerationMode::Exhaustive
            } else {
                EnumerationMode::Auto { seed }
            };
            let report = check_log_optimality(&PolytopeSpec::new(w, side), eps, mode)?;
            let text = io::to_json_string(&io::report_json(&report))?;
            io::emit(output.as_deref(), &text)?;
            Ok(if report.verdict == Verdict::Violated { 2 } else { 0 })
        }
        Command::Simulate {
            input,
            model,
            step,
            horizon,
            output,
        } => {
            let (net, x0) = io::parse_simulation_json(&input, model.map(Into::into))?;
            let traj = integrate(&net, &x0, step, horizon)?;
            io::emit(output.as_deref(), &io::trajectory_csv(&traj))?;
            Ok(0)
        }
        Command::SolveQp {
            input,
            tol,
            step,
            horizon,
            output,
        } => {
            let p = io::parse_qp_json(&input)?;
            let sol = solve(&p, tol, step, horizon)?;
            let text = io::to_json_string(&io::solution_json(&sol))?;
            io::emit(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Selftest { seed } => selftest(seed),
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricMatrix {
    let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    SymmetricMatrix::from_rows(n, &data).expect("finite entries")
}

struct Suite {
    passed: u32,
    failed: u32,
    theory_violated: bool,
}

impl Suite {
    fn record(&mut self, name: &str, ok: bool, theory: bool) {
        if ok {
            self.passed += 1;
            println!("selftest: {name}: pass");
        } else {
            self.failed += 1;
            if theory {
                self.theory_violated = true;
            }
            println!("selftest: {name}: FAIL");
        }
    }
}

fn selftest(seed: u64) -> Result<u8, Error> {
    let mut suite = Suite {
        passed: 0,
        failed: 0,
        theory_violated: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // certificates never report Violated
    let mut ok = true;
    for k in 0..50 {
        let n = 2 + k % 4;
        let w = random_symmetric(&mut rng, n, 0.5);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL)?;
        if eig.alpha() > 1.0 {
            continue;
        }
        ok &= certify_fnn(&w, None)?.verification.verdict != Verdict::Violated;
        if !eig.is_singular() {
            ok &= certify_hnn(&w, None)?.verification.verdict != Verdict::Violated;
        }
    }
    suite.record("certificates verified on random weights", ok, true);

    // splitting identity W = Q_F - Q_F^2 / (4 alpha)
    let mut ok = true;
    for k in 0..50 {
        let n = 2 + k % 4;
        let w = random_symmetric(&mut rng, n, 0.5);
        let eig = sym_eig(&w, DEFAULT_EIG_TOL)?;
        let b = eig.alpha().max(0.1);
        let res = verify_splitting(&w, b)?;
        ok &= res <= 1e-10 * w.mat().max_abs().max(1.0);
    }
    suite.record("splitting identity residuals", ok, true);

    // spectrum/log-norm equalities for products of symmetric matrices
    let mut ok = true;
    for k in 0..50 {
        let n = 2 + k % 4;
        let s = random_symmetric(&mut rng, n, 1.0);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
        let q = SymmetricMatrix::from_diag(&d);
        for side in [ProductSide::SQ, ProductSide::QS] {
            let chk = product_sym_check(&s, &q, side)?;
            ok &= chk.norm_gap <= 1e-8 && chk.lognorm_gap <= 1e-8;
        }
    }
    suite.record("product spectrum and norm equalities", ok, true);

    // QP solver against the active-set oracle
    let mut ok = true;
    for _ in 0..25 {
        let n = 2 + rng.gen_range(0..4);
        let g = Mat::from_rows(
            n,
            n,
            &(0..n * n)
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect::<Vec<_>>(),
        );
        let mut a = g.transpose().mul(&g);
        for i in 0..n {
            a[(i, i)] += 0.1;
        }
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut mu = Vec::new();
        let mut nu = Vec::new();
        for _ in 0..n {
            let lo: f64 = rng.gen_range(-1.5..0.5);
            mu.push(lo);
            nu.push(lo + rng.gen_range(0.0..2.0));
        }
        let p = QpProblem::new(SymmetricMatrix::new(a)?, u, mu, nu)?;
        let s = solve(&p, 1e-8, None, None)?;
        let o = oracle_solve(&p)?;
        let gap = s
            .x_star
            .iter()
            .zip(&o.x_star)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        ok &= gap <= 1e-6 && o.kkt_residual <= 1e-8;
    }
    suite.record("qp solver agrees with active-set oracle", ok, true);

    // trajectory pairs respect the certified envelope
    let mut ok = true;
    let mut tested = 0;
    while tested < 20 {
        let n = 2 + tested % 3;
        let w = random_symmetric(&mut rng, n, 0.4);
        let cert = match certify_fnn(&w, None) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = NetworkModel::new(Model::Fnn, w, u, ActivationKind::Tanh)?;
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y0: Vec<f64> = x0.iter().map(|v| v + 0.5).collect();
        let r = measure_contraction(&m, &cert, &x0, &y0, 0.01, 2.0)?;
        ok &= !r.violated;
        tested += 1;
    }
    suite.record("empirical contraction within certified rates", ok, true);

    println!(
        "selftest: {} passed, {} failed (seed {seed})",
        suite.passed, suite.failed
    );
    Ok(if suite.theory_violated {
        2
    } else if suite.failed > 0 {
        1
    } else {
        0
    })
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
