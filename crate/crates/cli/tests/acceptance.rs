//! Acceptance checks. Each test prints one `PASS`/`FAIL` line with the
//! measured values and then asserts the outcome.
//!
//! Heavy criteria run the real benchmark suites, so the whole target takes
//! several minutes even with optimizations on. Tests share one lock to keep
//! the timing measurements free of contention.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use kronreg::gcrf::{predict, GcrfProblem};
use kronreg::graph::{kronecker, laplacian, normalized_laplacian, SimilarityMatrix};
use kronreg::nkp::{kron_residual, nearest_kron, rearrange, vec_op, BlockShape};
use kronreg::spectral::{approx_msn, build_basis, exact_kron_basis, sym_eig};
use kronreg::synthdata::gen_dataset;
use kronreg::{BasisKind, Dataset, DatasetSpec, GraphKind, Pairing, RngStream, SpectralBasis};
use kronreg_cli::{run_suite, summarize, Model, Suite, SuiteConfig, SummaryRow};
use ndarray::{Array1, Array2};
use rand::Rng;

static SERIAL: Mutex<()> = Mutex::new(());

/// Writes past the test harness capture so the line shows up in every run.
fn report(name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "\n{verdict} {name}: {detail}");
    let _ = out.flush();
}

fn finish(name: &str, pass: bool, detail: String) {
    report(name, pass, &detail);
    assert!(pass, "{name}: {detail}");
}

fn lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn unweighted(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> SimilarityMatrix {
    let edges: Vec<_> = edges.collect();
    SimilarityMatrix::unweighted(n, &edges).unwrap()
}

fn cycle(n: usize) -> SimilarityMatrix {
    unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
}

fn complete(n: usize) -> SimilarityMatrix {
    unweighted(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

fn sorted(v: &Array1<f64>) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fro(m: &Array2<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest `‖M u − μ u‖` over the basis columns.
fn max_eigen_residual(m: &Array2<f64>, basis: &SpectralBasis) -> f64 {
    let u = basis.to_dense(usize::MAX).unwrap();
    basis
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(c, &mu)| {
            let col = u.column(c);
            let r = m.dot(&col) - &col * mu;
            r.dot(&r).sqrt()
        })
        .fold(0.0, f64::max)
}

fn small_dataset(seed: u64) -> Dataset {
    let spec = DatasetSpec::new(GraphKind::ErdosRenyi, 12, 15, 0.5);
    gen_dataset(&spec, RngStream::new(seed, 0)).unwrap()
}

fn row<'a>(rows: &'a [SummaryRow], model: Model, pick: impl Fn(&SummaryRow) -> bool) -> &'a SummaryRow {
    rows.iter()
        .find(|r| r.model == model.name() && pick(r))
        .unwrap_or_else(|| panic!("no summary row for {}", model.name()))
}

fn mse_of(r: &SummaryRow) -> Option<(f64, f64)> {
    Some((r.trimmed_mse?, r.half_width()?))
}

fn fmt_mse(r: &SummaryRow) -> String {
    match mse_of(r) {
        Some((m, h)) => format!("{m:.4e}±{h:.2e}"),
        None => format!("n/a ({} of {} runs failed)", r.failed, r.runs),
    }
}

#[test]
fn spectral_exactness_on_regular_factors() {
    let _g = lock();
    let start = Instant::now();
    let mut worst_spectrum = 0.0_f64;
    let mut worst_msn = 0.0_f64;
    for (s1, s2) in [(cycle(8), cycle(12)), (complete(5), complete(7))] {
        let product = SimilarityMatrix::new(kronecker(s1.view(), s2.view()).unwrap()).unwrap();
        let exact = sorted(&sym_eig(&laplacian(&product)).unwrap().values);
        for pairing in [Pairing::Sorted, Pairing::VertexOrder] {
            for kind in [BasisKind::LaplaceVec, BasisKind::NormLaplaceVec] {
                let b = build_basis(kind, &s1, &s2, pairing, usize::MAX).unwrap();
                worst_spectrum = worst_spectrum.max(max_abs_diff(&sorted(b.eigenvalues()), &exact));
            }
        }
        let nl = normalized_laplacian(&product).unwrap();
        worst_msn = worst_msn.max(max_eigen_residual(nl.entries(), &approx_msn(&s1, &s2).unwrap()));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_spectrum < 1e-8 && worst_msn < 1e-8 && secs < 1.0;
    finish(
        "spectral exactness",
        pass,
        format!("spectrum error {worst_spectrum:.2e} (<1e-8), msn eigen residual {worst_msn:.2e} (<1e-8), {secs:.3}s (<1s)"),
    );
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let _g = lock();
    let start = Instant::now();
    let h = 1e-5;
    let mut worst = 0.0_f64;
    let mut rng = RngStream::new(2024, 0).rng();
    for kind in [BasisKind::ExactDense, BasisKind::LaplaceVec, BasisKind::NormLaplaceVec, BasisKind::Msn] {
        let mut done = 0;
        let mut seed = 0;
        while done < 20 {
            seed += 1;
            let d = small_dataset(seed);
            let basis = match build_basis(kind, &d.s1, &d.s2, Pairing::Sorted, usize::MAX) {
                Ok(b) => b,
                // normalized estimates reject factors with isolated vertices
                Err(_) => continue,
            };
            let p = GcrfProblem::build(&basis, d.y_train.view(), d.r_train.view()).unwrap();
            let alpha = rng.random_range(0.5..2.0);
            let beta = rng.random_range(0.5..5.0);
            let (ga, gb) = p.gradients(alpha, beta).unwrap();
            let ll = |a: f64, b: f64| p.log_likelihood(a, b).unwrap();
            let fa = (ll(alpha + h, beta) - ll(alpha - h, beta)) / (2.0 * h);
            let fb = (ll(alpha, beta + h) - ll(alpha, beta - h)) / (2.0 * h);
            worst = worst.max((ga - fa).abs() / fa.abs()).max((gb - fb).abs() / fb.abs());
            done += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < 1e-5 && secs < 5.0;
    finish(
        "gradient correctness",
        pass,
        format!("max relative error {worst:.2e} (<1e-5) over 4 bases x 20 problems, {secs:.2}s (<5s)"),
    );
}

#[test]
fn nearest_kronecker_recovers_exact_products() {
    let _g = lock();
    let mut worst_residual = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    for seed in 1..=5 {
        let d = small_dataset(seed);
        let (n1, n2) = (d.s1.order(), d.s2.order());
        let a = kronecker(d.s1.view(), d.s2.view()).unwrap();
        let f = nearest_kron(a.view(), n1, n2).unwrap();
        worst_residual = worst_residual.max(f.residual_fro / fro(&a));
        // σ2 ≤ ‖ℛ(A) − vec(B) vec(C)ᵀ‖_F, so this bounds σ2/σ1 from above.
        let ra = rearrange(a.view(), BlockShape { m1: n1, n1, m2: n2, n2 }).unwrap();
        let (vb, vc) = (vec_op(f.b.view()), vec_op(f.c.view()));
        let deflated = Array2::from_shape_fn(ra.dim(), |(i, j)| ra[[i, j]] - vb[i] * vc[j]);
        worst_ratio = worst_ratio.max(fro(&deflated) / f.sigma1);
    }

    let mut rng = RngStream::new(77, 0).rng();
    let mut worst_identity = 0.0_f64;
    for _ in 0..200 {
        let (m1, n1, m2, n2) = (
            rng.random_range(1..5),
            rng.random_range(1..5),
            rng.random_range(1..5),
            rng.random_range(1..5),
        );
        let mut mat = |r: usize, c: usize| Array2::from_shape_fn((r, c), |_| rng.random_range(-1.0..1.0));
        let (a, b, c) = (mat(m1 * m2, n1 * n2), mat(m1, n1), mat(m2, n2));
        let direct = fro(&(&a - &kronecker(b.view(), c.view()).unwrap()));
        let ra = rearrange(a.view(), BlockShape { m1, n1, m2, n2 }).unwrap();
        let (vb, vc) = (vec_op(b.view()), vec_op(c.view()));
        let permuted = fro(&Array2::from_shape_fn(ra.dim(), |(i, j)| ra[[i, j]] - vb[i] * vc[j]));
        let matrix_free = kron_residual(a.view(), b.view(), c.view()).unwrap();
        worst_identity = worst_identity.max((direct - permuted).abs()).max((direct - matrix_free).abs());
    }

    let pass = worst_residual < 1e-8 && worst_ratio < 1e-8 && worst_identity < 1e-10;
    finish(
        "nkp recovery",
        pass,
        format!(
            "residual/‖A‖ {worst_residual:.2e} (<1e-8), σ2/σ1 ≤ {worst_ratio:.2e} (<1e-8), \
             rearrangement identity error {worst_identity:.2e} (<1e-10)"
        ),
    );
}

#[test]
fn er_fitness_point_and_msn_on_dense_ws() {
    let _g = lock();
    let mut er = SuiteConfig::new(Suite::Fitness, GraphKind::ErdosRenyi);
    er.sizes = vec![(100, 200)];
    er.densities = vec![0.1];
    er.models = vec![Model::LaplaceVec, Model::NormLaplaceVec, Model::Msn];
    er.reps = 100;
    let rows = summarize(&run_suite(&er).unwrap());
    let tol = 0.08;
    let check = |model: Model, target: f64| {
        let r = row(&rows, model, |_| true);
        let ok = mse_of(r).is_some_and(|(m, _)| (m - target).abs() <= tol);
        (ok, format!("{} {} (target {target}±{tol})", model.name(), fmt_mse(r)))
    };
    let (lv_ok, lv) = check(Model::LaplaceVec, 0.37);
    let (nlv_ok, nlv) = check(Model::NormLaplaceVec, 0.19);

    let mut ws = SuiteConfig::new(Suite::Fitness, GraphKind::WattsStrogatz);
    ws.sizes = vec![(100, 200)];
    ws.densities = vec![0.5, 0.65, 0.8];
    ws.models = vec![Model::Msn];
    ws.reps = 100;
    let ws_rows = summarize(&run_suite(&ws).unwrap());
    let mut msn_ok = true;
    let mut msn = Vec::new();
    for r in &ws_rows {
        msn_ok &= mse_of(r).is_some_and(|(m, _)| m > 0.8);
        msn.push(format!("ρ={} {}", r.rho1, fmt_mse(r)));
    }

    finish(
        "er fitness point (100x200, ρ=0.1, 100 reps)",
        lv_ok && nlv_ok && msn_ok,
        format!("{lv}; {nlv}; ws msn >0.8: {}", msn.join(", ")),
    );
}

#[test]
fn approximation_gap_largest_on_ba() {
    let _g = lock();
    let mut gaps = Vec::new();
    for graph in [GraphKind::BarabasiAlbert, GraphKind::ErdosRenyi, GraphKind::WattsStrogatz] {
        let mut cfg = SuiteConfig::new(Suite::Fitness, graph);
        cfg.densities = vec![0.5];
        cfg.reps = 50;
        let rows = summarize(&run_suite(&cfg).unwrap());
        let (base, base_hw) = mse_of(row(&rows, Model::Base, |_| true)).expect("base mse");
        // smallest approximation-minus-base gap, with its CI half-width
        let gap = Model::APPROXIMATIONS
            .iter()
            .filter_map(|&m| mse_of(row(&rows, m, |_| true)))
            .map(|(m, h)| (m - base, h + base_hw))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("approximation mse");
        gaps.push((graph.short_name(), gap));
    }
    let (_, (ba, ba_hw)) = gaps[0];
    let pass = gaps[1..].iter().all(|&(_, (g, hw))| ba - g > ba_hw + hw);
    let detail = gaps
        .iter()
        .map(|(name, (g, hw))| format!("{name} {g:.4}±{hw:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    finish("gap ordering (30x50, ρ=0.5, σ=0.33, 50 reps)", pass, format!("smallest gap {detail}"));
}

#[test]
fn mse_nondecreasing_in_output_noise() {
    let _g = lock();
    let mut cfg = SuiteConfig::new(Suite::Robustness, GraphKind::ErdosRenyi);
    cfg.reps = 50;
    let rows = summarize(&run_suite(&cfg).unwrap());
    let mut pass = true;
    let mut parts = Vec::new();
    for &model in &cfg.models {
        let series: Vec<Option<f64>> = cfg
            .output_noises
            .iter()
            .map(|&s| row(&rows, model, |r| r.sigma == s).trimmed_mse)
            .collect();
        let ok = series.iter().all(Option::is_some)
            && series.windows(2).all(|w| w[0].unwrap() <= w[1].unwrap());
        pass &= ok;
        let values: Vec<String> = series.iter().map(|v| v.map_or("n/a".into(), |v| format!("{v:.4e}"))).collect();
        parts.push(format!("{} [{}]{}", model.name(), values.join(", "), if ok { "" } else { " not monotone" }));
    }
    finish("noise monotonicity (er 30x50, 50 reps)", pass, parts.join("; "));
}

#[test]
fn exact_model_much_slower_than_approximations() {
    let _g = lock();
    let mut cfg = SuiteConfig::new(Suite::Timing, GraphKind::ErdosRenyi);
    cfg.sizes = vec![(100, 200)];
    let rows = summarize(&run_suite(&cfg).unwrap());
    let runtime = |m: Model| row(&rows, m, |_| true).mean_runtime_s;
    let approx: Vec<(Model, Option<f64>)> = Model::APPROXIMATIONS.iter().map(|&m| (m, runtime(m))).collect();
    let times: Vec<f64> = approx.iter().filter_map(|a| a.1).collect();
    let spread_ok = times.len() == approx.len();
    let (fastest, slowest) = times.iter().fold((f64::MAX, 0.0_f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let spread = slowest / fastest;
    let base = row(&rows, Model::Base, |_| true);
    let (ratio_ok, base_detail) = match base.mean_runtime_s {
        Some(t) => (t / slowest >= 10.0, format!("base/slowest approximation {:.1} (≥10)", t / slowest)),
        None => (false, format!("base could not run ({} of {} runs failed: dense product exceeds the memory cap)", base.failed, base.runs)),
    };

    // Same measurement at a size where the exact model fits in memory.
    let mut small = SuiteConfig::new(Suite::Timing, GraphKind::ErdosRenyi);
    small.sizes = vec![(50, 30)];
    let small_rows = summarize(&run_suite(&small).unwrap());
    let small_base = row(&small_rows, Model::Base, |_| true).mean_runtime_s.unwrap_or(f64::NAN);
    let small_slowest = Model::APPROXIMATIONS
        .iter()
        .filter_map(|&m| row(&small_rows, m, |_| true).mean_runtime_s)
        .fold(0.0_f64, f64::max);

    let times: Vec<String> = approx
        .iter()
        .map(|(m, t)| format!("{} {}", m.name(), t.map_or("n/a".into(), |t| format!("{t:.4}s"))))
        .collect();
    finish(
        "timing ratios (er 100x200, ρ=0.3)",
        ratio_ok && spread_ok && spread <= 2.0,
        format!(
            "{base_detail}; approximation spread {spread:.2} (≤2): {}; at 50x30 base/slowest = {:.0}",
            times.join(", "),
            small_base / small_slowest
        ),
    );
}

#[test]
fn nkp_pipeline_trends() {
    let _g = lock();
    let mut cfg = SuiteConfig::new(Suite::Nkp, GraphKind::ErdosRenyi);
    cfg.densities = vec![0.1];
    cfg.nkp_noises = vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.4, 0.6];
    cfg.models = vec![Model::BaseSvd, Model::LaplaceVec];
    cfg.reps = 10;
    let rows = summarize(&run_suite(&cfg).unwrap());
    let at = |m: Model, frac: f64| row(&rows, m, move |r| r.nkp_noise == frac);

    let violated = &cfg.nkp_noises[1..];
    let pre: Vec<f64> = violated.iter().map(|&f| at(Model::BaseSvd, f).mean_residual_pre.unwrap()).collect();
    let post: Vec<f64> = violated.iter().map(|&f| at(Model::BaseSvd, f).mean_residual_post.unwrap()).collect();
    let increasing = pre.windows(2).all(|w| w[1] > w[0]);
    let worst_gap = pre.iter().zip(&post).map(|(a, b)| (a - b).abs() / a).fold(0.0, f64::max);

    let mut fit = SuiteConfig::new(Suite::Fitness, GraphKind::ErdosRenyi);
    fit.densities = vec![0.1];
    fit.models = vec![Model::Base, Model::LaplaceVec];
    fit.reps = 10;
    let fit_rows = summarize(&run_suite(&fit).unwrap());
    let mut agree = true;
    let mut pairs = Vec::new();
    for (nkp_model, fit_model) in [(Model::BaseSvd, Model::Base), (Model::LaplaceVec, Model::LaplaceVec)] {
        let a = at(nkp_model, 0.0);
        let b = row(&fit_rows, fit_model, |_| true);
        let ok = match (mse_of(a), mse_of(b)) {
            (Some((ma, ha)), Some((mb, hb))) => (ma - mb).abs() <= ha + hb,
            _ => false,
        };
        agree &= ok;
        pairs.push(format!("{} {} vs {} {}", nkp_model.name(), fmt_mse(a), fit_model.name(), fmt_mse(b)));
    }

    let trend: Vec<String> = pre.iter().map(|v| format!("{v:.3}")).collect();
    finish(
        "nkp pipeline (er 30x50, ρ=0.1, 10 seeds)",
        increasing && worst_gap < 0.01 && agree,
        format!(
            "residual [{}] increasing={increasing}; worst pre/post gap {:.3}% (<1%); frac=0 vs fitness: {}",
            trend.join(", "),
            100.0 * worst_gap,
            pairs.join("; ")
        ),
    );
}

#[test]
fn end_to_end_identities() {
    let _g = lock();
    let mut worst_beta_zero = 0.0_f64;
    let mut worst_identity = 0.0_f64;
    for seed in 1..=5 {
        let d = small_dataset(seed);
        for kind in [BasisKind::ExactDense, BasisKind::LaplaceVec, BasisKind::NormLaplaceVec, BasisKind::Msn] {
            let Ok(basis) = build_basis(kind, &d.s1, &d.s2, Pairing::Sorted, usize::MAX) else { continue };
            let yhat = predict(&basis, 1.7, 0.0, d.r_test.view()).unwrap();
            worst_beta_zero = worst_beta_zero.max(max_abs_diff(yhat.as_slice().unwrap(), d.r_test.as_slice().unwrap()));
        }
        let exact = exact_kron_basis(&d.s1, &d.s2).unwrap();
        let (alpha, beta) = (d.spec.alpha, d.spec.beta);
        for (r, y) in [(&d.r_train, &d.y_train), (&d.r_test, &d.y_test)] {
            let yhat = predict(&exact, alpha, beta, r.view()).unwrap();
            worst_identity = worst_identity.max(max_abs_diff(yhat.as_slice().unwrap(), y.as_slice().unwrap()));
        }
    }
    finish(
        "end-to-end sanity",
        worst_beta_zero < 1e-10 && worst_identity < 1e-8,
        format!("β=0 predict vs R {worst_beta_zero:.2e} (<1e-10), generating-parameter predict vs Y {worst_identity:.2e} (<1e-8)"),
    );
}
