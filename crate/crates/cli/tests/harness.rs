use std::process::Command;

use kronreg::GraphKind;
use kronreg_cli::output::plot_series;
use kronreg_cli::record::{read_records, write_records};
use kronreg_cli::{run_suite, summarize, write_outputs, Model, Suite, SuiteConfig};

fn small(suite: Suite) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(suite, GraphKind::ErdosRenyi);
    cfg.sizes = vec![(6, 8)];
    cfg.densities = vec![0.5];
    cfg.reps = 4;
    cfg
}

#[test]
fn runs_are_deterministic_apart_from_runtime() {
    let cfg = small(Suite::Fitness);
    let strip = |mut v: Vec<kronreg_cli::RunRecord>| {
        v.iter_mut().for_each(|r| r.runtime_s = None);
        v
    };
    let a = strip(run_suite(&cfg).unwrap());
    let b = strip(run_suite(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.len(), cfg.models.len() * cfg.reps);
}

#[test]
fn records_are_ordered_by_model_then_rep() {
    let cfg = small(Suite::Fitness);
    let recs = run_suite(&cfg).unwrap();
    for (i, r) in recs.iter().enumerate() {
        assert_eq!(r.model, cfg.models[i / cfg.reps].name());
        assert_eq!(r.rep, (i % cfg.reps) as u64);
    }
}

#[test]
fn csv_round_trip() {
    let mut cfg = small(Suite::Nkp);
    cfg.nkp_noises = vec![0.0, 0.1];
    let recs = run_suite(&cfg).unwrap();
    let mut buf = Vec::new();
    write_records(&mut buf, &recs).unwrap();
    assert_eq!(read_records(buf.as_slice()).unwrap(), recs);
    let header = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with(
        "suite,graph_type,n1,n2,rho1,rho2,sigma,nkp_noise,model,rep,seed,mse,runtime_s,iterations"
    ));
}

#[test]
fn beta_zero_gives_unstructured_mse() {
    let mut cfg = small(Suite::Fitness);
    cfg.beta_zero = true;
    cfg.models = vec![Model::LaplaceVec];
    let recs = run_suite(&cfg).unwrap();
    for r in &recs {
        let spec = {
            let mut s = kronreg::DatasetSpec::new(GraphKind::ErdosRenyi, 6, 8, 0.5);
            s.output_noise = cfg.output_noises[0];
            s
        };
        let d = kronreg::synthdata::gen_dataset(&spec, kronreg::RngStream::new(cfg.base_seed, r.rep)).unwrap();
        let expected = kronreg::gcrf::mse(d.r_test.view(), d.y_test.view()).unwrap();
        assert!((r.mse.unwrap() - expected).abs() < 1e-10 * expected);
    }
}

#[test]
fn failures_are_recorded_not_dropped() {
    let mut cfg = small(Suite::Fitness);
    cfg.dense_cap = 10;
    let recs = run_suite(&cfg).unwrap();
    let base: Vec<_> = recs.iter().filter(|r| r.model == "base").collect();
    assert!(base.iter().all(|r| r.failed && r.mse.is_none() && r.error.contains("cap")));
    let rows = summarize(&recs);
    let row = rows.iter().find(|r| r.model == "base").unwrap();
    assert_eq!(row.failed, cfg.reps);
    assert!(row.trimmed_mse.is_none());
}

#[test]
fn nkp_records_carry_residuals() {
    let mut cfg = small(Suite::Nkp);
    cfg.nkp_noises = vec![0.0, 0.2];
    let recs = run_suite(&cfg).unwrap();
    for r in &recs {
        let (pre, post) = (r.residual_pre.unwrap(), r.residual_post.unwrap());
        if r.nkp_noise == 0.0 {
            assert!(pre < 1e-8 && post < 1e-8);
        } else {
            assert!(pre > 0.0 && post >= pre - 1e-12);
        }
    }
}

#[test]
fn outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(Suite::Robustness);
    cfg.output_noises = vec![0.0, 0.33];
    let recs = run_suite(&cfg).unwrap();
    let rows = write_outputs(dir.path(), &recs).unwrap();
    assert_eq!(rows.len(), cfg.models.len() * 2);
    assert!(dir.path().join("runs.csv").exists());
    assert!(dir.path().join("summary.csv").exists());
    let series = plot_series(&rows);
    assert_eq!(series.len(), cfg.models.len());
    for (name, pts) in series {
        assert_eq!(pts.len(), 2);
        let text = std::fs::read_to_string(dir.path().join("plotdata").join(format!("{name}.csv"))).unwrap();
        assert!(text.starts_with("sigma,trimmed_mse"));
    }
}

#[test]
fn binary_reports_failure_with_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_kronreg");
    let status = Command::new(bin)
        .args(["bench", "fitness", "--sizes", "5x6", "--densities", "0.6", "--reps", "3", "--models", "base,laplace_vec"])
        .args(["--dense-cap", "10", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let ok = Command::new(bin)
        .args(["bench", "fitness", "--sizes", "5x6", "--densities", "0.6", "--reps", "3", "--models", "base,laplace_vec", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let recs = read_records(std::fs::File::open(dir.path().join("runs.csv")).unwrap()).unwrap();
    assert_eq!(recs.len(), 6);
}

#[test]
fn binary_exports_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_kronreg"))
        .args(["dataset", "--size", "5x6", "--density", "0.5", "--violation", "0.1", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["S1.csv", "S2.csv", "S.csv", "y_train.csv", "R_test.csv", "meta.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
