use std::path::PathBuf;

use zfcov::experiments::{run_sweep, write_csv, Status, SweepSpec, CSV_HEADER};
use zfcov::{coverage_probability, NetworkParams};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn shipped_specs_parse() {
    for name in ["threshold_alpha.toml", "density_subbands.toml", "subbands_density.toml", "ee_density.toml"] {
        let spec = SweepSpec::from_file(config(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        spec.validate().unwrap();
    }
    for name in ["defaults.toml", "rayleigh.toml"] {
        NetworkParams::from_file(config(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn infeasible_points_are_marked_not_dropped() {
    let densities = [1.0, 5.0, 10.0, 13.0, 20.0, 40.0];
    let spec = SweepSpec::from_toml_str(
        r#"
axis = "bs_density"
values = [1, 5, 10, 13, 20, 40]
metrics = ["coverage_analytic", "ee_analytic"]
[series]
field = "num_subbands"
values = [1, 2]
[base]
lambda_ue = 32.0
"#,
    )
    .unwrap();
    let table = run_sweep(&spec).unwrap();
    assert_eq!(table.rows.len(), 2 * 2 * densities.len());

    // K = λ_UE/(λ_BS L) users against M = max(1, round(λ_UE/λ_BS)) antennas
    let mut expected = 0;
    for l in [1.0, 2.0] {
        for d in densities {
            let ratio: f64 = 32.0 / d;
            if ratio / l > ratio.round().max(1.0) {
                expected += 2;
            }
        }
    }
    let infeasible = table.rows.iter().filter(|r| r.status == Status::Infeasible).count();
    assert!(expected > 0);
    assert_eq!(infeasible, expected);
    for r in &table.rows {
        assert_eq!(r.status == Status::Ok, r.result.is_finite(), "{r:?}");
    }
}

#[test]
fn coverage_grows_with_subbands() {
    let spec = SweepSpec::from_file(config("subbands_density.toml")).unwrap();
    let table = run_sweep(&spec).unwrap();
    for d in [1, 4, 8, 16] {
        let metric = format!("coverage_analytic@bs_density={d}");
        let cov: Vec<f64> = table.metric_rows(&metric).map(|r| r.result).collect();
        assert_eq!(cov.len(), 4, "{metric}");
        assert!(cov.windows(2).all(|w| w[1] >= w[0]), "{metric}: {cov:?}");
    }
}

#[test]
fn rows_match_direct_evaluation() {
    let spec = SweepSpec::from_file(config("density_subbands.toml")).unwrap();
    let table = run_sweep(&spec).unwrap();
    let row = table
        .metric_rows("coverage_analytic@num_subbands=2")
        .find(|r| r.value == 8.0)
        .unwrap();
    let direct = coverage_probability(&NetworkParams {
        lambda_bs: 8.0,
        num_subbands: 2,
        ..spec.base.clone()
    })
    .unwrap();
    assert_eq!(row.result, direct.value);
    assert_eq!(row.err, direct.abs_error_estimate);
}

#[test]
fn csv_layout() {
    let spec = SweepSpec::from_toml_str(
        r#"
axis = "threshold_db"
values = [0, 5]
metrics = ["coverage_analytic"]
"#,
    )
    .unwrap();
    let mut bytes = Vec::new();
    write_csv(&run_sweep(&spec).unwrap(), &mut bytes).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 3);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[..3], ["threshold_db", "0", "coverage_analytic"]);
    assert_eq!(fields[5], "ok");
    assert!(fields[3].len() <= 11, "{}", fields[3]);
}

#[test]
fn bad_specs_are_rejected() {
    for text in [
        "axis = \"pathloss_alpha\"\nvalues = [3, 4]\nmetrics = [\"coverage_analytic\"]",
        "axis = \"bs_density\"\nvalues = [1, 2]\nmetrics = [\"coverage_mc\"]",
        "axis = \"bs_density\"\nvalues = [2, 1]\nmetrics = [\"coverage_analytic\"]",
        "axis = \"bs_density\"\nvalues = []\nmetrics = [\"coverage_analytic\"]",
        "axis = \"antennas\"\nvalues = [1]\nmetrics = [\"coverage_analytic\"]",
    ] {
        let err = SweepSpec::from_toml_str(text).and_then(|s| s.validate()).unwrap_err();
        assert!(err.is_config(), "{text}: {err}");
    }
}
