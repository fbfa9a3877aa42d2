use std::path::Path;

use betasigma::cli::{run, EXIT_INPUT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK, THREADS_ENV};
use betasigma::dersnr::der_snr_sigma;
use betasigma::io::parse_result_json;
use betasigma::synth::{gaussian_noise, SimRng};
use rand::SeedableRng;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["betasigma"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_series(dir: &Path, name: &str, y: &[f64], with_t: bool) -> String {
    let mut text = String::from("# test series\n");
    for (i, v) in y.iter().enumerate() {
        if with_t {
            text.push_str(&format!("{} {v}\n", i as f64 * 0.5));
        } else {
            text.push_str(&format!("{v}\n"));
        }
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn noisy(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = SimRng::seed_from_u64(seed);
    gaussian_noise(&mut rng, n, 0.2)
        .into_iter()
        .enumerate()
        .map(|(i, e)| 5.0 + (i as f64 / 40.0).sin() + e)
        .collect()
}

#[test]
fn default_estimate_equals_dersnr() {
    let dir = tempfile::tempdir().unwrap();
    let y = noisy(1, 800);
    let file = write_series(dir.path(), "a.dat", &y, true);
    let (code, out, err) = invoke(&["estimate", &file]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rec = parse_result_json(out.trim()).unwrap();
    let expected = der_snr_sigma(&y).unwrap();
    assert!((rec.sigma_hat - expected).abs() <= 1e-8 * expected);
    assert_eq!((rec.order, rec.jump), (1, 2));
    assert!(rec.snr.unwrap() > 0.0);
}

#[test]
fn missing_file_reports_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_series(dir.path(), "good.dat", &noisy(2, 300), false);
    let missing = dir.path().join("nope.dat").to_string_lossy().into_owned();
    let (code, out, err) = invoke(&["estimate", &missing, &good]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(err.contains("nope.dat"), "{err}");
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn pathological_file_does_not_converge() {
    let dir = tempfile::tempdir().unwrap();
    let y: Vec<f64> = (0..1000)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let file = write_series(dir.path(), "alt.dat", &y, false);
    let (code, out, _) = invoke(&["auto", &file]);
    assert_eq!(code, EXIT_NOT_CONVERGED);
    let rec = parse_result_json(out.trim()).unwrap();
    assert_eq!(rec.converged, Some(false));
    assert!(rec.flags.iter().any(|f| f == "not_converged"));
}

#[test]
fn output_is_byte_stable_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<String> = (0..6)
        .map(|k| write_series(dir.path(), &format!("s{k}.dat"), &noisy(10 + k, 500), true))
        .collect();
    let mut args = vec!["auto", "--format", "tsv"];
    args.extend(files.iter().map(String::as_str));
    std::env::set_var(THREADS_ENV, "1");
    let (code, first, _) = invoke(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first.lines().count(), 7);
    for threads in ["2", "4", "8"] {
        std::env::set_var(THREADS_ENV, threads);
        assert_eq!(invoke(&args).1, first);
    }
    std::env::remove_var(THREADS_ENV);
    // order of output follows the argument order
    let mut rev = vec!["auto", "--format", "tsv"];
    rev.extend(files.iter().rev().map(String::as_str));
    let reversed = invoke(&rev).1;
    let a: Vec<&str> = first.lines().skip(1).collect();
    let mut b: Vec<&str> = reversed.lines().skip(1).collect();
    b.reverse();
    assert_eq!(a, b);
}

#[test]
fn positions_sampling_flag() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "t.dat", &noisy(3, 400), true);
    let (code, out, err) = invoke(&[
        "estimate",
        "--sampling",
        "positions",
        "--mode",
        "independent",
        "--estimator",
        "mv",
        &file,
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let rec = parse_result_json(out.trim()).unwrap();
    assert!((rec.sigma_hat - 0.2).abs() < 0.05);
}

#[test]
fn bad_flag_is_an_input_error() {
    let (code, _, err) = invoke(&["estimate", "--mode", "sideways", "x.dat"]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(!err.is_empty());
}

#[test]
fn reproduce_efficiency_table() {
    let (code, out, _) = invoke(&["reproduce", "--table", "fig1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().count() >= 11);
}

#[test]
fn verbose_auto_prints_trace() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_series(dir.path(), "v.dat", &noisy(4, 600), false);
    let (code, _, err) = invoke(&["auto", "--verbose", &file]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("N=0"), "{err}");
}
