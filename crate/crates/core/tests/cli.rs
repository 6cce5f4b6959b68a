use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use strobocat::cli::{parse_config, render_csv, run, MIN_AUTO_TRUNC};
use strobocat::evolve::{propagate_driven_with, DrivenOptions};
use strobocat::fock::{coherent_state, truncation_requirement};
use strobocat::spin_boson::SystemParams;
use strobocat::Error;

const SMALL_FIDELITY: &str = r#"
[scenario]
name = "sweep-fidelity"
n_pulses = [2, 4]

[sweep]
variable = "eps_perp"
start = 20.0
stop = 60.0
step = 20.0
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strobocat"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn csv_is_identical_across_runs_and_thread_counts() {
    let cfg = parse_config(SMALL_FIDELITY).unwrap();
    let a = render_csv(&run(&cfg, Some(1)).unwrap()).unwrap();
    let b = render_csv(&run(&cfg, Some(1)).unwrap()).unwrap();
    let c = render_csv(&run(&cfg, Some(4)).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.starts_with("eps_perp,fidelity_n2,fidelity_n4\n"), "{a}");
    assert_eq!(a.lines().count(), 4);
}

#[test]
fn bad_configs_are_config_errors_naming_the_field() {
    let cases: &[(&str, &str)] = &[
        ("[scenario]\nname = \"amplify-ideal\"\n[params]\nomega0 = -1.0\n", "omega0"),
        ("[scenario]\nname = \"amplify-ideal\"\n[params]\nn_trunc = 8\n", "params.n_trunc"),
        ("[scenario]\nname = \"amplify-ideal\"\nn_pulses = 0\n", "n_pulses"),
        (
            "[scenario]\nname = \"sweep-fidelity\"\n[sweep]\nvariable = \"eps_perp\"\nstart = 10.0\nstop = 20.0\nstep = 0.0\n",
            "sweep.step",
        ),
        (
            "[scenario]\nname = \"sweep-fidelity\"\n[sweep]\nvariable = \"eps_perp\"\nstart = 1.0\nstop = 2.0\nstep = 0.5\n",
            "eps_perp",
        ),
        ("[scenario]\nname = \"detect\"\n[params]\neps_d = 0.0\n", "eps_d"),
        ("[scenario]\nname = \"saturation\"\n[params]\nq_factor = inf\n", "q_factor"),
        (
            "[scenario]\nname = \"sweep-detect\"\neps_z_values = [3.0, 4.0]\n[sweep]\nvariable = \"eps_z\"\nstart = 1.0\nstop = 2.0\nstep = 1.0\n",
            "eps_z",
        ),
    ];
    for (text, field) in cases {
        let err = parse_config(text).expect_err(text);
        assert!(err.is_config_error(), "{text}: {err}");
        assert!(err.to_string().contains(field), "{text}: `{err}` should name {field}");
    }
}

#[test]
fn parse_errors_carry_a_position() {
    let err = parse_config("[scenario]\nname = \"amplify-ideal\"\nbogus = 1\n").unwrap_err();
    match err {
        Error::Parse { line, .. } => assert_eq!(line, 3),
        other => panic!("{other}"),
    }
    assert!(parse_config("[scenario]\nname = \"nope\"\n").unwrap_err().is_config_error());
}

#[test]
fn non_convergence_is_classified() {
    let p = SystemParams {
        eps_z: 4.0,
        eps_d: 1.0,
        omega_d: 4.0,
        n_trunc: 24,
        ..SystemParams::default()
    };
    let psi = p
        .composite()
        .product(
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            &coherent_state(num_complex::Complex64::new(0.0, 0.0), p.fock()).unwrap(),
        )
        .unwrap();
    let opts = DrivenOptions {
        tolerance: 1e-300,
        max_halvings: 1,
        initial_steps: Some(2),
        ..DrivenOptions::default()
    };
    let err = propagate_driven_with(&p, 0.0, 3.0, &psi, &opts).unwrap_err();
    assert!(err.is_convergence_error(), "{err}");
    assert!(!err.is_config_error());
    let wrapped = Error::AtGridPoint {
        index: 0,
        variable: "eps_d".into(),
        value: 1.0,
        source: Box::new(err),
    };
    assert!(wrapped.is_convergence_error());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn automatic_cutoff_covers_the_largest_amplitude(
        scenario in prop::sample::select(vec!["amplify-ideal", "cohere", "detect", "two-mode", "lindblad"]),
        ns in prop::collection::vec(1u32..=16, 1..4),
        lambda0 in 0.05f64..0.3,
    ) {
        let list = ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
        let mut text = format!("[scenario]\nname = \"{scenario}\"\nn_pulses = [{list}]\n[params]\nlambda0 = {lambda0}\neps_z = 4.0\n");
        if scenario == "lindblad" {
            text.push_str("q_factor = 1000.0\n");
        }
        let cfg = match parse_config(&text) {
            Ok(cfg) => cfg,
            Err(e) => {
                // two oscillators cap the cutoff, so large amplitudes are refused
                prop_assert_eq!(scenario, "two-mode");
                prop_assert!(e.is_config_error() && e.to_string().contains("n_trunc"), "{}", e);
                return Ok(());
            }
        };
        let need = truncation_requirement(cfg.alpha_max());
        prop_assert_eq!(cfg.params.n_trunc, need.max(MIN_AUTO_TRUNC));
        let nmax = *ns.iter().max().unwrap() as f64;
        let single = 2.0 * nmax * lambda0 / 2.0;
        prop_assert!(cfg.alpha_max() >= single - 1e-12);
    }
}

#[test]
fn binary_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.toml", SMALL_FIDELITY);
    let bad = write(dir.path(), "bad.toml", "[scenario]\nname = \"sweep-fidelity\"\n[params]\nn_trunc = 8\n");

    let st = bin().args(["validate", "--config"]).arg(&good).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let st = bin().args(["validate", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin()
        .args(["validate", "--config"])
        .arg(dir.path().join("missing.toml"))
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));

    let out_csv = dir.path().join("a.csv");
    let st = bin()
        .args(["run", "--threads", "1", "--config"])
        .arg(&good)
        .arg("--out")
        .arg(&out_csv)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(csv, render_csv(&run(&parse_config(SMALL_FIDELITY).unwrap(), None).unwrap()).unwrap());

    let out = bin()
        .args(["run", "--format", "json", "--config"])
        .arg(&good)
        .env("STROBOCAT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
    assert_eq!(json["metadata"]["tool"], "strobocat");

    let st = bin().args(["run", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(st.code(), Some(2));
}
