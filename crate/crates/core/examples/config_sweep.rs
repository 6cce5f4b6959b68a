//! Running a TOML configuration from code, the same path the `strobocat`
//! binary takes.

use strobocat::cli::{parse_config, render_csv, run};

const CONFIG: &str = r#"
[scenario]
name = "sweep-fidelity"
n_pulses = [4, 12]

[sweep]
variable = "eps_perp"
start = 20.0
stop = 80.0
step = 20.0
"#;

fn main() -> strobocat::Result<()> {
    let config = parse_config(CONFIG)?;
    eprintln!("n_trunc = {} (auto: {})", config.params.n_trunc, config.n_trunc_auto);
    let result = run(&config, None)?;
    print!("{}", render_csv(&result)?);

    match parse_config("[scenario]\nname = \"detect\"\n[params]\neps_d = -1.0\n") {
        Err(e) => eprintln!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
