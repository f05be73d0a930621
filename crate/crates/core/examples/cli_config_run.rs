// Drives the command-line `verify` pipeline from a JSON config written to
// a scratch directory, then reads back the report.
//
// Run with `cargo run --example cli_config_run`.

use vlasov_bridge::cli::{cmd_verify, RunArgs, RunConfig};
use vlasov_bridge::Result;

pub struct ConfigRun {
    pub pass: bool,
    pub verdicts: Vec<String>,
    pub files: Vec<String>,
}

pub fn run_example() -> Result<ConfigRun> {
    let dir = tempfile::tempdir()?;
    let config = dir.path().join("run.json");
    let out = dir.path().join("out");
    let text = serde_json::json!({
        "scenario": { "name": "example2", "q": 1.0, "r0": 1.0 },
        "times": [0.0, 0.5, 1.0],
        "output_dir": out,
        "emit": ["agreement", "sphere_trajectory"],
        "tolerances": { "agree": 1e-6 }
    });
    std::fs::write(&config, text.to_string())?;
    let args = RunArgs {
        config: Some(config),
        ..RunArgs::default()
    };
    let cfg = RunConfig::resolve(&args)?;
    let (pass, report) = cmd_verify(&cfg)?;
    let verdicts = report["per_time"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| r["agreement"]["verdict"].as_str().unwrap_or("?").to_owned())
                .collect()
        })
        .unwrap_or_default();
    let mut files: Vec<String> = std::fs::read_dir(&out)?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    files.sort();
    Ok(ConfigRun {
        pass,
        verdicts,
        files,
    })
}

fn main() -> Result<()> {
    let run = run_example()?;
    println!("pass: {}", run.pass);
    println!("verdicts: {:?}", run.verdicts);
    println!("files: {:?}", run.files);
    Ok(())
}
