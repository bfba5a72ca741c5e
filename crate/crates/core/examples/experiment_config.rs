// Driving an experiment from a JSON config, as the `repsoc` binary does.

use std::fs;

use repsoc::runner::{run, RunOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    fs::write(
        dir.path().join("space.json"),
        r#"{"variant": "full", "issues": ["q"], "N": 3}"#,
    )?;
    fs::write(
        dir.path().join("config.json"),
        r#"{"experiment": "privilege-analysis", "space": "space.json"}"#,
    )?;
    let report = run(dir.path().join("config.json"), &RunOptions::default())?;
    for line in &report.lines {
        println!("{line}");
    }
    println!("files: {:?}", report.files);
    assert_eq!(report.summary["issues"]["q"]["cyclically_privileged"], true);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
