//! Running a configured experiment through the library runner, as the binary
//! does, and summarising the bound checks it produced.

use evoset::runner::{run, summarize, ExperimentConfig, Subcommand};

fn main() -> evoset::Result<()> {
    let (mut cfg, _) = ExperimentConfig::parse(
        "graph = tree3\n\
         c = 0.2\n\
         suite = exact\n\
         seed = 7\n",
    )?;
    let out = std::env::temp_dir().join("evoset-verify-example");
    cfg.set("out", out.to_str().expect("utf-8 temp dir"))?;
    let outcome = run(Subcommand::Verify, &cfg)?;
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    for (name, (checked, failed)) in summarize(&outcome.reports) {
        println!("{name:>24}: {checked:>6} checked, {failed} failed");
    }
    println!("exit code {}", outcome.exit_code);
    Ok(())
}
