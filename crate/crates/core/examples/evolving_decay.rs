//! Evolving-set decay on the 3-regular tree: one exact superstep and the
//! Monte Carlo profile of E sqrt(pi(S_Tm)).

use evoset::evolving::EvolvingSetProcess;
use evoset::GraphFamily;

fn main() -> evoset::Result<()> {
    let g = GraphFamily::regular_tree(3)?;
    let root = g.origin();
    let process = EvolvingSetProcess::centered(&g, &root, 0.2)?;

    let start = process.start_set(&root)?;
    let levels = process.scheduled_levels(&start)?;
    println!("first superstep: L = {}, {} levels", levels.steps, levels.levels.len());
    println!("  E pi(S~)       = {:.12} (pi(S) = {})", levels.expected(|x| x), levels.base_mass);
    println!(
        "  E sqrt(pi(S~)) = {:.6} <= {:.6}",
        levels.expected(f64::sqrt),
        process.alpha() * levels.base_mass.sqrt()
    );

    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let profile = process.decay_profile(&root, 10, trials, 7)?;
    print!("{}", profile.to_csv());
    Ok(())
}
