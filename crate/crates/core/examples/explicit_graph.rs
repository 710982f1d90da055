//! A finite graph from an edge list: entropy, return probabilities and
//! the evolving-set process, all through the same interfaces.

use evoset::evolving::EvolvingSetProcess;
use evoset::graph::ExplicitGraph;
use evoset::walk::{entropy_series, mc_return_frequency, ExactWalk};
use evoset::GraphFamily;

const PETERSEN: &str = "\
# outer cycle
a b
b c
c d
d e
e a
# spokes
a f
b g
c h
d i
e j
# inner pentagram
f h
h j
j g
g i
i f
";

fn main() -> evoset::Result<()> {
    let g = GraphFamily::explicit(ExplicitGraph::parse_edge_list(PETERSEN)?);
    let x0 = g.parse_vertex("a")?;
    let series = entropy_series(&g, &x0, 12)?;
    println!(
        "entropy: E_1 = {:.4}, E_12 = {:.4}, ln 10 = {:.4}",
        series.entropy(1).unwrap(),
        series.entropy(12).unwrap(),
        10f64.ln()
    );

    let walk = ExactWalk::centered(&g, &x0)?;
    let exact = walk.return_probability(&x0, 10)?;
    let mc = mc_return_frequency(&g, &x0, 10, 20_000, 3)?;
    println!("return within 10 steps: exact {exact:.5}, simulated {:.5} ± {:.5}", mc.mean, mc.stderr);

    let process = EvolvingSetProcess::centered(&g, &x0, 0.5)?;
    let mut rng = evoset::rng::seed_stream(1, 0);
    let traj = process.simulate(&x0, 6, &mut rng)?;
    for r in &traj.records {
        println!("m = {} T = {:>3} |S| = {:>2} pi(S) = {}", r.m, r.time, r.set_size, r.pi_mass);
    }
    Ok(())
}
