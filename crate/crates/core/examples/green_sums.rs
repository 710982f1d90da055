//! Green's-function partial sums: recurrent line, transient lattice and tree.

use evoset::walk::ExactWalk;
use evoset::GraphFamily;

fn main() -> evoset::Result<()> {
    for (name, g, horizon) in [
        ("z", GraphFamily::IntegerLine, 200),
        ("z3", GraphFamily::Lattice3D, 100),
        ("tree3", GraphFamily::regular_tree(3)?, 80),
    ] {
        let o = g.origin();
        let series = ExactWalk::centered(&g, &o)?.green_series(&o, &o, horizon)?;
        let sums = series.partial_sums();
        let marks: Vec<String> = [10, 20, 40, 80, 100, 200]
            .into_iter()
            .filter(|&t| t <= horizon)
            .map(|t| format!("S_{t} = {:.6}", sums[t]))
            .collect();
        println!("{name:>6}: {}", marks.join(", "));
    }

    // Return probabilities on Z^3 decay like t^(-3/2) on even times.
    let z3 = GraphFamily::Lattice3D;
    let o = z3.origin();
    let series = ExactWalk::centered(&z3, &o)?.green_series(&o, &o, 100)?;
    if let Some(limit) = series.extrapolated_limit(1.5, 2) {
        println!("    z3: S_100 + tail = {limit:.4}");
    }
    Ok(())
}
