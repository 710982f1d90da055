//! Entropy growth E_n and E_n/n of simple random walk on the lattices and the
//! 3-regular tree.

use evoset::walk::entropy_series;
use evoset::GraphFamily;

fn main() -> evoset::Result<()> {
    let n_max = 60;
    let graphs =
        [GraphFamily::IntegerLine, GraphFamily::Lattice2D, GraphFamily::Lattice3D, GraphFamily::regular_tree(3)?];
    println!("{:>8} {:>6} {:>10} {:>10} {:>10}", "graph", "n", "E_n", "E_n/n", "E_n-E_n-1");
    for g in &graphs {
        let series = entropy_series(g, &g.origin(), n_max)?;
        for n in [10, 20, 40, 60] {
            println!(
                "{:>8} {n:>6} {:>10.4} {:>10.4} {:>10.4}",
                g.to_string(),
                series.entropy(n).unwrap(),
                series.rate(n).unwrap(),
                series.increment(n).unwrap()
            );
        }
    }
    Ok(())
}
