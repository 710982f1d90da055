//! The walk transition probability p^t(x0, y) recovered from evolving-set
//! trajectories on Z and on the 3-regular tree.

use evoset::evolving::EvolvingSetProcess;
use evoset::{GraphFamily, VertexId};

fn main() -> evoset::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let line = GraphFamily::IntegerLine;
    let tree = GraphFamily::regular_tree(3)?;
    let cases: [(&GraphFamily, &str, usize); 5] =
        [(&line, "z:0", 10), (&line, "z:2", 12), (&line, "z:0", 20), (&tree, "t3:", 8), (&tree, "t3:0", 9)];
    for (g, y, t) in cases {
        let x0 = g.origin();
        let y: VertexId = g.parse_vertex(y)?;
        let process = EvolvingSetProcess::centered(g, &x0, 1.0)?;
        let r = process.duality_check(&x0, &y, t, trials, 1)?;
        println!(
            "{g} y = {y} t = {t}: exact {:.6}, estimate {:.6} ± {:.6} ({})",
            r.extras["exact"],
            r.extras["estimate"],
            r.extras["stderr"],
            if r.pass { "agree" } else { "disagree" }
        );
    }
    Ok(())
}
