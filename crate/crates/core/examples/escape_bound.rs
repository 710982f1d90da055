//! Escape probabilities from balls in the 3-regular tree against the lower
//! bound driven by a certified entropy constant.

use evoset::bounds::{certify_entropy_constant, check_escape_bound, check_q_escape_bound};
use evoset::GraphFamily;

fn main() -> evoset::Result<()> {
    let g = GraphFamily::regular_tree(3)?;
    let root = g.origin();
    let cert = certify_entropy_constant(&g, std::slice::from_ref(&root), 1, 40, 0.2)?;
    println!("{:>3} {:>3} {:>6} {:>10} {:>10} status", "n", "r", "|A|", "escape", "bound");
    for n in [10, 15, 20, 30] {
        for r in 1..=3 {
            let a = g.ball(&root, r, 10_000)?;
            let rep = check_escape_bound(&g, &root, n, &a, &cert)?;
            let status = if rep.vacuous {
                "vacuous"
            } else if rep.pass {
                "ok"
            } else {
                "FAIL"
            };
            println!("{n:>3} {r:>3} {:>6} {:>10.5} {:>10.5} {status}", a.len(), rep.lhs, rep.rhs);
        }
    }

    let s = g.ball(&root, 1, 100)?;
    let a = g.ball(&root, 2, 100)?;
    let rep = check_q_escape_bound(&g, &s, 20, &a, &cert)?;
    println!("set version, S = B(1), A = B(2), n = 20: {} >= {} ({})", rep.lhs, rep.rhs, rep.pass);
    Ok(())
}
