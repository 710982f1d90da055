//! Certifying an entropy constant C over a range of n, and what happens when
//! C is too large.

use evoset::bounds::certify_entropy_constant;
use evoset::{Error, GraphFamily};

fn main() -> evoset::Result<()> {
    let tree = GraphFamily::regular_tree(3)?;
    let root = tree.origin();
    let cert = certify_entropy_constant(&tree, std::slice::from_ref(&root), 1, 120, 0.2)?;
    println!(
        "tree: C = {} holds for n in [{}, {}], min slack E_n - Cn = {:.4}",
        cert.c, cert.n_lo, cert.n_hi, cert.min_slack
    );

    match certify_entropy_constant(&tree, &[root], 1, 120, 0.3) {
        Err(Error::CertificationFailed { violations }) => {
            println!("tree: C = 0.3 fails at {} values of n", violations.len());
        }
        other => println!("tree: C = 0.3 unexpectedly gave {other:?}"),
    }

    let line = GraphFamily::IntegerLine;
    match certify_entropy_constant(&line, &[line.origin()], 1, 200, 0.05) {
        Ok(c) => println!("z: C = 0.05 holds on [1, 200] (min slack {:.4})", c.min_slack),
        Err(e) => println!("z: {e}"),
    }
    Ok(())
}
