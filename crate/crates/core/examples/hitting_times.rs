//! Worst-case expected hitting times on full binary trees and paths.

use evoset::counterexample::{check_hitting_time_bound, check_path_hitting_time, full_binary_tree, tree_hitting_times};

fn main() -> evoset::Result<()> {
    for r in check_hitting_time_bound(&[7, 15, 31, 63, 1023, 65535])? {
        println!("binary tree i = {:>6}: max E tau = {:>12} <= 2i^2 = {:>12}", r.inputs["i"], r.lhs, r.rhs);
    }
    for i in [2, 5, 10, 100] {
        let r = check_path_hitting_time(i)?;
        println!("path i = {i:>3}: end-to-end {} = (i-1)^2 = {}", r.lhs, r.extras["expected"]);
    }
    let adj = full_binary_tree(15)?;
    let leaf_to_root = tree_hitting_times(&adj, 0)?[14];
    let root_to_leaf = tree_hitting_times(&adj, 14)?[0];
    println!("15-vertex tree: leaf -> root {leaf_to_root}, root -> leaf {root_to_leaf}");
    Ok(())
}
