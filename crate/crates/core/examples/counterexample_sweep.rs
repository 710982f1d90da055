//! Per-start entropy rates and recurrence diagnostics on a truncated
//! pendant-tower graph.

use evoset::counterexample::{
    build_counterexample, default_starts, per_start_entropy_rates, profiles_to_csv, rate_ordering,
    recurrence_diagnostics,
};
use evoset::VertexId;

fn main() -> evoset::Result<()> {
    let g = build_counterexample(12, 8)?;
    println!("graph {g}, {} vertices", g.vertex_count().unwrap_or_default());

    let profiles = per_start_entropy_rates(&g, &default_starts(&g)?, 40)?;
    print!("{}", profiles_to_csv(&profiles));
    let order: Vec<String> = rate_ordering(&profiles).iter().map(ToString::to_string).collect();
    println!("ordering by rate: {}", order.join(" > "));

    let diag = recurrence_diagnostics(&g, &VertexId::Backbone(1), &[1_000, 100_000, 1_000_000], 2_000, 3)?;
    for r in &diag.returns {
        println!(
            "horizon {:>8}: return frequency {:.4} ± {:.4} (exact {:.6}), green sum {:?}",
            r.horizon, r.frequency.mean, r.frequency.stderr, r.exact, r.green_partial_sum
        );
    }
    println!(
        "backbone moves: {} up, {} down (balanced: {}); resistance 1 -> N = {}",
        diag.backbone.up, diag.backbone.down, diag.backbone.balanced, diag.backbone_resistance
    );
    Ok(())
}
