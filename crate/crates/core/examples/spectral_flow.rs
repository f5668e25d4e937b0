//! `[2m](s)` over `(0, pi)` with crossings and near misses.

use std::f64::consts::PI;

use suq2::geometry;

fn main() -> suq2::Result<()> {
    let s: Vec<f64> = (1..=1439).map(|i| PI * i as f64 / 1440.0).collect();
    let f = geometry::spectral_flow(3.0, &s)?;
    println!("{} curves, bound ratio {:.15}", f.m.len(), f.bound_ratio());
    for k in 2..=6 {
        let at = PI / k as f64;
        let near = f.crossings_near(at, PI / 1440.0);
        println!("s = pi/{k}: {} crossings", near.len());
        for c in near.iter().take(4) {
            println!("  m = {} and {} ({:?})", c.m1, c.m2, c.kind);
        }
    }
    println!("{} near crossings below the gap threshold", f.near_crossings.len());
    for n in f.near_crossings.iter().take(5) {
        println!("  s = {:.5}: m = {} and {}, gap {:.2e}", n.s, n.m1, n.m2, n.gap);
    }
    Ok(())
}
