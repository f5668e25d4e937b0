//! Level sections of the Casimir surface and the connectivity transition.

use std::f64::consts::PI;

use suq2::geometry::{self, Connectivity};
use suq2::Deformation;

fn main() -> suq2::Result<()> {
    for s in [0.4, 0.8, 0.9, 1.0, 1.4, 2.0, 2.8] {
        let d = Deformation::new(s)?;
        let line: String = [0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&c| {
                let sec = geometry::classify_section(&d, c).unwrap();
                let tag = if sec.connectivity == Connectivity::Connected { "connected" } else { "split" };
                format!("  c={c}: {tag}/{}", sec.components)
            })
            .collect();
        println!("s = {s:.2}{line}");
    }

    let s_grid: Vec<f64> = (1..2000).map(|i| PI * i as f64 / 2000.0).collect();
    for c in [0.5, 1.0, 2.0, 5.0] {
        let tr = geometry::topology_transition(c, &s_grid)?;
        println!(
            "c = {c}: transition s* = {:?} (closed form {:.6})",
            tr.s_star,
            geometry::transition_closed_form(c)
        );
    }
    Ok(())
}
